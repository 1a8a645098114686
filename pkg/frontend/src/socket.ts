/**
 * Websocket transport to the teleop service: connect/disconnect lifecycle,
 * JSON send, parsed-message callback, auto-reconnect with backoff (1s -> 15s).
 */

import { ClientMessage, ServerMessage, parseServerMessage } from "./protocol.js";

export type ConnectionState = "connected" | "disconnected" | "reconnecting";

export interface TeleopSocketOptions {
  url: string;
  onMessage: (msg: ServerMessage) => void;
  onStateChange: (state: ConnectionState) => void;
}

const BACKOFF_BASE_MS = 1000;
const BACKOFF_MAX_MS = 15000;

export class TeleopSocket {
  private ws: WebSocket | null = null;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private attempt = 0;
  private shouldReconnect = false;

  constructor(private options: TeleopSocketOptions) {}

  connect(): void {
    this.shouldReconnect = true;
    this.open();
  }

  disconnect(): void {
    this.shouldReconnect = false;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    this.ws?.close();
    this.ws = null;
    this.options.onStateChange("disconnected");
  }

  /** Send a protocol message; drops silently when not connected. */
  send(msg: ClientMessage): void {
    if (this.ws?.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(msg));
    }
  }

  private open(): void {
    this.ws = new WebSocket(this.options.url);
    this.ws.onopen = () => {
      this.attempt = 0;
      this.options.onStateChange("connected");
    };
    this.ws.onmessage = (event: MessageEvent) => {
      const msg = parseServerMessage(String(event.data));
      if (msg !== null) {
        this.options.onMessage(msg);
      } else {
        console.error("unrecognized server frame:", event.data);
      }
    };
    this.ws.onclose = () => {
      this.ws = null;
      if (this.shouldReconnect) {
        this.options.onStateChange("reconnecting");
        const delay = Math.min(BACKOFF_BASE_MS * 2 ** this.attempt, BACKOFF_MAX_MS);
        this.attempt += 1;
        this.reconnectTimer = setTimeout(() => {
          this.reconnectTimer = null;
          this.open();
        }, delay);
      } else {
        this.options.onStateChange("disconnected");
      }
    };
  }
}

export function defaultServiceUrl(loc: { protocol: string; host: string }): string {
  const scheme = loc.protocol === "https:" ? "wss:" : "ws:";
  return `${scheme}//${loc.host}/ws`;
}
