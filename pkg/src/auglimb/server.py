"""Websocket service around a teleop session.

One asyncio task owns the session: it drains queued client commands in arrival
order, ticks, and broadcasts the state update.  Each client gets an outbound
queue pumped by its own sender task, so a slow client drops frames instead of
stalling the loop.  The session outlives disconnects; the operator can
reconnect.
"""

from __future__ import annotations

import asyncio
import json
from collections import deque
from contextlib import asynccontextmanager

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .teleop import Session, command, model_message, tick

_QUEUE_LIMIT = 256


class _Hub:
    def __init__(self, session: Session):
        self.session = session
        self.clients: set[asyncio.Queue] = set()
        self.commands: deque = deque()  # (client queue, parsed message)

    def push(self, q: asyncio.Queue, msg: dict) -> None:
        if q.full():
            try:
                q.get_nowait()  # drop the oldest frame for this client
            except asyncio.QueueEmpty:
                pass
        q.put_nowait(msg)

    def step(self) -> None:
        """One tick boundary: apply pending commands in order, tick, broadcast."""
        while self.commands:
            q, msg = self.commands.popleft()
            reply = command(self.session, msg)
            if reply is not None and q in self.clients:
                self.push(q, reply)
        update = tick(self.session)
        for q in self.clients:
            self.push(q, update)


def create_app(session: Session, static_dir: str | None = None) -> FastAPI:
    hub = _Hub(session)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(_tick_loop(hub))
        try:
            yield
        finally:
            task.cancel()
            try:
                await task
            except asyncio.CancelledError:
                pass

    app = FastAPI(lifespan=lifespan)
    app.state.hub = hub

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        outbox: asyncio.Queue = asyncio.Queue(maxsize=_QUEUE_LIMIT)
        hub.clients.add(outbox)
        hub.push(outbox, model_message(session))
        sender = asyncio.create_task(_pump(outbox, ws))
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = json.loads(text)
                except ValueError:
                    hub.push(
                        outbox,
                        {"type": "error", "code": "badMessage", "detail": "frame is not valid JSON"},
                    )
                    continue
                hub.commands.append((outbox, msg))
        except WebSocketDisconnect:
            pass
        finally:
            hub.clients.discard(outbox)
            sender.cancel()
            try:
                await sender
            except asyncio.CancelledError:
                pass

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


async def _pump(outbox: asyncio.Queue, ws: WebSocket) -> None:
    while True:
        msg = await outbox.get()
        await ws.send_text(json.dumps(msg))


async def _tick_loop(hub: _Hub) -> None:
    period = 1.0 / hub.session.tick_rate
    loop = asyncio.get_running_loop()
    next_t = loop.time() + period
    while True:
        delay = next_t - loop.time()
        if delay > 0:
            await asyncio.sleep(delay)
        else:
            next_t = loop.time()  # fell behind; do not burst-tick to catch up
        hub.step()
        next_t += period


def serve(
    session: Session,
    host: str = "127.0.0.1",
    port: int = 8720,
    static_dir: str | None = None,
) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(session, static_dir), host=host, port=port, log_level="warning")
