"""Session-scoped HTTP API for UIs and remote bot clients.

Each session wraps one game state behind its own lock; commands apply
between ticks, reads serialize the freshest snapshot. Every accepted
command also lands in an append-only event log (command-script format),
so a crashed or restarted server lazily rebuilds a session by replaying
its log the next time the session id is referenced.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import GameConfig, config_from_dict
from .errors import (
    ConfigError,
    EmptySelection,
    EngineError,
    GenerationError,
    GridOccupiedByBoss,
    IllegalTask,
    InsufficientWords,
    InvalidGrid,
    InvalidIndex,
    NotChoppable,
    NothingToCollect,
    OutOfBounds,
    ScriptError,
    UnknownVillager,
    UnknownWord,
    WordNotOwned,
)
from .generate import AffinityTable, GenerationPipeline, LocalBackend, RemoteBackend
from .script import TaskCommand, TerraformCommand, load_script
from .sim import GameOver, GameState, Task, TaskKind, new_game
from .tiles import TileSet, load_tileset
from .words import WordPool, build_pool, load_word_frequencies

_STATUS_BY_ERROR = {
    InvalidIndex: 400,
    InvalidGrid: 400,
    OutOfBounds: 400,
    EmptySelection: 400,
    ScriptError: 400,
    ConfigError: 400,
    UnknownVillager: 404,
    GridOccupiedByBoss: 409,
    InsufficientWords: 409,
    WordNotOwned: 409,
    UnknownWord: 409,
    IllegalTask: 409,
    NotChoppable: 409,
    NothingToCollect: 409,
    GameOver: 409,
    GenerationError: 502,
}


def _status_for(error: EngineError) -> int:
    for cls in type(error).__mro__:
        if cls in _STATUS_BY_ERROR:
            return _STATUS_BY_ERROR[cls]
    return 400


@dataclass
class ServerSettings:
    generator_url: str | None = None
    generator_timeout_ms: int = 2000
    fallback: bool = True
    tileset_path: str | None = None
    wordfreq_path: str | None = None
    data_dir: str | None = None
    realtime_default: bool = False


class Session:
    def __init__(self, session_id: str, state: GameState, event_log: Path | None):
        self.id = session_id
        self.state = state
        self.lock = threading.Lock()
        self.created_at = time.time()
        self.event_log = event_log
        self.realtime = False
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def log_event(self, line: str) -> None:
        if self.event_log is not None:
            with open(self.event_log, "a", encoding="utf-8", newline="") as fh:
                fh.write(line + "\n")

    def start_realtime(self) -> None:
        if self._thread is not None:
            return
        self.realtime = True

        def loop():
            period = self.state.clock.tick_seconds
            while not self._stop.is_set():
                time.sleep(period)
                with self.lock:
                    self.state.step(1)

        self._thread = threading.Thread(target=loop, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()


class SessionManager:
    def __init__(self, settings: ServerSettings):
        self.settings = settings
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self.tileset: TileSet = load_tileset(settings.tileset_path)
        table = load_word_frequencies(settings.wordfreq_path)
        self._pool_words = build_pool(table).queue
        self.affinity = AffinityTable.load()
        self.data_dir = Path(settings.data_dir) if settings.data_dir else None
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)

    def _pipeline(self) -> GenerationPipeline:
        remote = None
        if self.settings.generator_url:
            remote = RemoteBackend(self.settings.generator_url, self.settings.generator_timeout_ms)
        return GenerationPipeline(
            local=LocalBackend(self.affinity), remote=remote, fallback=self.settings.fallback
        )

    def _new_state(self, seed: int, overrides: dict | None) -> GameState:
        config = config_from_dict(overrides or {})
        return new_game(
            config,
            seed,
            tileset=self.tileset,
            pool=WordPool(self._pool_words),
            pipeline=self._pipeline(),
        )

    def create(self, seed: int, overrides: dict | None, realtime: bool) -> Session:
        session_id = secrets.token_hex(8)
        event_log = None
        if self.data_dir is not None:
            event_log = self.data_dir / f"{session_id}.events.log"
            meta = {"seed": seed, "config": overrides or {}, "created_at": time.time()}
            (self.data_dir / f"{session_id}.meta.json").write_text(
                json.dumps(meta, sort_keys=True), encoding="utf-8"
            )
        session = Session(session_id, self._new_state(seed, overrides), event_log)
        with self._lock:
            self.sessions[session_id] = session
        if realtime:
            session.start_realtime()
        return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is not None:
            return session
        return self._recover(session_id)

    def _recover(self, session_id: str) -> Session | None:
        """Rebuild a session from its persisted meta + event log, if present."""
        if self.data_dir is None or not session_id.isalnum():
            return None
        meta_path = self.data_dir / f"{session_id}.meta.json"
        if not meta_path.exists():
            return None
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        state = self._new_state(meta["seed"], meta.get("config") or {})
        event_log = self.data_dir / f"{session_id}.events.log"
        if event_log.exists():
            for command in load_script(event_log):
                while state.clock.tick < command.tick:
                    state.step(1)
                if isinstance(command, TerraformCommand):
                    state.terraform(command.grid_index, list(command.words))
                else:
                    state.assign_task(
                        command.villager_id,
                        Task(kind=TaskKind(command.verb), cell=command.cell, monster_id=command.monster_id),
                    )
        session = Session(session_id, state, event_log if self.data_dir else None)
        with self._lock:
            self.sessions.setdefault(session_id, session)
            return self.sessions[session_id]

    def shutdown(self) -> None:
        with self._lock:
            for session in self.sessions.values():
                session.stop()


class CreateSessionBody(BaseModel):
    seed: int = 0
    config: dict | None = None
    realtime: bool | None = None


class TerraformBody(BaseModel):
    grid_index: int
    words: list[str]


class CommandBody(BaseModel):
    villager_id: int
    task: str
    args: dict = {}


class TickBody(BaseModel):
    n: int = 1


def receipt_wire(receipt) -> dict:
    return {
        "grid_index": receipt.grid_index,
        "prompt": receipt.prompt.rendered,
        "words": list(receipt.prompt.words),
        "grid": receipt.grid,
        "backend": receipt.backend,
        "tick": receipt.tick,
        "words_spent": list(receipt.words_spent),
    }


def create_app(settings: ServerSettings | None = None) -> FastAPI:
    settings = settings or ServerSettings()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        app.state.manager.shutdown()

    app = FastAPI(title="godgrid session server", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    manager = SessionManager(settings)
    app.state.manager = manager

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, error: EngineError):
        return JSONResponse(
            status_code=_status_for(error),
            content={"error": {"code": error.code, "message": str(error)}},
        )

    def require_session(session_id: str) -> Session:
        session = manager.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        realtime = settings.realtime_default if body.realtime is None else body.realtime
        session = manager.create(body.seed, body.config, realtime)
        return {"session_id": session.id}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        session = require_session(session_id)
        with session.lock:
            return session.state.snapshot()

    @app.post("/sessions/{session_id}/terraform")
    def terraform(session_id: str, body: TerraformBody):
        session = require_session(session_id)
        with session.lock:
            receipt = session.state.terraform(body.grid_index, body.words)
            session.log_event(
                TerraformCommand(
                    tick=receipt.tick, grid_index=receipt.grid_index, words=receipt.prompt.words
                ).format()
            )
            return {"receipt": receipt_wire(receipt)}

    @app.post("/sessions/{session_id}/command")
    def command(session_id: str, body: CommandBody):
        session = require_session(session_id)
        try:
            kind = TaskKind(body.task)
        except ValueError:
            raise ScriptError(f"unknown task verb {body.task!r}")
        if kind is TaskKind.IDLE:
            raise ScriptError("idle is not an assignable task")
        cell = tuple(body.args["cell"]) if "cell" in body.args else None
        monster_id = body.args.get("monster_id")
        if kind is TaskKind.ATTACK and monster_id is None:
            raise ScriptError("attack needs args.monster_id")
        if kind in (TaskKind.MOVE, TaskKind.CHOP, TaskKind.COLLECT) and cell is None:
            raise ScriptError(f"{kind.value} needs args.cell")
        with session.lock:
            session.state.assign_task(body.villager_id, Task(kind=kind, cell=cell, monster_id=monster_id))
            session.log_event(
                TaskCommand(
                    tick=session.state.clock.tick,
                    villager_id=body.villager_id,
                    verb=kind.value,
                    cell=cell,
                    monster_id=monster_id,
                ).format()
            )
        return {"ok": True}

    @app.post("/sessions/{session_id}/tick")
    def tick(session_id: str, body: TickBody):
        session = require_session(session_id)
        if body.n < 0:
            raise ScriptError("tick count must be non-negative")
        with session.lock:
            session.state.step(body.n)
            return {"ok": True, "tick": session.state.clock.tick}

    return app


class UnknownSession(EngineError):
    code = "unknown_session"


_STATUS_BY_ERROR[UnknownSession] = 404
