"""Exception hierarchy for the engine.

Every error carries a stable machine-readable ``code`` so transport layers
(HTTP API, CLI exit paths) can map failures without string matching.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures."""

    code = "engine_error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class ConfigError(EngineError):
    code = "config_error"


# --- tileset loading -------------------------------------------------------

class TilesetError(EngineError):
    code = "tileset_error"


class MissingTile(TilesetError):
    code = "missing_tile"


class DuplicateId(TilesetError):
    code = "duplicate_id"


class SemanticsViolation(TilesetError):
    code = "semantics_violation"


# --- world / grid ----------------------------------------------------------

class OutOfBounds(EngineError):
    code = "out_of_bounds"


class InvalidIndex(EngineError):
    code = "invalid_index"


class InvalidGrid(EngineError):
    code = "invalid_grid"


class GridOccupiedByBoss(EngineError):
    code = "grid_occupied"


# --- word pool / inventory -------------------------------------------------

class InsufficientVocabulary(EngineError):
    code = "insufficient_vocabulary"


class UnknownWord(EngineError):
    code = "unknown_word"


class InsufficientWords(EngineError):
    code = "insufficient_words"


class EmptySelection(EngineError):
    code = "empty_selection"


class WordNotOwned(EngineError):
    code = "word_not_owned"


# --- generation backends ---------------------------------------------------

class GenerationError(EngineError):
    code = "generation_error"


class GenerationTimeout(GenerationError):
    code = "generation_timeout"


class GenerationServerError(GenerationError):
    code = "generation_server_error"


class MalformedResponse(GenerationError):
    code = "malformed_response"


# --- simulation ------------------------------------------------------------

class UnknownVillager(EngineError):
    code = "unknown_villager"


class IllegalTask(EngineError):
    code = "illegal_task"


class NotChoppable(EngineError):
    code = "not_choppable"


class NothingToCollect(EngineError):
    code = "nothing_to_collect"


# --- telemetry / scripts ---------------------------------------------------

class MalformedLine(EngineError):
    code = "malformed_line"

    def __init__(self, line_number: int, message: str = ""):
        super().__init__(f"line {line_number}: {message}" if message else f"line {line_number}")
        self.line_number = line_number


class EmptyLog(EngineError):
    code = "empty_log"


class EmptyInput(EngineError):
    code = "empty_input"


class ScriptError(EngineError):
    code = "script_error"
