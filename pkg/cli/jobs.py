"""
Job descriptions and the output envelope of the command line.

A JobSpec names a subcommand, the requested ring and T-precision and the
command's inputs. Inputs are either series literals, integers, coefficient
lists or whole JSON artifacts read from files.
"""
import json
from logging import getLogger
from pathlib import Path
from typing import Any, Literal, get_args

import aiofiles
from pydantic import BaseModel, Field

from algebra.zq import RingSpec
from cli.serialiser import RingModel, dejsonify
from config_interpreter import get_config

LOGGER = getLogger("cli.jobs")

__all__ = (
    "COMMAND_NAMES",
    "Envelope",
    "JobSpec",
    "Meta",
    "MalformedJSON",
    "read_json",
    "write_text",
)

Command = Literal[
    "fg-build",
    "fg-endo",
    "log",
    "commutant",
    "normalize",
    "seed-check",
    "verify-lift",
    "condense",
    "semiconj-verify",
    "semiconj-solve",
    "newton",
    "root-profile",
]
COMMAND_NAMES: tuple[str, ...] = get_args(Command)


class MalformedJSON(ValueError):
    """A JSON file that does not parse, with the position of the problem."""
    def __init__(self, path: str|Path, error: json.JSONDecodeError):
        self.path = path
        self.lineno = error.lineno
        self.colno = error.colno
        super().__init__(f"{path}: line {error.lineno}, column {error.colno}: {error.msg}")


class JobSpec(BaseModel):
    command: Command
    ring: RingModel|None = None
    """May be left out when every input carries its own ring."""
    precT: int = Field(default_factory=lambda: get_config()["Precision"]["default_precT"], ge=1)
    inputs: dict[str, Any] = {}
    outPath: str|None = None

    def requested_spec(self) -> RingSpec|None:
        """The ring at the requested precision; raises InvalidRingSpec on a bad ring."""
        return None if self.ring is None else dejsonify(self.ring)


class Meta(BaseModel):
    precN: int|None
    """Precision the result is stamped at."""
    internalPrecN: int|None
    """Precision the solvers ran at."""
    guard: int
    precT: int|None


class Envelope(BaseModel):
    command: str
    meta: Meta
    result: dict[str, Any]
    holds: bool


async def read_json(path: str|Path) -> Any:
    """Reads a UTF-8 JSON file, raising MalformedJSON with line and column on a parse error."""
    async with aiofiles.open(path, encoding="utf-8") as file:
        text = await file.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise MalformedJSON(path, error) from None


async def write_text(path: str|Path, text: str):
    async with aiofiles.open(path, "w", encoding="utf-8") as file:
        await file.write(text)
    LOGGER.debug("Wrote %d characters to %s", len(text), path)
