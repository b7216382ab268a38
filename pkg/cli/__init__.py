"""
Command line front end. JSON in, JSON out.

Exposes `run(argv) -> exit code`:
    0   success, or every checked identity holds
    1   a checked identity fails, or a solver met an obstruction
    2   bad input: arguments, rings, series literals, JSON files
    3   the working precision could not support the result
"""
import argparse
import asyncio
import json
import sys
from collections.abc import Sequence
from logging import getLogger
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from algebra.errors import DivisibilityFailure, InputError, ObstructionError, PrecisionExhausted
from cli.commands import COMMANDS, JobContext
from cli.jobs import COMMAND_NAMES, Envelope, JobSpec, Meta, read_json, write_text
from cli.serialiser import dump
from config_interpreter import get_config, guard_override
from logger_setup import flush_logging, setup_logging

LOGGER = getLogger("cli")
SUMMARY = getLogger("cli.summary")

__all__ = (
    "build_parser",
    "execute",
    "exit_code",
    "run",
)

FILE_INPUTS = ("group", "datum", "triple")
"""Inputs given as a path on the command line and read as JSON."""


def exit_code(error: Exception) -> int:
    """The exit code an error maps to."""
    match error:
        case ExceptionGroup():
            return max(exit_code(inner) for inner in error.exceptions)
        case PrecisionExhausted():
            return 3
        case DivisibilityFailure():
            return 2
        case ObstructionError():
            return 1
        case InputError() | ValidationError() | OSError() | ValueError():
            return 2
    LOGGER.error("Unexpected %s while running a job", type(error).__name__, exc_info=error)
    return 2


def _describe(error: Exception) -> str:
    if isinstance(error, ExceptionGroup):
        return "; ".join(_describe(inner) for inner in error.exceptions)
    if isinstance(error, ObstructionError) and error.degree is not None:
        return f"{type(error).__name__} at degree {error.degree}: {error}"
    return f"{type(error).__name__}: {error}"


def _modulus(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"modulus must be comma-separated integers, got {text!r}"
        ) from None


def _element(text: str) -> Any:
    # Integers and coefficient lists, e.g. 2 or [1,2]
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise argparse.ArgumentTypeError(
            f"expected an integer or a coefficient list, got {text!r}"
        ) from None


def _register(parser: argparse.ArgumentParser, name: str):
    # The subcommand parser carries the names of its own inputs
    keys = parser.get_default("input_keys") or ()
    parser.set_defaults(input_keys=(*keys, name))


def _input(parser: argparse.ArgumentParser, name: str, **kwargs):
    parser.add_argument(f"--{name}", dest=name, **kwargs)
    _register(parser, name)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    ring = common.add_argument_group("ring")
    ring.add_argument("--p", type=int, help="residue characteristic")
    ring.add_argument("--f", type=int, help="residue degree of the unramified ring (default 1)")
    ring.add_argument("--precN", type=int, help="p-adic precision of the results")
    ring.add_argument("--precT", type=int, help="T-adic truncation (total degree for laws)")
    ring.add_argument("--modulus", type=_modulus, help="little-endian monic modulus, e.g. 1,0,1")
    common.add_argument("--json", type=Path, help="JSON object merged into the command inputs")
    common.add_argument("--out", type=Path, help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="padic-dynamics",
        description="Lubin-Tate formal groups and p-adic dynamics over unramified rings.",
        allow_abbrev=False,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def subcommand(name: str, help_text: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, parents=[common], help=help_text, allow_abbrev=False)

    for name, help_text in (
        ("fg-build", "build a formal group law from a Frobenius series"),
        ("fg-endo", "endomorphisms [a] of a formal group"),
        ("condense", "norm series and condensed series Gamma_a"),
    ):
        sub = subcommand(name, help_text)
        _input(sub, "frob", help="Frobenius series literal, e.g. \"3*T + T^3\"")
        _input(sub, "group", type=Path, help="formal group JSON to rebuild from")
        _input(sub, "q", type=int, help="cardinality of the Frobenius twist (default q = p^f)")
        _input(sub, "alpha", type=_element, help="expected norm of pi, checked")
    _input(subparsers.choices["fg-build"], "endos", type=_element, action="append",
           help="also compute [a]; repeatable")
    _input(subparsers.choices["fg-endo"], "a", type=_element, action="append",
           required=True, help="element a; repeatable")
    condense_parser = subparsers.choices["condense"]
    _input(condense_parser, "W", type=_element, action="append", required=True,
           help="root of unity in W; repeatable")
    _input(condense_parser, "a", type=_element, action="append", help="compute Gamma_a; repeatable")
    _input(condense_parser, "samples", type=_element, action="append",
           help="elements the condensation laws are checked on; repeatable")

    sub = subcommand("log", "Lubin logarithm of a stable series")
    _input(sub, "P", required=True, help="series literal")
    _input(sub, "effPrec", type=int, help="digits the logarithm is wanted to (default precN)")

    sub = subcommand("commutant", "the series commuting with P with derivative c")
    _input(sub, "P", required=True)
    _input(sub, "c", type=_element, required=True)

    sub = subcommand("normalize", "move the interior fixed point of Q to 0")
    _input(sub, "Q", required=True)

    sub = subcommand("seed-check", "whether P(0) = 0 and P = T^d mod p")
    _input(sub, "P", required=True)
    _input(sub, "d", type=int, required=True)
    _input(sub, "q", type=int)

    sub = subcommand("verify-lift", "verify a lift datum")
    _input(sub, "datum", type=Path, help="lift datum JSON")
    sub.add_argument("--cyclotomic", dest="builtin", action="store_const", const="cyclotomic",
                     help="use the cyclotomic datum (1+T)^c - 1 on --units")
    _register(sub, "builtin")
    _input(sub, "units", type=int, action="append")

    sub = subcommand("semiconj-verify", "check F^tau o h = h o G")
    _input(sub, "triple", type=Path, help="semi-conjugacy JSON")
    for name in ("F", "G", "h"):
        _input(sub, name)
    _input(sub, "twist", type=int)

    sub = subcommand("semiconj-solve", "solve F^tau o h = h o G for h = c*T + ...")
    for name in ("F", "G"):
        _input(sub, name, required=True)
    _input(sub, "c", type=_element, required=True)
    _input(sub, "twist", type=int)

    sub = subcommand("newton", "Newton polygon of a series")
    _input(sub, "series", required=True)

    sub = subcommand("root-profile", "root valuations of the n-th iterate of P")
    _input(sub, "P", required=True)
    _input(sub, "n", type=int, required=True)

    batch = subparsers.add_parser("batch", help="run a JSON list of jobs concurrently")
    batch.add_argument("--jobs", type=Path, required=True)
    batch.add_argument("--out", type=Path)
    return parser


async def _job_from_args(args: argparse.Namespace) -> JobSpec:
    inputs: dict[str, Any] = {}
    if args.json is not None:
        payload = await read_json(args.json)
        if not isinstance(payload, dict):
            raise InputError(f"{args.json} must hold a JSON object")
        inputs.update(payload)
    for key in args.input_keys:
        value = getattr(args, key, None)
        if value is not None:
            inputs[key] = value

    paths = {key: inputs[key] for key in FILE_INPUTS if isinstance(inputs.get(key), Path)}
    async with asyncio.TaskGroup() as tg:
        tasks = {key: tg.create_task(read_json(path)) for key, path in paths.items()}
    for key, task in tasks.items():
        inputs[key] = task.result()

    job: dict[str, Any] = {"command": args.command, "inputs": inputs}
    if args.p is not None or args.precN is not None:
        job["ring"] = {
            "p": args.p,
            "f": 1 if args.f is None else args.f,
            "precN": args.precN,
            "modulus": args.modulus or [],
        }
    if args.precT is not None:
        job["precT"] = args.precT
    if args.out is not None:
        job["outPath"] = str(args.out)
    return JobSpec.model_validate(job)


def execute(job: JobSpec, override: int|None) -> tuple[Envelope, str]:
    """Runs one job synchronously; returns the output envelope and its summary line."""
    outcome = COMMANDS[job.command](JobContext(job, override))
    envelope = Envelope(
        command=job.command,
        meta=Meta(
            precN=outcome.precN,
            internalPrecN=outcome.internalPrecN,
            guard=outcome.guard,
            precT=job.precT,
        ),
        result=outcome.result,
        holds=outcome.holds,
    )
    return envelope, outcome.summary


async def _run_job(job: JobSpec, override: int|None) -> tuple[int, Envelope|None]:
    """
    Runs a job off the event loop and writes it to its outPath if it has one.
    Failures are logged and turned into their exit code.
    """
    try:
        envelope, summary = await asyncio.to_thread(execute, job, override)
        if job.outPath is not None:
            await write_text(job.outPath, dump(envelope))
    except Exception as error:
        LOGGER.error("%s failed: %s", job.command, _describe(error))
        LOGGER.debug(error, exc_info=True)
        return exit_code(error), None
    SUMMARY.info("%s: %s", job.command, summary)
    return (0 if envelope.holds else 1), envelope


async def _run_batch(path: Path, out: Path|None, override: int|None) -> int:
    raw = await read_json(path)
    if not isinstance(raw, list):
        raise InputError(f"{path} must hold a JSON list of jobs")

    results: list[dict[str, Any]] = [{} for _ in raw]

    async def run_entry(index: int, entry: Any):
        try:
            job = JobSpec.model_validate(entry)
        except ValidationError as error:
            LOGGER.error("Job %d is malformed: %s", index, error)
            results[index] = {"exitCode": 2, "error": str(error)}
            return
        code, envelope = await _run_job(job, override)
        results[index] = {"command": job.command, "exitCode": code}
        if envelope is not None and job.outPath is None:
            results[index]["output"] = envelope.model_dump(mode="json")

    async with asyncio.TaskGroup() as tg:
        for index, entry in enumerate(raw):
            tg.create_task(run_entry(index, entry), name=f"Job {index}")

    text = json.dumps({"jobs": results}, sort_keys=True, indent=2) + "\n"
    if out is not None:
        await write_text(out, text)
    else:
        sys.stdout.write(text)
    worst = max((entry["exitCode"] for entry in results), default=0)
    SUMMARY.info("batch: %d jobs, worst exit code %d", len(results), worst)
    return worst


async def _main(args: argparse.Namespace) -> int:
    try:
        override = guard_override()
        if args.command == "batch":
            return await _run_batch(args.jobs, args.out, override)
        job = await _job_from_args(args)
    except Exception as error:
        LOGGER.error("%s", _describe(error))
        return exit_code(error)

    code, envelope = await _run_job(job, override)
    if envelope is not None and job.outPath is None:
        sys.stdout.write(dump(envelope))
    return code


def run(argv: Sequence[str]|None=None) -> int:
    """Parses (argv), runs the command and returns its exit code."""
    try:
        logging_config = get_config()["Logging"]
        setup_logging(
            logging_config["stderr_level"],
            logging_config["file_level"],
            log_dir=logging_config["log_dir"] or None,
        )
    except (OSError, ValueError) as error:
        # tomllib.TOMLDecodeError is a ValueError
        print(f"Cannot read the configuration: {error}", file=sys.stderr)
        return 2
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exit_request:
            # argparse exits with 2 on bad arguments and 0 after --help
            return exit_request.code if isinstance(exit_request.code, int) else 2
        return asyncio.run(_main(args))
    finally:
        flush_logging()
