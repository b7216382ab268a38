"""
One handler per subcommand. A handler takes a JobContext and returns an
Outcome: the JSON result, whether the checked identities hold, a one-line
summary and the precisions involved.

Solvers that divide by a multiplier once per degree run with guard digits
on top of the requested precision and their results are stamped back at it.
"""
from collections.abc import Callable
from logging import getLogger
from typing import Any, NamedTuple

from pydantic import BaseModel

from algebra.errors import InputError, SpecMismatch
from algebra.newton import newton_polygon
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement
from cli.jobs import JobSpec
from cli.literal import parse_series_literal
from cli.serialiser import (
    LiftDatumModel,
    SemiConjModel,
    SeriesModel,
    dejsonify,
    element_from_json,
    element_label,
    jsonify,
)
from config_interpreter import get_config
from dynamics.fixed_point import check_phi_iterate_seed, normalize_fixed_point
from dynamics.lift_datum import cyclotomic_datum, verify_lift_datum
from dynamics.lubin import StableNoninvertible, commutant, level_slopes, lubin_limit, root_valuation_profile
from dynamics.semiconj import SemiConjTriple, solve_semiconj, verify_semiconj
from lubin_tate.block_solver import guard_digits
from lubin_tate.condense import condense, norm_series, verify_condensation_laws
from lubin_tate.formal_group import (
    FormalGroup,
    FrobeniusSeries,
    build_formal_group,
    endomorphism,
    verify_frobenius_chain,
    verify_group_axioms,
)

LOGGER = getLogger("cli.commands")

__all__ = (
    "COMMANDS",
    "JobContext",
    "Outcome",
)


class Outcome(NamedTuple):
    result: dict[str, Any]
    holds: bool
    summary: str
    precN: int|None
    internalPrecN: int|None
    guard: int = 0


class JobContext:
    """
    Reads the inputs of one job into library objects.

    `override` is the guard-digit width forced by the environment or the
    configuration; None leaves it to each command's precision contract.
    """
    __slots__ = ("job", "override")

    def __init__(self, job: JobSpec, override: int|None):
        self.job = job
        self.override = override

    @property
    def precT(self) -> int:
        return self.job.precT

    @property
    def inputs(self) -> dict[str, Any]:
        return self.job.inputs

    def spec(self) -> RingSpec:
        spec = self.job.requested_spec()
        if spec is None:
            raise InputError(f"{self.job.command} needs a ring: pass --p and --precN")
        return spec

    def guard(self, contract: int) -> int:
        return contract if self.override is None else self.override

    def has(self, key: str) -> bool:
        return self.inputs.get(key) is not None

    def raw(self, key: str) -> Any:
        if not self.has(key):
            raise InputError(f"{self.job.command} needs the input {key!r}")
        return self.inputs[key]

    def series(self, key: str, spec: RingSpec) -> Series:
        return self.series_from(self.raw(key), spec, key)

    def series_from(self, value: Any, spec: RingSpec, key: str="series") -> Series:
        """
        A literal is parsed into (spec) at the job's T-precision; a JSON series
        keeps its own T-precision and its representatives are read into (spec)
        as exact.
        """
        if isinstance(value, str):
            return parse_series_literal(value, spec, self.precT)
        if isinstance(value, dict):
            series = dejsonify(SeriesModel.model_validate(value))
            if not spec.same_ring(series.spec):
                raise SpecMismatch(spec, series.spec)
            return Series(spec, (c.lift(spec) for c in series.coeffs), series.precT)
        raise InputError(f"Input {key!r} must be a series literal or a JSON series")

    def element(self, key: str, spec: RingSpec) -> ZqElement:
        return element_from_json(spec, self.raw(key))

    def elements(self, key: str, spec: RingSpec) -> list[ZqElement]:
        values = self.raw(key)
        if not isinstance(values, list):
            values = [values]
        return [element_from_json(spec, value) for value in values]

    def integer(self, key: str, default: int|None=None) -> int:
        value = self.inputs.get(key, default)
        if value is None:
            raise InputError(f"{self.job.command} needs the integer input {key!r}")
        if isinstance(value, bool) or not isinstance(value, int):
            try:
                value = int(value)
            except (TypeError, ValueError):
                raise InputError(f"Input {key!r} must be an integer, got {value!r}") from None
        return value

    def artifact[M: BaseModel](self, key: str, model: type[M]) -> Any:
        return dejsonify(model.model_validate(self.raw(key)))


def _stamp(series: Series, precN: int) -> Series:
    return series.with_precision(precN) if series.spec.precN > precN else series


def _dump(model: BaseModel) -> dict[str, Any]:
    return model.model_dump(mode="json")


COMMANDS: dict[str, Callable[[JobContext], Outcome]] = {}


def command(name: str):
    """Registers the decorated function as the handler of a subcommand."""
    def decorator(handler: Callable[[JobContext], Outcome]) -> Callable[[JobContext], Outcome]:
        COMMANDS[name] = handler
        return handler
    return decorator


# Formal groups

def _frobenius_source(ctx: JobContext) -> tuple[Any, int]:
    # A formal group artifact is rebuilt from its Frobenius series
    if ctx.has("group"):
        frob = ctx.raw("group").get("frob")
        if not isinstance(frob, dict):
            raise InputError("The group artifact has no Frobenius series")
        return frob, int(frob.get("q", 0))
    return ctx.raw("frob"), ctx.integer("q", 0)


def _provision_group(ctx: JobContext) -> tuple[FormalGroup, int]:
    spec = ctx.spec()
    source, q = _frobenius_source(ctx)
    requested = FrobeniusSeries(ctx.series_from(source, spec, "frob"), q)
    precD = ctx.precT
    guard = ctx.guard(guard_digits(precD, requested.pi))
    working = spec.with_precision(spec.precN + guard)
    G = build_formal_group(FrobeniusSeries(ctx.series_from(source, working, "frob"), q), precD)
    if G.precN > spec.precN:
        G = FormalGroup(G.law.with_precision(spec.precN), G.frob.with_precision(spec.precN), G.working)
    if ctx.has("alpha"):
        # alpha is documentation; it only has to agree with the norm of pi
        alpha = ctx.element("alpha", G.spec)
        if G.alpha.with_precision(G.precN) != alpha:
            raise InputError(
                f"alpha = {alpha.signed_repr()} is not the norm "
                f"{G.alpha.with_precision(G.precN).signed_repr()} of pi"
            )
    return G, guard


@command("fg-build")
def fg_build(ctx: JobContext) -> Outcome:
    G, guard = _provision_group(ctx)
    if ctx.has("endos"):
        for a in ctx.elements("endos", G.spec):
            endomorphism(G, a)
    axioms = verify_group_axioms(G)
    chain = verify_frobenius_chain(G)
    return Outcome(
        {"group": _dump(jsonify(G)), "axioms": _dump(axioms), "frobeniusChain": chain},
        axioms.holds and chain,
        f"law to total degree {G.precD} at p^{G.precN} (twist {G.frob.twist}): "
        f"axioms {'hold' if axioms.holds else 'fail'}, "
        f"Frobenius chain {'is' if chain else 'is not'} [alpha]",
        G.precN,
        G.working.spec.precN,
        guard,
    )


@command("fg-endo")
def fg_endo(ctx: JobContext) -> Outcome:
    G, guard = _provision_group(ctx)
    endos = {
        element_label(a): _dump(jsonify(endomorphism(G, a)))
        for a in ctx.elements("a", G.spec)
    }
    return Outcome(
        {"endos": endos, "alpha": list(G.alpha.with_precision(G.precN).coeffs)},
        True,
        f"{len(endos)} endomorphisms at p^{G.precN}",
        G.precN,
        G.working.spec.precN,
        guard,
    )


@command("condense")
def condense_command(ctx: JobContext) -> Outcome:
    G, guard = _provision_group(ctx)
    setup = norm_series(G, ctx.elements("W", G.spec))
    labels = ctx.elements("a", G.spec) if ctx.has("a") else [ZqElement(G.spec, 2)]
    gammas = {element_label(a): _dump(jsonify(condense(setup, a))) for a in labels}
    samples = ctx.elements("samples", G.spec) if ctx.has("samples") else labels
    laws = verify_condensation_laws(setup, samples)
    model = jsonify(setup).model_copy(update={"gamma": gammas})
    return Outcome(
        {"condensation": _dump(model), "laws": _dump(laws)},
        laws.holds,
        f"norm series of degree {setup.d}, {len(gammas)} condensed series, "
        f"laws {'hold' if laws.holds else 'fail'}",
        G.precN,
        G.working.spec.precN,
        guard,
    )


# Dynamics

@command("log")
def log_command(ctx: JobContext) -> Outcome:
    spec = ctx.spec()
    P = ctx.series("P", spec)
    effPrec = ctx.integer("effPrec", spec.precN)
    v = P.derivative_at_zero().valuation() if P.precT > 1 else 0
    if not P.has_zero_constant() or not 1 <= v < spec.precN:
        # Refused at the requested precision already, with the matching error
        lubin_limit(P, effPrec)
    factor = get_config()["Precision"]["log_guard_factor"]
    guard = ctx.guard((factor * P.precT + effPrec) * v)
    working = spec.with_precision(spec.precN + guard)
    P_working = ctx.series("P", working)
    limit = lubin_limit(P_working, effPrec)
    log = limit.series
    lam = P_working.derivative_at_zero()
    linearises = log.compose(P_working).agrees_with(log.scale(lam), effPrec)
    result: dict[str, Any] = {
        "log": _dump(jsonify(log)),
        "iterations": limit.iterations,
        "functionalEquation": linearises,
    }
    if spec.f == 1:
        result["fractions"] = [str(c) for c in log.to_fractions()]
    return Outcome(
        result,
        linearises,
        f"Lubin logarithm to T^{log.precT} mod p^{effPrec} after {limit.iterations} iterates, "
        f"L o P = lambda L {'holds' if linearises else 'fails'}",
        effPrec,
        working.precN,
        guard,
    )


@command("commutant")
def commutant_command(ctx: JobContext) -> Outcome:
    spec = ctx.spec()
    P = StableNoninvertible(ctx.series("P", spec))
    guard = ctx.guard(guard_digits(P.P.precT, P.lam))
    working = spec.with_precision(spec.precN + guard)
    g = _stamp(commutant(ctx.series("P", working), ctx.element("c", working)), spec.precN)
    return Outcome(
        {"commutant": _dump(jsonify(g))},
        True,
        f"commutant with derivative {g.derivative_at_zero().signed_repr()} to T^{g.precT}",
        g.spec.precN,
        working.precN,
        guard,
    )


@command("normalize")
def normalize_command(ctx: JobContext) -> Outcome:
    spec = ctx.spec()
    Q = ctx.series("Q", spec)
    shift = Q - Series.identity(spec, Q.precT)
    guard = ctx.guard(shift[1].valuation() if Q.precT > 1 else 0)
    working = spec.with_precision(spec.precN + guard)
    a, shifted = normalize_fixed_point(ctx.series("Q", working))
    if a.spec.precN > spec.precN:
        a = a.with_precision(spec.precN)
    shifted = _stamp(shifted, spec.precN)
    return Outcome(
        {
            "a": _dump(jsonify(a)),
            "shifted": _dump(jsonify(shifted)),
            "polygon": _dump(jsonify(newton_polygon(shift))),
        },
        True,
        f"fixed point a = {a.signed_repr()} mod p^{a.spec.precN}, "
        f"Q(T + a) - a known to T^{shifted.precT}",
        a.spec.precN,
        working.precN,
        guard,
    )


@command("seed-check")
def seed_check(ctx: JobContext) -> Outcome:
    spec = ctx.spec()
    P = ctx.series("P", spec)
    d = ctx.integer("d")
    q = ctx.integer("q") if ctx.has("q") else None
    seed = check_phi_iterate_seed(P, d, q)
    return Outcome(
        {"seed": seed},
        seed,
        f"P {'is' if seed else 'is not'} congruent to T^{d} mod p",
        spec.precN,
        spec.precN,
    )


@command("verify-lift")
def verify_lift(ctx: JobContext) -> Outcome:
    if ctx.has("datum"):
        D = ctx.artifact("datum", LiftDatumModel)
    elif ctx.inputs.get("builtin") == "cyclotomic":
        units = ctx.raw("units")
        units = units if isinstance(units, list) else [units]
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in units):
            raise InputError(f"Units of the cyclotomic datum must be integers, got {units}")
        D = cyclotomic_datum(ctx.spec(), ctx.precT, units)
    else:
        raise InputError("verify-lift needs a datum file or --cyclotomic with --units")
    report = verify_lift_datum(D)
    precN = D.P.P.spec.precN
    return Outcome(
        {"datum": _dump(jsonify(D)), "report": _dump(report)},
        report.holds,
        f"{len(D.members)} members, {len(D.table)} table entries: "
        + ("all checks hold" if report.holds else f"failures at {report.failingDegrees}"),
        precN,
        precN,
    )


# Semi-conjugacies

@command("semiconj-verify")
def semiconj_verify(ctx: JobContext) -> Outcome:
    if ctx.has("triple"):
        t = ctx.artifact("triple", SemiConjModel)
    else:
        spec = ctx.spec()
        t = SemiConjTriple(
            ctx.series("F", spec),
            ctx.series("G", spec),
            ctx.series("h", spec),
            ctx.integer("twist", 0),
        )
    report = verify_semiconj(t)
    precN = t.F.spec.precN
    return Outcome(
        {"triple": _dump(jsonify(t)), "report": _dump(report)},
        report.holds,
        "F o h = h o G holds" if report.holds
        else f"F o h and h o G differ at T^{report.firstFailingDegree}",
        precN,
        precN,
    )


@command("semiconj-solve")
def semiconj_solve(ctx: JobContext) -> Outcome:
    spec = ctx.spec()
    F = StableNoninvertible(ctx.series("F", spec))
    twist = ctx.integer("twist", 0)
    guard = ctx.guard(guard_digits(F.P.precT, F.lam))
    working = spec.with_precision(spec.precN + guard)
    F_working, G_working = ctx.series("F", working), ctx.series("G", working)
    h = _stamp(solve_semiconj(F_working, G_working, ctx.element("c", working), twist), spec.precN)
    t = SemiConjTriple(
        _stamp(F_working, h.spec.precN).truncate(h.precT),
        _stamp(G_working, h.spec.precN).truncate(h.precT),
        h,
        twist,
    )
    report = verify_semiconj(t)
    return Outcome(
        {"h": _dump(jsonify(h)), "report": _dump(report)},
        report.holds,
        f"h solved to T^{h.precT} at p^{h.spec.precN}, F o h = h o G "
        + ("holds" if report.holds else f"fails at T^{report.firstFailingDegree}"),
        h.spec.precN,
        working.precN,
        guard,
    )


# Newton polygons

@command("newton")
def newton_command(ctx: JobContext) -> Outcome:
    spec = ctx.spec()
    polygon = newton_polygon(ctx.series("series", spec))
    return Outcome(
        {"polygon": _dump(jsonify(polygon))},
        True,
        str(polygon),
        spec.precN,
        spec.precN,
    )


@command("root-profile")
def root_profile(ctx: JobContext) -> Outcome:
    spec = ctx.spec()
    P = ctx.series("P", spec)
    n = ctx.integer("n")
    profile = root_valuation_profile(P, n)
    result: dict[str, Any] = {
        "profile": [{"slope": str(slope), "multiplicity": m} for slope, m in profile],
    }
    if n >= 1:
        result["levels"] = [
            {"slope": str(slope), "multiplicity": m} for slope, m in level_slopes(P, n)
        ]
    return Outcome(
        result,
        True,
        "root valuations " + ", ".join(f"{-slope} x{m}" for slope, m in profile),
        spec.precN,
        spec.precN,
    )
