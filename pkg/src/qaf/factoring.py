"""Multiplication and factoring by clamping registers of a compiled multiplier."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

from .compiler import CompiledModel, compile, factoring_widths
from .errors import ContractError, NonConvergenceError, UnsatisfiableError
from .ising import decode_register, encode_register
from .netlist import multiplier
from .solvers import default_max_free, solve

log = logging.getLogger(__name__)

DEFAULT_ATTEMPTS = 50


@lru_cache(maxsize=32)
def compiled_multiplier(p: int, q: int, fuse: bool = False) -> CompiledModel:
    return compile(multiplier(p, q), fuse=fuse)


def _reached(result, cm: CompiledModel) -> bool:
    return result.best_energy <= cm.certified_ground_energy + 1e-9


def _solver_options(method: str, options: dict) -> dict:
    opts = dict(options)
    if method == "exact":
        return {"max_free": opts.get("max_free")}
    opts.pop("max_free", None)
    return opts


def _pick_model(p: int, q: int, method: str, fuse: bool | None, clamped: int) -> CompiledModel:
    """Exact solves fall back to the fused model when the plain one is too big."""
    if fuse is not None:
        return compiled_multiplier(p, q, fuse)
    cm = compiled_multiplier(p, q, False)
    if method == "exact" and cm.model.n - clamped > default_max_free():
        return compiled_multiplier(p, q, True)
    return cm


def multiply_with_energy(m: int, n: int, widths: tuple[int, int] | None = None, method: str = "sa",
                         seed: int = 0, attempts: int = 10, fuse: bool | None = None,
                         **options) -> tuple[int, float]:
    """Run the multiplier forwards: clamp ``M`` and ``N``, read ``P``.

    Returns ``(product, energy)``.  A heuristic solve is accepted only once it
    reaches the certified ground energy; each retry uses ``seed + attempt``.
    Widths default to the operands' bit lengths.

    Raises:
        NonConvergenceError: no attempt reached the certified ground energy.
    """
    if m < 0 or n < 0:
        raise ContractError("operands must be non-negative")
    p, q = widths or (max(1, m.bit_length()), max(1, n.bit_length()))
    if m >= 1 << p or n >= 1 << q:
        raise ContractError(f"operands ({m}, {n}) do not fit widths ({p}, {q})")
    cm = _pick_model(p, q, method, fuse, p + q)
    clamps = {**encode_register(m, cm.map.register("M")), **encode_register(n, cm.map.register("N"))}
    opts = _solver_options(method, options)
    if method != "exact":
        opts.setdefault("target", cm.certified_ground_energy)
    for attempt in range(1 if method == "exact" else attempts):
        if method != "exact":
            opts["seed"] = seed + attempt
        result = solve(cm.model, clamps, method, **opts)
        if _reached(result, cm):
            return decode_register(result.best_state, cm.map.register("P")), result.best_energy
        log.info("multiply attempt %d stopped at %.3f (ground %.3f)", attempt,
                 result.best_energy, cm.certified_ground_energy)
    raise NonConvergenceError(
        f"{method} did not reach the ground energy {cm.certified_ground_energy} for {m} x {n}")


def multiply_qa(m: int, n: int, widths: tuple[int, int] | None = None, method: str = "sa", **kwargs) -> int:
    """Product decoded from a certified ground state; see :func:`multiply_with_energy`."""
    return multiply_with_energy(m, n, widths, method, **kwargs)[0]


@dataclass(frozen=True)
class FactorProblem:
    """What to factor and how.

    Widths default to ``(ceil(bits/2) + 1, bits - 1)`` for a ``bits``-bit
    ``P``; ``force_odd`` defaults to True for odd ``P`` and clamps both
    factor LSBs to 1.
    """

    P: int
    width_m: int | None = None
    width_n: int | None = None
    force_odd: bool | None = None
    method: str = "sa"
    attempts: int = DEFAULT_ATTEMPTS
    seed: int = 0
    fuse: bool | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.P < 4:
            raise ContractError("P must be >= 4")
        default = factoring_widths(self.P.bit_length())
        wm = self.width_m if self.width_m is not None else default[0]
        wn = self.width_n if self.width_n is not None else default[1]
        object.__setattr__(self, "width_m", wm)
        object.__setattr__(self, "width_n", wn)
        if wm < 1 or wn < 1:
            raise ContractError("register widths must be >= 1")
        if wm + wn < self.P.bit_length():
            raise ContractError(f"widths ({wm}, {wn}) cannot hold a {self.P.bit_length()}-bit product")
        if self.force_odd is None:
            object.__setattr__(self, "force_odd", bool(self.P & 1))
        if self.force_odd and not self.P & 1:
            raise ContractError("force_odd needs an odd P")
        if self.attempts < 1:
            raise ContractError("attempts must be >= 1")


@dataclass(frozen=True)
class FactorResult:
    P: int
    m: int
    n: int
    energy: float
    verified: bool
    attempts: int

    def to_dict(self) -> dict:
        return {"P": self.P, "m": self.m, "n": self.n, "verified": self.verified,
                "energy": self.energy, "attempts": self.attempts}


def _factor_clamps(cm: CompiledModel, P: int, force_odd: bool) -> dict[int, int]:
    clamps = encode_register(P, cm.map.register("P"))
    if force_odd:
        for reg in ("M", "N"):
            q = cm.map.register(reg)[0]
            if clamps.get(q, 1) != 1:
                raise UnsatisfiableError("odd factor clamp collides with the product clamp")
            clamps[q] = 1
    return clamps


def _decode(state, cm: CompiledModel) -> tuple[int, int]:
    return decode_register(state, cm.map.register("M")), decode_register(state, cm.map.register("N"))


def factor_qa(prob: FactorProblem) -> FactorResult:
    """Clamp the product register to ``P`` and search for a factor pair.

    Heuristic methods retry with ``seed + attempt`` until a state at the
    certified ground energy decodes to a nontrivial pair; the exact method
    enumerates once.  The returned pair always satisfies ``m * n == P`` and
    ``m <= n``.

    Raises:
        NonConvergenceError: attempts exhausted.
        UnsatisfiableError: the exact solve shows no nontrivial factor pair
            fits the widths and constraints.
    """
    p, q = prob.width_m, prob.width_n
    cm = _pick_model(p, q, prob.method, prob.fuse, p + q + 2 * prob.force_odd)
    clamps = _factor_clamps(cm, prob.P, prob.force_odd)
    opts = _solver_options(prob.method, prob.options)

    if prob.method == "exact":
        result = solve(cm.model, clamps, "exact", **opts)
        if _reached(result, cm):
            for state in result.ground_states:
                m, n = _decode(state, cm)
                if m * n == prob.P and min(m, n) > 1:
                    return FactorResult(prob.P, min(m, n), max(m, n), result.best_energy, True, 1)
        raise UnsatisfiableError(f"no nontrivial factorization of {prob.P} fits widths ({p}, {q})")

    opts["target"] = cm.certified_ground_energy
    trivial = 0
    for attempt in range(prob.attempts):
        opts["seed"] = prob.seed + attempt
        result = solve(cm.model, clamps, prob.method, **opts)
        if not _reached(result, cm):
            log.info("attempt %d: energy %.3f above ground %.3f", attempt,
                     result.best_energy, cm.certified_ground_energy)
            continue
        m, n = _decode(result.best_state, cm)
        if m * n != prob.P:
            # a certified ground state always multiplies out; anything else is a bug
            raise AssertionError(f"ground state decodes to {m} x {n} != {prob.P}")
        if min(m, n) <= 1:
            trivial += 1
            log.info("attempt %d: trivial factorization %d x %d, retrying", attempt, m, n)
            continue
        return FactorResult(prob.P, min(m, n), max(m, n), result.best_energy, True, attempt + 1)
    raise NonConvergenceError(
        f"no nontrivial factorization of {prob.P} after {prob.attempts} attempts"
        + (f" ({trivial} ended on a trivial pair)" if trivial else ""))


def enumerate_factorizations(P: int, widths: tuple[int, int], force_odd: bool = False,
                             max_free: int | None = None, fuse: bool | None = None) -> set[tuple[int, int]]:
    """Every ``(m, n)`` encoded by an exact ground state with the product clamped to ``P``.

    Returns the empty set when the certified ground energy is out of reach,
    i.e. when no factor pair fits.
    """
    p, q = widths
    if P < 0 or P >= 1 << (p + q):
        raise ContractError(f"{P} does not fit a {p + q}-bit product register")
    cm = _pick_model(p, q, "exact", fuse, p + q + 2 * force_odd)
    try:
        clamps = _factor_clamps(cm, P, force_odd)
    except UnsatisfiableError:
        return set()
    result = solve(cm.model, clamps, "exact", max_free=max_free)
    if not _reached(result, cm):
        return set()
    return {_decode(s, cm) for s in result.ground_states}
