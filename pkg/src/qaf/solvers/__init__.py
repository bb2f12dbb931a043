"""Ground-state search: exhaustive enumeration, simulated annealing and
simulated quantum annealing.  All solvers work on the reduced model left
after clamping and return full configurations with the clamps re-inserted.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import BoundExceededError, ContractError
from ..ising import ClampSet, IsingModel, ReducedModel, energy, reduce
from ._kernels import anneal_run, gray_ground_states, metropolis_accept, sqa_run

__all__ = [
    "AnnealSchedule", "SolveResult", "solve", "solve_exact", "solve_sa", "solve_sqa",
    "default_max_free", "metropolis_accept", "restart_seed",
]

DEFAULT_MAX_FREE = 24
MAX_GROUND_STATES = 1 << 22


def default_max_free() -> int:
    """Exact-solver bound, overridable through ``QAF_MAX_EXACT``."""
    raw = os.environ.get("QAF_MAX_EXACT")
    if raw is None:
        return DEFAULT_MAX_FREE
    try:
        value = int(raw)
    except ValueError:
        raise ContractError(f"QAF_MAX_EXACT must be an integer, got {raw!r}") from None
    if not 0 <= value <= 40:
        raise ContractError("QAF_MAX_EXACT must lie in [0, 40]")
    return value


@dataclass(frozen=True)
class AnnealSchedule:
    """Linear-in-sweep schedules.

    SA interpolates the inverse temperature from ``beta_start`` to
    ``beta_end``.  SQA holds each Trotter slice at inverse temperature
    ``sqa_beta`` and lowers the transverse field from ``gamma_start`` to
    ``gamma_end``.
    """

    sweeps: int = 1000
    beta_start: float = 0.1
    beta_end: float = 5.0
    gamma_start: float = 3.0
    gamma_end: float = 0.01
    sqa_beta: float = 1.0

    def __post_init__(self):
        if self.sweeps < 1:
            raise ContractError("sweeps must be >= 1")
        if not 0 < self.beta_start <= self.beta_end:
            raise ContractError("need 0 < beta_start <= beta_end")
        # equal gammas are allowed so that the zero-field limit is expressible
        if not self.gamma_start >= self.gamma_end >= 0:
            raise ContractError("need gamma_start >= gamma_end >= 0")
        if self.sqa_beta <= 0:
            raise ContractError("sqa_beta must be positive")

    def betas(self) -> np.ndarray:
        return np.linspace(self.beta_start, self.beta_end, self.sweeps)

    def gammas(self) -> np.ndarray:
        return np.linspace(self.gamma_start, self.gamma_end, self.sweeps)


@dataclass
class SolveResult:
    method: str
    best_state: np.ndarray
    best_energy: float
    seed: int | None = None
    ground_states: np.ndarray | None = None
    num_restarts_hit_best: int = 1
    restart_energies: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "energy": self.best_energy,
            "spins": [int(v) for v in self.best_state],
            "seed": self.seed,
            "num_restarts_hit_best": self.num_restarts_hit_best,
        }
        if self.ground_states is not None:
            out["num_ground_states"] = int(len(self.ground_states))
            out["ground_states"] = self.ground_states.astype(int).tolist()
        return out


def _tolerance(model: IsingModel) -> float:
    scale = sum(abs(v) for v in model.h) + sum(abs(v) for v in model.J.values())
    return 1e-9 * max(1.0, scale)


def solve_exact(model: IsingModel, clamps: ClampSet | None = None,
                max_free: int | None = None) -> SolveResult:
    """Enumerate every free configuration; return the ground energy and all ground states.

    Raises:
        BoundExceededError: more than ``max_free`` qubits remain free (default
            24, or ``QAF_MAX_EXACT``).
    """
    bound = default_max_free() if max_free is None else max_free
    red = reduce(model, clamps)
    free = red.model.n
    if free > bound:
        raise BoundExceededError("free qubit count", free, bound)
    indptr, indices, weights = red.model.csr
    h = red.model.h_array
    tol = _tolerance(red.model)
    _, codes, count = gray_ground_states(h, indptr, indices, weights, tol, MAX_GROUND_STATES)
    if count > MAX_GROUND_STATES:
        raise BoundExceededError("ground-state degeneracy", int(count), MAX_GROUND_STATES)
    codes = np.sort(codes[:count])
    free_states = (2 * ((codes[:, None] >> np.arange(free)) & 1) - 1).astype(np.int8)
    ground = red.lift_many(free_states)
    best = ground[0]
    return SolveResult("exact", best, energy(model, best), ground_states=ground,
                       num_restarts_hit_best=1)


def restart_seed(seed: int, index: int) -> int:
    """Independent 32-bit stream seed for restart ``index`` of a call seeded with ``seed``."""
    return int(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, index]).generate_state(1)[0])


def _run_restarts(job, restarts: int, workers: int):
    if workers <= 1 or restarts == 1:
        return [job(r) for r in range(restarts)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, range(restarts)))


def _collect(method: str, model: IsingModel, red: ReducedModel, runs, seed: int) -> SolveResult:
    # recompute each restart's energy on the full model; ties go to the lowest index
    full = [red.lift(s) for s, _ in runs]
    exact = [energy(model, s) for s in full]
    best_i = min(range(len(runs)), key=lambda r: (exact[r], r))
    tol = _tolerance(model)
    hits = sum(e <= exact[best_i] + tol for e in exact)
    return SolveResult(method, full[best_i], exact[best_i], seed=seed,
                       num_restarts_hit_best=hits, restart_energies=exact)


def _prepare(model, clamps, target):
    red = reduce(model, clamps)
    t = -np.inf if target is None else target - red.offset + _tolerance(model)
    return red, t


def solve_sa(model: IsingModel, clamps: ClampSet | None = None,
             schedule: AnnealSchedule | None = None, restarts: int = 20, seed: int = 0,
             workers: int = 1, target: float | None = None) -> SolveResult:
    """Simulated annealing with single-spin Metropolis updates.

    Every restart starts from random free spins and sweeps the free qubits in
    index order while the inverse temperature rises linearly.  Restart ``r``
    draws from its own stream (:func:`restart_seed`), so the result does not
    depend on ``workers``.  If ``target`` is given a restart stops as soon as
    its energy reaches it.
    """
    if restarts < 1:
        raise ContractError("restarts must be >= 1")
    schedule = schedule or AnnealSchedule()
    red, t = _prepare(model, clamps, target)
    indptr, indices, weights = red.model.csr
    h = red.model.h_array
    betas = schedule.betas()

    def job(r):
        return anneal_run(h, indptr, indices, weights, betas, restart_seed(seed, r), t)

    return _collect("sa", model, red, _run_restarts(job, restarts, workers), seed)


def solve_sqa(model: IsingModel, clamps: ClampSet | None = None,
              schedule: AnnealSchedule | None = None, trotter_slices: int = 16, seed: int = 0,
              restarts: int = 1, workers: int = 1, target: float | None = None) -> SolveResult:
    """Simulated quantum annealing by path-integral Monte Carlo.

    ``trotter_slices`` replicas of the free spins form a ring.  The coupling
    between neighbouring replicas follows from the transverse field, which
    falls linearly over the sweeps; each slice sits at inverse temperature
    ``schedule.sqa_beta``.  The best single replica by classical energy is
    returned.
    """
    if trotter_slices < 2:
        raise ContractError("trotter_slices must be >= 2")
    if restarts < 1:
        raise ContractError("restarts must be >= 1")
    schedule = schedule or AnnealSchedule()
    red, t = _prepare(model, clamps, target)
    indptr, indices, weights = red.model.csr
    h = red.model.h_array
    gammas = schedule.gammas()

    def job(r):
        return sqa_run(h, indptr, indices, weights, schedule.sqa_beta, gammas,
                       trotter_slices, restart_seed(seed, r), t)

    return _collect("sqa", model, red, _run_restarts(job, restarts, workers), seed)


def solve(model: IsingModel, clamps: ClampSet | None = None, method: str = "sa", **options) -> SolveResult:
    """Dispatch to ``solve_exact``, ``solve_sa`` or ``solve_sqa`` by name."""
    if method == "exact":
        options.pop("target", None)
        return solve_exact(model, clamps, max_free=options.get("max_free"))
    if method == "sa":
        return solve_sa(model, clamps, **options)
    if method == "sqa":
        return solve_sqa(model, clamps, **options)
    raise ContractError(f"unknown method {method!r}; expected exact, sa or sqa")
