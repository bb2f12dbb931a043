"""Compiled inner loops.  Models arrive as CSR adjacency arrays."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def metropolis_accept(delta, beta, u):
    """Accept a move of energy change ``delta`` given a uniform draw ``u``."""
    if delta <= 0.0:
        return True
    return u < math.exp(-beta * delta)


@njit(cache=True)
def _ctz(k):
    c = 0
    while (k & 1) == 0:
        k >>= 1
        c += 1
    return c


@njit(cache=True)
def _start_energy(h, indptr, indices, weights):
    # every spin -1
    n = h.shape[0]
    e = 0.0
    for i in range(n):
        e -= h[i]
        for p in range(indptr[i], indptr[i + 1]):
            if indices[p] > i:
                e += weights[p]
    return e


@njit(cache=True, nogil=True)
def gray_ground_states(h, indptr, indices, weights, tol, limit):
    """Exhaustive search over all 2**n states via Gray-code single flips.

    Returns ``(emin, codes, count)`` where ``codes[:count]`` are the states
    (bit i set = spin i is +1) with energy within ``tol`` of the minimum.
    ``count`` larger than ``limit`` means the buffer overflowed.
    """
    n = h.shape[0]
    codes = np.empty(limit, dtype=np.int64)
    es = np.empty(limit)
    s = -np.ones(n, dtype=np.int8)
    e = _start_energy(h, indptr, indices, weights)
    best = e
    codes[0] = 0
    es[0] = e
    count = 1
    code = 0
    for k in range(1, 1 << n):
        i = _ctz(k)
        f = h[i]
        for p in range(indptr[i], indptr[i + 1]):
            f += weights[p] * s[indices[p]]
        e -= 2.0 * s[i] * f
        s[i] = -s[i]
        code ^= 1 << i
        if e < best - tol:
            best = e
            count = 0
        elif e < best:
            best = e
        if e <= best + tol:
            if count < limit:
                codes[count] = code
                es[count] = e
            count += 1
    if count > limit:
        return best, codes, count
    kept = 0
    for c in range(count):
        if es[c] <= best + tol:
            codes[kept] = codes[c]
            kept += 1
    return best, codes, kept


@njit(cache=True)
def _energy(s, h, indptr, indices, weights):
    n = h.shape[0]
    e = 0.0
    for i in range(n):
        e += h[i] * s[i]
        for p in range(indptr[i], indptr[i + 1]):
            if indices[p] > i:
                e += weights[p] * s[i] * s[indices[p]]
    return e


@njit(cache=True, nogil=True)
def anneal_run(h, indptr, indices, weights, betas, seed, target):
    """One simulated-annealing restart: Metropolis sweeps in index order.

    Returns the lowest-energy state visited and its energy.  Stops early once
    the energy drops to ``target``.
    """
    np.random.seed(seed)
    n = h.shape[0]
    s = np.empty(n, dtype=np.int8)
    for i in range(n):
        s[i] = 1 if np.random.random() < 0.5 else -1
    field = h.copy()
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            field[i] += weights[p] * s[indices[p]]
    e = _energy(s, h, indptr, indices, weights)
    best_e = e
    best_s = s.copy()
    if best_e <= target:
        return best_s, best_e
    for t in range(betas.shape[0]):
        beta = betas[t]
        for i in range(n):
            delta = -2.0 * s[i] * field[i]
            if metropolis_accept(delta, beta, np.random.random()):
                s[i] = -s[i]
                e += delta
                for p in range(indptr[i], indptr[i + 1]):
                    field[indices[p]] += 2.0 * weights[p] * s[i]
                if e < best_e - 1e-12:
                    best_e = e
                    best_s[:] = s
        if best_e <= target:
            break
    return best_s, best_e


@njit(cache=True, nogil=True)
def sqa_run(h, indptr, indices, weights, beta, gammas, slices, seed, target):
    """Path-integral Monte Carlo over ``slices`` Trotter replicas in a ring.

    Each replica carries the classical energy at inverse temperature ``beta``;
    neighbouring replicas of the same spin are coupled ferromagnetically with
    strength ``-ln(tanh(beta * gamma)) / (2 * beta)`` (zero when gamma is 0).
    Returns the best classical replica seen and its energy.
    """
    np.random.seed(seed)
    n = h.shape[0]
    s = np.empty((slices, n), dtype=np.int8)
    for k in range(slices):
        for i in range(n):
            s[k, i] = 1 if np.random.random() < 0.5 else -1
    field = np.empty((slices, n))
    e = np.empty(slices)
    for k in range(slices):
        for i in range(n):
            f = h[i]
            for p in range(indptr[i], indptr[i + 1]):
                f += weights[p] * s[k, indices[p]]
            field[k, i] = f
        e[k] = _energy(s[k], h, indptr, indices, weights)
    best_e = e[0]
    best_s = s[0].copy()
    for k in range(1, slices):
        if e[k] < best_e:
            best_e = e[k]
            best_s[:] = s[k]
    if best_e <= target:
        return best_s, best_e
    for t in range(gammas.shape[0]):
        g = gammas[t]
        jperp = 0.0
        if g > 0.0:
            jperp = -0.5 * math.log(math.tanh(beta * g)) / beta
        for k in range(slices):
            up = (k + 1) % slices
            down = (k - 1) % slices
            for i in range(n):
                d_cl = -2.0 * s[k, i] * field[k, i]
                d_q = 2.0 * jperp * s[k, i] * (s[up, i] + s[down, i])
                if metropolis_accept(d_cl + d_q, beta, np.random.random()):
                    s[k, i] = -s[k, i]
                    e[k] += d_cl
                    for p in range(indptr[i], indptr[i + 1]):
                        field[k, indices[p]] += 2.0 * weights[p] * s[k, i]
                    if e[k] < best_e - 1e-12:
                        best_e = e[k]
                        best_s[:] = s[k]
        if best_e <= target:
            break
    return best_s, best_e
