"""Compiled Monte Carlo kernels (numba).

One trial = one row of the output array, written by absolute trial index so
results are identical however trials are split across workers. All draws come
from the counter scheme in _rng; the pure numpy backend consumes the same
counters, so both backends return the same samples for the same seed.

Family codes: 0 half-line diffusion, 1 power fixture, 2 exponential fixture,
3 sphere escape, 4 network jump chain. The per-searcher layout is: counter 0
arrival gap, search-time draws from counter 1 (families 0..3: fixed count;
family 4: one initial-state draw then two per jump).

Kernels run with nogil so a thread pool gets real parallelism.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

U1 = np.uint64(1)
U2 = np.uint64(2)
SH30 = np.uint64(30)
SH27 = np.uint64(27)
SH31 = np.uint64(31)
SH11 = np.uint64(11)
MUL1 = np.uint64(0xBF58476D1CE4E5B9)
MUL2 = np.uint64(0x94D049BB133111EB)
GOLD = np.uint64(0x9E3779B97F4A7C15)
LEAF = np.uint64(0xD1B54A32D192ED03)
SALT = np.uint64(0x5851F42D4C957F2D)
U53_SCALE = 2.0**-53
TWO_PI = 6.283185307179586
EXP_CUTOFF = 40.0


@njit(cache=True, inline="always")
def _mix64(z):
    z = z ^ (z >> SH30)
    z = z * MUL1
    z = z ^ (z >> SH27)
    z = z * MUL2
    return z ^ (z >> SH31)


@njit(cache=True, inline="always")
def _u01(x):
    return (np.float64(x >> SH11) + 0.5) * U53_SCALE


@njit(cache=True, inline="always")
def _draw_u(key, gamma, c):
    return _u01(_mix64(key + gamma * (c + U1)))


@njit(cache=True)
def _sph_surv(theta):
    # image sum below the crossover, eigen sum above; terms cut at e^-40
    if theta <= 0.25:
        s = 0.0
        j = 0
        while True:
            arg = (2 * j + 1) ** 2 / (4.0 * theta)
            if arg > EXP_CUTOFF:
                break
            s += math.exp(-arg)
            j += 1
        v = 1.0 - math.sqrt(4.0 / (math.pi * theta)) * s
    else:
        s = 0.0
        n = 1
        while True:
            arg = n * n * math.pi * math.pi * theta
            if arg > EXP_CUTOFF:
                break
            if n % 2 == 1:
                s += 2.0 * math.exp(-arg)
            else:
                s -= 2.0 * math.exp(-arg)
            n += 1
        v = s
    return min(max(v, 0.0), 1.0)


@njit(cache=True)
def _sph_inv(u):
    # scaled first-passage time theta with survival(theta) = u
    lo = 0.0
    hi = 1.0
    while _sph_surv(hi) > u:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _sph_surv(mid) > u:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * lo:
            break
    return 0.5 * (lo + hi)


@njit(cache=True, nogil=True)
def run_trials(seed, lo_trial, hi_trial, lam, k_max, family, fp,
               indptr, indices, erates, ecum, row_total, is_target,
               init_states, init_cdf, truncate, cap, out, counts):
    best = np.empty(k_max, dtype=np.float64)
    seed_mix = _mix64(seed)
    for trial in range(lo_trial, hi_trial):
        tkey = seed_mix ^ (GOLD * np.uint64(trial + 1))
        for i in range(k_max):
            best[i] = np.inf
        kth = np.inf
        arrival = 0.0
        n = 0
        while n < cap:
            skey = _mix64(tkey + LEAF * np.uint64(n))
            sgam = _mix64(skey ^ SALT) | U1
            u_gap = _draw_u(skey, sgam, np.uint64(0))
            if n >= 1:
                if lam > 0.0:
                    arrival += -math.log(u_gap) / lam
                else:
                    arrival = np.inf
            if truncate and arrival > kth:
                break

            if family == 0:
                u1 = _draw_u(skey, sgam, U1)
                u2 = _draw_u(skey, sgam, U2)
                z = math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)
                if z == 0.0:
                    z = 1e-160
                tau = fp[0] / (z * z)
            elif family == 1:
                u1 = _draw_u(skey, sgam, U1)
                tau = (u1 / fp[0]) ** fp[1]
            elif family == 2:
                u1 = _draw_u(skey, sgam, U1)
                tau = -math.log(u1) / fp[0]
            elif family == 3:
                u1 = _draw_u(skey, sgam, U1)
                tau = fp[0] * _sph_inv(u1)
            else:
                u1 = _draw_u(skey, sgam, U1)
                pos = 0
                while init_cdf[pos] < u1:
                    pos += 1
                s = init_states[pos]
                tau = 0.0
                c = U2
                while is_target[s] == 0:
                    total = row_total[s]
                    uw = _draw_u(skey, sgam, c)
                    tau += -math.log(uw) / total
                    ue = _draw_u(skey, sgam, c + U1) * total
                    c = c + U2
                    e = indptr[s]
                    last = indptr[s + 1] - 1
                    while e < last and ecum[e] < ue:
                        e += 1
                    s = indices[e]

            t_abs = arrival + tau
            if t_abs < kth:
                jm = 0
                bm = best[0]
                for i in range(1, k_max):
                    if best[i] > bm:
                        bm = best[i]
                        jm = i
                best[jm] = t_abs
                bm = best[0]
                for i in range(1, k_max):
                    if best[i] > bm:
                        bm = best[i]
                kth = bm
            n += 1

        counts[trial] = n
        # insertion sort, k_max is small
        for i in range(1, k_max):
            v = best[i]
            j = i - 1
            while j >= 0 and best[j] > v:
                best[j + 1] = best[j]
                j -= 1
            best[j + 1] = v
        for i in range(k_max):
            out[trial, i] = best[i]
