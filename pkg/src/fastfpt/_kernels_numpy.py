"""Pure numpy Monte Carlo backend.

Same counter-based draws as the compiled backend (see _rng), so the returned
samples match it for any seed. Searchers are processed in geometrically
growing blocks; because every retained candidate in a later block would have
an arrival time already above the current k-th best, processing whole blocks
past the scalar stopping point cannot change the top-k, only the searcher
count. Counts are therefore reported per backend and may exceed the minimum
the sequential rule would visit.
"""

from __future__ import annotations

import numpy as np

from ._rng import draw64_np, searcher_stream_np, trial_key, u01_np

TWO_PI = 6.283185307179586
EXP_CUTOFF = 40.0

_BLOCK0 = 128
_BLOCK_MAX = 65536


def _sph_surv_vec(theta: np.ndarray) -> np.ndarray:
    out = np.empty_like(theta)
    img = theta <= 0.25
    if img.any():
        th = theta[img]
        s = np.zeros_like(th)
        j = 0
        while True:
            arg = (2 * j + 1) ** 2 / (4.0 * th)
            m = arg <= EXP_CUTOFF
            if not m.any():
                break
            s[m] += np.exp(-arg[m])
            j += 1
        out[img] = 1.0 - np.sqrt(4.0 / (np.pi * th)) * s
    eig = ~img
    if eig.any():
        th = theta[eig]
        s = np.zeros_like(th)
        n = 1
        while True:
            arg = (n * n * np.pi * np.pi) * th
            m = arg <= EXP_CUTOFF
            if not m.any():
                break
            if n % 2 == 1:
                s[m] += 2.0 * np.exp(-arg[m])
            else:
                s[m] -= 2.0 * np.exp(-arg[m])
            n += 1
        out[eig] = s
    return np.clip(out, 0.0, 1.0)


def _sph_inv_vec(u: np.ndarray) -> np.ndarray:
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(200):
        m = _sph_surv_vec(hi) > u
        if not m.any():
            break
        hi[m] *= 2.0
    done = np.zeros(u.shape, dtype=bool)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gt = _sph_surv_vec(mid) > u
        lo = np.where(~done & gt, mid, lo)
        hi = np.where(~done & ~gt, mid, hi)
        done |= (hi - lo) <= 1e-13 * lo
        if done.all():
            break
    return 0.5 * (lo + hi)


def _block_taus(family, fp, key, gam, ctmc):
    if family == 0:
        u1 = u01_np(draw64_np(key, gam, 1))
        u2 = u01_np(draw64_np(key, gam, 2))
        z = np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)
        z[z == 0.0] = 1e-160
        return fp[0] / (z * z)
    if family == 1:
        u1 = u01_np(draw64_np(key, gam, 1))
        return (u1 / fp[0]) ** fp[1]
    if family == 2:
        u1 = u01_np(draw64_np(key, gam, 1))
        return -np.log(u1) / fp[0]
    if family == 3:
        u1 = u01_np(draw64_np(key, gam, 1))
        return fp[0] * _sph_inv_vec(u1)

    init_states, init_cdf, row_total, is_target, ecum_pad, enext_pad, deg = ctmc
    m = key.shape[0]
    u1 = u01_np(draw64_np(key, gam, 1))
    s = init_states[np.searchsorted(init_cdf, u1, side="left")]
    tau = np.zeros(m)
    c = np.full(m, 2, dtype=np.uint64)
    active = is_target[s] == 0
    while active.any():
        idx = np.nonzero(active)[0]
        st = s[idx]
        tot = row_total[st]
        uw = u01_np(draw64_np(key[idx], gam[idx], c[idx]))
        tau[idx] += -np.log(uw) / tot
        ue = u01_np(draw64_np(key[idx], gam[idx], c[idx] + np.uint64(1))) * tot
        c[idx] += np.uint64(2)
        choice = (ecum_pad[st] < ue[:, None]).sum(axis=1)
        choice = np.minimum(choice, deg[st] - 1)
        ns = enext_pad[st, choice]
        s[idx] = ns
        active[idx] = is_target[ns] == 0
    return tau


def run_trials(seed, lo_trial, hi_trial, lam, k_max, family, fp,
               indptr, indices, erates, ecum, row_total, is_target,
               init_states, init_cdf, truncate, cap, out, counts):
    ctmc = None
    if family == 4:
        n = len(indptr) - 1
        deg = (indptr[1:] - indptr[:-1]).astype(np.int64)
        dmax = max(int(deg.max()), 1)
        ecum_pad = np.full((n, dmax), np.inf)
        enext_pad = np.zeros((n, dmax), dtype=np.int64)
        for i in range(n):
            a, b = indptr[i], indptr[i + 1]
            ecum_pad[i, : b - a] = ecum[a:b]
            enext_pad[i, : b - a] = indices[a:b]
        ctmc = (init_states, init_cdf, row_total, is_target, ecum_pad, enext_pad, deg)

    for trial in range(lo_trial, hi_trial):
        tkey = trial_key(int(seed), trial)
        best = np.full(k_max, np.inf)
        kth = np.inf
        arrival_last = 0.0
        n0 = 0
        block = _BLOCK0
        while n0 < cap:
            m = int(min(block, cap - n0))
            ns = np.arange(n0, n0 + m, dtype=np.uint64)
            key, gam = searcher_stream_np(tkey, ns)
            with np.errstate(divide="ignore"):
                gaps = -np.log(u01_np(draw64_np(key, gam, 0))) / lam
            if n0 == 0:
                gaps[0] = 0.0  # first searcher starts at time zero
            arrivals = arrival_last + np.cumsum(gaps)
            arrival_last = float(arrivals[-1])

            t_abs = arrivals + _block_taus(family, fp, key, gam, ctmc)
            allv = np.concatenate((best, t_abs))
            best = np.partition(allv, k_max - 1)[:k_max]
            kth = float(best.max())
            n0 += m
            block = min(block * 2, _BLOCK_MAX)
            if truncate and arrival_last > kth:
                break

        counts[trial] = n0
        best.sort()
        out[trial, :] = best
