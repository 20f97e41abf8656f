"""Monte Carlo campaigns for the immigration first-passage model.

A campaign simulates n_trials independent realizations: searchers enter at
rate lam (the first at time zero), each runs an independent search, and the
trial records the k smallest absolute finding times for k = 1..k_max.
Searcher processing stops once the next arrival time exceeds the current
k_max-th best absolute time; any searcher beyond that point starts too late
to displace the recorded minima, so the truncation is exact, not an
approximation.

Two interchangeable backends consume identical uniform draws for the same
seed (draws are counter-indexed per searcher, see _rng): a compiled kernel
and a pure numpy one, chosen by the FASTFPT_BACKEND environment variable
(auto | numba | numpy) or per call. Samples agree to floating-point
rounding, not always bit-for-bit: the vectorized transcendentals round a
few last bits differently from the scalar libm calls in the compiled path. Trials are split across a thread pool in
contiguous chunks and written by absolute trial index, so results do not
depend on the worker count either. simulate_trial is the plain-python
reference of the same process, driven by a numpy Generator; it defines the
semantics the kernels are tested against at the distribution level.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .survival import (CtmcNetwork, ExponentialFixture, HalfLineDiffusion,
                       PowerFixture, SphereEscape3D, SurvivalModel)

__all__ = [
    "McCampaign",
    "McResult",
    "simulate_trial",
    "run_campaign",
    "empirical_survival",
    "ks_distance",
    "ks_two_sample",
]

_NO_CAP = 2**62


@dataclass(frozen=True)
class McCampaign:
    """Campaign description; seed fixes the full sample set exactly."""

    model: SurvivalModel
    lam: float
    k_max: int = 1
    n_trials: int = 1000
    seed: int = 0
    workers: int | None = None
    truncate: bool = True
    max_searchers: int | None = None

    def __post_init__(self) -> None:
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise ValueError(f"immigration rate must be >= 0 and finite, got {self.lam}")
        if self.lam == 0.0 and self.k_max > 1:
            raise ValueError("with lam = 0 only the first searcher exists; k_max must be 1")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if not self.truncate and self.max_searchers is None:
            raise ValueError("without truncation a max_searchers cap is required")


@dataclass(frozen=True)
class McResult:
    """samples[i, j] is the (j+1)-th smallest finding time in trial i."""

    samples: np.ndarray
    n_searchers: np.ndarray
    backend: str
    campaign: McCampaign

    def survival_at(self, k: int, t: float) -> float:
        return empirical_survival(self.samples[:, k - 1], t)

    def summary(self) -> list[dict]:
        out = []
        for j in range(self.samples.shape[1]):
            col = self.samples[:, j]
            fin = col[np.isfinite(col)]
            n = fin.size
            mean = float(fin.mean()) if n else math.nan
            std = float(fin.std(ddof=1)) if n > 1 else math.nan
            out.append({
                "k": j + 1,
                "n": int(col.size),
                "n_finite": int(n),
                "mean": mean,
                "std": std,
                "stderr": std / math.sqrt(n) if n > 1 else math.nan,
            })
        return out


def simulate_trial(model: SurvivalModel, lam: float, k_max: int,
                   rng: np.random.Generator, max_searchers: int = 10**7) -> np.ndarray:
    """One trial, reference implementation on a numpy Generator."""
    if not lam >= 0.0:
        raise ValueError(f"immigration rate must be >= 0, got {lam}")
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    best = np.full(k_max, np.inf)
    kth = np.inf
    arrival = 0.0
    n = 0
    while n < max_searchers:
        if n >= 1:
            if lam == 0.0:
                break
            arrival += rng.exponential() / lam
        if arrival > kth:
            break
        t_abs = arrival + model.sample_tau(rng)
        if t_abs < kth:
            best[np.argmax(best)] = t_abs
            kth = best.max()
        n += 1
    best.sort()
    return best


def _resolve_backend(name: str | None):
    name = name or os.environ.get("FASTFPT_BACKEND", "auto")
    if name not in ("auto", "numba", "numpy"):
        raise ValueError(f"backend must be auto, numba, or numpy, got {name!r}")
    if name in ("auto", "numba"):
        try:
            from . import _kernels_numba as kern
            return "numba", kern
        except ImportError:
            if name == "numba":
                raise
    from . import _kernels_numpy as kern
    return "numpy", kern


def _resolve_workers(campaign: McCampaign) -> int:
    if campaign.workers is not None:
        return campaign.workers
    env = os.environ.get("FASTFPT_WORKERS", "").strip()
    if env:
        w = int(env)
        if w < 1:
            raise ValueError(f"FASTFPT_WORKERS must be >= 1, got {w}")
        return w
    return 1


_EMPTY_I = np.zeros(0, dtype=np.int64)
_EMPTY_F = np.zeros(0, dtype=np.float64)


def _kernel_args(model: SurvivalModel):
    """(family, fp, csr-arrays) for models the kernels know; None otherwise."""
    one_ptr = np.zeros(1, dtype=np.int64)
    one_u8 = np.zeros(1, dtype=np.uint8)
    one_cdf = np.ones(1, dtype=np.float64)
    blank = (one_ptr, _EMPTY_I, _EMPTY_F, _EMPTY_F, _EMPTY_F, one_u8, _EMPTY_I, one_cdf)
    if isinstance(model, HalfLineDiffusion):
        return 0, np.array([model.L**2 / (2.0 * model.D)]), blank
    if isinstance(model, PowerFixture):
        return 1, np.array([model.A, 1.0 / model.p]), blank
    if isinstance(model, ExponentialFixture):
        return 2, np.array([model.rate]), blank
    if isinstance(model, SphereEscape3D):
        return 3, np.array([model.L**2 / model.D]), blank
    if isinstance(model, CtmcNetwork):
        csr = (model.indptr, model.indices, model.edge_rates, model.edge_cum,
               model.row_total, model.is_target8, model.init_states, model.init_cdf)
        return 4, _EMPTY_F, csr
    return None


def run_campaign(campaign: McCampaign, backend: str | None = None) -> McResult:
    """Run all trials. The sample set is a pure function of the campaign:
    worker count never changes a bit, and switching backend moves at most a
    few last bits per sample."""
    n, k_max = campaign.n_trials, campaign.k_max
    out = np.empty((n, k_max), dtype=np.float64)
    counts = np.zeros(n, dtype=np.int64)
    cap = campaign.max_searchers if campaign.max_searchers is not None else _NO_CAP
    workers = _resolve_workers(campaign)

    spec = _kernel_args(campaign.model)
    if spec is None:
        # model without a kernel family: reference path, seeded per trial
        for trial in range(n):
            rng = np.random.default_rng((campaign.seed, trial))
            out[trial] = simulate_trial(campaign.model, campaign.lam, k_max, rng,
                                        max_searchers=min(cap, 10**7))
        return McResult(samples=out, n_searchers=counts, backend="reference",
                        campaign=campaign)

    family, fp, csr = spec
    name, kern = _resolve_backend(backend)
    args = (np.uint64(campaign.seed), float(campaign.lam), int(k_max), int(family), fp,
            *csr, bool(campaign.truncate), int(cap), out, counts)

    def _run(lo: int, hi: int) -> None:
        kern.run_trials(args[0], lo, hi, *args[1:])

    _run(0, 0)  # trigger compilation outside the pool
    if workers <= 1 or n < 2 * workers:
        _run(0, n)
    else:
        bounds = np.linspace(0, n, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run, int(a), int(b))
                    for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            for f in futs:
                f.result()
    return McResult(samples=out, n_searchers=counts, backend=name, campaign=campaign)


def empirical_survival(samples: np.ndarray, t) -> float | np.ndarray:
    """Fraction of samples strictly above t; t may be a scalar or array."""
    samples = np.asarray(samples)
    if samples.ndim != 1 or samples.size == 0:
        raise ValueError("need a nonempty 1-d sample array")
    if np.ndim(t) == 0:
        return float((samples > t).mean())
    s = np.sort(samples)
    return 1.0 - np.searchsorted(s, np.asarray(t), side="right") / s.size


def ks_distance(samples: np.ndarray, cdf) -> float:
    """Two-sided Kolmogorov distance between samples and a model CDF.

    cdf may be a callable or an object with a .cdf method (a LimitLaw or a
    KthFptDistribution).
    """
    f = cdf.cdf if hasattr(cdf, "cdf") else cdf
    s = np.sort(np.asarray(samples, dtype=np.float64))
    n = s.size
    if n == 0:
        raise ValueError("need a nonempty sample array")
    fv = np.array([f(x) for x in s])
    lo = np.arange(0, n) / n
    hi = np.arange(1, n + 1) / n
    return float(np.maximum(fv - lo, hi - fv).max())


def ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    """Kolmogorov distance between two empirical distributions."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("need nonempty sample arrays")
    grid = np.concatenate((a, b))
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())
