"""First-passage statistics for a growing population of searchers.

Searchers are injected at rate lam: searcher n starts at the n-th arrival
time of a Poisson process (the first at time zero) and searches
independently with single-searcher survival S(t). Everything here reduces
to the cumulative integral

    Phi(t) = integral_0^t (1 - S(s)) ds,

through which the number of searchers that have found the target by time t
is Poisson distributed with mean lam * Phi(t) (given that the first searcher
is still out, etc.). The time T_k at which the k-th searcher finds the
target has survival

    P(T_k > t) = S(t) * pois_pmf(k-1; y) + pois_cdf(k-2; y),  y = lam Phi(t),

evaluated with log-space Poisson terms so large y underflows cleanly instead
of overflowing.

Phi is obtained by adaptive quadrature of the accurate CDF (never 1 - S when
that cancels). For exponential-class models, 1 - S ~ A t^p e^(-C/t) vanishes
with an essential singularity at t = 0 and a plain quadrature either misses
the boundary layer or stalls; below s = C/50 the substitution s -> C/x turns
it into a smooth exponentially decaying integrand on a half-line, which is
the same change of variables that gives the closed form

    integral_0^t A s^p e^(-C/s) ds = A C^(p+1) Gamma(-p-1, C/t)

exposed as short_time_law_integral for the laws themselves.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from . import specfun
from .survival import ExpLaw, PowerLaw, SurvivalModel

__all__ = [
    "QuadratureError",
    "CumulativeIntegralTable",
    "KthFptDistribution",
    "integral_one_minus_s",
    "short_time_law_integral",
    "survival_with_immigration",
    "kth_survival",
    "exactly_j_found_probability",
    "kth_density",
    "mean_kth_fpt_numeric",
]

# below C/this, exponential-class integrands are handled by substitution
_EXP_SPLIT = 50.0

class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge to the requested accuracy."""


def _quad_checked(f, a, b, points=None, tol=1e-10):
    res = quad(f, a, b, full_output=1, points=points,
               epsabs=0.0, epsrel=tol, limit=300)
    if len(res) > 3:
        # tiny integrals hit QUADPACK's roundoff flag before reaching tol;
        # keep the result while the estimate is still sqrt(tol)-accurate
        value, err = res[0], res[1]
        if not err <= math.sqrt(tol) * abs(value):
            raise QuadratureError(
                f"quadrature on [{a}, {b}]: {res[3]} (value {value!r}, "
                f"error estimate {err!r})")
    return res[0]


def char_time(model: SurvivalModel) -> float:
    """Characteristic single-searcher time scale, from the short-time law."""
    law = model.short_time_law()
    if isinstance(law, ExpLaw):
        return law.C
    return (1.0 / law.A) ** (1.0 / law.p)


def short_time_law_integral(law: PowerLaw | ExpLaw, t: float) -> float:
    """Closed-form integral_0^t of the law itself.

    Power class: A t^(p+1) / (p+1). Exponential class:
    A C^(p+1) Gamma(-p-1, C/t), exact for all t > 0.
    """
    if t <= 0.0:
        return 0.0
    if isinstance(law, PowerLaw):
        return law.A * t ** (law.p + 1.0) / (law.p + 1.0)
    g = specfun.upper_incomplete_gamma(-law.p - 1.0, law.C / t)
    return law.A * law.C ** (law.p + 1.0) * g


def integral_one_minus_s(model: SurvivalModel, t: float, tol: float = 1e-10) -> float:
    """Phi(t) = integral_0^t (1 - S(s)) ds by adaptive quadrature of the CDF.

    Exponential-class models get the short-time part via the substitution
    s -> C/x, which turns the essentially-singular corner into a smooth
    decaying tail the integrator handles at full relative accuracy.
    """
    if t <= 0.0:
        return 0.0
    law = model.short_time_law()
    if isinstance(law, ExpLaw):
        c = law.C
        s0 = c / _EXP_SPLIT
        if t <= s0:
            return c * _quad_checked(lambda x: model.cdf(c / x) / (x * x),
                                     c / t, np.inf, tol=tol)
        head = c * _quad_checked(lambda x: model.cdf(c / x) / (x * x),
                                 _EXP_SPLIT, np.inf, tol=tol)
        pts = [p for p in (2.0 * s0, 0.25 * c, c, 4.0 * c) if s0 < p < t]
        return head + _quad_checked(model.cdf, s0, t, points=pts or None, tol=tol)
    t_char = char_time(model)
    pts = [p for p in (0.25 * t_char, t_char, 4.0 * t_char) if 0.0 < p < t]
    return _quad_checked(model.cdf, 0.0, t, points=pts or None, tol=tol)


# --- Poisson pieces, log-space per term ---


def _pois_pmf(i: int, y: float) -> float:
    if i < 0:
        return 0.0
    lp = i * math.log(y) - y - math.lgamma(i + 1)
    return math.exp(lp) if lp > -745.0 else 0.0


def _pois_cdf(i: int, y: float) -> float:
    if i < 0:
        return 0.0
    return min(math.fsum(_pois_pmf(j, y) for j in range(i + 1)), 1.0)


def _pois_tail(i: int, y: float) -> float:
    # P(Poisson(y) >= i); sum the small side to keep relative accuracy
    if i <= 0:
        return 1.0
    if y >= i:
        return max(1.0 - _pois_cdf(i - 1, y), 0.0)
    acc = 0.0
    term = _pois_pmf(i, y)
    j = i
    while term > 0.0:
        acc += term
        j += 1
        term *= y / j
        if term < acc * 1e-18:
            acc += term * (j + 1) / (j + 1 - y)  # geometric bound on the rest
            break
    return min(acc, 1.0)


def _validate_lam_k(lam: float, k: int) -> None:
    if not (lam >= 0.0 and math.isfinite(lam)):
        raise ValueError(f"immigration rate must be finite and >= 0, got {lam}")
    if k < 1 or k != int(k):
        raise ValueError(f"order k must be an integer >= 1, got {k}")
    if lam == 0.0 and k > 1:
        raise ValueError("with lam = 0 only the first searcher exists; k must be 1")


def _kth_survival_from_y(s: float, k: int, y: float) -> float:
    if y <= 0.0:
        return s if k == 1 else 1.0
    return min(s * _pois_pmf(k - 1, y) + _pois_cdf(k - 2, y), 1.0)


def _kth_cdf_from_y(s: float, f: float, k: int, y: float) -> float:
    # P(T_k <= t) = F * pmf(k-1; y) + P(Poisson(y) >= k); no cancellation
    if y <= 0.0:
        return f if k == 1 else 0.0
    return min(f * _pois_pmf(k - 1, y) + _pois_tail(k, y), 1.0)


# --- cached Phi on a log grid ---


class CumulativeIntegralTable:
    """Phi(t) on [t_lo, t_hi], shape-preserving cubic in transformed coordinates.

    Each node is an adaptive-quadrature value of Phi. The interpolation
    ordinate is log Phi(t) + C/t for exponential-class models, which removes
    the essential singularity (the remainder varies like a power of t), and
    plain log Phi against log t for power-class models, where it is already
    near-linear. refine() doubles the grid density; estimated_error() probes
    interpolation error against direct quadrature at node midpoints.
    """

    def __init__(self, model: SurvivalModel, t_lo: float, t_hi: float, n: int = 129):
        if not (0.0 < t_lo < t_hi):
            raise ValueError(f"need 0 < t_lo < t_hi, got {t_lo}, {t_hi}")
        if n < 8:
            raise ValueError(f"need at least 8 nodes, got {n}")
        self.model = model
        self.t_lo = float(t_lo)
        self.t_hi = float(t_hi)
        self.n = int(n)
        law = model.short_time_law()
        self._c_reg = law.C if isinstance(law, ExpLaw) else 0.0
        self._build()

    def _build(self) -> None:
        ts = np.geomspace(self.t_lo, self.t_hi, self.n)
        phis = np.array([integral_one_minus_s(self.model, t) for t in ts])
        w = np.log(np.maximum(phis, 1e-300)) + self._c_reg / ts
        self._log_t = np.log(ts)
        self._interp = PchipInterpolator(self._log_t, w, extrapolate=False)

    def value(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        if not (self.t_lo * (1.0 - 1e-12) <= t <= self.t_hi * (1.0 + 1e-12)):
            raise ValueError(f"t={t} outside table range [{self.t_lo}, {self.t_hi}]")
        x = min(max(math.log(t), self._log_t[0]), self._log_t[-1])
        return float(math.exp(float(self._interp(x)) - self._c_reg / t))

    def refine(self) -> None:
        self.n = 2 * self.n - 1
        self._build()

    def estimated_error(self) -> float:
        """Max relative deviation from direct quadrature at probe midpoints."""
        stride = max((self.n - 1) // 24, 1)
        worst = 0.0
        for i in range(0, self.n - 1, stride):
            tm = math.exp(0.5 * (self._log_t[i] + self._log_t[i + 1]))
            direct = integral_one_minus_s(self.model, tm)
            if direct > 0.0:
                worst = max(worst, abs(self.value(tm) / direct - 1.0))
        return worst


class KthFptDistribution:
    """Distribution of T_k, the k-th target-finding time, at rate lam.

    A CumulativeIntegralTable may be supplied to amortize the Phi quadrature
    over many queries; out-of-range queries fall back to direct quadrature.
    """

    def __init__(self, model: SurvivalModel, lam: float, k: int = 1,
                 table: CumulativeIntegralTable | None = None):
        _validate_lam_k(lam, k)
        self.model = model
        self.lam = float(lam)
        self.k = int(k)
        self.table = table

    def phi(self, t: float) -> float:
        if self.table is not None:
            try:
                return self.table.value(t)
            except ValueError:
                pass
        return integral_one_minus_s(self.model, t)

    def survival(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        return _kth_survival_from_y(self.model.survival(t), self.k, self.lam * self.phi(t))

    def cdf(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        return _kth_cdf_from_y(self.model.survival(t), self.model.cdf(t), self.k,
                               self.lam * self.phi(t))

    def density(self, t: float, h: float | None = None) -> float:
        if t <= 0.0:
            return 0.0
        if h is None:
            law = self.model.short_time_law()
            scale = law.C if isinstance(law, ExpLaw) else 1.0
            h = 1e-5 * max(t, scale)
        h = min(h, 0.5 * t)
        d = (self.survival(t - h) - self.survival(t + h)) / (2.0 * h)
        return max(d, 0.0)

    def mean(self, tol: float = 1e-8) -> float:
        return mean_kth_fpt_numeric(self.model, self.lam, self.k, tol=tol,
                                    table=self.table)


# --- operation-style wrappers ---


def survival_with_immigration(model: SurvivalModel, lam: float, t: float) -> float:
    """P(T_1 > t) = S(t) exp(-lam Phi(t))."""
    return KthFptDistribution(model, lam, 1).survival(t)


def kth_survival(model: SurvivalModel, lam: float, k: int, t: float,
                 table: CumulativeIntegralTable | None = None) -> float:
    return KthFptDistribution(model, lam, k, table).survival(t)


def kth_density(model: SurvivalModel, lam: float, k: int, t: float,
                h: float | None = None,
                table: CumulativeIntegralTable | None = None) -> float:
    return KthFptDistribution(model, lam, k, table).density(t, h)


def exactly_j_found_probability(model: SurvivalModel, lam: float, j: int, t: float,
                                table: CumulativeIntegralTable | None = None) -> float:
    """P(exactly j searchers have found the target by time t).

    Equals S * pois_pmf(j; y) + (1 - S) * pois_pmf(j-1; y) with y = lam Phi(t),
    which telescopes: sum_{j<k} P(N=j) = P(T_k > t).
    """
    if not (lam >= 0.0 and math.isfinite(lam)):
        raise ValueError(f"immigration rate must be finite and >= 0, got {lam}")
    if j < 0:
        raise ValueError(f"count j must be >= 0, got {j}")
    if t <= 0.0:
        return 1.0 if j == 0 else 0.0
    dist = KthFptDistribution(model, lam, 1, table)
    y = lam * dist.phi(t)
    s = model.survival(t)
    f = model.cdf(t)
    if y <= 0.0:
        return (s if j == 0 else (f if j == 1 else 0.0))
    return s * _pois_pmf(j, y) + f * _pois_pmf(j - 1, y)


def mean_kth_fpt_numeric(model: SurvivalModel, lam: float, k: int = 1,
                         tol: float = 1e-8,
                         table: CumulativeIntegralTable | None = None) -> float:
    """E[T_k] = integral_0^inf P(T_k > t) dt by adaptive quadrature.

    The upper limit is found by doubling until the survival drops below
    1e-14, and level-crossing times are passed as quadrature breakpoints so
    the sharp front at fast immigration rates is resolved.
    """
    _validate_lam_k(lam, k)
    if lam == 0.0:
        res = quad(model.survival, 0.0, np.inf, full_output=1, epsabs=1e-12,
                   epsrel=tol, limit=300)
        if len(res) > 3:
            raise QuadratureError(
                f"mean with lam=0: {res[3]} (error estimate {res[1]!r})")
        return res[0]

    dist = KthFptDistribution(model, lam, k, table)
    t_hi = max(char_time(model), 1.0 / lam)
    for _ in range(400):
        if dist.survival(t_hi) < 1e-14:
            break
        t_hi *= 2.0
    else:
        raise QuadratureError("k-th survival did not decay; mean looks divergent")

    # locate survival level crossings to guide the subdivision
    pts = []
    for level in (0.9, 0.5, 0.1, 0.01):
        lo, hi = 0.0, t_hi
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if dist.survival(mid) > level:
                lo = mid
            else:
                hi = mid
        pts.append(0.5 * (lo + hi))
    pts = sorted(p for p in pts if 0.0 < p < t_hi)

    res = quad(dist.survival, 0.0, t_hi, full_output=1, points=pts or None,
               epsabs=1e-14 * t_hi, epsrel=tol, limit=400)
    if len(res) > 3:
        raise QuadratureError(
            f"mean quadrature: {res[3]} (error estimate {res[1]!r})")
    return res[0]
