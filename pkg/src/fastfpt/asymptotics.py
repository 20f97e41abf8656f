"""Fast-immigration asymptotics for the k-th target-finding time.

At a large immigration rate lam, everything is controlled by the short-time
law of the single-searcher process, because the k-th find happens long
before a typical searcher would finish. With scaling constants (a, b) the
rescaled time (T_k - b)/a converges to a parameter-free limit law:

* power class, 1 - S ~ A t^p: a = ((p+1)/(A lam))^(1/(p+1)), b = 0, and the
  limit of the first find is the Weibull minimum law exp(-x^(p+1)); the k-th
  find follows Y_k with survival Gamma(k, x^(p+1))/(k-1)!.
* exponential class, 1 - S ~ A t^p e^(-C/t): T_k concentrates at b ~
  C/log(C lam) with spread a ~ C/log^2(C lam), and (T_k - b)/a follows Z_k
  with survival Gamma(k, e^x)/(k-1)! (k = 1 is the Gumbel minimum law).

Two parameterizations of (a, b) are provided for the exponential class: the
explicit log-expansion ("theorem") and the Lambert-W closed form
("lambertw"), which resums the log-log corrections and is markedly more
accurate at any finite rate. Convergence in the exponential class is
logarithmic in lam, so even at lam ~ 1e6 the limit law is approached only
roughly; the Lambert-W mean estimate b + psi(k) a is far closer to the true
mean than the distributional convergence would suggest.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from . import specfun
from .survival import ExpLaw, PowerLaw

__all__ = [
    "ScalingConstants",
    "LimitLaw",
    "YkLaw",
    "ZkLaw",
    "scaling_power",
    "scaling_exp_theorem",
    "scaling_exp_lambertw",
    "limit_survival_yk",
    "limit_density_zk",
    "moment_limit_power",
    "moment_limit_exp",
    "mean_estimate",
    "equivalent_initial_searchers",
]


@dataclass(frozen=True)
class ScalingConstants:
    """Affine rescaling (T - b)/a; variant records which rule produced it."""

    a: float
    b: float
    variant: str

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ValueError(f"scale a must be positive and finite, got {self.a}")
        if not math.isfinite(self.b):
            raise ValueError(f"shift b must be finite, got {self.b}")
        if self.variant not in ("power", "theorem", "lambertw"):
            raise ValueError(f"unknown variant {self.variant!r}")


def _require_rate(lam: float) -> None:
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"immigration rate must be positive and finite, got {lam}")


def scaling_power(law: PowerLaw, lam: float) -> ScalingConstants:
    """a = ((p+1)/(A lam))^(1/(p+1)), b = 0."""
    if not isinstance(law, PowerLaw):
        raise TypeError(f"power-class scaling needs a PowerLaw, got {type(law).__name__}")
    _require_rate(lam)
    a = (law.A * lam / (law.p + 1.0)) ** (-1.0 / (law.p + 1.0))
    return ScalingConstants(a=a, b=0.0, variant="power")


def scaling_exp_theorem(law: ExpLaw, lam: float) -> ScalingConstants:
    """Log-expansion constants; requires C lam > e so the leading log exceeds 1."""
    if not isinstance(law, ExpLaw):
        raise TypeError(f"exponential-class scaling needs an ExpLaw, got {type(law).__name__}")
    _require_rate(lam)
    cl = law.C * lam
    if cl <= math.e:
        raise ValueError(f"need C*lam > e for the log expansion, got C*lam = {cl}")
    ell = math.log(cl)
    a = law.C / (ell * ell)
    b = (law.C / ell
         + law.C * (law.p + 2.0) * math.log(ell) / (ell * ell)
         - law.C * math.log(law.A * law.C**law.p) / (ell * ell))
    return ScalingConstants(a=a, b=b, variant="theorem")


def scaling_exp_lambertw(law: ExpLaw, lam: float) -> ScalingConstants:
    """Lambert-W closed form: b = C/((p+2) W), a = C/((p+2)^2 W (W+1)).

    W solves the saddle condition; the branch follows the sign of p+2
    (principal branch for p+2 > 0, lower branch for p+2 < 0). p = -2 has no
    W form and is rejected.
    """
    if not isinstance(law, ExpLaw):
        raise TypeError(f"exponential-class scaling needs an ExpLaw, got {type(law).__name__}")
    _require_rate(lam)
    q = law.p + 2.0
    if q == 0.0:
        raise ValueError("p = -2 is outside the Lambert-W parameterization; "
                         "use scaling_exp_theorem instead")
    arg = (law.A * law.C ** (law.p + 1.0) * lam) ** (1.0 / q) / q
    if q > 0.0:
        w = specfun.lambert_w0(arg)
    else:
        if arg < -1.0 / math.e:
            lam_min = (abs(q) / math.e) ** q / (law.A * law.C ** (law.p + 1.0))
            raise ValueError(
                f"rate {lam} is below the lower-branch domain; "
                f"the W form needs lam >= {lam_min:.6g} for this law")
        w = specfun.lambert_wm1(arg)
    b = law.C / (q * w)
    a = law.C / (q * q * w * (w + 1.0))
    return ScalingConstants(a=a, b=b, variant="lambertw")


# ---------------------------------------------------------------------------
# limit laws


class LimitLaw(ABC):
    """Parameter-free limit of the rescaled k-th finding time."""

    @abstractmethod
    def survival(self, x: float) -> float: ...

    def cdf(self, x: float) -> float:
        return 1.0 - self.survival(x)

    @abstractmethod
    def density(self, x: float) -> float: ...

    @abstractmethod
    def moment(self, m: int) -> float: ...


@dataclass(frozen=True)
class YkLaw(LimitLaw):
    """Power-class limit: survival Gamma(k, x^(p+1))/(k-1)! on x >= 0.

    k = 1 is the Weibull minimum law exp(-x^(p+1)).
    """

    k: int = 1
    p: float = 1.0

    def __post_init__(self) -> None:
        if self.k < 1 or self.k != int(self.k):
            raise ValueError(f"order k must be an integer >= 1, got {self.k}")
        if not self.p > 0.0:
            raise ValueError(f"need p > 0, got {self.p}")

    def survival(self, x: float) -> float:
        if x <= 0.0:
            return 1.0
        g = specfun.upper_incomplete_gamma(float(self.k), x ** (self.p + 1.0))
        return min(g / math.gamma(self.k), 1.0)

    def density(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        q = self.p + 1.0
        le = (self.p + q * (self.k - 1.0)) * math.log(x) - x**q
        if le < -745.0:
            return 0.0
        return q * math.exp(le) / math.gamma(self.k)

    def moment(self, m: int) -> float:
        if m < 1:
            raise ValueError(f"moment order must be >= 1, got {m}")
        return math.gamma(self.k + m / (self.p + 1.0)) / math.gamma(self.k)


@dataclass(frozen=True)
class ZkLaw(LimitLaw):
    """Exponential-class limit: survival Gamma(k, e^x)/(k-1)! on the real line.

    k = 1 is the Gumbel minimum law exp(-e^x). Only the first two moments
    are provided: E[Z_k] = psi(k) and E[Z_k^2] = psi(k)^2 + psi'(k).
    """

    k: int = 1

    def __post_init__(self) -> None:
        if self.k < 1 or self.k != int(self.k):
            raise ValueError(f"order k must be an integer >= 1, got {self.k}")

    def survival(self, x: float) -> float:
        if x > 700.0:
            return 0.0
        ex = math.exp(x)
        if ex == 0.0:  # e^x underflowed; Gamma(k, 0) = (k-1)!
            return 1.0
        g = specfun.upper_incomplete_gamma(float(self.k), ex)
        return min(g / math.gamma(self.k), 1.0)

    def density(self, x: float) -> float:
        if x > 700.0:
            return 0.0
        le = self.k * x - math.exp(x)
        if le < -745.0:
            return 0.0
        return math.exp(le) / math.gamma(self.k)

    def moment(self, m: int) -> float:
        if m == 1:
            return specfun.digamma(self.k)
        if m == 2:
            d = specfun.digamma(self.k)
            return d * d + specfun.trigamma_int(self.k)
        raise ValueError(f"only moments m = 1, 2 are available, got m = {m}")


def limit_survival_yk(k: int, p: float, x: float) -> float:
    return YkLaw(k=k, p=p).survival(x)


def limit_density_zk(k: int, x: float) -> float:
    return ZkLaw(k=k).density(x)


def moment_limit_power(k: int, p: float, m: int) -> float:
    """E[Y_k^m] = Gamma(k + m/(p+1)) / (k-1)!."""
    return YkLaw(k=k, p=p).moment(m)


def moment_limit_exp(k: int, m: int) -> float:
    """E[Z_k] = psi(k); E[Z_k^2] = psi(k)^2 + psi'(k)."""
    return ZkLaw(k=k).moment(m)


# ---------------------------------------------------------------------------
# mean estimates and the fixed-population correspondence


def mean_estimate(law: PowerLaw | ExpLaw, lam: float, k: int = 1,
                  variant: str = "full") -> float:
    """Asymptotic estimate of E[T_k] at immigration rate lam.

    Power class: a * Gamma(k + 1/(p+1))/(k-1)! (variant is ignored, the
    leading term is the whole estimate). Exponential class: "full" gives
    b + psi(k) a with the Lambert-W constants; "leading" keeps only
    C/log(C lam), the first term of the expansion.
    """
    if variant not in ("full", "leading"):
        raise ValueError(f"variant must be 'full' or 'leading', got {variant!r}")
    if k < 1 or k != int(k):
        raise ValueError(f"order k must be an integer >= 1, got {k}")
    _require_rate(lam)
    if isinstance(law, PowerLaw):
        sc = scaling_power(law, lam)
        return sc.a * moment_limit_power(k, law.p, 1)
    if isinstance(law, ExpLaw):
        if variant == "leading":
            cl = law.C * lam
            if cl <= 1.0:
                raise ValueError(f"leading term needs C*lam > 1, got {cl}")
            return law.C / math.log(cl)
        sc = scaling_exp_lambertw(law, lam)
        return sc.b + specfun.digamma(k) * sc.a
    raise TypeError(f"expected PowerLaw or ExpLaw, got {type(law).__name__}")


def equivalent_initial_searchers(law: PowerLaw | ExpLaw, lam: float):
    """Map the immigration problem to N searchers all present at time zero.

    Returns (law_0, N) such that a fixed population of N independent
    searchers whose single-searcher short-time law is law_0 has the same
    leading small-t extreme statistics: lam * integral_0^t law ~ N * law_0(t).

    Power class: law_0 = PowerLaw(A^(1+1/p)/(p+1), p+1), N = lam A^(-1/p).
    Exponential class: law_0 = ExpLaw(A/C^2, p+2, C), N = lam C.
    """
    _require_rate(lam)
    if isinstance(law, PowerLaw):
        n_eq = lam * law.A ** (-1.0 / law.p)
        return PowerLaw(A=law.A ** (1.0 + 1.0 / law.p) / (law.p + 1.0), p=law.p + 1.0), n_eq
    if isinstance(law, ExpLaw):
        return ExpLaw(A=law.A / (law.C * law.C), p=law.p + 2.0, C=law.C), lam * law.C
    raise TypeError(f"expected PowerLaw or ExpLaw, got {type(law).__name__}")
