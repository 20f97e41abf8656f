"""Self-contained special functions used throughout the package.

Implements both real branches of the Lambert W function (Halley iteration
from branch-appropriate asymptotic starting points) and the upper incomplete
gamma function Gamma(r, z) = int_z^inf u^(r-1) e^(-u) du for arbitrary real
order r, including the negative orders required by the short-time integral
identities. Error function, (log-)gamma and the harmonic-sum digamma are
thin wrappers over the C library via ``math``.

scipy is deliberately not imported here; the test suite cross-checks these
routines against scipy.special and mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Accuracy",
    "EULER_GAMMA",
    "lambert_w0",
    "lambert_wm1",
    "erf",
    "erfc",
    "upper_incomplete_gamma",
    "digamma",
    "trigamma_int",
    "gamma_fn",
    "log_gamma",
    "gamma_derivative_at",
]

EULER_GAMMA = 0.5772156649015328606

# -1/e, the branch point of the Lambert W function.
_BRANCH_POINT = -math.exp(-1.0)


@dataclass(frozen=True)
class Accuracy:
    """Iteration control shared by the iterative routines.

    rel_tol bounds the relative residual at convergence; max_iter bounds the
    iteration count before a non-convergence error is raised.
    """

    rel_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not self.rel_tol > 0.0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


_DEFAULT_ACC = Accuracy()


def _halley_w(z: float, w: float, acc: Accuracy) -> float:
    # Halley iteration on f(w) = w e^w - z. Quadratically safe here because
    # the starting points below are already inside the basin for each branch.
    tol = 1e-13 * max(abs(z), 1e-300)
    for _ in range(acc.max_iter):
        ew = math.exp(w)
        f = w * ew - z
        if abs(f) <= tol:
            return w
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        w = w - f / denom
    ew = math.exp(w)
    if abs(w * ew - z) <= 1e-10 * max(abs(z), 1e-300):
        return w
    raise ArithmeticError(f"Lambert W iteration did not converge for z={z!r}")


def lambert_w0(z: float, acc: Accuracy = _DEFAULT_ACC) -> float:
    """Principal branch W0: the solution w >= -1 of w*e^w = z, for z >= -1/e."""
    z = float(z)
    if z < _BRANCH_POINT:
        if z > _BRANCH_POINT * (1.0 + 1e-14) - 1e-300:
            z = _BRANCH_POINT  # absorb rounding of callers forming -1/e
        else:
            raise ValueError(f"lambert_w0 requires z >= -1/e, got {z}")
    if z == 0.0:
        return 0.0
    if z == _BRANCH_POINT:
        return -1.0
    if z > 3.0:
        # asymptotic start: L1 - L2 + L2/L1
        l1 = math.log(z)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    elif z > -0.25:
        # series around 0: w = z - z^2 + 3/2 z^3 - ...
        w = z * (1.0 - z * (1.0 - 1.5 * z))
    else:
        # branch-point expansion: w = -1 + q - q^2/3, q = sqrt(2(ez+1))
        q = math.sqrt(max(2.0 * (math.e * z + 1.0), 0.0))
        w = -1.0 + q - q * q / 3.0
    w = _halley_w(z, w, acc)
    return max(w, -1.0)


def lambert_wm1(z: float, acc: Accuracy = _DEFAULT_ACC) -> float:
    """Lower branch W-1: the solution w <= -1 of w*e^w = z, for -1/e <= z < 0."""
    z = float(z)
    if z >= 0.0:
        raise ValueError(f"lambert_wm1 requires z < 0, got {z}")
    if z < _BRANCH_POINT:
        if z > _BRANCH_POINT * (1.0 + 1e-14):
            z = _BRANCH_POINT
        else:
            raise ValueError(f"lambert_wm1 requires z >= -1/e, got {z}")
    if z == _BRANCH_POINT:
        return -1.0
    if z > -0.27:
        # near 0^-: w ~ ln(-z) - ln(-ln(-z)), then polish
        l1 = math.log(-z)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    else:
        # branch-point expansion with the sign flipped relative to W0
        q = math.sqrt(max(2.0 * (math.e * z + 1.0), 0.0))
        w = -1.0 - q - q * q / 3.0
    w = _halley_w(z, w, acc)
    return min(w, -1.0)


def erf(x: float) -> float:
    """Error function."""
    return math.erf(x)


def erfc(x: float) -> float:
    """Complementary error function, accurate for large positive x."""
    return math.erfc(x)


def gamma_fn(x: float) -> float:
    """Euler gamma function for x > 0."""
    if x <= 0.0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    """log(Gamma(x)) for x > 0; preferred over gamma_fn for large arguments."""
    if x <= 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _gamma_cf(r: float, z: float, acc: Accuracy) -> float:
    # Legendre continued fraction for Gamma(r, z), reliable for z > r + 1.
    # Modified Lentz evaluation.
    tiny = 1e-300
    b = z + 1.0 - r
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, acc.max_iter * 10):
        an = -i * (i - r)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= acc.rel_tol * 0.01:
            return math.exp(-z + r * math.log(z)) * h
    raise ArithmeticError(f"incomplete gamma continued fraction stalled at r={r}, z={z}")


def _gamma_series_lower(r: float, z: float, acc: Accuracy) -> float:
    # Series for the lower incomplete gamma, used for z <= r + 1 with r > 0:
    # gamma(r,z) = z^r e^-z sum_n z^n / (r (r+1) ... (r+n))
    ap = r
    term = 1.0 / r
    total = term
    for _ in range(acc.max_iter * 10):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * acc.rel_tol * 0.01:
            return total * math.exp(-z + r * math.log(z))
    raise ArithmeticError(f"incomplete gamma series stalled at r={r}, z={z}")


def _exp1(z: float, acc: Accuracy) -> float:
    # E1(z) = Gamma(0, z). Continued fraction for z > 1, else the classic
    # -gamma - ln z + sum (-1)^(n+1) z^n / (n n!) series.
    if z > 1.0:
        return _gamma_cf(0.0, z, acc)
    total = -EULER_GAMMA - math.log(z)
    term = 1.0
    for n in range(1, acc.max_iter * 10):
        term *= -z / n
        contrib = -term / n
        total += contrib
        if abs(contrib) < max(abs(total), 1e-30) * acc.rel_tol * 0.01:
            return total
    raise ArithmeticError(f"E1 series stalled at z={z}")


def upper_incomplete_gamma(r: float, z: float, acc: Accuracy = _DEFAULT_ACC) -> float:
    """Upper incomplete gamma Gamma(r, z) = int_z^inf u^(r-1) e^(-u) du, z > 0.

    Supports any real order r. For r <= 0 the value is reached by downward
    recurrence Gamma(r, z) = (Gamma(r+1, z) - z^r e^(-z)) / r from a
    positive-order evaluation; nonpositive integer orders descend from
    Gamma(0, z) = E1(z) instead, since the recurrence cannot cross r = 0.
    """
    r = float(r)
    z = float(z)
    if z <= 0.0:
        raise ValueError(f"upper_incomplete_gamma requires z > 0, got {z}")
    if r > 0.0:
        if z > r + 1.0:
            return _gamma_cf(r, z, acc)
        return math.gamma(r) - _gamma_series_lower(r, z, acc)
    if r == math.floor(r):
        # integer r <= 0: descend from Gamma(0, z)
        g = _exp1(z, acc)
        rj = 0.0
        ez = math.exp(-z)
        while rj > r:
            rj -= 1.0
            g = (g - z**rj * ez) / rj
        return g
    n = math.ceil(-r) + 1
    r_start = r + n  # in (1, 2], safely positive
    g = upper_incomplete_gamma(r_start, z, acc)
    # z^rj e^-z evaluated in log space; underflow to 0 is the correct limit
    log_z = math.log(z)
    for j in range(1, n + 1):
        rj = r_start - j
        e = rj * log_z - z
        pw = math.exp(e) if e > -745.0 else 0.0
        g = (g - pw) / rj
    return g


def digamma(k: int) -> float:
    """Digamma at positive integers: psi(k) = -gamma + H_(k-1), H_0 = 0."""
    if k < 1 or k != int(k):
        raise ValueError(f"digamma requires an integer k >= 1, got {k}")
    h = 0.0
    for j in range(1, int(k)):
        h += 1.0 / j
    return -EULER_GAMMA + h


def trigamma_int(k: int) -> float:
    """Trigamma at positive integers: psi'(k) = pi^2/6 - sum_(j<k) 1/j^2."""
    if k < 1 or k != int(k):
        raise ValueError(f"trigamma_int requires an integer k >= 1, got {k}")
    s = 0.0
    for j in range(1, int(k)):
        s += 1.0 / (j * j)
    return math.pi * math.pi / 6.0 - s


def gamma_derivative_at(k: int, m: int) -> float:
    """d^m/dt^m Gamma(k + t) at t = 0, for integer k >= 1 and m in {1, 2}.

    m=1 gives Gamma(k) psi(k); m=2 gives Gamma(k) (psi(k)^2 + psi'(k)).
    Higher derivatives would need arbitrary-order polygamma and are out of
    scope here.
    """
    if k < 1 or k != int(k):
        raise ValueError(f"gamma_derivative_at requires an integer k >= 1, got {k}")
    if m == 1:
        return math.gamma(k) * digamma(k)
    if m == 2:
        psi = digamma(k)
        return math.gamma(k) * (psi * psi + trigamma_int(k))
    raise ValueError(f"gamma_derivative_at supports m in {{1, 2}}, got {m}")
