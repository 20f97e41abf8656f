"""Single-searcher survival models S(t) = P(tau > t).

Each model provides the survival function, an exact sampler for the search
time tau, an accurate CDF (never computed as 1 - S when that would cancel
catastrophically at short times), and its short-time law: the leading
behaviour of 1 - S(t) as t -> 0+, either A t^p (power class) or
A t^p e^(-C/t) (exponential class).

Provided models:

* HalfLineDiffusion: diffusive searcher started a distance L from a target
  on the half-line, S(t) = erf(sqrt(L^2/(4Dt))).
* SphereEscape3D: searcher started at the centre of a 3d sphere of radius L,
  escaping through the surface; image-sum series at short times, eigenfunction
  series at long times.
* CtmcNetwork: searcher on a finite network with exponential jump rates,
  absorbed on a target set; survival via uniformization, sampling via exact
  stochastic simulation of the jump chain.
* PowerFixture / ExponentialFixture: closed-form test models. The power
  fixture has CDF min(A t^p, 1), so every downstream quantity has an exact
  reference value; the exponential fixture is the two-state chain S = e^(-rt).
"""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from . import specfun

__all__ = [
    "PowerLaw",
    "ExpLaw",
    "SurvivalModel",
    "HalfLineDiffusion",
    "SphereEscape3D",
    "CtmcNetwork",
    "PowerFixture",
    "ExponentialFixture",
    "halfline_survival",
    "halfline_sample_tau",
    "sphere_survival",
    "sphere_sample_tau",
    "ctmc_survival",
    "ctmc_sample_tau",
    "ctmc_short_time_law",
    "ctmc_from_json",
    "grid_network",
]

# Series terms are kept while the exponent argument is at most this value;
# e^-40 ~ 4.2e-18, below the 1e-16 term cutoff. The Monte Carlo kernels use
# the same constant so that both backends sum identical series. CDFs instead
# keep terms down to the underflow floor: near t -> 0 the CDF itself is of
# the order of the smallest term, so a 1e-16 cutoff would truncate most of
# the value rather than a negligible correction.
SERIES_EXP_CUTOFF = 40.0
_CDF_EXP_CUTOFF = 745.0


@dataclass(frozen=True)
class PowerLaw:
    """Short-time law 1 - S(t) ~ A t^p with A > 0, p > 0."""

    A: float
    p: float

    def __post_init__(self) -> None:
        if not self.A > 0:
            raise ValueError(f"PowerLaw needs A > 0, got {self.A}")
        if not self.p > 0:
            raise ValueError(f"PowerLaw needs p > 0, got {self.p}")
        # normalize numpy scalars so downstream reprs stay plain
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "p", float(self.p))

    def value(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        return self.A * t**self.p


@dataclass(frozen=True)
class ExpLaw:
    """Short-time law 1 - S(t) ~ A t^p e^(-C/t) with A > 0, C > 0, any real p."""

    A: float
    p: float
    C: float

    def __post_init__(self) -> None:
        if not self.A > 0:
            raise ValueError(f"ExpLaw needs A > 0, got {self.A}")
        if not self.C > 0:
            raise ValueError(f"ExpLaw needs C > 0, got {self.C}")
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "C", float(self.C))

    def value(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        e = -self.C / t + self.p * math.log(t)
        return self.A * math.exp(e) if e > -745.0 else 0.0


class SurvivalModel(ABC):
    """Contract: survival(0) = 1, survival non-increasing, survival -> 0."""

    @abstractmethod
    def survival(self, t: float) -> float:
        """P(tau > t)."""

    def cdf(self, t: float) -> float:
        """P(tau <= t). Override when 1 - survival(t) loses precision."""
        return 1.0 - self.survival(t)

    @abstractmethod
    def sample_tau(self, rng: np.random.Generator) -> float:
        """Draw one search time."""

    def sample_tau_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.array([self.sample_tau(rng) for _ in range(n)])

    @abstractmethod
    def short_time_law(self) -> PowerLaw | ExpLaw:
        """Leading behaviour of 1 - S(t) as t -> 0+."""


# ---------------------------------------------------------------------------
# diffusion on the half-line


@dataclass(frozen=True)
class HalfLineDiffusion(SurvivalModel):
    """Diffusion with coefficient D started a distance L from the target.

    S(t) = erf(sqrt(L^2 / (4 D t))). The search time has the exact
    representation tau = L^2 / (2 D Z^2) with Z standard normal, which the
    sampler uses directly (O(1), no inversion).
    """

    L: float = 1.0
    D: float = 1.0

    def __post_init__(self) -> None:
        if not (self.L > 0 and self.D > 0):
            raise ValueError(f"HalfLineDiffusion needs L > 0 and D > 0, got L={self.L}, D={self.D}")

    @property
    def _C(self) -> float:
        return self.L * self.L / (4.0 * self.D)

    def survival(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        return specfun.erf(math.sqrt(self._C / t))

    def cdf(self, t: float) -> float:
        # erfc keeps full relative accuracy where 1 - erf would cancel
        if t <= 0.0:
            return 0.0
        return specfun.erfc(math.sqrt(self._C / t))

    def sample_tau(self, rng: np.random.Generator) -> float:
        z = rng.standard_normal()
        while z == 0.0:
            z = rng.standard_normal()
        return self.L * self.L / (2.0 * self.D * z * z)

    def sample_tau_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        z = rng.standard_normal(n)
        z[z == 0.0] = 1e-300
        return self.L * self.L / (2.0 * self.D * z * z)

    def short_time_law(self) -> ExpLaw:
        return ExpLaw(A=math.sqrt(4.0 * self.D / (self.L * self.L * math.pi)), p=0.5, C=self._C)


# ---------------------------------------------------------------------------
# escape from a sphere


@dataclass(frozen=True)
class SphereEscape3D(SurvivalModel):
    """Searcher at the centre of a sphere of radius L, absorbed at the surface.

    Two complementary series in the scaled time theta = D t / L^2: an image
    sum that converges fast for small theta and an eigenfunction sum for
    large theta, switched at theta = 0.25 where both converge quickly. Terms
    are cut once below e^-40 ~ 4e-18.
    """

    L: float = 1.0
    D: float = 1.0

    T_CROSS_SCALED = 0.25

    def __post_init__(self) -> None:
        if not (self.L > 0 and self.D > 0):
            raise ValueError(f"SphereEscape3D needs L > 0 and D > 0, got L={self.L}, D={self.D}")

    def _theta(self, t: float) -> float:
        return self.D * t / (self.L * self.L)

    @staticmethod
    def _image_cdf_scaled(theta: float, cutoff: float = SERIES_EXP_CUTOFF) -> float:
        # F(theta) = sqrt(4/(pi theta)) sum_j exp(-(2j+1)^2/(4 theta))
        if theta <= 0.0:
            return 0.0
        s = 0.0
        j = 0
        while True:
            arg = (2 * j + 1) ** 2 / (4.0 * theta)
            if arg > cutoff:
                break
            s += math.exp(-arg)
            j += 1
        return math.sqrt(4.0 / (math.pi * theta)) * s

    @staticmethod
    def _eigen_survival_scaled(theta: float) -> float:
        # S(theta) = 2 sum_n (-1)^(n+1) exp(-n^2 pi^2 theta)
        s = 0.0
        n = 1
        while True:
            arg = n * n * math.pi * math.pi * theta
            if arg > SERIES_EXP_CUTOFF:
                break
            s += (2.0 if n % 2 == 1 else -2.0) * math.exp(-arg)
            n += 1
        return s

    def survival(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        theta = self._theta(t)
        if theta <= self.T_CROSS_SCALED:
            s = 1.0 - self._image_cdf_scaled(theta)
        else:
            s = self._eigen_survival_scaled(theta)
        return min(max(s, 0.0), 1.0)

    def cdf(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        theta = self._theta(t)
        if theta <= self.T_CROSS_SCALED:
            f = self._image_cdf_scaled(theta, cutoff=_CDF_EXP_CUTOFF)
        else:
            f = 1.0 - self._eigen_survival_scaled(theta)
        return min(max(f, 0.0), 1.0)

    def _inverse_survival(self, u: float) -> float:
        # solve survival(t) = u by bracketing + bisection, 1e-12 relative in t
        scale = self.L * self.L / self.D
        lo, hi = 1e-12 * scale, scale
        while self.survival(hi) > u:
            hi *= 2.0
            if hi > 1e9 * scale:
                break
        while self.survival(lo) < u:
            lo *= 0.5
            if lo < 1e-300:
                break
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.survival(mid) > u:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-13 * lo:
                break
        return 0.5 * (lo + hi)

    def sample_tau(self, rng: np.random.Generator) -> float:
        u = rng.random()
        while u <= 0.0 or u >= 1.0:
            u = rng.random()
        return self._inverse_survival(u)

    def sample_tau_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random(n)
        return np.array([self._inverse_survival(ui) for ui in u])

    def short_time_law(self) -> ExpLaw:
        l2 = self.L * self.L
        return ExpLaw(A=math.sqrt(4.0 * l2 / (self.D * math.pi)), p=-0.5, C=l2 / (4.0 * self.D))


# ---------------------------------------------------------------------------
# finite-network searcher (continuous-time Markov chain)


class CtmcNetwork(SurvivalModel):
    """Searcher on a finite network, absorbed on a nonempty target set.

    Parameters
    ----------
    rates : (n, n) array_like
        Nonnegative off-diagonal jump rates; rates[i, j] is the rate from
        state i to state j. The diagonal is ignored (the generator diagonal
        is defined by the off-diagonal row sums). Negative off-diagonal
        entries are rejected.
    initial : (n,) array_like
        Probability vector over states; must put zero mass on targets.
    targets : iterable of int
        Nonempty set of absorbing states.

    Survival is computed by uniformization: Poisson-weighted powers of the
    uniformized substochastic matrix on the non-target states, truncated when
    the remaining Poisson mass is below 1e-13 and the last CDF increment is
    below 1e-14 of the accumulated CDF. The absorbed mass (the CDF) is
    accumulated from the per-step absorption increments, a sum of nonnegative
    terms, so it keeps relative accuracy at short times where 1 - S would
    cancel.

    When the initial distribution is supported on states at different
    distances from the target set, the short-time law uses the minimal
    distance p and sums path products over the minimal-distance states only;
    farther starts contribute at higher order in t.
    """

    def __init__(self, rates, initial, targets):
        R = np.asarray(rates, dtype=np.float64).copy()
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise ValueError(f"rates must be square, got shape {R.shape}")
        n = R.shape[0]
        if n < 2:
            raise ValueError("need at least 2 states")
        np.fill_diagonal(R, 0.0)
        if np.any(R < 0.0):
            i, j = np.argwhere(R < 0.0)[0]
            raise ValueError(f"negative off-diagonal rate at ({i}, {j})")

        init = np.asarray(initial, dtype=np.float64)
        if init.shape != (n,):
            raise ValueError(f"initial must have shape ({n},), got {init.shape}")
        if np.any(init < 0.0) or abs(init.sum() - 1.0) > 1e-12:
            raise ValueError("initial must be a probability vector")

        tset = sorted(set(int(s) for s in targets))
        if not tset:
            raise ValueError("targets must be nonempty")
        if tset[0] < 0 or tset[-1] >= n:
            raise ValueError(f"target state out of range 0..{n-1}")
        if len(tset) >= n:
            raise ValueError("at least one non-target state required")
        is_target = np.zeros(n, dtype=bool)
        is_target[tset] = True
        if init[is_target].sum() > 0.0:
            raise ValueError("initial puts mass on target states")

        self.n_states = n
        self.rates = R
        self.initial = init
        self.targets = tuple(tset)
        self._is_target = is_target

        # CSR layout of the full rate matrix, used by the samplers
        indptr = [0]
        indices = []
        vals = []
        for i in range(n):
            nz = np.nonzero(R[i])[0]
            indices.extend(int(j) for j in nz)
            vals.extend(float(R[i, j]) for j in nz)
            indptr.append(len(indices))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.edge_rates = np.asarray(vals, dtype=np.float64)
        self.row_total = R.sum(axis=1)
        # cumulative rates within each row, for inverse-CDF jump selection
        self.edge_cum = np.concatenate(
            [np.cumsum(self.edge_rates[self.indptr[i]:self.indptr[i + 1]]) for i in range(n)]
        ) if len(vals) else np.zeros(0)
        self.is_target8 = is_target.astype(np.uint8)

        # initial-state alias for samplers
        sup = np.nonzero(init)[0]
        self.init_states = sup.astype(np.int64)
        self.init_cdf = np.cumsum(init[sup])
        self.init_cdf[-1] = 1.0

        self._dist = self._distances_to_targets()
        sup_d = self._dist[sup]
        if np.any(np.isinf(sup_d)):
            bad = sup[np.isinf(sup_d)][0]
            raise ValueError(f"no path from initial state {bad} to any target")
        # every state the walk can reach must also reach a target, otherwise
        # the jump-chain sampler could be trapped forever
        reachable = self._reachable_from(sup)
        trapped = reachable & ~is_target & np.isinf(self._dist)
        if np.any(trapped):
            raise ValueError(f"state {np.nonzero(trapped)[0][0]} is reachable but cannot reach a target")

        # uniformization pieces on the non-target subspace
        nt = np.nonzero(~is_target)[0]
        self._nt = nt
        self._lam_unif = float(self.row_total[nt].max())
        if self._lam_unif <= 0.0:
            raise ValueError("no motion out of non-target states")
        P = np.zeros((len(nt), len(nt)))
        pos = {int(s): i for i, s in enumerate(nt)}
        for a, s in enumerate(nt):
            P[a, a] = 1.0 - self.row_total[s] / self._lam_unif
            for e in range(self.indptr[s], self.indptr[s + 1]):
                j = self.indices[e]
                if not is_target[j]:
                    P[a, pos[int(j)]] += self.edge_rates[e] / self._lam_unif
        self._P_sub = P
        # per-step absorption probability out of each non-target state
        self._absorb = np.array(
            [sum(self.edge_rates[e] for e in range(self.indptr[s], self.indptr[s + 1])
                 if is_target[self.indices[e]]) / self._lam_unif for s in nt]
        )
        self._init_sub = init[nt]

    def _distances_to_targets(self) -> np.ndarray:
        # BFS over reversed positive-rate edges, seeded at the targets
        n = self.n_states
        dist = np.full(n, np.inf)
        frontier = list(self.targets)
        for s in frontier:
            dist[s] = 0
        R = self.rates
        d = 0
        while frontier:
            d += 1
            nxt = []
            for t in frontier:
                for i in np.nonzero(R[:, t])[0]:
                    if dist[i] == np.inf:
                        dist[i] = d
                        nxt.append(int(i))
            frontier = nxt
        return dist

    def _reachable_from(self, starts) -> np.ndarray:
        seen = np.zeros(self.n_states, dtype=bool)
        stack = [int(s) for s in starts]
        for s in stack:
            seen[s] = True
        while stack:
            s = stack.pop()
            if self._is_target[s]:
                continue
            for e in range(self.indptr[s], self.indptr[s + 1]):
                j = int(self.indices[e])
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        return seen

    def _uniformized(self, t: float) -> tuple[float, float]:
        # returns (survival, absorbed) with truncation error below 1e-13
        if t <= 0.0:
            return 1.0, 0.0
        mu = self._lam_unif * t
        v = self._init_sub.copy()
        surv = 0.0
        absorbed_cum = 0.0
        cdf_val = 0.0
        pois_cum = 0.0
        m = 0
        m_max = int(mu + 40.0 * math.sqrt(mu + 1.0) + 60.0)
        lg = 0.0  # log m!
        lmu = math.log(mu)
        while m <= m_max:
            if m > 0:
                lg += math.log(m)
            lp = m * lmu - mu - lg
            pmf = math.exp(lp) if lp > -745.0 else 0.0
            s_m = float(v.sum())
            surv += pmf * s_m
            inc = pmf * absorbed_cum
            cdf_val += inc
            pois_cum += pmf
            # absolute cutoff suffices for survival; the cdf needs the last
            # increment relatively small too, or short-time values lose the
            # next Poisson order (a relative error ~ mu, fatal under quad).
            # cdf_val == 0 with a live pmf means m is still below the graph
            # distance: absorption has not started, keep going
            if (pois_cum >= 1.0 - 1e-13 and m >= mu
                    and inc <= 1e-14 * cdf_val
                    and (cdf_val > 0.0 or pmf == 0.0)):
                break
            absorbed_cum += float(v @ self._absorb)
            v = v @ self._P_sub
            m += 1
        # remaining Poisson mass sits at m > m_stop where absorption has
        # essentially converged; attribute it to the last absorbed level.
        # 1 - pois_cum alone is cancellation noise (~1e-16 of 1) once the
        # true tail is smaller than that, so cap it by the clean geometric
        # bound pmf * r/(1-r), r = mu/(m+1) < 1 at every exit
        r = mu / (m + 1.0)
        tail = min(max(1.0 - pois_cum, 0.0), pmf * r / (1.0 - r))
        cdf_val += tail * absorbed_cum
        return min(max(surv, 0.0), 1.0), min(max(cdf_val, 0.0), 1.0)

    def survival(self, t: float) -> float:
        return self._uniformized(t)[0]

    def cdf(self, t: float) -> float:
        return self._uniformized(t)[1]

    def sample_tau(self, rng: np.random.Generator) -> float:
        u = rng.random()
        s = int(self.init_states[np.searchsorted(self.init_cdf, u, side="left")])
        t = 0.0
        while True:
            total = self.row_total[s]
            t += rng.exponential() / total
            lo, hi = self.indptr[s], self.indptr[s + 1]
            u2 = rng.random() * total
            e = lo + int(np.searchsorted(self.edge_cum[lo:hi], u2, side="left"))
            e = min(e, hi - 1)
            s = int(self.indices[e])
            if self._is_target[s]:
                return t

    def short_time_law(self) -> PowerLaw:
        sup = self.init_states
        p = int(self._dist[sup].min())
        g = self._is_target.astype(np.float64)
        for _ in range(p):
            g = self.rates @ g
            g[self._is_target] = 0.0  # paths may not pass through a target
        a_sum = 0.0
        for s in sup:
            if self._dist[s] == p:
                a_sum += self.initial[s] * g[s]
        return PowerLaw(A=a_sum / math.factorial(p), p=float(p))


# ---------------------------------------------------------------------------
# closed-form fixtures


@dataclass(frozen=True)
class PowerFixture(SurvivalModel):
    """Exact power-class model with CDF min(A t^p, 1).

    Everything downstream is available in closed form, e.g.
    Phi(t) = A t^(p+1)/(p+1) for t below the support end (1/A)^(1/p).
    """

    A: float = 1.0
    p: float = 1.0

    def __post_init__(self) -> None:
        if not (self.A > 0 and self.p > 0):
            raise ValueError(f"PowerFixture needs A > 0 and p > 0, got A={self.A}, p={self.p}")

    @property
    def t_end(self) -> float:
        return (1.0 / self.A) ** (1.0 / self.p)

    def survival(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        return max(1.0 - self.A * t**self.p, 0.0)

    def cdf(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        return min(self.A * t**self.p, 1.0)

    def sample_tau(self, rng: np.random.Generator) -> float:
        u = rng.random()
        while u <= 0.0:
            u = rng.random()
        return (u / self.A) ** (1.0 / self.p)

    def sample_tau_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return (rng.random(n) / self.A) ** (1.0 / self.p)

    def short_time_law(self) -> PowerLaw:
        return PowerLaw(A=self.A, p=self.p)


@dataclass(frozen=True)
class ExponentialFixture(SurvivalModel):
    """Two-state chain with rate r to the target: S(t) = e^(-r t)."""

    rate: float = 1.0

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise ValueError(f"ExponentialFixture needs rate > 0, got {self.rate}")

    def survival(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        return math.exp(-self.rate * t)

    def cdf(self, t: float) -> float:
        return -math.expm1(-self.rate * t) if t > 0.0 else 0.0

    def sample_tau(self, rng: np.random.Generator) -> float:
        return rng.exponential() / self.rate

    def sample_tau_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.exponential(size=n) / self.rate

    def short_time_law(self) -> PowerLaw:
        return PowerLaw(A=self.rate, p=1.0)


# ---------------------------------------------------------------------------
# operation-style wrappers


def halfline_survival(model: HalfLineDiffusion, t: float) -> float:
    return model.survival(t)


def halfline_sample_tau(model: HalfLineDiffusion, rng: np.random.Generator) -> float:
    return model.sample_tau(rng)


def sphere_survival(model: SphereEscape3D, t: float) -> float:
    return model.survival(t)


def sphere_sample_tau(model: SphereEscape3D, rng: np.random.Generator) -> float:
    return model.sample_tau(rng)


def ctmc_survival(model: CtmcNetwork, t: float) -> float:
    return model.survival(t)


def ctmc_sample_tau(model: CtmcNetwork, rng: np.random.Generator) -> float:
    return model.sample_tau(rng)


def ctmc_short_time_law(model: CtmcNetwork) -> PowerLaw:
    return model.short_time_law()


# ---------------------------------------------------------------------------
# construction helpers


def grid_network(width: int, height: int, start, target, rate: float = 1.0) -> CtmcNetwork:
    """Nearest-neighbour walk on a width x height grid with a uniform rate.

    States are indexed y*width + x. The searcher starts at ``start = (x, y)``
    and the single target cell is ``target = (x, y)``.
    """
    if width < 1 or height < 1 or width * height < 2:
        raise ValueError("grid must contain at least 2 cells")
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate}")
    n = width * height

    def idx(x: int, y: int) -> int:
        if not (0 <= x < width and 0 <= y < height):
            raise ValueError(f"cell ({x}, {y}) outside {width}x{height} grid")
        return y * width + x

    R = np.zeros((n, n))
    for y in range(height):
        for x in range(width):
            i = idx(x, y)
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                if 0 <= x + dx < width and 0 <= y + dy < height:
                    R[i, idx(x + dx, y + dy)] = rate
    init = np.zeros(n)
    init[idx(*start)] = 1.0
    return CtmcNetwork(R, init, [idx(*target)])


def ctmc_from_json(doc) -> CtmcNetwork:
    """Build a CtmcNetwork from a JSON document (dict or JSON text).

    Two forms are accepted::

        {"n_states": n, "edges": [[from, to, rate], ...],
         "initial": [[state, prob], ...], "targets": [state, ...]}

        {"grid": [W, H], "start": [x, y], "target": [x, y], "rate": r}
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise ValueError("expected a JSON object")
    if "grid" in doc:
        w, h = doc["grid"]
        return grid_network(int(w), int(h), tuple(doc["start"]), tuple(doc["target"]),
                            float(doc.get("rate", 1.0)))
    n = int(doc["n_states"])
    R = np.zeros((n, n))
    for i, j, r in doc["edges"]:
        R[int(i), int(j)] = float(r)
    init = np.zeros(n)
    for s, prob in doc["initial"]:
        init[int(s)] = float(prob)
    return CtmcNetwork(R, init, [int(s) for s in doc["targets"]])
