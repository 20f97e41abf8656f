"""Shared fixtures.

The expensive Monte Carlo campaigns are session-scoped and shared across
tests.  Each fixture records its build time; the first test that consumes a
fixture claims that time against its own runtime budget via claim_build_seconds.
"""

from __future__ import annotations

import time

import pytest

from fastfpt.montecarlo import McCampaign, run_campaign
from fastfpt.survival import HalfLineDiffusion, PowerFixture

MASTER_SEED = 20260818


def _build(model, lam, k_max, n_trials, seed):
    t0 = time.monotonic()
    result = run_campaign(McCampaign(model, lam, k_max=k_max, n_trials=n_trials,
                                     seed=seed))
    return result, time.monotonic() - t0


def claim_build_seconds(bundle: dict) -> float:
    """Build seconds of a campaign bundle, charged only to the first caller."""
    if bundle.get("unclaimed", False):
        bundle["unclaimed"] = False
        return bundle["build_seconds"]
    return 0.0


@pytest.fixture(scope="session")
def power_campaigns():
    """Power fixture A=1, p=1: 1e5 trials, k_max=2, rates 1e2/1e4/1e6."""
    model = PowerFixture(1.0, 1.0)
    results = {}
    total = 0.0
    for lam in (1e2, 1e4, 1e6):
        results[lam], secs = _build(model, lam, 2, 100_000, MASTER_SEED)
        total += secs
    return {"model": model, "results": results,
            "build_seconds": total, "unclaimed": True}


@pytest.fixture(scope="session")
def halfline_campaigns():
    """Half-line diffusion L=D=1: 1e5 trials, k_max=1, rates 1e3/1e4.5/1e6."""
    model = HalfLineDiffusion(1.0, 1.0)
    results = {}
    total = 0.0
    for lam in (1e3, 10.0 ** 4.5, 1e6):
        results[lam], secs = _build(model, lam, 1, 100_000, MASTER_SEED)
        total += secs
    return {"model": model, "results": results,
            "build_seconds": total, "unclaimed": True}
