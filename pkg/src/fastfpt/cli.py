"""Command line harness exposing the library as subcommands.

Every subcommand emits a machine-readable table (CSV or JSON) and is
deterministic given the configuration and seed, so archived outputs can be
reproduced byte for byte.  Plot rendering is out of scope; the tables are
meant to be fed to any external plotting tool.

Subcommands:

  density     scaled k-th passage-time density: MC histogram, analytic
              finite-rate curve, and the limiting law, per immigration rate
  mean-error  numeric mean vs asymptotic estimates across rates
  validate    invariant suite; pass/fail JSON, nonzero exit on failure
  survival    tabulate single-searcher, first-passage, and k-th survival
  constants   scaling constants a, b for each rate, all applicable variants
  equiv       fixed-population search equivalent to an immigration stream

Model grammar for --model (and the "model" config key):

  halfline:L=1,D=1
  sphere:L=1,D=1
  power:A=1,p=1
  exp:rate=1
  grid:W=5,H=5,sx=0,sy=0,tx=2,ty=1,rate=1
  ctmc:/path/to/network.json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .survival import (
    ExpLaw,
    ExponentialFixture,
    HalfLineDiffusion,
    PowerFixture,
    PowerLaw,
    SphereEscape3D,
    SurvivalModel,
    ctmc_from_json,
    grid_network,
)
from .immigration import (
    CumulativeIntegralTable,
    KthFptDistribution,
    exactly_j_found_probability,
    integral_one_minus_s,
    kth_density,
    kth_survival,
    mean_kth_fpt_numeric,
    survival_with_immigration,
)
from .asymptotics import (
    ScalingConstants,
    YkLaw,
    ZkLaw,
    mean_estimate,
    equivalent_initial_searchers,
    scaling_exp_lambertw,
    scaling_exp_theorem,
    scaling_power,
)
from .montecarlo import McCampaign, ks_distance, run_campaign


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "exp:rate=1"
    lambdas: tuple[float, ...] = (1.0,)
    ks: tuple[int, ...] = (1,)
    trials: int = 10000
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    workers: int | None = None
    variant: str = "lambertw"

    def __post_init__(self):
        for lam in self.lambdas:
            if not (lam >= 0.0 and math.isfinite(lam)):
                raise ValueError(f"immigration rates must be finite and >= 0, got {lam}")
        for k in self.ks:
            if k < 1:
                raise ValueError(f"order statistics k must be >= 1, got {k}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.variant not in ("theorem", "lambertw"):
            raise ValueError(f"variant must be theorem or lambertw, got {self.variant!r}")


def parse_model(spec: str) -> SurvivalModel:
    """Build a survival model from the colon grammar in the module docstring."""
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    if name == "ctmc":
        if not rest:
            raise ValueError("ctmc model needs a file path, e.g. ctmc:network.json")
        with open(rest, "r", encoding="utf-8") as fh:
            return ctmc_from_json(fh.read())

    params: dict[str, float] = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not _:
                raise ValueError(f"bad model parameter {item!r}; expected key=value")
            params[key.strip()] = float(val)

    def take(key: str, default: float) -> float:
        return params.pop(key, default)

    if name == "halfline":
        model = HalfLineDiffusion(L=take("L", 1.0), D=take("D", 1.0))
    elif name == "sphere":
        model = SphereEscape3D(L=take("L", 1.0), D=take("D", 1.0))
    elif name == "power":
        model = PowerFixture(A=take("A", 1.0), p=take("p", 1.0))
    elif name in ("exp", "exponential"):
        model = ExponentialFixture(rate=take("rate", 1.0))
    elif name == "grid":
        model = grid_network(
            int(take("W", 5.0)), int(take("H", 5.0)),
            (int(take("sx", 0.0)), int(take("sy", 0.0))),
            (int(take("tx", 2.0)), int(take("ty", 1.0))),
            rate=take("rate", 1.0))
    else:
        raise ValueError(f"unknown model {name!r}; see --help for the grammar")
    if params:
        raise ValueError(f"unknown parameters for model {name!r}: {sorted(params)}")
    return model


def scaling_for(model: SurvivalModel, lam: float, variant: str) -> ScalingConstants:
    """Scaling constants for a model at rate lam; power class has one variant."""
    law = model.short_time_law()
    if isinstance(law, PowerLaw):
        return scaling_power(law, lam)
    if variant == "theorem":
        return scaling_exp_theorem(law, lam)
    return scaling_exp_lambertw(law, lam)


# --- table serialization -------------------------------------------------
#
# Cells are None, int, float, or str.  Floats are written with repr so a
# parse of the emitted file reproduces the table exactly; ints stay bare so
# the round trip also preserves their type.

def _norm_cell(v):
    # numpy scalars repr as np.float64(...); collapse them to builtins
    if isinstance(v, float):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _cell_to_text(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _text_to_cell(s: str):
    if s == "":
        return None
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def render_table(subcommand: str, columns: list[str], rows: list[list], fmt: str) -> str:
    rows = [[_norm_cell(v) for v in row] for row in rows]
    if fmt == "json":
        doc = {
            "tool": "fastfpt",
            "version": __version__,
            "subcommand": subcommand,
            "columns": columns,
            "rows": rows,
        }
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# fastfpt v{__version__} {subcommand}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell_to_text(v) for v in row])
    return buf.getvalue()


def read_table(text: str) -> tuple[str, list[str], list[list]]:
    """Parse a table emitted by render_table, either format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        return doc["subcommand"], doc["columns"], doc["rows"]
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# fastfpt v"):
        raise ValueError("not a fastfpt table: missing header comment")
    subcommand = lines[0].split()[-1]
    reader = csv.reader(lines[1:])
    parsed = list(reader)
    columns = parsed[0]
    rows = [[_text_to_cell(c) for c in row] for row in parsed[1:]]
    return subcommand, columns, rows


def _emit(cfg: ExperimentConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ----------------------------------------------------------


def _phi_table(model: SurvivalModel, t_lo: float, t_hi: float) -> CumulativeIntegralTable | None:
    try:
        return CumulativeIntegralTable(model, t_lo, t_hi)
    except Exception:
        return None  # fall back to direct quadrature inside the distribution


def cmd_density(cfg: ExperimentConfig) -> tuple[list[str], list[list]]:
    model = parse_model(cfg.model)
    law = model.short_time_law()
    columns = ["lambda", "k", "x", "density_mc", "density_exact", "density_limit", "ks_limit"]
    rows: list[list] = []
    k_max = max(cfg.ks)
    for lam in cfg.lambdas:
        campaign = McCampaign(model, lam, k_max=(1 if lam == 0.0 else k_max),
                              n_trials=cfg.trials, seed=cfg.seed, workers=cfg.workers)
        result = run_campaign(campaign)
        for k in cfg.ks:
            if lam == 0.0:
                if k != 1:
                    continue
                a, b = 1.0, 0.0
                limit = None
            else:
                consts = scaling_for(model, lam, cfg.variant)
                a, b = consts.a, consts.b
                limit = YkLaw(k, law.p) if isinstance(law, PowerLaw) else ZkLaw(k)
            samples = result.samples[:, k - 1]
            x = np.sort((samples - b) / a)
            ks_stat = float(ks_distance(x, limit)) if limit is not None else None

            hist, edges = np.histogram(x, bins="fd", density=True)
            centers = 0.5 * (edges[:-1] + edges[1:])
            t_pos = a * centers + b
            mask = t_pos > 0.0
            table = None
            if lam > 0.0 and mask.any():
                table = _phi_table(model, 0.5 * float(t_pos[mask].min()),
                                   2.0 * float(t_pos[mask].max()))
            for xc, dens_mc, t in zip(centers, hist, t_pos):
                if t <= 0.0:
                    exact = 0.0
                else:
                    exact = a * kth_density(model, lam, k, float(t), table=table)
                lim = limit.density(float(xc)) if limit is not None else None
                rows.append([float(lam), int(k), float(xc), float(dens_mc),
                             float(exact), lim, ks_stat])
    return columns, rows


def cmd_mean_error(cfg: ExperimentConfig) -> tuple[list[str], list[list]]:
    model = parse_model(cfg.model)
    law = model.short_time_law()
    exp_class = isinstance(law, ExpLaw)
    columns = ["lambda", "k", "mean_numeric", "mean_full", "mean_leading",
               "rel_err_full", "rel_err_leading", "note"]
    rows: list[list] = []
    for k in cfg.ks:
        for lam in cfg.lambdas:
            mean_num = mean_kth_fpt_numeric(model, lam, k)
            note = None
            try:
                full = mean_estimate(law, lam, k, variant="full")
                rel_full = 1.0 - full / mean_num
            except ValueError as exc:
                full = rel_full = None
                note = str(exc)
            leading = rel_lead = None
            if exp_class:
                try:
                    leading = mean_estimate(law, lam, k, variant="leading")
                    rel_lead = 1.0 - leading / mean_num
                except ValueError as exc:
                    note = str(exc) if note is None else f"{note}; {exc}"
            rows.append([float(lam), int(k), mean_num, full, leading,
                         rel_full, rel_lead, note])
    return columns, rows


def cmd_survival(cfg: ExperimentConfig) -> tuple[list[str], list[list]]:
    model = parse_model(cfg.model)
    columns = ["lambda", "k", "t", "survival_single", "survival_first", "survival_kth"]
    rows: list[list] = []
    n_pts = 25
    for lam in cfg.lambdas:
        for k in cfg.ks:
            if lam == 0.0 and k > 1:
                continue
            dist = KthFptDistribution(model, lam, k)
            t_lo = _level_crossing(dist, 0.999)
            t_hi = _level_crossing(dist, 0.001)
            for t in np.geomspace(t_lo, t_hi, n_pts):
                t = float(t)
                s_single = model.survival(t)
                s_first = survival_with_immigration(model, lam, t)
                s_kth = dist.survival(t)
                rows.append([float(lam), int(k), t, s_single, s_first, s_kth])
    return columns, rows


def _level_crossing(dist: KthFptDistribution, level: float) -> float:
    hi = 1.0
    for _ in range(200):
        if dist.survival(hi) < level:
            break
        hi *= 2.0
    lo = 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if dist.survival(mid) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cmd_constants(cfg: ExperimentConfig) -> tuple[list[str], list[list]]:
    model = parse_model(cfg.model)
    law = model.short_time_law()
    columns = ["lambda", "variant", "a", "b", "note"]
    rows: list[list] = []
    for lam in cfg.lambdas:
        if lam == 0.0:
            rows.append([float(lam), None, None, None, "no immigration: constants undefined"])
            continue
        if isinstance(law, PowerLaw):
            c = scaling_power(law, lam)
            rows.append([float(lam), "power", c.a, c.b, None])
            continue
        for variant, fn in (("theorem", scaling_exp_theorem),
                            ("lambertw", scaling_exp_lambertw)):
            try:
                c = fn(law, lam)
                rows.append([float(lam), variant, c.a, c.b, None])
            except ValueError as exc:
                rows.append([float(lam), variant, None, None, str(exc)])
    return columns, rows


def cmd_equiv(cfg: ExperimentConfig) -> tuple[list[str], list[list]]:
    model = parse_model(cfg.model)
    law = model.short_time_law()
    family = "exp" if isinstance(law, ExpLaw) else "power"
    columns = ["lambda", "family", "A", "p", "C",
               "A_equiv", "p_equiv", "C_equiv", "n_equiv"]
    rows: list[list] = []
    for lam in cfg.lambdas:
        law2, n_eq = equivalent_initial_searchers(law, lam)
        c_in = law.C if isinstance(law, ExpLaw) else None
        c_out = law2.C if isinstance(law2, ExpLaw) else None
        rows.append([float(lam), family, law.A, law.p, c_in,
                     law2.A, law2.p, c_out, float(n_eq)])
    return columns, rows


# --- validate -------------------------------------------------------------


def _check(name, measured, bound, passed) -> dict:
    return {"name": name, "measured": measured, "bound": bound, "passed": bool(passed)}


def run_validation(tol_scale: float = 1.0, full: bool = False) -> dict:
    """Invariant suite over the canonical models; returns the report dict.

    The two asymptotic-law checks at extreme rates converge only
    logarithmically and sit outside the default gate; pass full=True to
    include them (they report their measured deviations and fail).
    """
    checks: list[dict] = []

    # short-time law of the worked 5x5 grid is an exact rational
    grid = grid_network(5, 5, (0, 0), (2, 1))
    glaw = grid.short_time_law()
    checks.append(_check("grid_short_time_law_exact", [glaw.A, glaw.p], [0.5, 3.0],
                         glaw.A == 0.5 and glaw.p == 3.0))

    # fast-immigration rescaling of the cumulative integral, power class
    pf = PowerFixture(1.0, 1.0)
    lam = 1e8
    a = scaling_power(pf.short_time_law(), lam).a
    dev = max(abs(lam * integral_one_minus_s(pf, a * x) - x * x) / (x * x)
              for x in (0.5, 1.0, 2.0))
    checks.append(_check("power_lemma_rescaled_integral", dev, 0.01 * tol_scale,
                         dev <= 0.01 * tol_scale))

    # k-th survival stays a probability with the exponent driven to 1e4
    ef = ExponentialFixture(1.0)
    vals = [kth_survival(ef, 1000.0, k, 11.0) for k in (1, 2, 5)]
    ok = all(math.isfinite(v) and 0.0 <= v <= 1.0 for v in vals)
    checks.append(_check("kth_survival_bounded_large_exponent", vals, None, ok))

    # first-passage survival equals the product form evaluated independently
    hl = HalfLineDiffusion(1.0, 1.0)
    dev = max(abs(survival_with_immigration(hl, 2.0, t)
                  - hl.survival(t) * math.exp(-2.0 * integral_one_minus_s(hl, t)))
              for t in (0.1, 1.0, 10.0))
    checks.append(_check("survival_product_identity", dev, 1e-12 * tol_scale,
                         dev <= 1e-12 * tol_scale))

    # count probabilities telescope into the k-th survival
    dev = max(abs(sum(exactly_j_found_probability(ef, 1.5, j, t) for j in range(4))
                  - kth_survival(ef, 1.5, 4, t))
              for t in (0.5, 1.0, 2.0))
    checks.append(_check("count_probabilities_telescope", dev, 1e-12 * tol_scale,
                         dev <= 1e-12 * tol_scale))

    # frozen value of the count probability at a hand-checkable point
    val = exactly_j_found_probability(ef, 1.0, 1, 1.0)
    dev = abs(val - 0.5312334154985277)
    checks.append(_check("count_probability_reference_point", val, 1e-10 * tol_scale,
                         dev <= 1e-10 * tol_scale))

    # cumulative integral: zero at zero, nondecreasing, bounded by t
    ts = np.geomspace(1e-3, 30.0, 40)
    phis = [integral_one_minus_s(hl, float(t)) for t in ts]
    diffs = np.diff([0.0] + phis)
    ok = (integral_one_minus_s(hl, 0.0) == 0.0 and (diffs >= 0.0).all()
          and all(p <= t for p, t in zip(phis, ts)))
    checks.append(_check("cumulative_integral_monotone", float(diffs.min()), None, ok))

    # interpolation table refinement halves its estimated error
    table = CumulativeIntegralTable(hl, 1e-3, 10.0, n=33)
    err0 = table.estimated_error()
    table.refine()
    err1 = table.estimated_error()
    bound = max(0.5 * err0 * tol_scale, 1e-15)
    checks.append(_check("table_refine_halves_error", [err0, err1], bound, err1 <= bound))

    # k-th survival is nonincreasing in t and nondecreasing in k
    ok = True
    prev = None
    for t in (0.2, 0.5, 1.0, 2.0, 4.0):
        s2 = kth_survival(ef, 1.5, 2, t)
        s3 = kth_survival(ef, 1.5, 3, t)
        if s3 < s2 or (prev is not None and s2 > prev + 1e-15):
            ok = False
        prev = s2
    checks.append(_check("kth_survival_ordering", None, None, ok))

    # density integrates to one
    dist = KthFptDistribution(ef, 1.0, 2)
    grid_t = np.linspace(1e-6, 14.0, 281)
    dens = [dist.density(float(t)) for t in grid_t]
    total = float(np.trapezoid(dens, grid_t))
    dev = abs(total - 1.0)
    checks.append(_check("kth_density_normalizes", total, 1e-3 * tol_scale,
                         dev <= 1e-3 * tol_scale))

    if full:
        # logarithmic-convergence diagnostics: measured deviations at a rate
        # of 1e10 still exceed the 10% target; kept outside the default gate
        lam = 1e10
        law = hl.short_time_law()
        for variant, fn in (("theorem", scaling_exp_theorem),
                            ("lambertw", scaling_exp_lambertw)):
            c = fn(law, lam)
            dev = max(abs(lam * integral_one_minus_s(hl, c.a * x + c.b) - math.exp(x))
                      / math.exp(x) for x in (-1.0, 0.0, 1.0))
            checks.append(_check(f"exp_lemma_rescaled_integral_{variant}", dev,
                                 0.1 * tol_scale, dev <= 0.1 * tol_scale))

    return {
        "tool": "fastfpt",
        "version": __version__,
        "subcommand": "validate",
        "tol_scale": tol_scale,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def cmd_validate(cfg: ExperimentConfig, tol_scale: float, full: bool) -> tuple[str, int]:
    report = run_validation(tol_scale=tol_scale, full=full)
    text = json.dumps(report, indent=1) + "\n"
    return text, 0 if report["passed"] else 1


# --- argument handling ------------------------------------------------------


def _parse_float_list(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _parse_int_list(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(",") if x.strip())


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON file mirroring ExperimentConfig; flags override")
    sp.add_argument("--model", help="model spec, e.g. halfline:L=1,D=1")
    sp.add_argument("--lambda", dest="lambdas", type=_parse_float_list,
                    help="comma-separated immigration rates")
    sp.add_argument("--k", dest="ks", type=_parse_int_list,
                    help="comma-separated order statistics")
    sp.add_argument("--trials", type=int, help="Monte Carlo trials per rate")
    sp.add_argument("--seed", type=int, help="master seed")
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), help="output format")
    sp.add_argument("--workers", type=int,
                    help="worker threads (default: FASTFPT_WORKERS or 1)")
    sp.add_argument("--variant", choices=("theorem", "lambertw"),
                    help="scaling-constant variant for exponential-class models")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastfpt",
        description="first-passage statistics for searchers arriving at a steady rate")
    parser.add_argument("--version", action="version", version=f"fastfpt {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    helps = {
        "density": "scaled k-th passage-time density: MC vs analytic vs limit",
        "mean-error": "numeric mean vs asymptotic estimates across rates",
        "validate": "run the invariant suite; nonzero exit on failure",
        "survival": "tabulate single-searcher, first-passage, and k-th survival",
        "constants": "scaling constants a, b per rate, all applicable variants",
        "equiv": "fixed-population search equivalent to an immigration stream",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text, description=text)
        _add_common(sp)
        if name == "validate":
            sp.add_argument("--tol-scale", type=float, default=1.0,
                            help="multiply every numeric tolerance (0 forces failures)")
            sp.add_argument("--full", action="store_true",
                            help="include the logarithmic-convergence diagnostics")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        known = {f.name for f in fields(ExperimentConfig)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "lambdas" in doc:
            doc["lambdas"] = tuple(float(x) for x in doc["lambdas"])
        if "ks" in doc:
            doc["ks"] = tuple(int(x) for x in doc["ks"])
        cfg = replace(cfg, **doc)
    overrides = {}
    for f in fields(ExperimentConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            overrides[f.name] = val
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        if args.subcommand == "validate":
            text, code = cmd_validate(cfg, args.tol_scale, args.full)
            _emit(cfg, text)
            return code
        producers = {
            "density": cmd_density,
            "mean-error": cmd_mean_error,
            "survival": cmd_survival,
            "constants": cmd_constants,
            "equiv": cmd_equiv,
        }
        columns, rows = producers[args.subcommand](cfg)
        _emit(cfg, render_table(args.subcommand, columns, rows, cfg.format))
        return 0
    except (ValueError, OSError) as exc:
        print(f"fastfpt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
