"""Config-driven experiment runner.

Every checker is a subcommand; runs write CSV tables, a JSON summary and an
echo of the configuration next to the outputs, and are byte-identical given
the same config and seed.

Exit codes: 0 verdicts match expectation, 1 a check failed, 2 config/usage
error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import os
import sys
import json
from typing import List

from .analysis import (DiscrepancyReport, EvaluationGrid, Report,
                       antiderivative_demo, centering_check, circle_grid,
                       heredity_check, potential_discrepancy,
                       root_distribution, roots_of_derivative,
                       theorem_bound_check, weakstar_convergence_check)
from .config import ExperimentConfig, parse_config
from .errors import (BoundaryZeroError, ConfigError, EvaluationRangeError,
                     NoConvergenceError, NonEscapingError, RootlabError,
                     SubdivisionLimitError)
_NUMERIC_ERRORS = (NoConvergenceError, BoundaryZeroError,
                   EvaluationRangeError, SubdivisionLimitError,
                   NonEscapingError)

_SUBCOMMANDS = ["roots", "potential", "discrepancy", "centering", "theorem",
                "heredity", "weakstar", "antideriv-demo", "selftest"]


def main(argv: List[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="rootlab", description=__doc__)
    parser.add_argument("subcommand", choices=_SUBCOMMANDS)
    parser.add_argument("--config", help="key=value or JSON config file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker cap (the checkers are sequential; "
                             "accepted for interface stability)")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--expect", choices=["pass", "fail"], default=None)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    except RootlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _run(args) -> int:
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    if args.subcommand == "selftest":
        ok = _selftest()
        return 0 if ok else 1
    if not args.config:
        raise ConfigError(f"{args.subcommand} requires --config")
    cfg = parse_config(args.config)
    seed = args.seed if args.seed is not None else cfg.get_int("seed", 0)
    expect = args.expect or cfg.get("expect", "pass")
    if expect not in ("pass", "fail"):
        raise ConfigError("expect must be pass or fail")
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "config_echo.cfg"), "w",
              encoding="utf-8") as fh:
        fh.write(cfg.echo_text())

    handler = {
        "roots": _cmd_roots, "potential": _cmd_potential,
        "discrepancy": _cmd_discrepancy, "centering": _cmd_centering,
        "theorem": _cmd_theorem, "heredity": _cmd_heredity,
        "weakstar": _cmd_weakstar, "antideriv-demo": _cmd_antideriv,
    }[args.subcommand]
    report = handler(cfg, seed, args.out)

    table = os.path.join(args.out, f"{report.name}_table.csv")
    report.to_csv(table)
    summary = report.summary()
    # paths relative to --out keep reruns byte-identical across directories
    summary["tables"] = [os.path.basename(table)]
    spath = os.path.join(args.out, f"{report.name}_summary.json")
    with open(spath, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, default=str)
        fh.write("\n")
    print(f"{report.name}: verdict={'pass' if report.verdict else 'fail'} "
          f"(expected {expect}); summary: {spath}")
    behaved = report.verdict if expect == "pass" else not report.verdict
    return 0 if behaved else 1


def _grid(cfg: ExperimentConfig, target) -> EvaluationGrid:
    center = cfg.get_complex("grid.center", 0j)
    r = cfg.get_float("grid.r", 3.0)
    n = cfg.get_int("grid.n", 64)
    base = circle_grid(center, r, n, target)
    pts = list(base.points)
    margin = base.margin
    if cfg.has("grid.points"):
        for z in cfg.get_complex_list("grid.points"):
            pts.append(z)
            margin = min(margin, target.distance_to_support(z))
    return EvaluationGrid(tuple(pts), margin)


def _member_rootset(cfg, seed):
    spec = cfg.family()
    k = cfg.get_int("roots.k")
    m = cfg.get_int("roots.m", 0)
    member = spec.generate(k)
    return member, roots_of_derivative(member, m, seed=seed)


def _cmd_roots(cfg, seed, out) -> Report:
    member, rs = _member_rootset(cfg, seed)
    rs.to_csv(os.path.join(out, "roots.csv"))
    return Report(name="roots",
                  columns=["k", "n_k", "total"],
                  rows=[(member.k, member.n_k, rs.total)], verdict=True,
                  details={"csv": "roots.csv"})


def _cmd_potential(cfg, seed, out) -> Report:
    target = cfg.measure()
    grid = _grid(cfg, target)
    rows = [(z.real, z.imag, target.potential(z)) for z in grid.points]
    return Report(name="potential", columns=["re", "im", "potential"],
                  rows=rows, verdict=True,
                  details={"margin": grid.margin, "kind": target.kind})


def _cmd_discrepancy(cfg, seed, out) -> Report:
    target = cfg.measure()
    grid = _grid(cfg, target)
    member, rs = _member_rootset(cfg, seed)
    rep = potential_discrepancy(root_distribution(rs), target, grid)
    if cfg.has("tolerance"):
        tol = cfg.get_float("tolerance")
        rep.tolerance = tol
        rep.verdict = rep.details["sup"] <= tol
    rep.details["k"] = member.k
    return rep


def _cmd_centering(cfg, seed, out) -> Report:
    return centering_check(cfg.family(), cfg.region("region.L"),
                           cfg.k_range(), m=cfg.get_int("m", 0), seed=seed)


def _cmd_theorem(cfg, seed, out) -> Report:
    return theorem_bound_check(cfg.family(), cfg.region("region.A"),
                               cfg.get_float("theorem.eps"), cfg.k_range(),
                               cfg.measure(), seed=seed)


def _cmd_heredity(cfg, seed, out) -> Report:
    regions = [cfg.region("region.L")]
    if cfg.has("region.L2"):
        regions.append(cfg.region("region.L2"))
    return heredity_check(cfg.family(), regions, cfg.get_int("m_max", 2),
                          cfg.k_range(), seed=seed)


def _cmd_weakstar(cfg, seed, out) -> Report:
    target = cfg.measure()
    return weakstar_convergence_check(
        cfg.family(), target, _grid(cfg, target), cfg.k_range(),
        m=cfg.get_int("m", 0), tolerance=cfg.get_float("tolerance", 1e-2),
        seed=seed)


def _cmd_antideriv(cfg, seed, out) -> Report:
    return antiderivative_demo(cfg.family(), cfg.k_range(),
                               center=cfg.get_complex("demo.center", 0.5),
                               radius=cfg.get_float("demo.radius", 1.0 / 12),
                               seed=seed)


# ---------------------------------------------------------------------------
# selftest


def _selftest() -> bool:
    """Condensed invariant suite; the full suite lives in the test
    directory and runs under pytest."""
    import math
    import numpy as np
    from .polycore import CoeffPoly, eval_jet, expand, log_abs_normalized
    from .roots import aberth_solve, winding_count, RootSet
    from .regions import Box, Disk
    from .measures import (ArcsineSegment, CantorHausdorff, UniformCircle,
                           potential_discrete)
    from .analysis import gauss_lucas_check

    checks = []

    def check(name, ok):
        checks.append(ok)
        print(f"  [{'ok' if ok else 'FAIL'}] {name}")

    rng = np.random.default_rng(0)
    ok = True
    for _ in range(50):
        cs = rng.normal(size=6) + 1j * rng.normal(size=6)
        p = CoeffPoly(list(cs))
        z = complex(*rng.normal(size=2))
        h = 1e-6 * max(1.0, abs(z))
        fd = (p(z + h) - p(z - h)) / (2 * h)
        jet = eval_jet(p, z, 1)
        ok = ok and abs(jet.values[1] - fd) <= 1e-6 * (1 + abs(fd))
    check("jet derivatives vs finite differences", ok)

    ok = True
    for s in range(20):
        rng2 = np.random.default_rng(s)
        cs = list(rng2.normal(size=7) + 1j * rng2.normal(size=7))
        p = CoeffPoly(cs)
        rs = aberth_solve(p, seed=s)
        box = Box(complex(*rng2.uniform(-2, 0, 2)),
                  complex(*rng2.uniform(0.1, 2, 2)))
        ok = ok and winding_count(p, box, seed=s) == rs.count_in(box)
    check("winding counts vs root locations", ok)

    mu = ArcsineSegment()
    ok = abs(mu.potential(0) - 0.0) < 1e-12 and \
        abs(mu.cauchy(3) - 1 / math.sqrt(5)) < 1e-12
    check("arcsine closed forms", ok)

    c = CantorHausdorff()
    z0 = 1.5 + 0.5j
    h = 1e-6
    fd = complex((c.potential(z0 + h) - c.potential(z0 - h)) / (2 * h),
                 -(c.potential(z0 + 1j * h) - c.potential(z0 - 1j * h))
                 / (2 * h))
    check("Cantor Cauchy recursion vs potential gradient",
          abs(fd - c.cauchy(z0)) < 1e-6)

    rs = aberth_solve(CoeffPoly([-1, 0, 0, 0, 0, 0, 0, 0, 1.0]))
    drs = aberth_solve(CoeffPoly([-1, 0, 0, 0, 0, 0, 0, 0, 1.0]).deriv_coeffs())
    check("Gauss-Lucas on the 8th roots of unity",
          gauss_lucas_check(rs, drs))

    mu8 = rs
    emp = [(p, m / 8) for p, m in mu8.roots]
    from .measures import DiscreteMeasure
    d = DiscreteMeasure(emp)
    p8 = CoeffPoly([-1, 0, 0, 0, 0, 0, 0, 0, 1.0])
    ok = abs(potential_discrete(d, 2.5) -
             log_abs_normalized(p8, 2.5)) < 1e-10
    check("empirical potential equals normalized log magnitude", ok)

    print(f"selftest: {sum(checks)}/{len(checks)} passed")
    return all(checks)


if __name__ == "__main__":
    sys.exit(main())
