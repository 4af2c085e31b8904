"""Command-line driver.

Subcommands: ``construct``, ``verify``, ``flow``, ``forms-info``, ``points``,
``selftest``.  All interchange is JSON with rationals written as strings.
JSON-valued options accept a literal, a file path, or ``-`` for stdin; every
subcommand also takes ``--config`` (same keys as the long options) so a whole
run can be piped in.  Reports go to ``--out`` (written atomically) or stdout.

Exit codes: 0 success, 1 verification failure, 2 invalid input or pipeline
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import abeljacobi, fixtures, oracles
from .curve import AffinePoint, CurveError, HyperellipticCurve, curve_through_points, evaluation_column
from .flow import FlowProblem, solve_flow, verify_flow
from .forms import omega_space
from .linalg import SingularMatrixError
from .points import SelectionExhausted, choose_points
from .series import TruncatedSeries, sqrt_unit

log = logging.getLogger("arcclass")

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    curve: Any = None
    fixture_points: Any = None
    target: Any = None
    vars: int = 1
    order: int = 3
    degree: int = 1
    bound: int = 10
    seed: int | None = None
    out: str | None = None
    problem: Any = None
    report: Any = None

    def validate(self) -> None:
        if self.vars < 1:
            raise ConfigError(f"--vars must be >= 1, got {self.vars}")
        if self.command in ("construct", "points") and self.order < 2:
            raise ConfigError(f"--order must be >= 2, got {self.order}")
        if self.order < 1:
            raise ConfigError(f"--order must be >= 1, got {self.order}")
        if self.bound < 1:
            raise ConfigError(f"--bound must be positive, got {self.bound}")


def load_json(value: Any) -> Any:
    """Literal JSON, a path to a JSON file, ``-`` for stdin, or an already parsed value."""
    if not isinstance(value, str):
        return value
    if value == "-":
        return json.load(sys.stdin)
    if os.path.exists(value):
        with open(value) as fh:
            return json.load(fh)
    return json.loads(value)


def dump(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".arcclass-", suffix=".json")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, out)


def build_config(args: argparse.Namespace) -> RunConfig:
    base: dict[str, Any] = {}
    if getattr(args, "config", None):
        base = load_json(args.config)
        if not isinstance(base, dict):
            raise ConfigError("--config must be a JSON object")
        base = {k.replace("-", "_"): v for k, v in base.items()}
    for key in ("curve", "fixture_points", "target", "vars", "order", "degree", "bound", "seed", "out", "problem", "report"):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    known = set(RunConfig.__dataclass_fields__) - {"command"}
    unknown = set(base) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig(command=args.command, **base)
    for key in ("vars", "order", "degree", "bound"):
        setattr(cfg, key, int(getattr(cfg, key)))
    if cfg.seed is not None:
        cfg.seed = int(cfg.seed)
    cfg.validate()
    return cfg


def resolve_curve(cfg: RunConfig) -> tuple[HyperellipticCurve, list[AffinePoint]]:
    if cfg.curve is not None:
        data = load_json(cfg.curve)
        return HyperellipticCurve.from_json(data), []
    if cfg.fixture_points is not None:
        data = load_json(cfg.fixture_points)
        pts = [(Fraction(str(x)), Fraction(str(y))) for x, y in data["points"]]
        curve = curve_through_points(pts, int(data["genus"]))
        return curve, [AffinePoint(x, y) for x, y in pts]
    raise ConfigError("one of --curve or --fixture-points is required")


def resolve_target(cfg: RunConfig, genus: int) -> list[TruncatedSeries]:
    if cfg.target is None:
        rng = random.Random(cfg.seed if cfg.seed is not None else 0)
        return fixtures.random_target(rng, genus, cfg.vars, cfg.order)
    data = load_json(cfg.target)
    h = data["h"] if isinstance(data, dict) else data
    if len(h) != genus:
        raise ConfigError(f"target has {len(h)} components, curve genus is {genus}")
    return [TruncatedSeries.from_records(terms, cfg.vars, cfg.order) for terms in h]


# subcommands ---------------------------------------------------------------


def cmd_construct(cfg: RunConfig) -> int:
    curve, listed = resolve_curve(cfg)
    targets = resolve_target(cfg, curve.genus)
    report = abeljacobi.verify_surjectivity(curve, targets, bound=cfg.bound, candidates=listed, seed=cfg.seed)
    payload = report.to_json()
    payload["config"] = {"vars": cfg.vars, "order": cfg.order, "bound": cfg.bound, "seed": cfg.seed}
    dump(payload, cfg.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.report is None:
        raise ConfigError("verify needs --report (a construct report)")
    data = load_json(cfg.report)
    curve = HyperellipticCurve.from_json(data["curve"])
    cycle = abeljacobi.ZeroCycle.from_json(data["cycle"], curve)
    targets = [TruncatedSeries.from_records(t, cycle.nvars, cycle.order) for t in data["targets"]["h"]]
    flags = abeljacobi.verify_cycle(curve, cycle, targets)
    dump({"pass": all(flags), "flags": list(flags), "arcs": len(cycle)}, cfg.out)
    return EXIT_OK if all(flags) else EXIT_FAIL


def cmd_flow(cfg: RunConfig) -> int:
    if cfg.problem is None:
        raise ConfigError("flow needs --problem")
    problem = FlowProblem.from_json(load_json(cfg.problem))
    solution = solve_flow(problem)
    residual = verify_flow(problem, solution)
    dump({"problem": problem.to_json(), "solution": solution.to_json(), "residual": residual.to_json()}, cfg.out)
    return EXIT_OK if residual.vanishes else EXIT_FAIL


def cmd_forms_info(cfg: RunConfig) -> int:
    if not 0 <= cfg.degree <= cfg.vars:
        raise ConfigError(f"--degree must be in [0, {cfg.vars}]")
    dump(omega_space(cfg.vars, cfg.order, cfg.degree).describe(), cfg.out)
    return EXIT_OK


def cmd_points(cfg: RunConfig) -> int:
    curve, listed = resolve_curve(cfg)
    pts = abeljacobi.candidate_points(curve, cfg.bound, listed, cfg.seed)
    payload: dict[str, Any] = {"curve": curve.to_json(), "points": [p.to_json() for p in pts]}
    try:
        sel = choose_points(pts, lambda p: evaluation_column(curve, p), range(curve.genus))
    except SelectionExhausted as exc:
        payload["selection_error"] = str(exc)
        dump(payload, cfg.out)
        return EXIT_ERROR
    payload["selection"] = sel.to_json()
    dump(payload, cfg.out)
    return EXIT_OK


def run_selftest(seed: int = 0) -> dict[str, bool]:
    """Oracles against fast paths at desk scale."""
    rng = random.Random(seed)
    results: dict[str, bool] = {}
    results["forms_dimensions"] = all(
        omega_space(N, M, p).dim == oracles.omega_dimension_by_enumeration(N, M, p)
        for N in range(1, 4)
        for M in range(1, 5)
        for p in range(N + 1)
    )
    flow_ok = True
    for _ in range(6):
        problem = fixtures.random_flow_problem(rng, rng.randint(1, 3), rng.randint(0, 1), rng.randint(2, 4))
        fast = solve_flow(problem)
        flow_ok &= fast.phi == oracles.flow_by_undetermined_coefficients(problem)
        flow_ok &= verify_flow(problem, fast).vanishes
    results["flow_undetermined_coefficients"] = flow_ok
    sqrt_ok = True
    for _ in range(10):
        M = rng.randint(1, 7)
        root = fixtures.random_rational(rng, allow_zero=False)
        f = fixtures.random_series(rng, 1, M, min_degree=1) + root * root
        sqrt_ok &= sqrt_unit(f, root) == oracles.sqrt_by_undetermined_coefficients(f, root)
    results["sqrt_undetermined_coefficients"] = sqrt_ok
    surj_ok = True
    for genus in (1, 2):
        curve, pts = fixtures.fixture_curve(rng, genus)
        targets = fixtures.random_target(rng, genus, 2, 3)
        surj_ok &= abeljacobi.verify_surjectivity(curve, targets, candidates=pts).passed
    results["round_trip"] = surj_ok
    return results


def cmd_selftest(cfg: RunConfig) -> int:
    results = run_selftest(cfg.seed or 0)
    dump({"pass": all(results.values()), "checks": results}, cfg.out)
    return EXIT_OK if all(results.values()) else EXIT_FAIL


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "flow": cmd_flow,
    "forms-info": cmd_forms_info,
    "points": cmd_points,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arcclass", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON object with any of the long options")
        p.add_argument("--out", help="write the JSON result here instead of stdout")
        p.add_argument("--seed", type=int)

    def curve_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--curve", help='curve JSON {"s_coeffs": [...]} (ascending)')
        p.add_argument("--fixture-points", dest="fixture_points", help='{"genus": g, "points": [[x, y], ...]}')
        p.add_argument("--bound", type=int, help="height bound for the rational point search")

    p = sub.add_parser("construct", help="build a cycle realizing a target class and verify it")
    common(p)
    curve_opts(p)
    p.add_argument("--target", help='{"h": [[term records], ...]}; random from --seed if omitted')
    p.add_argument("--vars", type=int)
    p.add_argument("--order", type=int)

    p = sub.add_parser("verify", help="recompute the class of the cycle in a construct report")
    common(p)
    p.add_argument("--report", help="construct report JSON")

    p = sub.add_parser("flow", help="solve a flow problem and report the residual")
    common(p)
    p.add_argument("--problem", help="flow problem JSON")

    p = sub.add_parser("forms-info", help="dimensions and basis of a space of forms")
    common(p)
    p.add_argument("--vars", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--degree", type=int)

    p = sub.add_parser("points", help="rational arc centers and a point selection certificate")
    common(p)
    curve_opts(p)

    p = sub.add_parser("selftest", help="run the brute-force oracles against the fast paths")
    common(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args)
        log.debug("running %s with %s", cfg.command, cfg)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, CurveError, SingularMatrixError, SelectionExhausted, abeljacobi.InsufficientPointsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        print(f"error: invalid input: {exc!r}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
