"""Command-line front end.

Subcommands print one JSON document on stdout (``sweep`` writes CSV). Errors
go to stderr as JSON with exit codes 1 (usage), 2 (infeasible input),
3 (solver failure) and 4 (bound violation in ``verify``/``corpus``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .bound import BoundInput, constant_C, crossover_diameter, wang_constant
from .errors import DomainError, SolverError
from .radial_eig import ShootingConfig, mu1_ball
from .spaceform import SpaceFormBall, ball_volume

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_SOLVER, EXIT_VIOLATION = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ("param", "value", "R", "R_prime", "mu1_ball", "ratio_R", "ratio_d", "C", "wang", "bound")
SWEEP_PARAMS = ("d", "V", "K", "k", "R")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------
def _num(x: float, digits: int) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, f".{digits}g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, digits: int = 17) -> str:
    """Compact JSON with floats written to ``digits`` significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj, digits)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v, digits)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v, digits) for v in obj) + "]"
    if hasattr(obj, "tolist"):
        return dumps(obj.tolist(), digits)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(record: dict) -> None:
    sys.stdout.write(dumps(record) + "\n")


def _emit_error(kind: str, message: str, code: int) -> int:
    sys.stderr.write(dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SweepSpec:
    param: str
    lo: float
    hi: float
    steps: int
    dim: int
    k: float
    K: float
    volume: Optional[float] = None
    diameter: Optional[float] = None

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise UsageError(f"sweep parameter must be one of {', '.join(SWEEP_PARAMS)}")
        if not self.lo < self.hi:
            raise UsageError("sweep needs lo < hi")
        if self.steps < 2:
            raise UsageError("sweep needs at least 2 steps")
        needed = {"d": ("volume",), "V": ("diameter",), "R": ("diameter",)}.get(self.param, ("volume", "diameter"))
        for name in needed:
            if getattr(self, name) is None:
                raise UsageError(f"sweep over {self.param} needs a fixed {name}")

    def values(self) -> list[float]:
        return [self.lo + (self.hi - self.lo) * i / (self.steps - 1) for i in range(self.steps)]

    def input_at(self, value: float) -> BoundInput:
        n, k, K, V, d = self.dim, self.k, self.K, self.volume, self.diameter
        if self.param == "d":
            d = value
        elif self.param == "V":
            V = value
        elif self.param == "K":
            K = value
        elif self.param == "k":
            k = value
        else:
            V = ball_volume(SpaceFormBall(k, n, value))
        return BoundInput(n, k, K, V, d)


@dataclass
class ResultRecord:
    """Inputs, flattened breakdown and the tolerances used, for one bound evaluation."""

    inputs: dict
    R: float
    R_prime: float
    mu1_ball: float
    ratio_R: float
    ratio_d: float
    integral_num: float
    integral_den: float
    C: float
    wang: float
    bound_value: float
    assumptions: dict
    tolerances: dict
    elapsed_s: Optional[float] = None

    @classmethod
    def evaluate(cls, inp: BoundInput, config: ShootingConfig, injectivity_radius=None, timing=False):
        t0 = time.perf_counter()
        b = constant_C(inp, config, injectivity_radius)
        elapsed = time.perf_counter() - t0 if timing else None
        fields = {k: v for k, v in b.as_dict().items() if k != "assumptions"}
        assumptions = asdict(b.assumptions)
        assumptions["ok"] = b.assumptions.ok
        return cls(asdict(inp), **fields, assumptions=assumptions, tolerances=_tolerances(config), elapsed_s=elapsed)

    def to_json(self) -> dict:
        out = asdict(self)
        if self.elapsed_s is None:
            del out["elapsed_s"]
        return out

    def csv_row(self, param: str, value: float, digits: int = 10) -> list[str]:
        nums = (value, self.R, self.R_prime, self.mu1_ball, self.ratio_R, self.ratio_d, self.C, self.wang, self.bound_value)
        return [param] + [format(x, f".{digits}g") for x in nums]


def _tolerances(config: ShootingConfig) -> dict:
    return {
        "ode_tolerance": config.ode_tolerance,
        "bisection_tolerance": config.bisection_tolerance,
        "start_fraction": config.start_fraction,
    }


# ---------------------------------------------------------------------------
# parallel helpers
# ---------------------------------------------------------------------------
def _workers() -> int:
    raw = os.environ.get("EIGENBOUND_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"EIGENBOUND_THREADS must be an integer, got {raw!r}")


def _ordered_map(fn, items):
    # results come back in input order whatever the schedule
    workers = _workers()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _sweep_point(job):
    spec, value, config = job
    try:
        return ResultRecord.evaluate(spec.input_at(value), config), None
    except (DomainError, SolverError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _verify_job(job):
    from .verifier.verify import verify_spec

    spec, h, tol = job
    try:
        return verify_spec(spec, h=h, tolerance=tol).as_dict(), None
    except (DomainError, SolverError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------
def _config(args) -> ShootingConfig:
    return ShootingConfig(ode_tolerance=args.ode_tol, bisection_tolerance=args.bisection_tol)


def cmd_mu1_ball(args) -> int:
    config = _config(args)
    t0 = time.perf_counter()
    mu = mu1_ball(args.k, args.n, args.R, config)
    rec = {"command": "mu1-ball", "inputs": {"k": args.k, "n": args.n, "R": args.R}, "mu1": mu, "tolerances": _tolerances(config)}
    if args.timing:
        rec["elapsed_s"] = time.perf_counter() - t0
    _emit(rec)
    return EXIT_OK


def cmd_bound(args) -> int:
    inp = BoundInput(args.n, args.k, args.K, args.V, args.d)
    rec = ResultRecord.evaluate(inp, _config(args), args.injectivity_radius, args.timing)
    _emit({"command": "bound", **rec.to_json()})
    return EXIT_OK


def cmd_wang(args) -> int:
    w = wang_constant(args.n, args.k, args.K, args.d)
    _emit({"command": "wang", "inputs": {"n": args.n, "k": args.k, "K": args.K, "d": args.d}, "wang": w})
    return EXIT_OK


def cmd_crossover(args) -> int:
    config = _config(args)
    d_star = crossover_diameter(args.n, args.k, args.K, args.V, args.dmax, config, tol=args.tol)
    rec = {
        "command": "crossover",
        "inputs": {"n": args.n, "k": args.k, "K": args.K, "V": args.V, "dmax": args.dmax},
        "d_star": d_star,
        "tolerances": {**_tolerances(config), "crossover_tolerance": args.tol},
    }
    if d_star is not None:
        b = constant_C(BoundInput(args.n, args.k, args.K, args.V, 2 * d_star), config)
        rec["C_at_2d_star"] = b.C
        rec["wang_at_2d_star"] = b.wang
    _emit(rec)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verifier.verify import load_spec, target_from_json, verify_bound

    spec = load_spec(args.spec)
    target, h, K, k = target_from_json(spec)
    h = args.h if args.h is not None else h
    report = verify_bound(target, h, K=K, k=k, tolerance=args.report_tol)
    rec = {"command": "verify", "spec": spec, "report": report.as_dict()}
    if args.mesh_out:
        from .verifier.mesh import mesh_star_domain
        from .verifier.model import ConformalDomain

        if not isinstance(target, ConformalDomain):
            raise UsageError("mesh dumps are only available for conformal domains")
        Path(args.mesh_out).write_text(dumps(mesh_star_domain(target, h).to_json()) + "\n")
    _emit(rec)
    return EXIT_OK if report.satisfied else EXIT_VIOLATION


def corpus_files(directory: Optional[str] = None) -> list[Path]:
    if directory is None:
        root = resources.files("eigenbound") / "corpus"
        return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))
    return sorted(Path(directory).glob("*.json"))


def cmd_corpus(args) -> int:
    from .verifier.verify import load_spec

    files = corpus_files(args.directory)
    if not files:
        raise UsageError("no scenario files found")
    specs = [load_spec(f) for f in files]
    results = _ordered_map(_verify_job, [(s, None, args.report_tol) for s in specs])
    scenarios = []
    failed = violated = False
    for spec, (report, error) in zip(specs, results):
        entry = {"name": spec["name"], "spec": spec}
        if error is not None:
            failed = True
            entry["error"] = error
        else:
            violated |= not (report["satisfied"] and report["assumptions_ok"])
            entry["report"] = report
        scenarios.append(entry)
    _emit({"command": "corpus", "scenarios": scenarios, "all_satisfied": not (failed or violated)})
    if violated:
        return EXIT_VIOLATION
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(args.param, args.lo, args.hi, args.steps, args.n, args.k, args.K, args.V, args.d)
    config = _config(args)
    values = spec.values()
    results = _ordered_map(_sweep_point, [(spec, v, config) for v in values])
    any_error = any(err is not None for _, err in results)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS + (("error",) if any_error else ()))
    for value, (rec, err) in zip(values, results):
        if rec is None:
            writer.writerow([spec.param, format(value, ".10g")] + [""] * (len(SWEEP_COLUMNS) - 2) + [err])
        else:
            writer.writerow(rec.csv_row(spec.param, value) + ([""] if any_error else []))
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        _emit({"command": "sweep", "out": str(args.out), "records": len(values), "failures": sum(r is None for r, _ in results)})
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_SOLVER if any_error else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _shooting_flags(p):
    p.add_argument("--ode-tol", type=float, default=ShootingConfig.ode_tolerance, help="ODE integrator rtol")
    p.add_argument("--bisection-tol", type=float, default=ShootingConfig.bisection_tolerance, help="eigenvalue root tolerance")
    p.add_argument("--timing", action="store_true", help="add wall-clock time to the record")


def build_parser() -> argparse.ArgumentParser:
    from .verifier.verify import REPORT_TOLERANCE

    parser = _Parser(prog="eigenbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("mu1-ball", help="first nonzero Neumann eigenvalue of B_k(R)")
    p.add_argument("-k", type=float, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-R", type=float, required=True)
    _shooting_flags(p)
    p.set_defaults(func=cmd_mu1_ball)

    p = sub.add_parser("bound", help="constant C and the bound C mu_1(B_k(R))")
    for flag, typ in (("-n", int), ("-k", float), ("-K", float), ("-V", float), ("-d", float)):
        p.add_argument(flag, type=typ, required=True)
    p.add_argument("--injectivity-radius", type=float, default=None)
    _shooting_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("wang", help="Wang's constant (sin_K(d)/sin_k(d))^(2n-2)")
    for flag, typ in (("-n", int), ("-k", float), ("-K", float), ("-d", float)):
        p.add_argument(flag, type=typ, required=True)
    p.set_defaults(func=cmd_wang)

    p = sub.add_parser("crossover", help="diameter beyond which C is below Wang's constant")
    for flag, typ in (("-n", int), ("-k", float), ("-K", float), ("-V", float)):
        p.add_argument(flag, type=typ, required=True)
    p.add_argument("--dmax", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    _shooting_flags(p)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("verify", help="check the bound on one domain-spec file")
    p.add_argument("spec")
    p.add_argument("--h", type=float, default=None, help="mesh size (overrides mesh_h)")
    p.add_argument("--report-tol", type=float, default=REPORT_TOLERANCE)
    p.add_argument("--mesh-out", default=None, help="write the coarse mesh as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="bound ingredients over a parameter grid, as CSV")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=float, required=True)
    p.add_argument("-K", type=float, required=True)
    p.add_argument("-V", type=float, default=None)
    p.add_argument("-d", type=float, default=None)
    p.add_argument("--out", default=None)
    _shooting_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("corpus", help="verify every scenario in a directory (default: bundled corpus)")
    p.add_argument("directory", nargs="?", default=None)
    p.add_argument("--report-tol", type=float, default=REPORT_TOLERANCE)
    p.set_defaults(func=cmd_corpus)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _emit_error("usage", str(exc), EXIT_USAGE)
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        return _emit_error("usage", f"{type(exc).__name__}: {exc}", EXIT_USAGE)
    except DomainError as exc:
        return _emit_error("infeasible", str(exc), EXIT_INFEASIBLE)
    except SolverError as exc:
        return _emit_error("solver", str(exc), EXIT_SOLVER)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
