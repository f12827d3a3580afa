"""Command line: ``ncsphere verify --suite NAME`` and ``ncsphere pair --q Q --cutoff N``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a bad
configuration.  ``--json`` prints one document with schema ``ncsphere.report/1``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import REPORT_SCHEMA, __version__
from .report import Report

SUITES = ("theta", "so5", "so51", "variations", "qsympl", "cyclic", "pair")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    theta: Fraction = Fraction(1, 3)
    q: Fraction | float = Fraction(1, 2)
    cutoff: int = 40
    output: str = "text"
    seed: int = 0
    step_budget: int | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["theta"] = str(self.theta)
        d["q"] = str(self.q)
        return d

    @property
    def suites(self) -> tuple:
        return SUITES if self.suite == "all" else (self.suite,)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def parse_q(text: str) -> Fraction | float:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc
    if not 0 < q < 1:
        # q -> 1/q gives an isomorphic algebra, and q = 1 is the classical boundary
        raise ConfigError(f"q must satisfy 0 < q < 1, got {text}")
    return q


def _workers() -> int:
    raw = os.environ.get("NCG_WORKERS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"NCG_WORKERS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError("NCG_WORKERS must be at least 1")
    return n


def _apply_budget(cfg: SuiteConfig, theta_cfg) -> list:
    """Set the budget on the cached systems; returns (system, previous budget) for restoring."""
    if cfg.step_budget is None:
        return []
    from . import q_sympl
    from .theta_spheres import build_theta_spheres

    saved = []
    for s in (*build_theta_spheres(theta_cfg), q_sympl.s7q(), q_sympl.suq2(), q_sympl.bq()):
        saved.append((s, s.step_budget))
        s.with_budget(cfg.step_budget)
    return saved


def run_suite(name: str, cfg: SuiteConfig) -> Report:
    from .ncalg import StepBudgetExceeded

    try:
        return _run_suite(name, cfg)
    except StepBudgetExceeded as exc:
        # raised while building shared objects, before any single check ran
        rep = Report(name)
        rep.add(f"{name}.step_budget", "normal forms stay within the step budget", False, float("inf"), str(exc))
        return rep


def _run_suite(name: str, cfg: SuiteConfig) -> Report:
    from .theta_spheres import ThetaConfig

    theta_cfg = ThetaConfig(cfg.theta)
    if name == "theta":
        from .theta_spheres import theta_suite

        return theta_suite(theta_cfg, cfg.seed)
    if name in ("so5", "so51", "variations"):
        from . import twisted_symmetry as ts

        return getattr(ts, f"{name}_suite")(theta_cfg)
    if name == "qsympl":
        from .q_sympl import qsympl_suite

        return qsympl_suite()
    if name == "cyclic":
        from .cyclic import cyclic_suite

        return cyclic_suite(theta_cfg, seed=cfg.seed)
    if name == "pair":
        from .qrep import qrep_suite

        return qrep_suite(float(cfg.q), cfg.cutoff, cfg.seed)
    raise ConfigError(f"unknown suite {name!r}")


def run(cfg: SuiteConfig) -> tuple:
    """(exit code, list of (suite name, Report)) with suites in the canonical order."""
    from .theta_spheres import ThetaConfig

    workers = _workers()
    saved = _apply_budget(cfg, ThetaConfig(cfg.theta))
    names = cfg.suites
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda n: run_suite(n, cfg), names))
    finally:
        for s, budget in saved:
            s.with_budget(budget)
    for r in reports:
        r.checks.sort(key=lambda c: c.id)
    results = list(zip(names, reports))
    return (0 if all(r.ok for r in reports) else 1), results


def report_json(command: str, cfg: SuiteConfig, results: list, extra: dict | None = None) -> dict:
    doc = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "command": command,
        "config": cfg.to_json(),
        "ok": all(r.ok for _, r in results),
        "suites": [
            {"name": name, "ok": r.ok, "passed": len(r.checks) - len(r.failures()), "total": len(r.checks),
             "checks": [c.to_json() for c in r.checks]}
            for name, r in results
        ],
    }
    if extra:
        doc.update(extra)
    return doc


def _print_text(results: list, out) -> None:
    for name, r in results:
        print(f"== {name} ==", file=out)
        print(r.text(), file=out)


def cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=args.suite, theta=parse_rational(args.theta), q=parse_q(args.q), cutoff=_cutoff(args.cutoff),
        output="json" if args.json else "text", seed=args.seed, step_budget=args.step_budget,
    )
    code, results = run(cfg)
    if args.json:
        print(json.dumps(report_json("verify", cfg, results), indent=2))
    else:
        _print_text(results, sys.stdout)
        print("OK" if code == 0 else "FAILED")
    return code


def cmd_pair(args) -> int:
    from .qrep import pair

    cfg = SuiteConfig(suite="pair", q=parse_q(args.q), cutoff=_cutoff(args.cutoff),
                      output="json" if args.json else "text", seed=args.seed)
    t0 = time.perf_counter()
    res = pair(float(cfg.q), cfg.cutoff)
    rep = Report("pair")
    err = abs(res.value + 1)
    rep.add("pairing.charge", "<[mu],[p]> = -1 up to the truncation tail", err <= res.tail_bound + 1e-10, err,
            seconds=time.perf_counter() - t0)
    rep.add("pairing.truncated_closed_form", "window value = -(1-q^2N)(1-q^4N)",
            abs(res.value - res.truncated_closed_form) <= 1e-12, abs(res.value - res.truncated_closed_form))
    rep.add("pairing.rank", "tau0(ch0 p) = 2", res.rank == 2, abs(res.rank - 2))
    results = [("pair", rep)]
    if args.json:
        extra = {"pairing": res.value, "closed_form": -1.0, "truncated_closed_form": res.truncated_closed_form,
                 "tail_bound": res.tail_bound, "trace_t": res.trace_t, "trace_t_closed_form": res.trace_t_closed_form,
                 "rank": res.rank}
        print(json.dumps(report_json("pair", cfg, results, extra), indent=2))
    else:
        print(f"q = {res.q}, cutoff = {res.cutoff}")
        print(f"<[mu],[p]>  = {res.value:.15f}  (closed form -1, window value {res.truncated_closed_form:.15f}, tail <= {res.tail_bound:.3g})")
        print(f"Tr_N(t)     = {res.trace_t:.15g}  (limit {res.trace_t_closed_form:.15g})")
        print(f"rank pairing = {res.rank}")
        print(rep.text())
    return 0 if rep.ok else 1


def _cutoff(n: int) -> int:
    if n < 4:
        raise ConfigError(f"cutoff must be at least 4, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncsphere", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--theta", default="1/3", help="deformation parameter, rational (default 1/3)")
    v.add_argument("--q", default="1/2", help="0 < q < 1, rational or float (default 1/2)")
    v.add_argument("--cutoff", type=int, default=40)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--step-budget", type=int, default=None)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("pair", help="index pairing <[mu],[p]> on a truncated sigma representation")
    p.add_argument("--q", default="1/2")
    p.add_argument("--cutoff", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pair)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"ncsphere: error: {exc}", file=sys.stderr)
        return 2
