"""Command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Callable

from .correlators_one import asymptotics_check, build_one_point, dimension_count
from .correlators_three import build_three_point, no_fourfold_pole, ope_check_three, three_point_checks
from .correlators_two import build_two_point, lemma_expansions, pole_structure, regular_part_and_N0, verify_correction_list
from .curve import CurveError, CurveSpec, read_curve, sample_curve, validate_curve
from .field_element import TruncationError, diagonal_series
from .graph_expansion import (
    DirectBrackets,
    brute_force_count,
    decomposition_report,
    enumerate_graphs,
    graph_sum_equivalence,
    loop_count,
    partial_injection_count,
)
from .minimal_model_25 import ModelError, force_N0_constraint_g1, solve_25_g2, verify_25_lemma
from .reports import CorrelatorReport

COMMANDS = ("validate", "onepoint", "twopoint", "threepoint", "graphs", "equivalence", "solve-25", "lemma-25")


@dataclass
class RunConfig:
    command: str
    curve: str | None = None
    format: str = "text"
    seed: int | None = None
    max_order: int = 0
    n: int | None = None


class UsageError(ValueError):
    pass


def _quintic() -> CurveSpec:
    return validate_curve(5, [1, 0, 0, 0, -1, 0])


def _load_curve(
    cfg: RunConfig, default: Callable[[], CurveSpec] | None = None, degree: int | None = None
) -> CurveSpec:
    if cfg.curve:
        return read_curve(cfg.curve)
    if cfg.seed is not None:
        return sample_curve(degree or cfg.n or 5, cfg.seed)
    if default is not None:
        return default()
    raise UsageError("this command needs --curve (or --seed with --n)")


def _cmd_validate(cfg: RunConfig) -> tuple[list[CorrelatorReport], dict]:
    curve = _load_curve(cfg)
    rep = CorrelatorReport("curve", curve.describe())
    rep.add("squarefree of degree 2g+1 or 2g+2", True, f"n={curve.n}, g={curve.g}")
    return [rep], {"n": curve.n, "g": curve.g}


def _cmd_onepoint(cfg: RunConfig):
    curve = _load_curve(cfg)
    opf = build_one_point(curve)
    rep = asymptotics_check(opf)
    rep.sections["one-point function"] = opf.render()
    rep.free_parameters = opf.parameters()
    dc = dimension_count(curve, seed=cfg.seed or 0)
    rep.add("even-part dimension 2g-1", dc.dim_even == 2 * curve.g - 1, str(dc.dim_even))
    if dc.total is not None:
        rep.add("total dimension 3(g-1)", dc.total == 3 * (curve.g - 1), str(dc.total))
    return [rep], {"dim_even": dc.dim_even, "dim_odd": dc.dim_odd, "total": dc.total}


def _cmd_twopoint(cfg: RunConfig):
    curve = _load_curve(cfg)
    tpf = build_two_point(curve)
    reports = [verify_correction_list(curve, tpf.opf), pole_structure(tpf)]
    reg, _ = regular_part_and_N0(tpf)
    reg.add("diagonal expansions of p_even and x p_odd", lemma_expansions(curve))
    reports.append(reg)
    series = diagonal_series(tpf.raw_times_p(1, 2), 1, 2, order=cfg.max_order)
    reg.sections["diagonal expansion of <T T> p1 p2"] = "\n".join(
        f"eps^{k}: {series.coefficient(k).canonical().render()}" for k in range(series.lowest_order(), cfg.max_order + 1)
    )
    reg.free_parameters = sorted(set(tpf.opf.parameters()) | set(tpf.ansatz.symbols))
    return reports, {}


def _cmd_threepoint(cfg: RunConfig):
    curve = _load_curve(cfg, _quintic)
    th = build_three_point(curve)
    reports = [no_fourfold_pole(th), three_point_checks(th), ope_check_three(th)]
    reports[0].free_parameters = list(th.ansatz.symbols)
    return reports, {}


def _cmd_graphs(cfg: RunConfig):
    if cfg.n is None or cfg.n < 1:
        raise UsageError("graphs needs --n >= 1")
    graphs = enumerate_graphs(cfg.n)
    rep = CorrelatorReport(f"graphs, N={cfg.n}", "-")
    rep.sections["graphs"] = "\n".join(g.render() for g in graphs)
    rep.add("count matches the partial-injection oracle", len(graphs) == partial_injection_count(cfg.n), str(len(graphs)))
    if cfg.n <= 4:
        rep.add("count matches brute force", len(graphs) == brute_force_count(cfg.n))
    reports = [rep]
    if cfg.n >= 2:
        reports.append(decomposition_report(cfg.n))
    data = {
        "count": len(graphs),
        "graphs": [{"edges": [f"{i}->{j}" for i, j in g.edges], "loops": loop_count(g)} for g in graphs],
    }
    return reports, data


def _cmd_equivalence(cfg: RunConfig):
    n_points = cfg.n or 2
    if n_points not in (2, 3):
        raise UsageError("equivalence is available for --n 2 or 3")
    # here --n counts points, so a seeded curve is always a quintic
    curve = _load_curve(cfg, _quintic, degree=5)
    tpf = build_two_point(curve)
    if n_points == 2:
        return [graph_sum_equivalence(2, tpf.raw_times_p(1, 2), DirectBrackets(tpf.opf, tpf))], {}
    th = build_three_point(curve, tpf)
    return [graph_sum_equivalence(3, th.raw_times_p(), DirectBrackets(tpf.opf, tpf))], {}


def _cmd_solve25(cfg: RunConfig):
    if cfg.curve is None and cfg.seed is None:
        g1 = force_N0_constraint_g1()
        res = solve_25_g2()
    else:
        g1 = None
        res = solve_25_g2(_load_curve(cfg))
    reports = [g1.report] if g1 else []
    res.report.sections["fixed coefficients"] = "\n".join(f"{k} = {v}" for k, v in sorted(res.fixed.items()))
    res.report.free_parameters = res.free
    reports.append(res.report)
    return reports, {"fixed": {k: str(v) for k, v in sorted(res.fixed.items())}, "free": res.free, "stages": res.stages}


def _cmd_lemma25(cfg: RunConfig):
    curve = _load_curve(cfg, _quintic)
    rep, p0 = verify_25_lemma(curve)
    rep.sections["P0(x,x)"] = str(p0)
    return [rep], {}


_DISPATCH = {
    "validate": _cmd_validate,
    "onepoint": _cmd_onepoint,
    "twopoint": _cmd_twopoint,
    "threepoint": _cmd_threepoint,
    "graphs": _cmd_graphs,
    "equivalence": _cmd_equivalence,
    "solve-25": _cmd_solve25,
    "lemma-25": _cmd_lemma25,
}


def run(cfg: RunConfig, out=None) -> int:
    """Run one command; returns the exit status (0 ok, 1 failed check, 2 bad input)."""
    out = out or sys.stdout
    if cfg.command not in _DISPATCH:
        print(f"error: unknown command {cfg.command!r}", file=out)
        return 2
    try:
        reports, data = _DISPATCH[cfg.command](cfg)
    except (CurveError, UsageError, OSError) as exc:
        _emit_error(cfg, out, exc)
        return 2
    except (ModelError, TruncationError, ArithmeticError) as exc:
        _emit_error(cfg, out, exc)
        return 1
    ok = all(r.passed for r in reports)
    if cfg.format == "structured":
        doc = {"command": cfg.command, "status": "ok" if ok else "failed", "reports": [r.to_dict() for r in reports], "data": data}
        print(json.dumps(doc, indent=2, sort_keys=True, default=str), file=out)
    else:
        print("\n\n".join(r.render() for r in reports), file=out)
    return 0 if ok else 1


def _emit_error(cfg: RunConfig, out, exc: Exception) -> None:
    if cfg.format == "structured":
        print(json.dumps({"command": cfg.command, "status": "error", "error": str(exc)}, indent=2), file=out)
    else:
        print(f"error: {exc}", file=out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypervir", description="Virasoro correlators on hyperelliptic curves.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--curve", help="curve file (lines 'n = 5', 'a0 = 1', ...)")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--seed", type=int, help="seed for a sample curve when --curve is absent")
    ap.add_argument("--max-order", type=int, default=0, help="highest eps order in printed diagonal expansions")
    ap.add_argument("--n", type=int, help="graph vertices (graphs), points (equivalence), else the sample-curve degree")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.curve, args.format, args.seed, args.max_order, args.n)
    return run(cfg)
