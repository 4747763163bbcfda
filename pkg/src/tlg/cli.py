"""``tlg`` command-line interface.

Exit codes: 0 on success, 1 for invalid input, 2 when an internal invariant
check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .apv import all_apvs, design_weights, normalized_apv
from .derived import bottleneck, build_derived, is_connected
from .errors import IdentityViolation, InvalidTarget, InvariantViolation, NotTlg, TlgError
from .experiments import SCENARIOS, ExperimentConfig, env_seed, run_experiment, write_outputs
from .graph import enumerate_triangles, is_chordal, is_laman, load_graph, load_json_file
from .henneberg import _peel, rhc_recognize
from .stoch import WeightAssignment, check_assumption, product_along_walk
from .walks import periodic_exhaustive_walk

SIM_STEPS = 10_000
SIM_TOL = 1e-9


# -- analyze ------------------------------------------------------------------


def analyze(path) -> dict:
    g = load_graph(path)
    report = {
        "nodes": g.n,
        "edges": g.m,
        "triangles": len(enumerate_triangles(g)),
        "chordal": is_chordal(g),
        "laman": is_laman(g),
    }
    try:
        _peel(g)
    except NotTlg as exc:
        report.update(is_tlg=False, reason=exc.reason)
        return report
    prog = rhc_recognize(g)
    d = build_derived(g)
    report.update(
        is_tlg=True,
        rhc=prog.to_json(),
        derived={
            "nodes": d.size,
            "edges": len(d.adjacency),
            "connected": is_connected(d),
            "triangles": [list(t) for t in d.triangles],
            "adjacency": [list(e) for e in sorted(d.adjacency)],
        },
        bottlenecks=[[bottleneck(d, v, i) for i in range(d.size)] for v in range(g.n)],
    )
    return report


def _print_analysis(r: dict, out) -> None:
    print(f"nodes {r['nodes']}  edges {r['edges']}  triangles {r['triangles']}", file=out)
    print(f"chordal {r['chordal']}  laman {r['laman']}", file=out)
    if not r["is_tlg"]:
        print(f"is_tlg False: {r['reason']}", file=out)
        return
    print("is_tlg True", file=out)
    rhc = r["rhc"]
    print(f"RHC certificate: start {tuple(rhc['initial'])}", file=out)
    for s in rhc["steps"]:
        print(f"  node {s['node']} on edge {tuple(s['edge'])}", file=out)
    d = r["derived"]
    shape = "connected" if d["connected"] else "disconnected"
    print(f"derived graph: {d['nodes']} nodes, {d['edges']} edges, {shape}", file=out)
    for i, t in enumerate(d["triangles"]):
        print(f"  T{i} = {tuple(t)}", file=out)
    print("bottleneck[node][target]:", file=out)
    header = "  node " + " ".join(f"T{i:<3}" for i in range(d["nodes"]))
    print(header, file=out)
    for v, row in enumerate(r["bottlenecks"]):
        print(f"  {v:<4} " + " ".join(f"T{b:<3}" for b in row), file=out)


def cmd_analyze(args, out) -> int:
    report = analyze(args.graph)
    if args.json:
        print(json.dumps(report, indent=2), file=out)
    else:
        _print_analysis(report, out)
    return 0


# -- limits -------------------------------------------------------------------


def compute_limits(graph_path, weights_path, steps: int = SIM_STEPS) -> dict:
    g = load_graph(graph_path)
    d = build_derived(g)
    assign = WeightAssignment.from_json(load_json_file(weights_path), d.size)
    rows = []
    worst = 0.0
    for vec in all_apvs(d, assign):
        i = vec.tri
        walk = periodic_exhaustive_walk(d, i, steps)
        P = product_along_walk(d, assign, walk)
        bar = np.array([float(x) for x in vec.w_bar])
        dev = float(np.max(np.abs(P - bar)))
        if dev > SIM_TOL:
            raise IdentityViolation(i, detail=f"simulation deviates from formula by {dev:.3g}")
        worst = max(worst, dev)
        rows.append(vec.to_json() | {"simulation_deviation": dev})
    return {"triangles": [list(t) for t in d.triangles], "limits": rows,
            "simulation_steps": steps, "max_deviation": worst}


def cmd_limits(args, out) -> int:
    result = compute_limits(args.graph, args.weights, args.steps)
    if args.json:
        print(json.dumps(result, indent=2), file=out)
        return 0
    for row in result["limits"]:
        i = row["triangle"]
        exact = ", ".join(f"{p}/{q}" if q != "1" else p for p, q in row["w_bar"])
        print(f"T{i} {tuple(result['triangles'][i])}: w_bar = ({exact})", file=out)
        print("    ~ (" + ", ".join(f"{x:.12f}" for x in row["w_bar_float"]) + ")", file=out)
    print(f"simulation ({result['simulation_steps']} steps) max deviation "
          f"{result['max_deviation']:.3e}", file=out)
    return 0


# -- design -------------------------------------------------------------------


def parse_target(text: str) -> list[Fraction]:
    try:
        return [Fraction(tok.strip()) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidTarget(f"cannot parse target {text!r}: {exc}") from None


def cmd_design(args, out) -> int:
    g = load_graph(args.graph)
    d = build_derived(g)
    target = parse_target(args.target)
    assign = design_weights(d, target, args.triangle)
    if not check_assumption(d, assign).ok:
        raise IdentityViolation(args.triangle, detail="designed weights violate the assumption")
    got = normalized_apv(d, assign, args.triangle)
    if list(got) != target:
        raise IdentityViolation(args.triangle, detail="round trip does not reproduce the target")
    text = json.dumps(assign.to_json(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out} (round trip verified)", file=out)
    else:
        print(text, file=out)
    return 0


# -- experiment ---------------------------------------------------------------


def load_config(source: str, overrides: dict) -> ExperimentConfig:
    if source in SCENARIOS:
        raw, base = {"scenario": source}, Path(".")
    else:
        raw, base = load_json_file(source), Path(source).parent
        if not isinstance(raw, dict):
            raise TlgError(f"{source}: config must be a JSON object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    raw["seed"] = env_seed(raw.get("seed", 0))
    return ExperimentConfig.from_dict(raw, base)


def cmd_experiment(args, out) -> int:
    config = load_config(args.config, {"count": args.count, "length": args.length,
                                       "seed": args.seed, "workers": args.workers})
    result = run_experiment(config)
    path = write_outputs(result, args.out)
    summary = result.summary()
    if config.label:
        print(config.label, file=out)
    for name, b in summary["batches"].items():
        print(f"{name}: {b['converged']}/{b['runs']} converged, "
              f"{b['distinct_limit_count']} distinct limits, spread {b['spread']:.3e}", file=out)
    print(f"summary written to {path}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tlg", description="Triangulated Laman graph tools.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="TLG check, RHC certificate and derived graph")
    a.add_argument("graph")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    lim = sub.add_parser("limits", help="exact limit vectors with a simulation cross-check")
    lim.add_argument("graph")
    lim.add_argument("weights")
    lim.add_argument("--steps", type=int, default=SIM_STEPS)
    lim.add_argument("--json", action="store_true")
    lim.set_defaults(func=cmd_limits)

    des = sub.add_parser("design", help="local weights realising a target limit")
    des.add_argument("graph")
    des.add_argument("--target", required=True, help='comma-separated rationals, e.g. "1/4,1/4,1/2"')
    des.add_argument("--triangle", type=int, required=True)
    des.add_argument("--out")
    des.set_defaults(func=cmd_design)

    ex = sub.add_parser("experiment", help="Monte Carlo batch (config file or exp1/exp2/exp3)")
    ex.add_argument("config")
    ex.add_argument("--out", required=True)
    ex.add_argument("--count", type=int, help="walks per batch")
    ex.add_argument("--length", type=int, help="steps per walk")
    ex.add_argument("--seed", type=int)
    ex.add_argument("--workers", type=int)
    ex.set_defaults(func=cmd_experiment)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except TlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
