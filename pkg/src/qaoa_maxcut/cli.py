"""Command-line entry point.

Every run writes one self-describing document to stdout (JSON with
``manifest`` and ``result`` keys, or CSV/text preceded by a ``# manifest:``
line). Floats are printed with 17 significant digits, so identical
invocations give identical bytes. Wall time goes to stderr.

Exit codes: 0 success, 2 usage error, 3 domain error. Errors are reported on
stderr as a JSON object ``{"error": {"code": ..., "message": ...}}``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .errors import QAOAError
from .graph import classify_edges, load_graph
from .optimize import ManifoldKind, ManifoldSpec, OptimizerConfig, landscape_scan, optimize
from .p1 import edge_expectation_p1, graph_expectation_p1
from .ring import ring_expectation, schedule_from_tilde, tilde_value
from .schedule import AngleSchedule, Convention, parse_angle, parse_angle_list
from .statevector import PRNG_NAME, maxcut_bruteforce, sample_bitstrings, simulate_expectation

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3


class UsageError(Exception):
    code = "usage"


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def to_json(obj, indent: int = 0, step: int = 2) -> str:
    """JSON with floats at 17 significant digits."""
    pad, inner = " " * indent, " " * (indent + step)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + step)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(to_json(v) for v in seq) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + step) for v in seq) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _manifest(args, seed=None) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    return {"subcommand": args.command, "params": params, "seed": seed, "version": __version__}


def _parse_angles(text: str) -> list[float]:
    try:
        angles = parse_angle_list(text)
    except ValueError as exc:
        raise UsageError(f"bad angle list {text!r}: {exc}") from None
    if len(angles) % 2:
        raise UsageError("angle list must be interleaved gamma,beta pairs")
    return angles


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path):
    try:
        return load_graph(path)
    except OSError as exc:
        raise UsageError(f"cannot read graph file: {exc}") from None


def cmd_eval_p1(args, out):
    g = _load(args.graph)
    classes = []
    for env, count in classify_edges(g).items():
        value = edge_expectation_p1(env, args.gamma, args.beta)
        classes.append({"d": env.d, "e": env.e, "f": env.f, "count": count,
                        "edge_value": value, "contribution": count * value})
    F = graph_expectation_p1(g, args.gamma, args.beta)
    result = {
        "n_vertices": g.n_vertices,
        "n_edges": g.n_edges,
        "classes": classes,
        "F": F,
        "r_lower_bound": F / g.n_edges if g.n_edges else None,
    }
    out.write(to_json({"manifest": _manifest(args), "result": result}) + "\n")


def cmd_simulate(args, out):
    g = _load(args.graph)
    angles = _parse_angles(args.angles)
    sched = AngleSchedule.from_interleaved(angles, Convention(args.convention))
    F = simulate_expectation(g, sched, args.max_qubits)
    result = {"n_vertices": g.n_vertices, "n_edges": g.n_edges, "p": sched.p, "F": F,
              "schedule": sched.to_dict()}
    if sched.convention is Convention.MAXCUT and g.n_edges:
        result["F_per_edge"] = F / g.n_edges
    if args.samples:
        samples = sample_bitstrings(g, sched, args.samples, args.seed, args.max_qubits)
        cuts = np.array([c for _, c in samples], dtype=float)
        c_max, _ = maxcut_bruteforce(g)
        result["prng"] = PRNG_NAME
        result["c_max"] = c_max
        result["sample_mean_cut"] = float(cuts.mean())
        result["samples"] = [{"bitstring": b, "cut": c} for b, c in samples]
    out.write(to_json({"manifest": _manifest(args, args.seed if args.samples else None), "result": result}) + "\n")


def cmd_ring_eval(args, out):
    angles = _parse_angles(args.angles)
    if args.tilde:
        tilde = AngleSchedule.from_interleaved(angles, Convention.MAXCUT)
        sched = schedule_from_tilde(tilde)
    else:
        sched = AngleSchedule.from_interleaved(angles, Convention.RING)
    m = ring_expectation(args.n, sched)
    result = {"n": m.n, "p": sched.p, "F": m.F, "F_per_site": m.F_per_site, "r": m.r,
              "schedule": sched.to_dict()}
    if args.tilde:
        result["tilde_F"] = tilde_value(m.F, m.n)
    out.write(to_json({"manifest": _manifest(args), "result": result}) + "\n")


def _read_warm_start(path) -> list[float]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read warm-start file: {exc}") from None
    if isinstance(doc, list):
        return [float(x) for x in doc]
    try:
        return [float(x) for x in doc["result"]["optima"][0]["free"]]
    except (KeyError, IndexError, TypeError):
        raise UsageError("warm-start file has no result.optima[0].free") from None


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(starts=args.starts, method=args.method, n=args.n, sense=args.sense)


def cmd_optimize(args, out):
    warm = _read_warm_start(args.warm_start) if args.warm_start else None
    res = optimize(args.p, ManifoldSpec(ManifoldKind(args.manifold), args.p), _config(args), args.seed, warm)
    out.write(to_json({"manifest": _manifest(args, args.seed), "result": res.to_dict()}) + "\n")


def cmd_scan(args, out):
    spec = ManifoldSpec(ManifoldKind(args.manifold), args.p)
    grid = landscape_scan(spec, args.resolution, args.n)
    out.write("# manifest: " + json.dumps(_manifest(args), sort_keys=True) + "\n")
    names = [f"param{i + 1}" for i in range(len(grid.axes))]
    out.write(",".join(names + ["F_per_site"]) + "\n")
    for point, value in zip(grid.points(), grid.values.ravel()):
        out.write(",".join(_fmt(float(v)) for v in point) + "," + _fmt(float(value)) + "\n")


def cmd_classify(args, out):
    g = _load(args.graph)
    out.write("# manifest: " + json.dumps(_manifest(args), sort_keys=True) + "\n")
    out.write("d,e,f,count\n")
    for env, count in classify_edges(g).items():
        out.write(f"{env.d},{env.e},{env.f},{count}\n")


def cmd_table(args, out):
    out.write("# manifest: " + json.dumps(_manifest(args, args.seed), sort_keys=True) + "\n")
    out.write("# angles in units of pi; free parameters of manifold m1 (gamma_1, beta_1, gamma_2, ...)\n")
    out.write(f"{'p':>3} {'r':>9} {'F*/n':>10}  free angles\n")
    warm = None
    for p in range(1, args.p_max + 1):
        res = optimize(p, ManifoldSpec(ManifoldKind.M1, p), OptimizerConfig(starts=args.starts), args.seed, warm)
        best = res.best
        free = best.free if best is not None else np.array([])
        warm = free if best is not None else None
        angles = " ".join(f"{x / math.pi:.4f}" for x in free)
        out.write(f"{p:>3} {res.best_r:>9.6f} {res.best_F_per_site:>10.6f}  {angles}\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qaoa-maxcut", description="QAOA expectation values and angle search for MaxCut.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval-p1", help="level-1 closed form on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--gamma", required=True, type=_angle)
    p.add_argument("--beta", required=True, type=_angle)
    p.set_defaults(func=cmd_eval_p1)

    p = sub.add_parser("simulate", help="state-vector expectation and samples")
    p.add_argument("--graph", required=True)
    p.add_argument("--convention", choices=[c.value for c in Convention], default="maxcut")
    p.add_argument("--angles", required=True, help="gamma_1,beta_1,gamma_2,...; '0.25pi' or radians")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-qubits", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ring-eval", help="pseudospin evaluation on the even ring")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--angles", required=True)
    p.add_argument("--tilde", action="store_true", help="angles are in the MAXCUT convention")
    p.set_defaults(func=cmd_ring_eval)

    p = sub.add_parser("optimize", help="multi-start angle search")
    p.add_argument("--p", required=True, type=int)
    p.add_argument("--manifold", choices=[k.value for k in ManifoldKind], default="m1")
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warm-start", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--sense", choices=["min", "max"], default="min")
    p.add_argument("--method", choices=["bfgs", "gd"], default="bfgs")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("scan", help="landscape grid as CSV")
    p.add_argument("--p", required=True, type=int)
    p.add_argument("--manifold", choices=[k.value for k in ManifoldKind], default="m1")
    p.add_argument("--resolution", required=True, type=int)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("classify", help="edge classes (d, e, f) as CSV")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table", help="optimal-angle table for p = 1..P")
    p.add_argument("--p-max", required=True, type=int)
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_table)
    return parser


def _report(code: str, message: str, err):
    err.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except UsageError as exc:
        _report(UsageError.code, str(exc), err)
        return EXIT_USAGE
    except QAOAError as exc:
        _report(exc.code, str(exc), err)
        return EXIT_DOMAIN
    err.write(f"# wall_time_s: {time.perf_counter() - t0:.6f}\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
