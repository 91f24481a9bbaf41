"""Command line entry point: ``tightspan <command> [options]``.

Every command writes one JSON document (or OFF/CSV for ``hull``) to
``--out`` or stdout, and a short human summary to stdout or stderr.
Exit status is 1 for bad input and 2 when a size budget is exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import io
from .cells import (DEFAULT_BUDGET, barycentric_subdivision, build_complex, class_counts,
                    edge_length, enumerate_vertices, hull_dimension)
from .errors import BudgetExceeded, TightSpanError
from .graphs import (DEFAULT_GENERATOR_BUDGET, Interior, check_stable_intervals, cone_types,
                     delta_hyperbolicity, discretely_geodesic, graph_metric, min_beta,
                     parse_generator)
from .groups import act_on_complex, check_group, fixed_point_function, isometry_group
from .hull import DEFAULT_MAX_ITER, DEFAULT_RESIDUAL_CAP, bicombing
from .metric import to_rational


def _space(args):
    if args.gen:
        budget = args.budget if args.budget is not None else DEFAULT_GENERATOR_BUDGET
        return graph_metric(parse_generator(args.gen, budget=min(budget, DEFAULT_GENERATOR_BUDGET)))
    return io.load_space(args.input)


def _budget(args):
    return args.budget if args.budget is not None else DEFAULT_BUDGET


def _emit(args, text: str, summary: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)


def _summary_block(cx, subdivision):
    dims = {str(k): v for k, v in enumerate(cx.f_vector())}
    block = {
        "dim": hull_dimension(cx),
        "cells_per_dim": dims,
        "classes_per_dim": {str(k): v for k, v in class_counts(cx).items()},
        "edge_lengths": sorted({io.fmt_rational(edge_length(cx, i)) for i in cx.cells_of_dim(1)},
                               key=lambda s: Fraction(s)),
    }
    if subdivision is not None:
        block["subdivision_simplices_per_dim"] = {
            str(k): len(subdivision.of_dim(k)) for k in range(block["dim"] + 1)}
    return block


def _summary_text(block, n_points):
    parts = [f"points={n_points}", f"dim={block['dim']}"]
    parts += [f"{k}-cells={v}" for k, v in block["cells_per_dim"].items()]
    parts.append("classes=" + ",".join(f"{k}:{v}" for k, v in block["classes_per_dim"].items()))
    return " ".join(parts)


def cmd_hull(args):
    M = _space(args)
    cx = build_complex(M, budget=_budget(args), jobs=args.jobs)
    sub = barycentric_subdivision(cx) if args.subdivide else None
    block = _summary_block(cx, sub)
    if args.format == "off":
        text = io.complex_to_off(cx)
    elif args.format == "csv":
        text = io.complex_to_csv(cx)
    else:
        doc = io.complex_to_json(cx)
        doc["summary"] = block
        text = io.dumps(doc)
    if args.plot:
        from .plotting import plot_hull
        plot_hull(cx, args.plot)
    _emit(args, text, _summary_text(block, M.n))
    return 0


def cmd_vertices(args):
    M = _space(args)
    vs = enumerate_vertices(M, budget=_budget(args), jobs=args.jobs)
    doc = {"points": [M.label(x) for x in range(M.n)],
           "vertices": [io.function_to_json(v) for v in vs]}
    _emit(args, io.dumps(doc), f"vertices={len(vs)}")
    return 0


def cmd_space(args):
    M = _space(args)
    delta = delta_hyperbolicity(M)
    doc = {"points": [M.label(x) for x in range(M.n)],
           "discretely_geodesic": discretely_geodesic(M),
           "delta": io.fmt_rational(delta)}
    interior = None
    if args.interior_only:
        interior = Interior(args.center, M.eccentricity(args.center))
        doc["interior"] = {"center": args.center, "radius": interior.radius}
    if M.integer_valued:
        beta = min_beta(M, interior)
        doc["min_beta"] = beta
        probe = math.ceil(delta) + 1
        rep = check_stable_intervals(M, probe, interior)
        doc["stability_at_delta_plus_one"] = {
            "beta": probe, "holds": rep.holds,
            "witness": list(rep.witness) if rep.witness else None,
            "triples_checked": rep.triples_checked}
        if beta > 0:
            fail = check_stable_intervals(M, beta - 1, interior)
            doc["witness_below_min_beta"] = list(fail.witness)
    else:
        doc["min_beta"] = None
    cone_beta = args.beta if args.beta is not None else doc.get("min_beta") or 1
    cones = []
    for v in range(M.n):
        t = cone_types(M, v, cone_beta)
        cones.append({"apex": M.label(v), "cone_count": t.count,
                      "f_class_count": len(t.f_classes), "classes_determine_cones": t.classes_determine_cones})
    doc["cone_beta"] = cone_beta
    doc["cones"] = cones
    if args.plot:
        from .plotting import plot_space
        plot_space(doc, doc["points"], args.plot)
    summary = (f"points={M.n} min_beta={doc['min_beta']} delta={doc['delta']} "
               f"max_cones={max(c['cone_count'] for c in cones)}")
    _emit(args, io.dumps(doc), summary)
    return 0


def cmd_bicombing(args):
    M = _space(args)
    x, y = M.index(_point(args.x)), M.index(_point(args.y))
    rep = bicombing(M, x, y, to_rational(args.t), max_iter=args.max_iter,
                    residual_cap=to_rational(args.residual_cap))
    doc = {"x": M.label(x), "y": M.label(y), "t": io.fmt_rational(to_rational(args.t))}
    doc.update(rep.to_json())
    _emit(args, io.dumps(doc), f"iterations={rep.iterations} exact={rep.converged_exactly}")
    return 0


def _point(s):
    return int(s) if s.isdigit() else s


def cmd_action(args):
    M = _space(args)
    G = check_group(M, io.load_subgroup(args.subgroup)) if args.subgroup else isometry_group(M)
    cx = build_complex(M, budget=_budget(args), jobs=args.jobs)
    rep = act_on_complex(cx, G)
    doc = rep.to_json()
    doc["fixed_point_function"] = io.function_to_json(fixed_point_function(M, G))
    doc["elements"] = [list(g) for g in G]
    _emit(args, io.dumps(doc), f"order={rep.group_order} rigid={rep.simplicial_rigidity}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tightspan", description="Injective hulls of finite metric spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="metric JSON or graph JSON file")
        src.add_argument("--gen", help="generator, e.g. hypercube:3, zn_ball:2,3,linf")
        p.add_argument("--out", help="write the document here instead of stdout")
        p.add_argument("--budget", type=int, help="cap on grid size or generated vertices")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for vertex search")
        p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
        p.add_argument("--residual-cap", default=str(DEFAULT_RESIDUAL_CAP.numerator) + "/"
                       + str(DEFAULT_RESIDUAL_CAP.denominator))
        return p

    p = common(sub.add_parser("hull", help="cell complex of the hull"))
    p.add_argument("--format", choices=("json", "off", "csv"), default="json")
    p.add_argument("--subdivide", action="store_true", help="also count subdivision simplices")
    p.add_argument("--plot", help="save a picture of the 2-skeleton to this file")
    p.set_defaults(func=cmd_hull)

    p = common(sub.add_parser("vertices", help="vertices of the hull only"))
    p.set_defaults(func=cmd_vertices)

    p = common(sub.add_parser("space", help="stability, hyperbolicity and cone types"))
    p.add_argument("--interior-only", action="store_true",
                   help="only check triples whose intervals stay clear of the ball's boundary")
    p.add_argument("--center", type=int, default=0, help="ball center for --interior-only")
    p.add_argument("--beta", type=int, help="ball radius for cone-type classes (default min beta)")
    p.add_argument("--plot", help="save a bar chart of cone counts to this file")
    p.set_defaults(func=cmd_space)

    p = common(sub.add_parser("bicombing", help="point on the bicombing geodesic"))
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("t", help="parameter in [0,1], e.g. 1/4")
    p.set_defaults(func=cmd_bicombing)

    p = common(sub.add_parser("action", help="isometry group action on the hull"))
    p.add_argument("--subgroup", help="JSON list of permutations (default: full isometry group)")
    p.set_defaults(func=cmd_action)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.budget is not None and args.budget <= 0:
        print("error: --budget must be positive", file=sys.stderr)
        return 1
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TightSpanError, ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
