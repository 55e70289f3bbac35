"""Command-line interface.

Subcommands:
    certify       cardinality certificate for a finite endofunction
    certify-pl    certificate for a piecewise-affine interval map
    find-root     exhaustive search for g with g^n = f on a finite domain
    construct     build a certified root-free map near a given one
    verify-paper  run the bundled reference corpus end to end
    export-plot   render a map as a static vector image

Exit codes: 0 definitive result, 1 verification-suite failure, 2 inapplicable
or abstained (no certificate / construction grid exhausted), 3 node budget
exceeded, 4 input error.  All machine output is JSON on stdout; --format text
switches to a human-oriented rendering where one exists.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from typing import Optional

from . import circle, endo, pl_interval, symbolic
from .certifier import Abstention, NonRootCertificate, certify_finite
from .constructor import (ConstructionFailure, construct_non_iterate,
                          construct_non_iterate_interval, trace_to_json_dict)
from .root_solver import (BudgetExceeded, DEFAULT_NODE_BUDGET, RootQuery,
                          find_root, verify_root)

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_ABSTAIN = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4


class InputError(Exception):
    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field


def corpus_path(name: str):
    """Path to a bundled corpus file."""
    return resources.files("itroots.corpus").joinpath(name)


def _emit(doc: dict, fmt: str, text_lines=None):
    if fmt == "text" and text_lines is not None:
        for line in text_lines:
            print(line)
    else:
        print(json.dumps(doc, indent=1))


def _load_endo(path) -> endo.Endofunction:
    try:
        return endo.load(path)
    except endo.EndoFormatError as exc:
        raise InputError(str(exc), exc.field) from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_pl(path) -> pl_interval.PLMapInterval:
    try:
        return pl_interval.load(path)
    except pl_interval.PLFormatError as exc:
        raise InputError(str(exc), exc.field) from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_circle(path) -> circle.AdmissiblePLCircleMap:
    try:
        return circle.load(path)
    except circle.CircleFormatError as exc:
        raise InputError(str(exc), exc.field) from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parse_eps(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad epsilon {text!r}: {exc}", "epsilon") from exc


# ------------------------------------------------------------- subcommands

def cmd_certify(args) -> int:
    f = _load_endo(args.input)
    outcome = certify_finite(f)
    if isinstance(outcome, NonRootCertificate):
        doc = outcome.to_json()
        if f.labels is not None:
            doc["x0_label"] = f.labels[outcome.x0]
        _emit(doc, args.format,
              [f"certificate {outcome.case} at point {outcome.x0}: "
               f"no iterative roots of any order n >= 2"])
        return EXIT_OK
    _emit(outcome.to_json(), args.format,
          [f"no certificate: {outcome.reason} ({outcome.detail})"])
    return EXIT_ABSTAIN


def cmd_certify_pl(args) -> int:
    f = _load_pl(args.input)
    outcome = pl_interval.certify_map(f)
    if isinstance(outcome, NonRootCertificate):
        _emit(outcome.to_json(), args.format,
              [f"certificate {outcome.case} at x0 = {outcome.x0}"])
        return EXIT_OK
    _emit(outcome.to_json(), args.format,
          [f"no certificate: {outcome.reason}"])
    return EXIT_ABSTAIN


def cmd_find_root(args) -> int:
    f = _load_endo(args.input)
    if args.order < 2:
        raise InputError("--order must be at least 2", "order")
    mode = "count-all" if args.all else "first-witness"
    query = RootQuery(f, args.order, mode=mode, budget=args.budget)
    try:
        res = find_root(query)
    except BudgetExceeded as exc:
        _emit({"status": "budget-exceeded", "witness": None,
               "explored": exc.explored}, args.format,
              [f"budget exceeded after {exc.explored} nodes"])
        return EXIT_BUDGET
    doc = {
        "status": res.status,
        "witness": endo.to_json_dict(res.witness) if res.witness else None,
        "explored": res.explored,
    }
    if res.count is not None:
        doc["count"] = res.count
    lines = [f"status: {res.status} (explored {res.explored} nodes)"]
    if res.witness is not None:
        if not verify_root(f, res.witness, args.order):
            raise RuntimeError("solver returned a non-verifying witness")
        lines.append(f"witness: {list(res.witness.table)}")
    if res.count is not None:
        lines.append(f"roots of order {args.order}: {res.count}")
    _emit(doc, args.format, lines)
    return EXIT_OK


def cmd_construct(args) -> int:
    eps = _parse_eps(args.epsilon)
    try:
        if args.domain == "circle":
            h = _load_circle(args.input)
            res = construct_non_iterate(h, eps)
            doc = {
                "f": circle.to_json_dict(res.f),
                "certificate": res.cert.to_json(),
                "sup_distance_below": str(eps),
            }
            if args.trace:
                try:
                    with open(args.trace, "w", encoding="utf-8") as fh:
                        json.dump(trace_to_json_dict(res.trace), fh, indent=1)
                except OSError as exc:
                    raise InputError(f"cannot write trace: {exc}",
                                     "trace") from exc
            _emit(doc, args.format,
                  [f"constructed map with C3 certificate at {res.cert.x0}",
                   f"flat arc: [{res.trace.K.start}, {res.trace.K.end}]"])
        else:
            hm = _load_pl(args.input)
            ires = construct_non_iterate_interval(hm, eps)
            doc = {
                "f": pl_interval.to_json_dict(ires.f),
                "certificate": ires.cert.to_json(),
                "sup_distance_below": str(eps),
            }
            _emit(doc, args.format,
                  [f"constructed map with C3 certificate at {ires.cert.x0}"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    except ConstructionFailure as exc:
        _emit({"error": str(exc), "step": exc.step}, args.format,
              [f"construction failed at step {exc.step}"])
        return EXIT_ABSTAIN
    return EXIT_OK


def _truncated_double_ray_endofunction() -> endo.Endofunction:
    """Finite window of the two-ray map (tops at index 2, rim self-looped)."""
    f = symbolic.double_ray_map()
    tops = {"x": 2, "y": 2}
    table = symbolic.materialize_truncated(f, tops)
    points = sorted(table.keys())
    index = {p: i for i, p in enumerate(points)}
    return endo.Endofunction(
        tuple(index[table[p]] if table[p] is not None else index[p]
              for p in points),
        labels=tuple(f"{lab}_{j}" for lab, j in points))


CORPUS_FILES = ("f1.json", "f2.json", "remark2_f.json", "remark2_g.json",
                "remark3_f.json", "remark3_g.json", "remark4_f.json",
                "remark4_g.json", "circle5.json")


def verify_paper(seed: int = 20260811,
                 corpus_dir=None) -> list[tuple[str, bool, str]]:
    """Run every bundled reference instance; one (anchor, ok, detail) each.

    A missing corpus file is a hard input error; a corrupted one fails only
    the anchors that read it.
    """
    def read(name):
        if corpus_dir is not None:
            import pathlib
            path = pathlib.Path(corpus_dir) / name
        else:
            path = corpus_path(name)
        if not path.is_file():
            raise InputError(f"missing corpus file {name}", name)
        return path

    for name in CORPUS_FILES:
        read(name)

    anchors: list[tuple[str, bool, str]] = []

    def guarded(name: str, thunk):
        try:
            ok, detail = thunk()
        except (InputError, ValueError) as exc:
            ok, detail = False, f"error: {exc}"
        anchors.append((name, bool(ok), detail))

    def continuous_interval():
        f1 = _load_pl(read("f1.json"))
        out = pl_interval.certify_map(f1)
        ok = (isinstance(out, NonRootCertificate) and out.case == "C3"
              and out.x0 == Fraction(3, 4)
              and pl_interval.preimage_point(f1, Fraction(3, 4))
              .contains(Fraction(1, 3))
              and pl_interval.preimage2_point(f1, Fraction(3, 4))
              .contains(Fraction(1, 7)))
        return ok, "C3 at 3/4"

    def discontinuous_interval():
        f2 = _load_pl(read("f2.json"))
        out = pl_interval.certify_map(f2)
        ok = (isinstance(out, NonRootCertificate) and out.case == "C3"
              and out.x0 == Fraction(1, 4)
              and pl_interval.preimage_point(f2, Fraction(1, 4))
              .contains(Fraction(5, 8)))
        return ok, "C3 at 1/4"

    def nine_point():
        f9 = _load_endo(read("remark2_f.json"))
        g9 = _load_endo(read("remark2_g.json"))
        return verify_root(f9, g9, 2), "g^2 = f"

    def nineteen_point():
        f19 = _load_endo(read("remark3_f.json"))
        g19 = _load_endo(read("remark3_g.json"))
        return verify_root(f19, g19, 2), "g^2 = f"

    def _load_ray(name):
        try:
            return symbolic.load(read(name))
        except symbolic.RayFormatError as exc:
            raise InputError(str(exc), exc.field) from exc

    def double_ray():
        rf, rg = _load_ray("remark4_f.json"), _load_ray("remark4_g.json")
        return (symbolic.ray_equal(symbolic.ray_compose(rg, rg), rf),
                "g o g = f on both rays")

    def abstains():
        f9 = _load_endo(read("remark2_f.json"))
        f19 = _load_endo(read("remark3_f.json"))
        outs = [certify_finite(m) for m in
                (f9, f19, _truncated_double_ray_endofunction())]
        ok = all(isinstance(o, Abstention) and o.reason == "inequality-fails"
                 for o in outs)
        return ok, "constant map, heavy top fiber, and the exact N^3 boundary"

    def cube_bound():
        from .certifier import Cardinal
        rf, rg = _load_ray("remark4_f.json"), _load_ray("remark4_g.json")
        ff = symbolic.ray_compose(rf, rf)
        ok = (symbolic.ray_fiber_cardinal(ff, ("x", 0)) == Cardinal.finite(8)
              and symbolic.max_fiber_cardinal_excluding(rf, ("x", 0))
              == Cardinal.finite(2)
              and symbolic.ray_equal(symbolic.ray_compose(rg, rg), rf))
        return ok, "8 = 2^3 with a root present"

    def measured_blocks():
        report = symbolic.block_verify_ex4()
        bad = "; ".join(a.key for a in report.assertions if not a.passed)
        return report.all_passed, bad or "all five hold"

    def density_circle():
        part = circle.CirclePartition((Fraction(0), Fraction(1, 3),
                                       Fraction(2, 3)))
        ident = circle.identity_map(part)
        try:
            res = construct_non_iterate(ident, Fraction(1, 2))
        except ConstructionFailure as exc:
            return False, str(exc)
        ok = (res.cert.case == "C3"
              and circle.sup_distance_circle(res.f, ident) < Fraction(1, 2))
        return ok, "identity, radius 1/2"

    def density_interval():
        ident = pl_interval.PLMapInterval.identity()
        try:
            res = construct_non_iterate_interval(ident, Fraction(1, 2))
        except ConstructionFailure as exc:
            return False, str(exc)
        ok = (res.cert.case == "C3"
              and pl_interval.sup_distance(res.f, ident) < Fraction(1, 2))
        return ok, "identity, radius 1/2"

    def spot_check():
        rng = random.Random(seed)
        violations = certified = 0
        for _ in range(60):
            n = rng.randrange(1, 7)
            f = endo.Endofunction(tuple(rng.randrange(n) for _ in range(n)))
            out = certify_finite(f)
            if isinstance(out, NonRootCertificate):
                certified += 1
                if find_root(RootQuery(f, 2)).status != "none":
                    violations += 1
        return violations == 0, f"{certified} certificates confirmed, seed {seed}"

    guarded("continuous-interval-map", continuous_interval)
    guarded("discontinuous-interval-map", discontinuous_interval)
    guarded("nine-point-square-root", nine_point)
    guarded("nineteen-point-square-root", nineteen_point)
    guarded("double-ray-square-root", double_ray)
    guarded("certifier-abstains-on-sharp-instances", abstains)
    guarded("cube-bound-attained", cube_bound)
    guarded("measured-block-demonstration", measured_blocks)
    guarded("density-construction-circle", density_circle)
    guarded("density-construction-interval", density_interval)
    guarded("oracle-spot-check", spot_check)
    return anchors


def cmd_verify_paper(args) -> int:
    anchors = verify_paper(args.seed, corpus_dir=args.corpus_dir)
    ok = all(passed for _, passed, _ in anchors)
    if args.format == "json":
        _emit({"anchors": [{"name": n, "passed": p, "detail": d}
                           for n, p, d in anchors],
               "all_passed": ok}, "json")
    else:
        for name, passed, detail in anchors:
            mark = "PASS" if passed else "FAIL"
            print(f"{mark}  {name:40s} {detail}")
        print(f"{'PASS' if ok else 'FAIL'}  overall")
    return EXIT_OK if ok else EXIT_SUITE_FAILED


def cmd_export_plot(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4, 4))
    if args.kind == "interval":
        f = _load_pl(args.input)
        for p in f.pieces:
            if p.is_degenerate():
                ax.plot([float(p.lo)], [float(p.value(p.lo))], "k.", ms=4)
                continue
            xs = [float(p.lo), float(p.hi)]
            ys = [float(p.value(p.lo)), float(p.value(p.hi))]
            ax.plot(xs, ys, "k-", lw=1.2)
        ax.set_xlabel("x")
        ax.set_ylabel("f(x)")
    else:
        fc = _load_circle(args.input)
        k = fc.k
        for j in range(k):
            t0 = fc.partition.points[j]
            length = fc.lens[j]
            s0 = fc.images[j]
            d = fc.disps[j]
            # split the lift where domain or image wraps past 1
            cuts = [Fraction(0), Fraction(1)]
            if d != 0:
                for target in (0, 1):
                    alpha = (Fraction(target) - s0) / d
                    if 0 < alpha < 1:
                        cuts.append(alpha)
            t_end = t0 + length
            if t_end > 1:
                cuts.append((Fraction(1) - t0) / length)
            for a0, a1 in zip(sorted(set(cuts)), sorted(set(cuts))[1:]):
                mid = (a0 + a1) / 2
                xs = [float((t0 + a0 * length) % 1), float((t0 + a1 * length) % 1)]
                ys = [float((s0 + a0 * d) % 1), float((s0 + a1 * d) % 1)]
                if xs[1] == 0 and xs[0] > 0:
                    xs[1] = 1.0
                if (s0 + mid * d) % 1 > (s0 + a0 * d) % 1 and ys[1] == 0:
                    ys[1] = 1.0
                ax.plot(xs, ys, "k-", lw=1.2)
        ax.set_xlabel("angle t")
        ax.set_ylabel("image angle")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(args.output)
    print(json.dumps({"written": args.output}))
    return EXIT_OK


# ------------------------------------------------------------------ driver

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="itroots",
        description="iterative-root certificates, search and constructions")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--format", choices=("json", "text"),
                       default=fmt_default)

    p = sub.add_parser("certify", help="certify a finite endofunction")
    p.add_argument("--input", required=True)
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("certify-pl", help="certify an interval map")
    p.add_argument("--input", required=True)
    common(p)
    p.set_defaults(func=cmd_certify_pl)

    p = sub.add_parser("find-root", help="search for an iterative root")
    p.add_argument("--input", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--all", action="store_true",
                   help="count every root (exponential; small inputs only)")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    common(p)
    p.set_defaults(func=cmd_find_root)

    p = sub.add_parser("construct", help="build a certified root-free map")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--domain", choices=("circle", "interval"),
                   default="circle")
    p.add_argument("--trace", help="write the construction trace JSON here")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify-paper",
                       help="run the bundled reference corpus")
    p.add_argument("--seed", type=int, default=20260811)
    p.add_argument("--corpus-dir", default=None,
                   help="read corpus files from here instead of the package")
    common(p, fmt_default="text")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("export-plot", help="render a map to a vector image")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("interval", "circle"),
                   default="interval")
    p.add_argument("--output", required=True)
    common(p)
    p.set_defaults(func=cmd_export_plot)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"error": str(exc), "field": exc.field}))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
