"""Command-line front end.

Subcommands::

    shuffleops gb FILE         reduced Gröbner basis up to --max-arity
    shuffleops dims FILE       dimensions from normal monomials (--oracle to compare)
    shuffleops check-ns FILE   conditions M1 and M2 and the verdict
    shuffleops reduce FILE P   normal form of a shuffle polynomial
    shuffleops oracle dims FILE / oracle member FILE IDENTITY
    shuffleops scan FILE       check-ns at every sample point of a family
    shuffleops list            bundled presentations

FILE is a path to an ``.ops`` file or the name of a bundled one.  Exit
status is 0 when the computation finished (whatever the verdict), 2 for
bad input and 3 when a resource guard trips.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .dsl import OpsDocument, format_expr, parse_document, parse_dsl, parse_identity  # noqa: F401
from .errors import BoundExceeded, PresentationError, ShuffleOpsError
from .groebner import TruncatedGB, buchberger, hilbert_series
from .nschreier import SCHEMA, NSReport, verdict
from .oracle import DEFAULT_GUARD, is_consequence, operad_dims
from .ordering import OrderingSpec, expand_generator_order, make_ordering
from .poly import interreduce, leading_term, parse_polynomial, reduce
from .presentation import Presentation
from .shuffle_tree import check_monomial, to_str
from .symmetrize import ShufflePresentation, present_shuffle

__all__ = ["main", "parse_dsl", "load_document", "bundled_names"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GUARD = 3


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def bundled_names() -> list:
    root = resources.files("shuffleops") / "data"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ops"))


def _bundled_text(name: str) -> Optional[str]:
    stem = name[:-4] if name.endswith(".ops") else name
    res = resources.files("shuffleops") / "data" / f"{stem}.ops"
    return res.read_text(encoding="utf-8") if res.is_file() else None


def read_source(ref: str) -> str:
    path = Path(ref)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    text = _bundled_text(path.name)
    if text is None:
        raise PresentationError(
            f"no file {ref!r} and no bundled presentation of that name "
            f"(bundled: {', '.join(bundled_names())})"
        )
    return text


def load_document(ref: str) -> OpsDocument:
    return parse_document(read_source(ref))


def _fractions(text: str) -> tuple:
    try:
        return tuple(Fraction(v.strip()) for v in text.split(",") if v.strip())
    except (ValueError, ZeroDivisionError):
        raise PresentationError(f"cannot read {text!r} as comma-separated rationals") from None


def _point(doc: OpsDocument, sample: Optional[str]) -> Optional[tuple]:
    if not doc.is_family:
        if sample:
            raise PresentationError("--sample given but the presentation has no parameters")
        return None
    if sample:
        return _fractions(sample)
    points = doc.sample_points()
    if not points:
        raise PresentationError("family declares no sample points; pass --sample")
    return points[0]


def _generator_order(sp: ShufflePresentation, gens: Optional[str]) -> tuple:
    if not gens:
        return sp.signature.names
    names = [g.strip() for g in gens.split(">") if g.strip()]
    try:
        return expand_generator_order(names, sp.signature)
    except ShuffleOpsError as exc:
        raise PresentationError(str(exc)) from None


def _dual_dims(doc: OpsDocument, text: Optional[str]) -> Optional[tuple]:
    if text:
        vals = _fractions(text)
        if any(v.denominator != 1 or v < 0 for v in vals):
            raise PresentationError("--dual-dims takes non-negative integers")
        return tuple(int(v) for v in vals)
    return doc.dual_dims or None


# ---------------------------------------------------------------------------
# report pieces
# ---------------------------------------------------------------------------


def presentation_dict(p: Presentation, point: Optional[tuple], doc: OpsDocument) -> dict:
    return {
        "name": p.name,
        "generators": [
            {"name": g.name, "arity": g.arity, "symmetry": g.symmetry} for g in p.generators
        ],
        "identities": [
            [[str(c), format_expr(e)] for c, e in identity.terms] for identity in p.identities
        ],
        "parameters": dict(zip(doc.params, (str(v) for v in point))) if point else {},
    }


def gb_dict(gb: TruncatedGB) -> dict:
    return {
        "elements": [g.to_str(gb.ordering) for g in gb.elements],
        "leading_terms": [to_str(m) for m in gb.leading_terms],
        "complete_through": {str(a): done for a, done in gb.complete_through.items()},
        "status": gb.status,
        "certification": gb.certification or "none",
    }


def dims_dict(gb: TruncatedGB, N: int) -> dict:
    hs = hilbert_series(gb, N)
    return {"values": list(hs.dims), "exact": list(hs.exact)}


def dump_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit_json(obj: dict, dest: Optional[str]) -> bool:
    """Write ``obj``; True when it went to stdout (replacing the text report)."""
    if not dest:
        return False
    text = dump_json(obj)
    if dest == "-":
        sys.stdout.write(text)
        return True
    Path(dest).write_text(text, encoding="utf-8")
    return False


def _write_trace(path: Optional[str], runs: Sequence[TruncatedGB]) -> None:
    if not path:
        return
    lines = []
    for gb in runs:
        head = gb.ordering.describe()
        for rec in gb.log:
            lines.append(json.dumps({"ordering": head, **rec.to_dict()}, sort_keys=True))
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _setup(args):
    doc = load_document(args.file)
    point = _point(doc, getattr(args, "sample", None))
    p = doc.presentation(point)
    sp = present_shuffle(p)
    return doc, point, p, sp


def _ordering(args, sp) -> OrderingSpec:
    return make_ordering(args.order, _generator_order(sp, args.gens))


def _complete(args, sp, ordering) -> TruncatedGB:
    return buchberger(
        sp,
        ordering,
        args.max_arity,
        max_elements=getattr(args, "max_elements", None),
        time_limit=getattr(args, "time_limit", None),
    )


def _describe_point(doc: OpsDocument, point) -> str:
    return ", ".join(f"{k}={v}" for k, v in zip(doc.params, point))


def cmd_gb(args) -> int:
    doc, point, p, sp = _setup(args)
    ordering = _ordering(args, sp)
    gb = _complete(args, sp, ordering)
    _write_trace(args.trace, [gb])
    report = {
        "schema": SCHEMA,
        "presentation": presentation_dict(p, point, doc),
        "ordering": ordering.to_dict(),
        "gb": gb_dict(gb),
        "dims": dims_dict(gb, args.max_arity),
    }
    if not _emit_json(report, args.json):
        if point:
            print(f"sample: {_describe_point(doc, point)}")
        print(f"ordering: {ordering.describe()}")
        print(f"status: {gb.status}; certification: {gb.certification or 'none'}")
        done = [str(a) for a, ok in gb.complete_through.items() if ok]
        print(f"complete at arities: {', '.join(done) or 'none'}")
        print(f"{len(gb.elements)} element(s):")
        for g in gb.elements:
            print(f"  [{to_str(leading_term(g, ordering)[0])}]  {g.to_str(ordering)}")
    return EXIT_GUARD if gb.status == "truncated" else EXIT_OK


def cmd_dims(args) -> int:
    doc, point, p, sp = _setup(args)
    ordering = _ordering(args, sp)
    gb = _complete(args, sp, ordering)
    hs = hilbert_series(gb, args.max_arity)
    report = {
        "schema": SCHEMA,
        "presentation": presentation_dict(p, point, doc),
        "ordering": ordering.to_dict(),
        "gb": gb_dict(gb),
        "dims": {"values": list(hs.dims), "exact": list(hs.exact)},
    }
    oracle_vals = None
    if args.oracle:
        top = min(args.max_arity, args.guard)
        oracle_vals = operad_dims(p, top, guard=args.guard)
        report["oracle_dims"] = oracle_vals
    if not _emit_json(report, args.json):
        print(",".join(str(d) for d in hs.dims))
        loose = [str(n) for n, ok in enumerate(hs.exact, 1) if not ok]
        if loose:
            print(f"upper bounds only at arities {', '.join(loose)} (completion truncated)")
        if oracle_vals is not None:
            print("oracle: " + ",".join(str(d) for d in oracle_vals))
    return EXIT_GUARD if gb.status == "truncated" else EXIT_OK


def _ns_report(doc, point, p, sp, args) -> NSReport:
    N = args.max_arity
    orders = [_generator_order(sp, args.gens)] if args.gens else None
    orderings = None
    if args.order:
        fam = orders or [sp.signature.names]
        orderings = [make_ordering(args.order, o) for o in fam]
    dual = _dual_dims(doc, args.dual_dims)
    return verdict(sp, N, orders=orders, orderings=orderings, dual_dims=dual,
                   conjecture_mode=args.conjecture_mode, exhaustive=args.exhaustive)


def ns_report_dict(rep: NSReport, doc, point, p) -> dict:
    chosen = rep.m1.chosen or (rep.m1.runs[0] if rep.m1.runs else None)
    out = rep.to_dict()
    out["presentation"] = presentation_dict(p, point, doc)
    if chosen is not None:
        out["ordering"] = chosen.ordering.to_dict()
        out["gb"] = gb_dict(chosen.gb)
        out["dims"] = dims_dict(chosen.gb, chosen.gb.arity_bound)
    else:
        out["ordering"] = None
        out["gb"] = None
        out["dims"] = None
    return out


def cmd_check_ns(args) -> int:
    doc, point, p, sp = _setup(args)
    rep = _ns_report(doc, point, p, sp, args)
    runs = {}
    for r in list(rep.m1.runs) + list(rep.m2.runs):
        runs.setdefault(r.ordering.describe(), r.gb)
    _write_trace(args.trace, list(runs.values()))
    report = ns_report_dict(rep, doc, point, p)
    if not _emit_json(report, args.json):
        if point:
            print(f"sample: {_describe_point(doc, point)}")
        print(rep.summary())
        if report["dims"] is not None:
            print("dims: " + ",".join(str(d) for d in report["dims"]["values"]))
    return EXIT_OK


def cmd_reduce(args) -> int:
    doc, point, p, sp = _setup(args)
    poly = parse_polynomial(args.polynomial)
    for m in poly.monomials():
        check_monomial(m, sp.signature)
    ordering = _ordering(args, sp)
    args.max_arity = max(args.max_arity or 0, poly.arity)
    gb = _complete(args, sp, ordering)
    nf = reduce(poly, list(gb.elements), ordering)
    shown = nf.to_str(ordering) if not nf.is_zero() else "0"
    report = {
        "schema": SCHEMA,
        "ordering": ordering.to_dict(),
        "input": poly.to_str(ordering),
        "normal_form": shown,
    }
    if not _emit_json(report, args.json):
        print(shown)
    return EXIT_GUARD if gb.status == "truncated" else EXIT_OK


def cmd_oracle_dims(args) -> int:
    doc = load_document(args.file)
    point = _point(doc, args.sample)
    p = doc.instantiate(point)
    vals = operad_dims(p, args.max_arity, guard=args.guard)
    if not _emit_json({"schema": SCHEMA, "oracle_dims": vals, "presentation": presentation_dict(p, point, doc)}, args.json):
        print(",".join(str(v) for v in vals))
    return EXIT_OK


def cmd_oracle_member(args) -> int:
    doc = load_document(args.file)
    point = _point(doc, args.sample)
    p = doc.instantiate(point)
    element = parse_identity(args.identity, p.generators)
    res = is_consequence(p, element, guard=args.guard)
    witness = None
    if res.witness:
        witness = {str(k): str(v) for k, v in sorted(res.witness.items())}
    if not _emit_json({"schema": SCHEMA, "member": res.member, "witness": witness}, args.json):
        print("consequence" if res.member else "not a consequence")
        if witness:
            terms = ", ".join(f"{v} * row {k}" for k, v in witness.items())
            print(f"combination of generating rows: {terms}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------


def _reference_point(doc: OpsDocument, seed: int) -> tuple:
    rng = random.Random(seed)
    return tuple(
        Fraction(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 5)) for _ in doc.params
    )


def _ordering_text(o: OrderingSpec) -> str:
    return o.name if o.name != "custom" else "custom:" + ",".join(k.token() for k in o.keys)


def _relation_leads(sp: ShufflePresentation, ordering: OrderingSpec) -> list:
    red = interreduce(list(sp.relations), ordering)
    return sorted(to_str(leading_term(g, ordering)[0]) for g in red)


def _probe_orderings(rep: NSReport, sp: ShufflePresentation) -> list:
    out = []
    for cond in (rep.m1, rep.m2):
        run = cond.chosen or (cond.runs[0] if cond.runs else None)
        if run is not None:
            out.append(run.ordering)
    if not out:
        out.append(make_ordering("rgpl", sp.signature.names))
    return out


def _scan_one(task: dict) -> dict:
    doc = parse_document(task["text"])
    point = tuple(Fraction(v) for v in task["point"])
    row = {"index": task["index"], "point": [str(v) for v in point]}
    try:
        p = doc.presentation(point)
    except PresentationError as exc:
        row.update(status="rejected", reason=str(exc))
        return row
    sp = present_shuffle(p)
    rep = verdict(sp, task["N"], dual_dims=task["dual"], conjecture_mode=task["conjecture"])
    leads = {}
    for text, order in task["probes"]:
        o = make_ordering(text, order)
        key = o.describe()
        try:
            leads[key] = _relation_leads(sp, o)
        except ShuffleOpsError:
            leads[key] = None
    row.update(
        status="ok",
        verdict=rep.verdict,
        m1=rep.m1.status,
        m2=rep.m2.status,
        relation_leading_terms=leads,
        boundary=leads != task["reference_leads"],
    )
    return row


def cmd_scan(args) -> int:
    text = read_source(args.file)
    doc = parse_document(text)
    if not doc.is_family:
        raise PresentationError("scan needs a family with parameters")
    points = [_fractions(s) for s in args.sample] if args.sample else doc.sample_points()
    if not points:
        raise PresentationError("family declares no sample points; pass --sample")
    for pt in points:
        if len(pt) != len(doc.params):
            raise PresentationError(f"sample {[str(v) for v in pt]} does not match parameters {list(doc.params)}")
    dual = _dual_dims(doc, args.dual_dims)
    N = args.max_arity

    ref = _reference_point(doc, args.seed)
    ref_p = doc.presentation(ref)
    ref_sp = present_shuffle(ref_p)
    ref_rep = verdict(ref_sp, N, dual_dims=dual, conjecture_mode=args.conjecture_mode)
    probes = _probe_orderings(ref_rep, ref_sp)
    reference_leads = {o.describe(): _relation_leads(ref_sp, o) for o in probes}

    tasks = [
        {
            "index": i,
            "text": text,
            "point": [str(v) for v in pt],
            "N": N,
            "dual": dual,
            "conjecture": args.conjecture_mode,
            "probes": [(_ordering_text(o), o.generator_order) for o in probes],
            "reference_leads": reference_leads,
        }
        for i, pt in enumerate(points)
    ]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_one, tasks))
    else:
        rows = [_scan_one(t) for t in tasks]
    rows.sort(key=lambda r: r["index"])

    report = {
        "schema": SCHEMA,
        "family": doc.name,
        "parameters": list(doc.params),
        "arity_bound": N,
        "reference": {
            "point": [str(v) for v in ref],
            "seed": args.seed,
            "verdict": ref_rep.verdict,
            "relation_leading_terms": reference_leads,
        },
        "rows": rows,
    }
    if not _emit_json(report, args.json):
        print(f"family: {doc.name or args.file}; parameters: {', '.join(doc.params)}; arity bound {N}")
        print(f"reference point ({', '.join(report['reference']['point'])}): {ref_rep.verdict}")
        header = ("#", "point", "verdict", "M1", "M2", "boundary")
        table = [header]
        for r in rows:
            pt = "(" + ", ".join(r["point"]) + ")"
            if r["status"] == "rejected":
                table.append((str(r["index"]), pt, "rejected", "-", "-", "-"))
            else:
                table.append((str(r["index"]), pt, r["verdict"], r["m1"], r["m2"],
                              "yes" if r["boundary"] else "no"))
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        for row in table:
            print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        for r in rows:
            if r["status"] == "rejected":
                print(f"point {r['index']} rejected: {r['reason']}")
    return EXIT_INPUT if any(r["status"] == "rejected" for r in rows) else EXIT_OK


def cmd_list(args) -> int:
    for name in bundled_names():
        doc = parse_document(_bundled_text(name))
        extra = f" (family in {', '.join(doc.params)})" if doc.params else ""
        print(f"{name}{extra}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shuffleops",
        description="Gröbner bases for shuffle operads and the Nielsen-Schreier criterion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order_default: Optional[str] = "rgpl", arity_default: Optional[int] = 4):
        p.add_argument("file", help="path to an .ops file or a bundled name")
        p.add_argument("--max-arity", type=_positive, default=arity_default)
        p.add_argument("--order", default=order_default,
                       help="gpl, rgpl, permfirst-rev-gpl or custom:KEY,KEY,...")
        p.add_argument("--gens", help='generator order, highest first, e.g. "b>c"')
        p.add_argument("--sample", help="parameter values for a family, e.g. 1,-1/2")
        p.add_argument("--json", metavar="PATH", help="write a JSON report ('-' for stdout)")

    def guards(p):
        p.add_argument("--max-elements", type=_positive, help="stop completion at this many elements")
        p.add_argument("--time-limit", type=float, help="stop completion after this many seconds")

    p = sub.add_parser("gb", help="reduced Gröbner basis up to the arity bound")
    common(p)
    guards(p)
    p.add_argument("--trace", metavar="PATH", help="JSON-lines completion trace")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("dims", help="dimensions of the operad from normal monomials")
    common(p)
    guards(p)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    p.add_argument("--guard", type=_positive, default=DEFAULT_GUARD, help="oracle arity guard")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("check-ns", help="conditions M1 and M2 and the verdict")
    common(p, order_default=None)
    p.add_argument("--conjecture-mode", action="store_true", help="decide from M1 alone")
    p.add_argument("--exhaustive", action="store_true",
                   help="evaluate every ordering of the family, not only up to the first certified one")
    p.add_argument("--dual-dims", help="Koszul dual dimensions from arity 1, e.g. 1,2,3,4")
    p.add_argument("--trace", metavar="PATH", help="JSON-lines completion trace of every run")
    p.set_defaults(func=cmd_check_ns)

    p = sub.add_parser("reduce", help="normal form of a shuffle polynomial")
    common(p, arity_default=None)
    guards(p)
    p.add_argument("polynomial", help='e.g. "b(b(b(1,2),3),4)"')
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle", help="brute-force symmetric-operad computations")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    for name, func in (("dims", cmd_oracle_dims), ("member", cmd_oracle_member)):
        q = osub.add_parser(name)
        q.add_argument("file")
        if name == "member":
            q.add_argument("identity", help='e.g. "(x*y)*z + (y*x)*z = 0"')
        q.add_argument("--max-arity", type=_positive, default=4)
        q.add_argument("--guard", type=_positive, default=DEFAULT_GUARD)
        q.add_argument("--sample")
        q.add_argument("--json", metavar="PATH")
        q.set_defaults(func=func)

    p = sub.add_parser("scan", help="check-ns at every sample point of a family")
    p.add_argument("file")
    p.add_argument("--max-arity", type=_positive, default=4)
    p.add_argument("--sample", action="append", help="extra point (repeatable); replaces the file's samples")
    p.add_argument("--dual-dims")
    p.add_argument("--conjecture-mode", action="store_true")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0, help="seed of the generic reference point")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("list", help="bundled presentations")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ShuffleOpsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
