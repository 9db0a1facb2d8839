"""``carpet`` command-line interface.

Exit codes: 0 success, 1 domain error (bad word, level guard, failed
selftest), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from xml.sax.saxutils import escape

from . import __version__
from .addressing import canonical_word, coord_sides, transform_word, word_to_coord
from .balls import ball_at_level, limit_ball
from .errors import CarpetError, InvalidArgument
from .graph import (
    build_cells, build_recursive, degree_histogram, d_sequence, middle_square_perimeter,
    vertex_count_closed_form,
)
from .iso import classify, orbit_agreement, rooted_iso_finite, transform_infinite, unrooted_iso
from .words import FiniteWord, InfiniteWord, dihedral_group, parse_infinite, parse_word, prefix


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def to_dot(g) -> str:
    lines = [f"graph carpet_{g.level} {{", "  node [shape=point];"]
    for i, (x, y) in enumerate(g.coords.tolist()):
        lines.append(f'  {i} [pos="{x},{y}!"];')
    for u, v in g.edges().tolist():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_svg(g, unit: int = 10) -> str:
    side = g.side
    margin = unit
    size = side * unit + 2 * margin

    def px(x, y):
        return margin + x * unit, margin + (side - y) * unit

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{escape(f'carpet graph level {g.level}')}</title>",
        '<g stroke="black" stroke-width="1">',
    ]
    coords = g.coords.tolist()
    for u, v in g.edges().tolist():
        x1, y1 = px(*coords[u])
        x2, y2 = px(*coords[v])
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    out.append('<g fill="black">')
    rad = max(unit / 5, 0.5)
    for x, y in coords:
        cx, cy = px(x, y)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{rad:g}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _stats(n: int) -> dict:
    g = build_cells(n)
    hist = degree_histogram(g)
    return {
        "schema": 1,
        "level": n,
        "vertices": g.n_vertices,
        "vertices_closed_form": vertex_count_closed_form(n),
        "edges": g.n_edges,
        "boundary": None if n < 2 else len(g.boundary_ids),
        "internal_boundary": None if n < 2 else len(g.internal_boundary_ids),
        "degrees": {str(k): v for k, v in sorted(hist.items())},
    }


def cmd_gen(args, out) -> int:
    g = build_cells(args.n)
    if args.format == "json":
        out.write(_dump(g.to_json()) + "\n")
    elif args.format == "dot":
        out.write(to_dot(g))
    else:
        out.write(to_svg(g, args.unit))
    return 0


def cmd_stats(args, out) -> int:
    s = _stats(args.n)
    if args.json:
        out.write(_dump(s) + "\n")
    elif args.csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "vertices", "edges", "boundary", "internal_boundary",
                    "deg2", "deg3", "deg4"])
        d = s["degrees"]
        w.writerow([s["level"], s["vertices"], s["edges"],
                    "" if s["boundary"] is None else s["boundary"],
                    "" if s["internal_boundary"] is None else s["internal_boundary"],
                    d.get("2", 0), d.get("3", 0), d.get("4", 0)])
    else:
        for key in ("level", "vertices", "edges", "boundary", "internal_boundary"):
            val = s[key]
            out.write(f"{key}={'n/a (level too small)' if val is None else val}\n")
        degs = ",".join(f"{k}:{v}" for k, v in s["degrees"].items())
        out.write(f"degrees={{{degs}}}\n")
    return 0


def _finite(text: str, level: int | None) -> FiniteWord:
    w = parse_word(text)
    if isinstance(w, InfiniteWord):
        if level is None:
            raise InvalidArgument(f"{text} is infinite; pass --level to take a prefix")
        return prefix(w, level)
    if level is not None and level != len(w):
        raise InvalidArgument(f"{text} has length {len(w)}, not {level}")
    return w


def cmd_coord(args, out) -> int:
    w = _finite(args.word, args.level)
    x, y = word_to_coord(w)
    out.write(f"({x},{y})\n")
    if args.sides:
        if len(w) < 2:
            raise InvalidArgument("level too small: the boundary starts at level 2")
        sides = sorted(str(s) for s in coord_sides((x, y), len(w)))
        out.write("sides=" + (",".join(sides) or "none") + "\n")
    return 0


def cmd_canon(args, out) -> int:
    out.write(f"{canonical_word(_finite(args.word, args.level))}\n")
    return 0


def cmd_dseq(args, out) -> int:
    w = parse_word(args.word)
    vals = d_sequence(w, args.N)
    if args.json:
        out.write(_dump({"schema": 1, "word": str(w), "from": 2, "values": list(vals)}) + "\n")
    else:
        out.write(" ".join(map(str, vals)) + "\n")
    return 0


def cmd_iso_rooted(args, out) -> int:
    a, b = parse_infinite(args.w1), parse_infinite(args.w2)
    verdict = rooted_iso_finite(a, b, args.N)
    da, db = d_sequence(a, args.N), d_sequence(b, args.N)
    if args.json:
        out.write(_dump({"schema": 1, "rooted_isomorphic": verdict, "depth": args.N,
                         "left": list(da), "right": list(db)}) + "\n")
    else:
        out.write(("rooted-isomorphic" if verdict else "not rooted-isomorphic") + "\n")
        out.write(f"left={' '.join(map(str, da))}\nright={' '.join(map(str, db))}\n")
    return 0


def cmd_iso(args, out) -> int:
    verdict = unrooted_iso(parse_infinite(args.w1), parse_infinite(args.w2))
    out.write((_dump(verdict.to_json()) if args.json else str(verdict)) + "\n")
    return 0


def cmd_classify(args, out) -> int:
    classes = classify([parse_infinite(t) for t in args.words])
    if args.json:
        payload = {"schema": 1, "classes": [
            [{"word": str(m), "witness": s.cycles()} for m, s in zip(c.members, c.witnesses)]
            for c in classes
        ]}
        out.write(_dump(payload) + "\n")
    else:
        for i, c in enumerate(classes, 1):
            out.write(f"class {i}: " + " ".join(str(m) for m in c.members) + "\n")
    return 0


def cmd_ball(args, out) -> int:
    w = parse_infinite(args.word)
    ball = ball_at_level(w, args.r, args.level) if args.level else limit_ball(w, args.r)
    out.write(_dump(ball.to_json()) + "\n")
    return 0


def cmd_orbit(args, out) -> int:
    w = parse_word(args.word)
    for g in dihedral_group():
        img = transform_infinite(g, w) if isinstance(w, InfiniteWord) else transform_word(g, w)
        out.write(f"{g.name}\t{g.cycles()}\t{img}\n")
    return 0


def selftest_checks():
    """Yield ``(name, ok, detail)`` for the built-in consistency checks."""
    for n in range(1, 6):
        ok = build_cells(n).same_as(build_recursive(n))
        yield f"construction-equal n={n}", ok, ""
    prev_inner = None
    for n in range(1, 8):
        g = build_cells(n)
        ok = g.n_vertices == vertex_count_closed_form(n)
        detail = f"{g.n_vertices} vs {vertex_count_closed_form(n)}"
        if n >= 2:
            ok &= len(g.boundary_ids) == 4 * 3 ** (n - 1)
            inner = len(g.internal_boundary_ids)
            if prev_inner is not None:
                ok &= inner == 8 * prev_inner + len(middle_square_perimeter(n))
            prev_inner = inner
            detail += f", boundary={len(g.boundary_ids)}, internal={inner}"
        yield f"counts n={n}", bool(ok), detail
    for n in (2, 3):
        rep = orbit_agreement(n)
        detail = (f"{rep.agree}/{rep.pairs} ordered pairs agree; "
                  f"{len(rep.equal_dseq_no_aut)} with equal sequences but no automorphism")
        yield f"dseq-vs-automorphism n={n}", rep.ok, detail


def cmd_selftest(args, out) -> int:
    failed = 0
    for name, ok, detail in selftest_checks():
        out.write(f"{'PASS' if ok else 'FAIL'} {name}" + (f"  ({detail})" if detail else "") + "\n")
        failed += not ok
    out.write(f"{failed} check(s) failed\n")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="carpet", description="Sierpinski carpet graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("gen", help="emit the level-N graph")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--format", choices=("dot", "json", "svg"), default="json")
    s.add_argument("--unit", type=int, default=10, help="SVG pixels per unit edge")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", help="counts for level N")
    s.add_argument("-n", type=int, required=True)
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_stats)

    for name, func, help_ in (("coord", cmd_coord, "coordinate of a word's vertex"),
                              ("canon", cmd_canon, "least word naming the same vertex")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("word")
        s.add_argument("--level", type=int, help="prefix length for infinite words")
        if name == "coord":
            s.add_argument("--sides", action="store_true", help="also list outer sides")
        s.set_defaults(func=func)

    s = sub.add_parser("dseq", help="distance-to-internal-boundary sequence d_2..d_N")
    s.add_argument("word")
    s.add_argument("-N", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_dseq)

    s = sub.add_parser("iso-rooted", help="rooted isomorphism of the level-N approximations")
    s.add_argument("w1")
    s.add_argument("w2")
    s.add_argument("-N", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_iso_rooted)

    s = sub.add_parser("iso", help="isomorphism of the unrooted limit graphs")
    s.add_argument("w1")
    s.add_argument("w2")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("classify", help="partition words into isomorphism classes")
    s.add_argument("words", nargs="+")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("ball", help="rooted ball (limit graph unless --level)")
    s.add_argument("word")
    s.add_argument("-r", type=int, required=True)
    s.add_argument("--level", type=int)
    s.set_defaults(func=cmd_ball)

    s = sub.add_parser("orbit", help="images of a word under the 8 symmetries")
    s.add_argument("word")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("selftest", help="run built-in consistency checks")
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except CarpetError as exc:
        err.write(f"carpet: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
