"""CSV, JSON and SVG renderings.  Output is canonical: same input, same bytes."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Sequence
from fractions import Fraction
from xml.sax.saxutils import escape

from .exactnum import format_rational
from .itinerary import Itinerary, prefix_products
from .mahavier import BranchSet, PointCloud, Segment
from .orbits import OrbitWindow


def _f(q: Fraction) -> str:
    return repr(float(q))


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def dumps_json(obj: object) -> str:
    return json.dumps(obj, indent=2) + "\n"


def orbit_window_csv(window: OrbitWindow) -> str:
    rows = [
        (e.exponents.k, e.exponents.l, e.klass.value, e.value.numerator, e.value.denominator, _f(e.value))
        for e in window.entries
    ]
    return _csv(("k", "l", "klass", "value_num", "value_den", "value_float"), rows)


def point_cloud_csv(cloud: PointCloud) -> str:
    dim = cloud.dim
    header = [f"x{i}" for i in range(1, dim + 1)] + [f"x{i}_float" for i in range(1, dim + 1)]
    rows = [[format_rational(c) for c in p] + [_f(c) for c in p] for p in cloud.points]
    return _csv(header, rows)


def branch_set_dict(bs: BranchSet) -> dict:
    return {
        "pair": bs.pair.as_dict(),
        "depth": bs.depth,
        "branches": [
            {
                "word": b.word,
                "param_max": format_rational(b.param_max),
                "endpoint": [format_rational(c) for c in b.endpoint],
            }
            for b in bs.branches
        ],
    }


def segments_csv(segments: Sequence[tuple[Segment, Sequence[str]]]) -> str:
    rows = []
    for ((x0, y0), (x1, y1)), words in segments:
        rows.append(
            [format_rational(x0), format_rational(y0), format_rational(x1), format_rational(y1),
             _f(x1), _f(y1), " ".join(words)]
        )
    return _csv(("x0", "y0", "x1", "y1", "x1_float", "y1_float", "words"), rows)


def segments_svg(
    segments: Sequence[tuple[Segment, Sequence[str]]], title: str = "", size: int = 512
) -> str:
    """Unit-square drawing, origin at the bottom-left, one polyline per segment."""
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        'viewBox="0 0 1 1">',
    ]
    if title:
        lines.append(f"  <title>{escape(title)}</title>")
    lines.append('  <rect x="0" y="0" width="1" height="1" fill="white" stroke="#999" stroke-width="0.003"/>')
    lines.append('  <g fill="none" stroke="#1f4e79" stroke-width="0.002" transform="matrix(1 0 0 -1 0 1)">')
    for ((x0, y0), (x1, y1)), words in segments:
        pts = f"{float(x0):.6f},{float(y0):.6f} {float(x1):.6f},{float(y1):.6f}"
        lines.append(f'    <polyline points="{pts}"><title>{escape(" ".join(words))}</title></polyline>')
    lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def prefix_table_csv(it: Itinerary, x: Fraction) -> str:
    """Running values ``x * P_n`` for every prefix of the word."""
    products = prefix_products(it)
    symbols = ["", *it.word]
    rows = [
        (n, s, format_rational(p), format_rational(x * p), _f(x * p))
        for n, (s, p) in enumerate(zip(symbols, products))
    ]
    return _csv(("n", "symbol", "prefix_product", "value", "value_float"), rows)
