"""Command-line front end.

Exit codes: 0 success, 1 invariant or audit failure, 2 invalid input,
3 search budget or size cap exceeded.

Usage:
    lelekfan classify --r 1/2 --rho 3
    lelekfan orbit --r 1/2 --rho 3 --bound 32 --lo 1/10 --hi 1 -o orbit.csv
    lelekfan approx --r 1/2 --rho 3 --depth 6 -o outdir/
    lelekfan plot --r 1/2 --rho 3 --depth 6 --i 1 --j 2 -o fan.svg
    lelekfan endpoint-seq --r 1/2 --rho 3 --x 1/2 --eps 1/4
    lelekfan audit --r 1/2 --rho 3 --depth 10 --samples 100 --n 4
    lelekfan verify --r 1/2 --rho 3
"""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import formats
from .classify import classify as classify_pair
from .classify import lelek_density_audit, structure_report
from .errors import InvalidInput, LelekfanError
from .exactnum import SlopePair, format_rational, parse_rational
from .itinerary import build_sup_itinerary, prefix_products
from .mahavier import PointCloud, finite_mahavier, project_labeled, sample_points
from .numeric import explore_branches
from .orbits import DEFAULT_MAX_K, enumerate_orbit, max_gap, parse_classes
from .verify import VerifyConfig, run_checks

DEFAULT_DEPTH = 8
DEFAULT_BOUND = 32
DEFAULT_EPS = "1/100"
DEFAULT_SAMPLES = 64


def _rational(ctx: click.Context, param: click.Parameter, value: str | None) -> Fraction | None:
    if value is None:
        return None
    try:
        return parse_rational(value)
    except InvalidInput as exc:
        raise click.BadParameter(str(exc)) from None


def _pair_options(fn):
    fn = click.option("--rho", required=True, callback=_rational, help="Second slope, e.g. 3.")(fn)
    fn = click.option("--r", "r", required=True, callback=_rational, help="First slope, e.g. 1/2.")(fn)
    return fn


output_option = click.option(
    "-o", "--output", type=click.Path(), default=None, help="Output file (stdout if omitted)."
)


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text)


def _guard(fn):
    """Map library exceptions to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LelekfanError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


@click.group()
def cli() -> None:
    """Fans from Mahavier products of two origin segments of slopes r and rho."""


@cli.command()
@_pair_options
@click.option("--depth", type=int, default=None, help="Also attach finite-depth structure witnesses.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
@output_option
@_guard
def classify(r, rho, depth, fmt, output):
    """Decide the fan kind of (r, rho) exactly."""
    pair = SlopePair(r, rho)
    if depth is not None:
        report = structure_report(pair, depth)
        data = report.to_dict()
        base = report.classification
    else:
        base = classify_pair(pair)
        data = base.to_dict()
    if fmt == "json":
        _emit(formats.dumps_json(data), output)
        return
    w = base.witnesses
    rows = [
        ("pair", str(pair)),
        ("normalized", str(base.normalized_pair)),
        ("kind", base.kind.value),
        ("case", base.citations[0]),
        ("dependence", "-" if base.dependence is None else f"r^{base.dependence.k} = rho^{base.dependence.l}"),
    ]
    if w is not None:
        rows += [
            ("top", w.top or "-"),
            (f"branches@{w.reference_depth}", str(w.branch_count)),
            ("max branch param", format_rational(w.max_branch_param)),
        ]
    width = max(len(k) for k, _ in rows)
    _emit("".join(f"{k:<{width}}  {v}\n" for k, v in rows), output)


@cli.command()
@_pair_options
@click.option("--bound", type=int, default=DEFAULT_BOUND, show_default=True)
@click.option("--lo", default="1/10", callback=_rational, show_default=True)
@click.option("--hi", default="1", callback=_rational, show_default=True)
@click.option("--classes", default="B1", show_default=True, help="Comma-separated subset of B1,B2,B3,B4.")
@output_option
@_guard
def orbit(r, rho, bound, lo, hi, classes, output):
    """Enumerate r^k rho^l in [lo, hi] (CSV) and report the largest gap."""
    window = enumerate_orbit(SlopePair(r, rho), parse_classes(classes), bound, (lo, hi))
    _emit(formats.orbit_window_csv(window), output)
    if window.entries:
        g = max_gap(window)
        click.echo(f"entries={len(window.entries)} max_gap={format_rational(g)} ({float(g):.6g})", err=True)
    else:
        click.echo("entries=0", err=True)


@cli.command()
@_pair_options
@click.option("--depth", type=int, default=DEFAULT_DEPTH, show_default=True)
@click.option("--per-branch", type=int, default=8, show_default=True, help="Sample points per branch.")
@click.option("-o", "--output", type=click.Path(file_okay=False), default=None,
              help="Directory for branchset.json and points.csv (JSON to stdout if omitted).")
@_guard
def approx(r, rho, depth, per_branch, output):
    """Depth-m Mahavier product: branch set JSON plus sampled point cloud CSV."""
    bs = finite_mahavier(SlopePair(r, rho), depth)
    doc = formats.dumps_json(formats.branch_set_dict(bs))
    if output is None:
        click.echo(doc, nl=False)
        return
    out = Path(output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "branchset.json").write_text(doc)
    (out / "points.csv").write_text(formats.point_cloud_csv(PointCloud(tuple(sample_points(bs, per_branch)))))


@cli.command()
@_pair_options
@click.option("--depth", type=int, default=DEFAULT_DEPTH, show_default=True)
@click.option("--i", "i", type=int, default=1, show_default=True)
@click.option("--j", "j", type=int, default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["svg", "csv"]), default="svg")
@output_option
@_guard
def plot(r, rho, depth, i, j, fmt, output):
    """Projection of the depth-m product onto coordinates (i, j)."""
    pair = SlopePair(r, rho)
    segs = project_labeled(finite_mahavier(pair, depth), i, j)
    if fmt == "svg":
        _emit(formats.segments_svg(segs, title=f"pair {pair}, depth {depth}, coords ({i}, {j})"), output)
    else:
        _emit(formats.segments_csv(segs), output)


@cli.command("endpoint-seq")
@_pair_options
@click.option("--x", "x", required=True, callback=_rational)
@click.option("--eps", default=DEFAULT_EPS, callback=_rational, show_default=True)
@click.option("--budget", type=int, default=DEFAULT_MAX_K, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@output_option
@_guard
def endpoint_seq(r, rho, x, eps, budget, fmt, output):
    """Word whose running values x*P_n stay in [0, 1] and reach 1 - eps."""
    it = build_sup_itinerary(SlopePair(r, rho), x, eps, budget)
    vals = [x * p for p in prefix_products(it)]
    if fmt == "json":
        _emit(formats.dumps_json({
            "word": it.word,
            "x": format_rational(x),
            "epsilon": format_rational(eps),
            "max_value": format_rational(max(vals)),
            "values": [format_rational(v) for v in vals],
        }), output)
        return
    header = f"# word={it.word or '(empty)'} max={format_rational(max(vals))}\n"
    _emit(header + formats.prefix_table_csv(it, x), output)


@cli.command()
@_pair_options
@click.option("--depth", type=int, default=DEFAULT_DEPTH, show_default=True)
@click.option("--samples", type=int, default=DEFAULT_SAMPLES, show_default=True)
@click.option("--n", "n", type=int, default=None, help="Agreement depth (default depth - 2).")
@click.option("--eps", default=DEFAULT_EPS, callback=_rational, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=DEFAULT_MAX_K, show_default=True)
@output_option
@_guard
def audit(r, rho, depth, samples, n, eps, seed, budget, output):
    """Endpoint-density audit for a Lelek-fan pair."""
    if n is None:
        n = max(depth - 2, 0)
    rec = lelek_density_audit(SlopePair(r, rho), depth, samples, n, eps, seed, budget)
    _emit(formats.dumps_json(rec.to_dict()), output)
    if not rec.passed:
        sys.exit(1)


@cli.command()
@click.option("--r", "r", default="1/2", callback=_rational, show_default=True)
@click.option("--rho", default="3", callback=_rational, show_default=True)
@click.option("--depth", type=int, default=DEFAULT_DEPTH, show_default=True)
@click.option("--bound", type=int, default=DEFAULT_BOUND, show_default=True)
@click.option("--eps", default=DEFAULT_EPS, callback=_rational, show_default=True)
@click.option("--samples", type=int, default=DEFAULT_SAMPLES, show_default=True)
@_guard
def verify(r, rho, depth, bound, eps, samples):
    """Run the invariant suite; exit 1 if any check fails."""
    results = run_checks(VerifyConfig(SlopePair(r, rho), depth, bound, eps, samples))
    for res in results:
        line = f"{'PASS' if res.passed else 'FAIL'}  {res.name}"
        click.echo(line + (f"  ({res.detail})" if res.detail else ""))
    failed = sum(not res.passed for res in results)
    click.echo(f"{len(results) - failed}/{len(results)} checks passed")
    if failed:
        sys.exit(1)


@cli.command()
@click.option("--r", "r", type=float, required=True)
@click.option("--rho", type=float, required=True)
@click.option("--depth", type=int, default=6, show_default=True)
@output_option
@_guard
def explore(r, rho, depth, output):
    """Float-slope branch geometry.  Never classifies."""
    rows = explore_branches(r, rho, depth)
    _emit(json.dumps({"r": r, "rho": rho, "depth": depth, "classified": False, "branches": rows}, indent=2) + "\n",
          output)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
