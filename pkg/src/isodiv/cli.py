"""Command-line front end: ``div <verb> [options]``.

Usage errors exit with status 2, failed computations or checks with 1.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import algebra, fem, fixtures, io, plotting, search, spectral
from .errors import DivError
from .tiling import Tile, build_div, check_realizable, div_equivalent, from_generators

log = logging.getLogger("isodiv")

TILES = {
    "equilateral": Tile.equilateral,
    "scalene": fixtures.scalene_tile,
    "isosceles": lambda: Tile.from_angles(70.0, 40.0),
}


class CheckFailed(Exception):
    pass


class UsageError(Exception):
    pass


def _tile(spec: str | None) -> Tile:
    if spec is None:
        return Tile.equilateral()
    if spec in TILES:
        return TILES[spec]()
    return io.load_tile(spec)


def _fixture_div(name: str, tile: Tile):
    if name == "path":
        return fixtures.path_div(tile)
    left, right = fixtures.gww_pair(tile)
    if name == "left":
        return left
    if name == "right":
        return right
    raise DivError(f"unknown fixture {name!r} (left, right, path)")


def _parse_words(text: str) -> list:
    return [w.strip() for w in text.replace(";", ",").split(",") if w.strip() != ""]


def _parse_generators(text: str, n: int) -> algebra.PermGenerators:
    parts = {}
    for chunk in text.split(";"):
        if "=" in chunk:
            k, v = chunk.split("=", 1)
            parts[k.strip().lower()] = v.strip()
    return algebra.PermGenerators.from_cycles(n, parts.get("a", ""), parts.get("b", ""),
                                              parts.get("c", ""))


def _load_div(args):
    tile = _tile(getattr(args, "tile", None))
    if getattr(args, "paper_fixtures", None):
        return _fixture_div(args.paper_fixtures, tile)
    if getattr(args, "words", None):
        return build_div(tile, _parse_words(args.words))
    if getattr(args, "generators", None):
        if not args.n:
            raise UsageError("--generators needs --n")
        return from_generators(tile, _parse_generators(args.generators, args.n).as_dict())
    if getattr(args, "div", None):
        return io.load_div(args.div)
    raise UsageError("give one of --div, --words, --generators or --paper-fixtures")


def _describe(div) -> list:
    gens = algebra.generators_of(div)
    lines = [f"copies N = {div.n}, internal sides K = {div.k}"]
    lines += [f"  {lab}: {gens.cycles(lab)}" for lab in "abc"]
    lines.append("copy  a  b  c   (image of each copy, 1-based)")
    for i in range(div.n):
        lines.append(f"{i + 1:>4} " + " ".join(f"{gens[l][i] + 1:>2}" for l in "abc"))
    return lines


# -- verbs ---------------------------------------------------------------------------

def cmd_build(args) -> dict:
    div = _load_div(args)
    bad = check_realizable(div)
    for line in _describe(div):
        print(line)
    x = algebra.auxiliary(div)
    print("auxiliary matrix X:")
    print(io.matrix_csv(x), end="")
    if args.out:
        io.save_div(div, args.out)
    if args.svg:
        plotting.plot_div(div, args.svg)
    if bad:
        raise CheckFailed(f"realizability violations: {bad}")
    return {"n": div.n, "k": div.k}


def cmd_export(args) -> dict:
    if args.format == "tile":
        io.save_tile(_tile(args.tile), args.out)
        return {}
    div = _load_div(args)
    if args.format == "json":
        io.save_div(div, args.out)
    elif args.format == "svg":
        plotting.plot_div(div, args.out)
    elif args.format == "dot":
        io.write_text(algebra.graph_of(div).to_dot(), args.out)
    elif args.format == "csv":
        if args.matrix == "structural":
            q = algebra.structural(div)
            io.write_text(io.matrix_csv(q.entries, io.side_keys(q)), args.out)
        else:
            mat = {"auxiliary": algebra.auxiliary, "adjacency": algebra.adjacency}[args.matrix](div)
            io.write_text(io.matrix_csv(mat), args.out)
    return {}


def _census(args):
    if getattr(args, "census", None):
        data = io.load_json(args.census)
        divs = io.census_divs(data)
        tile = io.tile_from_dict(data["tile"])
        return tile, divs
    tile = _tile(args.tile)
    t0 = time.perf_counter()
    divs, levels = search.enumerate_divs(tile, args.n, jobs=args.jobs, return_levels=True)
    log.info("enumerated %d volumes (per size: %s) in %.1f s", len(divs), levels,
             time.perf_counter() - t0)
    return tile, divs


def _reference_comparison(census) -> list:
    lines = []
    if census.n == 7:
        s = census.summary()
        lines.append(f"classes: {s['classes']} (stated in the literature: "
                     f"{fixtures.STATED_CENSUS_CLASSES})")
        lines.append(f"group orders: {s['group_orders']} (stated: {fixtures.STATED_GROUP_ORDERS})")
    return lines


def cmd_enumerate(args) -> dict:
    tile, divs = _census(args)
    census = search.classify(divs, args.mode)
    print(f"volumes of {args.n} copies: {len(divs)}")
    for line in _summary_lines(census):
        print(line)
    io.save_json(io.census_to_dict(census, tile), args.out)
    return census.summary()


def _summary_lines(census) -> list:
    s = census.summary()
    lines = [f"mode={s['mode']} classes={s['classes']} tree_classes={s['tree_classes']}",
             "group_order,classes"]
    lines += [f"{k},{v}" for k, v in s["group_orders"].items()]
    return lines + _reference_comparison(census)


def cmd_classify(args) -> dict:
    tile, divs = _census(args)
    census = search.classify(divs, args.mode)
    for line in _summary_lines(census):
        print(line)
    if args.out:
        io.save_json(io.census_to_dict(census, tile), args.out)
    return census.summary()


def cmd_pairs(args) -> dict:
    tile, divs = _census(args)
    census = search.classify(divs, "exact")
    pairs = search.find_pairs(census, args.tol)
    print("left,right,equivalent,congruent,graphs_isomorphic,intertwiner_dim,transplantable")
    for p in pairs:
        print(f"{p.left},{p.right},{int(p.equivalent)},{int(p.congruent)},"
              f"{int(p.graphs_isomorphic)},{p.intertwiner_dim},{int(p.transplantable)}")
    out = {"format_version": io.FORMAT_VERSION, "kind": "pairs",
           "cospectral_pairs": len(pairs),
           "transplantable_pairs": sum(p.transplantable for p in pairs),
           "pairs": [p.as_dict() for p in pairs]}
    io.save_json(out, args.out)
    return {"pairs": len(pairs)}


def cmd_spectrum(args) -> dict:
    div = _load_div(args)
    spec = spectral.sym_eigen(algebra.auxiliary(div))
    vals = [f"{v + 0.0:.6g}" if abs(v) > 1e-12 else "0" for v in spec.values]
    print("(" + ", ".join(vals) + ")")
    if args.out:
        io.write_text(io.spectrum_csv(spec.values), args.out)
    return {"spectrum": spec.values.tolist()}


def _pair(args):
    tile = _tile(args.tile)
    if args.paper_fixtures:
        return fixtures.gww_pair(tile)
    if not (args.left and args.right):
        raise UsageError("give --left and --right, or --paper-fixtures")
    return io.load_div(args.left), io.load_div(args.right)


def cmd_transplant(args) -> dict:
    left, right = _pair(args)
    xl, xr = algebra.auxiliary(left), algebra.auxiliary(right)
    report = {
        "cospectral_auxiliary": spectral.cospectral(xl, xr),
        "equivalent": div_equivalent(left, right) is not None,
        "congruent": div_equivalent(left, right, respect_labels=False) is not None,
    }
    basis = spectral.intertwiners(left, right)
    report["intertwiner_dim"] = len(basis)
    m = spectral.transplantation_matrix(left, right)
    ok = report["cospectral_auxiliary"]
    if m is None:
        report["transplantable"] = False
        ok = False
    else:
        report["transplantable"] = True
        report["matrix"] = m.tolist()
        # diagnostic only: intertwiners need not satisfy the projector equation
        report["projector_fixed_point_residual"] = spectral.verify_fixed_point(
            m, algebra.structural(left).entries, algebra.structural(right).entries)
        mesh1, op1 = fem.assemble(left, args.refine)
        mesh2, op2 = fem.assemble(right, args.refine)
        k = min(args.k, op1.n_free, op2.n_free)
        s1, s2 = fem.dirichlet_spectrum(op1, k), fem.dirichlet_spectrum(op2, k)
        rel = float(np.max(np.abs(s1.values - s2.values) / s1.values))
        reps = fem.transplant_eigenvectors(op1, op2, m, s1)
        report.update({
            "refine": args.refine,
            "left_spectrum": s1.values.tolist(),
            "right_spectrum": s2.values.tolist(),
            "max_relative_difference": rel,
            "continuity_mismatch": max(r.continuity for r in reps),
            "boundary_mismatch": max(r.boundary for r in reps),
            "eigen_residual": max(r.residual for r in reps),
        })
        ok = ok and rel <= 1e-8 and report["continuity_mismatch"] <= 1e-8 \
            and report["eigen_residual"] <= 1e-6
        print("index,left,right")
        for t, (a, b) in enumerate(zip(s1.values, s2.values)):
            print(f"{t + 1},{a:.12g},{b:.12g}")
        if args.figures:
            fig_dir = Path(args.figures)
            fig_dir.mkdir(parents=True, exist_ok=True)
            plotting.plot_pair(left, right, fig_dir / "pair.svg")
            plotting.plot_spectra({"left": s1.values, "right": s2.values}, fig_dir / "spectra.svg")
            plotting.plot_eigenfunction(mesh1, s1.vectors[:, 0], fig_dir / "left_mode1.svg")
            moved = fem.transplant(fem.to_vector_form(mesh1, s1.vectors[:, 0]), m, mesh2)
            plotting.plot_eigenfunction(mesh2, fem.from_vector_form(mesh2, moved),
                                        fig_dir / "right_transplanted_mode1.svg")
            io.write_text(io.spectrum_csv(s1.values), fig_dir / "left_spectrum.csv")
            io.write_text(io.spectrum_csv(s2.values), fig_dir / "right_spectrum.csv")
    report["passed"] = bool(ok)
    io.save_json(io.json_ready(report), args.report)
    if not ok:
        raise CheckFailed("transplantation checks failed; see the report")
    return report


def cmd_fem(args) -> dict:
    div = _load_div(args)
    mesh, op = fem.assemble(div, args.refine)
    k = min(args.k, op.n_free)
    spec = fem.dirichlet_spectrum(op, k)
    print("index,eigenvalue,residual")
    for t, (v, r) in enumerate(zip(spec.values, spec.residuals)):
        print(f"{t + 1},{v:.12g},{r:.3g}")
    io.write_text(io.spectrum_csv(spec.values), args.out)
    if args.blocks:
        vf = fem.to_vector_form(mesh, spec.vectors[:, 0])
        header = [f"{i}/{j}/{k_}" for i, j, k_ in mesh.ref.nodes]
        io.write_text(io.matrix_csv(vf.blocks, header), args.blocks)
    if args.svg:
        plotting.plot_eigenfunction(mesh, spec.vectors[:, 0], args.svg,
                                    title=f"lambda_1 = {spec.values[0]:.6g}")
    return {"spectrum": spec.values.tolist()}


# -- parser --------------------------------------------------------------------------

def _add_source(p, fixtures_choices=("left", "right", "path")):
    p.add_argument("--div", help="DiV JSON file")
    p.add_argument("--words", help='comma separated gluing words, e.g. "e,a,ba,cba"')
    p.add_argument("--generators", help='cycle notation, e.g. "a=(1,2);b=(2,3)"')
    p.add_argument("--n", type=int, help="number of copies (with --generators)")
    p.add_argument("--tile", help="tile JSON file or one of: " + ", ".join(TILES))
    p.add_argument("--paper-fixtures", choices=fixtures_choices,
                   help="built-in reference volume")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="div", description=__doc__.splitlines()[0])
    ap.add_argument("--log", help="also write the log to this file")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build", help="glue a volume and print its generator action")
    _add_source(p)
    p.add_argument("--out", help="write the DiV JSON here")
    p.add_argument("--svg", help="draw the volume")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("export", help="write a volume as JSON, SVG, DOT or CSV")
    _add_source(p)
    p.add_argument("--format", choices=("json", "svg", "dot", "csv", "tile"), default="json")
    p.add_argument("--matrix", choices=("auxiliary", "adjacency", "structural"), default="auxiliary")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    for verb, func, help_ in (("enumerate", cmd_enumerate, "enumerate all volumes of n copies"),
                              ("classify", cmd_classify, "classify volumes by coloured graph")):
        p = sub.add_parser(verb, help=help_)
        p.add_argument("--tile", help="tile JSON file or one of: " + ", ".join(TILES))
        p.add_argument("--n", type=int, required=verb == "enumerate")
        if verb == "classify":
            p.add_argument("--census", help="census JSON from `enumerate`")
        p.add_argument("--mode", choices=algebra.ISO_MODES, default="exact")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--out", default="census.json" if verb == "enumerate" else None)
        p.set_defaults(func=func)

    p = sub.add_parser("pairs", help="cospectral pairs of a census")
    p.add_argument("--census")
    p.add_argument("--tile")
    p.add_argument("--n", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default="pairs.json")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("spectrum", help="spectrum of the auxiliary matrix")
    _add_source(p)
    p.add_argument("--out", help="CSV file, one eigenvalue per line")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("transplant", help="transplant eigenvectors between two volumes")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--tile", default="scalene")
    p.add_argument("--paper-fixtures", action="store_true", help="use the built-in 7-copy pair")
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--report", default="report.json")
    p.add_argument("--figures", help="directory for SVG figures and spectrum CSVs")
    p.set_defaults(func=cmd_transplant)

    p = sub.add_parser("fem", help="discrete Dirichlet eigenvalues")
    _add_source(p)
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", default="spectrum.csv")
    p.add_argument("--blocks", help="write the first eigenvector as per-copy CSV blocks")
    p.add_argument("--svg", help="draw the first eigenfunction")
    p.set_defaults(func=cmd_fem)
    return ap


def _need_n(args, ap):
    if args.verb in ("classify", "pairs") and not args.census and not args.n:
        ap.error(f"{args.verb} needs --census or --n")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _need_n(args, ap)
    handlers = [logging.StreamHandler(sys.stderr)]
    if args.log:
        handlers.append(logging.FileHandler(args.log))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", handlers=handlers, force=True)
    t0 = time.perf_counter()
    try:
        args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"div: error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        log.error("%s", exc)
        return 1
    except (DivError, OSError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 1
    log.info("%s finished in %.2f s", args.verb, time.perf_counter() - t0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
