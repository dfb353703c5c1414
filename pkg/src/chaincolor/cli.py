"""Command-line entry point: ``chaincolor <group> <command> [options]``.

Usage errors exit with status 2 (argparse). Domain errors print the error
class name and message on stderr and exit with status 1.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import io
from .bounds import bound_table
from .chains import GraphFamilySpec, build_graph, phi_drop_hom
from .coloring import (
    chromatic_exact,
    color_U_recursive,
    color_W_recursive,
    greedy_coloring,
    is_local_coloring,
)
from .compression import Code, decode, encode, make_scheme, simulate
from .errors import ChainColorError, FamilyUnavailable, NotIndependentFamily, NotProper, PropertyViolation
from .families import is_r_independent, search_family
from .graph import is_proper
from .systems import (
    find_violation,
    lower_bound_coloring,
    system_from_coloring,
    system_from_family,
)

DEFAULT_SEED = 20240101


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _spec(args) -> GraphFamilySpec:
    fam = args.family
    if fam is None or args.m is None:
        raise SystemExit("--family and --m are required")
    if fam == "U":
        return GraphFamilySpec.U(args.m, args.R, args.delta)
    if fam == "W":
        return GraphFamilySpec.W(args.m, args.r, args.sigma, args.delta)
    if fam == "Y":
        return GraphFamilySpec.Y(args.m, args.delta)
    return GraphFamilySpec.Z(args.m, args.R, args.delta)


def _add_family_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--family", choices=["U", "W", "Y", "Z"], required=required, help="graph family")
    p.add_argument("--m", type=int, help="universe size")
    p.add_argument("--R", type=int, default=1, help="size cap (U, Z)")
    p.add_argument("--delta", type=int, default=1, help="chain length")
    p.add_argument("--r", type=int, default=2, help="growth factor (W)")
    p.add_argument("--sigma", type=int, default=0, help="size offset (W)")


def _graph_from(args):
    if getattr(args, "graph", None):
        return io.read_graph(Path(args.graph), args.m)
    if not args.family or args.m is None:
        raise SystemExit("either --graph or --family with --m is required")
    return build_graph(_spec(args))


# -- graph ---------------------------------------------------------------------


def cmd_graph_gen(args) -> int:
    g = build_graph(_spec(args))
    if args.out:
        io.write_graph(g, Path(args.out))
        print(f"wrote {g.n} vertices, {g.n_edges} edges to {args.out}")
    else:
        sys.stdout.write(io.dimacs_text(g))
    return 0


def cmd_graph_color(args) -> int:
    if args.method == "recursive":
        if args.family not in ("U", "W") or args.graph:
            raise SystemExit("--method recursive needs --family U or W")
        if args.family == "U":
            col = color_U_recursive(args.m, args.R, args.delta)
        else:
            col = color_W_recursive(args.m, args.sigma, args.delta, args.r)
    else:
        g = _graph_from(args)
        col = greedy_coloring(g) if args.method == "greedy" else chromatic_exact(g, args.vertex_cap)[1]
    _emit(io.colormap_text(col), args.out)
    return 0


def cmd_graph_verify(args) -> int:
    g = _graph_from(args)
    col = io.parse_colormap(Path(args.colors).read_text())
    if not is_proper(g, col):
        raise NotProper("colouring is not proper")
    if args.local_R is not None:
        if not is_local_coloring(g, col, args.local_R, args.local_delta):
            raise NotProper(f"colouring is not ({args.local_R}, {args.local_delta})-local")
    print(f"proper: {col.used} colours on {g.n} vertices")
    return 0


def cmd_graph_chromatic(args) -> int:
    g = _graph_from(args)
    k, _ = chromatic_exact(g, args.vertex_cap)
    print(k)
    return 0


# -- family --------------------------------------------------------------------


def cmd_family_search(args) -> int:
    fam = search_family(args.n, args.k, args.size, seed=args.seed, retry_budget=args.budget)
    if fam is None:
        raise FamilyUnavailable(f"no {args.k}-independent family of {args.size} sets on [{args.n}] found")
    _emit(io.family_text(fam), args.out)
    return 0


def cmd_family_verify(args) -> int:
    fam = io.parse_family(Path(args.file).read_text())
    if not is_r_independent(fam, args.k):
        raise NotIndependentFamily(f"family is not {args.k}-independent")
    print(f"{args.k}-independent: {len(fam)} sets on [{fam.n}]")
    return 0


# -- system --------------------------------------------------------------------


def cmd_system_verify(args) -> int:
    g = _graph_from(args)
    pairs = io.parse_pairs(Path(args.pairs).read_text())
    sys_ = io.parse_system(Path(args.system).read_text())
    sys_.check_domain(g)
    bad = find_violation(g, pairs, sys_)
    if bad is not None:
        v, s = bad
        raise PropertyViolation(f"empty cell at ({v + 1}, {sorted(u + 1 for u in s)})")
    print(f"independent: {len(pairs)} pairs, n={sys_.n}")
    return 0


def cmd_system_from_coloring(args) -> int:
    spec = _spec(args)
    phi = phi_drop_hom(spec)
    col = io.parse_colormap(Path(args.colors).read_text())
    _emit(io.system_text(system_from_coloring(phi, col)), args.out)
    return 0


def cmd_system_from_family(args) -> int:
    g = _graph_from(args)
    col = io.parse_colormap(Path(args.colors).read_text())
    fam = io.parse_family(Path(args.family_file).read_text())
    sys_, perm = system_from_family(g, col, fam, args.k)
    _emit(io.system_text(sys_), args.out)
    if args.perm_out:
        Path(args.perm_out).write_text("".join(f"{v + 1}\t{p + 1}\n" for v, p in enumerate(perm)))
    return 0


def cmd_system_lower_color(args) -> int:
    g = _graph_from(args)
    pairs = io.parse_pairs(Path(args.pairs).read_text())
    sys_ = io.parse_system(Path(args.system).read_text())
    col = lower_bound_coloring(g, pairs, sys_, sys_.n, args.k)
    _emit(io.colormap_text(col), args.out)
    return 0


# -- compress ------------------------------------------------------------------


def cmd_compress_encode(args) -> int:
    P = io.parse_distribution(Path(args.p).read_text())
    code = encode(P, args.msg, args.delta, args.s, make_scheme(args.scheme, P.N, args.s))
    data = code.to_bytes()
    if args.out:
        Path(args.out).write_bytes(data)
    print("bottom" if code.failed else f"s={code.s} r={code.r} color={code.color} bytes={data.hex()}")
    return 0


def cmd_compress_decode(args) -> int:
    Q = io.parse_distribution(Path(args.q).read_text())
    code = Code.from_bytes(Path(args.code).read_bytes())
    scheme = None if code.failed else make_scheme(args.scheme, Q.N, code.s)
    print(decode(Q, code, args.delta, scheme, w=args.w))
    return 0


def cmd_compress_simulate(args) -> int:
    P = io.parse_distribution(Path(args.p).read_text())
    Q = io.parse_distribution(Path(args.q).read_text())
    rep = simulate(P, Q, args.delta, args.s, exact=args.exact, trials=args.trials, seed=args.seed,
                   scheme=make_scheme(args.scheme, P.N, args.s))
    print(f"expected_bits\t{rep.expected_bits:.6f}")
    print(f"bottom_rate\t{rep.bottom_rate:.6f}")
    print(f"max_bits\t{rep.max_bits}")
    print(f"mode\t{'exact' if rep.exact else f'monte-carlo trials={rep.trials} seed={args.seed}'}")
    return 0


# -- bounds --------------------------------------------------------------------


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.6g}"


def cmd_bounds_table(args) -> int:
    rep = bound_table(_spec(args))
    flags = ",".join(rep.flags) or "-"
    if args.format == "tsv":
        params = ",".join(f"{k}={v}" for k, v in rep.params.items())
        print(f"{rep.family}\t{params}\t{_fmt(rep.lower)}\t{_fmt(rep.upper)}\t{flags}")
    else:
        print(f"{'family':<16}{'lower':>14}{'upper':>14}  flags")
        print(f"{rep.family:<16}{_fmt(rep.lower):>14}{_fmt(rep.upper):>14}  {flags}")
        print(f"{'log2':<16}{_fmt(rep.lower_log2):>14}{_fmt(rep.upper_log2):>14}")
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chaincolor", description="Chain graphs, independent systems and colourings.")
    groups = ap.add_subparsers(dest="group", required=True)

    graph = groups.add_parser("graph", help="chain-graph families").add_subparsers(dest="cmd", required=True)
    p = graph.add_parser("gen", help="write a family graph as DIMACS plus a .labels sidecar")
    _add_family_args(p)
    p.add_argument("--out", help="output path (stdout if omitted, without labels)")
    p.set_defaults(func=cmd_graph_gen)

    p = graph.add_parser("color", help="colour a graph")
    _add_family_args(p, required=False)
    p.add_argument("--graph", help="DIMACS file instead of a family")
    p.add_argument("--method", choices=["recursive", "greedy", "exact"], default="greedy")
    p.add_argument("--vertex-cap", type=int, default=200)
    p.add_argument("--out", help="colour TSV path (stdout if omitted)")
    p.set_defaults(func=cmd_graph_color)

    p = graph.add_parser("verify", help="check a colouring is proper (and optionally local)")
    _add_family_args(p, required=False)
    p.add_argument("--graph")
    p.add_argument("--colors", required=True)
    p.add_argument("--local-R", type=int, help="also require an (R, delta)-local colouring")
    p.add_argument("--local-delta", type=int, default=1)
    p.set_defaults(func=cmd_graph_verify)

    p = graph.add_parser("chromatic", help="exact chromatic number")
    _add_family_args(p, required=False)
    p.add_argument("--graph")
    p.add_argument("--vertex-cap", type=int, default=200)
    p.set_defaults(func=cmd_graph_chromatic)

    fam = groups.add_parser("family", help="independent set families").add_subparsers(dest="cmd", required=True)
    p = fam.add_parser("search", help="seeded search for a k-independent family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=10**5, help="random draws before giving up")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family_search)

    p = fam.add_parser("verify", help="check k-independence of a family file")
    p.add_argument("--file", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_family_verify)

    syst = groups.add_parser("system", help="independent edge-set systems").add_subparsers(dest="cmd", required=True)
    p = syst.add_parser("verify", help="check a system against a pairs file")
    _add_family_args(p, required=False)
    p.add_argument("--graph")
    p.add_argument("--pairs", required=True)
    p.add_argument("--system", required=True)
    p.set_defaults(func=cmd_system_verify)

    p = syst.add_parser("from-coloring", help="system on the parent graph from a colouring of a family graph")
    _add_family_args(p)
    p.add_argument("--colors", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_system_from_coloring)

    p = syst.add_parser("from-family", help="system on a coloured graph from a k-independent family")
    _add_family_args(p, required=False)
    p.add_argument("--graph")
    p.add_argument("--colors", required=True)
    p.add_argument("--family-file", required=True)
    p.add_argument("--k", type=int, required=True, help="independence order of the family")
    p.add_argument("--out")
    p.add_argument("--perm-out", help="write the colour-order relabelling here")
    p.set_defaults(func=cmd_system_from_family)

    p = syst.add_parser("lower-color", help="recursive colouring from an independent system")
    _add_family_args(p, required=False)
    p.add_argument("--graph")
    p.add_argument("--pairs", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--k", type=int, required=True, help="richness order r")
    p.add_argument("--out")
    p.set_defaults(func=cmd_system_lower_color)

    comp = groups.add_parser("compress", help="compression with uncertain priors").add_subparsers(dest="cmd", required=True)
    p = comp.add_parser("encode")
    p.add_argument("--p", required=True, help="sender prior TSV")
    p.add_argument("--msg", type=int, required=True, help="message, 1-based")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--s", type=int, required=True, help="chain size cap")
    p.add_argument("--scheme", choices=["recursive", "greedy", "identity"], default="recursive")
    p.add_argument("--out", help="write the code bytes here")
    p.set_defaults(func=cmd_compress_encode)

    p = comp.add_parser("decode")
    p.add_argument("--q", required=True, help="receiver prior TSV")
    p.add_argument("--code", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--scheme", choices=["recursive", "greedy", "identity"], default="recursive")
    p.add_argument("--w", type=int, help="anchor message (smallest valid if omitted)")
    p.set_defaults(func=cmd_compress_decode)

    p = comp.add_parser("simulate")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--scheme", choices=["recursive", "greedy", "identity"], default="recursive")
    p.add_argument("--exact", action="store_true", help="sum over the support instead of sampling")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_compress_simulate)

    bnd = groups.add_parser("bounds", help="closed-form chromatic bounds").add_subparsers(dest="cmd", required=True)
    p = bnd.add_parser("table")
    _add_family_args(p)
    p.add_argument("--format", choices=["text", "tsv"], default="text")
    p.set_defaults(func=cmd_bounds_table)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChainColorError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(f"usage error: {exc.code}", file=sys.stderr)
            return 2
        raise
    except (ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
