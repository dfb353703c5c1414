"""(G, n, F)-independent systems of edge sets and the transformations between
systems, colorings and independent families.

A system assigns to every edge (u, v), u < v, a subset A_{u,v} of [n]. For a
pair (v, S) its cell is

    cap_{u in S, u < v} A_{u,v}  -  cup_{w in S, w > v} A_{v,w}

with the empty intersection read as [n]. The system is independent for a pair
collection when every cell is nonempty.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import bitsets as bs
from .chains import is_complete_hom
from .errors import (
    DomainMismatch,
    EmptyCandidateSet,
    NotComplete,
    NotIndependentFamily,
    NotProper,
    PaletteTooSmall,
    PropertyViolation,
    SizeBudget,
)
from .families import SetFamily, is_r_independent
from .graph import AdjGraph, ColorMap, HomMap, Pair, check_pairs, is_proper, maximal_pairs, pairs_from_hom

Edge = tuple[int, int]


@dataclass(frozen=True)
class EdgeSetSystem:
    n: int
    sets: dict

    def __getitem__(self, edge: Edge) -> int:
        u, v = edge
        return self.sets[(u, v) if u < v else (v, u)]

    def check_domain(self, g: AdjGraph) -> None:
        edges = set(g.edges())
        keys = set(self.sets)
        if keys != edges:
            extra = sorted(keys - edges)[:3]
            missing = sorted(edges - keys)[:3]
            raise DomainMismatch(f"system keys differ from E(G): extra {extra}, missing {missing}")
        universe = bs.full(self.n)
        for e, a in self.sets.items():
            if a & ~universe:
                raise DomainMismatch(f"A_{e} = {bs.elements(a)} is not inside [{self.n}]")


def cell(sys: EdgeSetSystem, v: int, s) -> int:
    acc = bs.full(sys.n)
    for u in s:
        if u < v:
            acc &= sys.sets[(u, v)]
    for w in s:
        if w > v:
            acc &= ~sys.sets[(v, w)]
    return acc


def find_violation(g: AdjGraph, pairs: Sequence[Pair], sys: EdgeSetSystem) -> Pair | None:
    """First pair whose cell is empty, or None."""
    sys.check_domain(g)
    check_pairs(g, pairs)
    for v, s in pairs:
        if not cell(sys, v, s):
            return (v, s)
    return None


def is_independent_system(g: AdjGraph, pairs: Sequence[Pair], sys: EdgeSetSystem) -> bool:
    return find_violation(g, pairs, sys) is None


def is_rich(g: AdjGraph, pairs: Sequence[Pair], r: int) -> bool:
    """Every r neighbours of any v (all of them if deg v < r) lie in one S of a pair (v, S)."""
    if r < 1:
        return True
    by_v: dict[int, list[frozenset]] = {}
    for v, s in maximal_pairs(pairs):
        by_v.setdefault(v, []).append(s)
    for v in range(g.n):
        nbrs = sorted(g.adj[v])
        k = min(r, len(nbrs))
        if k == 0:
            continue
        sets = by_v.get(v, [])
        for combo in combinations(nbrs, k):
            if not any(s.issuperset(combo) for s in sets):
                return False
    return True


# -- systems and colorings --------------------------------------------------


def coloring_from_system(phi: HomMap, sys: EdgeSetSystem) -> ColorMap:
    """Colour x by the least element of the cell of (phi(x), phi(N(x)))."""
    sys.check_domain(phi.target)
    colors = []
    for x in range(phi.source.n):
        c = cell(sys, phi.table[x], phi.neighbor_image(x))
        if not c:
            raise EmptyCandidateSet(f"empty cell at source vertex {x}; system is not independent")
        colors.append(bs.lowest(c))
    out = ColorMap(tuple(colors), sys.n)
    if not is_proper(phi.source, out):
        raise NotComplete("min-rule coloring is improper, so the homomorphism is not complete")
    return out


def system_from_coloring(phi: HomMap, g: ColorMap) -> EdgeSetSystem:
    """A_{u,v} = {g(x) : phi(x) = v, u in phi(N(x))}."""
    if not is_complete_hom(phi):
        raise NotComplete("homomorphism is not complete")
    if not is_proper(phi.source, g):
        raise NotProper("coloring of the source graph is not proper")
    target = phi.target
    sets = {e: 0 for e in target.edges()}
    for x in range(phi.source.n):
        v = phi.table[x]
        cbit = bs.bit(g.colors[x])
        for u in phi.neighbor_image(x):
            if u < v:
                sets[(u, v)] |= cbit
    return EdgeSetSystem(g.palette, sets)


# -- independent families to systems ----------------------------------------


def order_by_color(c: ColorMap) -> list[int]:
    """perm[v] = new id of v when vertices are sorted by (colour, old id)."""
    ranked = sorted(range(len(c.colors)), key=lambda v: (c.colors[v], v))
    perm = [0] * len(ranked)
    for new, old in enumerate(ranked):
        perm[old] = new
    return perm


def system_from_family(g: AdjGraph, c: ColorMap, family: SetFamily, r: int, check: bool = True):
    """System on G relabelled by colour, built from an r-independent family.

    Returns (system, perm); the system lives on ``g.relabel(perm)``.
    """
    k = len(family.members)
    if c.palette > 1 << k:
        raise PaletteTooSmall(f"{c.palette} colours need more than {k} family members")
    if check and not is_r_independent(family, r):
        raise NotIndependentFamily(f"family is not {r}-independent")
    if not is_proper(g, c):
        raise NotProper("coloring of G is not proper")
    ys = bs.canonical_subsets(k)  # Y_i as masks over member positions 1..k
    perm = order_by_color(c)
    sets = {}
    for u, v in g.edges():
        cu, cv = c.colors[u], c.colors[v]
        nu, nv = perm[u], perm[v]
        if nu > nv:
            nu, nv, cu, cv = nv, nu, cv, cu
        diff = ys[cv - 1] & ~ys[cu - 1]
        sets[(nu, nv)] = family.members[bs.lowest(diff) - 1]
    return EdgeSetSystem(family.n, sets), perm


# -- exact search -------------------------------------------------------------


def search_system(g: AdjGraph, pairs: Sequence[Pair], n: int, node_budget: int = 10**7) -> EdgeSetSystem | None:
    """Exact existence test for a (G, n, F)-independent system.

    A system exists iff each pair (v, S) can be given a witness xi in [n] so
    that, for every edge u < v, the witnesses of v's pairs containing u never
    equal the witnesses of u's pairs containing v. (Given witnesses, take
    A_{u,v} to be the first set; given a system, take any cell element.)
    Backtracking over the maximal pairs with colour-symmetry breaking.
    """
    check_pairs(g, pairs)
    if n < 1:
        return None if pairs else EdgeSetSystem(0, {e: 0 for e in g.edges()})
    vars_ = [(v, tuple(sorted(s))) for v, s in maximal_pairs(pairs) if s]
    counts: dict[Edge, Counter] = {}
    xi = [0] * len(vars_)
    nodes = 0

    def dfs(i: int, top: int) -> bool:
        nonlocal nodes
        if i == len(vars_):
            return True
        nodes += 1
        if nodes > node_budget:
            raise SizeBudget(f"system search exceeded {node_budget} nodes")
        v, s = vars_[i]
        for val in range(1, min(n, top + 1) + 1):
            if any(counts.get((u, v), Counter())[val] for u in s):
                continue
            for u in s:
                counts.setdefault((v, u), Counter())[val] += 1
            xi[i] = val
            if dfs(i + 1, max(top, val)):
                return True
            for u in s:
                counts[(v, u)][val] -= 1
        return False

    if not dfs(0, 0):
        return None
    sets = {e: 0 for e in g.edges()}
    for (v, s), val in zip(vars_, xi):
        for u in s:
            if u < v:
                sets[(u, v)] |= bs.bit(val)
    out = EdgeSetSystem(n, sets)
    assert is_independent_system(g, pairs, out)
    return out


# -- type partition and the lower-bound recursion ----------------------------


def type_masks(n: int) -> list[int]:
    """Nonempty A in [n] with |A| < n/2, or |A| = n/2 and 1 in A, canonical order.

    Exactly one of A and [n] - A is listed when |A| = n/2, so there are at most
    2^(n-1) - 1 types.
    """
    out = []
    for a in bs.canonical_subsets(n):
        k = bs.popcount(a)
        if k == 0:
            continue
        if 2 * k < n or (2 * k == n and a & 1):
            out.append(a)
    return out


@dataclass
class TypePart:
    type_mask: int
    vertices: list[int]
    graph: AdjGraph
    pairs: list[Pair]
    system: EdgeSetSystem


@dataclass
class TypePartition:
    n: int
    parts: list[TypePart]
    independent: list[int]

    @property
    def n_types(self) -> int:
        return len(self.parts)


def _compress(a: int, onto: int) -> int:
    """Renumber the elements of a & onto as positions within onto."""
    out = 0
    for pos, e in enumerate(bs.elements(onto), start=1):
        if a & bs.bit(e):
            out |= bs.bit(pos)
    return out


def partition_by_type(g: AdjGraph, pairs: Sequence[Pair], sys: EdgeSetSystem, r: int) -> TypePartition:
    n = sys.n
    sys.check_domain(g)
    universe = bs.full(n)
    types = type_masks(n)
    type_index = {a: i for i, a in enumerate(types)}

    # candidate types per vertex, with the smallest witnessing neighbour
    witness: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for (u, v), a in sorted(sys.sets.items()):
        if a in type_index:
            w = witness[v]
            w[a] = min(w.get(a, u), u)
        b = universe & ~a
        if b in type_index:
            w = witness[u]
            w[b] = min(w.get(b, v), v)

    chosen: list[int | None] = [None] * g.n
    u_of: list[int | None] = [None] * g.n
    for v in range(g.n):
        if witness[v]:
            a = min(witness[v], key=type_index.__getitem__)
            chosen[v] = a
            u_of[v] = witness[v][a]

    independent = [v for v in range(g.n) if chosen[v] is None]
    if any(g.has_edge(x, y) for x, y in combinations(independent, 2)):
        raise PropertyViolation("property 1: untyped vertices are not independent")

    n_sub = n // 2
    parts = []
    for a in types:
        verts = [v for v in range(g.n) if chosen[v] == a]
        if not verts:
            continue
        sub, index = g.induced(verts)
        vset = set(verts)
        sub_pairs = set()
        for v, s in pairs:
            if v in vset and u_of[v] in s:
                sub_pairs.add((index[v], frozenset(index[x] for x in s if x in vset)))
        sub_pairs = sorted(sub_pairs, key=lambda p: (p[0], sorted(p[1])))
        sub_sets = {}
        for x, y in sub.edges():
            sub_sets[(x, y)] = _compress(sys.sets[(verts[x], verts[y])], a)
        sub_sys = EdgeSetSystem(n_sub, sub_sets)
        if not is_independent_system(sub, sub_pairs, sub_sys):
            raise PropertyViolation(f"property 2: part of type {bs.elements(a)} has no independent system")
        if r - 1 >= 1 and not is_rich(sub, sub_pairs, r - 1):
            raise PropertyViolation(f"property 3: part of type {bs.elements(a)} loses {r - 1}-richness")
        parts.append(TypePart(a, verts, sub, sub_pairs, sub_sys))
    if len(parts) > max(0, (1 << (n - 1)) - 1):
        raise PropertyViolation("more types than 2^(n-1) - 1")
    return TypePartition(n, parts, independent)


def pair_coloring_r2(g: AdjGraph, sys: EdgeSetSystem) -> ColorMap:
    """Colour v by the set {A_{u,v} : u < v neighbour}."""
    keys = [frozenset(sys.sets[(u, v)] for u in g.adj[v] if u < v) for v in range(g.n)]
    out = ColorMap.dense(keys)
    if not is_proper(g, out):
        raise PropertyViolation("set-of-sets colouring is improper; the system lacks pair richness")
    return out


def lower_bound_exponent(n: float, r: int) -> float:
    """log2 of 2^(2n + 2^(n / 2^(r-2)))."""
    return 2 * n + 2 ** (n / 2 ** (r - 2))


def lower_bound_coloring(g: AdjGraph, pairs: Sequence[Pair], sys: EdgeSetSystem, n: int, r: int) -> ColorMap:
    """Colour G from an independent system whose pairs are r-rich.

    r below 2 is run at 2, which requires the pairs to be 2-rich.
    """
    if n != sys.n:
        raise ValueError(f"n = {n} differs from the system palette {sys.n}")
    r_run = max(r, 2)
    if not is_independent_system(g, pairs, sys):
        raise PropertyViolation("input system is not independent")
    if not is_rich(g, pairs, r_run):
        raise PropertyViolation(f"pairs are not {r_run}-rich")
    out = _lower(g, pairs, sys, r_run)
    if not is_proper(g, out):
        raise PropertyViolation("recursive colouring is improper")
    used = max(out.used, 1)
    for rr in {r, r_run}:
        if rr >= 1 and math.log2(used) > lower_bound_exponent(n, rr) + 1e-9:
            raise PropertyViolation(f"{used} colours exceed the bound at r = {rr}")
    return out


def _lower(g: AdjGraph, pairs, sys: EdgeSetSystem, r: int) -> ColorMap:
    if r <= 2:
        return pair_coloring_r2(g, sys)
    part = partition_by_type(g, pairs, sys, r)
    keys: list = [None] * g.n
    for v in part.independent:
        keys[v] = (0,)
    for i, p in enumerate(part.parts, start=1):
        sub = _lower(p.graph, p.pairs, p.system, r - 1)
        if math.log2(max(sub.used, 1)) > lower_bound_exponent(p.system.n, r - 1) + 1e-9:
            raise PropertyViolation(f"part {i} uses {sub.used} colours, above its bound")
        for x, v in enumerate(p.vertices):
            keys[v] = (i, sub.colors[x])
    return ColorMap.dense(keys)

