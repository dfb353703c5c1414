"""Coloring checks, greedy and exact solvers, the recursive upper-bound
colorings of the U and W families, and conversions between U colorings and
S^1-colorings of doubled-length chains.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import bitsets as bs
from .bounds import iter_log
from .chains import (
    Chain,
    GraphFamilySpec,
    build_graph,
    phi_drop_hom,
    s1_intersects,
    vertex_index,
    vertices,
)
from .errors import (
    ConditionViolated,
    DomainError,
    NotProper,
    PartialColoring,
    SizeBudget,
)
from .families import SetFamily, default_provider
from .graph import AdjGraph, ColorMap, HomMap, is_proper, pairs_from_hom, relabel_pairs
from .systems import coloring_from_system, is_independent_system, system_from_family

Provider = Callable[[int, int], SetFamily]

__all__ = [
    "is_proper",
    "is_local_coloring",
    "greedy_coloring",
    "chromatic_exact",
    "color_U_recursive",
    "color_W_recursive",
    "S1ColorMap",
    "s1_coloring_from_u_coloring",
    "u_coloring_from_s1_coloring",
]


def is_local_coloring(g: AdjGraph, c: ColorMap, R: int, delta: int) -> bool:
    """Proper, and at most R colours inside every closed distance-delta ball."""
    if not is_proper(g, c):
        raise NotProper("local coloring must be proper")
    for v in range(g.n):
        seen = {v}
        frontier = deque([(v, 0)])
        while frontier:
            x, d = frontier.popleft()
            if d == delta:
                continue
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append((y, d + 1))
        if len({c.colors[x] for x in seen}) > R:
            return False
    return True


def greedy_coloring(g: AdjGraph, order: Sequence[int] | None = None) -> ColorMap:
    """First-fit in the given order (default: vertex id)."""
    if order is None:
        order = range(g.n)
    colors = [0] * g.n
    for v in order:
        taken = {colors[u] for u in g.adj[v]}
        c = 1
        while c in taken:
            c += 1
        colors[v] = c
    if g.n and 0 in colors:
        raise PartialColoring("order does not cover every vertex")
    return ColorMap(tuple(colors), max(colors, default=0))


# -- exact chromatic number ---------------------------------------------------


def _greedy_clique(masks: list[int], n: int) -> list[int]:
    best: list[int] = []
    degs = [m.bit_count() for m in masks]
    for start in sorted(range(n), key=lambda v: (-degs[v], v)):
        if degs[start] + 1 <= len(best):
            break
        clique = [start]
        cand = masks[start]
        while cand:
            # extend by the candidate with most neighbours among the candidates
            pick, pick_deg = -1, -1
            c = cand
            while c:
                low = c & -c
                v = low.bit_length() - 1
                d = (masks[v] & cand).bit_count()
                if d > pick_deg:
                    pick, pick_deg = v, d
                c ^= low
            clique.append(pick)
            cand &= masks[pick]
        if len(clique) > len(best):
            best = clique
    return best


def _k_coloring(g: AdjGraph, k: int, clique: list[int], budget: list[int]) -> list[int] | None:
    """A k-colouring (colours 0..k-1) or None, by saturation-order search.

    Domains are colour bitmasks; a vertex left with one colour is assigned at
    once. The clique is precoloured and unused colours are interchangeable.
    """
    n = g.n
    adj = [tuple(a) for a in g.adj]
    degs = [len(a) for a in adj]
    full = (1 << k) - 1
    dom = [full] * n
    col = [-1] * n

    def assign(v: int, c: int, dom: list[int], col: list[int]) -> bool:
        stack = [(v, c)]
        while stack:
            x, cx = stack.pop()
            if col[x] >= 0:
                if col[x] != cx:
                    return False
                continue
            if not dom[x] >> cx & 1:
                return False
            col[x] = cx
            dom[x] = 1 << cx
            bit = 1 << cx
            for y in adj[x]:
                if col[y] < 0 and dom[y] & bit:
                    d = dom[y] & ~bit
                    if not d:
                        return False
                    dom[y] = d
                    if d & (d - 1) == 0:
                        stack.append((y, d.bit_length() - 1))
                elif col[y] == cx:
                    return False
        return True

    for i, v in enumerate(clique):
        if not assign(v, i, dom, col):
            return None
    top0 = len(clique) - 1

    def search(dom: list[int], col: list[int], top: int) -> list[int] | None:
        budget[0] -= 1
        if budget[0] < 0:
            raise SizeBudget("exact colouring exceeded its search budget")
        best_v, best_key = -1, None
        for v in range(n):
            if col[v] < 0:
                key = (dom[v].bit_count(), -degs[v], v)
                if best_key is None or key < best_key:
                    best_v, best_key = v, key
        if best_v < 0:
            return col
        d = dom[best_v]
        limit = min(k, top + 2)
        for c in range(limit):
            if not d >> c & 1:
                continue
            dom2, col2 = dom[:], col[:]
            if assign(best_v, c, dom2, col2):
                # colours used so far: everything up to the highest assigned
                found = search(dom2, col2, max(top, c, max(col2)))
                if found is not None:
                    return found
        return None

    return search(dom, col, top0)


def _tabu_coloring(g: AdjGraph, k: int, seed: int = 0, iters: int = 20000) -> list[int] | None:
    """Seeded tabu search for a k-colouring (colours 0..k-1); only tightens the upper bound."""
    rng = random.Random(seed)
    n = g.n
    adj = [tuple(a) for a in g.adj]
    col = [rng.randrange(k) for _ in range(n)]
    gamma = [[0] * k for _ in range(n)]
    for v in range(n):
        for u in adj[v]:
            gamma[v][col[u]] += 1
    conflicts = sum(gamma[v][col[v]] for v in range(n)) // 2
    best = conflicts
    tabu: dict[tuple[int, int], int] = {}
    for it in range(iters):
        if conflicts == 0:
            return col
        best_d, moves = None, []
        for v in range(n):
            cv = col[v]
            if not gamma[v][cv]:
                continue
            for c in range(k):
                if c == cv:
                    continue
                d = gamma[v][c] - gamma[v][cv]
                if tabu.get((v, c), -1) > it and conflicts + d >= best:
                    continue
                if best_d is None or d < best_d:
                    best_d, moves = d, [(v, c)]
                elif d == best_d:
                    moves.append((v, c))
        if not moves:
            continue
        v, c = rng.choice(moves)
        old = col[v]
        tabu[(v, old)] = it + int(0.6 * conflicts) + rng.randrange(10)
        col[v] = c
        conflicts += best_d
        best = min(best, conflicts)
        for u in adj[v]:
            gamma[u][old] -= 1
            gamma[u][c] += 1
    return None


def chromatic_exact(g: AdjGraph, vertex_cap: int = 80, node_budget: int = 2 * 10**6) -> tuple[int, ColorMap]:
    """Exact chromatic number with a witness.

    A greedy clique gives the lower bound. Greedy colouring, tightened by a
    seeded tabu search, gives the upper bound; each k in between is decided
    by saturation-order branch and bound with forced-colour propagation.
    """
    n = g.n
    if n > vertex_cap:
        raise SizeBudget(f"{n} vertices exceed the exact-solver cap of {vertex_cap}")
    if n == 0:
        return 0, ColorMap((), 0)
    clique = _greedy_clique(g.adj_masks(), n)
    upper = greedy_coloring(g)
    while upper.palette > len(clique):
        found = _tabu_coloring(g, upper.palette - 1)
        if found is None:
            break
        upper = ColorMap.dense([c + 1 for c in found])
    budget = [node_budget]
    for k in range(len(clique), upper.palette):
        found = _k_coloring(g, k, clique, budget)
        if found is not None:
            return k, ColorMap.dense([c + 1 for c in found])
    return upper.palette, upper


# -- recursive upper-bound colorings -------------------------------------------


@dataclass
class Step:
    level: int
    graph: str
    vertices: int
    h: int
    r: int
    r_bound: float
    family_size: int
    family_n: int
    palette: int
    used: int
    branch: str = "system"


def neighborhood_bound_U(R: int, sz: int | None = None) -> int:
    """|phi(N(A))| <= 2^(2 sz(A)) <= 2^(2R)."""
    return 1 << (2 * (R if sz is None else sz))


def neighborhood_bound_W(r: int, sigma: int, delta: int) -> float:
    """|phi(N(A))| <= 2^(r^(sigma+delta-2) (r+1)) on W_r(m, sigma, delta)."""
    return 2.0 ** (r ** (sigma + delta - 2) * (r + 1))


def _identity_level(m: int) -> tuple[AdjGraph, ColorMap]:
    g = build_graph(GraphFamilySpec.U(m, 1, 0))
    return g, ColorMap(tuple(range(1, m + 1)), m)


def _system_step(phi: HomMap, prev: ColorMap, r: int, provider: Provider):
    """Family -> system -> min-rule colouring through phi; returns (coloring, family)."""
    family = provider(r, prev.palette)
    sys, perm = system_from_family(phi.target, prev, family, r)
    phi2 = phi.relabel_target(perm)
    pairs = relabel_pairs(pairs_from_hom(phi), perm)
    if not is_independent_system(phi2.target, pairs, sys):
        raise AssertionError("family-built system is not independent for the drop-map pairs")
    col = coloring_from_system(phi2, sys)
    return col, family


def color_U_recursive(m: int, R: int, delta: int, provider: Provider = default_provider,
                      trace: list | None = None) -> ColorMap:
    """Proper colouring of U(m, R, delta), built level by level from K_m."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    _, col = _identity_level(m)
    for d in range(1, delta + 1):
        spec = GraphFamilySpec.U(m, R, d)
        phi = phi_drop_hom(spec)
        h_graph = phi.source
        bound = neighborhood_bound_U(R)
        r = 1
        for x in range(h_graph.n):
            s = len(phi.neighbor_image(x))
            if s > neighborhood_bound_U(R, h_graph.labels[x].sz):
                raise AssertionError(f"neighbourhood image of {h_graph.labels[x]!r} exceeds 2^(2 sz)")
            r = max(r, s)
        prev = col
        col, family = _system_step(phi, prev, r, provider)
        assert is_proper(h_graph, col)
        assert col.palette <= family.n
        assert (1 << len(family.members)) >= prev.palette
        assert r <= bound
        if trace is not None:
            trace.append(Step(d, str(spec), h_graph.n, prev.palette, r, bound,
                              len(family.members), family.n, col.palette, col.used))
    return col


def w_step_precondition(m: int, r: int, sigma: int, d: int) -> bool:
    """2^(2^(2 + r^(sigma+d-3)(r+1))) <= log^(2d-2) m, with an undefined log counted as failure."""
    try:
        top = iter_log(m, 2 * d - 2)
    except DomainError:
        return False
    if top <= 0:
        return False
    e = 2 + r ** (sigma + d - 3) * (r + 1)
    # compare 2^(2^e) <= top in log space
    try:
        return e <= math.log2(math.log2(top)) if top > 1 else False
    except ValueError:
        return False


def color_W_recursive(m: int, sigma: int, delta: int, r_growth: int, provider: Provider = default_provider,
                      trace: list | None = None, force_system: bool = False) -> ColorMap:
    """Proper colouring of W_r(m, sigma, delta).

    A level uses the independent-system step when the log-tower precondition
    holds (or ``force_system``); otherwise the previous colouring is pulled
    back through the drop map.
    """
    r = r_growth
    _, col = _identity_level(m)
    for d in range(1, delta + 1):
        spec = GraphFamilySpec.W(m, r, sigma, d)
        phi = phi_drop_hom(spec)
        h_graph = phi.source
        bound = neighborhood_bound_W(r, sigma, d)
        s_max = max((len(phi.neighbor_image(x)) for x in range(h_graph.n)), default=0)
        if s_max > bound:
            raise AssertionError(f"neighbourhood image of size {s_max} exceeds {bound}")
        prev = col
        if force_system or w_step_precondition(m, r, sigma, d):
            col, family = _system_step(phi, prev, max(1, s_max), provider)
            branch, fam_size, fam_n = "system", len(family.members), family.n
            assert col.palette <= family.n
        else:
            col = ColorMap(tuple(prev.colors[phi.table[x]] for x in range(h_graph.n)), prev.palette)
            branch, fam_size, fam_n = "lift", 0, 0
        assert is_proper(h_graph, col)
        if trace is not None:
            trace.append(Step(d, str(spec), h_graph.n, prev.palette, s_max, bound,
                              fam_size, fam_n, col.palette, col.used, branch))
    return col


# -- S^1 colorings ------------------------------------------------------------


@dataclass
class S1ColorMap:
    """Colours of all chains of a fixed length and bounded size."""

    m: int
    R: int
    length: int
    colors: dict = field(default_factory=dict)
    palette: int = 0

    def __getitem__(self, a: Chain) -> int:
        return self.colors[a]


def s1_conflict_graph(m: int, R: int, length: int) -> AdjGraph:
    """Chains of the given length and size <= R; edges where S^1 sets meet and first elements differ."""
    verts = vertices(GraphFamilySpec.U(m, R, length))
    edges = []
    for i, a in enumerate(verts):
        for j in range(i + 1, len(verts)):
            b = verts[j]
            if a.alpha != b.alpha and s1_intersects(a, b):
                edges.append((i, j))
    return AdjGraph.from_edges(len(verts), edges, verts)


def s1_condition_holds(c: S1ColorMap) -> bool:
    g = s1_conflict_graph(c.m, c.R, c.length)
    return all(c.colors[g.labels[u]] != c.colors[g.labels[v]] for u, v in g.edges())


def s1_coloring_from_u_coloring(c: ColorMap, m: int, R: int, delta: int) -> S1ColorMap:
    """Colour a length-2 delta chain by its even-indexed sub-chain's colour in U(m, R, delta)."""
    spec = GraphFamilySpec.U(m, R, delta)
    g = build_graph(spec)
    c.check_total(g)
    if not is_proper(g, c):
        raise NotProper("U colouring is not proper")
    index = vertex_index(g)
    out = {}
    for a in vertices(GraphFamilySpec.U(m, R, 2 * delta)):
        even = Chain(m, a.alpha, tuple(a.sets[i] for i in range(1, 2 * delta, 2)))
        out[a] = c.colors[index[even]]
    return S1ColorMap(m, R, 2 * delta, out, c.palette)


def u_coloring_from_s1_coloring(c: S1ColorMap, delta: int) -> ColorMap:
    """Colour <alpha, A_1..A_delta> by the doubled chain <alpha, A_1, A_1, ..., A_delta, A_delta>."""
    if c.length != 2 * delta:
        raise ValueError(f"S^1 colouring has length {c.length}, expected {2 * delta}")
    g = build_graph(GraphFamilySpec.U(c.m, c.R, delta))
    colors = []
    for a in g.labels:
        doubled = Chain(c.m, a.alpha, tuple(s for s in a.sets for _ in range(2)))
        colors.append(c.colors[doubled])
    out = ColorMap(tuple(colors), c.palette)
    if not is_proper(g, out):
        raise ConditionViolated("S^1 colouring does not separate conflicting chains")
    return out
