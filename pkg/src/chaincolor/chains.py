"""Chains, the four chain-graph families, S^1 sandwiches and the drop map.

A chain <alpha, A_1, ..., A_f> over [m] is stored as its first element and
the tuple of bitmasks A_1..A_f; A_0 = {alpha} is implicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

from . import bitsets as bs
from .errors import (
    AlphaMissing,
    EmptyChain,
    LengthMismatch,
    NotAHomomorphism,
    NotAVertex,
    NotNested,
    OutOfUniverse,
    SizeBudget,
)
from .graph import AdjGraph, HomMap

DEFAULT_SIZE_BUDGET = 10**7


@dataclass(frozen=True)
class Chain:
    m: int
    alpha: int
    sets: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.alpha <= self.m:
            raise OutOfUniverse(f"alpha={self.alpha} not in [1, {self.m}]")
        universe = bs.full(self.m)
        prev = bs.bit(self.alpha)
        for i, s in enumerate(self.sets, start=1):
            if s & ~universe:
                raise OutOfUniverse(f"A_{i} has elements outside [1, {self.m}]")
            if prev & ~s:
                if i == 1:
                    raise AlphaMissing(f"alpha={self.alpha} not in A_1")
                raise NotNested(f"A_{i - 1} is not contained in A_{i}")
            prev = s

    @property
    def f(self) -> int:
        return len(self.sets)

    @property
    def sz(self) -> int:
        return bs.popcount(self.sets[-1]) if self.sets else 1

    def level(self, i: int) -> int:
        """Mask of A_i, with A_0 = {alpha}."""
        return self.sets[i - 1] if i else bs.bit(self.alpha)

    def key(self) -> tuple:
        return (self.alpha,) + tuple(bs.elements(s) for s in self.sets)

    def text(self) -> str:
        return "|".join([str(self.alpha)] + [bs.format_set(s) for s in self.sets])

    @classmethod
    def parse(cls, text: str, m: int) -> "Chain":
        fields = text.strip().split("|")
        return cls(m, int(fields[0]), tuple(bs.parse_set(t) for t in fields[1:]))

    def __repr__(self) -> str:
        return f"<{self.text()}>"


def make_chain(m: int, alpha: int, sets: Iterable[Iterable[int]]) -> Chain:
    return Chain(m, alpha, tuple(bs.to_mask(s) for s in sets))


def _adjacent(a: Chain, b: Chain) -> bool:
    if a.alpha == b.alpha:
        return False
    d = len(a.sets)
    if d == 0:
        return True
    if not (bs.bit(a.alpha) & b.sets[0]) or not (bs.bit(b.alpha) & a.sets[0]):
        return False
    sa, sb = a.sets, b.sets
    for i in range(d - 1):
        if sa[i] & ~sb[i + 1] or sb[i] & ~sa[i + 1]:
            return False
    return True


# -- families -------------------------------------------------------------


@dataclass(frozen=True)
class GraphFamilySpec:
    """U(m,R,delta), W_r(m,sigma,delta), Y(m,delta) or Z(m,R,delta)."""

    family: str
    m: int
    delta: int
    R: int | None = None
    r: int | None = None
    sigma: int | None = None

    def __post_init__(self):
        fam, m, d = self.family, self.m, self.delta
        if fam not in ("U", "W", "Y", "Z"):
            raise ValueError(f"unknown family {fam!r}")
        if m < 1 or d < 0:
            raise ValueError("need m >= 1 and delta >= 0")
        if fam in ("U", "Z") and (self.R is None or self.R < 1):
            raise ValueError(f"{fam} needs R >= 1")
        if fam == "Z":
            if d < 1 or self.R < 2 * d + 1:
                raise ValueError("Z needs delta >= 1 and R >= 2*delta + 1")
        if fam == "W":
            if self.r is None or self.r < 2 or self.sigma is None or self.sigma < 0:
                raise ValueError("W needs r >= 2 and sigma >= 0")
        if fam != "U" and d >= 1 and self.size(d) > m:
            raise ValueError(f"{self}: |A_{d}| = {self.size(d)} exceeds m = {m}")

    @classmethod
    def U(cls, m, R, delta):
        return cls("U", m, delta, R=R)

    @classmethod
    def W(cls, m, r, sigma, delta):
        return cls("W", m, delta, r=r, sigma=sigma)

    @classmethod
    def Y(cls, m, delta):
        return cls("Y", m, delta)

    @classmethod
    def Z(cls, m, R, delta):
        return cls("Z", m, delta, R=R)

    def __str__(self) -> str:
        if self.family == "U" or self.family == "Z":
            return f"{self.family}({self.m},{self.R},{self.delta})"
        if self.family == "W":
            return f"W_{self.r}({self.m},{self.sigma},{self.delta})"
        return f"Y({self.m},{self.delta})"

    def size(self, i: int) -> int | None:
        """Required |A_i| (1 <= i <= delta), or None for U's 'at most R'."""
        if self.family == "U":
            return None
        if self.family == "W":
            return self.r ** (self.sigma + i - 1)
        if self.family == "Z" and i == self.delta:
            return self.R
        return 2 * i + 1

    @property
    def max_size(self) -> int:
        if self.family == "U":
            return self.R
        return self.size(self.delta) if self.delta else 1

    def contains(self, a: Chain) -> bool:
        if a.m != self.m or a.f != self.delta:
            return False
        if self.family == "U":
            return a.sz <= self.R
        return all(bs.popcount(s) == self.size(i) for i, s in enumerate(a.sets, start=1))

    def parent(self) -> "GraphFamilySpec":
        """Target family of the drop-last-set map."""
        if self.delta < 1:
            raise EmptyChain("no parent family at delta = 0")
        d = self.delta - 1
        if self.family == "U":
            return GraphFamilySpec.U(self.m, self.R, d)
        if self.family == "W":
            return GraphFamilySpec.W(self.m, self.r, self.sigma, d)
        return GraphFamilySpec.Y(self.m, d)


def _supersets(lower: int, universe: int, extra: int | None = None, max_size: int | None = None) -> Iterator[int]:
    free = bs.elements(universe & ~lower)
    if extra is not None:
        for combo in combinations(free, extra):
            yield lower | bs.to_mask(combo)
        return
    base = bs.popcount(lower)
    for k in range(min(len(free), max_size - base) + 1):
        for combo in combinations(free, k):
            yield lower | bs.to_mask(combo)


def vertices(spec: GraphFamilySpec, size_budget: int = DEFAULT_SIZE_BUDGET) -> list[Chain]:
    """All vertices of the family, in canonical order."""
    universe = bs.full(spec.m)
    out: list[Chain] = []

    def extend(alpha: int, prefix: list[int]):
        i = len(prefix) + 1
        if i > spec.delta:
            out.append(Chain(spec.m, alpha, tuple(prefix)))
            if len(out) > size_budget:
                raise SizeBudget(f"{spec} has more than {size_budget} vertices")
            return
        lower = prefix[-1] if prefix else bs.bit(alpha)
        want = spec.size(i)
        if want is None:
            gen = _supersets(lower, universe, max_size=spec.R)
        else:
            grow = want - bs.popcount(lower)
            if grow < 0:
                return
            gen = _supersets(lower, universe, extra=grow)
        for s in gen:
            prefix.append(s)
            extend(alpha, prefix)
            prefix.pop()

    if spec.family == "U" and spec.R < 1:
        return []
    for alpha in range(1, spec.m + 1):
        extend(alpha, [])
    out.sort(key=Chain.key)
    return out


@lru_cache(maxsize=64)
def build_graph(spec: GraphFamilySpec, size_budget: int = DEFAULT_SIZE_BUDGET) -> AdjGraph:
    """The family graph, vertices labelled by their chains in canonical order."""
    verts = vertices(spec, size_budget)
    edges = []
    if spec.delta == 0:
        edges = [(i, j) for i in range(len(verts)) for j in range(i + 1, len(verts))]
    else:
        # Adjacent chains share alpha-membership in A_1: bucket by A_1 contents.
        by_member: dict[int, list[int]] = {}
        for i, a in enumerate(verts):
            for e in bs.elements(a.sets[0]):
                by_member.setdefault(e, []).append(i)
        for i, a in enumerate(verts):
            for j in by_member.get(a.alpha, ()):
                if j > i and _adjacent(a, verts[j]):
                    edges.append((i, j))
    return AdjGraph.from_edges(len(verts), edges, verts)


def vertex_index(g: AdjGraph) -> dict:
    return {label: i for i, label in enumerate(g.labels)}


def u_adjacent(spec: GraphFamilySpec, a: Chain, b: Chain) -> bool:
    for c in (a, b):
        if not spec.contains(c):
            raise NotAVertex(f"{c!r} is not a vertex of {spec}")
    return _adjacent(a, b)


# -- S^1 ------------------------------------------------------------------


def s1_members(a: Chain, cap: int = DEFAULT_SIZE_BUDGET) -> list[Chain]:
    """Chains <B_0..B_{f-1}> with A_{i-1} <= B_i <= A_{i+1} (A_{-1} empty)."""
    f = a.f
    if f < 1:
        raise EmptyChain("S^1 needs a chain of length >= 1")
    out: list[Chain] = []

    def extend(b0: int, prefix: list[int]):
        i = len(prefix) + 1
        if i > f - 1:
            out.append(Chain(a.m, b0, tuple(prefix)))
            if len(out) > cap:
                raise SizeBudget(f"S^1({a!r}) has more than {cap} members")
            return
        prev = prefix[-1] if prefix else bs.bit(b0)
        for s in bs.between(prev | a.level(i - 1), a.level(i + 1)):
            prefix.append(s)
            extend(b0, prefix)
            prefix.pop()

    for b0 in bs.elements(a.level(1)):
        extend(b0, [])
    out.sort(key=Chain.key)
    return out


def s1_intersects(a: Chain, b: Chain) -> bool:
    """Whether S^1(a) and S^1(b) share a chain.

    Minimal witness: B_0 = {x} for any x in A_1 & B_1, and
    B_i = A_{i-1} | B_{i-1} | {x}, which is valid iff each lower bound fits under
    the matching upper bound.
    """
    if a.f != b.f or a.m != b.m:
        raise LengthMismatch(f"chains of length {a.f} and {b.f}")
    f = a.f
    if f < 1:
        return False
    if not (a.level(1) & b.level(1)):
        return False
    for i in range(1, f):
        lower = a.level(i - 1) | b.level(i - 1)
        upper = a.level(i + 1) & b.level(i + 1)
        if lower & ~upper:
            return False
    return True


# -- the drop map ---------------------------------------------------------


def phi_drop(a: Chain) -> Chain:
    if a.f < 1:
        raise EmptyChain("cannot drop a set from a chain of length 0")
    return Chain(a.m, a.alpha, a.sets[:-1])


def phi_drop_hom(spec: GraphFamilySpec) -> HomMap:
    """phi: spec -> spec.parent() as an explicit homomorphism."""
    h = build_graph(spec)
    g = build_graph(spec.parent())
    index = vertex_index(g)
    try:
        table = tuple(index[phi_drop(a)] for a in h.labels)
    except KeyError as exc:
        raise NotAHomomorphism(f"{exc.args[0]!r} has no image in {spec.parent()}") from None
    return HomMap(h, g, table)


def phi_image_of_neighborhood(spec: GraphFamilySpec, a: Chain) -> set[Chain]:
    """phi(N(a)) inside the family graph."""
    g = build_graph(spec)
    index = vertex_index(g)
    if a not in index:
        raise NotAVertex(f"{a!r} is not a vertex of {spec}")
    return {phi_drop(g.labels[y]) for y in g.adj[index[a]]}


def u_neighbor_projections(a: Chain, R: int) -> set[Chain]:
    """phi(N(a)) for a vertex of U(m, R, f), computed without building the graph.

    Enumerates <beta, B_1..B_{f-1}> under the edge constraints and checks that
    some last set B_f of size <= R exists.
    """
    d = a.f
    if d < 1:
        raise EmptyChain("phi needs length >= 1")
    universe = bs.full(a.m)
    abit = bs.bit(a.alpha)
    out: set[Chain] = set()

    def extend(beta: int, prefix: list[int]):
        i = len(prefix) + 1
        prev = prefix[-1] if prefix else bs.bit(beta)
        lower = prev
        if i == 1:
            lower |= abit
        if i >= 2:
            lower |= a.level(i - 1)
        if i == d:
            if bs.popcount(lower) <= R:
                out.add(Chain(a.m, beta, tuple(prefix)))
            return
        for s in bs.between(lower, a.level(i + 1) & universe, R):
            prefix.append(s)
            extend(beta, prefix)
            prefix.pop()

    for beta in bs.elements(a.level(1) & ~abit):
        extend(beta, [])
    return out


# -- restricted neighbourhood graphs and completeness ----------------------


def rn_graph(g: AdjGraph, r: int, cap: int = DEFAULT_SIZE_BUDGET) -> tuple[AdjGraph, HomMap]:
    """RN(G): vertices <v, S> with v in S, S - {v} a set of at most r neighbours."""
    if r < 1:
        raise ValueError("r must be positive")
    verts: list[tuple[int, tuple[int, ...]]] = []
    for v in range(g.n):
        nbrs = sorted(g.adj[v])
        for k in range(min(r, len(nbrs)) + 1):
            for combo in combinations(nbrs, k):
                verts.append((v, tuple(sorted(combo + (v,)))))
                if len(verts) > cap:
                    raise SizeBudget(f"RN graph exceeds {cap} vertices")
    verts.sort()
    by_owner: dict[int, list[int]] = {}
    for i, (v, _) in enumerate(verts):
        by_owner.setdefault(v, []).append(i)
    edges = []
    for i, (v, s) in enumerate(verts):
        for u in s:
            if u <= v:
                continue
            for j in by_owner[u]:
                if v in verts[j][1]:
                    edges.append((i, j))
    h = AdjGraph.from_edges(len(verts), edges, verts)
    return h, HomMap(h, g, tuple(v for v, _ in verts))


def is_complete_hom(phi: HomMap) -> bool:
    """phi(z) in phi(N(x)) and phi(x) in phi(N(z)) must force x ~ z."""
    if not phi.is_homomorphism():
        raise NotAHomomorphism("map does not send edges to edges")
    h = phi.source
    images = [phi.neighbor_image(x) for x in range(h.n)]
    fibres: dict[int, list[int]] = {}
    for x, v in enumerate(phi.table):
        fibres.setdefault(v, []).append(x)
    for x in range(h.n):
        vx = phi.table[x]
        for v in images[x]:
            for z in fibres.get(v, ()):
                if vx in images[z] and z not in h.adj[x]:
                    return False
    return True
