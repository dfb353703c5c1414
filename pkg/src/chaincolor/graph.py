"""Explicit finite graphs, homomorphisms between them, and colorings.

Vertices are the integers 0..n-1. Their numeric order is the vertex order
that independent systems are defined against ("u < v").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import DomainMismatch, NotAHomomorphism, PartialColoring

Pair = tuple[int, frozenset]


@dataclass(frozen=True)
class AdjGraph:
    n: int
    adj: tuple[frozenset, ...]
    labels: tuple[Any, ...] | None = field(default=None, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "AdjGraph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs), None if labels is None else tuple(labels))

    @classmethod
    def complete(cls, n: int) -> "AdjGraph":
        return cls.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "AdjGraph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "AdjGraph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def adj_masks(self) -> list[int]:
        masks = []
        for a in self.adj:
            m = 0
            for v in a:
                m |= 1 << v
            masks.append(m)
        return masks

    def induced(self, vertices: Sequence[int]) -> tuple["AdjGraph", dict[int, int]]:
        """Induced subgraph on ``vertices``, relabelled 0..k-1 in ascending vertex order."""
        keep = sorted(vertices)
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u in keep for v in self.adj[u] if v in index and u < v]
        labels = None if self.labels is None else [self.labels[v] for v in keep]
        return AdjGraph.from_edges(len(keep), edges, labels), index

    def relabel(self, perm: Sequence[int]) -> "AdjGraph":
        """Graph with vertex v renamed to perm[v]."""
        edges = [(perm[u], perm[v]) for u, v in self.edges()]
        labels = None
        if self.labels is not None:
            labels = [None] * self.n
            for v in range(self.n):
                labels[perm[v]] = self.labels[v]
        return AdjGraph.from_edges(self.n, edges, labels)


@dataclass(frozen=True)
class HomMap:
    source: AdjGraph
    target: AdjGraph
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.source.n:
            raise NotAHomomorphism("vertex map is not total on the source graph")
        for v in self.table:
            if not 0 <= v < self.target.n:
                raise NotAHomomorphism(f"image {v} outside the target graph")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_homomorphism(self) -> bool:
        t = self.table
        return all(self.target.has_edge(t[x], t[y]) for x, y in self.source.edges())

    def neighbor_image(self, x: int) -> frozenset:
        """phi(N(x))."""
        return frozenset(self.table[y] for y in self.source.adj[x])

    def relabel_target(self, perm: Sequence[int]) -> "HomMap":
        return HomMap(self.source, self.target.relabel(perm), tuple(perm[v] for v in self.table))

    @classmethod
    def identity(cls, g: AdjGraph) -> "HomMap":
        return cls(g, g, tuple(range(g.n)))


@dataclass(frozen=True)
class ColorMap:
    """Colors 1..palette, indexed by vertex id."""

    colors: tuple[int, ...]
    palette: int

    @classmethod
    def dense(cls, values: Sequence[Any]) -> "ColorMap":
        """Map arbitrary hashable colors to 1, 2, ... by first occurrence."""
        index: dict[Any, int] = {}
        out = []
        for c in values:
            if c not in index:
                index[c] = len(index) + 1
            out.append(index[c])
        return cls(tuple(out), len(index))

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    @property
    def used(self) -> int:
        return len(set(self.colors))

    def check_total(self, g: AdjGraph) -> None:
        if len(self.colors) != g.n:
            raise PartialColoring(f"coloring covers {len(self.colors)} of {g.n} vertices")
        for c in self.colors:
            if not 1 <= c <= self.palette:
                raise PartialColoring(f"color {c} outside palette [1, {self.palette}]")


def is_proper(g: AdjGraph, c: ColorMap) -> bool:
    c.check_total(g)
    return all(c.colors[u] != c.colors[v] for u, v in g.edges())


def pairs_from_hom(phi: HomMap) -> list[Pair]:
    """The collection {(phi(x), phi(N(x)))}, deduplicated and sorted."""
    seen = {(phi.table[x], phi.neighbor_image(x)) for x in range(phi.source.n)}
    return sorted(seen, key=lambda p: (p[0], sorted(p[1])))


def check_pairs(g: AdjGraph, pairs: Iterable[Pair]) -> None:
    for v, s in pairs:
        if not 0 <= v < g.n:
            raise DomainMismatch(f"pair vertex {v} not in graph")
        bad = [u for u in s if u not in g.adj[v]]
        if bad:
            raise DomainMismatch(f"pair ({v}, {sorted(s)}) lists non-neighbours {bad}")


def relabel_pairs(pairs: Iterable[Pair], perm: Sequence[int]) -> list[Pair]:
    return [(perm[v], frozenset(perm[u] for u in s)) for v, s in pairs]


def maximal_pairs(pairs: Iterable[Pair]) -> list[Pair]:
    """Drop pairs (v, S) whose S is contained in another S' for the same v.

    A larger neighbour set only shrinks the cell that must be nonempty, so the
    maximal pairs carry every constraint.
    """
    by_v: dict[int, list[frozenset]] = {}
    for v, s in pairs:
        by_v.setdefault(v, []).append(frozenset(s))
    out = []
    for v in sorted(by_v):
        sets = sorted(set(by_v[v]), key=len, reverse=True)
        kept: list[frozenset] = []
        for s in sets:
            if not any(s <= k for k in kept):
                kept.append(s)
        out.extend((v, s) for s in sorted(kept, key=sorted))
    return out
