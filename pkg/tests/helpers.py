"""Shared instance generators for the test suite."""

import itertools
import math
import random

from chaincolor.compression import Distribution
from chaincolor.graph import AdjGraph


def random_graph(rng: random.Random, n: int, p: float) -> AdjGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return AdjGraph.from_edges(n, edges)


def all_labeled_graphs(n: int):
    slots = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for bits in range(1 << len(slots)):
        yield AdjGraph.from_edges(n, [e for i, e in enumerate(slots) if bits >> i & 1])


def brute_chromatic(g: AdjGraph) -> int:
    """Smallest k admitting a proper k-colouring, by trying every assignment."""
    if g.n == 0:
        return 0
    edges = g.edges()
    for k in range(1, g.n + 1):
        for cols in itertools.product(range(k), repeat=g.n):
            if cols[0] == 0 and all(cols[u] != cols[v] for u, v in edges):
                return k
    return g.n


def random_distribution(rng: random.Random, N: int, support: int | None = None, spread: float = 6.0) -> Distribution:
    """Random prior with log2-weights spread over ``spread`` bits."""
    w = [2.0 ** (-rng.uniform(0, spread)) for _ in range(N)]
    if support is not None:
        keep = set(rng.sample(range(N), support))
        w = [x if i in keep else 0.0 for i, x in enumerate(w)]
    t = math.fsum(w)
    return Distribution.of([x / t for x in w])


def perturb(rng: random.Random, P: Distribution, delta: float) -> Distribution:
    """Q with the same support as P and delta(P, Q) <= delta.

    Scaling every weight by 2^u with |u| <= delta/2 and renormalising moves each
    log-ratio by at most delta.
    """
    w = [p * 2.0 ** rng.uniform(-delta / 2, delta / 2) if p > 0 else 0.0 for p in P.probs]
    t = math.fsum(w)
    return Distribution.of([x / t for x in w])
