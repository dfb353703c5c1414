"""Deterministic compression under uncertain priors.

Alice knows P, Bob knows Q, and both know a bound D on the largest absolute
log2-likelihood ratio between them. Alice builds a chain of level sets of P
around her message, and sends its colour together with the size cap s and
the level r. Bob builds a sandwiched chain from Q and searches for a chain of
the same colour.

The colourings have to separate chains with different first elements whose
S^1 sets meet. Three schemes are provided:

* ``RecursiveChainScheme`` colours a chain by a proper colouring of U(N, s, k)
  evaluated at its even-indexed sub-chain, computed lazily;
* ``GreedyConflictScheme`` greedily colours the explicit conflict graph (tiny N only);
* ``IdentityScheme`` uses the message itself as the colour.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from . import bitsets as bs
from .bounds import log_star
from .chains import Chain, GraphFamilySpec, vertices
from .coloring import greedy_coloring, s1_conflict_graph
from .errors import (
    BottomCode,
    DecodeMismatch,
    DeltaViolated,
    DomainError,
    NoCandidate,
    SizeBudget,
    SupportMismatch,
    ZeroProbability,
)
from .families import default_provider

TOL = 1e-9


@dataclass(frozen=True)
class Distribution:
    probs: tuple[float, ...]

    def __post_init__(self):
        if not self.probs:
            raise ValueError("empty distribution")
        if any(p < 0 or math.isnan(p) for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def of(cls, probs: Sequence[float]) -> "Distribution":
        return cls(tuple(float(p) for p in probs))

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        return cls(tuple([1.0 / n] * n))

    @property
    def N(self) -> int:
        return len(self.probs)

    def p(self, m: int) -> float:
        """Probability of message m (1-based)."""
        return self.probs[m - 1]

    def level(self, m: int) -> float:
        p = self.probs[m - 1]
        return -math.log2(p) if p > 0 else math.inf


def delta_distance(P: Distribution, Q: Distribution) -> float:
    """max |log2 P(m) - log2 Q(m)| over messages where either is positive."""
    if P.N != Q.N:
        raise ValueError("distributions over different universes")
    best = 0.0
    for i, (p, q) in enumerate(zip(P.probs, Q.probs), start=1):
        if p == 0 and q == 0:
            continue
        if p == 0 or q == 0:
            raise SupportMismatch(f"message {i} has probability zero under only one prior")
        best = max(best, abs(math.log2(p) - math.log2(q)))
    return best


def chain_length(N: int) -> int:
    """f = 2 floor(log* N) - 1."""
    if N < 2:
        raise DomainError("need a universe of at least 2 messages")
    return 2 * log_star(N) - 1


def within(level: float, r: int, bound: float) -> bool:
    """|level - r| <= bound, inclusive up to TOL. Shared by both parties."""
    return abs(level - r) <= bound + TOL


def level_set(D: Distribution, r: int, bound: float) -> int:
    out = 0
    for m in range(1, D.N + 1):
        if within(D.level(m), r, bound):
            out |= bs.bit(m)
    return out


def alice_threshold(k: int, delta: float) -> float:
    return 2 * k * delta + 1


def bob_threshold(k: int, delta: float) -> float:
    return (2 * k + 1) * delta + 1


def message_level(P: Distribution, m: int) -> int:
    p = P.p(m)
    if p <= 0:
        raise ZeroProbability(f"message {m} has probability zero")
    return math.floor(-math.log2(p))


def alice_chain(P: Distribution, m: int, delta: float) -> Chain:
    """<m, A_1, ..., A_f> with A_k the messages whose level is within 2k D + 1 of r."""
    r = message_level(P, m)
    f = chain_length(P.N)
    sets = tuple(level_set(P, r, alice_threshold(k, delta)) for k in range(1, f + 1))
    return Chain(P.N, m, sets)


def bob_anchors(Q: Distribution, r: int, delta: float) -> list[int]:
    """Valid first elements w for Bob's chain, ascending."""
    return [w for w in range(1, Q.N + 1) if within(Q.level(w), r, delta + 1)]


def bob_chain(Q: Distribution, r: int, delta: float, w: int | None = None) -> Chain:
    """<w, B_1, ..., B_{f-1}> with B_k the messages within (2k+1) D + 1 of r."""
    anchors = bob_anchors(Q, r, delta)
    if not anchors:
        raise NoCandidate(f"no message of Q lies within {delta + 1} of level {r}")
    if w is None:
        w = anchors[0]
    elif w not in anchors:
        raise NoCandidate(f"{w} is not a valid anchor")
    f = chain_length(Q.N)
    sets = tuple(level_set(Q, r, bob_threshold(k, delta)) for k in range(1, f))
    return Chain(Q.N, w, sets)


def in_s1(b: Chain, a: Chain) -> bool:
    """B in S^1(A): A_{i-1} <= B_i <= A_{i+1} for 0 <= i <= f-1."""
    if b.f != a.f - 1:
        return False
    for i in range(a.f):
        bi = b.level(i)
        lower = a.level(i - 1) if i >= 1 else 0
        if lower & ~bi or bi & ~a.level(i + 1):
            return False
    return True


# -- colouring schemes ---------------------------------------------------------


class IdentityScheme:
    """Colour = first element. Always valid, palette N."""

    name = "identity"

    def __init__(self, N: int, s: int):
        self.N, self.s = N, s
        self.f = chain_length(N)
        self.depends: frozenset = frozenset()
        self.palette = N

    def color(self, a: Chain) -> int:
        return a.alpha


class GreedyConflictScheme:
    """First-fit colouring of the explicit S^1 conflict graph."""

    name = "greedy"

    def __init__(self, N: int, s: int, cap: int = 4000):
        self.N, self.s = N, s
        self.f = chain_length(N)
        spec = GraphFamilySpec.U(N, s, self.f)
        verts = vertices(spec, size_budget=cap)
        if len(verts) > cap:
            raise SizeBudget(f"{len(verts)} chains exceed the greedy scheme cap {cap}")
        g = s1_conflict_graph(N, s, self.f)
        c = greedy_coloring(g)
        self._colors = {a: c.colors[i] for i, a in enumerate(g.labels)}
        self.depends = frozenset(range(1, self.f + 1))
        self.palette = c.palette

    def color(self, a: Chain) -> int:
        return self._colors[a]


class LazyUColoring:
    """Proper colouring of U(N, s, k) evaluated on demand.

    Level 0 is K_N coloured by identity. A vertex x at level d gets the least
    element of the cell of (phi(x), phi(N(x))) in the edge-set system built
    from an independent family and the level d-1 colouring. Vertices of level
    d-1 are ordered by (colour, chain), so an edge's set depends only on the
    two colours.
    """

    def __init__(self, N: int, s: int, k: int, provider=default_provider, r_levels: Sequence[int] | None = None):
        self.N, self.s, self.k = N, s, k
        self.families = []
        h = N
        for d in range(1, k + 1):
            if r_levels is not None:
                r = r_levels[d - 1]
            elif d == 1:
                r = max(1, min(s, N) - 1)
            else:
                r = 1 << (2 * s)
            fam = provider(r, h)
            self.families.append(fam)
            h = fam.n
        self.palette = h if k else N
        self._ys = [bs.canonical_subsets(len(f.members)) for f in self.families]
        self._cache: dict = {}

    def _edge_set(self, d: int, c_low: int, c_high: int) -> int:
        fam = self.families[d - 1]
        ys = self._ys[d - 1]
        diff = ys[c_high - 1] & ~ys[c_low - 1]
        return fam.members[bs.lowest(diff) - 1]

    def color(self, a: Chain) -> int:
        return self._color(a.alpha, a.sets)

    def _color(self, alpha: int, sets: tuple) -> int:
        d = len(sets)
        if d == 0:
            return alpha
        key = (alpha, sets)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        fam = self.families[d - 1]
        cv = self._color(alpha, sets[:-1])
        acc = bs.full(fam.n)
        for beta, ys in _projections(alpha, sets, self.s):
            cy = self._color(beta, ys)
            if cy < cv:
                acc &= self._edge_set(d, cy, cv)
            elif cy > cv:
                acc &= ~self._edge_set(d, cv, cy)
            else:
                raise AssertionError("adjacent vertices share a colour at the previous level")
        if not acc:
            raise AssertionError("empty cell; the family is not independent enough")
        c = bs.lowest(acc)
        self._cache[key] = c
        return c


def _projections(alpha: int, sets: tuple, R: int):
    """Same enumeration as chains.u_neighbor_projections, on raw tuples."""
    d = len(sets)
    abit = 1 << (alpha - 1)
    out = []

    def extend(beta: int, prefix: tuple):
        i = len(prefix) + 1
        lower = prefix[-1] if prefix else 1 << (beta - 1)
        if i == 1:
            lower |= abit
        else:
            lower |= sets[i - 2]
        if i == d:
            if bs.popcount(lower) <= R:
                out.append((beta, prefix))
            return
        for x in bs.between(lower, sets[i], R):
            extend(beta, prefix + (x,))

    for beta in bs.elements(sets[0] & ~abit):
        extend(beta, ())
    return out


class RecursiveChainScheme:
    """Colour <alpha, A_1..A_f> by a U(N, s, k) colouring of <alpha, A_2, A_4, ..., A_2k>, k = (f-1)/2.

    If S^1 of two such chains meet and their first elements differ, the two
    even sub-chains are adjacent in U(N, s, k), so a proper colouring there
    separates them.
    """

    name = "recursive"

    def __init__(self, N: int, s: int, provider=default_provider, r_levels=None):
        self.N, self.s = N, s
        self.f = chain_length(N)
        self.k = (self.f - 1) // 2
        self.inner = LazyUColoring(N, s, self.k, provider, r_levels)
        self.depends = frozenset(range(2, 2 * self.k + 1, 2))
        self.palette = self.inner.palette

    def even_part(self, a: Chain) -> Chain:
        return Chain(a.m, a.alpha, tuple(a.sets[i] for i in range(1, 2 * self.k, 2)))

    def color(self, a: Chain) -> int:
        return self.inner.color(self.even_part(a))


SCHEMES = {
    "recursive": RecursiveChainScheme,
    "greedy": GreedyConflictScheme,
    "identity": IdentityScheme,
}


@lru_cache(maxsize=64)
def make_scheme(kind: str, N: int, s: int):
    try:
        cls = SCHEMES[kind]
    except KeyError:
        raise ValueError(f"unknown scheme {kind!r}; choose from {sorted(SCHEMES)}") from None
    return cls(N, s)


# -- codes ---------------------------------------------------------------------


@dataclass(frozen=True)
class Code:
    failed: bool
    s: int | None = None
    r: int | None = None
    color: int | None = None

    @classmethod
    def bottom(cls) -> "Code":
        return cls(True)

    def to_bytes(self) -> bytes:
        if self.failed:
            return b"\x00"
        return b"\x01" + _leb128(self.s) + _leb128(self.r) + _leb128(self.color)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Code":
        if not data:
            raise ValueError("empty code")
        if data[0] == 0:
            if len(data) != 1:
                raise ValueError("trailing bytes after the failure marker")
            return cls.bottom()
        if data[0] != 1:
            raise ValueError(f"bad code marker {data[0]:#x}")
        pos = 1
        vals = []
        for _ in range(3):
            v, pos = _unleb128(data, pos)
            vals.append(v)
        if pos != len(data):
            raise ValueError("trailing bytes after the code")
        return cls(False, *vals)

    @property
    def bits(self) -> int:
        return 8 * len(self.to_bytes())


def _leb128(v: int) -> bytes:
    if v < 0:
        raise ValueError("LEB128 fields must be nonnegative")
    out = bytearray()
    while True:
        byte = v & 0x7F
        v >>= 7
        if v:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _unleb128(data: bytes, pos: int) -> tuple[int, int]:
    shift = value = 0
    while True:
        if pos >= len(data):
            raise ValueError("truncated LEB128 value")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        shift += 7
        if not byte & 0x80:
            return value, pos


def encode(P: Distribution, m: int, delta: float, s: int, scheme=None) -> Code:
    a = alice_chain(P, m, delta)
    if a.sz > s:
        return Code.bottom()
    if scheme is None:
        scheme = make_scheme("recursive", P.N, s)
    return Code(False, s, message_level(P, m), scheme.color(a))


def candidate_chains(b: Chain, s: int, depends) -> Iterator[Chain]:
    """Chains A' of length f = b.f + 1 and size <= s with b in S^1(A').

    Only the indices in ``depends`` are enumerated; every other set takes its
    least feasible value, which is feasible whenever any value is.
    """
    f = b.f + 1
    N = b.m
    universe = bs.full(N)
    first = b.level(1) if f >= 2 else universe

    def upper(j: int) -> int:
        return b.level(j + 1) if j + 1 <= f - 1 else universe

    def extend(alpha: int, prefix: list[int]):
        j = len(prefix) + 1
        if j > f:
            yield Chain(N, alpha, tuple(prefix))
            return
        prev = prefix[-1] if prefix else bs.bit(alpha)
        lower = prev | b.level(j - 1)
        up = upper(j)
        if lower & ~up or bs.popcount(lower) > s:
            return
        if j in depends:
            options = bs.between(lower, up, s)
        else:
            options = (lower,)
        for x in options:
            prefix.append(x)
            yield from extend(alpha, prefix)
            prefix.pop()

    for alpha in bs.elements(first):
        yield from extend(alpha, [])


def decode(Q: Distribution, code: Code, delta: float, scheme=None, w: int | None = None,
           all_matches: bool = False):
    """Recover the message; with ``all_matches`` return every matching first element."""
    if code.failed:
        raise BottomCode("cannot decode a failure code")
    if scheme is None:
        scheme = make_scheme("recursive", Q.N, code.s)
    b = bob_chain(Q, code.r, delta, w)
    found = []
    for a in candidate_chains(b, code.s, scheme.depends):
        if scheme.color(a) == code.color:
            if not all_matches:
                return a.alpha
            found.append(a.alpha)
    if not found:
        raise NoCandidate("no chain of the transmitted colour is consistent with Bob's chain")
    return sorted(set(found))


@dataclass
class SimReport:
    expected_bits: float
    bottom_rate: float
    max_bits: int
    trials: int
    exact: bool


def simulate(P: Distribution, Q: Distribution, delta: float, s: int, exact: bool = True,
             trials: int = 1000, seed: int = 0, scheme=None) -> SimReport:
    d = delta_distance(P, Q)
    if d > delta + TOL:
        raise DeltaViolated(f"delta(P, Q) = {d} exceeds {delta}")
    if scheme is None:
        scheme = make_scheme("recursive", P.N, s)

    cache: dict[int, Code] = {}

    def run(m: int) -> Code:
        if m not in cache:
            code = encode(P, m, delta, s, scheme)
            if not code.failed:
                got = decode(Q, Code.from_bytes(code.to_bytes()), delta, scheme)
                if got != m:
                    raise DecodeMismatch(f"message {m} decoded as {got}")
            cache[m] = code
        return cache[m]

    if exact:
        exp_bits = bottom = 0.0
        max_bits = 0
        for m in range(1, P.N + 1):
            p = P.p(m)
            if p <= 0:
                continue
            code = run(m)
            exp_bits += p * code.bits
            bottom += p * code.failed
            max_bits = max(max_bits, code.bits)
        return SimReport(exp_bits, bottom, max_bits, P.N, True)
    rng = random.Random(seed)
    msgs = rng.choices(range(1, P.N + 1), weights=P.probs, k=trials)
    total = fails = 0
    max_bits = 0
    for m in msgs:
        code = run(m)
        total += code.bits
        fails += code.failed
        max_bits = max(max_bits, code.bits)
    return SimReport(total / trials, fails / trials, max_bits, trials, False)


def s1_check(P: Distribution, Q: Distribution, m: int, delta: float, w: int | None = None) -> bool:
    """Bob's chain lies in S^1 of Alice's chain."""
    a = alice_chain(P, m, delta)
    b = bob_chain(Q, message_level(P, m), delta, w)
    return in_s1(b, a)
