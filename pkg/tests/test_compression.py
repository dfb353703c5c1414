import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from chaincolor import bitsets as bs
from chaincolor.chains import Chain, GraphFamilySpec, build_graph, make_chain
from chaincolor.coloring import color_U_recursive
from chaincolor.compression import (
    Code,
    Distribution,
    GreedyConflictScheme,
    IdentityScheme,
    LazyUColoring,
    RecursiveChainScheme,
    alice_chain,
    bob_anchors,
    bob_chain,
    candidate_chains,
    chain_length,
    decode,
    delta_distance,
    encode,
    in_s1,
    make_scheme,
    s1_check,
    simulate,
)
from chaincolor.errors import (
    BottomCode,
    DecodeMismatch,
    DeltaViolated,
    DomainError,
    NoCandidate,
    SizeBudget,
    SupportMismatch,
    ZeroProbability,
)
from chaincolor.graph import is_proper

from helpers import perturb, random_distribution


def test_distribution_validation():
    with pytest.raises(ValueError):
        Distribution.of([0.5, 0.6])
    with pytest.raises(ValueError):
        Distribution.of([-0.1, 1.1])
    with pytest.raises(ValueError):
        Distribution.of([])
    u = Distribution.uniform(8)
    assert u.N == 8 and u.level(3) == 3.0
    assert Distribution.of([1.0, 0.0]).level(2) == math.inf


def test_delta_distance_examples():
    assert delta_distance(Distribution.of([0.5, 0.5]), Distribution.of([0.25, 0.75])) == pytest.approx(1.0)
    d = Distribution.of([1.0, 0.0])
    assert delta_distance(d, d) == 0.0
    with pytest.raises(SupportMismatch):
        delta_distance(Distribution.of([0.5, 0.5]), d)
    with pytest.raises(ValueError):
        delta_distance(Distribution.uniform(2), Distribution.uniform(3))


def test_chain_length():
    assert chain_length(2) == 1
    assert chain_length(4) == 3
    assert chain_length(16) == 5
    assert chain_length(17) == 7
    with pytest.raises(DomainError):
        chain_length(1)


def test_alice_chain_uniform():
    a = alice_chain(Distribution.uniform(4), 3, 0.0)
    assert a.alpha == 3 and a.f == 3
    assert a.sets == (0b1111,) * 3 and a.sz == 4


def test_alice_chain_widens_with_k():
    # levels 1, 2, 3, 4, 4
    P = Distribution.of([0.5, 0.25, 0.125, 0.0625, 0.0625])
    a = alice_chain(P, 2, 0.25)
    # f = 5; thresholds 1.5, 2, 2.5, ... around r = 2
    assert a.f == 5
    assert [bs.elements(x) for x in a.sets] == [(1, 2, 3)] + [(1, 2, 3, 4, 5)] * 4


def test_zero_probability():
    P = Distribution.of([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(ZeroProbability):
        alice_chain(P, 2, 0.0)


def test_single_support_message():
    P = Distribution.of([0.0, 1.0, 0.0, 0.0])
    code = encode(P, 2, 0.0, 1)
    assert not code.failed and code.r == 0
    assert decode(P, code, 0.0) == 2
    rep = simulate(P, P, 0.0, 1)
    assert rep.bottom_rate == 0.0 and rep.expected_bits == code.bits


def test_encode_bottom_iff_size_exceeds_s():
    P = Distribution.uniform(4)
    ok = encode(P, 3, 0.0, 4)
    assert not ok.failed and ok.s == 4 and ok.r == 2
    assert decode(P, ok, 0.0) == 3
    assert encode(P, 3, 0.0, 3).failed
    with pytest.raises(BottomCode):
        decode(P, Code.bottom(), 0.0)


def test_wire_format():
    assert Code.bottom().to_bytes() == b"\x00"
    c = Code(False, 4, 2, 300)
    raw = c.to_bytes()
    assert raw == b"\x01\x04\x02\xac\x02"
    assert Code.from_bytes(raw) == c
    assert c.bits == 40 and Code.bottom().bits == 8
    for bad in (b"", b"\x02", b"\x00\x00", b"\x01\x04\x02", raw + b"\x00", b"\x01\x80"):
        with pytest.raises(ValueError):
            Code.from_bytes(bad)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**40), st.integers(0, 2**40), st.integers(0, 2**40))
def test_wire_round_trip(s, r, color):
    c = Code(False, s, r, color)
    assert Code.from_bytes(c.to_bytes()) == c


def test_bob_chain_errors():
    Q = Distribution.of([0.5, 0.5, 0.0, 0.0])
    assert bob_anchors(Q, 1, 0.0) == [1, 2]
    with pytest.raises(NoCandidate):
        bob_chain(Q, 9, 0.0)
    with pytest.raises(NoCandidate):
        bob_chain(Q, 1, 0.0, w=3)


def test_in_s1_matches_definition():
    a = make_chain(4, 1, [{1, 2}, {1, 2, 3}, {1, 2, 3, 4}])
    assert in_s1(make_chain(4, 2, [{1, 2}, {1, 2, 3}]), a)
    assert not in_s1(make_chain(4, 3, [{1, 2, 3}, {1, 2, 3}]), a)
    assert not in_s1(make_chain(4, 1, [{1, 2}]), a)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 40), st.sampled_from([0.0, 0.3, 1.0, 2.5]))
def test_bob_chain_in_s1_for_every_anchor(seed, N, delta):
    rng = random.Random(seed)
    P = random_distribution(rng, N, support=rng.randint(1, N), spread=rng.choice([2.0, 6.0, 12.0]))
    Q = perturb(rng, P, delta)
    for m in range(1, N + 1):
        if P.p(m) <= 0:
            continue
        r = math.floor(-math.log2(P.p(m)))
        anchors = bob_anchors(Q, r, delta)
        assert m in anchors
        for w in anchors:
            assert s1_check(P, Q, m, delta, w)


def test_candidate_chains_full_enumeration_contains_alice():
    rng = random.Random(3)
    for _ in range(20):
        P = random_distribution(rng, 6, spread=4.0)
        Q = perturb(rng, P, 0.5)
        for m in range(1, 7):
            a = alice_chain(P, m, 0.5)
            b = bob_chain(Q, math.floor(-math.log2(P.p(m))), 0.5)
            got = list(candidate_chains(b, a.sz, frozenset(range(1, a.f + 1))))
            assert a in got
            assert all(in_s1(b, c) and c.sz <= a.sz for c in got)


@pytest.mark.parametrize("N,s", [(4, 3), (5, 4), (6, 3)])
def test_schemes_agree_on_small_universes(N, s):
    rng = random.Random(N)
    for _ in range(8):
        P = random_distribution(rng, N, spread=3.0)
        Q = perturb(rng, P, 0.4)
        results = {}
        for kind in ("identity", "greedy", "recursive"):
            sch = make_scheme(kind, N, s)
            out = []
            for m in range(1, N + 1):
                code = encode(P, m, 0.4, s, sch)
                out.append(None if code.failed else decode(Q, code, 0.4, sch))
            results[kind] = out
        assert results["identity"] == results["greedy"] == results["recursive"]
        assert all(x in (None, m) for m, x in enumerate(results["identity"], start=1))


def test_all_matches_unique():
    rng = random.Random(11)
    P = random_distribution(rng, 12, support=6, spread=4.0)
    Q = perturb(rng, P, 0.5)
    sch = make_scheme("recursive", 12, 6)
    hits = 0
    for m in range(1, 13):
        if P.p(m) <= 0:
            continue
        code = encode(P, m, 0.5, 6, sch)
        if code.failed:
            continue
        r = code.r
        for w in bob_anchors(Q, r, 0.5):
            assert decode(Q, code, 0.5, sch, w=w, all_matches=True) == [m]
            hits += 1
    assert hits > 0


def test_identity_scheme_palette():
    sch = IdentityScheme(8, 3)
    assert sch.palette == 8 and sch.depends == frozenset()


def test_greedy_scheme_cap():
    with pytest.raises(SizeBudget):
        GreedyConflictScheme(16, 4, cap=100)


def test_lazy_coloring_is_proper_and_matches_recursive():
    for m, R, k in [(4, 2, 1), (5, 2, 1), (4, 3, 1), (4, 2, 2)]:
        trace = []
        eager = color_U_recursive(m, R, k, trace=trace)
        lazy = LazyUColoring(m, R, k, r_levels=[s.r for s in trace])
        g = build_graph(GraphFamilySpec.U(m, R, k))
        colors = tuple(lazy.color(a) for a in g.labels)
        assert colors == eager.colors
        assert is_proper(g, eager)


def test_recursive_scheme_structure():
    sch = RecursiveChainScheme(16, 4)
    assert sch.f == 5 and sch.k == 2 and sch.depends == frozenset({2, 4})
    a = Chain(16, 1, (0b11, 0b111, 0b1111, 0b1111, 0b1111))
    assert sch.even_part(a) == Chain(16, 1, (0b111, 0b1111))
    assert 1 <= sch.color(a) <= sch.palette


def test_simulate_bottom_rate_extremes():
    P = Distribution.uniform(4)
    assert simulate(P, P, 0.0, 4).bottom_rate == 0.0
    assert simulate(P, P, 0.0, 3).bottom_rate == pytest.approx(1.0)


def test_simulate_bottom_rate_nonincreasing_in_s():
    rng = random.Random(8)
    P = random_distribution(rng, 12, support=7, spread=5.0)
    Q = perturb(rng, P, 0.5)
    rates = [simulate(P, Q, 0.5, s).bottom_rate for s in range(1, 8)]
    assert all(a >= b - 1e-12 for a, b in zip(rates, rates[1:]))
    assert rates[-1] == 0.0


def test_simulate_monte_carlo_deterministic():
    rng = random.Random(2)
    P = random_distribution(rng, 8, spread=3.0)
    Q = perturb(rng, P, 0.3)
    a = simulate(P, Q, 0.3, 5, exact=False, trials=200, seed=4)
    b = simulate(P, Q, 0.3, 5, exact=False, trials=200, seed=4)
    assert a == b and not a.exact and a.trials == 200
    ex = simulate(P, Q, 0.3, 5)
    assert abs(a.bottom_rate - ex.bottom_rate) < 0.2


def test_simulate_rejects_large_divergence():
    with pytest.raises(DeltaViolated):
        simulate(Distribution.of([0.5, 0.5]), Distribution.of([0.1, 0.9]), 0.5, 2)


def test_decode_mismatch_is_reported():
    class Constant:
        depends = frozenset()
        palette = 1

        def color(self, a):
            return 1

    P = Distribution.uniform(4)
    with pytest.raises(DecodeMismatch):
        simulate(P, P, 0.0, 4, scheme=Constant())
