import itertools

import pytest
from hypothesis import given, settings, strategies as st

from chaincolor import bitsets as bs
from chaincolor.chains import (
    Chain,
    GraphFamilySpec,
    build_graph,
    is_complete_hom,
    make_chain,
    phi_drop,
    phi_drop_hom,
    phi_image_of_neighborhood,
    rn_graph,
    s1_intersects,
    s1_members,
    u_adjacent,
    u_neighbor_projections,
    vertices,
)
from chaincolor.errors import AlphaMissing, EmptyChain, LengthMismatch, NotAVertex, NotNested, OutOfUniverse, SizeBudget
from chaincolor.graph import AdjGraph, HomMap


def test_make_chain_examples():
    a = make_chain(4, 1, [{1, 2}, {1, 2, 3}])
    assert a.f == 2 and a.sz == 3
    with pytest.raises(AlphaMissing):
        make_chain(4, 1, [{2, 3}])
    b = make_chain(4, 2, [{1, 2}, {1, 2}])
    assert b.sz == 2
    with pytest.raises(NotNested):
        make_chain(4, 1, [{1, 2}, {1, 3}])
    with pytest.raises(OutOfUniverse):
        make_chain(3, 1, [{1, 4}])
    with pytest.raises(OutOfUniverse):
        make_chain(3, 5, [])


def test_chain_text_round_trip():
    a = make_chain(6, 2, [{2, 5}, {1, 2, 5}])
    assert a.text() == "2|2,5|1,2,5"
    assert Chain.parse(a.text(), 6) == a
    assert Chain.parse("3", 4).f == 0


def test_s1_members_examples():
    assert s1_members(make_chain(2, 1, [{1, 2}])) == [Chain(2, 1, ()), Chain(2, 2, ())]
    assert s1_members(make_chain(1, 1, [{1}, {1}])) == [make_chain(1, 1, [{1}])]


def test_s1_count_with_nesting():
    # B_0 = {1}: B_1 ranges over the 8 sets between {1} and [4];
    # B_0 = {2}: B_1 must also contain 1, leaving 4 sets.
    members = s1_members(make_chain(4, 1, [{1, 2}, {1, 2, 3, 4}]))
    assert len(members) == 12
    assert len(set(members)) == 12


def test_s1_members_cap():
    with pytest.raises(SizeBudget):
        s1_members(make_chain(6, 1, [{1, 2}, set(range(1, 7)), set(range(1, 7))]), cap=5)


def _s1_brute(a: Chain) -> set:
    """All length f-1 chains over [m] passing the sandwich test, by full enumeration."""
    m, f = a.m, a.f
    subsets = list(range(1 << m))
    out = set()
    for b0 in range(1, m + 1):
        for sets in itertools.product(subsets, repeat=f - 1):
            try:
                b = Chain(m, b0, sets)
            except Exception:
                continue
            ok = all(
                (a.level(i - 1) if i else 0) & ~b.level(i) == 0 and b.level(i) & ~a.level(i + 1) == 0
                for i in range(f)
            )
            if ok:
                out.add(b)
    return out


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_s1_members_match_brute_force(data):
    m = data.draw(st.integers(1, 4))
    f = data.draw(st.integers(1, 3))
    alpha = data.draw(st.integers(1, m))
    sets, prev = [], bs.bit(alpha)
    for _ in range(f):
        prev |= data.draw(st.integers(0, (1 << m) - 1))
        sets.append(prev)
    a = Chain(m, alpha, tuple(sets))
    got = s1_members(a)
    assert got == sorted(got, key=Chain.key)
    assert set(got) == _s1_brute(a)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_s1_intersects_matches_enumeration(data):
    m = data.draw(st.integers(1, 4))
    f = data.draw(st.integers(1, 3))

    def draw_chain():
        alpha = data.draw(st.integers(1, m))
        sets, prev = [], bs.bit(alpha)
        for _ in range(f):
            prev |= data.draw(st.integers(0, (1 << m) - 1))
            sets.append(prev)
        return Chain(m, alpha, tuple(sets))

    a, b = draw_chain(), draw_chain()
    expect = bool(set(s1_members(a)) & set(s1_members(b)))
    assert s1_intersects(a, b) == expect == s1_intersects(b, a)


def test_s1_intersects_examples():
    a = make_chain(3, 1, [{1, 2}, {1, 2, 3}])
    assert s1_intersects(a, a)
    assert not s1_intersects(make_chain(2, 1, [{1}]), make_chain(2, 2, [{2}]))
    with pytest.raises(LengthMismatch):
        s1_intersects(a, make_chain(3, 1, [{1}]))


def test_doubling_witness_lies_in_both():
    # for adjacent <1, A_1> and <2, B_1>, the chain <1, {1,2}> lies in the S^1
    # sets of both doubled chains <1, A_1, A_1> and <2, B_1, B_1>
    a = make_chain(4, 1, [{1, 2, 4}])
    b = make_chain(4, 2, [{1, 2, 3}])
    assert u_adjacent(GraphFamilySpec.U(4, 3, 1), a, b)
    da = Chain(4, 1, (a.sets[0], a.sets[0]))
    db = Chain(4, 2, (b.sets[0], b.sets[0]))
    witness = make_chain(4, 1, [{1, 2}])
    assert witness in s1_members(da) and witness in s1_members(db)
    assert s1_intersects(da, db)


def test_u_adjacent_examples():
    spec = GraphFamilySpec.U(3, 2, 1)
    assert u_adjacent(spec, make_chain(3, 1, [{1, 2}]), make_chain(3, 2, [{1, 2}]))
    a = make_chain(3, 1, [{1}])
    assert not u_adjacent(spec, a, a)
    assert not u_adjacent(spec, a, make_chain(3, 2, [{2}]))
    with pytest.raises(NotAVertex):
        u_adjacent(spec, make_chain(3, 1, [{1, 2, 3}]), a)


def test_vertex_counts():
    for m in range(2, 6):
        g = build_graph(GraphFamilySpec.U(m, 3, 0))
        assert g.n == m and g.n_edges == m * (m - 1) // 2
    assert len(vertices(GraphFamilySpec.Y(5, 1))) == 30
    assert len(vertices(GraphFamilySpec.Z(6, 5, 1))) == 30
    g = build_graph(GraphFamilySpec.U(3, 1, 1))
    assert g.n == 3 and g.n_edges == 0


def test_family_sizes_forced():
    for a in vertices(GraphFamilySpec.W(8, 2, 1, 2)):
        assert [bs.popcount(s) for s in a.sets] == [2, 4]
    for a in vertices(GraphFamilySpec.Y(6, 2)):
        assert [bs.popcount(s) for s in a.sets] == [3, 5]
    for a in vertices(GraphFamilySpec.Z(7, 6, 2)):
        assert [bs.popcount(s) for s in a.sets] == [3, 6]
    for a in vertices(GraphFamilySpec.U(4, 2, 2)):
        assert a.sz <= 2


def test_spec_validation():
    with pytest.raises(ValueError):
        GraphFamilySpec.Z(6, 2, 1)
    with pytest.raises(ValueError):
        GraphFamilySpec.W(3, 2, 1, 2)
    with pytest.raises(ValueError):
        GraphFamilySpec.Y(2, 1)


def test_vertices_canonical_order():
    verts = vertices(GraphFamilySpec.U(4, 3, 2))
    assert verts == sorted(verts, key=Chain.key)
    assert len(set(verts)) == len(verts)


def test_size_budget():
    with pytest.raises(SizeBudget):
        vertices(GraphFamilySpec.U(6, 6, 2), size_budget=100)


@pytest.mark.parametrize("spec", [GraphFamilySpec.Y(5, 1), GraphFamilySpec.U(4, 3, 2), GraphFamilySpec.W(6, 2, 0, 2)])
def test_edges_match_pair_scan(spec):
    def rule(a, b):
        # written out from the definition, using element sets
        A = [{a.alpha}] + [set(bs.elements(x)) for x in a.sets]
        B = [{b.alpha}] + [set(bs.elements(x)) for x in b.sets]
        if a.alpha == b.alpha or a.alpha not in B[1] or b.alpha not in A[1]:
            return False
        return all(A[i] <= B[i + 1] and B[i] <= A[i + 1] for i in range(1, a.f))

    g = build_graph(spec)
    edges = {(i, j) for i, j in itertools.combinations(range(g.n), 2) if rule(g.labels[i], g.labels[j])}
    assert set(g.edges()) == edges
    assert all(u_adjacent(spec, g.labels[i], g.labels[j]) for i, j in edges)


def test_adjacency_symmetric_irreflexive():
    spec = GraphFamilySpec.U(4, 3, 2)
    verts = vertices(spec)
    for a in verts:
        assert not u_adjacent(spec, a, a)
        for b in verts[:40]:
            assert u_adjacent(spec, a, b) == u_adjacent(spec, b, a)


def test_phi_drop():
    assert phi_drop(make_chain(3, 1, [{1, 2}, {1, 2, 3}])) == make_chain(3, 1, [{1, 2}])
    assert phi_drop(make_chain(3, 1, [{1}])) == Chain(3, 1, ())
    with pytest.raises(EmptyChain):
        phi_drop(Chain(3, 1, ()))


@pytest.mark.parametrize("m,R,d", [(m, R, d) for m in range(1, 5) for R in range(1, 4) for d in (1, 2)])
def test_phi_drop_complete_on_U(m, R, d):
    phi = phi_drop_hom(GraphFamilySpec.U(m, R, d))
    assert phi.is_homomorphism()
    assert is_complete_hom(phi)


@pytest.mark.parametrize("spec", [GraphFamilySpec.Y(5, 1), GraphFamilySpec.Y(6, 2), GraphFamilySpec.Z(6, 4, 1),
                                  GraphFamilySpec.W(6, 2, 0, 2), GraphFamilySpec.W(8, 2, 1, 2)])
def test_phi_drop_complete_on_subfamilies(spec):
    assert is_complete_hom(phi_drop_hom(spec))


def test_neighbourhood_image_bound_U():
    for m in range(1, 6):
        for R in range(1, 5):
            for d in (1, 2):
                spec = GraphFamilySpec.U(m, R, d)
                g = build_graph(spec)
                for a in g.labels:
                    img = phi_image_of_neighborhood(spec, a)
                    assert len(img) <= 2 ** (2 * a.sz)
                    assert img == u_neighbor_projections(a, R)


def test_isolated_vertex_has_empty_image():
    spec = GraphFamilySpec.U(3, 1, 1)
    assert phi_image_of_neighborhood(spec, make_chain(3, 1, [{1}])) == set()


def test_rn_graph_examples():
    h, phi = rn_graph(AdjGraph.complete(2), 1)
    assert h.n == 4 and h.n_edges == 1
    (x, y), = h.edges()
    assert {h.labels[x], h.labels[y]} == {(0, (0, 1)), (1, (0, 1))}
    h, phi = rn_graph(AdjGraph.from_edges(3, []), 2)
    assert h.n == 3 and h.n_edges == 0


def test_rn_graph_projection_complete_and_bounded():
    g = AdjGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])
    for r in (1, 2, 3):
        h, phi = rn_graph(g, r)
        assert is_complete_hom(phi)
        for x in range(h.n):
            assert len(phi.neighbor_image(x)) <= r


def test_identity_complete_and_non_complete_map():
    g = AdjGraph.cycle(5)
    assert is_complete_hom(HomMap.identity(g))
    # a path folded onto an edge: a homomorphism that is not complete
    p = AdjGraph.path(4)
    k2 = AdjGraph.complete(2)
    fold = HomMap(p, k2, (0, 1, 0, 1))
    assert fold.is_homomorphism()
    assert not is_complete_hom(fold)
