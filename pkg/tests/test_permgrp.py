import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_graph
from gpaley.ffield import make_field
from gpaley.graphs import (
    build_circulant,
    build_gpaley,
    build_vls,
    complete_graph,
    cycle_graph,
    Graph,
    rook_graph,
    shrikhande_graph,
)
from gpaley.permgrp import (
    PermGroup,
    agammal_decompose,
    agammal_map,
    agammal_order,
    aut_in_agammal,
    brute_force_automorphisms,
    cycles,
    fixed_points,
    graph_automorphisms,
    identity,
    inverse,
    is_identity,
    iso_test,
    mul,
)
from gpaley.report import CapExceededError


def test_permutation_helpers():
    p = (1, 2, 0, 3)
    assert mul(p, inverse(p)) == identity(4)
    assert is_identity(mul(inverse(p), p))
    assert fixed_points(p) == {3}
    assert cycles(p) == [(0, 1, 2)]
    # mul(p, q) applies p first
    q = (0, 1, 3, 2)
    assert mul(p, q)[0] == q[p[0]]


def test_symmetric_and_alternating_orders():
    for n in range(2, 8):
        S = PermGroup(n, [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])])
        assert S.order() == math.factorial(n)
    three_cycles = [tuple([1, 2, 0] + list(range(3, 6))), tuple([0, 2, 3, 1, 4, 5]), (0, 1, 3, 4, 2, 5), (0, 1, 2, 4, 5, 3)]
    assert PermGroup(6, three_cycles).order() == 360


def test_membership_and_stabilizer():
    D = PermGroup(6, [tuple((i + 1) % 6 for i in range(6)), tuple((-i) % 6 for i in range(6))])
    assert D.order() == 12
    assert D.contains(tuple((2 - i) % 6 for i in range(6)))
    assert not D.contains((1, 0, 2, 3, 4, 5))
    assert D.stabilizer(0).order() == 2
    assert D.orbits() == [[0, 1, 2, 3, 4, 5]]
    assert len(list(D.elements())) == 12


def test_generator_degree_checked():
    with pytest.raises(ValueError):
        PermGroup(3, [(1, 0)])


@pytest.mark.parametrize("graph,order", [
    (cycle_graph(5), 10),
    (complete_graph(4), 24),
    (rook_graph(4), 1152),
    (shrikhande_graph(), 192),
])
def test_known_automorphism_orders(graph, order):
    assert graph_automorphisms(graph).order() == order


def test_paley_orders():
    assert graph_automorphisms(build_gpaley(make_field(3, 2), 2)).order() == 72
    assert graph_automorphisms(build_gpaley(make_field(13), 2)).order() == 78
    assert graph_automorphisms(build_gpaley(make_field(13), 3)).order() == 52
    assert graph_automorphisms(build_gpaley(make_field(5, 2), 2)).order() == 600


def test_empty_graph_has_full_symmetric_group():
    g = Graph(np.zeros((20, 20), dtype=bool))
    assert graph_automorphisms(g).order() == math.factorial(20)


def test_cap():
    g = Graph(np.zeros((30, 30), dtype=bool))
    with pytest.raises(CapExceededError):
        graph_automorphisms(g, cap=20)


def test_iso_test():
    assert iso_test(shrikhande_graph(), rook_graph(4)) is None
    g = build_gpaley(make_field(13), 2)
    perm = list(range(13))
    random.Random(3).shuffle(perm)
    h = g.relabel(perm)
    p = iso_test(g, h)
    assert p is not None
    assert np.array_equal(h.adj[np.ix_(p, p)], g.adj)
    assert iso_test(cycle_graph(5), cycle_graph(6)) is None


def test_agammal_maps():
    F = make_field(3, 2)
    assert agammal_order(F) == 144
    m = agammal_map(F, 4, 2, 1)
    assert agammal_decompose(F, m) == (4, 2, 1)
    assert agammal_decompose(F, (1, 0) + tuple(range(2, 9))) is None
    with pytest.raises(ValueError):
        agammal_map(F, 0, 1, 0)


def test_aut_in_agammal():
    rep = aut_in_agammal(build_gpaley(make_field(3, 2), 2))
    assert rep.passed and rep.details["index"] == 2
    rep = aut_in_agammal(build_gpaley(make_field(13), 2))
    assert rep.passed and rep.details["aut_order"] == 78
    # the Clebsch graph has more automorphisms than AGammaL(1,16)
    rep = aut_in_agammal(build_vls(2, 3, 2))
    assert not rep.passed and rep.details["aut_order"] == 1920
    with pytest.raises(ValueError):
        aut_in_agammal(cycle_graph(5))


def test_search_matches_brute_force(rng):
    for _ in range(40):
        n = int(rng.integers(1, 8))
        g = random_graph(rng, n, float(rng.random()))
        brute = brute_force_automorphisms(g.adj)
        G = graph_automorphisms(g)
        assert G.order() == len(brute)
        assert all(G.contains(h) for h in brute)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 24), st.data())
def test_orbit_stabilizer(n, data):
    conn = data.draw(st.sets(st.integers(1, n // 2)))
    g = build_circulant(n, {c for x in conn for c in (x, n - x)})
    G = graph_automorphisms(g)
    for v in (0, n // 2):
        assert len(G.orbit(v)) * G.stabilizer(v).order() == G.order()
    assert all(g.is_automorphism(h) for h in G.generators)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(range(6)), min_size=1, max_size=3), st.data())
def test_sift_accepts_products(gens, data):
    gens = [tuple(g) for g in gens]
    G = PermGroup(6, gens)
    word = data.draw(st.lists(st.sampled_from(gens), min_size=1, max_size=6))
    prod = identity(6)
    for g in word:
        prod = mul(prod, g)
    assert G.contains(prod)
    assert G.order() % len(G.orbit(0)) == 0
