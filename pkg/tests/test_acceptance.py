"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import math
import time

import numpy as np
import pytest

from gpaley.circulant import analyze_circulant, circulant_catalog
from gpaley.cohconf import brute_force_closure, graph_closure, twl_equivalent, verify_axioms
from gpaley.counting import mixed_sweep, residue_sweep
from gpaley.ffield import field_of_order, make_field
from gpaley.graphs import Graph, build_gpaley, rook_graph, shrikhande_graph, srg_params
from gpaley.identify import base_witness, check_pairwise_distinguishing
from gpaley.permgrp import aut_in_agammal, brute_force_automorphisms, iso_test

GRID_Q = (121, 169, 256)
GRID_K = (2, 3, 4)
GRID_T = (2, 3, 4)


@pytest.fixture
def report(capsys):
    def emit(number, ok, message, seconds):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[criterion {number}] {status} ({seconds:.1f}s): {message}")
    return emit


def grid_cells():
    for q in GRID_Q:
        for k in GRID_K:
            if (q - 1) % k == 0:
                for t in GRID_T:
                    yield q, k, t


def test_criterion_1_paley9_automorphisms(report):
    start = time.time()
    g = build_gpaley(make_field(3, 2), 2)
    brute = brute_force_automorphisms(g.adj)
    rep = aut_in_agammal(g)
    ok = (len(brute) == 72 and rep.passed and rep.details["aut_order"] == 72
          and rep.details["agammal_order"] == 144 and rep.details["index"] == 2)
    elapsed = time.time() - start
    report(1, ok and elapsed < 30, f"|Aut| brute={len(brute)} search={rep.details['aut_order']}, "
           f"index {rep.details['index']} in AGammaL(1,9)", elapsed)
    assert ok and elapsed < 30


def test_criterion_2_power_residue_bound(report):
    start = time.time()
    total = bad = 0
    for q, k, t in grid_cells():
        reps = residue_sweep(field_of_order(q), k, t, 1000, seed=0)
        total += len(reps)
        bad += sum(not r.passed for r in reps)
    elapsed = time.time() - start
    ok = bad == 0 and elapsed < 120
    report(2, ok, f"{total} systems, {bad} violations of q/k^t +- t*sqrt(q)", elapsed)
    assert ok


def test_criterion_3_mixed_bound_and_inclusion_exclusion(report):
    start = time.time()
    total = bad = ie_bad = 0
    for q, k, t in grid_cells():
        for n in range(t, 6):
            for mixed, ie in mixed_sweep(field_of_order(q), k, t, n, 500, seed=0):
                total += 1
                bad += not mixed.passed
                ie_bad += not ie.passed
    elapsed = time.time() - start
    ok = bad == 0 and ie_bad == 0 and elapsed < 120
    report(3, ok, f"{total} mixed systems, {bad} bound violations, {ie_bad} identity failures", elapsed)
    assert ok


def test_criterion_4_pairwise_distinguishing_in_regime(report):
    start = time.time()
    g = build_gpaley(make_field(41, 2), 2)
    rep = check_pairwise_distinguishing(g)
    elapsed = time.time() - start
    ok = rep.threshold_met and rep.passed and elapsed <= 600
    report(4, ok, f"GP(1681,840): {rep.details['pairs_checked']} pairs, "
           f"{len(rep.violations)} violations, threshold met={rep.threshold_met}", elapsed)
    assert rep.threshold_met
    assert not rep.hard_violation, rep.to_dict()
    assert ok


@pytest.fixture(scope="module")
def catalog_records():
    start = time.time()
    recs = [analyze_circulant(n, conn) for n, conn in circulant_catalog(20)]
    return recs, time.time() - start


def test_criterion_5_midrange_fixers(report, catalog_records):
    recs, elapsed = catalog_records
    nonnormal = [r for r in recs if not r["normal"]]
    bad = [r for r in nonnormal
           if r["fix_witness"] is None
           or not math.ceil(r["n"] / 2) <= r["fix_count"] <= 2 * r["n"] // 3]
    ok = not bad and elapsed < 300
    report(5, ok, f"{len(nonnormal)} non-normal circulants (n <= 20), {len(bad)} without a midrange fixer", elapsed)
    assert ok, bad[:3]


def test_criterion_6_two_point_witnesses(report, catalog_records):
    recs, elapsed = catalog_records
    normal = [r for r in recs if r["normal"]]
    bad = [r for r in normal if r["two_point_witness"] is None]
    ok = not bad and elapsed < 300
    report(6, ok, f"{len(normal)} normal circulants (n <= 20), {len(bad)} without a discrete 2-point extension", elapsed)
    assert ok, bad[:3]


def test_criterion_7_base_witnesses(report):
    cases = {
        "Paley(13)": (13, 1, 2),
        "Paley(25)": (5, 2, 2),
        "GP(13,4)": (13, 1, 3),
        "GP(16,5)": (2, 4, 3),
        "GP(25,8)": (5, 2, 3),
    }
    found, slow = {}, []
    start = time.time()
    for name, (p, d, k) in cases.items():
        t0 = time.time()
        found[name] = base_witness(build_gpaley(make_field(p, d), k))
        if time.time() - t0 >= 60:
            slow.append(name)
    elapsed = time.time() - start
    missing = [name for name, w in found.items() if w is None]
    ok = not missing and not slow
    summary = ", ".join(f"{name}={list(w) if w else None}" for name, w in found.items())
    report(7, ok, summary, elapsed)
    assert ok, f"no base witness for {missing}"


def test_criterion_8_shrikhande_rook(report):
    start = time.time()
    a, b = shrikhande_graph(), rook_graph(4)
    same = srg_params(a) == srg_params(b) == (16, 6, 2, 2)
    equiv = twl_equivalent(a, b)
    iso = iso_test(a, b)
    elapsed = time.time() - start
    ok = same and equiv and iso is None and elapsed < 60
    report(8, ok, f"twl_equivalent={equiv}, iso_test={'none' if iso is None else 'found'}", elapsed)
    assert ok


def _all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(2 ** len(pairs)):
        yield Graph.from_edges(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


def _wl_sound(g):
    cc = graph_closure(g)
    if not verify_axioms(cc).passed:
        return "axioms"
    if cc != brute_force_closure(g.n, [g.adj]):
        return "oracle"
    if brute_force_automorphisms(g.adj) != brute_force_automorphisms(cc.color):
        return "automorphisms"
    return None


def test_criterion_9_wl_soundness(report):
    start = time.time()
    rng = np.random.default_rng(2024)
    sample = []
    for _ in range(500):
        n = int(rng.integers(1, 9))
        upper = np.triu(rng.random((n, n)) < rng.random(), 1)
        sample.append(Graph(upper | upper.T))
    exhaustive = [g for n in range(1, 6) for g in _all_graphs(n)]
    failures = []
    for g in sample + exhaustive:
        why = _wl_sound(g)
        if why:
            failures.append((why, g.edges()))
    elapsed = time.time() - start
    ok = not failures and elapsed < 300
    report(9, ok, f"{len(sample)} random + {len(exhaustive)} exhaustive graphs, {len(failures)} failures", elapsed)
    assert ok, failures[:3]
