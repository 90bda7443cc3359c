"""Circulant graphs: Cayley schemes, normality, fixed-point and 2-point extension witnesses.

A circulant is *normal* when the stabilizer of 0 in its automorphism group
consists of multiplications x -> m*x by units of Z_n.  Non-normal circulants
must have an automorphism fixing between n/2 and 2n/3 vertices; schemes of
normal circulants must become discrete after individualizing two points.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .cohconf import (
    CoherentConfiguration,
    graph_closure,
    is_discrete,
    is_homogeneous,
    point_extension,
)
from .graphs import Graph, build_circulant
from .permgrp import (
    MAX_AUT_DEGREE,
    Permutation,
    PermGroup,
    fixed_points,
    graph_automorphisms,
)

EXHAUSTIVE_ORDER = 10**6


@dataclass
class CayleyScheme:
    n: int
    cc: CoherentConfiguration
    basic_sets: list[frozenset[int]]


def is_translation_invariant(g: Graph) -> bool:
    n = g.n
    idx = np.arange(n)
    return bool(np.array_equal(g.adj, g.adj[0][(idx[None, :] - idx[:, None]) % n]))


def cayley_scheme(g: Graph) -> CayleyScheme:
    """WL(g) for a circulant g together with its basic sets (first one is {0})."""
    if not is_translation_invariant(g):
        raise ValueError("graph is not invariant under the translations of Z_n")
    cc = graph_closure(g)
    if not is_homogeneous(cc):
        raise AssertionError("closure of a circulant must be homogeneous")
    row = cc.color[0].tolist()
    groups: dict[int, set[int]] = {}
    for x, s in enumerate(row):
        groups.setdefault(s, set()).add(x)
    basic = sorted((frozenset(b) for b in groups.values()), key=min)
    return CayleyScheme(g.n, cc, basic)


def _is_multiplier(p: Permutation, n: int) -> bool:
    m = p[1 % n] if n > 1 else 0
    return math.gcd(m, n) == 1 and all(p[x] == (m * x) % n for x in range(n))


def is_normal_circulant(g: Graph, group: PermGroup | None = None,
                        cap: int = MAX_AUT_DEGREE) -> bool:
    """True iff Aut(g)_0 lies in Aut(Z_n), i.e. consists of maps x -> m*x."""
    if not is_translation_invariant(g):
        raise ValueError("graph is not a circulant in its Z_n labeling")
    G = group if group is not None else graph_automorphisms(g, cap)
    return all(_is_multiplier(h, g.n) for h in G.stabilizer(0).generators)


def _midrange(n: int) -> tuple[int, int]:
    return -(-n // 2), (2 * n) // 3


def _stabilizer_descent(G: PermGroup, ok, rng: random.Random, budget: int = 400):
    """Walk down pointwise stabilizers looking for an element with few enough fixed points.

    Elements of the stabilizer of a set F fix F and usually little else, so
    growing F moves the typical fixed-point count upward in steps.
    """
    n = G.n
    lo, hi = _midrange(n)
    seen = set()
    stack = [G]
    nodes = 0
    while stack and nodes < budget:
        H = stack.pop()
        if not H.generators:
            continue
        fixed = set(range(n))
        for h in H.generators:
            fixed &= fixed_points(h)
        key = frozenset(fixed)
        if key in seen or len(fixed) > hi:
            continue
        seen.add(key)
        nodes += 1
        for h in H.generators:
            if ok(h):
                return h
        for _ in range(20):
            h = H.random_element(rng)
            if ok(h):
                return h
        moved = sorted(set(range(n)) - fixed)
        # push in reverse so the smallest point is explored first
        for x in reversed(moved):
            stack.append(H.stabilizer(x))
    return None


def midrange_fix_witness(g: Graph, group: PermGroup | None = None, seed: int = 0,
                         cap: int = MAX_AUT_DEGREE) -> Permutation | None:
    """An automorphism of a non-normal circulant fixing between n/2 and 2n/3 vertices.

    Returns None only after the group has been searched without success,
    which would contradict the fixed-point bound for non-normal circulants.
    """
    G = group if group is not None else graph_automorphisms(g, cap)
    if is_normal_circulant(g, G):
        raise ValueError("graph is a normal circulant")
    n = g.n
    lo, hi = _midrange(n)

    def ok(p):
        return lo <= len(fixed_points(p)) <= hi

    for h in G.generators:
        if ok(h):
            return h
    rng = random.Random(seed)
    for _ in range(200):
        h = G.random_element(rng)
        if ok(h):
            return h
    h = _stabilizer_descent(G, ok, rng)
    if h is not None:
        return h
    if G.order() <= EXHAUSTIVE_ORDER:
        for h in G.elements():
            if ok(h):
                return h
    return None


def two_point_discrete_witness(sch: CayleyScheme | CoherentConfiguration) -> tuple[int, int] | None:
    """First pair (a, b) whose 2-point extension is discrete.

    Cayley schemes are translation invariant, so a = 0 suffices there.
    """
    cc = sch.cc if isinstance(sch, CayleyScheme) else sch
    n = cc.n
    alphas = [0] if isinstance(sch, CayleyScheme) else range(n)
    for a in alphas:
        ya = point_extension(cc, [a])
        for b in range(n):
            if b != a and is_discrete(point_extension(ya, [b])):
                return a, b
    return None


# -- catalog ----------------------------------------------------------------------

def canonical_connection_set(n: int, conn) -> tuple[int, ...]:
    """Lexicographically least image of conn under multiplication by units of Z_n."""
    conn = sorted(conn)
    best = tuple(conn)
    for m in range(2, n):
        if math.gcd(m, n) == 1:
            best = min(best, tuple(sorted(m * c % n for c in conn)))
    return best


def circulant_catalog(max_n: int, min_n: int = 2):
    """All symmetric connection sets of Z_n (min_n <= n <= max_n) up to S ~ mS."""
    out = []
    for n in range(min_n, max_n + 1):
        classes = [{x, n - x} for x in range(1, n // 2 + 1)]
        found = set()
        for mask in range(2 ** len(classes)):
            conn = set()
            for i, cls in enumerate(classes):
                if mask >> i & 1:
                    conn |= cls
            found.add(canonical_connection_set(n, conn))
        out.extend((n, c) for c in sorted(found))
    return out


def analyze_circulant(n: int, conn, seed: int = 0) -> dict:
    """One catalog record: normality and whichever witness applies."""
    g = build_circulant(n, conn)
    G = graph_automorphisms(g)
    normal = is_normal_circulant(g, G)
    rec = {
        "n": n,
        "connection_set": sorted(conn),
        "normal": normal,
        "aut_order": G.order(),
        "fix_witness": None,
        "fix_count": None,
        "two_point_witness": None,
    }
    if normal:
        w = two_point_discrete_witness(cayley_scheme(g))
        rec["two_point_witness"] = list(w) if w else None
    else:
        w = midrange_fix_witness(g, G, seed)
        if w is not None:
            rec["fix_witness"] = list(w)
            rec["fix_count"] = len(fixed_points(w))
    rec["ok"] = rec["two_point_witness"] is not None if normal else rec["fix_witness"] is not None
    return rec
