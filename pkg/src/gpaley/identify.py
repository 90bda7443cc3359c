"""Vertex distinguishing, base-number witnesses and the 2-WL lower-bound mechanism."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from .cohconf import graph_closure, is_discrete, point_extension, twl_equivalent
from .ffield import FiniteField
from .graphs import (
    Graph,
    build_vls,
    cayley_graph_on_field,
    check_vls_parameters,
    classify_ls_nl,
    rook_graph,
    shrikhande_graph,
    srg_params,
)
from .permgrp import iso_test
from .report import VerificationReport, jsonable

EXHAUSTIVE_LIMIT = 200_000


def pairwise_threshold(k: int) -> float:
    """sqrt(q) must exceed this for every outside pair to be distinguished."""
    return 5 * k**3 / (k - 1)


def half_delta_threshold(k: int) -> float:
    """sqrt(q) must exceed this for the more-than-half statement."""
    return 10 * (2 * k**2 + k) * 2 ** (k**2 + 2 * k)


@dataclass
class DistinguishReport:
    q: int
    k: int
    statement: str  # "pairwise" or "half_delta"
    passed: bool
    threshold_met: bool
    violations: list = dc_field(default_factory=list)
    sample_stats: tuple[int, int] | None = None
    details: dict = dc_field(default_factory=dict)

    @property
    def hard_violation(self) -> bool:
        return self.threshold_met and not self.passed

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k": self.k,
            "statement": self.statement,
            "pass": self.passed,
            "threshold_met": self.threshold_met,
            "hard_violation": self.hard_violation,
            "violations": jsonable(self.violations),
            "sample_stats": jsonable(self.sample_stats),
            "details": jsonable(self.details),
        }


def gp_index(g: Graph) -> int:
    """k for a field-labelled GP(q, (q-1)/k)."""
    if g.field is None:
        raise ValueError("graph has no field labeling")
    deg = int(g.adj[0].sum())
    if deg == 0 or (g.n - 1) % deg:
        raise ValueError("graph is not a generalized Paley graph")
    return (g.n - 1) // deg


def delta_of_zero(g: Graph) -> list[int]:
    """Neighbourhood of the vertex labelled 0."""
    if g.field is None:
        raise ValueError("graph has no field labeling")
    return g.neighbors(0)


def distinguishes(g: Graph, a: int, b: int, c: int) -> bool:
    """a is adjacent to exactly one of b and c."""
    if b == c:
        raise ValueError("the two vertices must differ")
    return bool(g.adj[a, b] ^ g.adj[a, c])


def check_pairwise_distinguishing(g: Graph) -> DistinguishReport:
    """Every two distinct nonzero vertices outside Delta differ on Delta.

    Two vertices are undistinguished by Delta exactly when their adjacency
    rows restricted to Delta coincide, so it suffices to find repeated rows.
    """
    k = gp_index(g)
    delta = delta_of_zero(g)
    dset = set(delta)
    outside = [v for v in range(1, g.n) if v not in dset]
    rows = np.packbits(g.adj[np.ix_(outside, delta)], axis=1)
    _, inv, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
    inv = inv.reshape(-1)
    violations = []
    for cls in np.flatnonzero(counts > 1):
        members = [outside[i] for i in np.flatnonzero(inv == cls)]
        violations.extend(combinations(members, 2))
    violations.sort()
    met = math.sqrt(g.n) > pairwise_threshold(k)
    return DistinguishReport(
        g.n, k, "pairwise", not violations, met, [list(v) for v in violations],
        details={
            "pairs_checked": len(outside) * (len(outside) - 1) // 2,
            "delta_size": len(delta),
            "threshold": pairwise_threshold(k),
            "sqrt_q": math.sqrt(g.n),
        },
    )


def _disjoint_pair_sets(delta: list[int], k: int):
    """All sets of k pairwise disjoint 2-subsets of delta, each listed once."""
    def rec(avail, left):
        if left == 0:
            yield []
            return
        if len(avail) < 2 * left:
            return
        first, rest = avail[0], avail[1:]
        for i, b in enumerate(rest):
            for tail in rec(rest[:i] + rest[i + 1:], left - 1):
                yield [(first, b)] + tail
        # sets that leave `first` unused
        yield from rec(rest, left)
    yield from rec(list(delta), k)


def count_disjoint_pair_sets(m: int, k: int) -> int:
    if m < 2 * k:
        return 0
    return math.factorial(m) // (math.factorial(m - 2 * k) * 2**k * math.factorial(k))


def distinguishing_sets(g: Graph, pairs, delta) -> np.ndarray:
    """Row i: indicator over delta of the vertices distinguishing pairs[i]."""
    sub = g.adj[:, delta]
    return np.array([sub[a] ^ sub[b] for a, b in pairs])


def union_by_inclusion_exclusion(g: Graph, pairs, delta) -> int:
    """|A_1 ∪ ... ∪ A_k| as the alternating sum of intersection sizes."""
    sets = distinguishing_sets(g, pairs, delta)
    total = 0
    for r in range(1, len(pairs) + 1):
        for T in combinations(range(len(pairs)), r):
            total += (-1) ** (r + 1) * int(np.logical_and.reduce(sets[list(T)]).sum())
    return total


def check_half_delta(g: Graph, mode: str = "sampled", trials: int = 1000,
                     seed: int = 0) -> DistinguishReport:
    """For chosen sets S of k disjoint pairs in Delta, test |A_1 ∪ ... ∪ A_k| > |Delta|/2.

    ``mode`` is "exhaustive" (every S, when there are at most
    EXHAUSTIVE_LIMIT of them) or "sampled" (``trials`` uniform draws).
    """
    k = gp_index(g)
    delta = delta_of_zero(g)
    m = len(delta)
    if m < 2 * k:
        raise ValueError(f"|Delta| = {m} is smaller than 2k = {2 * k}")
    total = count_disjoint_pair_sets(m, k)
    if mode == "exhaustive" and total > EXHAUSTIVE_LIMIT:
        raise ValueError(f"{total} pair sets exceed the exhaustive limit {EXHAUSTIVE_LIMIT}")
    if mode == "exhaustive":
        family = _disjoint_pair_sets(delta, k)
    elif mode == "sampled":
        rng = np.random.default_rng([seed, g.n, k])

        def draws():
            for _ in range(trials):
                pick = rng.choice(m, size=2 * k, replace=False)
                yield [(delta[pick[2 * i]], delta[pick[2 * i + 1]]) for i in range(k)]
        family = draws()
    else:
        raise ValueError(f"unknown mode {mode!r}")
    sub = g.adj[:, delta]
    tried = successes = 0
    worst = None
    violations = []
    for S in family:
        a = np.array([x for x, _ in S])
        b = np.array([y for _, y in S])
        union = int((sub[a] ^ sub[b]).any(axis=0).sum())
        tried += 1
        if 2 * union > m:
            successes += 1
        elif len(violations) < 20:
            violations.append({"pairs": [list(p) for p in S], "union": union})
        worst = union if worst is None else min(worst, union)
    met = math.sqrt(g.n) > half_delta_threshold(k)
    return DistinguishReport(
        g.n, k, "half_delta", successes == tried, met, violations,
        (tried, successes),
        details={
            "mode": mode, "seed": seed if mode == "sampled" else None,
            "delta_size": m, "pair_sets_total": total,
            "min_union": worst, "threshold": half_delta_threshold(k),
            "success_fraction": successes / tried if tried else None,
        },
    )


def base_witness(g: Graph) -> tuple[int, int, int] | None:
    """First (0, a, b) with a < b in Delta whose 3-point extension of WL(g) is discrete."""
    cc = graph_closure(g)
    x0 = point_extension(cc, [0])
    delta = g.neighbors(0)
    for i, a in enumerate(delta):
        x0a = point_extension(x0, [a])
        for b in delta[i + 1:]:
            if is_discrete(point_extension(x0a, [b])):
                return 0, a, b
    return None


def delta_extension_discrete(g: Graph) -> VerificationReport:
    """Is the Delta-extension of WL(g)_0 discrete?"""
    delta = g.neighbors(0) if g.n else []
    x0 = point_extension(graph_closure(g), [0]) if g.n else graph_closure(g)
    y = point_extension(x0, delta)
    k = gp_index(g) if g.field is not None else None
    met = k is not None and k >= 2 and math.sqrt(g.n) > pairwise_threshold(k)
    return VerificationReport(
        "delta_extension_discrete",
        {"q": g.n, "k": k},
        passed=is_discrete(y),
        hard=met,
        details={"fibers": len(np.unique(y.color.diagonal())), "delta_size": len(delta)},
    )


def amorphic_srg(field: FiniteField, r: int, picks) -> Graph:
    """Cayley graph on GF(q)^+ whose connection set is a union of index-r cyclotomic classes."""
    q = field.q
    if math.isqrt(q) ** 2 != q:
        raise ValueError("field order must be a square")
    if r < 1 or (q - 1) % r:
        raise ValueError(f"r={r} does not divide q-1")
    if q % 2 == 1 and ((q - 1) // r) % 2 == 1:
        raise ValueError("cyclotomic classes are not symmetric (-1 not in the subgroup)")
    picks = list(picks)
    if len(set(picks)) != len(picks) or any(not 0 <= i < r for i in picks):
        raise ValueError("class indices must be distinct and in range(r)")
    classes = field.cyclotomic_classes(r)
    conn = set().union(*(classes[i] for i in picks)) if picks else set()
    return cayley_graph_on_field(field, conn)


def _pick_orbit_reps(r: int, m: int, p: int, limit: int):
    """m-subsets of Z_r up to shifts i -> i + 1 and Frobenius i -> p*i (mod r)."""
    seen = set()
    count = 0
    for combo in combinations(range(r), m):
        if combo in seen:
            continue
        orbit = set()
        frontier = [combo]
        while frontier:
            c = frontier.pop()
            if c in orbit:
                continue
            orbit.add(c)
            frontier.append(tuple(sorted((i + 1) % r for i in c)))
            frontier.append(tuple(sorted((p * i) % r for i in c)))
        seen |= orbit
        yield combo
        count += 1
        if count >= limit:
            return


def lower_bound_experiment(p: int, e: int, t: int, max_candidates: int = 2000) -> VerificationReport:
    """Look for an SRG with the parameters of VLS(p, e, t), non-isomorphic to it and 2-WL equivalent."""
    check_vls_parameters(p, e, t)
    X = build_vls(p, e, t)
    F = X.field
    q = F.q
    params = srg_params(X)
    n_sqrt = math.isqrt(q)
    eps = (-1) ** t
    rep = VerificationReport(
        "lower_bound", {"p": p, "e": e, "t": t, "q": q},
        hard=False,
        details={"srg": tuple(params), "class": classify_ls_nl(params).label,
                 "r_n_plus_eps": n_sqrt + eps, "r_n_minus_eps": n_sqrt - eps},
    )
    tried = []
    for r in range(2, q):
        if (q - 1) % r or (q % 2 == 1 and ((q - 1) // r) % 2 == 1):
            continue
        w = (q - 1) // r
        if params.deg % w:
            continue
        m = params.deg // w
        if m >= r:
            continue
        n_same = n_iso = 0
        for picks in _pick_orbit_reps(r, m, F.p, max_candidates):
            Y = amorphic_srg(F, r, picks)
            if srg_params(Y) != params:
                continue
            n_same += 1
            if iso_test(X, Y) is not None:
                n_iso += 1
                continue
            equivalent = twl_equivalent(X, Y)
            tried.append({"r": r, "m": m, "same_params": n_same, "isomorphic": n_iso})
            rep.witnesses = [{"r": r, "picks": list(picks), "twl_equivalent": equivalent}]
            rep.passed = equivalent
            rep.details["searched"] = tried
            return rep
        tried.append({"r": r, "m": m, "same_params": n_same, "isomorphic": n_iso})
    rep.details["searched"] = tried
    return rep


def twl_smoke_test() -> VerificationReport:
    """Shrikhande versus the 4x4 rook graph: same SRG parameters, 2-WL equivalent, non-isomorphic."""
    a, b = shrikhande_graph(), rook_graph(4)
    equivalent = twl_equivalent(a, b)
    iso = iso_test(a, b)
    return VerificationReport(
        "twl_smoke_test",
        {"graphs": ["shrikhande", "rook4x4"]},
        passed=equivalent and iso is None and srg_params(a) == srg_params(b),
        details={"srg": tuple(srg_params(a)), "twl_equivalent": equivalent,
                 "isomorphism": None if iso is None else list(iso)},
    )
