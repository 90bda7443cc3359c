"""Coherent configurations and 2-dimensional Weisfeiler-Leman refinement.

A configuration is stored as an ``n x n`` integer matrix whose entry
``(i, j)`` names the relation containing the pair.  Relation names are
canonical: at every refinement round the new name of a pair is the rank of
its signature among all signatures present, so two runs on isomorphic
inputs produce identical names.
"""

from __future__ import annotations

import json
from collections import Counter
from functools import cached_property

import numpy as np

from .report import CapExceededError, VerificationReport

MAX_POINTS = 400


def _ranks(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Canonical ranks of the rows of ``keys`` plus the sorted distinct rows and counts."""
    uniq, inv, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    return inv.reshape(-1), uniq, counts


def _initial_colors(color: np.ndarray) -> np.ndarray:
    """Rank pairs by (is-diagonal, colour, colour of the converse pair)."""
    n = color.shape[0]
    diag = np.eye(n, dtype=np.int64)
    keys = np.stack([diag.ravel(), color.ravel(), color.T.ravel()], axis=1)
    inv, _, _ = _ranks(keys)
    return inv.reshape(n, n)


def _signatures(c: np.ndarray) -> np.ndarray:
    """Rows: current colour of (i, j) followed by the sorted codes c(i,k)*N + c(k,j)."""
    n = c.shape[0]
    num = int(c.max()) + 1
    codes = c[:, None, :].astype(np.int64) * num + c.T[None, :, :]
    codes.sort(axis=2)
    return np.concatenate([c[:, :, None], codes], axis=2).reshape(n * n, n + 1)


def refine_step(c: np.ndarray):
    """One synchronous 2-WL round; returns (new colours, distinct signatures, counts)."""
    n = c.shape[0]
    inv, uniq, counts = _ranks(_signatures(c))
    return inv.reshape(n, n), uniq, counts


def stabilize(color: np.ndarray) -> np.ndarray:
    """Run 2-WL refinement from ``color`` to its fixed point."""
    color = np.asarray(color)
    n = color.shape[0]
    if n > MAX_POINTS:
        raise CapExceededError(f"{n} points exceeds the WL cap {MAX_POINTS}")
    if n == 0:
        return color.astype(np.int64)
    c = _initial_colors(color)
    while True:
        new, _, _ = refine_step(c)
        if new.max() == c.max():
            return new
        c = new


def same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff the two colour matrices induce the same partition of pairs."""
    a, b = np.asarray(a).ravel(), np.asarray(b).ravel()
    joint = len(np.unique(np.stack([a, b], axis=1), axis=0))
    return joint == len(np.unique(a)) == len(np.unique(b))


def refines(fine: np.ndarray, coarse: np.ndarray) -> bool:
    """True iff every class of ``fine`` lies inside a class of ``coarse``."""
    fine, coarse = np.asarray(fine).ravel(), np.asarray(coarse).ravel()
    joint = len(np.unique(np.stack([fine, coarse], axis=1), axis=0))
    return joint == len(np.unique(fine))


class CoherentConfiguration:
    """A partition of Omega x Omega given by a relation-index matrix.

    Instances produced by :func:`wl_closure` satisfy the coherence axioms;
    arbitrary partitions can be wrapped for checking with
    :func:`verify_axioms`.
    """

    def __init__(self, color):
        color = np.asarray(color, dtype=np.int64)
        if color.ndim != 2 or color.shape[0] != color.shape[1]:
            raise ValueError("colour matrix must be square")
        _, inv = np.unique(color, return_inverse=True)
        color = inv.reshape(color.shape).astype(np.int64)
        color.setflags(write=False)
        self.color = color

    @property
    def n(self) -> int:
        return self.color.shape[0]

    @property
    def num_relations(self) -> int:
        return int(self.color.max()) + 1 if self.n else 0

    def __repr__(self):
        return f"CoherentConfiguration(n={self.n}, relations={self.num_relations})"

    def __eq__(self, other):
        return (
            isinstance(other, CoherentConfiguration)
            and self.n == other.n
            and same_partition(self.color, other.color)
        )

    __hash__ = None

    def relation(self, s: int) -> list[tuple[int, int]]:
        i, j = np.nonzero(self.color == s)
        return list(zip(i.tolist(), j.tolist()))

    def converse(self, s: int) -> int:
        i, j = np.argwhere(self.color == s)[0]
        return int(self.color[j, i])

    @cached_property
    def tensor(self) -> dict[tuple[int, int, int], int]:
        """Nonzero intersection numbers c_{rs}^t, read off one pair per relation t.

        Only meaningful when the axioms hold; see :func:`verify_axioms`.
        """
        c = self.color
        out = {}
        for t in range(self.num_relations):
            a, b = np.argwhere(c == t)[0]
            for (r, s), v in Counter(zip(c[a].tolist(), c[:, b].tolist())).items():
                out[(r, s, t)] = v
        return out

    def to_dict(self) -> dict:
        tensor = [[r, s, t, v] for (r, s, t), v in sorted(self.tensor.items())]
        return {"n": self.n, "colors": self.color.tolist(), "tensor": tensor}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CoherentConfiguration":
        return cls(np.array(data["colors"], dtype=np.int64).reshape(data["n"], data["n"]))


def _relations_to_colors(n: int, relations) -> np.ndarray:
    """Colour each pair by its membership vector across the given relations."""
    color = np.zeros((n, n), dtype=np.int64)
    for bit, rel in enumerate(relations):
        mask = np.zeros((n, n), dtype=bool)
        if isinstance(rel, np.ndarray) and rel.shape == (n, n):
            mask = rel.astype(bool)
        else:
            for i, j in rel:
                if not (0 <= i < n and 0 <= j < n):
                    raise ValueError(f"pair {(i, j)} outside the point set")
                mask[i, j] = True
        color = color * 2 + mask
    return color


def wl_closure(n: int, relations) -> CoherentConfiguration:
    """Coherent closure of a family of binary relations on ``range(n)``.

    Each relation is an iterable of pairs or an ``n x n`` boolean matrix.
    """
    return CoherentConfiguration(stabilize(_relations_to_colors(n, relations)))


def graph_closure(g) -> CoherentConfiguration:
    """WL(X): the closure of the edge relation of graph ``g``."""
    return CoherentConfiguration(stabilize(g.adj.astype(np.int64)))


def verify_axioms(cc: CoherentConfiguration) -> VerificationReport:
    """Exhaustively check C1 (diagonal), C2 (converses) and C3 (constant counts)."""
    c = cc.color
    n = cc.n
    rep = VerificationReport("coherence_axioms", {"n": n, "relations": cc.num_relations})
    diag = np.eye(n, dtype=bool)
    shared = set(np.unique(c[diag]).tolist()) & set(np.unique(c[~diag]).tolist())
    if shared:
        s = min(shared)
        rep.witnesses = [{"axiom": "C1", "relation": s}]
        return rep
    pairs = np.stack([c.ravel(), c.T.ravel()], axis=1)
    uniq = np.unique(pairs, axis=0)
    if len(uniq) != cc.num_relations:
        s = next(int(v) for v, cnt in Counter(uniq[:, 0].tolist()).items() if cnt > 1)
        rep.witnesses = [{"axiom": "C2", "relation": s}]
        return rep
    sig = _signatures(c)[:, 1:]
    flat = c.ravel()
    for t in range(cc.num_relations):
        members = np.flatnonzero(flat == t)
        rows = sig[members]
        bad = np.flatnonzero((rows != rows[0]).any(axis=1))
        if len(bad):
            a, b = divmod(int(members[0]), n)
            x, y = divmod(int(members[bad[0]]), n)
            ca = Counter(zip(c[a].tolist(), c[:, b].tolist()))
            cx = Counter(zip(c[x].tolist(), c[:, y].tolist()))
            r, s = min(k for k in set(ca) | set(cx) if ca[k] != cx[k])
            rep.witnesses = [{
                "axiom": "C3", "r": r, "s": s, "t": t,
                "pairs": [[a, b], [x, y]], "counts": [ca[(r, s)], cx[(r, s)]],
            }]
            return rep
    rep.passed = True
    rep.details["tensor_entries"] = len(cc.tensor)
    return rep


def fibers(cc: CoherentConfiguration) -> list[list[int]]:
    """Diagonal colour classes, ordered by smallest point."""
    groups: dict[int, list[int]] = {}
    for i, col in enumerate(cc.color.diagonal().tolist()):
        groups.setdefault(col, []).append(i)
    return sorted(groups.values())


def is_discrete(cc: CoherentConfiguration) -> bool:
    return len(np.unique(cc.color.diagonal())) == cc.n


def is_homogeneous(cc: CoherentConfiguration) -> bool:
    return len(np.unique(cc.color.diagonal())) <= 1


def point_extension(cc: CoherentConfiguration, points) -> CoherentConfiguration:
    """Closure of S(cc) together with the singletons {(a, a)} for each listed point."""
    points = [int(a) for a in points]
    if len(set(points)) != len(points):
        raise ValueError("duplicate points in extension")
    if not points:
        return cc
    color = cc.color.copy()
    base = cc.num_relations
    for i, a in enumerate(points):
        if not 0 <= a < cc.n:
            raise ValueError(f"point {a} outside the point set")
        color[a, a] = base + i
    return CoherentConfiguration(stabilize(color))


def restrict(cc: CoherentConfiguration, delta) -> CoherentConfiguration:
    """The configuration induced on a union of fibers."""
    delta = sorted(int(a) for a in delta)
    dset = set(delta)
    for fib in fibers(cc):
        inside = dset.intersection(fib)
        if inside and len(inside) != len(fib):
            raise ValueError("subset is not a union of fibers")
    return CoherentConfiguration(cc.color[np.ix_(delta, delta)])


def intersection_number(cc: CoherentConfiguration, r: int, s: int, t: int) -> int:
    """c_{rs}^t = |a r ∩ b s*| for any (a, b) in t."""
    if not verify_axioms(cc).passed:
        raise ValueError("configuration violates the coherence axioms")
    return cc.tensor.get((r, s, t), 0)


def twl_equivalent(g1, g2) -> bool:
    """True iff 2-WL does not distinguish the two graphs.

    Both refinements run in lockstep; colour names are canonical ranks of
    signatures, so the graphs stay equivalent exactly when every round yields
    the same multiset of signatures.
    """
    if g1.n != g2.n:
        return False
    if sorted(g1.degrees().tolist()) != sorted(g2.degrees().tolist()):
        return False
    if g1.n == 0:
        return True
    c1 = _initial_colors(g1.adj.astype(np.int64))
    c2 = _initial_colors(g2.adj.astype(np.int64))
    if not (np.array_equal(g1.adj[c1 == 0], g2.adj[c2 == 0])
            and np.array_equal(np.bincount(c1.ravel()), np.bincount(c2.ravel()))):
        return False
    while True:
        n1, u1, k1 = refine_step(c1)
        n2, u2, k2 = refine_step(c2)
        if not (np.array_equal(u1, u2) and np.array_equal(k1, k2)):
            return False
        if n1.max() == c1.max():
            break
        c1, c2 = n1, n2
    return CoherentConfiguration(n1).tensor == CoherentConfiguration(n2).tensor


# -- independent oracle ----------------------------------------------------------

def brute_force_closure(n: int, relations) -> CoherentConfiguration:
    """Coherent closure by splitting one violating relation at a time.

    Pure-Python reference for cross-checking :func:`wl_closure` on small
    inputs: find the first relation breaking C2 or C3, split it by converse
    or by the full count profile, repeat until the partition satisfies all
    axioms.
    """
    col = {(i, j): (i == j,) for i in range(n) for j in range(n)}
    for rel in relations:
        members = set(map(tuple, np.argwhere(rel).tolist())) if isinstance(rel, np.ndarray) else set(rel)
        col = {p: c + (p in members,) for p, c in col.items()}
    points = range(n)
    while True:
        classes: dict = {}
        for p, c in col.items():
            classes.setdefault(c, []).append(p)
        split = None
        for c in sorted(classes):
            conv = {col[(j, i)] for i, j in classes[c]}
            if len(conv) > 1:
                split = (c, lambda i, j: col[(j, i)])
                break
        if split is None:
            for c in sorted(classes):
                profiles = {
                    (i, j): Counter((col[(i, k)], col[(k, j)]) for k in points)
                    for i, j in classes[c]
                }
                first = next(iter(profiles.values()))
                if any(pr != first for pr in profiles.values()):
                    # pairs with different profiles can never share a class
                    split = (c, lambda i, j, pr=profiles: tuple(sorted(pr[(i, j)].items())))
                    break
        if split is None:
            break
        c, key = split
        values = {p: key(*p) for p in classes[c]}
        for p, v in values.items():
            col[p] = c + (v,)
        # keep keys the same length so tuples stay comparable
        width = max(len(v) for v in col.values())
        col = {p: v + (-1,) * (width - len(v)) for p, v in col.items()}
    names = {v: t for t, v in enumerate(sorted(set(col.values()), key=repr))}
    mat = np.zeros((n, n), dtype=np.int64)
    for (i, j), c in col.items():
        mat[i, j] = names[c]
    return CoherentConfiguration(mat)
