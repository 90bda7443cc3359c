"""Simple undirected graphs and the constructions studied here.

A :class:`Graph` stores a dense boolean adjacency matrix.  Graphs built over
a field or a cyclic group carry that labeling: vertex ``i`` is the field
element (or residue mod n) with index ``i``.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .ffield import FiniteField, make_field, is_prime, multiplicative_order
from .report import CapExceededError

MAX_VERTICES = 10_000


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``field`` is set when vertices are field elements, ``cyclic`` when they
    are residues modulo n.  Both labelings identify vertex i with index i.
    """

    def __init__(self, adj, field: FiniteField | None = None, cyclic: bool = False):
        adj = np.array(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if adj.shape[0] > MAX_VERTICES:
            raise CapExceededError(f"{adj.shape[0]} vertices exceeds the cap {MAX_VERTICES}")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix is not symmetric")
        if adj.diagonal().any():
            raise ValueError("graph has loops")
        if field is not None and field.q != adj.shape[0]:
            raise ValueError("field labeling does not match the vertex count")
        adj.setflags(write=False)
        self.adj = adj
        self.field = field
        self.cyclic = cyclic

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.num_edges})"

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    __hash__ = None

    @classmethod
    def from_edges(cls, n: int, edges, **labels) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            adj[i, j] = adj[j, i] = True
        return cls(adj, **labels)

    @property
    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adj))
        return list(zip(i.tolist(), j.tolist()))

    def neighbors(self, v: int) -> list[int]:
        return np.flatnonzero(self.adj[v]).tolist()

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def is_regular(self) -> bool:
        deg = self.degrees()
        return bool(self.n == 0 or (deg == deg[0]).all())

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def relabel(self, perm) -> "Graph":
        """Image of the graph under the vertex map ``v -> perm[v]``."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        return Graph(self.adj[np.ix_(inv, inv)])

    def induced(self, vertices) -> "Graph":
        vertices = list(vertices)
        return Graph(self.adj[np.ix_(vertices, vertices)])

    def complement(self) -> "Graph":
        c = ~self.adj
        np.fill_diagonal(c, False)
        return Graph(c, field=self.field, cyclic=self.cyclic)

    def is_automorphism(self, perm) -> bool:
        perm = np.asarray(perm)
        return bool(np.array_equal(self.adj[np.ix_(perm, perm)], self.adj))

    # -- serialisation ---------------------------------------------------------

    def to_dimacs(self) -> str:
        lines = [f"p edge {self.n} {self.num_edges}"]
        lines += [f"e {i + 1} {j + 1}" for i, j in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "Graph":
        n, edges = None, []
        for line in text.splitlines():
            parts = line.split()
            if not parts or parts[0] == "c":
                continue
            if parts[0] == "p":
                n = int(parts[2])
            elif parts[0] == "e":
                edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        if n is None:
            raise ValueError("missing 'p edge' header")
        return cls.from_edges(n, edges)

    def to_dict(self) -> dict:
        if self.field is not None:
            labeling = {"type": "field", "field": self.field.to_dict()}
        elif self.cyclic:
            labeling = {"type": "cyclic", "n": self.n}
        else:
            labeling = None
        return {"n": self.n, "edges": [list(e) for e in self.edges()], "labeling": labeling}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        labeling = data.get("labeling") or {}
        field = None
        if labeling.get("type") == "field":
            field = FiniteField.from_dict(labeling["field"])
        return cls.from_edges(
            data["n"], data["edges"], field=field, cyclic=labeling.get("type") == "cyclic"
        )

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))


# -- constructions -------------------------------------------------------------

def cayley_graph_on_field(field: FiniteField, connection) -> Graph:
    """Cayley graph of the additive group of ``field`` with a symmetric connection set."""
    q = field.q
    if q > MAX_VERTICES:
        raise CapExceededError(f"q={q} exceeds the vertex cap {MAX_VERTICES}")
    mask = np.zeros(q, dtype=bool)
    mask[list(connection)] = True
    if mask[0]:
        raise ValueError("connection set contains 0")
    neg = field.sub_vec(0, np.arange(q))
    if not np.array_equal(mask, mask[neg]):
        raise ValueError("connection set is not closed under negation")
    adj = np.empty((q, q), dtype=bool)
    elems = np.arange(q)
    step = max(1, 2_000_000 // q)
    for lo in range(0, q, step):
        rows = elems[lo:lo + step]
        adj[lo:lo + step] = mask[field.sub_vec(rows[:, None], elems[None, :])]
    return Graph(adj, field=field)


def build_gpaley(field: FiniteField, k: int) -> Graph:
    """GP(q, (q-1)/k): x ~ y iff x - y lies in the index-k multiplicative subgroup."""
    q = field.q
    if k < 2:
        raise ValueError("k must be at least 2")
    if (q - 1) % k:
        raise ValueError(f"k={k} does not divide q-1={q - 1}")
    if q % 2 == 1 and ((q - 1) // k) % 2 == 1:
        raise ValueError(
            f"(q-1)/k = {(q - 1) // k} must be even when q is odd "
            "(otherwise the connection set is not closed under negation)"
        )
    return cayley_graph_on_field(field, field.residue_subgroup(k))


def check_vls_parameters(p: int, e: int, t: int) -> None:
    if not (is_prime(p) and is_prime(e)):
        raise ValueError("p and e must be primes")
    if e == 2:
        raise ValueError("e must be an odd prime (e != 2)")
    if e == p:
        raise ValueError("p and e must be distinct")
    if t < 1:
        raise ValueError("t must be a positive integer")
    if multiplicative_order(p, e) != e - 1:
        raise ValueError(f"p={p} is not a primitive root modulo e={e}")


def build_vls(p: int, e: int, t: int) -> Graph:
    """Van Lint-Schrijver graph: GP(q, (q-1)/e) with q = p^((e-1)t)."""
    check_vls_parameters(p, e, t)
    d = (e - 1) * t
    if p**d > MAX_VERTICES:
        raise CapExceededError(f"q={p}^{d} exceeds the vertex cap {MAX_VERTICES}")
    return build_gpaley(make_field(p, d), e)


def vls_summary(p: int, e: int, t: int, g: Graph | None = None) -> dict:
    """Compare the parity-based LS/NL prediction with the observed parameters.

    With n = sqrt(q), eps = (-1)^t and m = (q-1)/(e(n-eps)) the prediction is
    LS_m(n) or NL_m(n) by parity of t; the graph itself is classified from
    its actual SRG parameters and disagreement is flagged.
    """
    check_vls_parameters(p, e, t)
    q = p ** ((e - 1) * t)
    n = math.isqrt(q)
    eps = (-1) ** t
    m_pred = Fraction(q - 1, e * (n - eps))
    if g is None:
        g = build_vls(p, e, t)
    params = srg_params(g)
    cls = classify_ls_nl(params) if params else LatinClass("neither", None, None)
    return {
        "q": q,
        "n": n,
        "epsilon": eps,
        "predicted_m": m_pred,
        "predicted_m_integral": m_pred.denominator == 1,
        "srg": tuple(params) if params else None,
        "observed": cls.label,
        "agrees": m_pred.denominator == 1 and cls.m == m_pred and cls.n == n,
    }


def build_circulant(n: int, connection) -> Graph:
    """Circulant graph on Z_n: i ~ j iff (i - j) mod n is in the connection set."""
    conn = {int(c) for c in connection}
    if any(not 0 <= c < n for c in conn):
        raise ValueError("connection set must lie in Z_n")
    if 0 in conn:
        raise ValueError("connection set contains 0")
    if any((-c) % n not in conn for c in conn):
        raise ValueError("connection set is not closed under negation")
    mask = np.zeros(n, dtype=bool)
    mask[list(conn)] = True
    idx = np.arange(n)
    return Graph(mask[(idx[:, None] - idx[None, :]) % n], cyclic=True)


def cycle_graph(n: int) -> Graph:
    return build_circulant(n, {1, n - 1})


def complete_graph(n: int) -> Graph:
    return build_circulant(n, set(range(1, n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def rook_graph(n: int) -> Graph:
    """K_n x K_n: (a, b) ~ (c, d) iff exactly one coordinate agrees."""
    cells = [(a, b) for a in range(n) for b in range(n)]
    edges = [
        (i, j)
        for i, (a, b) in enumerate(cells)
        for j, (c, d) in enumerate(cells)
        if i < j and (a == c) != (b == d)
    ]
    return Graph.from_edges(n * n, edges)


def shrikhande_graph() -> Graph:
    """Cayley graph of Z_4 x Z_4 with connection set {±(1,0), ±(0,1), ±(1,1)}."""
    conn = {(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)}
    cells = [(a, b) for a in range(4) for b in range(4)]
    edges = [
        (i, j)
        for i, (a, b) in enumerate(cells)
        for j, (c, d) in enumerate(cells)
        if i < j and ((a - c) % 4, (b - d) % 4) in conn
    ]
    return Graph.from_edges(16, edges)


# -- structural queries ----------------------------------------------------------

def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        fresh = np.flatnonzero(g.adj[v] & ~seen)
        seen[fresh] = True
        queue.extend(fresh.tolist())
    return bool(seen.all())


class SRGParams(NamedTuple):
    n: int
    deg: int
    lam: int
    mu: int

    def feasible(self) -> bool:
        return self.deg * (self.deg - self.lam - 1) == (self.n - self.deg - 1) * self.mu


def srg_params(g: Graph) -> SRGParams | None:
    """(n, k, lambda, mu) if g is strongly regular, neither complete nor empty."""
    n = g.n
    if n < 2 or not g.is_regular():
        return None
    deg = int(g.degrees()[0])
    if deg == 0 or deg == n - 1:
        return None
    a = g.adj.astype(np.float64)
    common = np.rint(a @ a).astype(np.int64)
    off = ~np.eye(n, dtype=bool)
    lam = np.unique(common[g.adj])
    mu = np.unique(common[~g.adj & off])
    if len(lam) != 1 or len(mu) != 1:
        return None
    return SRGParams(n, deg, int(lam[0]), int(mu[0]))


class LatinClass(NamedTuple):
    kind: str  # "LS", "NL" or "neither"
    m: int | None
    n: int | None

    @property
    def label(self) -> str:
        return "neither" if self.kind == "neither" else f"{self.kind}({self.m},{self.n})"


def latin_square_params(m: int, n: int) -> SRGParams:
    return SRGParams(n * n, m * (n - 1), n - 2 + (m - 1) * (m - 2), m * (m - 1))


def negative_latin_square_params(m: int, n: int) -> SRGParams:
    return SRGParams(n * n, m * (n + 1), -n - 2 + (m + 1) * (m + 2), m * (m + 1))


def latin_matches(params: SRGParams) -> list[LatinClass]:
    """All LS/NL families containing the parameter set (both may match)."""
    v, k = params.n, params.deg
    n = math.isqrt(v)
    out = []
    if n < 1 or n * n != v:
        return out
    if n > 1 and k % (n - 1) == 0 and k // (n - 1) >= 1:
        m = k // (n - 1)
        if latin_square_params(m, n) == tuple(params):
            out.append(LatinClass("LS", m, n))
    if k % (n + 1) == 0 and k // (n + 1) >= 1:
        m = k // (n + 1)
        if negative_latin_square_params(m, n) == tuple(params):
            out.append(LatinClass("NL", m, n))
    return out


def classify_ls_nl(params: SRGParams) -> LatinClass:
    """LS(m, n), NL(m, n) or neither; LS is reported when both apply."""
    matches = latin_matches(SRGParams(*params))
    return matches[0] if matches else LatinClass("neither", None, None)


def is_hamming_parameters(params: SRGParams) -> bool:
    """True iff params are those of the Hamming graph H(2, n) (the n x n rook graph)."""
    n = math.isqrt(params.n)
    return n * n == params.n and tuple(params) == latin_square_params(2, n)
