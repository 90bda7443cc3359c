"""Exact solution counts for power-residue systems over GF(q).

A system asks for x with (a + x)^((q-1)/k) = 1 for every a in ``equalities``
and (a + x)^((q-1)/k) != 1 for every a in ``inequalities``.  Counts are
obtained by enumerating all of GF(q); the bounds being tested are the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .ffield import FiniteField
from .report import VerificationReport


@dataclass(frozen=True)
class PowerSystem:
    field: FiniteField
    k: int
    equalities: tuple[int, ...] = ()
    inequalities: tuple[int, ...] = ()

    def __post_init__(self):
        q = self.field.q
        if self.k < 1 or (q - 1) % self.k:
            raise ValueError(f"k={self.k} does not divide q-1={q - 1}")
        object.__setattr__(self, "equalities", tuple(int(a) for a in self.equalities))
        object.__setattr__(self, "inequalities", tuple(int(a) for a in self.inequalities))
        alphas = self.equalities + self.inequalities
        if any(not 0 <= a < q for a in alphas):
            raise ValueError("coefficients must be field elements")
        if len(set(alphas)) != len(alphas):
            raise ValueError("coefficients must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.equalities) + len(self.inequalities)

    @property
    def t(self) -> int:
        return len(self.equalities)


def _in_subgroup_rows(field: FiniteField, k: int, alphas) -> np.ndarray:
    """Row i: for every x, whether alpha_i + x lies in the index-k subgroup."""
    mask = field.residue_mask(k)
    xs = np.arange(field.q)
    alphas = np.asarray(list(alphas), dtype=np.int64).reshape(-1, 1)
    return mask[field.add_vec(alphas, xs[None, :])]


def count_solutions(sys: PowerSystem) -> int:
    """Number of x in GF(q) satisfying every equality and inequality of ``sys``."""
    ok = np.ones(sys.field.q, dtype=bool)
    if sys.equalities:
        ok &= _in_subgroup_rows(sys.field, sys.k, sys.equalities).all(axis=0)
    if sys.inequalities:
        ok &= ~_in_subgroup_rows(sys.field, sys.k, sys.inequalities).any(axis=0)
    return int(ok.sum())


def residue_bounds(q: int, k: int, t: int) -> tuple[float, float]:
    main = q / k**t
    return main - t * math.sqrt(q), main + t * math.sqrt(q)


def verify_residue_bound(field: FiniteField, k: int, alphas) -> VerificationReport:
    """Check q/k^t - t*sqrt(q) <= N <= q/k^t + t*sqrt(q) for t >= 2 equations."""
    alphas = tuple(int(a) for a in alphas)
    t = len(alphas)
    if t < 2:
        raise ValueError("need at least two coefficients")
    if k < 2:
        raise ValueError("k must be at least 2")
    N = count_solutions(PowerSystem(field, k, alphas))
    lower, upper = residue_bounds(field.q, k, t)
    margin = min(N - lower, upper - N)
    return VerificationReport(
        "residue_bound",
        {"q": field.q, "k": k, "t": t, "n": t, "alphas": list(alphas)},
        passed=lower <= N <= upper,
        margin=margin,
        hard=True,
        details={"N": N, "lower": lower, "upper": upper},
    )


def verify_mixed_bound(sys: PowerSystem) -> VerificationReport:
    """Check |N - q k^-t (1 - 1/k)^(n-t)| <= n 2^((n-t)^2) sqrt(q)."""
    n, t, k, q = sys.n, sys.t, sys.k, sys.field.q
    if n < 2 or not 2 <= t <= n:
        raise ValueError("need n >= 2 and 2 <= t <= n")
    N = count_solutions(sys)
    main = q * (1 / k) ** t * (1 - 1 / k) ** (n - t)
    err = n * 2 ** ((n - t) ** 2) * math.sqrt(q)
    details = {"N": N, "main": main, "error_bound": err,
               "lower": max(0.0, main - err), "upper": min(float(q), main + err)}
    if n == t:
        details["equalities_only_error_bound"] = t * math.sqrt(q)
    return VerificationReport(
        "mixed_bound",
        {"q": q, "k": k, "t": t, "n": n,
         "equalities": list(sys.equalities), "inequalities": list(sys.inequalities)},
        passed=abs(N - main) <= err,
        margin=err - abs(N - main),
        hard=True,
        details=details,
    )


def inclusion_exclusion_check(field: FiniteField, k: int, alphas, T) -> VerificationReport:
    """Check N_0(T) = sum over U of N(T ∪ U) exactly.

    N_0(T) counts solutions of the equalities indexed by T alone; N(T ∪ U)
    adds equalities for U and inequalities for the remaining coefficients.
    """
    alphas = tuple(int(a) for a in alphas)
    T = tuple(int(a) for a in T)
    if not T:
        raise ValueError("T must be nonempty")
    if not set(T) <= set(alphas):
        raise ValueError("T must be a subset of the coefficients")
    rest = [a for a in alphas if a not in T]
    n0 = count_solutions(PowerSystem(field, k, T))
    terms = []
    for r in range(len(rest) + 1):
        for U in combinations(rest, r):
            ineq = tuple(a for a in rest if a not in U)
            terms.append(count_solutions(PowerSystem(field, k, T + U, ineq)))
    total = sum(terms)
    return VerificationReport(
        "inclusion_exclusion",
        {"q": field.q, "k": k, "alphas": list(alphas), "T": list(T)},
        passed=total == n0,
        margin=0.0 if total == n0 else -abs(total - n0),
        hard=True,
        details={"N0": n0, "sum": total, "terms": terms},
    )


def random_alphas(rng: np.random.Generator, q: int, n: int) -> tuple[int, ...]:
    return tuple(int(a) for a in rng.choice(q, size=n, replace=False))


def residue_sweep(field: FiniteField, k: int, t: int, trials: int, seed: int = 0):
    """Reports for ``trials`` random t-tuples of distinct coefficients."""
    rng = np.random.default_rng([seed, field.q, k, t])
    return [verify_residue_bound(field, k, random_alphas(rng, field.q, t)) for _ in range(trials)]


def mixed_sweep(field: FiniteField, k: int, t: int, n: int, trials: int, seed: int = 0):
    """(mixed-bound report, inclusion-exclusion report) pairs for random systems."""
    rng = np.random.default_rng([seed, field.q, k, t, n])
    out = []
    for _ in range(trials):
        alphas = random_alphas(rng, field.q, n)
        sys = PowerSystem(field, k, alphas[:t], alphas[t:])
        out.append((verify_mixed_bound(sys), inclusion_exclusion_check(field, k, alphas, alphas[:t])))
    return out


def sweep_record(rep: VerificationReport) -> dict:
    """Flat JSON-lines record for one bound check."""
    p, dt = rep.params, rep.details
    return {
        "q": p["q"], "k": p["k"], "t": p["t"], "n": p["n"],
        "alphas": p.get("alphas", p.get("equalities", []) + p.get("inequalities", [])),
        "N": dt["N"], "lower": dt["lower"], "upper": dt["upper"],
        "margin": rep.margin, "pass": rep.passed,
    }
