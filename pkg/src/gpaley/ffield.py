"""Finite fields GF(p^d) in a polynomial basis.

Elements are integers in ``[0, q)``: the element with coefficient vector
``(c_0, ..., c_{d-1})`` (low degree first) has index ``sum(c_i * p**i)``.
Index 0 is zero and index 1 is one.  For ``q <= TABLE_LIMIT`` multiplication
goes through log/antilog tables built on first use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

MAX_ORDER = 2**31
TABLE_LIMIT = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of n by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in (Z/nZ)^x; a must be coprime to n."""
    a %= n
    if n == 1:
        return 1
    x, k = a, 1
    while x != 1:
        x = x * a % n
        k += 1
        if k > n:
            raise ValueError(f"{a} is not invertible modulo {n}")
    return k


# -- polynomials over GF(p), coefficient lists low degree first ------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_mod(prod, m, p)


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    d = len(m) - 1
    if d <= 1:
        return d == 1
    if m[0] == 0:
        return False
    for deg in range(1, d // 2 + 1):
        for low in product(range(p), repeat=deg):
            if not _poly_mod(m, list(low) + [1], p):
                return False
    return True


class FiniteField:
    """GF(p^d) with a fixed monic irreducible modulus and primitive element.

    Instances are immutable once constructed; use :func:`make_field` for the
    canonical field of a given order.
    """

    def __init__(self, p: int, d: int, modulus: list[int], generator: int | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        if p**d > MAX_ORDER:
            raise ValueError(f"field order {p}^{d} exceeds the cap 2^31")
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree d")
        if not _is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = tuple(modulus)
        self._powers = [p**i for i in range(d)]
        if generator is None:
            generator = self._find_primitive()
        elif not self._is_primitive(generator):
            raise ValueError(f"element {generator} is not primitive")
        self.generator = generator

    def __repr__(self):
        return f"FiniteField(p={self.p}, d={self.d}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.d, self.modulus, self.generator)
            == (other.p, other.d, other.modulus, other.generator)
        )

    def __hash__(self):
        return hash((self.p, self.d, self.modulus, self.generator))

    # -- encoding ---------------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        """Coefficient vector of length d, low degree first."""
        out = []
        for _ in range(self.d):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_coeffs(self, coeffs) -> int:
        return sum((int(c) % self.p) * w for c, w in zip(coeffs, self._powers))

    def check(self, a) -> int:
        if isinstance(a, FieldElement):
            if a.field != self:
                raise ValueError("operand belongs to a different field")
            return a.index
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF({self.q})")
        return a

    def element(self, a: int) -> "FieldElement":
        return FieldElement(self, self.check(a))

    # -- scalar arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.d == 1:
            return (a + b) % p
        r, w = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            r += ((x + y) % p) * w
            w *= p
        return r

    def neg(self, a: int) -> int:
        p = self.p
        if self.d == 1:
            return (-a) % p
        r, w = 0, 1
        while a:
            a, x = divmod(a, p)
            r += ((-x) % p) * w
            w *= p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.d == 1:
            return a * b % self.p
        if self.q <= TABLE_LIMIT:
            exp, log = self._tables
            return int(exp[(log[a] + log[b]) % (self.q - 1)])
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self.d == 1:
            return pow(a, -1, self.p)
        if self.q <= TABLE_LIMIT:
            exp, log = self._tables
            return int(exp[(-log[a]) % (self.q - 1)])
        return self._poly_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        if a == 0:
            if e == 0:
                raise ValueError("0^0 is undefined")
            return 0
        if self.d == 1:
            return pow(a, e, self.p)
        if self.q <= TABLE_LIMIT:
            exp, log = self._tables
            return int(exp[(log[a] * e) % (self.q - 1)])
        return self._poly_pow(a, e)

    def frobenius(self, a: int, j: int) -> int:
        """a^(p^j) for 0 <= j < d."""
        if not 0 <= j < self.d:
            raise ValueError(f"Frobenius exponent {j} outside [0, {self.d})")
        if a == 0 or j == 0:
            return a
        return self.pow(a, self.p**j)

    def log(self, a: int) -> int:
        """Discrete logarithm to the fixed generator (table-backed fields only)."""
        if a == 0:
            raise ValueError("log of zero")
        if self.q > TABLE_LIMIT:
            raise ValueError("discrete log needs tables; field too large")
        return int(self._tables[1][a])

    def _poly_mul(self, a: int, b: int) -> int:
        return self.from_coeffs(
            _poly_mulmod(self.coeffs(a), self.coeffs(b), list(self.modulus), self.p)
        )

    def _poly_pow(self, a: int, e: int) -> int:
        m, p = list(self.modulus), self.p
        result, base = [1], _trim(self.coeffs(a))
        while e:
            if e & 1:
                result = _poly_mulmod(result, base, m, p)
            base = _poly_mulmod(base, base, m, p)
            e >>= 1
        return self.from_coeffs(result + [0] * (self.d - len(result)))

    def _is_primitive(self, g: int) -> bool:
        if not 0 < g < self.q:
            return False
        n = self.q - 1
        pw = (lambda a, e: pow(a, e, self.p)) if self.d == 1 else self._poly_pow
        if pw(g, n) != 1:
            return False
        return all(pw(g, n // r) != 1 for r in prime_factors(n))

    def _find_primitive(self) -> int:
        for g in range(1, self.q):
            if self._is_primitive(g):
                return g
        raise RuntimeError(f"no primitive element in GF({self.q})")

    # -- vectorised helpers -------------------------------------------------

    def _mul_matrix(self, c: int) -> np.ndarray:
        """Matrix over GF(p) of y -> c*y acting on coefficient vectors."""
        cols = []
        for i in range(self.d):
            basis = [0] * self.d
            basis[i] = 1
            cols.append(self.coeffs(self._poly_mul(c, self.from_coeffs(basis))))
        return np.array(cols, dtype=np.int64).T

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.q - 1
        if self.d == 1:
            exp = np.empty(n, dtype=np.int64)
            x = 1
            for i in range(n):
                exp[i] = x
                x = x * self.generator % self.p
        else:
            # exp[2^s + i] = exp[i] * g^(2^s), one linear map per doubling
            digits = np.zeros((1, self.d), dtype=np.int64)
            digits[0, 0] = 1
            step = self.generator
            while len(digits) < n:
                m = self._mul_matrix(step)
                digits = np.vstack([digits, digits @ m.T % self.p])
                step = self._poly_mul(step, step)
            exp = digits[:n] @ np.array(self._powers, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        log[exp] = np.arange(n)
        return exp, log

    @cached_property
    def digits(self) -> np.ndarray:
        """q x d array of coefficient vectors of all elements."""
        idx = np.arange(self.q, dtype=np.int64)
        return np.stack([(idx // w) % self.p for w in self._powers], axis=1)

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits) % self.p) @ np.array(self._powers, dtype=np.int64)

    def add_vec(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.d == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._powers:
            out += (((a // w) + (b // w)) % self.p) * w
        return out

    def sub_vec(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.d == 1:
            return (a - b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._powers:
            out += (((a // w) - (b // w)) % self.p) * w
        return out

    def mul_vec(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.d == 1:
            return a * b % self.p
        exp, log = self._tables
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    # -- subgroups ------------------------------------------------------------

    def residue_mask(self, k: int) -> np.ndarray:
        """Boolean indicator of the index-k subgroup of the multiplicative group."""
        if k < 1 or (self.q - 1) % k:
            raise ValueError(f"k={k} does not divide q-1={self.q - 1}")
        exp, _ = self._tables
        mask = np.zeros(self.q, dtype=bool)
        mask[exp[::k]] = True
        return mask

    def residue_subgroup(self, k: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.residue_mask(k)).tolist())

    def cyclotomic_classes(self, r: int) -> list[frozenset[int]]:
        """Cosets g^i * H (i = 0..r-1) of the index-r subgroup H."""
        if r < 1 or (self.q - 1) % r:
            raise ValueError(f"r={r} does not divide q-1={self.q - 1}")
        exp, _ = self._tables
        return [frozenset(exp[i::r].tolist()) for i in range(r)]

    # -- serialisation ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "modulus": list(self.modulus),
            "generator": self.generator,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteField":
        return cls(data["p"], data["d"], data["modulus"], data["generator"])

    @classmethod
    def from_json(cls, text: str) -> "FiniteField":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FieldElement:
    """An element of a specific field; supports the arithmetic operators."""

    field: FiniteField
    index: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed-field operands")
            return other.index
        return self.field.check(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.index, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.index, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.index, self._other(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.index, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.index, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.index))

    def __int__(self):
        return self.index


@lru_cache(maxsize=None)
def make_field(p: int, d: int = 1) -> FiniteField:
    """The canonical GF(p^d).

    The modulus is the monic irreducible polynomial whose lower coefficients
    have the smallest base-p index; the generator is the smallest primitive
    element index.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if d < 1:
        raise ValueError("extension degree must be >= 1")
    if p**d > MAX_ORDER:
        raise ValueError(f"field order {p}^{d} exceeds the cap 2^31")
    for low in range(p**d):
        coeffs = [(low // p**i) % p for i in range(d)] + [1]
        if _is_irreducible(coeffs, p):
            return FiniteField(p, d, coeffs)
    raise RuntimeError(f"no irreducible polynomial of degree {d} over GF({p})")


def field_of_order(q: int) -> FiniteField:
    """make_field for a prime power q."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = prime_factors(q)
    if len(p) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = p[0]
    d, r = 0, q
    while r > 1:
        r //= p
        d += 1
    return make_field(p, d)


_OPS = {"add", "sub", "mul", "inv", "neg"}


def arith(field: FiniteField, op: str, a, b=None) -> int:
    """Apply one of add/sub/mul/inv/neg to element indices or FieldElements."""
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    a = field.check(a)
    if op in ("inv", "neg"):
        return field.inv(a) if op == "inv" else field.neg(a)
    if b is None:
        raise ValueError(f"{op} needs two operands")
    return getattr(field, op)(a, field.check(b))
