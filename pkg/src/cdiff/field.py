"""Explicit construction of GF(p^n) and element arithmetic.

Elements are identified by a canonical index: the base-p evaluation of the
coefficient vector of their residue modulo the field polynomial, constant
term least significant.  Index 0 is zero and index 1 is one.  The index
ordering is part of every exported table.

For q <= TABLE_LIMIT the field precomputes exponent/log tables relative to the
smallest primitive element, which makes both scalar multiplication and the
vectorised array operations used by the sweeps O(1) per element.  Larger
fields fall back to polynomial arithmetic and only support scalar use.
"""
from __future__ import annotations

import functools
import math
import re
from typing import NamedTuple

import numpy as np

from . import gfpoly
from .errors import (
    CharTwo,
    DegreeMismatch,
    DivisionByZero,
    ExcludedPoint,
    FieldMismatch,
    NonPrimeP,
    ReducibleModulus,
    SpecParseError,
    ZeroArgument,
)

TABLE_LIMIT = 1 << 20
MAX_ORDER = 1 << 24


class Quadrant(NamedTuple):
    chi_x_plus_1: int
    chi_x: int


class Field:
    """GF(p^n) = GF(p)[t] / (modulus)."""

    def __init__(self, p: int, n: int, modulus=None, table_limit: int = TABLE_LIMIT):
        if p < 2 or not gfpoly.is_prime(p):
            raise NonPrimeP(f"characteristic {p} is not prime")
        if n < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {n}")
        if p ** n > MAX_ORDER:
            raise DegreeMismatch(f"GF({p}^{n}) exceeds the supported order 2^24")
        if modulus is None:
            modulus = gfpoly.smallest_irreducible(p, n)
        else:
            modulus = [int(c) for c in modulus]
            if any(not 0 <= c < p for c in modulus):
                raise SpecParseError(f"modulus coefficients must lie in [0, {p})")
            if len(gfpoly.strip(modulus)) != n + 1:
                raise DegreeMismatch(f"modulus {modulus} does not have degree {n}")
            if modulus[-1] != 1:
                raise DegreeMismatch(f"modulus {modulus} is not monic")
            if not gfpoly.is_irreducible(modulus, p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = tuple(modulus)
        self._powers = [p ** i for i in range(n)]
        self._gen_index = self._find_generator()
        self.has_tables = self.q <= table_limit
        if self.has_tables:
            self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        cofactors = [order // r for r in gfpoly.prime_factors(order)]
        for idx in range(2, self.q):
            poly = self.coeffs(idx)
            if all(gfpoly.powmod(poly, e, self.modulus, self.p) != [1] for e in cofactors):
                return idx
        raise AssertionError("field has no primitive element")  # pragma: no cover

    def _mul_digits_by(self, block: np.ndarray, h) -> np.ndarray:
        # multiplication by h is GF(p)-linear: row i of the matrix is t^i * h
        rows = []
        for i in range(self.n):
            r = gfpoly.rem(gfpoly.mul([0] * i + [1], list(h), self.p), self.modulus, self.p)
            rows.append(r + [0] * (self.n - len(r)))
        return (block @ np.array(rows, dtype=np.int64)) % self.p

    def _mul_bits_by(self, block: np.ndarray, h) -> np.ndarray:
        n = self.n
        prod = np.zeros_like(block)
        for j, hj in enumerate(h):
            if hj:
                prod ^= block << j
        red = sum(c << i for i, c in enumerate(self.modulus))
        for k in range(2 * n - 2, n - 1, -1):
            hit = (prod >> k) & 1
            prod ^= hit * (red << (k - n))
        return prod

    def _build_tables(self):
        q, n = self.q, self.n
        pw = np.array(self._powers, dtype=np.int64)
        self._pw = pw
        order = q - 1
        if self.p == 2:
            # indices are bit vectors; multiplication is carry-less
            blocks = [np.array([1], dtype=np.int64)]
            mul_block = self._mul_bits_by
        else:
            blocks = [np.array([self.coeffs(1)], dtype=np.int64)]
            mul_block = self._mul_digits_by
        have = 1
        step = self.coeffs(self._gen_index)
        while have < order:
            nxt = mul_block(np.concatenate(blocks), step)
            blocks.append(nxt)
            have *= 2
            step = gfpoly.rem(gfpoly.mul(step, step, self.p), self.modulus, self.p)
            step = step + [0] * (n - len(step))
        exp = (np.concatenate(blocks)[:order] @ pw) if self.p != 2 else np.concatenate(blocks)[:order]
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        if (log[1:] < 0).any() or log[0] != -1:
            raise AssertionError("exponent table is not a permutation of GF(q)*")  # pragma: no cover
        # doubled so that log[x] + log[y] never needs a reduction
        self._exp = np.concatenate([exp, exp])
        self._log = log
        if self.p != 2 and self.n > 1:
            idx = np.arange(q, dtype=np.int64)
            self._digits = np.stack([(idx // int(w)) % self.p for w in pw], axis=1)
        for arr in (self._exp, self._log, getattr(self, "_digits", None)):
            if arr is not None:
                arr.setflags(write=False)

    # -- identity / representation --------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.n, self.modulus) == (
            other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.n}) mod {self.poly_str()}"

    def spec_string(self) -> str:
        return f"{self.p}^{self.n}/" + ",".join(str(c) for c in self.modulus)

    def poly_str(self) -> str:
        terms = []
        for i in range(self.n, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
            terms.append(mono if c == 1 and i else f"{c}" + ("" if i == 0 else f"*{mono}"))
        return " + ".join(terms)

    def coeffs(self, index: int) -> list:
        out = []
        for _ in range(self.n):
            index, r = divmod(index, self.p)
            out.append(r)
        return out

    def index_of(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            coeffs = gfpoly.rem(coeffs, self.modulus, self.p)
        return sum((int(c) % self.p) * w for c, w in zip(coeffs, self._powers))

    # -- element factories ------------------------------------------------------

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.index_of(value))
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"index {value} outside [0, {self.q})")
        return FieldElement(self, value)

    def from_int(self, m: int) -> FieldElement:
        """Image of the integer m in the prime subfield."""
        return FieldElement(self, m % self.p)

    def elements(self):
        return [FieldElement(self, i) for i in range(self.q)]

    def nonzero(self):
        return [FieldElement(self, i) for i in range(1, self.q)]

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def minus_one(self):
        return FieldElement(self, self.p - 1)

    @property
    def generator(self) -> FieldElement:
        return FieldElement(self, self._gen_index)

    # -- scalar index arithmetic ------------------------------------------------

    def _add(self, i: int, j: int) -> int:
        p = self.p
        if p == 2:
            return i ^ j
        if self.n == 1:
            return (i + j) % p
        r, w = 0, 1
        for _ in range(self.n):
            i, a = divmod(i, p)
            j, b = divmod(j, p)
            r += ((a + b) % p) * w
            w *= p
        return r

    def _neg(self, i: int) -> int:
        p = self.p
        if p == 2:
            return i
        if self.n == 1:
            return -i % p
        r, w = 0, 1
        for _ in range(self.n):
            i, a = divmod(i, p)
            r += (-a % p) * w
            w *= p
        return r

    def _sub(self, i: int, j: int) -> int:
        return self._add(i, self._neg(j))

    def _mul(self, i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        if self.n == 1:
            return i * j % self.p
        if self.has_tables:
            return int(self._exp[self._log[i] + self._log[j]])
        prod = gfpoly.mul(self.coeffs(i), self.coeffs(j), self.p)
        return self.index_of(gfpoly.rem(prod, self.modulus, self.p))

    def _inv(self, i: int) -> int:
        if i == 0:
            raise DivisionByZero("inverse of zero")
        if self.n == 1:
            return pow(i, -1, self.p)
        if self.has_tables:
            return int(self._exp[(self.q - 1 - self._log[i]) % (self.q - 1)])
        return self._pow(i, self.q - 2)

    def _pow(self, i: int, d: int) -> int:
        """Square-and-multiply; 0^0 = 1."""
        if d < 0:
            i, d = self._inv(i), -d
        result = 1
        base = i
        while d:
            if d & 1:
                result = self._mul(result, base)
            d >>= 1
            if d:
                base = self._mul(base, base)
        return result

    # -- vectorised index arithmetic (requires tables) --------------------------

    def _need_tables(self):
        if not self.has_tables:
            raise NotImplementedError(f"{self!r} is above the table limit; only scalar arithmetic is available")

    def add_arr(self, u, v):
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self.p == 2:
            return u ^ v
        if self.n == 1:
            return (u + v) % self.p
        self._need_tables()
        return ((self._digits[u] + self._digits[v]) % self.p) @ self._pw

    def neg_arr(self, u):
        u = np.asarray(u, dtype=np.int64)
        if self.p == 2:
            return u
        if self.n == 1:
            return -u % self.p
        self._need_tables()
        return ((-self._digits[u]) % self.p) @ self._pw

    def sub_arr(self, u, v):
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self.p == 2:
            return u ^ v
        if self.n == 1:
            return (u - v) % self.p
        self._need_tables()
        return ((self._digits[u] - self._digits[v]) % self.p) @ self._pw

    def mul_arr(self, u, v):
        self._need_tables()
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        out = self._exp[self._log[u] + self._log[v]]
        return np.where((u == 0) | (v == 0), 0, out)

    def pow_arr(self, u, d: int):
        """Elementwise u^d with d >= 0 and 0^0 = 1."""
        self._need_tables()
        u = np.asarray(u, dtype=np.int64)
        if d == 0:
            return np.ones_like(u)
        lg = self._log[u]
        out = self._exp[(lg * (d % (self.q - 1))) % (self.q - 1)]
        return np.where(u == 0, 0, out)

    def log_arr(self, u):
        self._need_tables()
        return self._log[np.asarray(u, dtype=np.int64)]

    def chi_arr(self, u):
        """Quadratic character of nonzero indices via log parity."""
        self._need_tables()
        if self.p == 2:
            raise CharTwo("quadratic character needs odd characteristic")
        return 1 - 2 * (self._log[np.asarray(u, dtype=np.int64)] % 2)

    def shift_perm(self, a: int) -> np.ndarray:
        """Index array mapping x -> x + a over all of GF(q)."""
        return self.add_arr(np.arange(self.q, dtype=np.int64), a)


class FieldElement:
    __slots__ = ("field", "index")

    def __init__(self, field: Field, index: int):
        self.field = field
        self.index = index

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.index
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return j
        return FieldElement(self.field, self.field._add(self.index, j))

    __radd__ = __add__

    def __sub__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return j
        return FieldElement(self.field, self.field._sub(self.index, j))

    def __rsub__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return j
        return FieldElement(self.field, self.field._sub(j, self.index))

    def __mul__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return j
        return FieldElement(self.field, self.field._mul(self.index, j))

    __rmul__ = __mul__

    def __truediv__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return j
        return FieldElement(self.field, self.field._mul(self.index, self.field._inv(j)))

    def __rtruediv__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return j
        return FieldElement(self.field, self.field._mul(j, self.field._inv(self.index)))

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.index))

    def __pow__(self, d: int):
        return FieldElement(self.field, self.field._pow(self.index, d))

    def inverse(self):
        return FieldElement(self.field, self.field._inv(self.index))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, int):
            return self.index == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.index))

    def __bool__(self):
        return self.index != 0

    def __int__(self):
        return self.index

    @property
    def coeffs(self) -> tuple:
        return tuple(self.field.coeffs(self.index))

    def __repr__(self):
        return f"<{self.index} in GF({self.field.p}^{self.field.n})>"


# -- module-level API ----------------------------------------------------------

@functools.lru_cache(maxsize=128)
def _cached_field(p, n, modulus):
    return Field(p, n, None if modulus is None else list(modulus))


def build_field(p: int, n: int, modulus=None) -> Field:
    """Validated GF(p^n); identical arguments return the same (immutable) object."""
    if p < 2 or not gfpoly.is_prime(p):
        raise NonPrimeP(f"characteristic {p} is not prime")
    p, n = int(p), int(n)
    if modulus is None and 1 <= n and p ** n <= MAX_ORDER:
        modulus = _default_modulus(p, n)
    return _cached_field(p, n, None if modulus is None else tuple(int(c) for c in modulus))


@functools.lru_cache(maxsize=128)
def _default_modulus(p, n):
    return tuple(gfpoly.smallest_irreducible(p, n))


_SPEC_RE = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*(?:/\s*([\d\s,]+))?\s*$")


def parse_field_spec(spec: str) -> Field:
    """Parse "p^n" or "p^n/c0,c1,...,cn" (modulus coefficients, constant first)."""
    m = _SPEC_RE.match(spec)
    if not m:
        m1 = re.match(r"^\s*(\d+)\s*$", spec)
        if not m1:
            raise SpecParseError(f"cannot parse field spec {spec!r}; expected p^n or p^n/c0,...,cn")
        return build_field(int(m1.group(1)), 1)
    p, n = int(m.group(1)), int(m.group(2))
    modulus = None
    if m.group(3):
        try:
            modulus = [int(c) for c in m.group(3).split(",")]
        except ValueError:
            raise SpecParseError(f"bad modulus in {spec!r}") from None
    return build_field(p, n, modulus)


def _same(x: FieldElement, y: FieldElement):
    if x.field != y.field:
        raise FieldMismatch(f"{x.field!r} vs {y.field!r}")


def add(x, y):
    _same(x, y)
    return x + y


def sub(x, y):
    _same(x, y)
    return x - y


def mul(x, y):
    _same(x, y)
    return x * y


def neg(x):
    return -x


def inv(x):
    return x.inverse()


def power(x: FieldElement, d: int) -> FieldElement:
    return x ** d


def quadratic_character(x: FieldElement) -> int:
    f = x.field
    if f.p == 2:
        raise CharTwo("quadratic character needs odd characteristic")
    if not x:
        raise ZeroArgument("quadratic character of zero")
    return 1 if x ** ((f.q - 1) // 2) == f.one else -1


def trace(x: FieldElement) -> FieldElement:
    """Absolute trace x + x^p + ... + x^(p^(n-1)); lands in the prime subfield."""
    total = x
    y = x
    for _ in range(x.field.n - 1):
        y = y ** x.field.p
        total = total + y
    return total


def quadrant(x: FieldElement) -> Quadrant:
    if not x or x == -1:
        raise ExcludedPoint("quadrant is undefined at 0 and -1")
    return Quadrant(quadratic_character(x + 1), quadratic_character(x))


def is_dth_power(x: FieldElement, d: int) -> bool:
    if not x:
        raise ZeroArgument("zero is excluded")
    q = x.field.q
    return x ** ((q - 1) // math.gcd(d, q - 1)) == x.field.one


def multiplicative_generator(field: Field) -> FieldElement:
    return field.generator


def in_subfield(x: FieldElement, m: int) -> bool:
    """True iff x lies in GF(p^m) (m must divide n)."""
    if x.field.n % m:
        raise DegreeMismatch(f"GF(p^{m}) is not a subfield of GF(p^{x.field.n})")
    return x ** (x.field.p ** m) == x


def field_isomorphism(src: Field, dst: Field) -> np.ndarray:
    """Index map of an isomorphism src -> dst sending t to a root of src's modulus."""
    if (src.p, src.n) != (dst.p, dst.n):
        raise FieldMismatch("fields of different order are not isomorphic")

    def evaluate(poly, z):
        acc = dst.zero
        for c in reversed(poly):
            acc = acc * z + c
        return acc

    root = next(z for z in dst.elements() if not evaluate(src.modulus, z))
    images = [dst.one]
    for _ in range(src.n - 1):
        images.append(images[-1] * root)
    out = np.empty(src.q, dtype=np.int64)
    for i in range(src.q):
        acc = dst.zero
        for c, img in zip(src.coeffs(i), images):
            if c:
                acc = acc + img * c
        out[i] = acc.index
    return out
