"""Predicates over the multiplier c used by the prediction rules.

Atoms whose defining expression is undefined at a particular c (a quadratic
character of zero, a division by zero) evaluate to False there.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CharMismatch
from .field import FieldElement, in_subfield, quadratic_character, trace


def _odd(c: FieldElement, what: str):
    if c.field.p == 2:
        raise CharMismatch(f"{what} needs odd characteristic")


def _chi_or_none(x: FieldElement):
    return None if not x else quadratic_character(x)


class Condition:
    def evaluate(self, c: FieldElement) -> bool:
        raise NotImplementedError

    def __and__(self, other):
        return AllOf((self, other))

    def __or__(self, other):
        return AnyOf((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class NotOne(Condition):
    def evaluate(self, c):
        return c.index != 1

    def __str__(self):
        return "c != 1"


@dataclass(frozen=True)
class IsZero(Condition):
    def evaluate(self, c):
        return c.index == 0

    def __str__(self):
        return "c = 0"


@dataclass(frozen=True)
class IsMinusOne(Condition):
    def evaluate(self, c):
        return c == -1

    def __str__(self):
        return "c = -1"


@dataclass(frozen=True)
class InSubfield(Condition):
    m: int

    def evaluate(self, c):
        return in_subfield(c, self.m)

    def __str__(self):
        return f"c in GF(p^{self.m})"


@dataclass(frozen=True)
class ChiRatioSquare(Condition):
    """chi((1 - c) / (1 + c)) = 1."""

    def evaluate(self, c):
        _odd(c, "chi((1-c)/(1+c))")
        num, den = 1 - c, 1 + c
        if not num or not den:
            return False
        return quadratic_character(num / den) == 1

    def __str__(self):
        return "chi((1-c)/(1+c)) = 1"


@dataclass(frozen=True)
class TracePair(Condition):
    """Tr(c) = t and Tr(1/c) = t_inv over GF(2^n); None leaves a side free."""
    t: int | None
    t_inv: int | None

    def evaluate(self, c):
        if c.field.p != 2:
            raise CharMismatch("trace conditions are stated over GF(2^n)")
        if not c:
            return False
        ok = True
        if self.t is not None:
            ok &= trace(c).index == self.t
        if self.t_inv is not None:
            ok &= trace(c.inverse()).index == self.t_inv
        return ok

    def __str__(self):
        parts = []
        if self.t is not None:
            parts.append(f"Tr(c) = {self.t}")
        if self.t_inv is not None:
            parts.append(f"Tr(1/c) = {self.t_inv}")
        return " and ".join(parts) or "true"


@dataclass(frozen=True)
class ChiPair(Condition):
    """chi(c^2 - 4c) = s and chi(1 - 4c) = s_inv; None leaves a side free."""
    s: int | None
    s_inv: int | None

    def evaluate(self, c):
        _odd(c, "chi(c^2-4c), chi(1-4c)")
        ok = True
        if self.s is not None:
            ok &= _chi_or_none(c * c - 4 * c) == self.s
        if self.s_inv is not None:
            ok &= _chi_or_none(1 - 4 * c) == self.s_inv
        return ok

    def __str__(self):
        parts = []
        if self.s is not None:
            parts.append(f"chi(c^2-4c) = {self.s:+d}")
        if self.s_inv is not None:
            parts.append(f"chi(1-4c) = {self.s_inv:+d}")
        return " and ".join(parts) or "true"


@dataclass(frozen=True)
class FourOrInverse(Condition):
    """c in {4, 1/4}."""

    def evaluate(self, c):
        _odd(c, "c in {4, 1/4}")
        four = c.field.from_int(4)
        return c == four or c == four.inverse()

    def __str__(self):
        return "c in {4, 1/4}"


@dataclass(frozen=True)
class AllOf(Condition):
    parts: tuple

    def evaluate(self, c):
        return all(part.evaluate(c) for part in self.parts)

    def __str__(self):
        return " and ".join(f"({p})" for p in self.parts)


@dataclass(frozen=True)
class AnyOf(Condition):
    parts: tuple

    def evaluate(self, c):
        return any(part.evaluate(c) for part in self.parts)

    def __str__(self):
        return " or ".join(f"({p})" for p in self.parts)


@dataclass(frozen=True)
class Not(Condition):
    inner: Condition

    def evaluate(self, c):
        return not self.inner.evaluate(c)

    def __str__(self):
        return f"not ({self.inner})"


def c_condition_eval(cond: Condition, c: FieldElement) -> bool:
    return cond.evaluate(c)


# names accepted by the CLI and grid files
NAMED = {
    "ne1": NotOne(),
    "ne01": Not(IsZero()) & NotOne(),
    "ne_pm1": NotOne() & Not(IsMinusOne()),
    "zero": IsZero(),
    "minus1": IsMinusOne(),
    "chi_ratio": ChiRatioSquare(),
    "tr11": TracePair(1, 1),
    "four": FourOrInverse(),
    "chi_pair_nn": ChiPair(-1, -1),
}
