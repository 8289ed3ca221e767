"""Number-theoretic formulas and the catalogue of prediction rules.

Each rule describes one family of power maps x^d over GF(p^n) together with a
claim about its c-differential uniformity.  ``theorem_predict`` checks the
family's hypotheses for concrete (p, n, k, c) and returns a ``Prediction``;
the harness then compares it with a brute-force computation.

Rules flagged as observations encode a statement in the form in which it is
usually quoted even though it is known not to hold everywhere (for instance
the inverse-function rows taken literally at c = 1).  Their outcomes are
recorded but never counted as failures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .conditions import (
    ChiPair,
    ChiRatioSquare,
    FourOrInverse,
    InSubfield,
    IsMinusOne,
    IsZero,
    NotOne,
    TracePair,
)
from .errors import EvenN, FieldMismatch, UnknownRule
from .field import FieldElement

# -- closed forms -----------------------------------------------------------------


def gcd_pk1(p: int, k: int, n: int) -> int:
    """gcd(p^k + 1, p^n - 1) in closed form, verified against math.gcd."""
    g = math.gcd(k, n)
    if p == 2:
        value = (2 ** math.gcd(2 * k, n) - 1) // (2 ** g - 1)
    elif (n // g) % 2:
        value = 2
    else:
        value = p ** g + 1
    direct = math.gcd(p ** k + 1, p ** n - 1)
    if value != direct:
        raise ArithmeticError(f"closed form {value} != gcd {direct} at p={p}, k={k}, n={n}")
    return value


def conjecture_exponent(p: int, n: int) -> int:
    """(p^n + 1) / (p + 1) for odd n."""
    if n % 2 == 0:
        raise EvenN(f"n must be odd, got {n}")
    d, r = divmod(p ** n + 1, p + 1)
    assert r == 0
    return d


def inverse_exponent_identity(p: int, n: int):
    """(d, d_inv, ok): d = (p^n+1)/(p+1), d_inv = p(p^(n-1)+1)/2, ok iff d*d_inv = 1 mod p^n-1."""
    d = conjecture_exponent(p, n)
    d_inv = p * (p ** (n - 1) + 1) // 2
    return d, d_inv, (d * d_inv) % (p ** n - 1) == 1 % (p ** n - 1)


def cyclotomic_class(d: int, p: int, n: int) -> list:
    """Sorted orbit {d p^i mod (p^n - 1)}, representatives taken in [1, p^n - 1]."""
    m = p ** n - 1
    out = set()
    x = d % m
    for _ in range(n):
        out.add(x if x else m)
        x = x * p % m
    return sorted(out)


def class_representative(d: int, p: int, n: int) -> int:
    return cyclotomic_class(d, p, n)[0]


# -- predictions ------------------------------------------------------------------

EXACT = "exact"
UPPER = "upper_bound"
PCN = "pcn"
APCN = "apcn"
NOT_PCN = "not_pcn"
NA = "not_applicable"


@dataclass(frozen=True)
class Prediction:
    kind: str
    source: str
    value: int | None = None
    params: dict = dc_field(default_factory=dict)
    reason: str = ""
    observation: bool = False
    note: str = ""

    def __post_init__(self):
        if self.kind in (EXACT, UPPER) and (self.value is None or self.value < 1):
            raise ValueError(f"{self.kind} needs a value >= 1")

    @property
    def applicable(self) -> bool:
        return self.kind != NA

    def holds(self, u: int) -> bool:
        if self.kind == EXACT:
            return u == self.value
        if self.kind == UPPER:
            return u <= self.value
        if self.kind == PCN:
            return u == 1
        if self.kind == APCN:
            return u == 2
        if self.kind == NOT_PCN:
            return u != 1
        raise ValueError("a not-applicable prediction makes no claim")

    def verdict(self, u: int) -> str:
        if self.observation:
            return "observation"
        if not self.holds(u):
            return "violated"
        return "bound-satisfied" if self.kind == UPPER else "confirmed"

    def describe(self) -> str:
        if self.kind == EXACT:
            return f"={self.value}"
        if self.kind == UPPER:
            return f"<={self.value}"
        if self.kind == PCN:
            return "PcN"
        if self.kind == APCN:
            return "APcN"
        if self.kind == NOT_PCN:
            return "not PcN"
        return f"n/a ({self.reason})"


class NotApplicable(Exception):
    """Internal signal: a hypothesis of the rule failed."""


@dataclass(frozen=True)
class Rule:
    rule_id: str
    family: str
    hypotheses: str
    claim: str
    anchor: str
    needs_k: bool
    exponent: object
    predict: object
    c_selector: str = "all"
    observation: bool = False


RULES: dict = {}


def _rule(rule_id, family, hypotheses, claim, anchor, needs_k=False, c_selector="all",
          observation=False, exponent=None):
    def register(fn):
        RULES[rule_id] = Rule(rule_id, family, hypotheses, claim, anchor, needs_k,
                              exponent, fn, c_selector, observation)
        return fn
    return register


def _require(cond, reason):
    if not cond:
        raise NotApplicable(reason)


# exponent formulas; each returns d >= 1 or raises NotApplicable

def _d_gold(p, n, k):
    _require(p == 2, "p != 2")
    return 2 ** k + 1


def _d_pk1(p, n, k):
    return p ** k + 1


def _d_pk1_half(p, n, k):
    _require(p % 2 == 1, "p even")
    return (p ** k + 1) // 2


def _d_three_k_half(p, n, k):
    _require(p == 3, "p != 3")
    return (3 ** k + 1) // 2


def _d_two_pn_third(p, n, k):
    _require((p ** n) % 3 == 2, "p^n != 2 mod 3")
    return (2 * p ** n - 1) // 3


def _d_pn1_half(p, n, k):
    _require(p % 2 == 1, "p even")
    return (p ** n + 1) // 2


def _d_pn3_half(p, n, k):
    _require(p % 2 == 1, "p even")
    return (p ** n + 3) // 2


def _d_pn_minus3_half(p, n, k):
    _require(p % 2 == 1, "p even")
    _require(p ** n > 3, "exponent (p^n-3)/2 < 1")
    return (p ** n - 3) // 2


def _d_pn1_over_p1(p, n, k):
    _require(p % 2 == 1, "p even")
    _require(n % 2 == 1, "n even")
    return conjecture_exponent(p, n)


def _d_square(p, n, k):
    return 2


def _d_inverse(p, n, k):
    _require(p ** n > 2, "exponent p^n-2 < 1")
    return p ** n - 2


def _d_p2_half(p, n, k):
    _require(p % 2 == 1, "p even")
    return (p * p + 1) // 2


def _d_p2_p_1(p, n, k):
    _require(p % 2 == 1, "p even")
    return p * p - p + 1


@_rule("gold", "2^k+1", "p = 2, gcd(k,n) = 1, c != 1", "exactly 3",
       "p=2 | d=2^k+1 | gcd(k,n)=1, c!=1 | 3", needs_k=True, exponent=_d_gold)
def _gold(p, n, k, c):
    _require(math.gcd(k, n) == 1, "gcd(k,n) != 1")
    _require(NotOne().evaluate(c), "c = 1")
    if IsZero().evaluate(c):
        return dict(kind=EXACT, value=3, observation=True,
                    note=f"at c=0 the uniformity reduces to gcd(d,q-1)={math.gcd(2 ** k + 1, 2 ** n - 1)}")
    return dict(kind=EXACT, value=3)


@_rule("pk1", "p^k+1", "1 != c in GF(p^gcd(k,n))", "exactly gcd(d, p^n-1)",
       "any | d=p^k+1 | 1!=c in GF(p^gcd(k,n)) | gcd(d,p^n-1)", needs_k=True, exponent=_d_pk1)
def _pk1(p, n, k, c):
    _require(NotOne().evaluate(c), "c = 1")
    _require(InSubfield(math.gcd(k, n)).evaluate(c), "c outside GF(p^gcd(k,n))")
    e = gcd_pk1(p, k, n)
    note = "APcN" if e == 2 else ""
    return dict(kind=EXACT, value=e, note=note)


@_rule("pk1_printed", "p^k+1", "1 != c in GF(p^gcd(k,n))", "exactly gcd(k,n) (value column as printed)",
       "any | d=p^k+1 | 1!=c in GF(p^gcd(k,n)) | gcd(k,n)", needs_k=True, exponent=_d_pk1,
       observation=True)
def _pk1_printed(p, n, k, c):
    _require(NotOne().evaluate(c), "c = 1")
    _require(InSubfield(math.gcd(k, n)).evaluate(c), "c outside GF(p^gcd(k,n))")
    return dict(kind=EXACT, value=math.gcd(k, n), observation=True,
                note=f"the family's actual value is gcd(d,p^n-1)={gcd_pk1(p, k, n)}")


@_rule("pk1_half_pcn", "(p^k+1)/2", "p odd, c = -1", "PcN iff k/gcd(k,n) is even",
       "odd | d=(p^k+1)/2 | k/gcd(k,n) even, c=-1 | 1", needs_k=True, c_selector="minus1",
       exponent=_d_pk1_half)
def _pk1_half_pcn(p, n, k, c):
    _require(IsMinusOne().evaluate(c), "c != -1")
    if (k // math.gcd(k, n)) % 2 == 0:
        return dict(kind=PCN)
    return dict(kind=NOT_PCN, reason="k/gcd(k,n) odd")


@_rule("pk1_half_apcn", "(3^k+1)/2", "p = 3, k odd, gcd(k,n) = 1, c = -1", "APcN",
       "3 | d=(3^k+1)/2 | k odd, gcd(k,n)=1, c=-1 | 2", needs_k=True, c_selector="minus1",
       exponent=_d_three_k_half)
def _pk1_half_apcn(p, n, k, c):
    _require(k % 2 == 1, "k even")
    _require(math.gcd(k, n) == 1, "gcd(k,n) != 1")
    _require(IsMinusOne().evaluate(c), "c != -1")
    return dict(kind=APCN)


@_rule("two_pn_third", "(2p^n-1)/3", "p^n = 2 mod 3, c != 1", "at most 3",
       "any | d=(2p^n-1)/3 | p^n=2 mod 3, c!=1 | <=3", exponent=_d_two_pn_third)
def _two_pn_third(p, n, k, c):
    _require(NotOne().evaluate(c), "c = 1")
    return dict(kind=UPPER, value=3)


@_rule("pn1_half", "(p^n+1)/2", "p odd, c != +-1", "at most 4; at most 2 if p^n = 1 mod 4 and chi((1-c)/(1+c)) = 1",
       "odd | d=(p^n+1)/2 | c!=+-1 [, chi((1-c)/(1+c))=1, p^n=1 mod 4] | <=4 [<=2]",
       exponent=_d_pn1_half)
def _pn1_half(p, n, k, c):
    _require(NotOne().evaluate(c) and not IsMinusOne().evaluate(c), "c = +-1")
    if (p ** n) % 4 == 1 and ChiRatioSquare().evaluate(c):
        return dict(kind=UPPER, value=2)
    return dict(kind=UPPER, value=4)


@_rule("pn3_half", "(p^n+3)/2", "p > 3, c = -1", "at most 3 if p^n = 3 mod 4, at most 4 if p^n = 1 mod 4",
       "odd | d=(p^n+3)/2 | p>3, c=-1 | <=3 (p^n=3 mod 4), <=4 (p^n=1 mod 4)", c_selector="minus1",
       exponent=_d_pn3_half)
def _pn3_half(p, n, k, c):
    _require(p > 3, "p <= 3")
    _require(IsMinusOne().evaluate(c), "c != -1")
    return dict(kind=UPPER, value=3 if (p ** n) % 4 == 3 else 4)


@_rule("pn_minus3_half", "(p^n-3)/2", "p odd, c = -1", "at most 4",
       "odd | d=(p^n-3)/2 | c=-1 | <=4", c_selector="minus1", exponent=_d_pn_minus3_half)
def _pn_minus3_half(p, n, k, c):
    _require(IsMinusOne().evaluate(c), "c != -1")
    return dict(kind=UPPER, value=4)


@_rule("pn1_over_p1", "(p^n+1)/(p+1)", "p odd, n odd, c = -1", "PcN",
       "odd | d=(p^n+1)/(p+1) | n odd, c=-1 | 1", c_selector="minus1", exponent=_d_pn1_over_p1)
def _pn1_over_p1(p, n, k, c):
    _require(IsMinusOne().evaluate(c), "c != -1")
    return dict(kind=PCN)


@_rule("square", "2", "p odd, c != 1", "exactly 2",
       "any | d=2 | c!=1 | 2", exponent=_d_square)
def _square(p, n, k, c):
    _require(NotOne().evaluate(c), "c = 1")
    if p == 2:
        return dict(kind=EXACT, value=2, observation=True,
                    note="in characteristic 2 the c-derivative of x^2 is (1+c)x^2 + a^2")
    return dict(kind=EXACT, value=2)


@_rule("inverse_c0", "p^n-2", "c = 0", "PcN",
       "any | d=p^n-2 | c=0 | 1", c_selector="zero", exponent=_d_inverse)
def _inverse_c0(p, n, k, c):
    _require(IsZero().evaluate(c), "c != 0")
    return dict(kind=PCN)


def _inverse_even_claim(c):
    return 2 if TracePair(1, 1).evaluate(c) else 3


def _inverse_odd_claim(c):
    return 2 if (FourOrInverse().evaluate(c) or ChiPair(-1, -1).evaluate(c)) else 3


@_rule("inverse_char2", "2^n-2", "p = 2, c not in {0, 1}",
       "2 if Tr(c) = Tr(1/c) = 1, else 3",
       "2 | d=2^n-2 | c!=0, Tr(c)=Tr(1/c)=1 -> 2; Tr(c)=0 or Tr(1/c)=0 -> 3", exponent=_d_inverse)
def _inverse_char2(p, n, k, c):
    _require(p == 2, "p != 2")
    _require(not IsZero().evaluate(c), "c = 0")
    if not NotOne().evaluate(c):
        return dict(kind=EXACT, value=_inverse_even_claim(c), observation=True,
                    note="c = 1 is the classical derivative; the trace split applies to c != 1")
    return dict(kind=EXACT, value=_inverse_even_claim(c))


@_rule("inverse_odd", "p^n-2", "p odd, c not in {0, 1}",
       "2 if c in {4, 1/4} or chi(c^2-4c) = chi(1-4c) = -1, else 3",
       "odd | d=p^n-2 | c=4, 1/4 or chi(c^2-4c)=chi(1-4c)=-1 -> 2; otherwise (c!=0) -> 3",
       exponent=_d_inverse)
def _inverse_odd(p, n, k, c):
    _require(p % 2 == 1, "p even")
    _require(not IsZero().evaluate(c), "c = 0")
    if not NotOne().evaluate(c):
        return dict(kind=EXACT, value=_inverse_odd_claim(c), observation=True,
                    note="c = 1 is the classical derivative; the character split applies to c != 1")
    return dict(kind=EXACT, value=_inverse_odd_claim(c))


@_rule("three_k_half", "(3^k+1)/2", "p = 3, c = -1", "PcN iff k/gcd(k,n) is even",
       "3 | d=(3^k+1)/2 | c=-1 | 1 (corrected hypothesis)", needs_k=True, c_selector="minus1",
       exponent=_d_three_k_half)
def _three_k_half(p, n, k, c):
    _require(IsMinusOne().evaluate(c), "c != -1")
    if (k // math.gcd(k, n)) % 2 == 0:
        return dict(kind=PCN)
    return dict(kind=NOT_PCN, reason="k/gcd(k,n) odd")


@_rule("three_k_half_printed", "(3^k+1)/2", "p = 3, c = -1", "PcN iff n/gcd(k,n) is odd",
       "3 | d=(3^k+1)/2 | c=-1, n/gcd(k,n) odd | 1", needs_k=True, c_selector="minus1",
       observation=True, exponent=_d_three_k_half)
def _three_k_half_printed(p, n, k, c):
    _require(IsMinusOne().evaluate(c), "c != -1")
    kind = PCN if (n // math.gcd(k, n)) % 2 == 1 else NOT_PCN
    note = "odd k makes d even, so gcd(d,3^n-1) >= 2 rules out PcN" if k % 2 else ""
    return dict(kind=kind, observation=True, note=note)


@_rule("p2_half", "(p^2+1)/2", "p odd, n odd, c = -1", "PcN",
       "odd | d=(p^2+1)/2 | c=-1, n odd | 1", c_selector="minus1", exponent=_d_p2_half)
def _p2_half(p, n, k, c):
    _require(n % 2 == 1, "n even")
    _require(IsMinusOne().evaluate(c), "c != -1")
    return dict(kind=PCN)


@_rule("p2_p_1", "p^2-p+1", "p odd, n = 3, c = -1", "PcN",
       "odd | d=p^2-p+1 | c=-1, n=3 | 1", c_selector="minus1", exponent=_d_p2_p_1)
def _p2_p_1(p, n, k, c):
    _require(n == 3, "n != 3")
    _require(IsMinusOne().evaluate(c), "c != -1")
    return dict(kind=PCN)


def get_rule(rule_id: str) -> Rule:
    try:
        return RULES[rule_id]
    except KeyError:
        raise UnknownRule(f"unknown rule {rule_id!r}; known: {', '.join(sorted(RULES))}") from None


def rule_exponent(rule_id: str, p: int, n: int, k: int | None = None) -> int:
    """The exponent d a rule prescribes at (p, n, k); raises NotApplicable."""
    rule = get_rule(rule_id)
    if rule.needs_k:
        _require(k is not None and k >= 1, "k required")
    d = rule.exponent(p, n, k)
    _require(d >= 1, "exponent < 1")
    return d


def theorem_predict(rule_id: str, p: int, n: int, k: int | None, c: FieldElement) -> Prediction:
    rule = get_rule(rule_id)
    if (c.field.p, c.field.n) != (p, n):
        raise FieldMismatch(f"c lives in GF({c.field.p}^{c.field.n}), not GF({p}^{n})")
    params = {"p": p, "n": n, "k": k, "c": c.index}
    try:
        d = rule_exponent(rule_id, p, n, k)
        params["d"] = d
        out = rule.predict(p, n, k, c)
    except NotApplicable as exc:
        return Prediction(NA, rule_id, params=params, reason=str(exc))
    out.setdefault("observation", rule.observation)
    return Prediction(source=rule_id, params=params, **out)


def rule_catalogue() -> list:
    return [
        {"rule_id": r.rule_id, "hypotheses": r.hypotheses, "claim": r.claim,
         "anchor": r.anchor}
        for r in RULES.values()
    ]
