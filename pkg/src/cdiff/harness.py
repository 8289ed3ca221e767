"""Prediction-vs-computation grids, exponent search and reports."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources

from . import conditions
from .errors import BudgetExceeded, CDiffError, SpecParseError
from .field import Field, FieldElement, build_field
from .spectrum import (
    DEFAULT_BUDGET,
    Budget,
    PowerMap,
    all_c_sweep,
    spectrum_to_dict,
    uniformity,
)
from .theory import (
    EXACT,
    PCN,
    APCN,
    NOT_PCN,
    UPPER,
    NotApplicable,
    Prediction,
    cyclotomic_class,
    get_rule,
    inverse_exponent_identity,
    rule_exponent,
    theorem_predict,
)

VERDICTS = ("confirmed", "bound-satisfied", "violated", "observation")


# -- c selection ------------------------------------------------------------------

@dataclass(frozen=True)
class CSelector:
    """Which multipliers c a case sweeps.

    Text forms: "all", "-1"/"minus1", "0"/"zero", an integer index,
    "except:i,j,...", "cond:<name>" (see conditions.NAMED).
    """
    kind: str
    payload: object = None

    @classmethod
    def parse(cls, text) -> CSelector:
        if isinstance(text, CSelector):
            return text
        if isinstance(text, int):
            return cls("single", text)
        t = str(text).strip()
        if t == "all":
            return cls("all")
        if t in ("-1", "minus1"):
            return cls("minus1")
        if t == "zero":
            return cls("single", 0)
        if t.startswith("except:"):
            try:
                return cls("all_except", tuple(int(x) for x in t[7:].split(",") if x))
            except ValueError:
                raise SpecParseError(f"bad c selector {text!r}") from None
        if t.startswith("cond:") or t in conditions.NAMED:
            name = t[5:] if t.startswith("cond:") else t
            if name not in conditions.NAMED:
                raise SpecParseError(f"unknown condition {name!r}; known: {', '.join(conditions.NAMED)}")
            return cls("condition", name)
        try:
            return cls("single", int(t))
        except ValueError:
            raise SpecParseError(f"bad c selector {text!r}") from None

    def select(self, field: Field) -> list:
        if self.kind == "all":
            return field.elements()
        if self.kind == "minus1":
            return [field.minus_one]
        if self.kind == "single":
            return [field(self.payload)]
        if self.kind == "all_except":
            skip = set(self.payload)
            return [c for c in field.elements() if c.index not in skip]
        if self.kind == "condition":
            cond = conditions.NAMED[self.payload]
            return [c for c in field.elements() if cond.evaluate(c)]
        raise SpecParseError(f"unknown selector kind {self.kind!r}")

    def __str__(self):
        if self.kind in ("all", "minus1"):
            return self.kind
        if self.kind == "single":
            return str(self.payload)
        if self.kind == "all_except":
            return "except:" + ",".join(map(str, self.payload))
        return f"cond:{self.payload}"


# -- cases ------------------------------------------------------------------------

def parse_claim(text: str) -> dict:
    """'<=u', '=u', 'pcn', 'apcn' or 'not_pcn' -> prediction fields."""
    t = text.strip().lower()
    if t.startswith("<="):
        return {"kind": UPPER, "value": int(t[2:])}
    if t.startswith("="):
        return {"kind": EXACT, "value": int(t[1:])}
    if t in (PCN, APCN, NOT_PCN):
        return {"kind": t}
    raise SpecParseError(f"bad claim {text!r}")


@dataclass(frozen=True)
class TheoremCase:
    rule_id: str
    p: int
    n: int
    k: int | None = None
    d: int | None = None
    c: str | None = None
    claim: str | None = None
    budget: str = "desk"

    def selector(self) -> CSelector:
        return CSelector.parse(self.c if self.c is not None else get_rule(self.rule_id).c_selector)

    def exponent(self) -> int:
        derived = rule_exponent(self.rule_id, self.p, self.n, self.k)
        if self.d is not None and self.d != derived:
            raise SpecParseError(f"d={self.d} does not match the {self.rule_id} formula ({derived})")
        return derived

    def to_dict(self) -> dict:
        out = {"rule": self.rule_id, "p": self.p, "n": self.n}
        for key in ("k", "d", "c", "claim"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> TheoremCase:
        known = {"rule", "p", "n", "k", "d", "c", "claim", "budget"}
        extra = set(obj) - known
        if extra or "rule" not in obj:
            raise SpecParseError(f"bad case entry {obj!r}")
        c = obj.get("c")
        return cls(obj["rule"], int(obj["p"]), int(obj["n"]),
                   None if obj.get("k") is None else int(obj["k"]),
                   None if obj.get("d") is None else int(obj["d"]),
                   None if c is None else str(c), obj.get("claim"), obj.get("budget", "desk"))


@dataclass
class Outcome:
    c: int
    predicted: str
    computed: int
    verdict: str
    holds: bool
    note: str = ""
    witnesses: list = dc_field(default_factory=list)


@dataclass
class CaseResult:
    case: TheoremCase
    d: int | None
    outcomes: list
    wall_time: float = 0.0
    status: str = "ok"
    message: str = ""
    skipped_c: int = 0

    @property
    def violated(self):
        return [o for o in self.outcomes if o.verdict == "violated"]


def run_case(case: TheoremCase, workers: int | None = None,
             budget: Budget = DEFAULT_BUDGET) -> CaseResult:
    """Compute the uniformity for every selected c and grade the rule's prediction."""
    t0 = time.perf_counter()
    get_rule(case.rule_id)
    try:
        d = case.exponent()
    except NotApplicable as exc:
        return CaseResult(case, None, [], time.perf_counter() - t0, "not-applicable", str(exc))
    q = case.p ** case.n
    selector = case.selector()
    if selector.kind not in ("single", "minus1") and q > budget.sweep_max_q:
        raise BudgetExceeded(f"GF({case.p}^{case.n}) exceeds the sweep budget q <= {budget.sweep_max_q}")
    field = build_field(case.p, case.n)
    override = parse_claim(case.claim) if case.claim else None

    preds = []
    skipped = 0
    for c in selector.select(field):
        pred = theorem_predict(case.rule_id, case.p, case.n, case.k, c)
        if not pred.applicable:
            skipped += 1
            continue
        if override:
            pred = Prediction(source=pred.source, params=pred.params, note="claim overridden",
                              **override)
        preds.append((c, pred))

    F = PowerMap(field, d)
    computed = dict(all_c_sweep(F, [c for c, _ in preds], workers=workers, budget=budget)) if preds else {}
    outcomes = []
    for c, pred in preds:
        u = computed[c]
        verdict = pred.verdict(u)
        wit = []
        if verdict == "violated":
            wit = [list(w) for w in uniformity(F, c, witnesses=None, budget=budget).witnesses]
        outcomes.append(Outcome(c.index, pred.describe(), u, verdict, pred.holds(u), pred.note, wit))
    return CaseResult(case, d, outcomes, time.perf_counter() - t0, skipped_c=skipped)


# -- grids and reports ------------------------------------------------------------

@dataclass
class Report:
    results: list = dc_field(default_factory=list)

    def lines(self):
        """One JSON-ready dict per (case, c), plus one per case without outcomes."""
        for r in self.results:
            base = {"rule": r.case.rule_id, "p": r.case.p, "n": r.case.n, "k": r.case.k, "d": r.d}
            if r.status != "ok":
                yield {**base, "status": r.status, "message": r.message}
                continue
            for o in r.outcomes:
                line = {**base, "c": o.c, "predicted": o.predicted, "computed": o.computed,
                        "verdict": o.verdict, "holds": o.holds}
                if o.note:
                    line["note"] = o.note
                if o.witnesses:
                    line["witnesses"] = [{"a": a, "b": b, "solutions": s} for a, b, s in o.witnesses]
                yield line

    def to_jsonl(self) -> str:
        return "".join(json.dumps(line) + "\n" for line in self.lines())

    def per_rule(self) -> dict:
        out = {}
        for r in self.results:
            tally = out.setdefault(r.case.rule_id, {v: 0 for v in VERDICTS} | {"skipped": 0})
            if r.status != "ok":
                tally["skipped"] += 1
            for o in r.outcomes:
                tally[o.verdict] += 1
        return dict(sorted(out.items()))

    @property
    def violations(self):
        return [(r.case, o) for r in self.results for o in r.outcomes if o.verdict == "violated"]

    @property
    def observations(self):
        return [(r.case, o) for r in self.results for o in r.outcomes if o.verdict == "observation"]

    @property
    def skipped(self):
        return [r for r in self.results if r.status in ("skipped", "error")]

    @property
    def exit_code(self) -> int:
        return 1 if self.violations else 0

    def summary(self) -> str:
        rows = ["rule                  confirmed  bound-ok  violated  observ  skipped"]
        for rule, t in self.per_rule().items():
            rows.append(f"{rule:<20}  {t['confirmed']:>9}  {t['bound-satisfied']:>8}  "
                        f"{t['violated']:>8}  {t['observation']:>6}  {t['skipped']:>7}")
        obs = {}
        for case, o in self.observations:
            key = (case.rule_id, o.predicted, o.holds, o.note)
            obs.setdefault(key, []).append(f"GF({case.p}^{case.n}) c={o.c} u={o.computed}")
        if obs:
            rows.append("observations:")
            for (rule, pred, holds, note), where in obs.items():
                shown = ", ".join(where[:3]) + (f", ... ({len(where)} total)" if len(where) > 3 else "")
                rows.append(f"  {rule}: claim {pred} {'holds' if holds else 'fails'} at {shown}"
                            + (f" [{note}]" if note else ""))
        for case, o in self.violations:
            rows.append(f"VIOLATED {case.rule_id} GF({case.p}^{case.n}) c={o.c}: "
                        f"predicted {o.predicted}, computed {o.computed}")
        for r in self.skipped:
            rows.append(f"{r.status} {r.case.rule_id} GF({r.case.p}^{r.case.n}): {r.message}")
        return "\n".join(rows)


def run_grid(grid, workers: int | None = None, budget: Budget = DEFAULT_BUDGET) -> Report:
    """Run every case; errors are recorded on the case and never stop the grid."""
    report = Report()
    for case in grid:
        try:
            report.results.append(run_case(case, workers=workers, budget=budget))
        except BudgetExceeded as exc:
            report.results.append(CaseResult(case, None, [], status="skipped", message=str(exc)))
        except CDiffError as exc:
            report.results.append(CaseResult(case, None, [], status="error", message=str(exc)))
    return report


def load_grid(path=None) -> list:
    """Cases from a JSON grid file ({"cases": [...]}); None loads the shipped desk grid."""
    if path is None:
        text = resources.files("cdiff").joinpath("data/default_grid.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"grid file is not valid JSON: {exc}") from None
    entries = obj["cases"] if isinstance(obj, dict) else obj
    return [TheoremCase.from_dict(e) for e in entries]


# -- search -----------------------------------------------------------------------

def search(p: int, n: int, u_max: int, c_selector="-1", dedupe: bool = True,
           workers: int | None = None, budget: Budget = DEFAULT_BUDGET) -> list:
    """All (d, c, u) with u <= u_max for 1 <= d <= q-2, sorted by (u, d, c).

    With dedupe only the smallest member of each cyclotomic class is tried;
    the other members follow by Frobenius transport of c.
    """
    q = p ** n
    if q > budget.sweep_max_q:
        raise BudgetExceeded(f"search over GF({q}) exceeds budget q <= {budget.sweep_max_q}")
    field = build_field(p, n)
    cs = CSelector.parse(c_selector).select(field)
    ds = range(1, q - 1)
    if dedupe:
        ds = sorted({cyclotomic_class(d, p, n)[0] for d in ds})
    hits = []
    for d in ds:
        for c, u in all_c_sweep(PowerMap(field, d), cs, workers=workers, budget=budget):
            if u <= u_max:
                hits.append((d, c, u))
    hits.sort(key=lambda h: (h[2], h[0], h[1].index))
    return hits


def spectrum_report(F, c: FieldElement, witnesses: int | None = 4) -> str:
    """Stable JSON serialisation of the spectrum of F at c."""
    return json.dumps(spectrum_to_dict(uniformity(F, c, witnesses=witnesses)))


def conjecture_check(p: int, n: int, workers: int | None = None) -> dict:
    """Exponent (p^n+1)/(p+1), its inverse and the computed uniformities at c = -1."""
    d, d_inv, ok = inverse_exponent_identity(p, n)
    field = build_field(p, n)
    m1 = field.minus_one
    half = (p ** (n - 1) + 1) // 2
    u = uniformity(PowerMap(field, d), m1, witnesses=0).uniformity
    u_half = uniformity(PowerMap(field, half), m1, witnesses=0).uniformity
    return {
        "p": p, "n": n, "q": p ** n, "d": d, "d_inv": d_inv, "inverse_ok": ok,
        "gcd": math.gcd(d, p ** n - 1),
        "uniformity": u,
        "partner_exponent": half,
        "partner_in_inverse_class": d_inv % (p ** n - 1) in cyclotomic_class(half, p, n),
        "partner_uniformity": u_half,
    }
