"""c-derivatives, c-DDTs and c-differential uniformity.

For F: GF(q) -> GF(q) and a multiplier c, the c-derivative in direction a is
x -> F(x + a) - c F(x) and the table entry at (a, b) counts its solutions of
value b.  The uniformity is the largest entry, where the a = 0 row only takes
part when c != 1.

Power maps get a fast path: the a = 0 row peaks at gcd(d, q - 1) and every
row a != 0 is a relabelling of the a = 1 row (b -> b / a^d), so a single row
determines the uniformity and, by the same relabelling, the full spectrum.
"""
from __future__ import annotations

import hashlib
import io
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BudgetExceeded, FieldMismatch
from .field import Field, FieldElement

DEFAULT_WITNESSES = 4
# caps the number of int64 cells materialised by one batched sweep
_CHUNK_CELLS = 1 << 21


@dataclass(frozen=True)
class Budget:
    """Order limits for the quadratic-cost computations."""
    ddt_max_q: int = 1 << 13
    sweep_max_q: int = 3 ** 8


DEFAULT_BUDGET = Budget()


class PowerMap:
    """x -> x^d.  d is kept as given; evaluation follows pow semantics."""

    def __init__(self, field: Field, d: int):
        d = int(d)
        if d < 1:
            raise ValueError(f"exponent must be >= 1, got {d}")
        self.field = field
        self.d = d
        self._values = None

    def __call__(self, x: FieldElement) -> FieldElement:
        return x ** self.d

    def values(self) -> np.ndarray:
        if self._values is None:
            v = self.field.pow_arr(np.arange(self.field.q), self.d)
            v.setflags(write=False)
            self._values = v
        return self._values

    @property
    def label(self):
        return self.d

    def __repr__(self):
        return f"PowerMap(d={self.d}, {self.field!r})"


class TableMap:
    """Arbitrary function given by its lookup table of canonical indices."""

    def __init__(self, field: Field, table):
        arr = np.asarray(list(table), dtype=np.int64)
        if arr.shape != (field.q,):
            raise ValueError(f"table must have exactly {field.q} entries, got {arr.size}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"table entries must lie in [0, {field.q})")
        arr.setflags(write=False)
        self.field = field
        self.table = arr

    def __call__(self, x: FieldElement) -> FieldElement:
        return FieldElement(self.field, int(self.table[x.index]))

    def values(self) -> np.ndarray:
        return self.table

    @property
    def label(self):
        text = "\n".join(str(int(v)) for v in self.table)
        return "sha256:" + hashlib.sha256(text.encode()).hexdigest()

    def __repr__(self):
        return f"TableMap({self.label[:19]}..., {self.field!r})"


@dataclass
class SpectrumResult:
    field: Field
    fn_label: object
    c: FieldElement
    counts: dict
    uniformity: int
    witnesses: list = dc_field(default_factory=list)
    row_counts: dict | None = None
    method: str = "full"


# -- helpers ---------------------------------------------------------------------

def _check(F, *elems):
    for e in elems:
        if e.field != F.field:
            raise FieldMismatch(f"{e!r} is not in {F.field!r}")


def a_range(c: FieldElement):
    """Directions a entering the uniformity: all of GF(q), minus 0 when c = 1."""
    start = 1 if c.index == 1 else 0
    return range(start, c.field.q)


def _histogram(arr) -> dict:
    vals, cnt = np.unique(np.asarray(arr), return_counts=True)
    return {int(v): int(k) for v, k in zip(vals, cnt)}


def _count_rows(bvals: np.ndarray, q: int) -> np.ndarray:
    """Per-row histograms of a 2-D array of b indices."""
    m = bvals.shape[0]
    offs = (np.arange(m, dtype=np.int64) * q)[:, None]
    return np.bincount((bvals + offs).ravel(), minlength=m * q).reshape(m, q)


def derivative_values(F, c: FieldElement, a: FieldElement) -> np.ndarray:
    """Index array of F(x + a) - c F(x) over all x in canonical order."""
    _check(F, c, a)
    fld = F.field
    v = F.values()
    return fld.sub_arr(v[fld.shift_perm(a.index)], fld.mul_arr(v, c.index))


def _rows_for_cs(F, c_idx: np.ndarray, a: int) -> np.ndarray:
    fld = F.field
    v = F.values()
    shifted = v[fld.shift_perm(a)]
    return fld.sub_arr(shifted[None, :], fld.mul_arr(c_idx[:, None], v[None, :]))


def _rows_for_as(F, c: int, a_idx: np.ndarray) -> np.ndarray:
    fld = F.field
    v = F.values()
    xs = np.arange(fld.q, dtype=np.int64)
    shifted = v[fld.add_arr(xs[None, :], a_idx[:, None])]
    return fld.sub_arr(shifted, fld.mul_arr(v, c)[None, :])


def _chunks(seq, size):
    for i in range(0, len(seq), size):
        yield seq[i:i + size]


# -- operations ------------------------------------------------------------------

def c_derivative_count(F, c: FieldElement, a: FieldElement, b: FieldElement) -> int:
    """#{x : F(x + a) - c F(x) = b} by scalar enumeration of every x."""
    _check(F, c, a, b)
    return sum(1 for x in F.field.elements() if F(x + a) - c * F(x) == b)


def delta_at(F: PowerMap, c: FieldElement, x: FieldElement) -> FieldElement:
    """(x + 1)^d - c x^d."""
    _check(F, c, x)
    return (x + 1) ** F.d - c * x ** F.d


def row_spectrum(F, c: FieldElement, a: FieldElement) -> np.ndarray:
    """Counts indexed by b for fixed (c, a); the entries sum to q."""
    return np.bincount(derivative_values(F, c, a), minlength=F.field.q)


def _witnesses(F, c, rows, limit):
    """rows: iterable of (a, row_values, row_counts, target); up to `limit` maxima (None: all)."""
    if limit is None:
        limit = float("inf")
    out = []
    for a, vals, target_counts, target in rows:
        if len(out) >= limit:
            break
        for b in np.flatnonzero(target_counts == target):
            if len(out) >= limit:
                break
            sols = [int(x) for x in np.flatnonzero(vals == b)]
            out.append((a, int(b), sols))
    return out


def uniformity(F, c: FieldElement, witnesses: int | None = DEFAULT_WITNESSES,
               method: str = "auto", budget: Budget = DEFAULT_BUDGET) -> SpectrumResult:
    """c-differential uniformity of F with the full (a, b) spectrum.

    method="auto" uses the single-row shortcut for power maps when c != 1 and
    a full sweep otherwise; "full" forces the sweep.  witnesses=None keeps
    every maximal (a, b) among the rows computed.
    """
    _check(F, c)
    fld = F.field
    q = fld.q
    if method not in ("auto", "full"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto" and isinstance(F, PowerMap) and c.index != 1:
        vals1 = derivative_values(F, c, fld.one)
        row1 = np.bincount(vals1, minlength=q)
        vals0 = derivative_values(F, c, fld.zero)
        row0 = np.bincount(vals0, minlength=q)
        g = math.gcd(F.d, q - 1)
        u = max(int(row1.max()), g)
        hist1 = _histogram(row1)
        counts = Counter({v: k * (q - 1) for v, k in hist1.items()})
        counts.update(_histogram(row0))
        wit = _witnesses(F, c, [(0, vals0, row0, u), (1, vals1, row1, u)], witnesses)
        return SpectrumResult(fld, F.label, c, dict(sorted(counts.items())), u, wit,
                              row_counts=hist1, method="shortcut")

    if q > budget.ddt_max_q:
        raise BudgetExceeded(f"full sweep over GF({q}) exceeds budget q <= {budget.ddt_max_q}")
    counts = Counter()
    best = -1
    best_rows = []
    a_vals = np.arange(a_range(c).start, q, dtype=np.int64)
    size = max(1, _CHUNK_CELLS // q)
    for chunk in _chunks(a_vals, size):
        bvals = _rows_for_as(F, c.index, chunk)
        table = _count_rows(bvals, q)
        for v, k in zip(*np.unique(table, return_counts=True)):
            counts[int(v)] += int(k)
        mx = int(table.max())
        if mx > best:
            best, best_rows = mx, []
        if mx == best and (witnesses is None or len(best_rows) < witnesses):
            for i in np.flatnonzero(table.max(axis=1) == best):
                if witnesses is not None and len(best_rows) >= witnesses:
                    break
                best_rows.append((int(chunk[i]), bvals[i], table[i], best))
    wit = _witnesses(F, c, best_rows, witnesses)
    return SpectrumResult(fld, F.label, c, dict(sorted(counts.items())), best, wit, method="full")


def full_cddt(F, c: FieldElement, budget: Budget = DEFAULT_BUDGET) -> np.ndarray:
    """Complete q x q table of counts indexed [a, b], including a = 0."""
    _check(F, c)
    q = F.field.q
    if q > budget.ddt_max_q:
        raise BudgetExceeded(f"c-DDT of GF({q}) exceeds budget q <= {budget.ddt_max_q}")
    out = np.empty((q, q), dtype=np.int64)
    size = max(1, _CHUNK_CELLS // q)
    for chunk in _chunks(np.arange(q, dtype=np.int64), size):
        out[chunk] = _count_rows(_rows_for_as(F, c.index, chunk), q)
    return out


def cddt_uniformity(table: np.ndarray, c: FieldElement) -> int:
    """Maximum of a c-DDT over the admissible directions."""
    return int(table[a_range(c).start:].max())


def classify(result) -> str:
    u = result.uniformity if isinstance(result, SpectrumResult) else int(result)
    if u == 1:
        return "PcN"
    if u == 2:
        return "APcN"
    return f"Other({u})"


def _power_map_c_batch(F: PowerMap, c_idx: np.ndarray) -> list:
    q = F.field.q
    g = math.gcd(F.d, q - 1)
    out = []
    for chunk in _chunks(c_idx, max(1, _CHUNK_CELLS // q)):
        table = _count_rows(_rows_for_cs(F, chunk, 1), q)
        out.extend(max(int(m), g) for m in table.max(axis=1))
    return out


def all_c_sweep(F, c_set=None, workers: int | None = None,
                budget: Budget = DEFAULT_BUDGET) -> list:
    """[(c, uniformity)] ordered by the canonical index of c.

    c_set defaults to every element of the field; c = 1 yields the classical
    differential uniformity.
    """
    fld = F.field
    if c_set is None:
        cs = fld.elements()
    else:
        cs = sorted({fld(c) for c in c_set}, key=lambda e: e.index)
    if not cs:
        return []
    if len(cs) > 1 and fld.q > budget.sweep_max_q:
        raise BudgetExceeded(f"multi-c sweep over GF({fld.q}) exceeds budget q <= {budget.sweep_max_q}")
    results = {}
    special = [c for c in cs if c.index == 1 or not isinstance(F, PowerMap)]
    fast = np.array([c.index for c in cs if c.index != 1], dtype=np.int64) \
        if isinstance(F, PowerMap) else np.array([], dtype=np.int64)

    def run_fast(chunk):
        return list(zip(chunk.tolist(), _power_map_c_batch(F, chunk)))

    def run_special(c):
        return [(c.index, uniformity(F, c, witnesses=0, budget=budget).uniformity)]

    jobs = [(run_fast, ch) for ch in _chunks(fast, max(1, len(fast) // max(workers or 1, 1) + 1))]
    jobs += [(run_special, c) for c in special]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: job[0](job[1]), jobs))
    else:
        parts = [fn(arg) for fn, arg in jobs]
    for part in parts:
        results.update(part)
    return [(c, results[c.index]) for c in cs]


# -- exports ---------------------------------------------------------------------

def cddt_to_csv(table: np.ndarray) -> str:
    """Header "a,0,1,...,q-1" then one line per direction a."""
    q = table.shape[1]
    buf = io.StringIO()
    buf.write("a," + ",".join(str(b) for b in range(q)) + "\n")
    for a, row in enumerate(table):
        buf.write(f"{a}," + ",".join(str(int(v)) for v in row) + "\n")
    return buf.getvalue()


def spectrum_to_dict(result: SpectrumResult) -> dict:
    out = {
        "field": result.field.spec_string(),
        "d_or_table_digest": result.fn_label,
        "c": result.c.index,
        "spectrum": {str(v): k for v, k in sorted(result.counts.items())},
        "uniformity": result.uniformity,
        "witnesses": [{"a": a, "b": b, "solutions": sols} for a, b, sols in result.witnesses],
        "classification": classify(result),
        "method": result.method,
    }
    if result.row_counts is not None:
        out["row_spectrum"] = {str(v): k for v, k in sorted(result.row_counts.items())}
    return out
