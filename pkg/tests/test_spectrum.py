import json
import math
import random
from collections import Counter

import numpy as np
import pytest

from cdiff import gfpoly
from cdiff.errors import BudgetExceeded, FieldMismatch
from cdiff.field import build_field, field_isomorphism
from cdiff.spectrum import (Budget, PowerMap, TableMap, all_c_sweep, c_derivative_count,
                            cddt_to_csv, cddt_uniformity, classify, delta_at, full_cddt,
                            row_spectrum, spectrum_to_dict, uniformity)

from conftest import fields_upto


def scalar_cddt(F, c):
    """Brute force with element arithmetic only: table[a][b]."""
    f = F.field
    table = np.zeros((f.q, f.q), dtype=np.int64)
    vals = [F(x) for x in f.elements()]
    for a in f.elements():
        for x in f.elements():
            b = vals[(x + a).index] - c * vals[x.index]
            table[a.index, b.index] += 1
    return table


def test_c_derivative_count_gf5():
    f = build_field(5, 1)
    F = PowerMap(f, 13)
    assert c_derivative_count(F, f(4), f(1), f(0)) == 1
    assert delta_at(F, f(4), f(2)) == f.zero


def test_gf9_square_row():
    f = build_field(3, 2)
    F = PowerMap(f, 2)
    c = f.minus_one
    row = row_spectrum(F, c, f.one)
    assert row.sum() == 9
    assert sorted(Counter(row.tolist()).items()) == [(0, 4), (1, 1), (2, 4)]
    # Delta(x) = Delta(y) iff (x - y)(x + y + 1) = 0
    for x0 in f.elements():
        b = delta_at(F, c, x0)
        assert c_derivative_count(F, c, f.one, b) == (1 if x0 == 1 else 2)


@pytest.mark.parametrize("p,n", fields_upto(81))
def test_delta_endpoints(p, n):
    f = build_field(p, n)
    for d in range(1, 2 * f.q):
        F = PowerMap(f, d)
        for c in f.elements():
            assert delta_at(F, c, f.zero) == f.one
            assert delta_at(F, c, f.minus_one) == (-1) ** (d + 1) * c


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (2, 4)])
def test_full_cddt_matches_scalar_oracle(p, n):
    f = build_field(p, n)
    for d in range(1, f.q):
        F = PowerMap(f, d)
        for c in f.elements():
            table = full_cddt(F, c)
            assert (table == scalar_cddt(F, c)).all()
            assert (table.sum(axis=1) == f.q).all()
            assert uniformity(F, c).uniformity == cddt_uniformity(table, c)
            assert uniformity(F, c, method="full").uniformity == cddt_uniformity(table, c)


def test_shortcut_against_full_table_random():
    rng = random.Random(20240601)
    pool = fields_upto(128)
    for _ in range(60):
        p, n = rng.choice(pool)
        f = build_field(p, n)
        d = rng.randrange(1, f.q)
        c = f(rng.choice([i for i in range(f.q) if i != 1]))
        F = PowerMap(f, d)
        fast = uniformity(F, c)
        full = uniformity(F, c, method="full")
        assert fast.method == "shortcut" and full.method == "full"
        assert fast.uniformity == full.uniformity
        assert fast.counts == full.counts


def test_c_equals_one_excludes_zero_direction():
    f = build_field(2, 5)
    F = PowerMap(f, 3)
    res = uniformity(F, f.one)
    assert res.uniformity == 2
    assert sum(res.counts.values()) == (f.q - 1) * f.q


@pytest.mark.parametrize("n", [3, 5, 7])
def test_gold_is_apn(n):
    f = build_field(2, n)
    assert uniformity(PowerMap(f, 3), f.one).uniformity == 2


@pytest.mark.parametrize("p,n", fields_upto(81))
def test_cyclotomic_transport(p, n):
    f = build_field(p, n)
    frob_inv = p ** (n - 1)
    for d in range(1, f.q - 1):
        base = dict((c.index, u) for c, u in all_c_sweep(PowerMap(f, d)))
        moved = all_c_sweep(PowerMap(f, (p * d) % (f.q - 1) or f.q - 1))
        for c, u in moved:
            assert u == base[(c ** frob_inv).index]


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (3, 2), (3, 3), (2, 5), (5, 2)])
def test_modulus_independence(p, n):
    mods = gfpoly.irreducibles(p, n)
    src, dst = build_field(p, n, mods[0]), build_field(p, n, mods[-1])
    phi = field_isomorphism(src, dst)
    for d in range(1, src.q - 1):
        a = all_c_sweep(PowerMap(src, d))
        b = dict((c.index, u) for c, u in all_c_sweep(PowerMap(dst, d)))
        for c, u in a:
            assert u == b[int(phi[c.index])]


def test_sweep_examples():
    f7 = build_field(7, 1)
    assert {u for c, u in all_c_sweep(PowerMap(f7, 2)) if c != 1} == {2}
    f27 = build_field(3, 3)
    assert all_c_sweep(PowerMap(f27, 7), [f27.minus_one]) == [(f27.minus_one, 1)]
    for p, n in [(2, 4), (3, 2), (5, 1)]:
        f = build_field(p, n)
        assert all_c_sweep(PowerMap(f, f.q - 2), [f.zero])[0][1] == 1


def test_sweep_is_ordered_and_thread_independent():
    f = build_field(3, 4)
    F = PowerMap(f, 14)
    one = all_c_sweep(F, workers=1)
    many = all_c_sweep(F, workers=4)
    assert one == many
    assert [c.index for c, _ in one] == list(range(f.q))


def test_table_map_matches_power_map():
    f = build_field(2, 4)
    P = PowerMap(f, 7)
    T = TableMap(f, P.values().tolist())
    for c in f.elements():
        assert uniformity(T, c).uniformity == uniformity(P, c).uniformity
    ident = TableMap(f, list(range(16)))
    assert uniformity(ident, f.zero).uniformity == 1
    assert uniformity(ident, f.one).uniformity == 16
    assert T.label.startswith("sha256:")


def test_table_map_rejects_bad_tables():
    f = build_field(2, 3)
    with pytest.raises(ValueError):
        TableMap(f, [0] * 7)
    with pytest.raises(ValueError):
        TableMap(f, list(range(7)) + [8])


def test_witnesses_reach_the_maximum():
    f = build_field(3, 2)
    F = PowerMap(f, 4)
    res = uniformity(F, f(2), witnesses=None)
    assert res.uniformity == 4
    assert res.witnesses
    for a, b, sols in res.witnesses:
        assert len(sols) == 4
        assert c_derivative_count(F, f(2), f(a), f(b)) == 4


def test_power_map_errors():
    f = build_field(5, 1)
    with pytest.raises(ValueError):
        PowerMap(f, 0)
    with pytest.raises(FieldMismatch):
        uniformity(PowerMap(f, 3), build_field(7, 1).one)


def test_budgets():
    f = build_field(2, 7)
    tight = Budget(ddt_max_q=64, sweep_max_q=64)
    with pytest.raises(BudgetExceeded):
        full_cddt(PowerMap(f, 3), f.one, budget=tight)
    with pytest.raises(BudgetExceeded):
        uniformity(PowerMap(f, 3), f.one, budget=tight)
    with pytest.raises(BudgetExceeded):
        all_c_sweep(PowerMap(f, 3), budget=tight)
    # single c via the shortcut needs no full table
    assert uniformity(PowerMap(f, 3), f(5), budget=tight).uniformity == 3


def test_csv_export():
    f = build_field(7, 1)
    table = full_cddt(PowerMap(f, 5), f.minus_one)
    lines = cddt_to_csv(table).splitlines()
    assert lines[0] == "a,0,1,2,3,4,5,6"
    assert len(lines) == 8
    for a, line in enumerate(lines[1:]):
        cells = list(map(int, line.split(",")))
        assert cells[0] == a and sum(cells[1:]) == 7
    assert table.max() == 2


def test_json_export():
    f = build_field(3, 2)
    res = uniformity(PowerMap(f, 2), f.minus_one)
    obj = json.loads(json.dumps(spectrum_to_dict(res)))
    assert list(obj) == ["field", "d_or_table_digest", "c", "spectrum", "uniformity",
                         "witnesses", "classification", "method", "row_spectrum"]
    assert obj["spectrum"] == {"0": 36, "1": 9, "2": 36}
    assert obj["row_spectrum"] == {"0": 4, "1": 1, "2": 4}
    assert obj["classification"] == "APcN"
    assert sum(obj["spectrum"].values()) == f.q * f.q


def test_classify():
    assert [classify(u) for u in (1, 2, 5)] == ["PcN", "APcN", "Other(5)"]


def test_spectrum_accounts_for_every_cell():
    f = build_field(5, 2)
    F = PowerMap(f, 13)
    for c in (f(0), f(2), f.minus_one):
        res = uniformity(F, c)
        assert sum(res.counts.values()) == f.q * f.q
        assert sum(v * k for v, k in res.counts.items()) == f.q * f.q
        assert max(res.counts) >= math.gcd(13, f.q - 1)
