from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobtoric import cech
from frobtoric.cech import (
    CechEngine,
    DimTable,
    Interval,
    ToricDivisor,
    ample_check,
    bott_verify,
    cohomology_dims,
    default_box,
    degeneration_check,
)
from frobtoric.errors import CapacityError, InternalInconsistency, NotCartier
from frobtoric.lattice import projective_space, validate_fan

P1 = projective_space(1)


def dims(fan, j, D, p=2, **kw):
    D = D or ToricDivisor.zero(fan)
    t = cohomology_dims(fan, j, D, p=p, **kw)
    assert t.sound
    return [t[(q, j, D.label())] for q in range(fan.rank + 1)]


def test_ample_examples(surfaces):
    assert ample_check(surfaces["P2"], ToricDivisor([1, 0, 0]))
    r = ample_check(surfaces["P1xP1"], ToricDivisor([1, 0, 0, 0]))
    assert not r and r.failing_wall["pairing"] == r.failing_wall["bound"]
    for f in surfaces.values():
        assert not ample_check(f, ToricDivisor.zero(f))


def test_linearization_certificate(surfaces):
    f = surfaces["P112"]
    r = ample_check(f, ToricDivisor([0, 2, 0]))
    assert r
    for sigma, m in r.certificate.items():
        for i in sigma:
            assert sum(a * b for a, b in zip(m, f.rays[i])) == -[0, 2, 0][i]


def test_not_cartier(surfaces):
    with pytest.raises(NotCartier):
        ample_check(surfaces["P112"], ToricDivisor([1, 0, 0]))


def test_incomplete_fan_rejected():
    f = validate_fan([(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(ValueError):
        cohomology_dims(f, 0, None)


def test_positive_controls(surfaces):
    assert dims(P1, 0, ToricDivisor([0, -2])) == [0, 1]
    assert dims(surfaces["P2"], 1, None) == [0, 1, 0]
    assert dims(surfaces["F1"], 1, None) == [0, 2, 0]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_hyperplane_twist_kills_one_forms_on_p2(surfaces, p):
    assert dims(surfaces["P2"], 1, ToricDivisor([1, 0, 0]), p) == [0, 0, 0]


@settings(max_examples=25, deadline=None)
@given(st.integers(-6, 6), st.sampled_from([2, 3, 5]))
def test_line_bundles_on_p1(k, p):
    h = dims(P1, 0, ToricDivisor([k, 0]), p)
    assert h == [max(k + 1, 0), max(-k - 1, 0)]


def test_default_box_covers_arrangement():
    f = projective_space(2)
    box = default_box(f, ToricDivisor([3, 0, 0]))
    # vertices (-3,0), (-3,3), (0,0) widened by 3
    assert box == [(-6, 3), (-3, 6)]


def test_small_box_is_flagged():
    t = cohomology_dims(P1, 0, ToricDivisor([0, -2]), box=[(-1, -1)])
    assert not t.sound
    assert t.entries[(1, 0, "0,-2")] == Interval(1, None)


def test_capacity(monkeypatch):
    monkeypatch.setattr(cech, "MAX_GRADES", 3)
    with pytest.raises(CapacityError):
        cohomology_dims(P1, 0, None)


def _patterns(fan, D, p):
    e = CechEngine(fan, p)
    grid, _ = cech._box_grid(default_box(fan, D))
    return e, np.unique(e.statuses(grid, D), axis=0)


@pytest.mark.parametrize("name", ["P2", "F1", "P112"])
def test_differential_squares_to_zero_and_euler(surfaces, name):
    f = surfaces[name]
    D = ToricDivisor([1] + [0] * (len(f.rays) - 1))
    e, pats = _patterns(f, D, 3)
    for j in range(3):
        assert e.check_differential(pats[0], j)
        for pat in pats:
            h = e.cohomology(pat, j)
            assert sum((-1) ** q * x for q, x in enumerate(h)) == e.euler_characteristic(pat, j)


@pytest.mark.parametrize("name", ["P1xP1", "F1"])
def test_cover_order_does_not_matter(surfaces, name):
    f = surfaces[name]
    D = ToricDivisor([-1, 0, 2, -3])
    ref = {j: dims(f, j, D) for j in range(3)}
    for order in list(permutations(range(len(f.maximal_cones))))[1:6]:
        e = CechEngine(f, 2, order=order)
        for j in range(3):
            t = cohomology_dims(f, j, D, p=2, engine=e)
            assert [t[(q, j, D.label())] for q in range(3)] == ref[j]


def test_bott_verify_statuses(surfaces):
    r = bott_verify(surfaces["P2"], ToricDivisor([1, 0, 0]), p=2)
    assert r["status"] == "PASS"
    assert all(c["dim"] == 0 and c["sound"] for c in r["checks"])
    with pytest.raises(ValueError):
        bott_verify(surfaces["P1xP1"], ToricDivisor([1, 0, 0, 0]))


def test_bott_on_singular_surface_at_three(surfaces):
    assert bott_verify(surfaces["P112"], ToricDivisor([0, 2, 0]), p=3)["status"] == "PASS"


def test_degeneration_examples(surfaces):
    r = degeneration_check(P1, p=2)
    assert r["e1_sums"] == r["hypercohomology"] == [1, 0, 1]
    r = degeneration_check(surfaces["P2"], p=2)
    assert r["e1_sums"] == r["hypercohomology"]
    assert r["betti"] == [1, 0, 1, 0, 1]
    r = degeneration_check(surfaces["P1xP1"], p=3)
    assert r["hypercohomology"] == [1, 0, 2, 0, 1] and r["betti_match"]


def test_degeneration_on_singular_surface(surfaces):
    r = degeneration_check(surfaces["P112"], p=2)
    assert r["status"] == "PASS" and r["betti"] is None


def test_dimtable_merge():
    a = DimTable({(0, 0, "x"): 1})
    b = DimTable({(1, 0, "x"): 2})
    assert a.merge(b).entries == {(0, 0, "x"): 1, (1, 0, "x"): 2}
    with pytest.raises(InternalInconsistency):
        a.merge(DimTable({(0, 0, "x"): 3}))


def test_dimtable_json_order():
    t = DimTable({(1, 1, "0"): 0, (0, 1, "0"): 0, (0, 0, "0"): 1})
    rows = t.to_json()["entries"]
    assert [(r["p_form"], r["q"]) for r in rows] == [(0, 0), (1, 0), (1, 1)]
    assert list(rows[0]) == ["p_form", "q", "grades", "twist", "dim"]


def test_interval_checks():
    with pytest.raises(ValueError):
        Interval(3, 1)
    assert Interval(2, 2).exact and Interval(1, None).to_json() == [1, None]
