import random

import pytest

from frobtoric.errors import ChartMismatch
from frobtoric.lattice import Cone, dual_cone, hilbert_basis, projective_space, validate_fan
from frobtoric.monomial import (
    FP,
    W2,
    ChartTransition,
    MonomialElement,
    face_localize,
    frobenius_lift_chart,
    phi,
    random_element,
    reduce_mod_p,
    teichmuller_lift,
    verify_glue_compat,
)
from frobtoric.witt import WittPair

ORTHANT = Cone([(1, 0), (0, 1)])


def mono(u, p=2, ring=FP, chart=None, c=None):
    return MonomialElement.monomial(u, c, ring, p, chart)


def test_product_of_monomials():
    assert mono((1, 0)) * mono((0, 1)) == mono((1, 1))


def test_freshman_square_mod_two():
    e = mono((0, 0)) + mono((1, 0))
    assert e**2 == mono((0, 0)) + mono((2, 0))


def test_square_over_w2():
    one = WittPair(1, 0, 2)
    e = mono((0, 0), ring=W2, c=one) + mono((1, 0), ring=W2, c=one)
    expected = MonomialElement({(0, 0): one, (1, 0): WittPair(0, 1, 2), (2, 0): one}, W2, 2)
    assert e**2 == expected


def test_chart_membership_on_localization():
    tau = Cone([(1, 0)], rank=2)
    t = ChartTransition(ORTHANT, tau, (0, 1))
    e = mono((2, 3), chart=ORTHANT)
    moved = face_localize(e, t)
    assert moved.chart == tau
    assert moved * mono((0, -1), chart=tau) == mono((2, 2), chart=tau)
    with pytest.raises(ChartMismatch):
        mono((0, -1), chart=ORTHANT)


def test_transition_composite():
    tau = Cone([(1, 0)], rank=2)
    zero = Cone([], rank=2)
    a = ChartTransition.between(ORTHANT, tau)
    b = ChartTransition.between(tau, zero)
    direct = ChartTransition.between(ORTHANT, zero)
    for h in hilbert_basis(dual_cone(ORTHANT)):
        e = mono(h, chart=ORTHANT)
        assert face_localize(face_localize(e, a), b) == face_localize(e, direct)


def test_frobenius_lift_exponents():
    e = mono((1, 2), p=3, ring=W2, c=WittPair(1, 0, 3))
    assert set(frobenius_lift_chart(e).terms) == {(3, 6)}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lift_reduces_to_frobenius_and_is_multiplicative(p):
    rng = random.Random(p)
    hb = hilbert_basis(dual_cone(ORTHANT))
    for _ in range(20):
        a = random_element(ORTHANT, hb, W2, p, rng)
        b = random_element(ORTHANT, hb, W2, p, rng)
        assert frobenius_lift_chart(a * b) == frobenius_lift_chart(a) * frobenius_lift_chart(b)
        assert frobenius_lift_chart(a + b) == frobenius_lift_chart(a) + frobenius_lift_chart(b)
        assert reduce_mod_p(frobenius_lift_chart(a)) == reduce_mod_p(a) ** p


def test_phi_vanishes_on_monomials():
    for p in (2, 3, 5):
        assert phi(mono((2, 1), p=p, ring=W2, c=WittPair(1, 0, p))).is_zero()


def test_phi_of_sum_at_two():
    one = WittPair(1, 0, 2)
    b = mono((1, 0), ring=W2, c=one) + mono((0, 1), ring=W2, c=one)
    assert phi(b) == mono((1, 1))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_phi_product_rule(p):
    rng = random.Random(10 + p)
    hb = hilbert_basis(dual_cone(ORTHANT))
    for _ in range(20):
        a = teichmuller_lift(random_element(ORTHANT, hb, FP, p, rng))
        b = teichmuller_lift(random_element(ORTHANT, hb, FP, p, rng))
        ab, bb = reduce_mod_p(a), reduce_mod_p(b)
        assert phi(a * b) == ab**p * phi(b) + bb**p * phi(a)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_glue_compat_on_surfaces(surfaces, p):
    for f in surfaces.values():
        assert verify_glue_compat(f, p)["pass"]


def test_single_cone_fan_passes():
    f = validate_fan([(1, 0), (0, 1)], [(0, 1)])
    assert verify_glue_compat(f, 3)["pass"]
    assert verify_glue_compat(projective_space(1), 2)["pass"]


def test_mixed_charts_rejected():
    with pytest.raises(ChartMismatch):
        mono((1, 0), chart=ORTHANT) + mono((1, 0), chart=Cone([(1, 0)], rank=2))
