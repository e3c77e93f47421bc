import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobtoric.witt import (
    WittPair,
    add_table,
    check_prime,
    p_divide,
    p_multiply,
    teichmuller,
    w2_frobenius,
    w2_from_int,
    w2_iso_zp2,
    zp2_to_w2,
)


def elements(p):
    return [WittPair(a, b, p) for a in range(p) for b in range(p)]


def test_one_plus_one_at_two():
    assert WittPair(1, 0, 2) + WittPair(1, 0, 2) == WittPair(0, 1, 2)


def test_square_of_two_vanishes():
    assert WittPair(0, 1, 2) * WittPair(0, 1, 2) == WittPair(0, 0, 2)


def test_teichmuller_product_at_three():
    assert WittPair(2, 0, 3) * WittPair(2, 0, 3) == WittPair(1, 0, 3)


def test_integer_addition_matches_residues_at_three():
    # 1 + 2 = 3, and 3 is the element p = (0, p - 1)
    assert w2_from_int(1, 3) + w2_from_int(2, 3) == w2_from_int(3, 3) == WittPair(0, 2, 3)
    # the Teichmueller lift of 2 is 8 = -1 in Z/9, so (1,0) + (2,0) = 0
    assert w2_iso_zp2(teichmuller(2, 3)) == 8
    assert WittPair(1, 0, 3) + WittPair(2, 0, 3) == WittPair(0, 0, 3)


def test_p_multiply_lands_on_p_times_lift():
    assert p_multiply(0, 3) == WittPair(0, 0, 3)
    assert w2_iso_zp2(p_multiply(2, 3)) == 6


@pytest.mark.parametrize("p", [2, 3])
def test_ring_axioms_exhaustive(p):
    E = elements(p)
    zero, one = WittPair(0, 0, p), WittPair(1, 0, p)
    for a in E:
        assert a + zero == a and a * one == a and a + (-a) == zero
        for b in E:
            assert a + b == b + a and a * b == b * a
            for c in E:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p", [5, 7])
def test_ring_axioms_random(p):
    rng = random.Random(p)
    for _ in range(10_000):
        a, b, c = (WittPair(rng.randrange(p), rng.randrange(p), p) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_isomorphism_to_residues(p):
    E = elements(p)
    m = p * p
    assert sorted(w2_iso_zp2(a) for a in E) == list(range(m))
    for a, b in product(E, E):
        assert w2_iso_zp2(a + b) == (w2_iso_zp2(a) + w2_iso_zp2(b)) % m
        assert w2_iso_zp2(a * b) == w2_iso_zp2(a) * w2_iso_zp2(b) % m
    for x in range(m):
        assert w2_iso_zp2(zp2_to_w2(x, p)) == x


def test_addition_table_matches_z4():
    E = elements(2)
    table = add_table(2)
    for i, a in enumerate(E):
        for j, b in enumerate(E):
            s = WittPair(*table[i][j], 2)
            assert w2_iso_zp2(s) == (w2_iso_zp2(a) + w2_iso_zp2(b)) % 4
    assert w2_iso_zp2(WittPair(0, 1, 2)) == 2


@pytest.mark.parametrize("p", [2, 3])
def test_frobenius_is_identity_and_ring_map(p):
    E = elements(p)
    for a in E:
        assert w2_frobenius(a) == a
        for b in E:
            assert w2_frobenius(a * b) == w2_frobenius(a) * w2_frobenius(b)
            assert w2_frobenius(a + b) == w2_frobenius(a) + w2_frobenius(b)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_p_multiply_additive_and_square_zero(p):
    for x in range(p):
        for y in range(p):
            assert p_multiply(x, p) + p_multiply(y, p) == p_multiply((x + y) % p, p)
            assert (p_multiply(x, p) * p_multiply(y, p)).is_zero()
        assert p_divide(p_multiply(x, p)) == x
        # multiplication by p on W_2 kills the second component
        assert p_multiply(x, p) == w2_from_int(p, p) * WittPair(x, 0, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_kernel_of_reduction_is_p_ideal(p):
    kernel = {a for a in elements(p) if a.reduce() == 0}
    assert kernel == {p_multiply(x, p) for x in range(p)}


@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(), st.integers())
def test_integers_map_homomorphically(p, m, k):
    lhs = w2_iso_zp2(zp2_to_w2(m, p) * zp2_to_w2(k, p) + zp2_to_w2(m, p))
    assert lhs == (m * k + m) % (p * p)


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 101])
def test_rejects_bad_primes(bad):
    with pytest.raises(ValueError):
        check_prime(bad)
    with pytest.raises(ValueError):
        WittPair(0, 0, bad)


def test_mismatched_primes():
    with pytest.raises(ValueError):
        WittPair(1, 0, 2) + WittPair(1, 0, 3)
