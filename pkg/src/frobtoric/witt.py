"""Length-two Witt vectors over a prime field.

Addition carries ``sum_{j=1}^{p-1} (C(p,j)/p) a0^j b0^(p-j)`` into the second
component and multiplication is ``(a0 b0, a0^p b1 + b0^p a1)``. With these
laws ``W_2(F_p)`` is isomorphic to ``Z/p^2`` by ``(a0, a1) -> a0^p - p*a1``
(Teichmueller representative plus a correction), and the element ``p`` is
``(0, p - 1)``.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

MAX_PRIME = 97


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@lru_cache(maxsize=None)
def _checked(p: int) -> int:
    if not is_prime(p) or p > MAX_PRIME:
        raise ValueError(f"p must be a prime with 2 <= p <= {MAX_PRIME}, got {p}")
    return p


def check_prime(p: int) -> int:
    return _checked(int(p))


@lru_cache(maxsize=None)
def _carry_coefficients(p: int) -> tuple:
    # C(p, j)/p is an integer for 0 < j < p
    return tuple(comb(p, j) // p % p for j in range(1, p))


@lru_cache(maxsize=None)
def _carry_table(p: int) -> tuple:
    coeffs = _carry_coefficients(p)
    return tuple(
        tuple(sum(c * pow(a, j, p) * pow(b, p - j, p) for j, c in zip(range(1, p), coeffs)) % p for b in range(p))
        for a in range(p)
    )


def carry(a0: int, b0: int, p: int) -> int:
    return _carry_table(p)[a0 % p][b0 % p]


class WittPair:
    """An element (a0, a1) of W_2(F_p); treated as immutable."""

    __slots__ = ("a0", "a1", "p")

    def __init__(self, a0: int, a1: int, p: int):
        p = _checked(p)
        self.a0 = int(a0) % p
        self.a1 = int(a1) % p
        self.p = p

    @classmethod
    def _raw(cls, a0: int, a1: int, p: int) -> "WittPair":
        # trusted constructor for results already reduced mod a checked prime
        obj = object.__new__(cls)
        obj.a0, obj.a1, obj.p = a0, a1, p
        return obj

    def __eq__(self, other):
        if not isinstance(other, WittPair):
            return NotImplemented
        return self.a0 == other.a0 and self.a1 == other.a1 and self.p == other.p

    def __hash__(self):
        return hash((self.a0, self.a1, self.p))

    def _check(self, other):
        if not isinstance(other, WittPair):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"mismatched primes {self.p} and {other.p}")
        return other

    def __add__(self, other):
        if not isinstance(other, WittPair):
            return NotImplemented
        return w2_add(self, other)

    def __mul__(self, other):
        if not isinstance(other, WittPair):
            return NotImplemented
        return w2_mul(self, other)

    def __neg__(self):
        return w2_neg(self)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return w2_add(self, w2_neg(other))

    def __pow__(self, k: int):
        out = WittPair(1, 0, self.p)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return self.a0 == 0 and self.a1 == 0

    def reduce(self) -> int:
        """Reduction modulo p, the projection onto the first component."""
        return self.a0

    def __repr__(self):
        return f"W2({self.a0}, {self.a1}; p={self.p})"


def w2_add(a: WittPair, b: WittPair) -> WittPair:
    if a.p != b.p:
        raise ValueError(f"mismatched primes {a.p} and {b.p}")
    p = a.p
    return WittPair._raw((a.a0 + b.a0) % p, (a.a1 + b.a1 + _carry_table(p)[a.a0][b.a0]) % p, p)


def w2_mul(a: WittPair, b: WittPair) -> WittPair:
    if a.p != b.p:
        raise ValueError(f"mismatched primes {a.p} and {b.p}")
    # a0^p = a0 on the prime field, so the law reads (a0 b0, a0 b1 + b0 a1)
    p = a.p
    return WittPair._raw(a.a0 * b.a0 % p, (a.a0 * b.a1 + b.a0 * a.a1) % p, p)


def w2_neg(a: WittPair) -> WittPair:
    # the unique x with a + x = 0: first component -a0, then cancel the carry
    p = a.p
    x0 = (-a.a0) % p
    return WittPair(x0, -a.a1 - carry(a.a0, x0, p), p)


def w2_frobenius(a: WittPair) -> WittPair:
    p = a.p
    return WittPair(pow(a.a0, p, p), pow(a.a1, p, p), p)


def w2_zero(p: int) -> WittPair:
    return WittPair(0, 0, p)


def w2_one(p: int) -> WittPair:
    return WittPair(1, 0, p)


def teichmuller(x: int, p: int) -> WittPair:
    """The multiplicative lift (x, 0)."""
    return WittPair(x, 0, p)


def w2_from_int(m: int, p: int) -> WittPair:
    """Image of the integer m under Z -> W_2(F_p), by repeated addition of 1."""
    out = w2_zero(p)
    step = w2_one(p) if m >= 0 else w2_neg(w2_one(p))
    for _ in range(abs(m) % (p * p)):
        out = out + step
    return out


def p_multiply(x: int, p: int) -> WittPair:
    """Multiplication by p from F_p = W_2/p onto the ideal pW_2: x -> p * lift(x).

    In the present conventions ``p = (0, p - 1)``, so ``p * (x, *) = (0, -x)``.
    """
    return WittPair(0, -int(x), p)


def p_divide(c: WittPair) -> int:
    """Inverse of ``p_multiply`` on the ideal pW_2."""
    if c.a0 != 0:
        raise ValueError(f"{c} is not divisible by p")
    return (-c.a1) % c.p


def w2_iso_zp2(a: WittPair) -> int:
    """Ring isomorphism W_2(F_p) -> Z/p^2."""
    p = a.p
    return (pow(a.a0, p, p * p) - p * a.a1) % (p * p)


def zp2_to_w2(x: int, p: int) -> WittPair:
    """Inverse of ``w2_iso_zp2``."""
    p2 = p * p
    x %= p2
    a0 = x % p
    rest = (pow(a0, p, p2) - x) % p2
    return WittPair(a0, rest // p, p)


def add_table(p: int) -> list:
    elems = [WittPair(i, j, p) for i in range(p) for j in range(p)]
    return [[[s.a0, s.a1] for s in (a + b for b in elems)] for a in elems]


def mul_table(p: int) -> list:
    elems = [WittPair(i, j, p) for i in range(p) for j in range(p)]
    return [[[s.a0, s.a1] for s in (a * b for b in elems)] for a in elems]
