"""Semigroup rings k[S_sigma] and W_2[S_sigma] with the monomial Frobenius lift.

Elements are sparse maps from exponent vectors to coefficients, tagged by the
cone (in N) whose dual semigroup they live in. Coefficients are ints mod p
over F_p and ``WittPair`` objects over W_2(F_p).
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ChartMismatch, InternalInconsistency
from .lattice import Cone, Fan, dot, dual_cone, faces, hilbert_basis
from .witt import WittPair, check_prime, p_divide, p_multiply, w2_frobenius

FP = "Fp"
W2 = "W2"


def _zero(ring, p):
    return 0 if ring == FP else WittPair(0, 0, p)


def _one(ring, p):
    return 1 if ring == FP else WittPair(1, 0, p)


def _is_zero(c, ring):
    return c == 0 if ring == FP else c.is_zero()


def _coerce(c, ring, p):
    if ring == FP:
        return int(c) % p
    if isinstance(c, WittPair):
        return c
    if isinstance(c, tuple):
        return WittPair(c[0], c[1], p)
    return WittPair(int(c), 0, p)


def in_chart(u, chart: Cone | None) -> bool:
    if chart is None:
        return True
    return all(dot(u, v) >= 0 for v in chart.generators)


class MonomialElement:
    """A finite sum of coefficient * x^u with u in the chart semigroup."""

    __slots__ = ("terms", "ring", "p", "chart", "rank")

    def __init__(self, terms, ring=FP, p=2, chart: Cone | None = None, rank=None):
        self.p = check_prime(p)
        self.ring = ring
        self.chart = chart
        clean = {}
        for u, c in dict(terms).items():
            u = tuple(int(x) for x in u)
            c = _coerce(c, ring, self.p)
            if _is_zero(c, ring):
                continue
            if not in_chart(u, chart):
                raise ChartMismatch(f"exponent {u} is not in the semigroup of {chart}")
            clean[u] = c
        self.terms = clean
        if rank is None:
            if chart is not None:
                rank = chart.rank
            elif clean:
                rank = len(next(iter(clean)))
            else:
                raise ValueError("rank is required for an empty element off a chart")
        self.rank = rank

    @classmethod
    def monomial(cls, u, coeff=None, ring=FP, p=2, chart=None):
        c = _one(ring, p) if coeff is None else coeff
        return cls({tuple(u): c}, ring=ring, p=p, chart=chart, rank=len(u))

    def _like(self, terms, chart=None):
        return MonomialElement(terms, self.ring, self.p, chart if chart is not None else self.chart, self.rank)

    def _check(self, other):
        if not isinstance(other, MonomialElement):
            raise TypeError("expected a MonomialElement")
        if (other.ring, other.p) != (self.ring, self.p):
            raise ChartMismatch("coefficient rings differ")
        if other.chart != self.chart:
            raise ChartMismatch(f"chart {self.chart} differs from {other.chart}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for u, c in other.terms.items():
            out[u] = out[u] + c if u in out else c
        return self._like(out)

    def __neg__(self):
        return self._like({u: -c for u, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MonomialElement):
            return self.scale(other)
        self._check(other)
        out = {}
        for u, a in self.terms.items():
            for w, b in other.terms.items():
                k = tuple(x + y for x, y in zip(u, w))
                prod = a * b if self.ring == W2 else a * b % self.p
                out[k] = out[k] + prod if k in out else prod
        return self._like(out)

    __rmul__ = __mul__

    def scale(self, s):
        s = _coerce(s, self.ring, self.p)
        return self._like({u: c * s for u, c in self.terms.items()})

    def __pow__(self, k: int):
        out = self._like({(0,) * self.rank: _one(self.ring, self.p)})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MonomialElement):
            return NotImplemented
        return (self.ring, self.p, self.chart, self.terms) == (other.ring, other.p, other.chart, other.terms)

    def __hash__(self):
        return hash((self.ring, self.p, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        body = " + ".join(f"{c}*x^{u}" for u, c in sorted(self.terms.items())) or "0"
        return f"<{self.ring} p={self.p}: {body}>"


def reduce_mod_p(e: MonomialElement) -> MonomialElement:
    """W_2[S] -> F_p[S], coefficientwise reduction."""
    if e.ring != W2:
        raise ValueError("reduction needs W_2 coefficients")
    return MonomialElement({u: c.a0 for u, c in e.terms.items()}, FP, e.p, e.chart, e.rank)


def teichmuller_lift(e: MonomialElement) -> MonomialElement:
    """A lift F_p[S] -> W_2[S] using (c, 0) coefficients."""
    if e.ring != FP:
        raise ValueError("lift needs F_p coefficients")
    return MonomialElement({u: WittPair(c, 0, e.p) for u, c in e.terms.items()}, W2, e.p, e.chart, e.rank)


def ring_ops(a: MonomialElement, b: MonomialElement, op: str = "mul") -> MonomialElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "sub":
        return a - b
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class ChartTransition:
    """Localization k[S_sigma] -> k[S_sigma]_u = k[S_tau] for a face tau = sigma cap u^perp."""

    source: Cone
    target: Cone
    u: tuple

    def __post_init__(self):
        if not in_chart(self.u, self.source):
            raise ValueError(f"{self.u} is not in S_sigma")
        tight = [v for v in self.source.generators if dot(self.u, v) == 0]
        if Cone(tight, rank=self.source.rank) != self.target:
            raise ValueError("target is not sigma cap u^perp")

    @classmethod
    def between(cls, sigma: Cone, tau: Cone) -> "ChartTransition":
        """Transition to a face, with u the sum of dual rays vanishing on tau."""
        if tau not in faces(sigma):
            raise ValueError(f"{tau} is not a face of {sigma}")
        u = [0] * sigma.rank
        for w in sigma.dual_generators:
            if all(dot(w, v) == 0 for v in tau.generators):
                u = [a + b for a, b in zip(u, w)]
        return cls(sigma, tau, tuple(u))


def face_localize(e: MonomialElement, t: ChartTransition) -> MonomialElement:
    if e.chart != t.source:
        raise ChartMismatch("element does not live on the transition's source chart")
    return MonomialElement(e.terms, e.ring, e.p, t.target, e.rank)


def frobenius_lift_chart(e: MonomialElement) -> MonomialElement:
    """Sum c_u x^u -> sum F(c_u) x^(p u), the lift of Frobenius to W_2[S_sigma]."""
    if e.ring != W2:
        raise ValueError("the Frobenius lift acts on W_2 coefficients")
    p = e.p
    out = {}
    for u, c in e.terms.items():
        k = tuple(p * x for x in u)
        out[k] = w2_frobenius(c)
    return MonomialElement(out, W2, p, e.chart, e.rank)


def phi(b: MonomialElement) -> MonomialElement:
    """The F_p-valued function with F(b) = b^p + p * phi(b)."""
    if b.ring != W2:
        raise ValueError("phi takes a W_2 element")
    diff = frobenius_lift_chart(b) - b**b.p
    out = {}
    for u, c in diff.terms.items():
        if c.a0 != 0:
            raise InternalInconsistency(f"F(b) - b^p has non-divisible coefficient {c} at {u}")
        out[u] = p_divide(c)
    return MonomialElement(out, FP, b.p, b.chart, b.rank)


def times_p(e: MonomialElement) -> MonomialElement:
    """F_p[S] -> W_2[S], the map p * (-)."""
    return MonomialElement({u: p_multiply(c, e.p) for u, c in e.terms.items()}, W2, e.p, e.chart, e.rank)


def random_element(chart: Cone, generators, ring, p, rng: random.Random, terms=3, max_mult=2):
    """Random element supported on small non-negative combinations of generators."""
    out = {}
    n = chart.rank
    for _ in range(terms):
        u = [0] * n
        for g in generators:
            k = rng.randint(0, max_mult)
            u = [a + k * b for a, b in zip(u, g)]
        if ring == FP:
            c = rng.randrange(p)
        else:
            c = WittPair(rng.randrange(p), rng.randrange(p), p)
        out[tuple(u)] = c
    return MonomialElement(out, ring, p, chart, n)


def verify_glue_compat(f: Fan, p: int, samples: int = 5, seed: int = 0) -> dict:
    """Check that the chart Frobenius lifts commute with every face inclusion."""
    p = check_prime(p)
    rng = random.Random(seed)
    entries = []
    for sigma_idx in f.cones:
        sigma = f.cone(sigma_idx)
        hb = hilbert_basis(dual_cone(sigma))
        for tau in faces(sigma):
            t = ChartTransition.between(sigma, tau)
            ok = True
            checked = 0
            for h in hb:
                e = MonomialElement.monomial(h, WittPair(1, 0, p), W2, p, sigma)
                lhs = face_localize(frobenius_lift_chart(e), t)
                rhs = frobenius_lift_chart(face_localize(e, t))
                ok &= lhs == rhs
                checked += 1
            # the localized generator x^u must become a unit on tau
            inv = MonomialElement.monomial(tuple(-x for x in t.u), WittPair(1, 0, p), W2, p, tau)
            unit = face_localize(MonomialElement.monomial(t.u, WittPair(1, 0, p), W2, p, sigma), t) * inv
            ok &= unit.terms == {(0,) * f.rank: WittPair(1, 0, p)}
            for _ in range(samples):
                e = random_element(sigma, hb, W2, p, rng)
                lhs = face_localize(frobenius_lift_chart(e), t)
                rhs = frobenius_lift_chart(face_localize(e, t))
                red = reduce_mod_p(frobenius_lift_chart(e)) == reduce_mod_p(e) ** p
                ok &= lhs == rhs and red
                checked += 1
            entries.append(
                {
                    "sigma": list(sigma_idx),
                    "tau": tau.to_json(),
                    "u": list(t.u),
                    "checked": checked,
                    "pass": bool(ok),
                }
            )
    return {"prime": p, "pairs": entries, "pass": all(e["pass"] for e in entries)}
