"""M-graded differential forms on the torus in the dlog frame.

A form is a finite sum ``x^u * omega_u`` where ``omega_u`` is a multivector in
Lambda^k(F_p^n) written in the basis dlog_I = dlog x_{i1} ^ ... ^ dlog x_{ik}.
Chart forms (sections of the reflexive sheaves of forms on an affine toric
chart) are torus forms whose graded pieces pass ``chart_membership``.
"""
from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from .errors import DegeneratePairing
from .lattice import dot
from .linalg import (
    exterior_power_basis,
    left_wedge_matrix,
    merge_sign,
    nullspace_mod_p,
    rank_mod_p,
    row_basis_mod_p,
    solve_mod_p,
    wedge_basis,
)
from .monomial import FP, MonomialElement, phi, teichmuller_lift
from .witt import check_prime


class TorusForm:
    __slots__ = ("n", "degree", "p", "terms")

    def __init__(self, terms, n: int, degree: int, p: int):
        self.n = n
        self.degree = degree
        self.p = check_prime(p)
        if degree < 0:
            raise ValueError(f"negative form degree {degree}")
        clean = {}
        for u, vec in dict(terms).items():
            u = tuple(int(x) for x in u)
            piece = {}
            for I, c in dict(vec).items():
                I = tuple(I)
                if len(I) != degree:
                    raise ValueError(f"index {I} does not have length {degree}")
                c = int(c) % p
                if c:
                    piece[I] = c
            if piece:
                clean[u] = piece
        self.terms = clean

    @classmethod
    def zero(cls, n, degree, p):
        return cls({}, n, degree, p)

    @classmethod
    def function(cls, e: MonomialElement) -> "TorusForm":
        if e.ring != FP:
            raise ValueError("functions are taken with F_p coefficients")
        return cls({u: {(): c} for u, c in e.terms.items()}, e.rank, 0, e.p)

    @classmethod
    def monomial(cls, u, I=(), coeff=1, p=2):
        return cls({tuple(u): {tuple(I): coeff}}, len(u), len(I), p)

    @classmethod
    def from_vector(cls, u, vec, degree, p):
        n = len(u)
        piece = {I: int(c) for I, c in zip(wedge_basis(n, degree), vec) if int(c) % p}
        return cls({tuple(u): piece}, n, degree, p)

    def grade_vector(self, u) -> np.ndarray:
        basis = wedge_basis(self.n, self.degree)
        piece = self.terms.get(tuple(u), {})
        return np.array([piece.get(I, 0) for I in basis], dtype=np.int64)

    def _compatible(self, other):
        if (self.n, self.degree, self.p) != (other.n, other.degree, other.p):
            raise ValueError("forms of different shape")

    def __add__(self, other):
        self._compatible(other)
        out = {u: dict(v) for u, v in self.terms.items()}
        for u, vec in other.terms.items():
            tgt = out.setdefault(u, {})
            for I, c in vec.items():
                tgt[I] = tgt.get(I, 0) + c
        return TorusForm(out, self.n, self.degree, self.p)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: int):
        return TorusForm({u: {I: c * s for I, c in v.items()} for u, v in self.terms.items()}, self.n, self.degree, self.p)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, TorusForm):
            return NotImplemented
        return (self.n, self.degree, self.p, self.terms) == (other.n, other.degree, other.p, other.terms)

    def __hash__(self):
        return hash((self.n, self.degree, self.p, frozenset((u, frozenset(v.items())) for u, v in self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def grades(self):
        return sorted(self.terms)

    def __repr__(self):
        parts = []
        for u in sorted(self.terms):
            for I, c in sorted(self.terms[u].items()):
                dl = "^".join(f"dlog{i + 1}" for i in I) or "1"
                parts.append(f"{c}*x^{u}*{dl}")
        return f"<{self.degree}-form p={self.p}: {' + '.join(parts) or '0'}>"


def wedge(a: TorusForm, b: TorusForm) -> TorusForm:
    if (a.n, a.p) != (b.n, b.p):
        raise ValueError("forms of different shape")
    k = a.degree + b.degree
    out = {}
    for u, va in a.terms.items():
        for w, vb in b.terms.items():
            g = tuple(x + y for x, y in zip(u, w))
            tgt = out.setdefault(g, {})
            for I, ca in va.items():
                for J, cb in vb.items():
                    s, K = merge_sign(I, J)
                    if s:
                        tgt[K] = tgt.get(K, 0) + s * ca * cb
    return TorusForm(out, a.n, k, a.p)


def d(omega: TorusForm) -> TorusForm:
    """Exterior derivative: the u-graded piece maps to u ^ omega_u."""
    out = {}
    for u, vec in omega.terms.items():
        tgt = out.setdefault(u, {})
        for i, ui in enumerate(u):
            if ui % omega.p == 0:
                continue
            for I, c in vec.items():
                s, K = merge_sign((i,), I)
                if s:
                    tgt[K] = tgt.get(K, 0) + s * ui * c
    return TorusForm(out, omega.n, omega.degree + 1, omega.p)


def cartier(omega: TorusForm) -> TorusForm:
    """x^(p u) omega -> x^u omega on Frobenius-degree grades; other grades -> 0."""
    p = omega.p
    out = {}
    for u, vec in omega.terms.items():
        if all(x % p == 0 for x in u):
            out[tuple(x // p for x in u)] = dict(vec)
    return TorusForm(out, omega.n, omega.degree, p)


def delta(a: MonomialElement) -> TorusForm:
    """The derivation a -> a^(p-1) da + d phi(lift a) into closed 1-forms."""
    p = a.p
    fa = TorusForm.function(a)
    power = TorusForm.function(a ** (p - 1))
    correction = d(TorusForm.function(phi(teichmuller_lift(a))))
    return wedge(power, d(fa)) + correction


@lru_cache(maxsize=None)
def _sigma_dlog(n: int, i: int, p: int) -> TorusForm:
    # sigma(dlog x_i) = sigma(x_i^-1) * sigma(dx_i) = x_i^(-p) * delta(x_i)
    e = tuple(int(j == i) for j in range(n))
    xi = MonomialElement.monomial(e, 1, FP, p)
    inv = TorusForm.monomial(tuple(-p * x for x in e), (), 1, p)
    return wedge(inv, delta(xi))


def sigma_split(omega: TorusForm) -> TorusForm:
    """The splitting x^u c dlog_I -> c x^(pu) sigma(dlog_{i1}) ^ ... (Frobenius-semilinear)."""
    n, p = omega.n, omega.p
    out = TorusForm.zero(n, omega.degree, p)
    for u, vec in omega.terms.items():
        for I, c in vec.items():
            term = TorusForm.monomial(tuple(p * x for x in u), (), c, p)
            for i in I:
                term = wedge(term, _sigma_dlog(n, i, p))
            out = out + term
    return out


def _pairing_matrix(n: int, i: int, p: int) -> np.ndarray:
    """Rows J (degree n-i), columns I (degree i): coefficient of dlog_[n] in dlog_J ^ dlog_I."""
    rows = wedge_basis(n, n - i)
    cols = wedge_basis(n, i)
    P = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, J in enumerate(rows):
        for c, I in enumerate(cols):
            s, _ = merge_sign(J, I)
            P[r, c] = s
    return P % p


def duality_split(omega: TorusForm) -> TorusForm:
    """The splitting of sigma obtained from the wedge pairing.

    The result eta satisfies z ^ eta = C(sigma(z) ^ omega) for every form z of
    complementary degree; by linearity over functions it suffices to test
    z = dlog_J, and eta is solved grade by grade from the pairing matrix.
    """
    n, i, p = omega.n, omega.degree, omega.p
    top = tuple(range(n))
    values = {}
    for J in wedge_basis(n, n - i):
        z = TorusForm.monomial((0,) * n, J, 1, p)
        val = cartier(wedge(sigma_split(z), omega))
        values[J] = val
    grades = sorted({w for v in values.values() for w in v.terms})
    P = _pairing_matrix(n, i, p)
    out = {}
    for w in grades:
        rhs = np.array([values[J].terms.get(w, {}).get(top, 0) for J in wedge_basis(n, n - i)], dtype=np.int64)
        if rank_mod_p(P, p) < P.shape[1]:
            raise DegeneratePairing(f"pairing in degree {i} is singular mod {p}")
        x = solve_mod_p(P, rhs, p)
        if x is None:
            raise DegeneratePairing(f"pairing system inconsistent at grade {w}")
        out[w] = {I: int(c) for I, c in zip(wedge_basis(n, i), x)}
    return TorusForm(out, n, i, p)


# --- chart membership ----------------------------------------------------


def membership_space(u, rays, coeffs, p: int):
    """Basis rows of W_u in F_p^n, or None when x^u is not allowed on the chart.

    ``rays`` are the ray generators of the chart cone and ``coeffs`` the
    divisor coefficients on them. A grade is allowed when <u, v> >= -a for every
    ray; W_u is cut out mod p by the rays where equality holds.
    """
    n = len(u)
    tight = []
    for v, a in zip(rays, coeffs):
        val = dot(u, v) + a
        if val < 0:
            return None
        if val == 0:
            tight.append([x % p for x in v])
    if not tight:
        return np.eye(n, dtype=np.int64)
    return nullspace_mod_p(np.array(tight, dtype=np.int64), p)


def membership_basis(u, rays, coeffs, degree: int, p: int) -> np.ndarray:
    """Rows spanning the allowed multivectors Lambda^degree(W_u) at grade u."""
    n = len(u)
    W = membership_space(u, rays, coeffs, p)
    if W is None:
        return np.zeros((0, len(wedge_basis(n, degree))), dtype=np.int64)
    return exterior_power_basis(W, degree, p, n)


def chart_membership(omega: TorusForm, rays, coeffs=None) -> bool:
    """True iff every graded piece of omega is a section of the twisted sheaf of forms on the chart."""
    rays = [tuple(v) for v in rays]
    coeffs = [0] * len(rays) if coeffs is None else list(coeffs)
    p = omega.p
    for u in omega.terms:
        L = membership_basis(u, rays, coeffs, omega.degree, p)
        vec = omega.grade_vector(u)
        if L.shape[0] == 0:
            return False
        if rank_mod_p(np.vstack([L, vec]), p) != rank_mod_p(L, p):
            return False
    return True


def zb_subspaces(rays, u, degree: int, p: int, coeffs=None):
    """Bases (rows) of closed and exact forms at grade u inside the chart module."""
    n = len(u)
    coeffs = [0] * len(rays) if coeffs is None else list(coeffs)
    Li = membership_basis(u, rays, coeffs, degree, p)
    if degree < n:
        D = left_wedge_matrix(u, degree, p)
        if Li.shape[0]:
            null = nullspace_mod_p((D @ Li.T) % p, p)
            Z = (null @ Li) % p
        else:
            Z = Li
    else:
        Z = Li
    if degree > 0:
        Lprev = membership_basis(u, rays, coeffs, degree - 1, p)
        if Lprev.shape[0]:
            B = row_basis_mod_p(((left_wedge_matrix(u, degree - 1, p) @ Lprev.T) % p).T, p)
        else:
            B = np.zeros((0, len(wedge_basis(n, degree))), dtype=np.int64)
    else:
        B = np.zeros((0, 1), dtype=np.int64)
    return row_basis_mod_p(Z, p) if Z.shape[0] else Z, B


def random_chart_form(rays, degree: int, p: int, rng: random.Random, box: int = 4, terms: int = 3, coeffs=None) -> TorusForm:
    """A random section of the sheaf of ``degree``-forms on the chart spanned by ``rays``."""
    rays = [tuple(v) for v in rays]
    n = len(rays[0])
    coeffs = [0] * len(rays) if coeffs is None else list(coeffs)
    out = TorusForm.zero(n, degree, p)
    tries = 0
    added = 0
    while added < terms and tries < 1000:
        tries += 1
        u = tuple(rng.randint(-box, box) for _ in range(n))
        L = membership_basis(u, rays, coeffs, degree, p)
        if L.shape[0] == 0:
            continue
        c = np.array([rng.randrange(p) for _ in range(L.shape[0])], dtype=np.int64)
        vec = (c @ L) % p
        out = out + TorusForm.from_vector(u, vec, degree, p)
        added += 1
    return out


def cartier_target_dim(rays, u, degree: int, p: int) -> int:
    """dim of the graded piece that the Cartier isomorphism predicts at grade u."""
    if any(x % p for x in u):
        return 0
    return membership_basis(tuple(x // p for x in u), rays, [0] * len(rays), degree, p).shape[0]
