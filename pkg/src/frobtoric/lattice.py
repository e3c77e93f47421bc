"""Exact convex geometry of rational cones and fans in a lattice of rank <= 6.

Cones are stored with primitive, irredundant generators so that two cones
built from the same set of points compare equal. The lattice a cone lives in
(``"N"`` for cones of a fan, ``"M"`` for dual cones and semigroups) is kept
as a tag; it only matters for bookkeeping.
"""
from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations, product
from math import comb, gcd

from .errors import CapacityError, FanAxiomViolation, InternalInconsistency

MAX_RANK = 6
MAX_SUBSETS = 200_000
MAX_BOX_POINTS = 2_000_000
DEFAULT_SEED = 20240601


# --- integer vector helpers -------------------------------------------------


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def primitive(v) -> tuple:
    g = reduce(gcd, (abs(int(x)) for x in v), 0)
    if g == 0:
        return tuple(0 for _ in v)
    return tuple(int(x) // g for x in v)


def integer_kernel(rows, n: int):
    """Column-reduce the integer matrix ``rows`` by unimodular operations.

    Returns ``(rank, U)`` where ``U`` is a list of ``n`` column vectors forming
    a Z-basis of Z^n whose last ``n - rank`` members form a saturated basis of
    ``{x in Z^n : rows . x = 0}``.
    """
    A = [[int(x) for x in r] for r in rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # U[i] is column i

    def col_op(dst, src, q):
        # column dst -= q * column src
        for r in A:
            r[dst] -= q * r[src]
        for k in range(n):
            U[dst][k] -= q * U[src][k]

    def swap(a, b):
        for r in A:
            r[a], r[b] = r[b], r[a]
        U[a], U[b] = U[b], U[a]

    col = 0
    for r in A:
        if col == n:
            break
        for j in range(col + 1, n):
            while r[j] != 0:
                q = r[col] // r[j]
                col_op(col, j, q)
                swap(col, j)
        if r[col] != 0:
            col += 1
    return col, [tuple(c) for c in U]


def rank_of(rows, n: int) -> int:
    return integer_kernel(rows, n)[0]


def kernel_basis(rows, n: int) -> list:
    rank, U = integer_kernel(rows, n)
    return [primitive(c) for c in U[rank:]]


def int_det(M) -> int:
    """Exact determinant of a small square integer matrix (fraction-free)."""
    k = len(M)
    if k == 0:
        return 1
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, k):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(det)


def solve_rational(rows, rhs, n: int):
    """Solve rows . x = rhs over Q; returns one solution (tuple of Fractions) or None.

    Raises ValueError if the solution is not unique.
    """
    m = len(rows)
    A = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        A[r] = [x / A[r][c] for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in A):
        return None
    if len(pivots) < n:
        raise ValueError("solution not unique")
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = A[i][n]
    return tuple(x)


# --- cones -----------------------------------------------------------------


def _dual_generators(gens, n: int) -> list:
    """Generators of {u : <u, g> >= 0 for all g}: pointed rays plus +/- lineality."""
    if n > MAX_RANK:
        raise CapacityError(f"rank {n} exceeds supported rank {MAX_RANK}")
    gens = [g for g in gens if any(g)]
    lineality = kernel_basis(gens, n)
    d = n - len(lineality)
    out = set()
    if d > 0:
        if comb(len(gens), d - 1) > MAX_SUBSETS:
            raise CapacityError("dual cone enumeration exceeds configured bound")
        for S in combinations(range(len(gens)), d - 1):
            rows = [gens[i] for i in S] + list(lineality)
            ker = kernel_basis(rows, n)
            if len(ker) != 1:
                continue
            r = ker[0]
            vals = [dot(r, g) for g in gens]
            if all(v >= 0 for v in vals):
                out.add(r)
            elif all(v <= 0 for v in vals):
                out.add(tuple(-x for x in r))
    for k in lineality:
        out.add(k)
        out.add(tuple(-x for x in k))
    return sorted(out)


def _in_cone(v, dual_gens) -> bool:
    return all(dot(w, v) >= 0 for w in dual_gens)


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone ``{sum r_i g_i : r_i >= 0}`` in Z^n."""

    generators: tuple
    rank: int
    lattice: str = "N"

    def __init__(self, generators, rank=None, lattice="N"):
        gens = [tuple(int(x) for x in g) for g in generators]
        if rank is None:
            if not gens:
                raise ValueError("rank is required for the zero cone")
            rank = len(gens[0])
        if any(len(g) != rank for g in gens):
            raise ValueError("generators must all have length equal to the rank")
        prim = sorted({primitive(g) for g in gens if any(g)})
        # drop generators that are non-negative combinations of the others
        kept = list(prim)
        for g in prim:
            others = [h for h in kept if h != g]
            if others and _in_cone(g, _dual_generators(others, rank)):
                kept = others
        object.__setattr__(self, "generators", tuple(sorted(kept)))
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "lattice", lattice)

    def __repr__(self):
        return f"Cone({list(self.generators)}, lattice={self.lattice!r})"

    @cached_property
    def dual_generators(self) -> tuple:
        return tuple(_dual_generators(list(self.generators), self.rank))

    @cached_property
    def dim(self) -> int:
        return rank_of(self.generators, self.rank)

    def contains(self, v) -> bool:
        return _in_cone(v, self.dual_generators)

    def same_set(self, other: "Cone") -> bool:
        return all(other.contains(g) for g in self.generators) and all(
            self.contains(g) for g in other.generators
        )

    def to_json(self):
        return [list(g) for g in self.generators]


def zero_cone(n: int, lattice="N") -> Cone:
    return Cone([], rank=n, lattice=lattice)


def dual_cone(c: Cone) -> Cone:
    """The dual cone, tagged with the opposite lattice."""
    other = "M" if c.lattice == "N" else "N"
    return Cone(c.dual_generators, rank=c.rank, lattice=other)


def is_strongly_convex(c: Cone) -> bool:
    return not any(c.contains(tuple(-x for x in g)) for g in c.generators)


def faces(c: Cone) -> list:
    """All faces of a strongly convex cone, from {0} up to ``c`` itself."""
    if not is_strongly_convex(c):
        raise ValueError("faces() requires a strongly convex cone")
    gens = c.generators
    found = {frozenset(range(len(gens)))}
    for w in c.dual_generators:
        ann = frozenset(i for i, g in enumerate(gens) if dot(w, g) == 0)
        new = {ann} | {ann & f for f in found}
        found |= new
    out = [Cone([gens[i] for i in sorted(f)], rank=c.rank, lattice=c.lattice) for f in found]
    return sorted(out, key=lambda f: (len(f.generators), f.generators))


def is_smooth(c: Cone) -> bool:
    gens = [list(g) for g in c.generators]
    k = len(gens)
    if k == 0:
        return True
    if rank_of(gens, c.rank) != k:
        return False
    minors = [int_det([[g[j] for j in cols] for g in gens]) for cols in combinations(range(c.rank), k)]
    return reduce(gcd, (abs(m) for m in minors), 0) == 1


def is_simplicial(c: Cone) -> bool:
    return rank_of(c.generators, c.rank) == len(c.generators)


def hilbert_basis(c: Cone) -> list:
    """Minimal generating set of the semigroup ``c`` intersected with the lattice.

    Units (a basis of the lineality lattice and its negatives) are included when
    ``c`` contains lines.
    """
    n = c.rank
    lin = kernel_basis(c.dual_generators, n) if c.dual_generators else [
        tuple(int(i == j) for j in range(n)) for i in range(n)
    ]
    if not c.generators:
        return []
    if len(lin) == 0:
        return _pointed_hilbert(c.generators, c.dual_generators, n)
    # Z^n = L + L' with L the lineality lattice, so c = L + (c cap L')
    basis = _adapted_basis(lin, n)
    units, comp = basis[: len(lin)], basis[len(lin):]
    inv = _inverse_basis(basis)
    proj_gens = [tuple(_coords(inv, g)[len(lin):]) for g in c.generators]
    m = n - len(lin)
    sub = Cone(proj_gens, rank=m, lattice=c.lattice)
    sub_hb = _pointed_hilbert(sub.generators, sub.dual_generators, m)
    out = set()
    for k in units:
        out.add(tuple(k))
        out.add(tuple(-x for x in k))
    for h in sub_hb:
        v = [0] * n
        for coef, b in zip(h, comp):
            for i in range(n):
                v[i] += coef * b[i]
        out.add(tuple(v))
    return sorted(out)


def _adapted_basis(lin, n):
    """Z-basis of Z^n whose first members span the saturated lattice ``lin``."""
    ortho = kernel_basis(lin, n)  # rows orthogonal to lin
    rank, U = integer_kernel(ortho, n)
    # U[rank:] spans ker(ortho) cap Z^n = saturation of span(lin); U[:rank] completes it
    return list(U[rank:]) + list(U[:rank])


def _inverse_basis(basis):
    n = len(basis)
    # columns are basis vectors; invert the integer unimodular matrix exactly
    M = [[Fraction(basis[j][i]) for j in range(n)] + [Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        M[c] = [x / M[c][c] for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [[int(x) for x in row[n:]] for row in M]


def _coords(inv, v):
    return [sum(a * b for a, b in zip(row, v)) for row in inv]


def _pointed_hilbert(gens, dual, n):
    gens = [g for g in gens if any(g)]
    if not gens:
        return []
    lo = [sum(min(0, g[i]) for g in gens) for i in range(n)]
    hi = [sum(max(0, g[i]) for g in gens) for i in range(n)]
    volume = 1
    for a, b in zip(lo, hi):
        volume *= b - a + 1
    if volume > MAX_BOX_POINTS:
        raise CapacityError(f"Hilbert basis enumeration box has {volume} points")
    cands = []
    for v in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if any(v) and _in_cone(v, dual):
            cands.append(v)
    cands.sort(key=lambda v: sum(abs(x) for x in v))
    irreducible = []
    for x in cands:
        reducible = False
        for y in cands:
            if y == x:
                continue
            diff = tuple(a - b for a, b in zip(x, y))
            if any(diff) and _in_cone(diff, dual):
                reducible = True
                break
        if not reducible:
            irreducible.append(x)
    return sorted(irreducible)


# --- fans ------------------------------------------------------------------


@dataclass(frozen=True)
class Fan:
    """A fan: primitive rays plus all cones as sorted tuples of ray indices."""

    rays: tuple
    cones: tuple
    rank: int
    normalized_rays: tuple = field(default=())

    def cone(self, idx) -> Cone:
        return Cone([self.rays[i] for i in idx], rank=self.rank)

    @cached_property
    def maximal_cones(self) -> tuple:
        sets = [frozenset(c) for c in self.cones]
        maxi = [c for c, s in zip(self.cones, sets) if not any(s < t for t in sets)]
        return tuple(sorted(maxi))

    def cones_of_dim(self, d: int) -> list:
        return [c for c in self.cones if len(c) == d and rank_of([self.rays[i] for i in c], self.rank) == d] if d else [()]

    def to_json(self):
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "maximal_cones": [list(c) for c in self.maximal_cones],
        }


def validate_fan(rays, cone_index_sets, rank=None) -> Fan:
    """Normalize rays, close the cone list under faces and check the fan axioms."""
    raw = [tuple(int(x) for x in r) for r in rays]
    if not raw:
        raise FanAxiomViolation("a fan needs at least one ray or an explicit rank")
    n = rank if rank is not None else len(raw[0])
    if any(len(r) != n for r in raw):
        raise FanAxiomViolation("ray lengths differ from the lattice rank")
    if n > MAX_RANK:
        raise CapacityError(f"rank {n} exceeds supported rank {MAX_RANK}")
    prim = []
    normalized = []
    for i, r in enumerate(raw):
        if not any(r):
            raise FanAxiomViolation(f"ray {i} is zero")
        q = primitive(r)
        if q != r:
            normalized.append(i)
            warnings.warn(f"ray {i} = {r} normalized to primitive {q}", stacklevel=2)
        prim.append(q)
    if len(set(prim)) != len(prim):
        raise FanAxiomViolation("two rays coincide after normalization")

    maximal = [tuple(sorted(set(int(i) for i in c))) for c in cone_index_sets]
    closure = {()}
    face_sets = {}
    for idx in maximal:
        if any(i < 0 or i >= len(prim) for i in idx):
            raise FanAxiomViolation(f"cone {idx} references an unknown ray", cones=(idx,))
        c = Cone([prim[i] for i in idx], rank=n)
        if not is_strongly_convex(c):
            raise FanAxiomViolation(f"cone {idx} is not strongly convex", cones=(idx,))
        if len(c.generators) != len(idx):
            raise FanAxiomViolation(f"cone {idx} lists a ray that is not extremal", cones=(idx,))
        where = {prim[i]: i for i in idx}
        face_sets[idx] = {tuple(sorted(where[g] for g in f.generators)) for f in faces(c)}
        closure |= face_sets[idx]
    for a, b in combinations(maximal, 2):
        common = tuple(sorted(set(a) & set(b)))
        ca = Cone([prim[i] for i in a], rank=n)
        cb = Cone([prim[i] for i in b], rank=n)
        inter = dual_cone(Cone(list(ca.dual_generators) + list(cb.dual_generators), rank=n, lattice="M"))
        expected = Cone([prim[i] for i in common], rank=n)
        if not inter.same_set(expected) or common not in face_sets[a] or common not in face_sets[b]:
            raise FanAxiomViolation(
                f"cones {a} and {b} meet in {inter.to_json()}, which is not the common face {list(common)}",
                cones=(a, b),
                intersection=inter.to_json(),
            )
    cones = tuple(sorted(closure, key=lambda c: (len(c), c)))
    return Fan(rays=tuple(prim), cones=cones, rank=n, normalized_rays=tuple(normalized))


def is_complete(f: Fan, samples: int = 128, seed: int = DEFAULT_SEED) -> bool:
    """Support equals the whole space; facet pairing and random sampling must agree."""
    n = f.rank
    maximal = f.maximal_cones
    full = all(rank_of([f.rays[i] for i in c], n) == n for c in maximal)
    pairing = full
    if full:
        counts = {}
        for c in maximal:
            cone = f.cone(c)
            where = {f.rays[i]: i for i in c}
            for face in faces(cone):
                if face.dim == n - 1:
                    key = tuple(sorted(where[g] for g in face.generators))
                    counts[key] = counts.get(key, 0) + 1
        pairing = bool(counts) and all(v == 2 for v in counts.values()) if n > 1 else len(maximal) == 2
    rng = random.Random(seed)
    cones = [f.cone(c) for c in maximal]
    sampled = True
    for _ in range(max(samples, 100)):
        v = tuple(rng.randint(-10**6, 10**6) for _ in range(n))
        if not any(c.contains(v) for c in cones):
            sampled = False
            break
    if pairing != sampled:
        raise InternalInconsistency(
            f"completeness tests disagree: facet pairing={pairing}, sampling={sampled}"
        )
    return pairing


def is_simplicial_fan(f: Fan) -> bool:
    return all(is_simplicial(f.cone(c)) for c in f.maximal_cones)


def is_smooth_fan(f: Fan) -> bool:
    return all(is_smooth(f.cone(c)) for c in f.maximal_cones)


def f_vector(f: Fan) -> list:
    """Number of cones of each dimension 0..n."""
    d = [0] * (f.rank + 1)
    for c in f.cones:
        d[rank_of([f.rays[i] for i in c], f.rank) if c else 0] += 1
    return d


def betti_oracle(f: Fan) -> list:
    """Even Betti numbers b_0, b_2, ..., b_2n of a complete simplicial fan."""
    if not is_simplicial_fan(f):
        raise ValueError("betti_oracle needs a simplicial fan")
    if not is_complete(f):
        raise ValueError("betti_oracle needs a complete fan")
    n = f.rank
    d = f_vector(f)
    return [
        sum((-1) ** (k - p) * comb(k, p) * d[n - k] for k in range(p, n + 1))
        for p in range(n + 1)
    ]


# --- standard fans ---------------------------------------------------------


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return validate_fan(rays, cones)


def product_fan(f: Fan, g: Fan) -> Fan:
    rays = [tuple(r) + (0,) * g.rank for r in f.rays] + [(0,) * f.rank + tuple(r) for r in g.rays]
    k = len(f.rays)
    cones = [tuple(a) + tuple(k + j for j in b) for a in f.maximal_cones for b in g.maximal_cones]
    return validate_fan(rays, cones)


def hirzebruch(a: int) -> Fan:
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    return validate_fan(rays, [(0, 1), (1, 2), (2, 3), (3, 0)])


def weighted_p112() -> Fan:
    rays = [(1, 0), (0, 1), (-1, -2)]
    return validate_fan(rays, [(0, 1), (1, 2), (0, 2)])
