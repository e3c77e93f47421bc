"""Closed-form cohomology of twisted forms on P^n and a long-exact-sequence dimension chaser.

The chaser models ``0 -> H^0(A) -> H^0(B) -> H^0(C) -> H^1(A) -> ...`` as one
exact chain ``V_0 -> V_1 -> ... -> V_{L-1}``. Writing r_j for the rank of the
map out of V_j, exactness says dim V_j = r_{j-1} + r_j with r_{-1} = r_{L-1} = 0.
Each unknown position opens a fresh free rank t >= 0; known positions then
pin the ranks that follow as t + const or -t + const, and every non-negativity
condition becomes an interval bound on a single t.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb

from .cech import Interval
from .errors import InconsistentInput


def _binom(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


def bott_pn(n: int, p_form: int, k: int, q: int) -> int:
    """h^q(P^n, Omega^p_form(k))."""
    if n < 0 or not 0 <= p_form <= n or not 0 <= q <= n:
        raise ValueError(f"indices out of range: n={n} p_form={p_form} q={q}")
    if q == 0:
        if k == 0 and p_form == 0:
            return 1
        if k > p_form:
            return _binom(k + n - p_form, k) * _binom(k - 1, p_form)
        return 0
    if q == n:
        if k == 0 and p_form == n:
            return 1
        if k < p_form - n:
            return _binom(-k + p_form, -k) * _binom(-k - 1, n - p_form)
        return 0
    return 1 if (k == 0 and p_form == q) else 0


def pn_table(n: int, p_form: int, k: int) -> list:
    return [bott_pn(n, p_form, k, q) for q in range(n + 1)]


def kunneth(table_a: list, table_b: list) -> list:
    """Cohomology of an exterior tensor product from the two factor tables."""
    out = [0] * (len(table_a) + len(table_b) - 1)
    for i, a in enumerate(table_a):
        for j, b in enumerate(table_b):
            out[i + j] += a * b
    return out


def pn_product_forms(n: int, p_form: int, a: int, b: int) -> list:
    """h^q(P^n x P^n, Omega^p_form(a, b)), Omega^p of the product split by Kuenneth."""
    total = [0] * (2 * n + 1)
    for p1 in range(max(0, p_form - n), min(n, p_form) + 1):
        part = kunneth(pn_table(n, p1, a), pn_table(n, p_form - p1, b))
        total = [x + y for x, y in zip(total, part)]
    return total


# --- dimension bookkeeping ---------------------------------------------------


@dataclass
class SheafDimSpec:
    """Cohomology dimensions of one sheaf over degrees 0..N; ``None`` entries are unknown."""

    label: str
    dims: list

    def __post_init__(self):
        clean = []
        for v in self.dims:
            if isinstance(v, Interval):
                if v.lo < 0:
                    raise InconsistentInput(f"{self.label}: negative dimension")
                clean.append(v.lo if v.exact else v)
            elif v is None:
                clean.append(None)
            else:
                if int(v) < 0:
                    raise InconsistentInput(f"{self.label}: negative dimension {v}")
                clean.append(int(v))
        self.dims = clean

    @classmethod
    def unknown(cls, label: str, length: int) -> "SheafDimSpec":
        return cls(label, [None] * length)

    @property
    def known(self) -> bool:
        return all(v is not None for v in self.dims)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, int) for v in self.dims)

    def euler(self) -> int:
        if not self.exact:
            raise ValueError(f"{self.label} is not fully determined")
        return sum((-1) ** i * v for i, v in enumerate(self.dims))

    def to_json(self):
        return {
            "label": self.label,
            "dims": [v.to_json() if isinstance(v, Interval) else v for v in self.dims],
        }


@dataclass
class ShortExactSequence:
    A: SheafDimSpec
    B: SheafDimSpec
    C: SheafDimSpec
    name: str = ""

    def __post_init__(self):
        lengths = {len(self.A.dims), len(self.B.dims), len(self.C.dims)}
        if len(lengths) != 1:
            raise ValueError("slots must share a cohomological range")
        if sum(not s.known for s in self.slots()) > 1:
            raise ValueError("at most one slot may carry unknowns")

    def slots(self):
        return (self.A, self.B, self.C)

    def label(self):
        return self.name or f"0 -> {self.A.label} -> {self.B.label} -> {self.C.label} -> 0"


@dataclass
class ChaseResult:
    solved: SheafDimSpec
    slot: str
    trace: list = field(default_factory=list)

    @property
    def exact(self):
        return self.solved.exact

    def to_json(self):
        return {"slot": self.slot, "solved": self.solved.to_json(), "trace": self.trace}


def _chain(seq: ShortExactSequence):
    """Flatten to positions (slot name, degree, value)."""
    out = []
    for i in range(len(seq.A.dims)):
        for name, s in zip("ABC", seq.slots()):
            out.append((name, i, s.dims[i]))
    return out


def _chase_numeric(chain):
    """Chase a chain whose known entries are all integers. Returns (per-unknown (lo, hi), trace) or raises."""
    # r is tracked as (const, sign, param) meaning const + sign * t_param; param None for constants
    r_prev = (0, 0, None)
    params = []  # per parameter: [lo, hi, reasons]
    unknown_expr = []  # (position, rank expression before it, own parameter)

    def bound(expr, where):
        const, sign, par = expr
        if par is None:
            if const < 0:
                raise InconsistentInput(f"exactness fails at {where}: rank {const} < 0")
            return
        lo, hi, why = params[par]
        if sign > 0 and -const > lo:
            params[par][0] = -const
            why.append(f"t{par} >= {-const} from rank out of {where}")
        elif sign < 0 and (hi is None or const < hi):
            params[par][1] = const
            why.append(f"t{par} <= {const} from rank out of {where}")

    for pos, (name, deg, val) in enumerate(chain):
        where = f"H^{deg}({name})"
        if val is None:
            par = len(params)
            params.append([0, None, []])
            unknown_expr.append((pos, r_prev, par))
            r_prev = (0, 1, par)
        else:
            const, sign, par = r_prev
            r_prev = (val - const, -sign, par)
        bound(r_prev, where)
        if pos == len(chain) - 1:
            const, sign, par = r_prev
            if par is None:
                if const != 0:
                    raise InconsistentInput(f"Euler characteristic mismatch: last rank {const} != 0")
            else:
                t = -const * sign  # const + sign*t = 0
                lo, hi, why = params[par]
                if t < lo or (hi is not None and t > hi):
                    raise InconsistentInput("no rank assignment satisfies exactness")
                params[par][0] = params[par][1] = t
                why.append(f"t{par} = {t} since the sequence ends in 0")
    for par, (lo, hi, _) in enumerate(params):
        if hi is not None and lo > hi:
            raise InconsistentInput(f"no admissible rank for t{par}")
        if hi is None:
            raise InconsistentInput(f"rank t{par} is unbounded")
    results = []
    trace = []
    for pos, (const, sign, prev_par), par in unknown_expr:
        lo_t, hi_t, why = params[par]
        lo, hi = const + lo_t, const + hi_t
        if prev_par is not None:
            plo, phi_, _ = params[prev_par]
            a, b = sign * plo, sign * phi_
            lo += min(a, b)
            hi += max(a, b)
        name, deg, _ = chain[pos]
        results.append((lo, hi))
        trace.append({"entry": f"H^{deg}({name})", "range": [lo, hi], "forced_by": list(why)})
    return results, trace


def les_chase(seq: ShortExactSequence) -> ChaseResult:
    """Solve the unknown slot of a short exact sequence from its long exact sequence."""
    chain = _chain(seq)
    unknown = [n for n, s in zip("ABC", seq.slots()) if not s.known]
    if not unknown:
        for s in seq.slots():
            if not s.exact:
                raise ValueError("fully known sequences must be exact-valued to be checked")
        if seq.B.euler() != seq.A.euler() + seq.C.euler():
            raise InconsistentInput("Euler characteristics are not additive")
        _chase_numeric(chain)
        return ChaseResult(seq.C, "C", [{"entry": "all", "range": None, "forced_by": ["consistent"]}])
    slot = unknown[0]
    # interval-valued known entries: enumerate their values and take the hull
    choices = []
    for name, deg, val in chain:
        if isinstance(val, Interval):
            if val.hi is None:
                raise ValueError("cannot chase with an unbounded known entry")
            choices.append(range(val.lo, val.hi + 1))
        else:
            choices.append((val,))
    hull = None
    trace = None
    feasible = 0
    for pick in product(*choices):
        concrete = [(n, d, v) for (n, d, _), v in zip(chain, pick)]
        try:
            res, tr = _chase_numeric(concrete)
        except InconsistentInput:
            continue
        feasible += 1
        if hull is None:
            hull, trace = [list(x) for x in res], tr
        else:
            for h, (lo, hi) in zip(hull, res):
                h[0], h[1] = min(h[0], lo), max(h[1], hi)
    if hull is None:
        raise InconsistentInput(f"no consistent assignment for {seq.label()}")
    if feasible > 1:
        trace = trace + [{"entry": "hull", "range": None, "forced_by": [f"hull over {feasible} input choices"]}]
        for t, (lo, hi) in zip(trace, hull):
            t["range"] = [lo, hi]
    dims = [lo if lo == hi else Interval(lo, hi) for lo, hi in hull]
    label = {"A": seq.A, "B": seq.B, "C": seq.C}[slot].label
    return ChaseResult(SheafDimSpec(label, dims), slot, trace)


# --- the two non-vanishing computations --------------------------------------


def _step(seq, result):
    return {"sequence": seq.label(), **{k: s.to_json() for k, s in zip("ABC", seq.slots())}, "result": result.to_json()}


def _solve(seq, chain_log):
    res = les_chase(seq)
    chain_log.append(_step(seq, res))
    return res.solved


def _entry(value, exact, label, degree, chain_log):
    return {
        "sheaf": label,
        "degree": degree,
        "value": value.to_json() if isinstance(value, Interval) else value,
        "exact": exact,
        "provenance": chain_log,
    }


def _pn(n, p_form, k):
    return SheafDimSpec(f"Omega^{p_form}_P{n}({k})" if p_form else f"O_P{n}({k})", pn_table(n, p_form, k))


def _quadric_line_bundle(n, k, log):
    seq = ShortExactSequence(_pn(n, 0, k - 2), _pn(n, 0, k), SheafDimSpec.unknown(f"O_Y({k})", n + 1))
    return _solve(seq, log)


def _restricted(n, p_form, k, log):
    """Omega^p_form_P(k) restricted to the quadric."""
    seq = ShortExactSequence(
        _pn(n, p_form, k - 2), _pn(n, p_form, k), SheafDimSpec.unknown(f"Omega^{p_form}_P{n}({k})|Y", n + 1)
    )
    return _solve(seq, log)


def quadric_nonvanishing(n: int) -> dict:
    """h^(n-2)(Y, Omega^1_Y(3-n)) for a smooth quadric Y in P^n, via the conormal sequence."""
    if n < 4:
        raise ValueError("needs n >= 4")
    log = []
    conormal = _quadric_line_bundle(n, 1 - n, log)
    ambient = _restricted(n, 1, 3 - n, log)
    seq = ShortExactSequence(conormal, ambient, SheafDimSpec.unknown(f"Omega^1_Y({3 - n})", n + 1))
    solved = _solve(seq, log)
    v = solved.dims[n - 2]
    return _entry(v, isinstance(v, int), solved.label, n - 2, log)


def quadric_dual(n: int) -> dict:
    """h^1(Y, Omega^(n-2)_Y(n-3)) through T_Y(-2), using the normal sequence of Y."""
    if n < 4:
        raise ValueError("needs n >= 4")
    log = []
    # T_P(-2) = Omega^(n-1)_P(n-1); the normal bundle twisted by -2 is O_Y
    ambient = _restricted(n, n - 1, n - 1, log)
    normal = _quadric_line_bundle(n, 0, log)
    seq = ShortExactSequence(SheafDimSpec.unknown("T_Y(-2)", n + 1), ambient, normal)
    solved = _solve(seq, log)
    v = solved.dims[1]
    return _entry(v, isinstance(v, int), f"Omega^{n - 2}_Y({n - 3})", 1, log)


def _pp(n, p_form, a, b):
    name = f"Omega^{p_form}_PxP({a},{b})" if p_form else f"O_PxP({a},{b})"
    return SheafDimSpec(name, pn_product_forms(n, p_form, a, b))


def _incidence_line_bundle(n, a, b, log):
    seq = ShortExactSequence(_pp(n, 0, a - 1, b - 1), _pp(n, 0, a, b), SheafDimSpec.unknown(f"O_X({a},{b})", 2 * n + 1))
    return _solve(seq, log)


def _incidence_restricted(n, p_form, a, b, log):
    seq = ShortExactSequence(
        _pp(n, p_form, a - 1, b - 1),
        _pp(n, p_form, a, b),
        SheafDimSpec.unknown(f"Omega^{p_form}_PxP({a},{b})|X", 2 * n + 1),
    )
    return _solve(seq, log)


def incidence_nonvanishing(n: int) -> dict:
    """h^(2n-2)(X, Omega^1_X(1-n, 1-n)) for the (1,1) incidence divisor X in P^n x P^n."""
    if n < 2:
        raise ValueError("needs n >= 2")
    log = []
    conormal = _incidence_line_bundle(n, -n, -n, log)
    ambient = _incidence_restricted(n, 1, 1 - n, 1 - n, log)
    seq = ShortExactSequence(conormal, ambient, SheafDimSpec.unknown(f"Omega^1_X({1 - n},{1 - n})", 2 * n + 1))
    solved = _solve(seq, log)
    v = solved.dims[2 * n - 2]
    return _entry(v, isinstance(v, int), solved.label, 2 * n - 2, log)


def incidence_dual(n: int) -> dict:
    """h^1(X, Omega^(2n-2)_X(n-1, n-1)) through T_X(-1,-1) and the normal sequence."""
    if n < 2:
        raise ValueError("needs n >= 2")
    log = []
    # T_{PxP}(-1,-1) = Omega^(2n-1)_{PxP}(n, n); the normal bundle twisted by (-1,-1) is O_X
    ambient = _incidence_restricted(n, 2 * n - 1, n, n, log)
    normal = _incidence_line_bundle(n, 0, 0, log)
    seq = ShortExactSequence(SheafDimSpec.unknown("T_X(-1,-1)", 2 * n + 1), ambient, normal)
    solved = _solve(seq, log)
    v = solved.dims[1]
    return _entry(v, isinstance(v, int), f"Omega^{2 * n - 2}_X({n - 1},{n - 1})", 1, log)
