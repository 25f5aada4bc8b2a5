"""Truncated series solutions, Wronskians, and the D-radical test.

At an ordinary origin the solution space of a zero-dimensional ideal has
dimension r over the constants and a Taylor coefficient of a solution is
read off the quotient coordinates: for the member attached to the k-th
standard monomial, the coefficient on the monomial x^a y^b... with exponent
tuple m is

    evaluate(coords(NF(D^m))[k] at 0) / m!

The coordinates are generated by the recurrence coords(m + e_t) =
d/dt coords(m) + A_t coords(m), one derivative step per monomial, walking
monomials in graded order so each predecessor is already known.  A pole at
the origin in any needed coordinate means the origin is not ordinary.

The Wronskian in x is computed by cofactor expansion: the ring of truncated
series has zero divisors, so elimination with division is not available.
Differentiating r - 1 times costs r - 1 guaranteed orders, which is the
recorded order of the result.

The D-radical test looks for polynomials p_i of total degree <= degree_bound
with sum p_i f_i = 0 through total degree order - degree_bound.  That is a
finite exact Q-linear system in the p-coefficients.  A nontrivial kernel
vector is re-verified against a deeper expansion (order + 4) before being
reported; no kernel means no dependence up to the stated bounds, a
semi-decision, not a proof of D-radicality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .arith import MultiPoly, RatFunc, grevlex_key
from .errors import NonOrdinaryOrigin, PoleAtPoint, TruncationTooSmall
from .gb import GroebnerBasis
from .ore import TruncSeries
from .shape import quotient_action

DEPENDENCE_FOUND = "DependenceFound"
NO_DEPENDENCE = "NoDependenceUpToBound"


@dataclass(frozen=True)
class SolutionBasis:
    """Truncated basis of the solution space at the origin.

    members[k] is the solution whose initial coefficients are zero on all
    standard monomials except the k-th, where the Taylor normalization puts
    1/m!.  initial_monomials records the labeling."""

    nvars: int
    r: int
    order: int
    initial_monomials: tuple[tuple[int, ...], ...]
    members: tuple[TruncSeries, ...]


def _graded_monomials(nsyms: int, bound: int):
    """Exponent tuples with total degree < bound, by degree then grevlex."""
    def exact(prefix, remaining, slots):
        if slots == 1:
            yield (*prefix, remaining)
            return
        for e in range(remaining + 1):
            yield from exact((*prefix, e), remaining - e, slots - 1)

    for d in range(bound):
        yield from sorted(exact((), d, nsyms), key=grevlex_key)


def solve_series(gb: GroebnerBasis, order: int = 8) -> SolutionBasis:
    """Expand the canonical solution basis to guaranteed order `order`."""
    if order < 1:
        raise TruncationTooSmall("series order must be at least 1")
    act = quotient_action(gb)
    r = act.r
    nvars = gb.nvars
    if r == 0:
        return SolutionBasis(nvars, 0, order, (), ())
    origin = (Fraction(0),) * (nvars + 1)
    zero_m = (0,) * (nvars + 1)
    e0 = [RatFunc.zero(nvars) for _ in range(r)]
    e0[act.index[zero_m]] = RatFunc.one(nvars)
    coords = {zero_m: e0}
    coeff_dicts: list[dict[tuple[int, ...], Fraction]] = [{} for _ in range(r)]
    for m in _graded_monomials(nvars + 1, order):
        if m != zero_m:
            t = next(i for i, e in enumerate(m) if e)
            prev = list(m)
            prev[t] -= 1
            coords[m] = act.apply(t, coords[tuple(prev)])
        cm = coords[m]
        fact = 1
        for e in m:
            fact *= factorial(e)
        for k in range(r):
            try:
                val = cm[k].evaluate(origin)
            except PoleAtPoint:
                raise NonOrdinaryOrigin(
                    f"quotient coordinate for derivative monomial {m} has a pole at 0"
                ) from None
            if val:
                coeff_dicts[k][m] = val / fact
    members = tuple(TruncSeries(nvars, order, d) for d in coeff_dicts)
    return SolutionBasis(nvars, r, order, tuple(act.basis), members)


def _det(rows: list[list[TruncSeries]]) -> TruncSeries:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def wronskian_x(members) -> TruncSeries:
    """Wronskian determinant in x of the given series, by cofactor expansion.

    The recorded order is min(member orders) - (len(members) - 1)."""
    members = list(members)
    if not members:
        raise ValueError("wronskian of an empty family")
    n = min(f.order for f in members)
    r = len(members)
    if n - (r - 1) < 1:
        raise TruncationTooSmall(
            f"need guaranteed order above {r - 1} to differentiate {r} members"
        )
    rows = [members]
    for _ in range(r - 1):
        rows.append([f.diff(0) for f in rows[-1]])
    return _det(rows)


def in_normal_position_series(gb: GroebnerBasis, order: int = 8) -> bool:
    """Truncated-Wronskian proxy for normal position: nonzero Wronskian of
    the solution basis below the guaranteed order.  A zero result can be a
    truncation artifact for adversarial inputs; the algebraic test is the
    authority."""
    sol = solve_series(gb, order)
    if sol.r == 0:
        return True
    return not wronskian_x(sol.members).is_zero()


@dataclass(frozen=True)
class DRadicalVerdict:
    """Outcome of the K-linear dependence search among the solutions.

    tag is DEPENDENCE_FOUND or NO_DEPENDENCE; witness holds the polynomials
    p_i (normalized integer content, first nonzero leading coefficient
    positive) when a dependence sum p_i f_i = 0 was found and re-verified."""

    tag: str
    witness: tuple[MultiPoly, ...] | None
    degree_bound: int
    order: int

    @property
    def dependence_found(self) -> bool:
        return self.tag == DEPENDENCE_FOUND


def _kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel over Q, one vector per free column."""
    ech: list[tuple[int, list[Fraction]]] = []  # (pivot column, normalized row)
    for row in rows:
        row = row[:]
        for pc, erow in ech:
            if row[pc]:
                f = row[pc]
                row = [a - f * b for a, b in zip(row, erow)]
        pivot = next((j for j, a in enumerate(row) if a), None)
        if pivot is None:
            continue
        inv = 1 / row[pivot]
        row = [a * inv for a in row]
        # keep earlier rows reduced against the new pivot
        ech = [
            (pc, [a - erow[pivot] * b for a, b in zip(erow, row)] if erow[pivot] else erow)
            for pc, erow in ech
        ]
        ech.append((pivot, row))
    pivot_cols = {pc for pc, _ in ech}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for pc, erow in ech:
            v[pc] = -erow[free]
        basis.append(v)
    return basis


def _poly_series_product_is_zero(polys, members, below: int) -> bool:
    """Exact check that sum polys[i] * members[i] vanishes below `below`."""
    nvars = members[0].nvars
    total: dict[tuple[int, ...], Fraction] = {}
    for p, f in zip(polys, members):
        for pe, pc in p.terms.items():
            pd = sum(pe)
            for fe, fc in f.coeffs.items():
                expo = tuple(a + b for a, b in zip(pe, fe))
                if sum(expo) < below:
                    total[expo] = total.get(expo, Fraction(0)) + pc * fc
    return all(v == 0 for v in total.values())


def d_radical_check(gb: GroebnerBasis, degree_bound: int = 3, order: int = 10) -> DRadicalVerdict:
    """Search for a K-linear dependence among the truncated solutions.

    Unknowns: coefficients of p_1..p_r of total degree <= degree_bound.
    Equations: every monomial of total degree < order - degree_bound in
    sum p_i f_i vanishes.  DependenceFound carries a witness re-verified
    against a deeper expansion; NoDependenceUpToBound is only a statement
    about these bounds."""
    if order <= degree_bound:
        raise TruncationTooSmall("series order must exceed degree_bound")
    sol = solve_series(gb, order)
    r = sol.r
    nvars = gb.nvars
    if r == 0:
        return DRadicalVerdict(NO_DEPENDENCE, None, degree_bound, order)
    pmonos = [m for m in _graded_monomials(nvars + 1, degree_bound + 1)]
    cols = [(i, a) for i in range(r) for a in pmonos]
    rows = []
    for beta in _graded_monomials(nvars + 1, order - degree_bound):
        row = []
        for i, alpha in cols:
            rest = tuple(b - a for b, a in zip(beta, alpha))
            if any(e < 0 for e in rest):
                row.append(Fraction(0))
            else:
                row.append(sol.members[i].coefficient(rest))
        rows.append(row)
    kernel = _kernel_basis(rows, len(cols))
    if kernel:
        deep = solve_series(gb, order + 4)
        for vec in kernel:
            polys = []
            for i in range(r):
                terms = {}
                for j, (ii, alpha) in enumerate(cols):
                    if ii == i and vec[j]:
                        terms[alpha] = vec[j]
                polys.append(MultiPoly(nvars, terms))
            if not _poly_series_product_is_zero(polys, deep.members, order + 4):
                continue
            return DRadicalVerdict(
                DEPENDENCE_FOUND, _normalize_witness(polys), degree_bound, order
            )
    return DRadicalVerdict(NO_DEPENDENCE, None, degree_bound, order)


def _normalize_witness(polys: list[MultiPoly]) -> tuple[MultiPoly, ...]:
    from math import gcd as int_gcd, lcm as int_lcm

    denom = 1
    for p in polys:
        for c in p.terms.values():
            denom = int_lcm(denom, c.denominator)
    num = 0
    for p in polys:
        for c in p.terms.values():
            num = int_gcd(num, abs(c.numerator * denom // c.denominator))
    scale = Fraction(denom, num if num else 1)
    first = next((p for p in polys if not p.is_zero()), None)
    if first is not None and first.lead()[1] * scale < 0:
        scale = -scale
    return tuple(p * scale for p in polys)
