"""Shape bases and normal position for zero-dimensional left ideals.

Everything here works in coordinates on the finite-dimensional quotient
K[Dx, Dy1..Dyn] / I.  The residue classes of the standard monomials form a
K-basis; each derivative symbol D acts on coordinate vectors by the
pseudo-linear rule

    D . v = dv/dvar(D) + A_D * v

where A_D's column k holds the coordinates of the normal form of D times the
k-th basis monomial.  The action is pseudo-linear, not linear: it twists by
the derivation, which is why all the linear algebra below is over K with the
derivative applied explicitly where needed.

The Krylov sequence v, Dx.v, Dx^2.v, ... of the class of 1 yields the monic
generator P of the elimination ideal I intersect K[Dx]: the first K-linear
dependence gives its coefficients.  The ideal is in normal position exactly
when that first dependence happens at step r = dim of the quotient; then
expressing the class of each Dyi in the Krylov basis yields Qi with
Dyi - Qi(Dx) in I, and {Dy1 - Q1, ..., Dyn - Qn, P} generates I.

Gaussian elimination over K uses exact arithmetic throughout; pivots are
chosen as the lowest-degree nonzero entry of the current column (ties by row
position), which keeps intermediate coefficient growth down and the whole
computation deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import RatFunc
from .errors import (
    CyclicVectorNotFound,
    NormalizationFailed,
    NotCyclic,
    NotNormalPosition,
)
from .gb import GroebnerBasis, TermOrder, groebner_basis, left_reduce
from .ore import OreOperator


class QuotientAction:
    """Coordinates and derivative action on K[D]/I for zero-dimensional I."""

    __slots__ = ("gb", "basis", "index", "matrices")

    def __init__(self, gb: GroebnerBasis):
        self.gb = gb
        self.basis = gb.quotient_basis()
        self.index = {dm: k for k, dm in enumerate(self.basis)}
        r = len(self.basis)
        self.matrices = []
        for t in range(gb.nvars + 1):
            cols = []
            for dm in self.basis:
                up = list(dm)
                up[t] += 1
                nf = gb.reduce(OreOperator.monomial(gb.nvars, tuple(up)))
                cols.append(self._standard_coords(nf))
            self.matrices.append([[cols[j][i] for j in range(r)] for i in range(r)])

    @property
    def r(self) -> int:
        return len(self.basis)

    @property
    def nvars(self) -> int:
        return self.gb.nvars

    def _standard_coords(self, op: OreOperator) -> list[RatFunc]:
        v = [RatFunc.zero(self.gb.nvars) for _ in self.basis]
        for dm, c in op.terms.items():
            v[self.index[dm]] = c
        return v

    def coords(self, op: OreOperator) -> list[RatFunc]:
        """Coordinates of the residue class of an arbitrary operator."""
        return self._standard_coords(self.gb.reduce(op))

    def apply(self, t: int, v: list[RatFunc]) -> list[RatFunc]:
        """Action of D_t on a coordinate vector: derivative plus matrix part."""
        A = self.matrices[t]
        out = []
        for i in range(len(v)):
            s = v[i].derivative(t)
            for j, vj in enumerate(v):
                if not vj.is_zero() and not A[i][j].is_zero():
                    s = s + A[i][j] * vj
            out.append(s)
        return out


def quotient_action(gb: GroebnerBasis) -> QuotientAction:
    """The cached QuotientAction of a Groebner basis."""
    act = gb._cache.get("action")
    if act is None:
        act = QuotientAction(gb)
        gb._cache["action"] = act
    return act


def _express(vectors: list[list[RatFunc]], target: list[RatFunc], nvars: int):
    """Coefficients writing target as a K-combination of vectors, or None.

    Gauss-Jordan over K; pivot = lowest-degree nonzero entry of the current
    column, ties broken by row position.
    """
    r = len(target)
    s = len(vectors)
    if s == 0:
        return [] if all(t.is_zero() for t in target) else None
    M = [[vectors[j][i] for j in range(s)] + [target[i]] for i in range(r)]
    used = [False] * r
    pivots = []
    for col in range(s):
        cand = [(M[i][col].degree(), i) for i in range(r) if not used[i] and not M[i][col].is_zero()]
        if not cand:
            continue
        _, p = min(cand)
        used[p] = True
        pivots.append((p, col))
        inv = RatFunc.one(nvars) / M[p][col]
        M[p] = [e * inv for e in M[p]]
        for i in range(r):
            if i != p and not M[i][col].is_zero():
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[p])]
    for i in range(r):
        if not used[i] and not M[i][s].is_zero():
            return None
    out = [RatFunc.zero(nvars) for _ in range(s)]
    for p, col in pivots:
        out[col] = M[p][s]
    return out


def _krylov(act: QuotientAction, v0: list[RatFunc], steps: int) -> list[list[RatFunc]]:
    vs = [v0]
    for _ in range(steps):
        vs.append(act.apply(0, vs[-1]))
    return vs


def _first_dependence(act: QuotientAction, v0: list[RatFunc]):
    """(s, lambda) for the first s with Dx^s.v0 in the span of the earlier
    Krylov vectors; lambda has length s.  s = 0 means v0 itself is zero."""
    if all(v.is_zero() for v in v0):
        return 0, []
    vs = [v0]
    while True:
        nxt = act.apply(0, vs[-1])
        lam = _express(vs, nxt, act.nvars)
        if lam is not None:
            return len(vs), lam
        vs.append(nxt)


def _dx_poly(nvars: int, coeffs: list[RatFunc], lead_order: int) -> OreOperator:
    """Dx^lead_order - sum coeffs[k] * Dx^k as an operator."""
    terms = {}
    dm = [0] * (nvars + 1)
    dm[0] = lead_order
    terms[tuple(dm)] = RatFunc.one(nvars)
    for k, c in enumerate(coeffs):
        if not c.is_zero():
            dmk = [0] * (nvars + 1)
            dmk[0] = k
            terms[tuple(dmk)] = -c
    return OreOperator(nvars, terms)


def eliminate_dx(gb: GroebnerBasis, method: str = "krylov") -> OreOperator:
    """Monic generator of the elimination ideal I intersect K[Dx].

    method "krylov" walks the quotient action of Dx on the class of 1;
    "elim-order" recomputes the basis under the block order that eliminates
    all Dyi and picks out the Dy-free generator.  Both return the same
    operator; the unit ideal gives P = 1.
    """
    r = gb.dimension()
    if method == "krylov":
        if r == 0:
            return OreOperator.one(gb.nvars)
        act = quotient_action(gb)
        e0 = [RatFunc.zero(gb.nvars) for _ in range(r)]
        e0[act.index[(0,) * (gb.nvars + 1)]] = RatFunc.one(gb.nvars)
        s, lam = _first_dependence(act, e0)
        return _dx_poly(gb.nvars, lam, s)
    if method == "elim-order":
        order = TermOrder.elim(gb.nvars)
        g2 = gb if gb.order == order else groebner_basis(gb.gens, order)
        free = [g for g in g2 if all(g.is_free_of(i) for i in range(1, gb.nvars + 1))]
        if not free:
            raise NotNormalPosition("no Dy-free element in the elimination-order basis")
        p = min(free, key=lambda g: g.order_in(0))
        return p.monic(order.key)
    raise ValueError(f"unknown elimination method {method!r}")


def in_normal_position(gb: GroebnerBasis) -> bool:
    """True when the elimination operator has order r = dim of the quotient."""
    r = gb.dimension()
    return eliminate_dx(gb, "krylov").order_in(0) == r


@dataclass(frozen=True)
class ShapeBasis:
    """Generators {Dy1 - Q1(Dx), ..., Dyn - Qn(Dx), P(Dx)} with P monic of
    order r and every Qi of order < r.  Coefficient lists run from order 0
    upward; p_coeffs has length r + 1 with final entry 1, each q_coeffs[i]
    has trailing zeros trimmed."""

    nvars: int
    r: int
    p_coeffs: tuple[RatFunc, ...]
    q_coeffs: tuple[tuple[RatFunc, ...], ...]

    def P(self) -> OreOperator:
        terms = {}
        for k, c in enumerate(self.p_coeffs):
            if not c.is_zero():
                dm = [0] * (self.nvars + 1)
                dm[0] = k
                terms[tuple(dm)] = c
        return OreOperator(self.nvars, terms)

    def Q(self, i: int) -> OreOperator:
        terms = {}
        for k, c in enumerate(self.q_coeffs[i - 1]):
            if not c.is_zero():
                dm = [0] * (self.nvars + 1)
                dm[0] = k
                terms[tuple(dm)] = c
        return OreOperator(self.nvars, terms)

    def generators(self) -> list[OreOperator]:
        gens = []
        for i in range(1, self.nvars + 1):
            gens.append(OreOperator.D(self.nvars, i) - self.Q(i))
        gens.append(self.P())
        return gens


def _trim(coeffs: list[RatFunc]) -> tuple[RatFunc, ...]:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


def _shape_from_krylov(act: QuotientAction, v0: list[RatFunc], check_v0=True) -> ShapeBasis:
    """Shared core of shape_basis and gauge_transform: build P and the Qi
    from the Krylov family of v0, requiring independence up to step r."""
    r = act.r
    nvars = act.nvars
    if all(v.is_zero() for v in v0):
        raise NotCyclic("the vector reduces to zero in the quotient")
    vs = [v0]
    for s in range(1, r):
        nxt = act.apply(0, vs[-1])
        if _express(vs, nxt, nvars) is not None:
            raise NotCyclic(f"Krylov family dependent at step {s}, quotient dimension {r}")
        vs.append(nxt)
    lam = _express(vs, act.apply(0, vs[-1]), nvars)
    assert lam is not None, "full Krylov family must span the quotient"
    p_coeffs = tuple(-c for c in lam) + (RatFunc.one(nvars),)
    q_all = []
    for i in range(1, nvars + 1):
        u = act.apply(i, v0)
        q = _express(vs, u, nvars)
        assert q is not None
        q_all.append(_trim(q))
    return ShapeBasis(nvars, r, p_coeffs, tuple(q_all))


def shape_basis(gb: GroebnerBasis) -> ShapeBasis:
    """Shape basis of a zero-dimensional ideal in normal position.

    Raises NotNormalPosition when the elimination operator has order < r.
    Postcondition (checked): the returned generators and the input generate
    the same left ideal.
    """
    r = gb.dimension()
    nvars = gb.nvars
    if r == 0:
        return ShapeBasis(nvars, 0, (RatFunc.one(nvars),), tuple(() for _ in range(nvars)))
    act = quotient_action(gb)
    e0 = [RatFunc.zero(nvars) for _ in range(r)]
    e0[act.index[(0,) * (nvars + 1)]] = RatFunc.one(nvars)
    try:
        sb = _shape_from_krylov(act, e0)
    except NotCyclic as exc:
        raise NotNormalPosition(f"the ideal is not in normal position: {exc}") from None
    new_gb = groebner_basis(sb.generators(), gb.order)
    ok = all(new_gb.contains(g) for g in gb.gens) and all(gb.contains(h) for h in sb.generators())
    assert ok, "shape generators do not match the input ideal"
    return sb


@dataclass(frozen=True)
class ShearParams:
    """The integer (or rational) vector c of a shear y <- y + c*x."""

    c: tuple[Fraction, ...]


def shear_ideal(gb: GroebnerBasis, c) -> GroebnerBasis:
    """Groebner basis of the ideal annihilating f(x, y + c*x) for solutions
    f of the input: apply the inverse substitution to every generator and
    recomplete under the same order."""
    c = tuple(Fraction(v) for v in c)
    return groebner_basis([g.shear(c, "inverse") for g in gb.gens], gb.order)


def normalize_by_shear(
    gb: GroebnerBasis,
    seed: int = 0,
    max_attempts: int = 20,
    coeff_range: int = 5,
) -> tuple[ShearParams, GroebnerBasis]:
    """Search for a shear putting the ideal into normal position.

    Tries c = 0 first, then seeded uniform integer vectors with entries in
    [-coeff_range, coeff_range].  Every candidate counts against the budget;
    exhausting it raises NormalizationFailed, which is inconclusive (some
    other c might work)."""
    nvars = gb.nvars
    rng = random.Random(seed)
    tried = set()
    for attempt in range(max_attempts):
        if attempt == 0:
            c = (Fraction(0),) * nvars
        else:
            c = tuple(Fraction(rng.randint(-coeff_range, coeff_range)) for _ in range(nvars))
        if c in tried:
            continue
        tried.add(c)
        sheared = shear_ideal(gb, c)
        if in_normal_position(sheared):
            return ShearParams(c), sheared
    raise NormalizationFailed(
        f"no sampled shear reached normal position in {max_attempts} attempts"
    )


def cyclic_vector(
    gb: GroebnerBasis,
    seed: int = 0,
    degree_bound: int = 2,
    max_attempts: int = 200,
) -> OreOperator:
    """Search for M whose class generates the quotient under the Dx-action.

    Deterministic sweep first (single standard monomials, then combinations
    with x-power multipliers x^d, 0 <= d <= degree_bound, in lexicographic
    order of the power tuples), then random polynomial coefficients.  Every
    candidate counts against max_attempts."""
    from itertools import product as iproduct

    from .arith import MultiPoly

    act = quotient_action(gb)
    r = act.r
    nvars = gb.nvars
    if r == 0:
        raise ValueError("the quotient is trivial; no cyclic vector exists")

    def is_cyclic(v0):
        if all(v.is_zero() for v in v0):
            return False
        vs = [v0]
        for _ in range(1, r):
            nxt = act.apply(0, vs[-1])
            if _express(vs, nxt, nvars) is not None:
                return False
            vs.append(nxt)
        return True

    def candidates():
        for dm in act.basis:
            yield OreOperator.monomial(nvars, dm)
        xvar = RatFunc.var(nvars, 0)
        for powers in iproduct(range(degree_bound + 1), repeat=r):
            terms = {}
            for dm, d in zip(act.basis, powers):
                terms[dm] = xvar**d
            yield OreOperator(nvars, terms)
        while True:
            terms = {}
            for dm in act.basis:
                poly = MultiPoly(
                    nvars,
                    {
                        tuple([d] + [0] * nvars): Fraction(rng.randint(-3, 3))
                        for d in range(degree_bound + 1)
                    },
                )
                if not poly.is_zero():
                    terms[dm] = RatFunc(poly)
            if terms:
                yield OreOperator(nvars, terms)

    rng = random.Random(seed)
    attempts = 0
    for M in candidates():
        if attempts >= max_attempts:
            break
        attempts += 1
        if is_cyclic(act.coords(M)):
            return M
    raise CyclicVectorNotFound(f"no cyclic vector found in {max_attempts} attempts")


def gauge_transform(gb: GroebnerBasis, M: OreOperator) -> ShapeBasis:
    """Shape-form annihilator of the gauge images M(f) of the solutions f.

    The class of M must be cyclic for the Dx-action on the quotient; its
    Krylov family then carries both the monic minimal operator P' and the
    coefficients Q' expressing each Dyi-image.  Raises NotCyclic when the
    family becomes dependent before step r."""
    r = gb.dimension()
    if r == 0:
        raise ValueError("the quotient is trivial; nothing to transform")
    act = quotient_action(gb)
    return _shape_from_krylov(act, act.coords(M))
