"""Exact arithmetic in Q[x, y1..yn] and its fraction field K = Q(x, y1..yn).

A polynomial is a sparse dict mapping exponent tuples to nonzero Fractions.
Exponent tuples have length nvars + 1 with position 0 holding the power of x
and position i (1 <= i <= nvars) the power of yi.  Values are immutable by
convention: no method mutates self or its arguments, every operation builds a
new value, and construction canonicalizes (zero coefficients dropped).

A rational function is a reduced fraction num/den of two such polynomials.
The representation is pinned so that equal field elements compare equal as
Python objects: gcd(num, den) = 1 with the gcd computed by a primitive
polynomial remainder sequence over Z, and den monic with respect to the
graded reverse lexicographic order with x > y1 > ... > yn.  The zero element
is 0/1.

Monomial comparisons everywhere in this module use that same grevlex order;
it is only a tie-breaking device here (canonical signs, monic denominators),
not a term order for reduction.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd as int_gcd, lcm as int_lcm

from .errors import ArityError, DivisionByZero, PoleAtPoint

Scalar = Fraction


def grevlex_key(expo: tuple[int, ...]) -> tuple[int, ...]:
    """Sort key giving graded reverse lexicographic order, x > y1 > ... > yn.

    Ties in total degree go to the monomial with the smaller exponent in the
    least significant variable, scanning yn, ..., y1, x.
    """
    return (sum(expo), *(-e for e in reversed(expo)))


def var_name(index: int, nvars: int) -> str:
    if index == 0:
        return "x"
    return "y" if nvars == 1 else f"y{index}"


class MultiPoly:
    """Sparse multivariate polynomial over Q."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        cleaned: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for expo, c in terms.items():
                c = Fraction(c)
                if c:
                    cleaned[tuple(expo)] = c
        self.nvars = nvars
        self.terms = cleaned

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.const(nvars, 1)

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * (nvars + 1): Fraction(c)})

    @classmethod
    def var(cls, nvars: int, index: int) -> "MultiPoly":
        """The variable x (index 0) or y_index (1 <= index <= nvars)."""
        if not 0 <= index <= nvars:
            raise ArityError(f"variable index {index} out of range for nvars={nvars}")
        expo = [0] * (nvars + 1)
        expo[index] = 1
        return cls(nvars, {tuple(expo): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def is_one(self) -> bool:
        return self.terms == {(0,) * (self.nvars + 1): Fraction(1)}

    def total_degree(self) -> int:
        """Maximum total degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    def lead(self) -> tuple[tuple[int, ...], Fraction]:
        """Leading (exponent, coefficient) under grevlex; poly must be nonzero."""
        expo = max(self.terms, key=grevlex_key)
        return expo, self.terms[expo]

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ArityError(f"mixed arities: nvars {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.nvars, other)
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for expo, c in other.terms.items():
            s = out.get(expo, Fraction(0)) + c
            if s:
                out[expo] = s
            else:
                out.pop(expo, None)
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(expo, Fraction(0)) + c1 * c2
                if s:
                    out[expo] = s
                else:
                    out.pop(expo, None)
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self, index: int) -> "MultiPoly":
        """Partial derivative with respect to x (index 0) or y_index."""
        out: dict[tuple[int, ...], Fraction] = {}
        for expo, c in self.terms.items():
            e = expo[index]
            if e:
                ne = list(expo)
                ne[index] = e - 1
                out[tuple(ne)] = c * e
        return MultiPoly(self.nvars, out)

    def evaluate(self, point) -> Fraction:
        """Value at a point given as nvars + 1 Fractions (x first)."""
        if len(point) != self.nvars + 1:
            raise ArityError(f"point has {len(point)} coordinates, need {self.nvars + 1}")
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for expo, c in self.terms.items():
            v = c
            for p, e in zip(pt, expo):
                if e:
                    v *= p**e
            total += v
        return total

    def shear_vars(self, shifts) -> "MultiPoly":
        """Substitute yi <- yi + shifts[i-1] * x for every parameter yi."""
        if len(shifts) != self.nvars:
            raise ArityError(f"{len(shifts)} shear constants for nvars={self.nvars}")
        shifts = [Fraction(s) for s in shifts]
        if not any(shifts):
            return self
        out: dict[tuple[int, ...], Fraction] = {}
        for expo, c in self.terms.items():
            # expand prod_i (yi + s_i x)^{e_i} term by term
            acc = [(0, (), Fraction(1))]
            for i in range(1, self.nvars + 1):
                e, s = expo[i], shifts[i - 1]
                if e == 0 or s == 0:
                    acc = [(dx, ys + (e,), m) for dx, ys, m in acc]
                    continue
                acc = [
                    (dx + k, ys + (e - k,), m * comb(e, k) * s**k)
                    for dx, ys, m in acc
                    for k in range(e + 1)
                ]
            for dx, ys, m in acc:
                key = (expo[0] + dx, *ys)
                v = out.get(key, Fraction(0)) + c * m
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return MultiPoly(self.nvars, out)

    def swap_vars(self, index: int) -> "MultiPoly":
        """Exchange the roles of x and y_index in every exponent tuple."""
        if not 1 <= index <= self.nvars:
            raise ArityError(f"variable index {index} out of range for nvars={self.nvars}")
        out = {}
        for expo, c in self.terms.items():
            ne = list(expo)
            ne[0], ne[index] = ne[index], ne[0]
            out[tuple(ne)] = c
        return MultiPoly(self.nvars, out)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self})"


# ---------------------------------------------------------------------------
# gcd machinery: primitive polynomial remainder sequences over Z
# ---------------------------------------------------------------------------


def _clear_denominators(p: MultiPoly) -> MultiPoly:
    """Scale by the lcm of coefficient denominators; result has integer coeffs."""
    if p.is_zero():
        return p
    m = int_lcm(*(c.denominator for c in p.terms.values()))
    return p * Fraction(m) if m != 1 else p


def _int_content(p: MultiPoly) -> int:
    g = 0
    for c in p.terms.values():
        g = int_gcd(g, abs(c.numerator))
    return g


def _normalize_z(p: MultiPoly) -> MultiPoly:
    """Divide out integer content and make the grevlex-leading coefficient positive."""
    if p.is_zero():
        return p
    g = _int_content(p)
    _, lc = p.lead()
    if lc < 0:
        g = -g
    if g != 1:
        p = p * Fraction(1, g)
    return p


def _coeff_in(p: MultiPoly, v: int, k: int) -> MultiPoly:
    """Coefficient of v^k, as a polynomial with the v-exponent zeroed."""
    out = {}
    for expo, c in p.terms.items():
        if expo[v] == k:
            ne = list(expo)
            ne[v] = 0
            out[tuple(ne)] = c
    return MultiPoly(p.nvars, out)


def _times_power(p: MultiPoly, v: int, k: int) -> MultiPoly:
    if k == 0:
        return p
    out = {}
    for expo, c in p.terms.items():
        ne = list(expo)
        ne[v] += k
        out[tuple(ne)] = c
    return MultiPoly(p.nvars, out)


def _prem(u: MultiPoly, w: MultiPoly, v: int) -> MultiPoly:
    """Pseudo-remainder of u by w in the variable v (w nonzero in v)."""
    dw = w.degree_in(v)
    lw = _coeff_in(w, v, dw)
    r = u
    while not r.is_zero():
        dr = r.degree_in(v)
        if dr < dw:
            break
        lr = _coeff_in(r, v, dr)
        r = lw * r - _times_power(lr * w, v, dr - dw)
    return r


def divexact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact quotient a / b; raises if b does not divide a."""
    if b.is_zero():
        raise DivisionByZero("exact division by the zero polynomial")
    out = MultiPoly.zero(a.nvars)
    r = a
    be, bc = b.lead()
    while not r.is_zero():
        re, rc = r.lead()
        qe = tuple(i - j for i, j in zip(re, be))
        if any(e < 0 for e in qe):
            raise ValueError("inexact polynomial division")
        q = MultiPoly(a.nvars, {qe: rc / bc})
        out = out + q
        r = r - q * b
    return out


def _content_pp(p: MultiPoly, v: int) -> tuple[MultiPoly, MultiPoly]:
    """(content, primitive part) of p viewed as univariate in v."""
    cont = MultiPoly.zero(p.nvars)
    for k in range(p.degree_in(v) + 1):
        c = _coeff_in(p, v, k)
        if not c.is_zero():
            cont = _gcd_z(cont, c)
    return cont, divexact(p, cont)


def _gcd_z(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """gcd of integer-coefficient polynomials, primitive with positive lead."""
    if f.is_zero():
        return _normalize_z(g)
    if g.is_zero():
        return _normalize_z(f)
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(f.nvars, int_gcd(_int_content(f), _int_content(g)))
    v = 0
    while f.degree_in(v) <= 0 and g.degree_in(v) <= 0:
        v += 1
    cf, pf = _content_pp(f, v)
    cg, pg = _content_pp(g, v)
    c = _gcd_z(cf, cg)
    u, w = (pf, pg) if pf.degree_in(v) >= pg.degree_in(v) else (pg, pf)
    while not w.is_zero():
        r = _prem(u, w, v)
        u = w
        w = r if r.is_zero() else _content_pp(r, v)[1]
    return _normalize_z(c * _normalize_z(u))


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """gcd in Q[x, y1..yn], normalized primitive over Z with positive lead.

    Defined up to a constant over the field; this normalization makes it a
    function, which is what the reduced-fraction canonical form needs.
    """
    if a.nvars != b.nvars:
        raise ArityError(f"mixed arities: nvars {a.nvars} vs {b.nvars}")
    return _gcd_z(_clear_denominators(a), _clear_denominators(b))


class RatFunc:
    """Element of K = Q(x, y1..yn) as a canonical reduced fraction."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.one(num.nvars)
        if num.nvars != den.nvars:
            raise ArityError(f"mixed arities: nvars {num.nvars} vs {den.nvars}")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            num, den = MultiPoly.zero(num.nvars), MultiPoly.one(num.nvars)
        else:
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = divexact(num, g), divexact(den, g)
            _, lc = den.lead()
            if lc != 1:
                inv = 1 / lc
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @classmethod
    def const(cls, nvars: int, c) -> "RatFunc":
        return cls(MultiPoly.const(nvars, c))

    @classmethod
    def zero(cls, nvars: int) -> "RatFunc":
        return cls(MultiPoly.zero(nvars))

    @classmethod
    def one(cls, nvars: int) -> "RatFunc":
        return cls(MultiPoly.one(nvars))

    @classmethod
    def var(cls, nvars: int, index: int) -> "RatFunc":
        return cls(MultiPoly.var(nvars, index))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def constant_value(self) -> Fraction:
        if not self.den.is_one():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def degree(self) -> int:
        """max(deg num, deg den); used as a size measure for pivot choice."""
        return max(self.num.total_degree(), self.den.total_degree())

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if self.nvars != other.nvars:
                raise ArityError(f"mixed arities: nvars {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.nvars, other)
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            if self.is_zero():
                raise DivisionByZero("negative power of zero")
            return RatFunc(self.den, self.num) ** (-k)
        out = RatFunc.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self, index: int) -> "RatFunc":
        """Partial derivative by the quotient rule, re-reduced."""
        n, d = self.num, self.den
        return RatFunc(n.derivative(index) * d - n * d.derivative(index), d * d)

    def evaluate(self, point) -> Fraction:
        dv = self.den.evaluate(point)
        if dv == 0:
            raise PoleAtPoint(f"denominator vanishes at {tuple(point)}")
        return self.num.evaluate(point) / dv

    def shear_vars(self, shifts) -> "RatFunc":
        return RatFunc(self.num.shear_vars(shifts), self.den.shear_vars(shifts))

    def swap_vars(self, index: int) -> "RatFunc":
        return RatFunc(self.num.swap_vars(index), self.den.swap_vars(index))

    def __str__(self) -> str:
        return format_ratfunc(self)

    def __repr__(self) -> str:
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------


def join_sum(parts: list[str]) -> str:
    """Join term strings with ' + ' / ' - ', folding leading minus signs."""
    if not parts:
        return "0"
    out = [parts[0]]
    for p in parts[1:]:
        if p.startswith("-"):
            out.append(" - " + p[1:])
        else:
            out.append(" + " + p)
    return "".join(out)


def format_monomial(expo: tuple[int, ...], coeff: Fraction, names: list[str]) -> str:
    factors = []
    for e, name in zip(expo, names):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    if not factors:
        return str(coeff)
    body = "*".join(factors)
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return f"{coeff}*{body}"


def format_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    names = [var_name(i, p.nvars) for i in range(p.nvars + 1)]
    expos = sorted(p.terms, key=grevlex_key, reverse=True)
    return join_sum([format_monomial(e, p.terms[e], names) for e in expos])


def _is_single_factor(p: MultiPoly) -> bool:
    """True when format_poly(p) is one grammar factor (atom or power)."""
    if len(p.terms) != 1:
        return False
    expo, c = next(iter(p.terms.items()))
    nfac = sum(1 for e in expo if e)
    if nfac == 0:
        return c > 0 and c.denominator == 1
    return nfac == 1 and c == 1


def format_ratfunc(f: RatFunc) -> str:
    num_s = format_poly(f.num)
    if f.den.is_one():
        return num_s
    if len(f.num.terms) > 1:
        num_s = f"({num_s})"
    den_s = format_poly(f.den)
    if not _is_single_factor(f.den):
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"
