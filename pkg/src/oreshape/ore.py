"""Linear differential operators with rational-function coefficients.

An operator is a finite sum of terms c * Dx^i * Dy1^j1 * ... * Dyn^jn with
c in K = Q(x, y1..yn).  The derivative symbols commute with each other; the
only nontrivial relations are Dx*x = x*Dx + 1 and Dyi*yi = yi*Dyi + 1, i.e.
each D acts as the partial derivative on its own variable.  Terms are stored
in canonical form with coefficients on the left and derivative monomials on
the right: a dict mapping the derivative exponent tuple (i, j1..jn) to its
nonzero coefficient.  Values are immutable by convention.

Multiplication pushes derivatives through coefficients one symbol at a time:
D_t * c = c * D_t + dc/dt, applied recursively.  This is the whole
noncommutative content of the algebra; everything downstream (reduction,
Groebner bases, elimination) sits on top of this product.

TruncSeries is the exact truncated power-series module the operators act on.
A series records the order N up to which its coefficients are guaranteed:
every stored term has total degree < N.  Arithmetic tracks guarantees
pessimistically: sums and products carry min(N1, N2), differentiation drops
the order by one, and applying an operator of maximal derivative order d
drops it by d.  Comparisons between series only ever look below the smaller
recorded order.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import MultiPoly, RatFunc, grevlex_key, join_sum, format_ratfunc, var_name
from .errors import ArityError, PoleAtOrigin, TruncationTooSmall


def der_name(index: int, nvars: int) -> str:
    if index == 0:
        return "Dx"
    return "Dy" if nvars == 1 else f"Dy{index}"


class OreOperator:
    """Canonical-form element of K[Dx, Dy1..Dyn]."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], RatFunc] | None = None):
        cleaned: dict[tuple[int, ...], RatFunc] = {}
        if terms:
            for dm, c in terms.items():
                if isinstance(c, (int, Fraction)):
                    c = RatFunc.const(nvars, c)
                if c.nvars != nvars:
                    raise ArityError(f"coefficient arity {c.nvars} in operator with nvars={nvars}")
                if not c.is_zero():
                    cleaned[tuple(dm)] = c
        self.nvars = nvars
        self.terms = cleaned

    @classmethod
    def zero(cls, nvars: int) -> "OreOperator":
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "OreOperator":
        return cls.from_coeff(RatFunc.one(nvars))

    @classmethod
    def from_coeff(cls, c: RatFunc) -> "OreOperator":
        return cls(c.nvars, {(0,) * (c.nvars + 1): c})

    @classmethod
    def D(cls, nvars: int, index: int) -> "OreOperator":
        """The derivative symbol Dx (index 0) or Dy_index."""
        if not 0 <= index <= nvars:
            raise ArityError(f"derivative index {index} out of range for nvars={nvars}")
        dm = [0] * (nvars + 1)
        dm[index] = 1
        return cls(nvars, {tuple(dm): RatFunc.one(nvars)})

    @classmethod
    def monomial(cls, nvars: int, dm: tuple[int, ...], coeff=1) -> "OreOperator":
        return cls(nvars, {tuple(dm): RatFunc.const(nvars, coeff) if isinstance(coeff, (int, Fraction)) else coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, dm: tuple[int, ...]) -> RatFunc:
        return self.terms.get(tuple(dm), RatFunc.zero(self.nvars))

    def max_order(self) -> int:
        """Largest total derivative order among the terms (0 for zero)."""
        if not self.terms:
            return 0
        return max(sum(dm) for dm in self.terms)

    def order_in(self, index: int) -> int:
        if not self.terms:
            return 0
        return max(dm[index] for dm in self.terms)

    def is_free_of(self, index: int) -> bool:
        return all(dm[index] == 0 for dm in self.terms)

    def leading(self, keyfn) -> tuple[tuple[int, ...], RatFunc]:
        """Leading (derivative monomial, coefficient) under the given key."""
        dm = max(self.terms, key=keyfn)
        return dm, self.terms[dm]

    def _coerce(self, other):
        if isinstance(other, OreOperator):
            if self.nvars != other.nvars:
                raise ArityError(f"mixed arities: nvars {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return OreOperator.from_coeff(RatFunc.const(self.nvars, other))
        if isinstance(other, RatFunc):
            return OreOperator.from_coeff(other)
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
        for dm, c in other.terms.items():
            s = out.get(dm)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(dm, None)
            else:
                out[dm] = s
        return OreOperator(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return OreOperator(self.nvars, {dm: -c for dm, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def scale(self, c: RatFunc) -> "OreOperator":
        """Left multiplication by an element of K."""
        if isinstance(c, (int, Fraction)):
            c = RatFunc.const(self.nvars, c)
        if c.is_zero():
            return OreOperator.zero(self.nvars)
        return OreOperator(self.nvars, {dm: c * v for dm, v in self.terms.items()})

    def _d_once(self, index: int) -> "OreOperator":
        """Left multiplication by the single symbol D_index."""
        out: dict[tuple[int, ...], RatFunc] = {}

        def acc(dm, c):
            s = out.get(dm)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(dm, None)
            else:
                out[dm] = s

        for dm, c in self.terms.items():
            up = list(dm)
            up[index] += 1
            acc(tuple(up), c)
            dc = c.derivative(index)
            if not dc.is_zero():
                acc(dm, dc)
        return OreOperator(self.nvars, out)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        total = OreOperator.zero(self.nvars)
        for dm, c in self.terms.items():
            cur = other
            for index, times in enumerate(dm):
                for _ in range(times):
                    cur = cur._d_once(index)
            total = total + cur.scale(c)
        return total

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of an operator")
        out = OreOperator.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def monic(self, keyfn) -> "OreOperator":
        """Divide by the leading coefficient under the given monomial key."""
        if self.is_zero():
            return self
        _, lc = self.leading(keyfn)
        if lc.is_one():
            return self
        inv = RatFunc.one(self.nvars) / lc
        return self.scale(inv)

    # -- action on truncated series ------------------------------------------

    def apply(self, f: "TruncSeries") -> "TruncSeries":
        """Apply the operator to a truncated series.

        The result order is f.order minus the maximal total derivative order:
        differentiating d times can only guarantee coefficients that far.
        Raises TruncationTooSmall when nothing would be guaranteed, and
        PoleAtOrigin when a coefficient has no expansion at 0.
        """
        if self.nvars != f.nvars:
            raise ArityError(f"mixed arities: nvars {self.nvars} vs {f.nvars}")
        d = self.max_order()
        if f.order - d < 1:
            raise TruncationTooSmall(
                f"operator of order {d} applied to a series of guaranteed order {f.order}"
            )
        out = TruncSeries(self.nvars, f.order, {})
        for dm, c in self.terms.items():
            g = f
            for index, times in enumerate(dm):
                for _ in range(times):
                    g = g.diff(index)
            out = out + ratfunc_to_series(c, g.order) * g
        return out

    # -- substitutions ---------------------------------------------------------

    def shear(self, c, direction: str) -> "OreOperator":
        """Image under the linear change of variables tied to y <- y -+ c*x.

        direction "forward" sends Dx to Dx + sum(ci*Dyi) and yi to yi - ci*x;
        "inverse" sends Dx to Dx - sum(ci*Dyi) and yi to yi + ci*x.  The two
        maps are mutually inverse algebra automorphisms; the images are
        checked once per (nvars, c, direction) to satisfy the same
        commutation relations as the symbols they replace.
        """
        if len(c) != self.nvars:
            raise ArityError(f"{len(c)} shear constants for nvars={self.nvars}")
        c = tuple(Fraction(v) for v in c)
        if direction not in ("forward", "inverse"):
            raise ValueError(f"unknown shear direction {direction!r}")
        _checked_shear_images(self.nvars, c, direction)
        sign = 1 if direction == "forward" else -1
        shifts = tuple(-sign * ci for ci in c)
        dx_img = _dx_image(self.nvars, c, sign)
        total = OreOperator.zero(self.nvars)
        for dm, coeff in self.terms.items():
            t = OreOperator.from_coeff(coeff.shear_vars(shifts))
            if dm[0]:
                t = t * dx_img ** dm[0]
            rest = (0, *dm[1:])
            if any(rest):
                t = t * OreOperator.monomial(self.nvars, rest)
            total = total + t
        return total

    def swap_roles(self, index: int) -> "OreOperator":
        """Exchange the distinguished pair (x, Dx) with (y_index, Dy_index)."""
        if not 1 <= index <= self.nvars:
            raise ArityError(f"index {index} out of range for nvars={self.nvars}")
        out = {}
        for dm, c in self.terms.items():
            nd = list(dm)
            nd[0], nd[index] = nd[index], nd[0]
            out[tuple(nd)] = c.swap_vars(index)
        return OreOperator(self.nvars, out)

    def __str__(self) -> str:
        return format_operator(self)

    def __repr__(self) -> str:
        return f"OreOperator({self})"


def _dx_image(nvars: int, c: tuple[Fraction, ...], sign: int) -> OreOperator:
    terms = {}
    dx = [0] * (nvars + 1)
    dx[0] = 1
    terms[tuple(dx)] = RatFunc.one(nvars)
    for i, ci in enumerate(c, start=1):
        if ci:
            dm = [0] * (nvars + 1)
            dm[i] = 1
            terms[tuple(dm)] = RatFunc.const(nvars, sign * ci)
    return OreOperator(nvars, terms)


_shear_checked: set = set()


def _checked_shear_images(nvars: int, c: tuple[Fraction, ...], direction: str) -> None:
    """Verify the substitution images satisfy the defining relations.

    Cheap insurance that the sign conventions stay consistent: for each pair
    of an image derivative and an image variable the commutator must be 1 on
    the matching pair and 0 otherwise, and image derivatives must commute.
    """
    key = (nvars, c, direction)
    if key in _shear_checked:
        return
    sign = 1 if direction == "forward" else -1
    ders = [_dx_image(nvars, c, sign)] + [OreOperator.D(nvars, i) for i in range(1, nvars + 1)]
    varops = [OreOperator.from_coeff(RatFunc.var(nvars, 0))]
    for i in range(1, nvars + 1):
        img = RatFunc.var(nvars, i) - RatFunc.var(nvars, 0) * (sign * c[i - 1])
        varops.append(OreOperator.from_coeff(img))
    one = OreOperator.one(nvars)
    zero = OreOperator.zero(nvars)
    for a in range(nvars + 1):
        for b in range(nvars + 1):
            comm = ders[a] * varops[b] - varops[b] * ders[a]
            assert comm == (one if a == b else zero), "shear images break commutation relations"
            dcomm = ders[a] * ders[b] - ders[b] * ders[a]
            assert dcomm == zero, "shear image derivatives do not commute"
    _shear_checked.add(key)


class TruncSeries:
    """Power series truncated below a guaranteed total degree."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: dict[tuple[int, ...], Fraction] | None = None):
        if order < 0:
            raise ValueError("series order must be >= 0")
        cleaned: dict[tuple[int, ...], Fraction] = {}
        if coeffs:
            for expo, v in coeffs.items():
                v = Fraction(v)
                if v and sum(expo) < order:
                    cleaned[tuple(expo)] = v
        self.nvars = nvars
        self.order = order
        self.coeffs = cleaned

    @classmethod
    def one(cls, nvars: int, order: int) -> "TruncSeries":
        return cls(nvars, order, {(0,) * (nvars + 1): Fraction(1)})

    def coefficient(self, expo: tuple[int, ...]) -> Fraction:
        return self.coeffs.get(tuple(expo), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "TruncSeries") -> None:
        if self.nvars != other.nvars:
            raise ArityError(f"mixed arities: nvars {self.nvars} vs {other.nvars}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self.coeffs.items())))

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Equality of all coefficients below min(order, other.order)."""
        self._check(other)
        n = min(self.order, other.order)
        for expo, v in self.coeffs.items():
            if sum(expo) < n and other.coeffs.get(expo, Fraction(0)) != v:
                return False
        for expo, v in other.coeffs.items():
            if sum(expo) < n and self.coeffs.get(expo, Fraction(0)) != v:
                return False
        return True

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries(self.nvars, self.order, {(0,) * (self.nvars + 1): Fraction(other)})
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for expo, v in other.coeffs.items():
            s = out.get(expo, Fraction(0)) + v
            if s:
                out[expo] = s
            else:
                out.pop(expo, None)
        return TruncSeries(self.nvars, order, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.nvars, self.order, {e: -v for e, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries(self.nvars, self.order, {(0,) * (self.nvars + 1): Fraction(other)})
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries(
                self.nvars, self.order, {e: v * Fraction(other) for e, v in self.coeffs.items()}
            )
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, v1 in self.coeffs.items():
            d1 = sum(e1)
            if d1 >= order:
                continue
            for e2, v2 in other.coeffs.items():
                if d1 + sum(e2) >= order:
                    continue
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(expo, Fraction(0)) + v1 * v2
                if s:
                    out[expo] = s
                else:
                    out.pop(expo, None)
        return TruncSeries(self.nvars, order, out)

    __rmul__ = __mul__

    def diff(self, index: int) -> "TruncSeries":
        """Partial derivative; the guaranteed order drops by one."""
        out = {}
        for expo, v in self.coeffs.items():
            e = expo[index]
            if e:
                ne = list(expo)
                ne[index] = e - 1
                out[tuple(ne)] = v * e
        return TruncSeries(self.nvars, self.order - 1, out)

    def swap_vars(self, index: int) -> "TruncSeries":
        if not 1 <= index <= self.nvars:
            raise ArityError(f"index {index} out of range for nvars={self.nvars}")
        out = {}
        for expo, v in self.coeffs.items():
            ne = list(expo)
            ne[0], ne[index] = ne[index], ne[0]
            out[tuple(ne)] = v
        return TruncSeries(self.nvars, self.order, out)

    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        return f"TruncSeries(order={self.order}, {self})"


def ratfunc_to_series(f: RatFunc, order: int) -> TruncSeries:
    """Expand a rational function at the origin, exactly, below `order`.

    Raises PoleAtOrigin when the denominator vanishes at 0.
    """
    nvars = f.nvars
    num = TruncSeries(nvars, order, f.num.terms)
    if f.den.is_one():
        return num
    origin = (0,) * (nvars + 1)
    c0 = f.den.terms.get(origin, Fraction(0))
    if c0 == 0:
        raise PoleAtOrigin(f"no series expansion at the origin for {f}")
    # 1/den = (1/c0) * 1/(1 - u) with u = 1 - den/c0 of positive valuation
    u = -TruncSeries(nvars, order, {e: v / c0 for e, v in f.den.terms.items() if any(e)})
    inv = TruncSeries.one(nvars, order)
    for _ in range(order - 1):
        inv = inv * u + 1
    return num * inv * Fraction(1, c0)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def format_operator(op: OreOperator) -> str:
    if op.is_zero():
        return "0"
    names = [der_name(i, op.nvars) for i in range(op.nvars + 1)]
    parts = []
    for dm in sorted(op.terms, key=grevlex_key, reverse=True):
        c = op.terms[dm]
        factors = []
        for e, name in zip(dm, names):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        if not body:
            parts.append(format_ratfunc(c))
            continue
        if c.is_one():
            parts.append(body)
        elif c == RatFunc.const(op.nvars, -1):
            parts.append("-" + body)
        else:
            c_s = format_ratfunc(c)
            if c.is_polynomial() and len(c.num.terms) > 1:
                c_s = f"({c_s})"
            parts.append(f"{c_s}*{body}")
    return join_sum(parts)


def format_series(f: TruncSeries) -> str:
    if f.is_zero():
        return "0"
    names = [var_name(i, f.nvars) for i in range(f.nvars + 1)]
    parts = []
    for expo in sorted(f.coeffs, key=grevlex_key):
        v = f.coeffs[expo]
        factors = []
        for e, name in zip(expo, names):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(v))
        elif v == 1:
            parts.append("*".join(factors))
        elif v == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(f"{v}*" + "*".join(factors))
    return join_sum(parts)
