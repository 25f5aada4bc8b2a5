"""Left Groebner bases for left ideals of K[Dx, Dy1..Dyn].

Monomial orders are key functions on derivative exponent tuples.  Reduction
only ever multiplies generators on the left by terms c * D^delta; since the
commutation corrections produced by pushing D^delta through a coefficient
are of strictly smaller derivative order, the leading monomial and leading
coefficient of D^delta * g are those of g shifted by delta, so ordinary
Buchberger theory applies verbatim.

One consequence of the noncommutative coefficients is that the classical
coprime-leading-monomial criterion is unsound here, so no pair-skipping
criteria are used at all: every S-pair is generated and reduced.  Pairs are
processed smallest lcm first.  A configurable cap on the derivative order of
new basis elements turns runaway completions (pathological input, or a bug)
into a clean DegreeCapExceeded instead of an endless loop.
"""

from __future__ import annotations

from itertools import product

from .errors import ArityError, DegreeCapExceeded, NotZeroDimensional
from .ore import OreOperator


class TermOrder:
    """Monomial order on derivative exponent tuples, as a sort key.

    kind is one of "degrevlex", "lex", "elim".  priority lists symbol indices
    from most to least significant and defaults to Dx > Dy1 > ... > Dyn.
    For "elim", the indices in `block` (default: all Dyi) are compared first
    by their own graded reverse lexicographic order, then the rest; any
    monomial involving a block symbol is larger than any block-free one, so
    block-free members of a reduced basis generate the elimination ideal.
    """

    __slots__ = ("kind", "nvars", "priority", "block")

    def __init__(self, kind: str, nvars: int, priority=None, block=None):
        if kind not in ("degrevlex", "lex", "elim"):
            raise ValueError(f"unknown term order {kind!r}")
        self.kind = kind
        self.nvars = nvars
        self.priority = tuple(priority) if priority is not None else tuple(range(nvars + 1))
        if sorted(self.priority) != list(range(nvars + 1)):
            raise ValueError("priority must be a permutation of the symbol indices")
        if kind == "elim":
            self.block = tuple(sorted(block)) if block is not None else tuple(range(1, nvars + 1))
        else:
            self.block = ()

    @classmethod
    def degrevlex(cls, nvars: int) -> "TermOrder":
        return cls("degrevlex", nvars)

    @classmethod
    def lex(cls, nvars: int) -> "TermOrder":
        return cls("lex", nvars)

    @classmethod
    def elim(cls, nvars: int, block=None) -> "TermOrder":
        return cls("elim", nvars, block=block)

    def _grevlex_part(self, dm, symbols):
        return (sum(dm[s] for s in symbols), *(-dm[s] for s in reversed(symbols)))

    def key(self, dm: tuple[int, ...]):
        if self.kind == "lex":
            return tuple(dm[s] for s in self.priority)
        if self.kind == "degrevlex":
            return self._grevlex_part(dm, [s for s in self.priority])
        blockset = set(self.block)
        first = [s for s in self.priority if s in blockset]
        rest = [s for s in self.priority if s not in blockset]
        return self._grevlex_part(dm, first) + self._grevlex_part(dm, rest)

    def __eq__(self, other):
        if not isinstance(other, TermOrder):
            return NotImplemented
        return (self.kind, self.nvars, self.priority, self.block) == (
            other.kind,
            other.nvars,
            other.priority,
            other.block,
        )

    def __hash__(self):
        return hash((self.kind, self.nvars, self.priority, self.block))

    def __repr__(self):
        return f"TermOrder({self.kind!r}, nvars={self.nvars})"


def _divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(i <= j for i, j in zip(a, b))


def left_reduce(f: OreOperator, gens, order: TermOrder) -> OreOperator:
    """Full left normal form of f modulo the given generators.

    Repeatedly cancels the largest monomial divisible by some leading
    monomial, subtracting (c / lc(g)) * D^delta * g.  The result has no term
    divisible by any generator's leading monomial.  Against a Groebner basis
    this is the K-linear normal-form projection onto standard monomials.
    """
    gens = [g for g in (gens.gens if isinstance(gens, GroebnerBasis) else gens) if not g.is_zero()]
    if any(g.nvars != f.nvars for g in gens):
        raise ArityError("generator arity differs from operand")
    lead = [(g, *g.leading(order.key)) for g in gens]
    r = f
    while True:
        hit = None
        for dm in sorted(r.terms, key=order.key, reverse=True):
            for g, lm, lc in lead:
                if _divides(lm, dm):
                    hit = (dm, g, lm, lc)
                    break
            if hit:
                break
        if hit is None:
            return r
        dm, g, lm, lc = hit
        delta = tuple(a - b for a, b in zip(dm, lm))
        c = r.terms[dm] / lc
        r = r - (OreOperator.monomial(f.nvars, delta) * g).scale(c)


def _spoly(g1: OreOperator, g2: OreOperator, order: TermOrder) -> OreOperator:
    """S-polynomial of two monic generators."""
    lm1, _ = g1.leading(order.key)
    lm2, _ = g2.leading(order.key)
    m = tuple(max(a, b) for a, b in zip(lm1, lm2))
    d1 = tuple(a - b for a, b in zip(m, lm1))
    d2 = tuple(a - b for a, b in zip(m, lm2))
    return OreOperator.monomial(g1.nvars, d1) * g1 - OreOperator.monomial(g2.nvars, d2) * g2


class GroebnerBasis:
    """A reduced left Groebner basis: monic generators, each fully reduced
    against the others, sorted by leading monomial ascending."""

    __slots__ = ("nvars", "order", "gens", "_cache")

    def __init__(self, nvars: int, order: TermOrder, gens):
        self.nvars = nvars
        self.order = order
        self.gens = tuple(gens)
        self._cache = {}

    def leading_monomials(self):
        return [g.leading(self.order.key)[0] for g in self.gens]

    def reduce(self, f: OreOperator) -> OreOperator:
        return left_reduce(f, self.gens, self.order)

    def contains(self, f: OreOperator) -> bool:
        return self.reduce(f).is_zero()

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials())

    def _staircase_bounds(self):
        """Minimal pure-power exponent of each symbol among the leading
        monomials, or None where no pure power occurs."""
        lms = self.leading_monomials()
        bounds = []
        for t in range(self.nvars + 1):
            pures = [lm[t] for lm in lms if all(e == 0 for i, e in enumerate(lm) if i != t)]
            bounds.append(min(pures) if pures else None)
        return bounds

    def is_zero_dimensional(self) -> bool:
        return all(b is not None for b in self._staircase_bounds())

    def quotient_basis(self):
        """Standard monomials under the staircase, sorted ascending.

        Raises NotZeroDimensional when the quotient is infinite dimensional.
        """
        if "qb" in self._cache:
            return self._cache["qb"]
        from .ore import der_name

        bounds = self._staircase_bounds()
        for t, b in enumerate(bounds):
            if b is None:
                raise NotZeroDimensional(
                    f"no pure power of {der_name(t, self.nvars)} among the leading monomials"
                )
        lms = self.leading_monomials()
        basis = [
            dm
            for dm in product(*(range(b) for b in bounds))
            if not any(_divides(lm, dm) for lm in lms)
        ]
        basis.sort(key=self.order.key)
        self._cache["qb"] = basis
        return basis

    def dimension(self) -> int:
        return len(self.quotient_basis())

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.nvars == other.nvars and self.order == other.order and self.gens == other.gens

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __repr__(self):
        return "GroebnerBasis[" + "; ".join(str(g) for g in self.gens) + "]"


def groebner_basis(gens, order: TermOrder, degree_cap: int = 30) -> GroebnerBasis:
    """Buchberger completion followed by full interreduction.

    Every generator entering the working basis (inputs included) must stay
    within `degree_cap` total derivative order.
    """
    work = []
    nvars = None
    for g in gens:
        if g.is_zero():
            continue
        if nvars is None:
            nvars = g.nvars
        elif g.nvars != nvars:
            raise ArityError("generators have mixed arities")
        if g.max_order() > degree_cap:
            raise DegreeCapExceeded(f"generator order {g.max_order()} exceeds cap {degree_cap}")
        gm = g.monic(order.key)
        if gm not in work:
            work.append(gm)
    if not work:
        raise ValueError("ideal needs at least one nonzero generator")

    def lcm_key(i, j):
        lmi = work[i].leading(order.key)[0]
        lmj = work[j].leading(order.key)[0]
        m = tuple(max(a, b) for a, b in zip(lmi, lmj))
        return (order.key(m), i, j)

    pairs = {(i, j) for i in range(len(work)) for j in range(i + 1, len(work))}
    while pairs:
        i, j = min(pairs, key=lambda p: lcm_key(*p))
        pairs.discard((i, j))
        h = left_reduce(_spoly(work[i], work[j], order), work, order)
        if h.is_zero():
            continue
        if h.max_order() > degree_cap:
            raise DegreeCapExceeded(
                f"completion produced order {h.max_order()}, cap is {degree_cap}"
            )
        k = len(work)
        work.append(h.monic(order.key))
        pairs.update((i2, k) for i2 in range(k))

    # interreduction: minimal leading monomials, then tail reduction
    lms = [g.leading(order.key)[0] for g in work]
    survivors = [
        g
        for i, g in enumerate(work)
        if not any(
            j != i and _divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i)
            for j in range(len(work))
        )
    ]
    reduced = []
    for i, g in enumerate(survivors):
        others = survivors[:i] + survivors[i + 1 :]
        h = left_reduce(g, others, order) if others else g
        reduced.append(h.monic(order.key))
    reduced.sort(key=lambda g: order.key(g.leading(order.key)[0]))
    return GroebnerBasis(nvars, order, reduced)
