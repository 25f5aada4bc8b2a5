"""Quotient actions, elimination, shape bases, shears, gauge transforms.

Ground truth throughout is the exponential picture: the left ideal
annihilating exp(a1*x + b1*y) and exp(a2*x + b2*y) with a1 != a2 is
generated by (Dx - a1)(Dx - a2) and Dy - L(Dx), where L is the affine line
through (a1, b1) and (a2, b2).  Its elimination polynomial in Dx is
(Dx - a1)(Dx - a2), it is in normal position exactly when a1 != a2, and a
shear by c moves the x-exponents to a_i + c*b_i while keeping the
y-exponents.  Random instances of this family give an independent oracle
for every operation below; truncated series solutions give a second one.
"""

import random
from fractions import Fraction

import pytest

from oreshape.arith import MultiPoly, RatFunc
from oreshape.errors import (
    CyclicVectorNotFound,
    NormalizationFailed,
    NotCyclic,
    NotNormalPosition,
)
from oreshape.gb import TermOrder, groebner_basis
from oreshape.ore import OreOperator
from oreshape.series import solve_series
from oreshape.shape import (
    QuotientAction,
    ShearParams,
    _express,
    cyclic_vector,
    eliminate_dx,
    gauge_transform,
    in_normal_position,
    normalize_by_shear,
    quotient_action,
    shape_basis,
    shear_ideal,
)

from _helpers import rand_ratfunc


def sym(nvars=1):
    ds = [OreOperator.D(nvars, i) for i in range(nvars + 1)]
    return ds, OreOperator.one(nvars)


def two_exp_gens(a1, b1, a2, b2):
    """Generators of the annihilator of exp(a1 x + b1 y), exp(a2 x + b2 y)."""
    assert a1 != a2
    (dx, dy), one = sym(1)
    s = Fraction(b2 - b1, a2 - a1)
    line = s * (dx - a1 * one) + b1 * one
    return [(dx - a1 * one) * (dx - a2 * one), dy - line], s


def fixture_gb(name):
    (dx, dy), one = sym(1)
    order = TermOrder.degrevlex(1)
    gens = {
        "two_points": [(dx - one) * (dx - 2 * one), dy],
        "double_point": [(dx - one) * (dx - one), dy],
        "exp_pair": [dx - one, dy * dy - dy],
        "nilpotent_y": [dx - one, dy * dy],
        "unit": [dx - one, dx - 2 * one],
        "axes": [dx, dy],
    }[name]
    return groebner_basis(gens, order)


# ---------------------------------------------------------------------------
# quotient action


def test_action_matrices_for_two_points():
    act = quotient_action(fixture_gb("two_points"))
    assert act.basis == [(0, 0), (1, 0)]
    two = RatFunc.const(1, 2)
    three = RatFunc.const(1, 3)
    zero = RatFunc.zero(1)
    one = RatFunc.one(1)
    # Dx * 1 = Dx, Dx * Dx = Dx^2 = 3 Dx - 2 in the quotient
    assert act.matrices[0] == [[zero, -two], [one, three]]
    assert act.matrices[1] == [[zero, zero], [zero, zero]]


def test_action_matches_reduction():
    # coords(D_t * op) must equal the pseudo-linear action on coords(op)
    rng = random.Random(401)
    gb = fixture_gb("exp_pair")
    act = quotient_action(gb)
    (dx, dy), one = sym(1)
    pool = [dx, dy, dx * dy, dy * dy, dx * dx - dy]
    for op in pool:
        v = act.coords(op)
        for t in (0, 1):
            direct = act.coords(OreOperator.D(1, t) * op)
            assert act.apply(t, v) == direct


def test_action_is_pseudo_linear():
    # D.(f v) = f' v + f (D.v) for scalars f
    rng = random.Random(402)
    act = quotient_action(fixture_gb("two_points"))
    for _ in range(10):
        f = rand_ratfunc(rng, 1)
        v = [rand_ratfunc(rng, 1) for _ in range(act.r)]
        for t in (0, 1):
            lhs = act.apply(t, [f * vi for vi in v])
            fv = act.apply(t, v)
            rhs = [f.derivative(t) * vi + f * fvi for vi, fvi in zip(v, fv)]
            assert lhs == rhs


def test_express_small_systems():
    one = RatFunc.one(1)
    zero = RatFunc.zero(1)
    x = RatFunc.var(1, 0)
    # identity system
    assert _express([[one, zero], [zero, one]], [x, one], 1) == [x, one]
    # dependent column set, consistent target
    sol = _express([[one, zero], [x, zero]], [one + x, zero], 1)
    assert sol is not None
    assert sol[0] + sol[1] * x == one + x or sol[0] * one + sol[1] * x == one + x
    # inconsistent target
    assert _express([[one, zero]], [zero, one], 1) is None
    # empty family expresses only zero
    assert _express([], [zero, zero], 1) == []
    assert _express([], [one], 1) is None


# ---------------------------------------------------------------------------
# elimination


def test_eliminate_known_values():
    (dx, dy), one = sym(1)
    assert eliminate_dx(fixture_gb("two_points")) == dx * dx - 3 * dx + 2 * one
    assert eliminate_dx(fixture_gb("exp_pair")) == dx - one
    assert eliminate_dx(fixture_gb("nilpotent_y")) == dx - one
    assert eliminate_dx(fixture_gb("unit")) == one


def test_eliminate_methods_agree():
    rng = random.Random(403)
    order = TermOrder.degrevlex(1)
    pool = [fixture_gb(n) for n in ("two_points", "double_point", "exp_pair", "nilpotent_y", "unit", "axes")]
    for _ in range(6):
        a1 = rng.randint(-4, 4)
        a2 = a1 + rng.randint(1, 3)
        gens, _ = two_exp_gens(a1, rng.randint(-3, 3), a2, rng.randint(-3, 3))
        pool.append(groebner_basis(gens, order))
    for gb in pool:
        p_krylov = eliminate_dx(gb, method="krylov")
        p_elim = eliminate_dx(gb, method="elim-order")
        assert p_krylov == p_elim
        # membership and shape of the eliminant
        assert gb.reduce(p_krylov).is_zero()
        assert p_krylov.is_free_of(1)
        assert p_krylov.order_in(0) <= gb.dimension()


def test_eliminate_two_exp_product():
    rng = random.Random(404)
    (dx, dy), one = sym(1)
    order = TermOrder.degrevlex(1)
    for _ in range(8):
        a1 = rng.randint(-5, 5)
        a2 = a1 + rng.randint(1, 4)
        gens, _ = two_exp_gens(a1, rng.randint(-3, 3), a2, rng.randint(-3, 3))
        gb = groebner_basis(gens, order)
        assert gb.dimension() == 2
        assert eliminate_dx(gb) == (dx - a1 * one) * (dx - a2 * one)


def test_eliminate_rejects_unknown_method():
    with pytest.raises(ValueError):
        eliminate_dx(fixture_gb("two_points"), method="guess")


# ---------------------------------------------------------------------------
# normal position


def test_normal_position_known_cases():
    assert in_normal_position(fixture_gb("two_points")) is True
    assert in_normal_position(fixture_gb("exp_pair")) is False
    assert in_normal_position(fixture_gb("nilpotent_y")) is False
    assert in_normal_position(fixture_gb("unit")) is True
    # constants are the only solutions: r = 1 and P = Dx already has order 1
    assert in_normal_position(fixture_gb("axes")) is True


def test_normal_position_depends_on_main_variable():
    # same ideal, roles swapped: solutions exp(x), exp(2x) separate along x
    # but collapse along y
    gb = fixture_gb("two_points")
    swapped = groebner_basis([g.swap_roles(1) for g in gb.gens], gb.order)
    assert in_normal_position(gb) is True
    assert in_normal_position(swapped) is False


def test_normal_position_two_exp_after_shear():
    # exponents (a_i + c b_i, b_i): normal iff the sheared x-exponents differ
    rng = random.Random(405)
    order = TermOrder.degrevlex(1)
    for _ in range(6):
        a1, b1 = rng.randint(-3, 3), rng.randint(-3, 3)
        a2 = a1 + rng.randint(1, 3)
        b2 = b1 + rng.choice([-2, -1, 1, 2])
        gens, _ = two_exp_gens(a1, b1, a2, b2)
        gb = groebner_basis(gens, order)
        for c in (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(a1 - a2, b2 - b1)):
            sheared = shear_ideal(gb, (c,))
            expect = a1 + c * b1 != a2 + c * b2
            assert in_normal_position(sheared) is expect, (a1, b1, a2, b2, c)


# ---------------------------------------------------------------------------
# shape bases


def test_shape_basis_of_sheared_exp_pair():
    (dx, dy), one = sym(1)
    sheared = shear_ideal(fixture_gb("exp_pair"), (Fraction(1),))
    sb = shape_basis(sheared)
    assert sb.r == 2
    assert sb.P() == dx * dx - 3 * dx + 2 * one
    assert sb.Q(1) == dx - one
    assert sb.generators() == [dy - (dx - one), dx * dx - 3 * dx + 2 * one]
    # generators present the same ideal: canonical reduced bases coincide
    regen = groebner_basis(sb.generators(), sheared.order)
    assert regen.gens == sheared.gens


def test_shape_basis_two_exp_interpolation():
    rng = random.Random(406)
    (dx, dy), one = sym(1)
    order = TermOrder.degrevlex(1)
    for _ in range(6):
        a1, b1 = rng.randint(-4, 4), rng.randint(-3, 3)
        a2 = a1 + rng.randint(1, 3)
        b2 = rng.randint(-3, 3)
        gens, s = two_exp_gens(a1, b1, a2, b2)
        sb = shape_basis(groebner_basis(gens, order))
        assert sb.P() == (dx - a1 * one) * (dx - a2 * one)
        assert sb.Q(1) == s * (dx - a1 * one) + b1 * one


def test_shape_generators_annihilate_solutions():
    sheared = shear_ideal(fixture_gb("exp_pair"), (Fraction(1),))
    sb = shape_basis(sheared)
    sol = solve_series(sheared, order=8)
    for g in sb.generators():
        for f in sol.members:
            assert g.apply(f).is_zero()


def test_shape_basis_requires_normal_position():
    with pytest.raises(NotNormalPosition):
        shape_basis(fixture_gb("exp_pair"))
    with pytest.raises(NotNormalPosition):
        shape_basis(fixture_gb("nilpotent_y"))


def test_shape_basis_unit_ideal():
    (dx, dy), one = sym(1)
    sb = shape_basis(fixture_gb("unit"))
    assert sb.r == 0
    assert sb.P() == one
    assert sb.generators() == [dy, one]


def test_shape_basis_two_blocks():
    ds, one = sym(2)
    dx, dy1, dy2 = ds
    gb = groebner_basis([dx - one, dy1 - one, dy2 - 2 * one], TermOrder.degrevlex(2))
    sb = shape_basis(gb)
    assert sb.r == 1
    assert sb.P() == dx - one
    assert sb.Q(1) == one
    assert sb.Q(2) == 2 * one


# ---------------------------------------------------------------------------
# shears


def test_shear_ideal_round_trip_and_dimension():
    rng = random.Random(407)
    order = TermOrder.degrevlex(1)
    pool = [fixture_gb(n) for n in ("two_points", "double_point", "exp_pair", "nilpotent_y")]
    for gb in pool:
        r = gb.dimension()
        for c in ((Fraction(1),), (Fraction(-2),), (Fraction(1, 2),)):
            sheared = shear_ideal(gb, c)
            assert sheared.dimension() == r
            back = shear_ideal(sheared, (-c[0],))
            assert back.gens == gb.gens


def test_shear_makes_nilpotent_y_normal():
    gb = fixture_gb("nilpotent_y")
    (dx, dy), one = sym(1)
    assert in_normal_position(gb) is False
    for c in (Fraction(1), Fraction(-1), Fraction(2)):
        sheared = shear_ideal(gb, (c,))
        assert in_normal_position(sheared) is True
        assert eliminate_dx(sheared) == (dx - one) * (dx - one)


def test_normalize_returns_zero_shift_when_already_normal():
    gb = fixture_gb("two_points")
    params, out = normalize_by_shear(gb)
    assert params == ShearParams((Fraction(0),))
    assert out.gens == gb.gens


def test_normalize_finds_working_shift():
    gb = fixture_gb("exp_pair")
    params, out = normalize_by_shear(gb, seed=0)
    assert in_normal_position(out)
    assert out.gens == shear_ideal(gb, params.c).gens
    assert params.c != (Fraction(0),)


def test_normalize_budget_exhaustion():
    # with a single attempt only the zero shift is tried, and it fails here
    with pytest.raises(NormalizationFailed):
        normalize_by_shear(fixture_gb("exp_pair"), max_attempts=1)


# ---------------------------------------------------------------------------
# cyclic vectors and gauge transforms


def test_cyclic_vector_trivial_when_normal():
    gb = fixture_gb("two_points")
    m = cyclic_vector(gb)
    assert m == OreOperator.one(1)


def test_cyclic_vector_for_exp_pair():
    (dx, dy), one = sym(1)
    x = OreOperator.from_coeff(RatFunc.var(1, 0))
    gb = fixture_gb("exp_pair")
    m = cyclic_vector(gb)
    assert m == x * dy + one
    sb = gauge_transform(gb, m)
    assert sb.P() == dx * dx - 2 * dx + one


def test_cyclic_vector_budget_exhaustion():
    with pytest.raises(CyclicVectorNotFound):
        cyclic_vector(fixture_gb("exp_pair"), max_attempts=1)


def test_cyclic_vector_rejects_trivial_quotient():
    with pytest.raises(ValueError):
        cyclic_vector(fixture_gb("unit"))


def test_gauge_transform_known_values():
    (dx, dy), one = sym(1)
    xp = MultiPoly.var(1, 0)
    x = OreOperator.from_coeff(RatFunc.var(1, 0))
    gb = fixture_gb("exp_pair")
    sb = gauge_transform(gb, x + dy)
    assert sb.P() == dx * dx - 2 * dx + one
    q1 = sb.q_coeffs[0]
    one_p = MultiPoly.one(1)
    assert q1[0] == RatFunc((xp + one_p) * (xp + one_p))
    assert q1[1] == RatFunc(-(xp * (xp + one_p)))


def test_gauge_outputs_annihilate_transformed_solutions():
    (dx, dy), one = sym(1)
    x = OreOperator.from_coeff(RatFunc.var(1, 0))
    gb = fixture_gb("exp_pair")
    m = x + dy
    sb = gauge_transform(gb, m)
    sol = solve_series(gb, order=9)
    for f in sol.members:
        g = m.apply(f)
        assert sb.P().apply(g).is_zero()
        # Dy g = Q1(Dx) g as functions
        dyg = OreOperator.D(1, 1).apply(g)
        q1g = sb.Q(1).apply(g)
        assert dyg.agrees_with(q1g)


def test_gauge_transform_rejects_non_cyclic_class():
    gb = fixture_gb("exp_pair")
    with pytest.raises(NotCyclic):
        gauge_transform(gb, OreOperator.one(1))
    # the class of a generator is zero in the quotient
    with pytest.raises(NotCyclic):
        gauge_transform(gb, gb.gens[0])


def test_gauge_with_one_matches_shape_basis():
    gb = fixture_gb("two_points")
    assert gauge_transform(gb, OreOperator.one(1)) == shape_basis(gb)
