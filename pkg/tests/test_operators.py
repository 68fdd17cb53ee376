"""Shift-operator algebra: exact laws, composition, operator integrals."""

from fractions import Fraction

import numpy as np
import pytest

from qdilog.core import as_modulus
from qdilog.errors import DegenerateParameterError
from qdilog.operators import (
    OpIntegral,
    ShiftOp,
    compose,
    kac_lhs,
    kac_lhs_closed_form,
    kac_rhs_integral,
    kac_substitution_tuple,
    kac_values,
    make_E_div,
    make_F_div,
    make_K_pow,
    make_rep_params,
    qbinomial_integral,
    qbinomial_target,
    qbinomial_value,
    rep_bindings,
    scalar_op,
    verify_EE,
    verify_FF,
    verify_KE,
    verify_KF,
    verify_KK,
    verify_weyl,
    weyl_power,
)
from qdilog.symbolic import (
    GaussRat,
    Symbol,
    gauss_from_products,
    gen,
    symbol_equal_exact,
)

RATIONALS = [Fraction(3, 8), Fraction(5, 8), Fraction(6, 25), Fraction(2, 5)]


# ---------------------------------------------------------------------------
# Exact relations


def test_cartan_powers_commute_and_add():
    assert verify_KK()
    assert verify_KK(RATIONALS[0], RATIONALS[1])


def test_cartan_moves_past_raising_with_phase():
    assert verify_KE()
    assert verify_KE(RATIONALS[2], RATIONALS[3])


def test_cartan_moves_past_lowering_with_phase():
    assert verify_KF()
    assert verify_KF(RATIONALS[0], RATIONALS[2])


def test_raising_powers_compose_through_beta_coefficient():
    assert verify_EE()
    assert verify_EE(RATIONALS[1], RATIONALS[3])


def test_lowering_powers_compose_through_beta_coefficient():
    assert verify_FF()
    assert verify_FF(RATIONALS[0], RATIONALS[3])


def test_weyl_pair_commutation_phase():
    assert verify_weyl()
    assert verify_weyl(RATIONALS[2], RATIONALS[1])


@pytest.mark.parametrize("kind", ["U1", "V1", "U2", "V2"])
def test_weyl_powers_form_one_parameter_groups(kind):
    a = weyl_power(kind, Fraction(1, 3))
    c = weyl_power(kind, Fraction(2, 5))
    prod = compose(a, c)
    direct = weyl_power(kind, Fraction(1, 3) + Fraction(2, 5))
    eq, diff = symbol_equal_exact(prod.symbol, direct.symbol)
    assert eq, diff
    assert prod.shift == direct.shift


def test_weyl_rejects_unknown_kind():
    with pytest.raises(ValueError):
        weyl_power("U3", Fraction(1, 2))


# ---------------------------------------------------------------------------
# Composition algebra


def _random_shift_op(rng) -> ShiftOp:
    def frac():
        return Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 5)))

    u, s, t = gen("u"), gen("bs"), gen("bt")
    gauss = gauss_from_products(
        [
            (u, u, GaussRat(frac(), frac())),
            (u, s, GaussRat(frac(), frac())),
            (s, t, GaussRat(frac(), frac())),
        ]
    )
    sym = Symbol.from_gauss(gauss) * Symbol.gb(
        u.scale(GaussRat.of(1j)) + s.scale(frac()), int(rng.integers(-2, 3))
    )
    shift = s.scale(frac()) + t.scale(frac())
    return ShiftOp(sym, shift)


def test_composition_is_associative():
    rng = np.random.default_rng(1207)
    for _ in range(25):
        a, c, d = (_random_shift_op(rng) for _ in range(3))
        left = compose(compose(a, c), d)
        right = compose(a, compose(c, d))
        eq, diff = symbol_equal_exact(left.symbol, right.symbol)
        assert eq, diff
        assert left.shift == right.shift


def test_scalar_identity_is_neutral():
    one = scalar_op(Symbol.one())
    op = make_E_div(gen("bs"))
    for prod in (compose(one, op), compose(op, one)):
        eq, _ = symbol_equal_exact(prod.symbol, op.symbol)
        assert eq
        assert prod.shift == op.shift


def test_composition_homomorphism_under_evaluation():
    # Evaluating a composed symbol must match evaluating the pieces with
    # the translation applied in between.
    m = as_modulus(0.8)
    params = make_rep_params(0.8, alpha=0.5, s=0.3, t=0.2, u_samples=(0.1,))
    bnd = rep_bindings(params, 0.1)
    e_op, f_op = make_E_div(gen("bs")), make_F_div(gen("bt"))
    comp = compose(f_op, e_op)
    moved = dict(bnd)
    moved["u"] = bnd["u"] + complex(f_op.shift.evaluate(bnd))
    direct = f_op.symbol.evaluate(bnd, m) * e_op.symbol.evaluate(moved, m)
    val = comp.symbol.evaluate(bnd, m)
    assert abs(val - direct) / abs(direct) < 1e-9


def test_composed_product_matches_closed_form_exactly():
    lhs = kac_lhs()
    closed = kac_lhs_closed_form()
    eq, diff = symbol_equal_exact(lhs.symbol, closed.symbol)
    assert eq, diff
    assert lhs.shift == closed.shift


# ---------------------------------------------------------------------------
# Operator integrals


def test_operator_integral_requires_variable_free_shift():
    bad = OpIntegral("btau", weyl_power("U1", gen("btau")))
    with pytest.raises(AssertionError):
        bad.spec()


def test_binomial_integrand_shift_and_phase():
    opint = qbinomial_integral()
    assert opint.integrand.shift == -gen("bs")
    assert opint.integrand.symbol.gauss.coeff("btau", "btau") == GaussRat.of(1j)


def test_composition_integrand_shift_is_variable_free():
    opint = kac_rhs_integral()
    assert opint.integrand.shift.coeff("btau").is_zero()
    assert opint.integrand.shift == kac_lhs().shift


def test_binomial_expansion_value_and_swap_symmetry():
    params = make_rep_params(0.8, alpha=0.5, s=0.4, u_samples=(0.1,))
    lhs, target, res = qbinomial_value(params, 0.1, rel_tol=1e-8)
    assert abs(lhs - target) / abs(target) < 1e-7
    swapped, target2, _ = qbinomial_value(params, 0.1, rel_tol=1e-8, swapped=True)
    assert target2 == target
    assert abs(swapped - target) / abs(target) < 1e-7


def test_composition_value_matches_integral():
    params = make_rep_params(0.8, alpha=0.5, s=0.3, t=0.2, u_samples=(0.1, -0.23))
    for u in params.u_samples:
        lhs, rhs, res = kac_values(params, u, rel_tol=1e-7)
        assert abs(lhs - rhs) / abs(rhs) < 1e-6
        assert res.err_estimate < 1e-6 * abs(rhs)


def test_substitution_tuple_values():
    params = make_rep_params(0.8, alpha=0.5, s=0.3, t=0.2, u_samples=(0.1,))
    a, b_arg, c, d = kac_substitution_tuple(params, 0.1)
    m = as_modulus(0.8)
    assert a == pytest.approx(-0.24j)
    assert b_arg == pytest.approx(-0.16j)
    assert c == pytest.approx(-0.12j)
    assert d == pytest.approx(m.Q / 2 + 0.76j)


def test_degenerate_labels_are_refused():
    # s ~ 0 drags a dilogarithm argument onto the pole lattice.
    with pytest.raises(DegenerateParameterError):
        make_rep_params(0.8, alpha=0.5, s=1e-4, u_samples=(0.1,))


def test_binomial_target_is_prefactor_free_divided_power():
    s = gen("bs")
    expected = make_E_div(s).symbol * Symbol.gb(
        s.scale(GaussRat.of(-1j)), -1
    )
    eq, diff = symbol_equal_exact(qbinomial_target(), expected)
    assert eq, diff
