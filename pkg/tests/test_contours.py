"""Contour planning geometry and the integration engine's contracts."""

import numpy as np
import pytest

from qdilog.contour import (
    ContourSpec,
    integrate_contour,
    plan_contour,
    pole_sequences,
)
from qdilog.core import as_modulus
from qdilog.errors import ContourUnsupportedError
from qdilog.identities import six_nine_integrand, tau_binomial_integrand
from qdilog.operators import (
    kac_rhs_integral,
    make_rep_params,
    qbinomial_integral,
    rep_bindings,
)
from qdilog.symbolic import GaussRat, IntegrandSpec, Symbol, gauss_from_products, gen

M8 = as_modulus(0.8)


def tb_bindings(alpha, beta):
    return {"Q": M8.Q, "alpha": complex(alpha), "beta": complex(beta)}


def test_pole_sequences_of_beta_integrand():
    # Two fans: the reciprocal factor puts a descending fan with its top at
    # the origin, the direct factor an ascending fan starting at i*alpha.
    alpha = M8.Q / 6
    poles, zeros = pole_sequences(tau_binomial_integrand(), tb_bindings(alpha, alpha), M8)
    assert len(poles) == 2
    by_dir = {s.direction: s for s in poles}
    assert by_dir[-1].base == 0j
    assert by_dir[+1].base == pytest.approx(1j * alpha)
    assert all(s.weight == 1 for s in poles)
    assert len(zeros) == 2


def test_beta_integrand_baseline_splits_the_gap():
    alpha = M8.Q / 6
    c = plan_contour(tau_binomial_integrand(), tb_bindings(alpha, alpha), M8)
    assert c.indentations == ()
    assert c.gap_lo == pytest.approx(0.0, abs=1e-12)
    assert c.gap_hi == pytest.approx(alpha.real)
    assert c.baseline == pytest.approx(0.5 * alpha.real)


def test_six_nine_baseline_below_smallest_ascending_fan():
    bnd = {
        "Q": M8.Q,
        "A": M8.Q / 6,
        "B": M8.Q / 7,
        "C": M8.Q / 9,
        "D": M8.Q / 4 + 0.1j,
    }
    c = plan_contour(six_nine_integrand(), bnd, M8)
    assert c.indentations == ()
    assert 0.0 < c.baseline < (M8.Q / 9).real
    assert c.gap_hi == pytest.approx((M8.Q / 9).real)


def test_binomial_contour_bumps_the_on_axis_cluster():
    # bs = 0.32 puts fan endpoints at 0 (descending) and bs (ascending) on
    # the axis itself; the planner must thread between them with two
    # semicircles of radius bs / 4.
    params = make_rep_params(0.8, alpha=0.5, s=0.4, u_samples=(0.1,))
    c = plan_contour(qbinomial_integral().spec(), rep_bindings(params, 0.1), M8)
    assert c.baseline == pytest.approx(0.0)
    assert len(c.indentations) == 2
    lo, hi = sorted(c.indentations, key=lambda i: i.center)
    assert lo.center == pytest.approx(0.0, abs=1e-12)
    assert lo.side == "above"
    assert hi.center == pytest.approx(0.32)
    assert hi.side == "below"
    for bump in (lo, hi):
        assert bump.radius == pytest.approx(0.08)


def test_composition_contour_bumps_every_cluster_point():
    params = make_rep_params(0.8, alpha=0.5, s=0.3, t=0.2, u_samples=(0.1,))
    c = plan_contour(kac_rhs_integral().spec(), rep_bindings(params, 0.1), M8)
    centers = sorted(i.center for i in c.indentations)
    assert centers == pytest.approx([-0.24, -0.16, -0.12, 0.0])
    sides = {i.center: i.side for i in c.indentations}
    assert sides[min(sides)] == "above"
    assert sides[max(sides)] == "below"
    # nearest-neighbor gap is 0.04, so radii stay at a quarter of that
    assert all(i.radius == pytest.approx(0.01) for i in c.indentations)


def test_pinched_gap_is_refused():
    with pytest.raises(ContourUnsupportedError):
        plan_contour(tau_binomial_integrand(), tb_bindings(1e-9, M8.Q / 6), M8)


def test_inverted_fans_are_refused():
    # A negative weight puts the ascending fan below the descending one;
    # no horizontal contour separates them.
    with pytest.raises(ContourUnsupportedError):
        plan_contour(tau_binomial_integrand(), tb_bindings(-0.3, M8.Q / 6), M8)


def test_handed_in_contour_on_a_pole_is_refused():
    alpha = M8.Q / 6
    bad = ContourSpec(baseline=float(alpha.real))
    with pytest.raises(ContourUnsupportedError):
        integrate_contour(
            tau_binomial_integrand(), tb_bindings(alpha, alpha), M8, contour=bad
        )


def test_pure_gaussian_needs_no_fans():
    v = gen("v")
    spec = IntegrandSpec(
        Symbol.from_gauss(gauss_from_products([(v, v, GaussRat.of(-2))])), "v"
    )
    res = integrate_contour(spec, {}, M8, rel_tol=1e-12)
    assert res.value == pytest.approx(2.0**-0.5, rel=1e-12)
    assert res.contour.indentations == ()


def test_fixed_truncation_is_respected():
    v = gen("v")
    spec = IntegrandSpec(
        Symbol.from_gauss(gauss_from_products([(v, v, GaussRat.of(-2))])), "v"
    )
    res = integrate_contour(
        spec, {}, M8, contour=ContourSpec(baseline=0.0, truncation=5.0)
    )
    assert res.truncation == (5.0, 5.0)
    assert res.value == pytest.approx(2.0**-0.5, rel=1e-10)


def test_contour_deformation_leaves_value_fixed():
    # Any baseline inside the gap encloses the same fans, so the value may
    # move only within the two error budgets.
    alpha = M8.Q / 6
    bnd = tb_bindings(alpha, alpha)
    spec = tau_binomial_integrand()
    base = integrate_contour(spec, bnd, M8, rel_tol=1e-9)
    shifted = ContourSpec(baseline=0.8 * alpha.real)
    moved = integrate_contour(spec, bnd, M8, contour=shifted, rel_tol=1e-9)
    budget = base.err_estimate + moved.err_estimate + 1e-13 * abs(base.value)
    assert abs(base.value - moved.value) <= budget


def test_bumped_contour_integrates_without_tripping_pole_guard():
    # Regression: the magnitude probe at x = 0 must ride the indentation
    # arc instead of sampling the bumped pole on the baseline.
    params = make_rep_params(0.8, alpha=0.5, s=0.4, u_samples=(0.1,))
    opint = qbinomial_integral()
    res = opint.integrate(rep_bindings(params, 0.1), M8, rel_tol=1e-8)
    assert np.isfinite(res.value.real) and np.isfinite(res.value.imag)
    assert res.err_estimate < 1e-6 * abs(res.value)


def test_truncation_doubling_stays_within_budget():
    alpha = M8.Q / 6
    bnd = tb_bindings(alpha, alpha)
    spec = tau_binomial_integrand()
    base = integrate_contour(spec, bnd, M8, rel_tol=1e-9)
    t = 2.0 * max(base.truncation)
    doubled = integrate_contour(
        spec,
        bnd,
        M8,
        contour=ContourSpec(baseline=base.contour.baseline, truncation=t),
        rel_tol=1e-9,
    )
    budget = base.err_estimate + doubled.err_estimate + 1e-13 * abs(base.value)
    assert abs(base.value - doubled.value) <= budget
