"""Exact-arithmetic layer: Gaussian rationals, affine forms, symbols."""

import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdilog.core import as_modulus
from qdilog.symbolic import (
    AffineForm,
    GaussExponent,
    GaussRat,
    Symbol,
    as_affine,
    const,
    gauss_from_products,
    gen,
    symbol_equal_exact,
)

fractions = st.fractions(
    min_value=-8, max_value=8, max_denominator=12
)
gaussrats = st.builds(GaussRat, fractions, fractions)
names = st.sampled_from(["x", "y", "z", "w"])


def affine_forms():
    return st.builds(
        lambda pairs, c: AffineForm.make(pairs, c),
        st.lists(st.tuples(names, gaussrats), max_size=4),
        gaussrats,
    )


BINDINGS = {"x": 0.3 + 0.1j, "y": -0.7 + 0.4j, "z": 1.2 - 0.2j, "w": 0.05j}


# ---------------------------------------------------------------------------
# Gaussian rationals


@settings(derandomize=True, max_examples=200)
@given(gaussrats, gaussrats, gaussrats)
def test_gaussrat_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + GaussRat() == a
    assert a * GaussRat.of(1) == a


@settings(derandomize=True, max_examples=200)
@given(gaussrats, gaussrats)
def test_gaussrat_division_inverts_multiplication(a, b):
    if b.is_zero():
        with pytest.raises(ZeroDivisionError):
            a / b
    else:
        assert (a * b) / b == a


@settings(derandomize=True, max_examples=100)
@given(gaussrats, gaussrats)
def test_gaussrat_complex_embedding_is_homomorphic(a, b):
    # float conversion is exact for these small fractions' products only
    # approximately; compare exactly in the rationals instead.
    s = a + b
    p = a * b
    assert s.re == a.re + b.re and s.im == a.im + b.im
    assert p.re == a.re * b.re - a.im * b.im
    assert p.im == a.re * b.im + a.im * b.re


def test_gaussrat_of_literals():
    assert GaussRat.of(2.0) == GaussRat(Fraction(2), Fraction(0))
    assert GaussRat.of(-1j) == GaussRat(Fraction(0), Fraction(-1))
    assert GaussRat.of((Fraction(1, 3), 2)) == GaussRat(Fraction(1, 3), Fraction(2))
    with pytest.raises(TypeError):
        GaussRat.of(0.3)  # non-dyadic float would silently lose exactness
    with pytest.raises(TypeError):
        GaussRat.of("1/2")


# ---------------------------------------------------------------------------
# Affine forms


@settings(derandomize=True, max_examples=150)
@given(affine_forms(), affine_forms())
def test_affine_evaluation_is_additive(f, g):
    lhs = (f + g).evaluate(BINDINGS)
    rhs = f.evaluate(BINDINGS) + g.evaluate(BINDINGS)
    assert abs(lhs - rhs) < 1e-12


@settings(derandomize=True, max_examples=150)
@given(affine_forms(), affine_forms())
def test_affine_substitution_commutes_with_evaluation(f, h):
    sub = f.substitute("y", h)
    env = dict(BINDINGS)
    env["y"] = h.evaluate(BINDINGS)
    # h may itself contain y; the substituted form uses the outer bindings.
    lhs = sub.evaluate(BINDINGS)
    rhs = f.drop("y").evaluate(BINDINGS) + complex(f.coeff("y")) * h.evaluate(
        BINDINGS
    )
    assert abs(lhs - rhs) < 1e-12


def test_affine_canonical_form_merges_and_drops():
    f = AffineForm.make(
        [("x", GaussRat.of(1)), ("x", GaussRat.of(-1)), ("y", GaussRat.of(2))]
    )
    assert f.coeff("x").is_zero()
    assert [n for n, _ in f.terms] == ["y"]
    assert gen("x") - gen("x") == const(0)


def test_affine_unit_pseudogenerator_folds_into_const():
    f = AffineForm.make([("unit", GaussRat.of(3)), ("x", GaussRat.of(1))])
    assert f.const == GaussRat.of(3)
    assert f.evaluate({"x": 2.0}) == pytest.approx(5.0)


# ---------------------------------------------------------------------------
# Gaussian exponents


@settings(derandomize=True, max_examples=100)
@given(st.lists(st.tuples(names, names, gaussrats), max_size=4))
def test_gauss_exponent_substitution_matches_evaluation(triples):
    g = gauss_from_products([(gen(a), gen(b), c) for a, b, c in triples])
    h = gen("x").scale(GaussRat.of(2)) + const(GaussRat.of((Fraction(1, 2), 0)))
    sub = g.substitute("y", h)
    env = dict(BINDINGS)
    env["y"] = h.evaluate(BINDINGS)
    assert abs(sub.evaluate(BINDINGS) - g.evaluate(env)) < 1e-10


def test_gauss_polynomial_in_reconstructs_exponent():
    g = gauss_from_products(
        [
            (gen("t"), gen("t"), GaussRat.of(2j)),
            (gen("x"), gen("t"), GaussRat.of(-2)),
            (gen("x"), gen("x"), GaussRat.of(1)),
        ]
    )
    c2, c1, c0 = g.polynomial_in("t", BINDINGS)
    for t in (0.3, -1.1 + 0.2j):
        direct = g.evaluate({**BINDINGS, "t": t})
        poly = cmath.pi * (c2 * t * t + c1 * t + c0)
        assert abs(direct - poly) < 1e-12


# ---------------------------------------------------------------------------
# Symbols


def test_symbol_product_merges_factors():
    a = gen("x") + const(GaussRat.of(1))
    s = Symbol.gb(a) * Symbol.gb(a) * Symbol.gb(gen("y"), -1)
    exps = {f.argument: f.exponent for f in s.factors}
    assert exps[as_affine(a)] == 2
    assert exps[as_affine(gen("y"))] == -1
    # multiplying by the inverse cancels everything
    eq, diff = symbol_equal_exact(s * s.inverse(), Symbol.one())
    assert eq, diff


def test_symbol_equal_exact_certificate_localizes_mismatch():
    s1 = Symbol.gb(gen("x")) * Symbol.from_gauss(
        gauss_from_products([(gen("x"), gen("y"), GaussRat.of(1))])
    )
    s2 = Symbol.gb(gen("x"), 2) * Symbol.from_gauss(
        gauss_from_products([(gen("x"), gen("y"), GaussRat.of(2))])
    )
    eq, diff = symbol_equal_exact(s1, s2)
    assert not eq
    assert len(diff["gauss"]) == 1 and len(diff["factors"]) == 1
    (pair, ca, cb) = diff["gauss"][0]
    assert ca == GaussRat.of(1) and cb == GaussRat.of(2)
    (arg, ea, eb) = diff["factors"][0]
    assert (ea, eb) == (1, 2)


def test_symbol_evaluate_on_matches_pointwise_evaluate():
    m = as_modulus(0.8)
    tau = gen("tau")
    sym = (
        Symbol.from_gauss(
            gauss_from_products(
                [(tau, tau, GaussRat.of(1j)), (gen("x"), tau, GaussRat.of(-2))]
            )
        )
        * Symbol.gb(gen("x") + tau.scale(GaussRat.of(1j)))
        * Symbol.gb(gen("Q") - tau.scale(GaussRat.of(1j)), -1)
    )
    bnd = {"x": 0.4 + 0.05j, "Q": m.Q}
    grid = np.array([-0.8, -0.1, 0.33, 1.2], dtype=complex)
    batch = sym.evaluate_on("tau", grid, bnd, m)
    for t, v in zip(grid, batch):
        direct = sym.evaluate({**bnd, "tau": t}, m)
        assert abs(v - direct) / abs(direct) < 1e-11


def test_symbol_substitution_commutes_with_evaluation():
    m = as_modulus(0.8)
    sym = Symbol.gb(gen("u") + const(GaussRat.of((Fraction(1, 2), 0)))) * Symbol.from_gauss(
        gauss_from_products([(gen("u"), gen("u"), GaussRat.of((Fraction(1, 4), 0)))])
    )
    shift = gen("u") + const(GaussRat.of((Fraction(3, 10), 0)))
    sub = sym.substitute("u", shift)
    bnd = {"u": 0.21 + 0.07j}
    direct = sym.evaluate({"u": shift.evaluate(bnd)}, m)
    assert abs(sub.evaluate(bnd, m) - direct) / abs(direct) < 1e-11
