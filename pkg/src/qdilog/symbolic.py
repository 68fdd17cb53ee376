"""Exact symbol algebra for products of dilogarithm factors.

Everything here is exact: coefficients are Gaussian rationals (Fraction real
and imaginary parts), arguments of dilogarithm factors are affine forms over
named generators, and exponential prefactors are quadratic forms in those
generators with Gaussian-rational coefficients, in units of pi.

Generators stand for already-b-scaled real quantities (bs for b*s, btau for
b*tau, ...) plus the special names u, alpha, Q and the constant generator
'unit', which every numeric binding maps to 1.  Scaling this way keeps all
the coefficients appearing in the algebra exact.

A Symbol is exp(pi * quadratic form) times a product of G_b factors with
integer exponents; it multiplies, inverts, substitutes and evaluates, which
is everything the shift-operator layer and the contour engine need.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import EvalConfig, ModulusParam, gb_eval_many

__all__ = [
    "GaussRat",
    "GR_ZERO",
    "GR_ONE",
    "GR_I",
    "register_generator",
    "generator_index",
    "AffineForm",
    "gen",
    "const",
    "GaussExponent",
    "gauss_from_products",
    "GbFactor",
    "Symbol",
    "symbol_equal_exact",
    "IntegrandSpec",
]


@dataclass(frozen=True)
class GaussRat:
    """Gaussian rational re + im*i with exact Fraction components."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(Fraction(x), Fraction(0))
        if isinstance(x, tuple) and len(x) == 2:
            return GaussRat(Fraction(x[0]), Fraction(x[1]))
        if isinstance(x, (float, complex)):
            # Literals like 2.0 or -1j are welcome; anything with a fractional
            # binary part must be spelled as a Fraction pair to stay exact.
            re, im = complex(x).real, complex(x).imag
            if re == int(re) and im == int(im):
                return GaussRat(Fraction(int(re)), Fraction(int(im)))
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")

    def __add__(self, other) -> "GaussRat":
        o = GaussRat.of(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    def __sub__(self, other) -> "GaussRat":
        o = GaussRat.of(other)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other) -> "GaussRat":
        o = GaussRat.of(other)
        return GaussRat(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    def __truediv__(self, other) -> "GaussRat":
        o = GaussRat.of(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRat(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def sort_key(self):
        return (self.re, self.im)

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"


GR_ZERO = GaussRat()
GR_ONE = GaussRat(Fraction(1))
GR_I = GaussRat(Fraction(0), Fraction(1))

# Canonical generator order; new names are appended on first use so symbol
# normal forms stay stable within a process.
_REGISTRY: dict[str, int] = {}
for _name in (
    "unit",
    "Q",
    "u",
    "alpha",
    "bs",
    "bt",
    "bs1",
    "bs2",
    "bt1",
    "bt2",
    "btau",
    "bp",
    "bp1",
    "bp2",
    "A",
    "B",
    "C",
    "D",
    "beta",
):
    _REGISTRY[_name] = len(_REGISTRY)


def register_generator(name: str) -> int:
    """Ensure name has a slot in the canonical ordering; return its index."""
    if not isinstance(name, str) or not name:
        raise TypeError("generator names are nonempty strings")
    if name not in _REGISTRY:
        _REGISTRY[name] = len(_REGISTRY)
    return _REGISTRY[name]


def generator_index(name: str) -> int:
    return register_generator(name)


def _lookup(bindings: Mapping[str, complex], name: str) -> complex:
    if name == "unit":
        return 1.0 + 0j
    try:
        return complex(bindings[name])
    except KeyError:
        raise KeyError(f"no binding for generator {name!r}") from None


@dataclass(frozen=True)
class AffineForm:
    """Exact affine combination sum_k c_k * g_k + c0 of generators."""

    terms: tuple  # ((name, GaussRat), ...) sorted by registry index, no zeros
    const: GaussRat = GR_ZERO

    @staticmethod
    def make(terms: Iterable[tuple], const=GR_ZERO) -> "AffineForm":
        acc: dict[str, GaussRat] = {}
        for name, c in terms:
            c = GaussRat.of(c)
            if name == "unit":
                const = GaussRat.of(const) + c
                continue
            register_generator(name)
            acc[name] = acc.get(name, GR_ZERO) + c
        cleaned = tuple(
            sorted(
                ((n, c) for n, c in acc.items() if not c.is_zero()),
                key=lambda nc: _REGISTRY[nc[0]],
            )
        )
        return AffineForm(cleaned, GaussRat.of(const))

    def __add__(self, other) -> "AffineForm":
        o = as_affine(other)
        return AffineForm.make(self.terms + o.terms, self.const + o.const)

    def __sub__(self, other) -> "AffineForm":
        return self + (-as_affine(other))

    def __neg__(self) -> "AffineForm":
        return self.scale(-1)

    def scale(self, c) -> "AffineForm":
        c = GaussRat.of(c)
        return AffineForm.make(
            [(n, k * c) for n, k in self.terms], self.const * c
        )

    def coeff(self, name: str) -> GaussRat:
        for n, c in self.terms:
            if n == name:
                return c
        return GR_ZERO

    def drop(self, name: str) -> "AffineForm":
        return AffineForm.make(
            [(n, c) for n, c in self.terms if n != name], self.const
        )

    def is_const(self) -> bool:
        return not self.terms

    def substitute(self, name: str, form: "AffineForm") -> "AffineForm":
        c = self.coeff(name)
        if c.is_zero():
            return self
        return self.drop(name) + form.scale(c)

    def evaluate(self, bindings: Mapping[str, complex]) -> complex:
        total = complex(self.const)
        for n, c in self.terms:
            total += complex(c) * _lookup(bindings, n)
        return total

    def sort_key(self):
        return (
            tuple((_REGISTRY[n], c.sort_key()) for n, c in self.terms),
            self.const.sort_key(),
        )

    def __repr__(self) -> str:
        parts = [f"{c}*{n}" for n, c in self.terms]
        if not self.const.is_zero() or not parts:
            parts.append(f"{self.const}")
        return " + ".join(parts)


def gen(name: str) -> AffineForm:
    """The affine form consisting of a single generator."""
    register_generator(name)
    return AffineForm(((name, GR_ONE),), GR_ZERO)


def const(c) -> AffineForm:
    return AffineForm((), GaussRat.of(c))


def as_affine(x) -> AffineForm:
    if isinstance(x, AffineForm):
        return x
    if isinstance(x, str):
        return gen(x)
    return const(GaussRat.of(x))


def _affine_items(f: AffineForm):
    """Terms of an affine form with the constant folded in as 'unit'."""
    items = list(f.terms)
    if not f.const.is_zero():
        items.append(("unit", f.const))
    return items


@dataclass(frozen=True)
class GaussExponent:
    """Quadratic form sum c * g1 * g2 over generators, in units of pi.

    The numeric exponent is pi * sum_terms c * v(g1) * v(g2) with v('unit')
    = 1, so linear terms pair a generator with 'unit' and constants use
    ('unit', 'unit').  Addition of exponents is multiplication of the
    exponentials they represent.
    """

    terms: tuple  # (((name1, name2), GaussRat), ...) canonical

    @staticmethod
    def make(entries: Iterable[tuple]) -> "GaussExponent":
        acc: dict[tuple, GaussRat] = {}
        for pair, c in entries:
            a, b = pair
            register_generator(a)
            register_generator(b)
            if _REGISTRY[a] > _REGISTRY[b]:
                a, b = b, a
            c = GaussRat.of(c)
            acc[(a, b)] = acc.get((a, b), GR_ZERO) + c
        cleaned = tuple(
            sorted(
                ((p, c) for p, c in acc.items() if not c.is_zero()),
                key=lambda pc: (_REGISTRY[pc[0][0]], _REGISTRY[pc[0][1]]),
            )
        )
        return GaussExponent(cleaned)

    @staticmethod
    def zero() -> "GaussExponent":
        return GaussExponent(())

    def __add__(self, other: "GaussExponent") -> "GaussExponent":
        return GaussExponent.make(self.terms + other.terms)

    def __neg__(self) -> "GaussExponent":
        return self.scale(-1)

    def scale(self, c) -> "GaussExponent":
        c = GaussRat.of(c)
        return GaussExponent.make([(p, k * c) for p, k in self.terms])

    def coeff(self, name1: str, name2: str) -> GaussRat:
        a, b = name1, name2
        register_generator(a)
        register_generator(b)
        if _REGISTRY[a] > _REGISTRY[b]:
            a, b = b, a
        for p, c in self.terms:
            if p == (a, b):
                return c
        return GR_ZERO

    def substitute(self, name: str, form: AffineForm) -> "GaussExponent":
        """Replace a generator by an affine form, re-expanding products."""
        if all(name not in p for p, _ in self.terms):
            return self
        entries = []
        for (a, b), c in self.terms:
            fa = form if a == name else gen(a) if a != "unit" else const(1)
            fb = form if b == name else gen(b) if b != "unit" else const(1)
            if a != name and b != name:
                entries.append(((a, b), c))
                continue
            for n1, c1 in _affine_items(fa):
                for n2, c2 in _affine_items(fb):
                    entries.append(((n1, n2), c * c1 * c2))
        return GaussExponent.make(entries)

    def polynomial_in(self, name: str, bindings: Mapping[str, complex]):
        """Coefficients (c2, c1, c0) of the exponent as pi*(c2 v^2 + c1 v + c0)
        in the single unbound generator v = name."""
        c2 = 0j
        c1 = 0j
        c0 = 0j
        for (a, b), c in self.terms:
            cc = complex(c)
            if a == name and b == name:
                c2 += cc
            elif a == name:
                c1 += cc * _lookup(bindings, b)
            elif b == name:
                c1 += cc * _lookup(bindings, a)
            else:
                c0 += cc * _lookup(bindings, a) * _lookup(bindings, b)
        return c2, c1, c0

    def evaluate(self, bindings: Mapping[str, complex]) -> complex:
        """The exponent value pi * sum c * v(g1) * v(g2) (not exponentiated)."""
        total = 0j
        for (a, b), c in self.terms:
            total += complex(c) * _lookup(bindings, a) * _lookup(bindings, b)
        return cmath.pi * total


def gauss_from_products(
    products: Sequence[tuple],
) -> GaussExponent:
    """GaussExponent from (affine, affine, coeff) triples: sum c * f1 * f2."""
    entries = []
    for f1, f2, c in products:
        c = GaussRat.of(c)
        for n1, c1 in _affine_items(as_affine(f1)):
            for n2, c2 in _affine_items(as_affine(f2)):
                entries.append(((n1, n2), c * c1 * c2))
    return GaussExponent.make(entries)


@dataclass(frozen=True)
class GbFactor:
    """One dilogarithm factor G_b(argument)^exponent."""

    argument: AffineForm
    exponent: int


@dataclass(frozen=True)
class Symbol:
    """exp(pi * gauss) times a product of dilogarithm factors."""

    gauss: GaussExponent
    factors: tuple  # (GbFactor, ...) canonical

    @staticmethod
    def make(gauss: GaussExponent, factors: Iterable[GbFactor]) -> "Symbol":
        acc: dict[AffineForm, int] = {}
        for f in factors:
            acc[f.argument] = acc.get(f.argument, 0) + f.exponent
        cleaned = tuple(
            sorted(
                (GbFactor(a, e) for a, e in acc.items() if e != 0),
                key=lambda f: f.argument.sort_key(),
            )
        )
        return Symbol(gauss, cleaned)

    @staticmethod
    def one() -> "Symbol":
        return Symbol(GaussExponent.zero(), ())

    @staticmethod
    def from_gauss(gauss: GaussExponent) -> "Symbol":
        return Symbol.make(gauss, ())

    @staticmethod
    def gb(argument, exponent: int = 1) -> "Symbol":
        return Symbol.make(
            GaussExponent.zero(), (GbFactor(as_affine(argument), exponent),)
        )

    def __mul__(self, other: "Symbol") -> "Symbol":
        return Symbol.make(self.gauss + other.gauss, self.factors + other.factors)

    def inverse(self) -> "Symbol":
        return Symbol.make(
            -self.gauss,
            tuple(GbFactor(f.argument, -f.exponent) for f in self.factors),
        )

    def substitute(self, name: str, form: AffineForm) -> "Symbol":
        return Symbol.make(
            self.gauss.substitute(name, form),
            tuple(
                GbFactor(f.argument.substitute(name, form), f.exponent)
                for f in self.factors
            ),
        )

    def evaluate(
        self,
        bindings: Mapping[str, complex],
        m: ModulusParam,
        cfg: EvalConfig | None = None,
    ) -> complex:
        """Numeric value: exp(gauss) times the product of G_b factor powers."""
        args = [f.argument.evaluate(bindings) for f in self.factors]
        vals = gb_eval_many(args, m, cfg)
        total = cmath.exp(self.gauss.evaluate(bindings))
        for f, v in zip(self.factors, vals):
            total *= v ** f.exponent
        return total

    def evaluate_on(
        self,
        var: str,
        values: np.ndarray,
        bindings: Mapping[str, complex],
        m: ModulusParam,
        cfg: EvalConfig | None = None,
    ) -> np.ndarray:
        """Vectorized value over a grid of the generator var.

        All factor arguments across all grid points go through one batched
        dilogarithm evaluation.
        """
        values = np.asarray(values, dtype=complex)
        c2, c1, c0 = self.gauss.polynomial_in(var, bindings)
        out = np.exp(cmath.pi * (c2 * values * values + c1 * values + c0))
        if not self.factors:
            return out
        args = []
        for f in self.factors:
            a0 = f.argument.drop(var).evaluate(bindings)
            g = complex(f.argument.coeff(var))
            args.append(a0 + g * values)
        flat = np.concatenate(args)
        vals = gb_eval_many(flat, m, cfg)
        n = len(values)
        for i, f in enumerate(self.factors):
            out = out * vals[i * n : (i + 1) * n] ** f.exponent
        return out

    def __repr__(self) -> str:
        fac = " * ".join(
            f"G({f.argument!r})^{f.exponent}" if f.exponent != 1 else f"G({f.argument!r})"
            for f in self.factors
        )
        return f"Symbol[e^(pi*({self.gauss.terms}))" + (f" * {fac}]" if fac else "]")


def symbol_equal_exact(a: Symbol, b: Symbol) -> tuple:
    """Exact normal-form comparison with a mismatch certificate.

    Returns (equal, diff) where diff lists the gauss pairs whose
    coefficients differ and the factor arguments whose exponents differ;
    both lists are empty exactly when the symbols are equal.
    """
    gauss_diff = []
    pairs = {p for p, _ in a.gauss.terms} | {p for p, _ in b.gauss.terms}
    for p in sorted(
        pairs, key=lambda pr: (generator_index(pr[0]), generator_index(pr[1]))
    ):
        ca, cb = a.gauss.coeff(*p), b.gauss.coeff(*p)
        if ca != cb:
            gauss_diff.append((p, ca, cb))
    ea = {f.argument: f.exponent for f in a.factors}
    eb = {f.argument: f.exponent for f in b.factors}
    factor_diff = []
    for arg in sorted(set(ea) | set(eb), key=lambda fa: fa.sort_key()):
        if ea.get(arg, 0) != eb.get(arg, 0):
            factor_diff.append((arg, ea.get(arg, 0), eb.get(arg, 0)))
    return (not gauss_diff and not factor_diff), {
        "gauss": gauss_diff,
        "factors": factor_diff,
    }


@dataclass(frozen=True)
class IntegrandSpec:
    """A symbol integrated over one of its generators along a real contour."""

    symbol: Symbol
    var: str
