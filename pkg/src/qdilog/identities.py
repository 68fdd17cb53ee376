"""Closed-form integral identities checked through the contour engine.

Both identities live on a contour along the real axis that passes above
every descending pole fan and below every ascending one; the engine plans
that contour from the integrand symbol, so each check is LHS-from-engine
against RHS-from-direct-evaluation, two genuinely different code paths.

Variable conventions: the beta-weighted identity is stated in a variable
that enters every dilogarithm argument as b*tau, so the engine integrates
directly in v = b*tau; the identity's measure is the measure of that same
variable, and the engine value is the quoted value with no extra factor.
The six-to-nine identity is stated in a bare tau, same story.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contour import IntegrationResult, integrate_contour
from .core import EvalConfig, as_modulus, gb_eval_many
from .symbolic import GaussRat, IntegrandSpec, Symbol, gauss_from_products, gen

__all__ = [
    "IdentityCheck",
    "tau_binomial_integrand",
    "tau_binomial_check",
    "six_nine_integrand",
    "six_nine_check",
]

_I = GaussRat.of(1j)
_MINUS_I = GaussRat.of(-1j)


@dataclass(frozen=True)
class IdentityCheck:
    """Engine value vs closed form plus the error budget that produced it."""

    lhs: complex
    rhs: complex
    rel_err: float
    err_estimate: float
    result: IntegrationResult

    @property
    def scale(self) -> float:
        return max(abs(self.lhs), abs(self.rhs))


def _relative(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


def tau_binomial_integrand() -> IntegrandSpec:
    """exp(-2 pi b beta tau) G_b(alpha + i b tau) / G_b(Q + i b tau) over btau."""
    tau = gen("btau")
    gauss = gauss_from_products([(gen("beta"), tau, GaussRat.of(-2))])
    sym = (
        Symbol.from_gauss(gauss)
        * Symbol.gb(gen("alpha") + tau.scale(_I))
        * Symbol.gb(gen("Q") + tau.scale(_I), -1)
    )
    return IntegrandSpec(sym, "btau")


def tau_binomial_check(
    alpha: complex,
    beta: complex,
    b,
    cfg: EvalConfig | None = None,
    rel_tol: float | None = None,
) -> IdentityCheck:
    """Beta-integral check: engine value against G(alpha)G(beta)/G(alpha+beta).

    Absolute convergence needs Re beta > 0 and Re(alpha + beta) < Re Q;
    outside that wedge the engine refuses the contour rather than guessing.
    """
    m = as_modulus(b)
    bindings = {"Q": m.Q, "alpha": complex(alpha), "beta": complex(beta)}
    res = integrate_contour(
        tau_binomial_integrand(), bindings, m, cfg=cfg, rel_tol=rel_tol
    )
    lhs = res.value
    ga, gb_, gab = gb_eval_many(
        np.array([alpha, beta, alpha + beta], dtype=complex), m, cfg
    )
    rhs = ga * gb_ / gab
    return IdentityCheck(lhs, rhs, _relative(lhs, rhs), res.err_estimate, res)


def six_nine_integrand() -> IntegrandSpec:
    """exp(2 pi i tau^2 - 2 pi D tau) times five G factors over one, in bare tau."""
    tau = gen("tau")
    a, bb, c, d = gen("A"), gen("B"), gen("C"), gen("D")
    gauss = gauss_from_products(
        [(tau, tau, GaussRat.of(2j)), (d, tau, GaussRat.of(-2))]
    )
    sym = (
        Symbol.from_gauss(gauss)
        * Symbol.gb(a + tau.scale(_I))
        * Symbol.gb(bb + tau.scale(_I))
        * Symbol.gb(c + tau.scale(_I))
        * Symbol.gb(d + tau.scale(_MINUS_I))
        * Symbol.gb(tau.scale(_MINUS_I))
        * Symbol.gb(a + bb + c + d + tau.scale(_I), -1)
    )
    return IntegrandSpec(sym, "tau")


def six_nine_check(
    a: complex,
    b_arg: complex,
    c: complex,
    d: complex,
    b,
    cfg: EvalConfig | None = None,
    rel_tol: float | None = None,
) -> IdentityCheck:
    """Six-over-three product of G values against the engine integral."""
    m = as_modulus(b)
    bindings = {
        "Q": m.Q,
        "A": complex(a),
        "B": complex(b_arg),
        "C": complex(c),
        "D": complex(d),
    }
    res = integrate_contour(six_nine_integrand(), bindings, m, cfg=cfg, rel_tol=rel_tol)
    lhs = res.value
    args = np.array(
        [a, b_arg, c, a + d, b_arg + d, c + d, a + b_arg + d, a + c + d, b_arg + c + d],
        dtype=complex,
    )
    g = gb_eval_many(args, m, cfg)
    rhs = (g[0] * g[1] * g[2] * g[3] * g[4] * g[5]) / (g[6] * g[7] * g[8])
    return IdentityCheck(lhs, rhs, _relative(lhs, rhs), res.err_estimate, res)
