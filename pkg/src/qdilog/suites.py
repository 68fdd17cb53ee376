"""Verification suites: grids of identity checks producing SuiteReports.

Each suite compares two independent routes to the same quantity (defining
integral vs product formula, contour integral vs closed form, composed
operator vs integral expansion, ...) and never reuses one side to compute
the other.  Numeric suites carry a relative tolerance; the exact suite has
none.  The consistency suite re-runs representative quadrature cases under
contour deformation and truncation doubling, requiring agreement within
the reported error estimates.

Cases run on a thread pool (capped by QDILOG_THREADS) and are assembled in
case-index order, so reports are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from fractions import Fraction

import numpy as np

from .contour import ContourSpec, integrate_contour
from .core import (
    EvalConfig,
    as_modulus,
    func_eq_general,
    gb_eval,
    gb_eval_many,
    gb_product_oracle,
    pole_limit,
    reduction_correction,
    strip_reduce,
    zero_limit,
)
from .errors import UnsupportedParameterError
from .identities import (
    six_nine_check,
    six_nine_integrand,
    tau_binomial_check,
    tau_binomial_integrand,
)
from .operators import (
    kac_substitution_tuple,
    kac_values,
    make_rep_params,
    qbinomial_value,
    rep_bindings,
    kac_rhs_integral,
    qbinomial_integral,
    verify_EE,
    verify_FF,
    verify_KE,
    verify_KF,
    verify_KK,
    verify_weyl,
)
from .reports import CaseResult, SuiteReport

__all__ = [
    "run_reflection",
    "run_funceq",
    "run_product_oracle",
    "run_pole_limits",
    "run_tau_binomial",
    "run_six_nine",
    "run_theorem31_exact",
    "run_q_binomial",
    "run_kac",
    "run_consistency",
    "SUITES",
    "run_suite",
]

DEFAULT_B = 0.8
DEFAULT_ALPHA = 0.5
DEFAULT_SEED = 20260817


def _thread_count(requested: int | None, n_cases: int) -> int:
    cap = os.environ.get("QDILOG_THREADS")
    if requested is None:
        requested = min(8, os.cpu_count() or 1)
    if cap is not None:
        requested = min(requested, max(1, int(cap)))
    return max(1, min(requested, n_cases))


def _run_cases(builders, threads: int | None):
    """Run case closures, in order; exceptions become failed cases."""
    results = []

    def guard(item):
        index, label, fn = item
        try:
            return fn()
        except Exception as exc:  # honest failure, not a crash
            return CaseResult(
                index=index,
                label=label,
                passed=False,
                flags=("error",),
                detail=f"{type(exc).__name__}: {exc}",
            )

    n = _thread_count(threads, len(builders))
    if n <= 1 or len(builders) <= 1:
        results = [guard(it) for it in builders]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(guard, builders))
    return sorted(results, key=lambda c: c.index)


def _rel_dev(a: complex, c: complex) -> float:
    return abs(a - c) / max(abs(a), abs(c), 1e-300)


def _contour_meta(res) -> dict:
    return {
        "baseline": res.contour.baseline,
        "n_indentations": len(res.contour.indentations),
        "truncation": [res.truncation[0], res.truncation[1]],
        "n_panels": res.n_panels,
        "n_evals": res.n_evals,
    }


def _numeric_case(index, label, inputs, lhs, rhs, tol, err=None, res=None):
    dev = float(_rel_dev(lhs, rhs))
    return CaseResult(
        index=index,
        label=label,
        passed=dev <= tol,
        lhs=complex(lhs),
        rhs=complex(rhs),
        deviation=dev,
        tol=float(tol),
        err_estimate=None if err is None else float(err),
        inputs=inputs,
        contour=_contour_meta(res) if res is not None else None,
    )


# ---------------------------------------------------------------------------
# Core-function suites


def run_reflection(
    b=DEFAULT_B,
    alpha=None,
    tol: float = 1e-9,
    cfg: EvalConfig | None = None,
    n: int = 10,
    seed=None,
    threads=None,
) -> SuiteReport:
    """G(z) G(Q-z) against exp(pi i z (z - Q)) on an n x n strip grid."""
    t0 = time.perf_counter()
    m = as_modulus(b)
    req = m.Q.real
    xs = [req * (i + 0.5) / n for i in range(n)]
    ys = [-0.9 + 1.8 * j / max(n - 1, 1) for j in range(n)]
    zs = np.array([x + 1j * y for x in xs for y in ys])
    vals = gb_eval_many(np.concatenate([zs, m.Q - zs]), m, cfg)
    g_z, g_qz = vals[: len(zs)], vals[len(zs):]
    cases = []
    for k, z in enumerate(zs):
        lhs = g_z[k] * g_qz[k]
        rhs = np.exp(1j * math.pi * z * (z - m.Q))
        cases.append(
            _numeric_case(
                k, f"z={z:.6g}", {"z": complex(z)}, lhs, rhs, tol
            )
        )
    return SuiteReport(
        suite="reflection",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        config={"n": n},
        elapsed_seconds=time.perf_counter() - t0,
    )


def run_funceq(
    b=DEFAULT_B,
    alpha=None,
    tol: float = 1e-9,
    cfg: EvalConfig | None = None,
    seed=None,
    threads=None,
    max_order: int = 2,
) -> SuiteReport:
    """Shift equation in both periods: G(z + n1 b + n2/b) vs factor * G(z)."""
    t0 = time.perf_counter()
    m = as_modulus(b)
    req = m.Q.real
    z0s = [
        0.23 * req + 0.27j,
        0.47 * req - 0.41j,
        0.62 * req + 0.55j,
        0.86 * req - 0.18j,
    ]
    orders = [(n1, n2) for n1 in range(max_order + 1) for n2 in range(max_order + 1)]
    base = np.array(z0s)
    shifted = np.array(
        [z + n1 * m.b + n2 * m.b_inv for z in z0s for n1, n2 in orders]
    )
    vals = gb_eval_many(np.concatenate([base, shifted]), m, cfg)
    g0 = vals[: len(base)]
    gs = vals[len(base):]
    cases = []
    k = 0
    for iz, z in enumerate(z0s):
        for n1, n2 in orders:
            lhs = gs[k]
            rhs = func_eq_general(z, n1, n2, m) * g0[iz]
            cases.append(
                _numeric_case(
                    k,
                    f"z={z:.4g} shift=({n1},{n2})",
                    {"z": z, "n1": n1, "n2": n2},
                    lhs,
                    rhs,
                    tol,
                )
            )
            k += 1
    return SuiteReport(
        suite="funceq",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        config={"max_order": max_order, "n_points": len(z0s)},
        elapsed_seconds=time.perf_counter() - t0,
    )


def run_product_oracle(
    b=0.6 + 0.1j,
    alpha=None,
    tol: float = 1e-8,
    cfg: EvalConfig | None = None,
    n: int = 20,
    seed=None,
    threads=None,
) -> SuiteReport:
    """Defining-integral route against the double infinite product."""
    t0 = time.perf_counter()
    m = as_modulus(b)
    if (m.b * m.b).imag <= 0:
        raise UnsupportedParameterError(
            f"product representation needs Im(b^2) > 0; b = {m.b} has "
            f"Im(b^2) = {(m.b * m.b).imag:g}"
        )
    req = m.Q.real
    xs = np.array([req * (k + 0.5) / n for k in range(n)])
    lhs_vals = gb_eval_many(xs, m, cfg)
    cases = []
    for k, x in enumerate(xs):
        rhs = gb_product_oracle(complex(x), m)
        cases.append(
            _numeric_case(
                k, f"x={x:.6g}", {"x": complex(x)}, lhs_vals[k], rhs, tol
            )
        )
    return SuiteReport(
        suite="product-oracle",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        config={"n": n},
        elapsed_seconds=time.perf_counter() - t0,
    )


def run_pole_limits(
    b=DEFAULT_B,
    alpha=None,
    tol: float = 1e-5,
    cfg: EvalConfig | None = None,
    seed=None,
    threads=None,
) -> SuiteReport:
    """Richardson-extrapolated x*G(x - lattice) and x/G(x + Q + lattice).

    Two probe sizes a decade apart kill the linear error term; the
    extrapolated limit must match the closed-form residue products.
    """
    t0 = time.perf_counter()
    m = as_modulus(b)
    probes = (1e-3, 1e-4)
    cases = []
    idx = 0
    for n1, n2 in ((0, 0), (1, 0), (0, 1)):
        shift = -n1 * m.b - n2 * m.b_inv
        f = [x * gb_eval(x + shift, m, cfg) for x in probes]
        extrap = (10.0 * f[1] - f[0]) / 9.0
        target = pole_limit(n1, n2, m)
        cases.append(
            _numeric_case(
                idx,
                f"pole ({n1},{n2})",
                {"n1": n1, "n2": n2, "probes": list(probes)},
                extrap,
                target,
                tol,
            )
        )
        idx += 1
    for n1, n2 in ((0, 0), (1, 0), (0, 1)):
        shift = m.Q + n1 * m.b + n2 * m.b_inv
        f = [x / gb_eval(x + shift, m, cfg) for x in probes]
        extrap = (10.0 * f[1] - f[0]) / 9.0
        target = zero_limit(n1, n2, m)
        cases.append(
            _numeric_case(
                idx,
                f"zero ({n1},{n2})",
                {"n1": n1, "n2": n2, "probes": list(probes)},
                extrap,
                target,
                tol,
            )
        )
        idx += 1
    return SuiteReport(
        suite="pole-limits",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        config={"probes": list(probes)},
        elapsed_seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Contour-identity suites


def run_tau_binomial(
    b=DEFAULT_B,
    alpha=None,
    tol: float = 1e-6,
    cfg: EvalConfig | None = None,
    rel_tol: float = 1e-8,
    n: int = 5,
    seed=None,
    threads=None,
) -> SuiteReport:
    """Beta-integral identity on an n x n (alpha, beta) grid.

    Grid points Q*k/12 for k = 1..n keep every pair inside the absolute
    convergence wedge Re(alpha + beta) < Re Q when n <= 5.
    """
    t0 = time.perf_counter()
    m = as_modulus(b)
    grid = [m.Q * k / 12 for k in range(1, n + 1)]
    builders = []
    idx = 0
    for a in grid:
        for be in grid:
            def job(a=a, be=be, idx=idx):
                chk = tau_binomial_check(a, be, m, cfg=cfg, rel_tol=rel_tol)
                return _numeric_case(
                    idx,
                    f"alpha={a:.4g} beta={be:.4g}",
                    {"alpha": a, "beta": be},
                    chk.lhs,
                    chk.rhs,
                    tol,
                    err=chk.err_estimate,
                    res=chk.result,
                )

            builders.append((idx, f"alpha={a:.4g} beta={be:.4g}", job))
            idx += 1
    cases = _run_cases(builders, threads)
    return SuiteReport(
        suite="tau-binomial",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        config={"n": n, "rel_tol": rel_tol},
        elapsed_seconds=time.perf_counter() - t0,
    )


def _six_nine_tuples(m, rng, n_random: int):
    req = m.Q.real
    tuples = []
    for _ in range(n_random):
        re3 = rng.uniform(0.12, 0.20, size=3) * req
        im3 = rng.uniform(-0.05, 0.05, size=3)
        red = rng.uniform(0.10, 0.18) * req
        imd = rng.uniform(-0.05, 0.05)
        tuples.append(
            (
                re3[0] + 1j * im3[0],
                re3[1] + 1j * im3[1],
                re3[2] + 1j * im3[2],
                red + 1j * imd,
            )
        )
    return tuples


def run_six_nine(
    b=DEFAULT_B,
    alpha=DEFAULT_ALPHA,
    tol: float = 1e-5,
    cfg: EvalConfig | None = None,
    rel_tol: float = 1e-7,
    seed: int = DEFAULT_SEED,
    n_random: int = 10,
    threads=None,
    include_kac_tuple: bool = True,
) -> SuiteReport:
    """Six-over-three G ratio vs the contour integral, random + named tuples."""
    t0 = time.perf_counter()
    m = as_modulus(b)
    rng = np.random.default_rng(seed)
    entries = [
        ("random", t) for t in _six_nine_tuples(m, rng, n_random)
    ]
    entries.append(("named-1", (m.Q / 6, m.Q / 7, m.Q / 9, m.Q / 4 + 0.1j)))
    entries.append(("named-2", (m.Q / 8, m.Q / 8, m.Q / 8, m.Q / 3)))
    if include_kac_tuple:
        params = make_rep_params(m.b, alpha=alpha)
        entries.append(
            (
                "kac-substitution",
                kac_substitution_tuple(params, params.u_samples[0]),
            )
        )
    builders = []
    for idx, (kind, tup) in enumerate(entries):
        def job(tup=tup, kind=kind, idx=idx):
            a, b_arg, c, d = tup
            chk = six_nine_check(a, b_arg, c, d, m, cfg=cfg, rel_tol=rel_tol)
            return _numeric_case(
                idx,
                f"{kind} A={a:.3g} B={b_arg:.3g} C={c:.3g} D={d:.3g}",
                {"A": a, "B": b_arg, "C": c, "D": d, "kind": kind},
                chk.lhs,
                chk.rhs,
                tol,
                err=chk.err_estimate,
                res=chk.result,
            )

        builders.append((idx, kind, job))
    cases = _run_cases(builders, threads)
    return SuiteReport(
        suite="six-nine",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        seed=seed,
        config={"n_random": n_random, "rel_tol": rel_tol},
        elapsed_seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Operator suites


def run_theorem31_exact(
    b=DEFAULT_B,
    alpha=None,
    tol=None,
    cfg=None,
    seed: int = DEFAULT_SEED,
    n: int = 10,
    threads=None,
) -> SuiteReport:
    """Exact normal-form checks of the five commutation laws.

    Case 0 runs on pure formal generators (the strongest statement); the
    seeded cases re-run the same exact arithmetic at rational parameter
    tuples.  There is no tolerance anywhere.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    cases = []

    def one_case(idx, label, args):
        checks = {
            "KK": verify_KK(args.get("p1"), args.get("p2")),
            "KE": verify_KE(args.get("p"), args.get("s")),
            "KF": verify_KF(args.get("p"), args.get("t")),
            "EE": verify_EE(args.get("s1"), args.get("s2")),
            "FF": verify_FF(args.get("t1"), args.get("t2")),
            "weyl": verify_weyl(args.get("s1"), args.get("s2")),
        }
        ok = all(checks.values())
        return CaseResult(
            index=idx,
            label=label,
            passed=ok,
            mode="exact",
            inputs={k: str(v) for k, v in args.items()},
            detail=", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items()),
        )

    cases.append(one_case(0, "formal generators", {}))
    for i in range(1, n + 1):
        draw = {
            name: Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 5)) * 8)
            for name in ("p1", "p2", "p", "s", "t", "s1", "s2", "t1", "t2")
        }
        label = "rational tuple " + ", ".join(
            f"{k}={v}" for k, v in sorted(draw.items())
        )
        cases.append(one_case(i, label, draw))
    return SuiteReport(
        suite="theorem31-exact",
        b=complex(b),
        alpha=alpha,
        tol=None,
        cases=cases,
        seed=seed,
        config={"n": n},
        elapsed_seconds=time.perf_counter() - t0,
    )


def run_q_binomial(
    b=DEFAULT_B,
    alpha=DEFAULT_ALPHA,
    tol: float = 1e-6,
    cfg: EvalConfig | None = None,
    rel_tol: float = 1e-8,
    seed=None,
    threads=None,
) -> SuiteReport:
    """Binomial expansion of (U1+V1)^{is} against the divided-power symbol."""
    t0 = time.perf_counter()
    m = as_modulus(b)
    tuples = [
        (0.4, alpha, 0.1),
        (0.4, alpha, -0.2),
        (0.25, 0.35, 0.15),
        (0.55, alpha, -0.1),
    ]
    builders = []
    for idx, (s, al, u) in enumerate(tuples):
        def job(s=s, al=al, u=u, idx=idx):
            params = make_rep_params(m.b, alpha=al, s=s, u_samples=(u,))
            lhs, rhs, res = qbinomial_value(
                params, u, cfg=cfg, rel_tol=rel_tol
            )
            return _numeric_case(
                idx,
                f"s={s} alpha={al} u={u}",
                {"s": s, "alpha": al, "u": u},
                lhs,
                rhs,
                tol,
                err=res.err_estimate,
                res=res,
            )

        builders.append((idx, f"s={s} u={u}", job))
    cases = _run_cases(builders, threads)
    return SuiteReport(
        suite="q-binomial",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        config={"rel_tol": rel_tol, "n": len(tuples)},
        elapsed_seconds=time.perf_counter() - t0,
    )


_KAC_TUPLES = {
    0.8: [
        (0.3, 0.2, 0.5, 0.1),
        (0.3, 0.2, 0.5, -0.23),
        (0.45, 0.15, 0.5, 0.1),
        (0.25, 0.35, 0.4, 0.12),
        (0.5, 0.3, 0.65, -0.18),
        (0.2, 0.45, 0.55, 0.14),
        (0.35, 0.3, 0.45, 0.21),
        (0.4, 0.2, 0.6, -0.12),
    ],
    0.6: [
        (0.3, 0.2, 0.5, 0.15),
        (0.4, 0.25, 0.45, -0.2),
        (0.5, 0.35, 0.6, 0.12),
        (0.25, 0.5, 0.55, -0.1),
    ],
}


def run_kac(
    b=DEFAULT_B,
    alpha=None,
    tol: float = 1e-5,
    cfg: EvalConfig | None = None,
    rel_tol: float = 1e-7,
    seed=None,
    threads=None,
    tuples=None,
) -> SuiteReport:
    """Composed E o F against its contour-integral expansion.

    Tuples are (s, t, alpha, u); an explicit alpha argument overrides the
    per-tuple weight.
    """
    t0 = time.perf_counter()
    m = as_modulus(b)
    if tuples is None:
        key = round(float(np.real(b)), 6)
        tuples = _KAC_TUPLES.get(key, _KAC_TUPLES[0.8][:4])
    builders = []
    for idx, (s, t, al, u) in enumerate(tuples):
        if alpha is not None:
            al = alpha
        def job(s=s, t=t, al=al, u=u, idx=idx):
            params = make_rep_params(m.b, alpha=al, s=s, t=t, u_samples=(u,))
            lhs, rhs, res = kac_values(params, u, cfg=cfg, rel_tol=rel_tol)
            return _numeric_case(
                idx,
                f"s={s} t={t} alpha={al} u={u}",
                {"s": s, "t": t, "alpha": al, "u": u},
                lhs,
                rhs,
                tol,
                err=res.err_estimate,
                res=res,
            )

        builders.append((idx, f"s={s} t={t} u={u}", job))
    cases = _run_cases(builders, threads)
    return SuiteReport(
        suite="kac",
        b=complex(m.b),
        alpha=alpha,
        tol=tol,
        cases=cases,
        config={"rel_tol": rel_tol, "n": len(tuples)},
        elapsed_seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Consistency suite (contour independence, truncation doubling)


def _deformed(contour: ContourSpec) -> ContourSpec:
    """A different admissible contour for the same integrand."""
    if contour.indentations:
        scale = 1.35
        centers = sorted(i.center for i in contour.indentations)
        if len(centers) >= 2:
            min_gap = min(b - a for a, b in zip(centers, centers[1:]))
            cap = 0.45 * min_gap
        else:
            cap = math.inf
        new = tuple(
            replace(i, radius=min(i.radius * scale, cap))
            for i in contour.indentations
        )
        return replace(contour, indentations=new)
    room = contour.gap_hi - contour.baseline
    shift = 0.35 if math.isinf(room) else 0.35 * room
    return replace(contour, baseline=contour.baseline + shift)


def _consistency_pair(idx, label, spec, bindings, m, cfg, rel_tol):
    res0 = integrate_contour(spec, bindings, m, cfg=cfg, rel_tol=rel_tol)
    out = []
    alt = _deformed(res0.contour)
    res1 = integrate_contour(spec, bindings, m, contour=alt, cfg=cfg, rel_tol=rel_tol)
    scale = max(abs(res0.value), abs(res1.value), 1e-300)
    dev = abs(res0.value - res1.value)
    bound = res0.err_estimate + res1.err_estimate + 1e-14 * scale
    out.append(
        CaseResult(
            index=idx,
            label=f"{label} contour-deformed",
            passed=dev <= bound,
            lhs=res0.value,
            rhs=res1.value,
            deviation=dev / scale,
            tol=bound / scale,
            err_estimate=bound,
            inputs={"deformation": "shift" if not res0.contour.indentations else "radius"},
            contour=_contour_meta(res1),
        )
    )
    t_max = max(res0.truncation)
    fixed = replace(res0.contour, truncation=2.0 * t_max)
    res2 = integrate_contour(spec, bindings, m, contour=fixed, cfg=cfg, rel_tol=rel_tol)
    dev2 = abs(res0.value - res2.value)
    bound2 = res0.err_estimate + res2.err_estimate + 1e-14 * scale
    out.append(
        CaseResult(
            index=idx + 1,
            label=f"{label} truncation-doubled",
            passed=dev2 <= bound2,
            lhs=res0.value,
            rhs=res2.value,
            deviation=dev2 / scale,
            tol=bound2 / scale,
            err_estimate=bound2,
            inputs={"truncation": 2.0 * t_max},
            contour=_contour_meta(res2),
        )
    )
    return out


def run_consistency(
    b=DEFAULT_B,
    alpha=DEFAULT_ALPHA,
    tol=None,
    cfg: EvalConfig | None = None,
    seed=None,
    threads=None,
) -> SuiteReport:
    """Same quantities under different numerics must agree within estimates.

    Strip-integral checks: truncation-margin increase, extended precision,
    and reduction-order swap.  Contour checks: every quadrature identity
    family re-run on a deformed contour and a doubled truncation.
    """
    t0 = time.perf_counter()
    m = as_modulus(b)
    cfg = cfg or EvalConfig()
    cases = []

    z = 0.3 * m.Q.real + 0.2j
    v0 = gb_eval(z, m, cfg)
    v1 = gb_eval(z, m, replace(cfg, trunc_margin=cfg.trunc_margin + 1.0))
    dev = _rel_dev(v0, v1)
    cases.append(
        CaseResult(
            index=0,
            label="strip truncation-margin +1 decade",
            passed=dev <= 2 * cfg.rel_tol,
            lhs=v0,
            rhs=v1,
            deviation=dev,
            tol=2 * cfg.rel_tol,
            inputs={"z": z},
        )
    )
    v2 = gb_eval(z, m, replace(cfg, precision="extended"))
    dev = _rel_dev(v0, v2)
    cases.append(
        CaseResult(
            index=1,
            label="strip extended precision",
            passed=dev <= 2 * cfg.rel_tol,
            lhs=v0,
            rhs=v2,
            deviation=dev,
            tol=2 * cfg.rel_tol,
            inputs={"z": z},
        )
    )
    zr = 2.6 + 0.35j
    red = strip_reduce(zr, m)
    c1 = reduction_correction(red, m, order="b-first")
    c2 = reduction_correction(red, m, order="binv-first")
    dev = _rel_dev(c1, c2)
    cases.append(
        CaseResult(
            index=2,
            label="reduction order b-first vs binv-first",
            passed=dev <= 1e-12,
            lhs=c1,
            rhs=c2,
            deviation=dev,
            tol=1e-12,
            inputs={"z": zr},
        )
    )

    idx = 3
    tb = tau_binomial_integrand()
    cases.extend(
        _consistency_pair(
            idx,
            "tau-binomial",
            tb,
            {"Q": m.Q, "alpha": m.Q / 6, "beta": m.Q / 6},
            m,
            cfg,
            1e-8,
        )
    )
    idx += 2
    sn = six_nine_integrand()
    cases.extend(
        _consistency_pair(
            idx,
            "six-nine",
            sn,
            {
                "Q": m.Q,
                "A": m.Q / 6,
                "B": m.Q / 7,
                "C": m.Q / 9,
                "D": m.Q / 4 + 0.1j,
            },
            m,
            cfg,
            1e-7,
        )
    )
    idx += 2
    params = make_rep_params(m.b, alpha=alpha, s=0.4, u_samples=(0.1,))
    cases.extend(
        _consistency_pair(
            idx,
            "q-binomial",
            qbinomial_integral().spec(),
            rep_bindings(params, 0.1),
            m,
            cfg,
            1e-8,
        )
    )
    idx += 2
    params = make_rep_params(m.b, alpha=0.5, s=0.3, t=0.2, u_samples=(0.1,))
    cases.extend(
        _consistency_pair(
            idx,
            "kac",
            kac_rhs_integral().spec(),
            rep_bindings(params, 0.1),
            m,
            cfg,
            1e-7,
        )
    )
    return SuiteReport(
        suite="consistency",
        b=complex(m.b),
        alpha=alpha,
        tol=None,
        cases=cases,
        config={},
        elapsed_seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Registry


SUITES = {
    "reflection": run_reflection,
    "funceq": run_funceq,
    "product-oracle": run_product_oracle,
    "pole-limits": run_pole_limits,
    "tau-binomial": run_tau_binomial,
    "six-nine": run_six_nine,
    "theorem31-exact": run_theorem31_exact,
    "q-binomial": run_q_binomial,
    "kac": run_kac,
    "consistency": run_consistency,
}

_SMALL_GRID = {
    "reflection": {"n": 4},
    "product-oracle": {"n": 6},
    "tau-binomial": {"n": 2},
    "six-nine": {"n_random": 2},
    "theorem31-exact": {"n": 3},
    "kac": {"tuples": _KAC_TUPLES[0.8][:2]},
}


def run_suite(
    name: str,
    b=None,
    alpha=None,
    tol=None,
    seed=None,
    threads=None,
    grid: str = "default",
    cfg: EvalConfig | None = None,
) -> SuiteReport:
    """Dispatch one named suite with per-suite defaults for omitted options."""
    if name not in SUITES:
        raise KeyError(name)
    fn = SUITES[name]
    kwargs = {}
    if b is not None:
        kwargs["b"] = b
    if alpha is not None:
        kwargs["alpha"] = alpha
    if tol is not None:
        kwargs["tol"] = tol
    if seed is not None and name in ("six-nine", "theorem31-exact"):
        kwargs["seed"] = seed
    if threads is not None:
        kwargs["threads"] = threads
    if cfg is not None:
        kwargs["cfg"] = cfg
    if grid == "small":
        kwargs.update(_SMALL_GRID.get(name, {}))
    elif grid != "default":
        raise ValueError(f"unknown grid {grid!r}")
    return fn(**kwargs)
