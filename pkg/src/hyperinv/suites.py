"""Randomized verification suites behind ``hyperinv verify``.

Each suite draws its cases from ``random.Random(seed)`` and returns a
:class:`SuiteReport` whose checks name the identity they instantiate.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .genfun import (
    egf_S,
    egf_S_direct,
    ogf_S_from_T,
    ogf_T_from_S,
    psi_nu,
    sigma_closed,
    sigma_series,
    theta_newton,
    theta_residual,
)
from .hyperfun import d_closed, d_sum_direct
from .invpair import (
    Params,
    SequenceSpec,
    TriMatrix,
    apply,
    build_A,
    build_B,
    criterion_check,
    identity_defect,
    mat_mul,
    pair_sequences,
)
from .numfield import DOUBLE, EXACT, FieldMode, scalar_to_json

__all__ = [
    "DEFAULT_SEED",
    "SUITES",
    "Check",
    "SuiteReport",
    "random_rational",
    "random_params",
    "perturb_sequence",
    "predicted_cells",
    "run_suite",
]

DEFAULT_SEED = 20240607

IDENTITY_NAMES = {
    "pair": "A(x,nu;alpha,beta,gamma) B(x,nu;alpha,beta,gamma) = Id and B A = Id",
    "criterion": "[x^(n-k)] f_n(-x) g_k(x) = delta(n,k) for independent sequences",
    "lemma1": "closed form of sum_r (-1)^r / (Gamma(1+r-lambda) Gamma(1-r+mu))",
    "theta": "1 - Theta + w Theta^(1-nu) = 0 and Sigma = (Theta-1)/(nu Theta + 1 - nu)",
    "ogf": "G_S(z) = P(z) (-Xi/z)^beta (1-z)^(beta-gamma) G_T(Xi(z)) and its inverse, alpha = gamma",
    "egf": "EGF of S = B T as exp(z) times a Kummer-function combination, alpha = 0",
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "identity": IDENTITY_NAMES[self.suite],
            "seed": self.seed,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.passed for c in self.checks),
            "checks": [c.to_json() for c in self.checks],
        }


def random_rational(rng: random.Random, lo: int = -3, hi: int = 3, max_den: int = 7) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_params(rng: random.Random, n_max: int, alpha_equals_gamma: bool = False, alpha_zero: bool = False) -> Params:
    """Random rational parameters with ``gamma`` and ``beta`` off ``{-1, ..., -n_max}``."""
    x = random_rational(rng, -2, 2)
    nu = random_rational(rng)
    while True:
        beta = random_rational(rng)
        gamma = random_rational(rng)
        if not any(beta + k == 0 or gamma + k == 0 for k in range(1, n_max + 1)):
            break
    alpha = gamma if alpha_equals_gamma else (0 if alpha_zero else random_rational(rng))
    return Params(x, nu, alpha, beta, gamma)


def _in_mode(p: Params, mode: FieldMode) -> Params:
    if mode.is_exact:
        return p
    return Params(*(mode.convert(getattr(p, k)) for k in ("x", "nu", "alpha", "beta", "gamma")), mode=mode)


def _json_params(p: Params) -> dict:
    return p.as_dict()


def _mismatch_cells(C: TriMatrix, tol: float | None) -> list[list[int]]:
    bad = []
    for n, row in enumerate(C.rows, start=1):
        for k, v in enumerate(row, start=1):
            want = 1 if n == k else 0
            if (v != want) if tol is None else (abs(v - want) >= tol):
                bad.append([n, k])
    return bad


def _suite_pair(rng, trials, n_max, mode, tol, perturb, **_) -> list[Check]:
    checks = []
    for t in range(trials):
        p = _in_mode(random_params(rng, n_max), mode)
        A, B = build_A(p, n_max), build_B(p, n_max)
        if perturb:
            rows = [list(r) for r in B.rows]
            rows[-1][0] = rows[-1][0] + 1
            B = TriMatrix(rows, B.mode)
        use_tol = None if mode.is_exact else tol
        for label, C in (("A*B", mat_mul(A, B)), ("B*A", mat_mul(B, A))):
            bad = _mismatch_cells(C, use_tol)
            detail = {"params": _json_params(p), "n_max": n_max, "failing_cells": bad}
            if not mode.is_exact:
                detail["defect"] = identity_defect(C)
            checks.append(Check(f"trial {t}: {label} = Id", not bad, detail))
    return checks


def perturb_sequence(spec: SequenceSpec, m: int, index: int, delta) -> SequenceSpec:
    """Copy of ``spec`` with ``c_m`` shifted by ``delta`` at row (or column) ``index``."""
    base = spec.generator
    pos = 1 if spec.depends_on == "n" else 2

    def gen(mm, n, k):
        v = base(mm, n, k)
        return v + delta if mm == m and (n, k)[pos - 1] == index else v

    return SequenceSpec(gen, spec.depends_on)


def predicted_cells(a: SequenceSpec, b: SequenceSpec, m: int, index: int, n_max: int, which: str = "a") -> list:
    """Cells of the criterion changed by perturbing ``c_m`` of sequence ``which`` at ``index``.

    The change at ``(n, k)`` is ``delta`` times ``(-1)^m / m!`` (for ``a``) times the
    partner coefficient ``[d - m]`` divided by ``(d - m)!``, so only the cells
    where that partner coefficient is nonzero move.
    """
    out = []
    spec, partner = (a, b) if which == "a" else (b, a)
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            hit = (n if spec.depends_on == "n" else k) == index
            if hit and n - k >= m and partner(n - k - m, n, k) != 0:
                out.append((n, k))
    return out


def _suite_criterion(rng, trials, n_max, mode, tol, perturb, **_) -> list[Check]:
    checks = []
    for t in range(trials):
        p = _in_mode(random_params(rng, n_max), mode)
        a, b = pair_sequences(p)
        expected: list = []
        if perturb:
            m, index = 1, n_max
            a = perturb_sequence(a, m, index, 1)
            expected = predicted_cells(a, b, m, index, n_max)
        rep = criterion_check(a, b, n_max, mode, tol)
        failures = rep.failures
        checks.append(
            Check(
                f"trial {t}: criterion holds for 1 <= k <= n <= {n_max}",
                rep.passed,
                {"params": _json_params(p), "failing_cells": [list(c) for c in failures]},
            )
        )
        if perturb:
            checks.append(
                Check(
                    f"trial {t}: perturbation flips exactly the predicted cells",
                    sorted(failures) == sorted(expected),
                    {"predicted": [list(c) for c in expected]},
                )
            )
    return checks


def _d_sum_cases(rng, trials, n_max):
    for _ in range(trials):
        N = rng.randint(1, n_max)
        lam = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
        kind = rng.random()
        if kind < 0.5:
            mu = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
        else:
            gap = 10 ** rng.uniform(-12, -1)
            mu = lam + gap * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            if kind > 0.9:
                mu = lam
        yield N, lam, mu


def _suite_d_closed(rng, trials, n_max, mode, tol, **_) -> list[Check]:
    checks = []
    fmode = DOUBLE if mode.is_exact else mode
    for t, (N, lam, mu) in enumerate(_d_sum_cases(rng, trials, n_max)):
        lam, mu = fmode.convert(lam), fmode.convert(mu)
        direct = d_sum_direct(N, lam, mu)
        closed = d_closed(N, lam, mu)
        err = float(abs(closed - direct)) / max(float(abs(direct)), 1.0)
        checks.append(
            Check(
                f"case {t}: closed form vs direct sum",
                err < tol,
                {"N": N, "lambda": scalar_to_json(lam), "mu": scalar_to_json(mu), "rel_err": err},
            )
        )
    return checks


_THETA_NUS = (-2.0, -1.0, -0.5, 0.3, 0.5, 0.7, 1.5, 2.0)
# |w| <= 0.85 R and 250 terms leave a truncation error near 0.85^250.
_THETA_REACH = 0.85
_THETA_ORDER = 250


def _suite_theta(rng, trials, tol, **_) -> list[Check]:
    checks = []
    cache: dict = {}
    for t in range(trials):
        nu = rng.choice(_THETA_NUS)
        if nu not in cache:
            cache[nu] = (psi_nu(nu).radius, sigma_series(nu, _THETA_ORDER, DOUBLE))
        R, series = cache[nu]
        w = _THETA_REACH * R * rng.random() ** 0.5 * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        theta = theta_newton(nu, w)
        res = theta_residual(nu, w, theta)
        checks.append(Check(f"point {t}: Newton residual", res < 1e-13, {"nu": nu, "w": scalar_to_json(w), "residual": res}))
        gap = abs(series(w) - sigma_closed(nu, w))
        checks.append(Check(f"point {t}: series vs closed Sigma", gap < tol, {"nu": nu, "w": scalar_to_json(w), "gap": gap}))
    return checks


def _random_sequence(rng, length):
    return [random_rational(rng, -5, 5, 4) for _ in range(length)]


def _suite_ogf(rng, trials, order, **_) -> list[Check]:
    checks = []
    for t in range(trials):
        p = random_params(rng, order, alpha_equals_gamma=True)
        T = _random_sequence(rng, order)
        S = apply(build_B(p, order), T)
        got_S = list(ogf_S_from_T(T, p.x, p.nu, p.beta, p.gamma, order).coeffs[1:])
        got_T = list(ogf_T_from_S(S, p.x, p.nu, p.beta, p.gamma, order).coeffs[1:])
        bad_S = [n for n, (u, v) in enumerate(zip(got_S, S), start=1) if u != v]
        bad_T = [n for n, (u, v) in enumerate(zip(got_T, T), start=1) if u != v]
        checks.append(Check(f"draw {t}: OGF of S from OGF of T", not bad_S, {"params": _json_params(p), "failing_n": bad_S}))
        checks.append(Check(f"draw {t}: OGF of T from OGF of S", not bad_T, {"params": _json_params(p), "failing_n": bad_T}))
    return checks


def _suite_egf(rng, trials, tol, **_) -> list[Check]:
    checks = []
    for t in range(trials):
        p = random_params(rng, 8, alpha_zero=True)
        T = _random_sequence(rng, rng.randint(1, 6))
        for z in (0.1, 0.5, 1.0):
            closed = egf_S([float(v) for v in T], float(p.x), float(p.nu), float(p.beta), float(p.gamma), z)
            direct = egf_S_direct(T, p.x, p.nu, p.beta, p.gamma, z)
            err = abs(closed - direct) / max(abs(direct), 1.0)
            checks.append(Check(f"draw {t}, z = {z}: Kummer form vs direct EGF", err < tol, {"params": _json_params(p), "rel_err": err}))
    return checks


SUITES = {
    "pair": _suite_pair,
    "criterion": _suite_criterion,
    "lemma1": _suite_d_closed,
    "theta": _suite_theta,
    "ogf": _suite_ogf,
    "egf": _suite_egf,
}

DEFAULT_TRIALS = {"pair": 10, "criterion": 5, "lemma1": 500, "theta": 200, "ogf": 10, "egf": 10}


def run_suite(
    suite: str,
    seed: int = DEFAULT_SEED,
    trials: int | None = None,
    n_max: int = 12,
    order: int = 15,
    mode: FieldMode = EXACT,
    tol: float = 1e-10,
    perturb: bool = False,
) -> SuiteReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    rng = random.Random(seed)
    trials = DEFAULT_TRIALS[suite] if trials is None else trials
    checks = SUITES[suite](rng=rng, trials=trials, n_max=n_max, order=order, mode=mode, tol=tol, perturb=perturb)
    return SuiteReport(suite, seed, checks)
