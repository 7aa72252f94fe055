"""Generating-function transforms attached to the inverse pair.

For ``alpha == gamma`` the ordinary generating functions of ``S = B T`` and
``T = A S`` are linked through the change of variable

    Xi(z) = z/(z-1) * ((1-z) / (1-(1-x) z))^nu

and its compositional inverse ``Omega``.  ``Omega`` has a closed form through
the series ``Sigma(w) = sum_b sigma_b w^b`` and the implicit function
``Theta(w)`` solving ``1 - Theta + w Theta^(1-nu) = 0`` with ``Theta(0) = 1``.
For ``alpha == 0`` the exponential generating function of ``S`` is a finite
combination of Kummer functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BranchLost, LengthMismatch, NoConvergence, OutsideRadius, XZero
from .hyperfun import confluent_phi, gauss_poly, pochhammer
from .invpair import Params, b_entry
from .numfield import DOUBLE, EXACT, FieldMode, common_mode
from .powerseries import Series, binom_pow, compose, reciprocal, revert

__all__ = [
    "RadiusInfo",
    "psi_nu",
    "xi_series",
    "xi_value",
    "theta_series",
    "theta_coefficients",
    "theta_newton",
    "theta_residual",
    "polya_szego_series",
    "sigma_series",
    "sigma_coefficient",
    "sigma_log_abs",
    "sigma_root_test",
    "sigma_closed",
    "omega_closed",
    "omega_series",
    "omega_closed_series",
    "gauss_series",
    "u_kernel",
    "u_kernel_closed",
    "ogf_series",
    "ogf_S_from_T",
    "ogf_T_from_S",
    "egf_S",
    "egf_S_direct",
    "SAFETY",
]

# Scalar evaluations are only trusted inside SAFETY * (radius of convergence).
SAFETY = 0.95


def _mode(mode, *values) -> FieldMode:
    return mode or common_mode(*values)


def _one_minus(a, order: int, mode: FieldMode) -> Series:
    """The polynomial ``1 - a z`` as a series of the given order."""
    return Series([1, -mode.convert(a)] + [0] * (order - 1), mode)


# Radius of convergence.


@dataclass(frozen=True)
class RadiusInfo:
    nu: complex
    psi_value: complex
    radius: float
    branch: str


def _xlogx(a: complex, arg: complex) -> complex:
    """``a * log(arg)`` with ``0 * log 0 := 0``."""
    if a == 0:
        return 0j
    from cmath import log

    return a * log(arg)


def psi_nu(nu) -> RadiusInfo:
    """Exponential growth rate ``psi(nu)`` of ``sigma_b`` and the radius ``|exp(-psi)|``.

    Three cases: ``nu`` outside ``[0, inf)`` (complex or negative),
    ``0 <= nu < 1`` and ``nu >= 1``.
    """
    z = complex(nu)
    if z.imag == 0 and z.real >= 0:
        v = z.real
        if v < 1:
            branch = "0<=nu<1"
            psi = _xlogx(1 - v, 1 - v) + _xlogx(v, v)
        else:
            branch = "nu>=1"
            psi = _xlogx(1 - v, v - 1) + _xlogx(v, v)
    else:
        branch = "complex"
        psi = _xlogx(1 - z, 1 - z) + _xlogx(z, -z)
    radius = math.exp(-psi.real)
    return RadiusInfo(z, psi, radius, branch)


# The change of variable Xi and its inverse.


def _xi_over_minus_z(x, nu, order: int, mode: FieldMode) -> Series:
    """``-Xi(z)/z = (1-z)^-1 ((1-z)/(1-(1-x) z))^nu``; constant term 1."""
    ratio = _one_minus(1, order, mode) * reciprocal(_one_minus(1 - x, order, mode))
    geometric = reciprocal(_one_minus(1, order, mode))
    return geometric * binom_pow(ratio, nu)


def xi_series(x, nu, order: int, mode: FieldMode | None = None) -> Series:
    """Series of ``Xi(z)`` to ``z^order``: starts ``0 - z + ...``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    mode = _mode(mode, x, nu)
    x, nu = mode.convert(x), mode.convert(nu)
    tail = _xi_over_minus_z(x, nu, order - 1, mode)
    return Series([0] + [-c for c in tail.coeffs], mode)


def xi_value(x, nu, z, mode: FieldMode | None = None):
    """Scalar ``Xi(z)`` with the principal power."""
    mode = _mode(mode, x, nu, z)
    x, nu, z = (mode.convert(v) for v in (x, nu, z))
    return z / (z - 1) * mode.power((1 - z) / (1 - (1 - x) * z), nu)


def omega_series(x, nu, order: int, mode: FieldMode | None = None) -> Series:
    """Compositional inverse of ``Xi`` by series reversion."""
    return revert(xi_series(x, nu, order, mode))


# Theta and Sigma.


def theta_coefficients(nu, order: int, mode: FieldMode | None = None) -> Series:
    """``Theta`` from its Lagrange coefficients ``[w^b] = prod_{j<b-1} (b(1-nu) - j) / b!``."""
    mode = _mode(mode, nu)
    nu = mode.convert(nu)
    beta = 1 - nu
    out = [mode.one]
    for b in range(1, order + 1):
        c = mode.one
        for j in range(b - 1):
            c *= b * beta - j
        out.append(c / math.factorial(b))
    return Series(out, mode)


def theta_series(nu, order: int, mode: FieldMode | None = None) -> Series:
    """``Theta(w)`` with ``Theta(0) = 1`` and ``1 - Theta + w Theta^(1-nu) = 0`` by series Newton."""
    mode = _mode(mode, nu)
    nu = mode.convert(nu)
    one = Series.constant(mode.one, order, mode)
    theta = one
    if order == 0:
        return theta
    w = Series.variable(order, mode)
    steps = order.bit_length() + 2
    for _ in range(steps + 1):
        resid = one - theta + w * binom_pow(theta, 1 - nu)
        if all(c == 0 for c in resid.coeffs):
            return theta
        slope = (1 - nu) * w * binom_pow(theta, -nu) - one
        theta = theta - resid / slope
    if mode.is_exact:
        raise NoConvergence("series Newton for Theta left a nonzero residual")
    return theta


def polya_szego_series(a, nu, order: int, mode: FieldMode | None = None) -> Series:
    """``1 + sum_b C(a + b(1-nu), b) w^b``, which equals ``Theta^(a+1) / (nu Theta + 1 - nu)``."""
    mode = _mode(mode, a, nu)
    a, nu = mode.convert(a), mode.convert(nu)
    out = [mode.one]
    for b in range(1, order + 1):
        top = a + b * (1 - nu)
        c = mode.one
        for j in range(b):
            c *= top - j
        out.append(c / math.factorial(b))
    return Series(out, mode)


def sigma_coefficient(nu, b: int):
    """``sigma_b = Gamma(b(1-nu)) / (Gamma(b) Gamma(1-b nu)) = (1 - b nu)_(b-1) / (b-1)!``."""
    if b < 1:
        raise ValueError("b starts at 1")
    out = nu * 0 + 1
    for j in range(1, b):
        out = out * (j - b * nu) / j
    return out


def sigma_series(nu, order: int, mode: FieldMode | None = None) -> Series:
    """``Sigma(w) = sum_{b=1..order} sigma_b w^b`` (exact for rational ``nu``)."""
    mode = _mode(mode, nu)
    nu = mode.convert(nu)
    return Series([mode.zero] + [sigma_coefficient(nu, b) for b in range(1, order + 1)], mode)


def sigma_log_abs(nu, b: int) -> float:
    """``log |sigma_b|`` in double precision without overflow (``-inf`` when it vanishes)."""
    z = complex(nu)
    total = -math.lgamma(b)
    for j in range(1, b):
        f = abs(j - b * z)
        if f == 0:
            return -math.inf
        total += math.log(f)
    return total


def sigma_root_test(nu, b: int, window: int = 1) -> float:
    """Root-test estimate ``max |sigma_j|^(1/j)`` over ``b - window < j <= b``.

    A window wider than one follows the limsup in the root test, which matters
    when ``b nu`` hits an integer and ``sigma_b`` vanishes outright.
    """
    best = 0.0
    for j in range(max(1, b - window + 1), b + 1):
        la = sigma_log_abs(nu, j)
        if la > -math.inf:
            best = max(best, math.exp(la / j))
    return best


def _check_radius(w, radius: float, what: str):
    if abs(complex(w)) >= SAFETY * radius:
        raise OutsideRadius(f"|{what}| = {abs(complex(w)):.6g} is not below {SAFETY} * {radius:.6g}")


def theta_newton(nu, w, mode: FieldMode | None = None, steps: int = 16):
    """Scalar ``Theta(w)`` continued from ``Theta(0) = 1`` along the segment ``[0, w]``.

    Works on ``u = log Theta`` so that ``Theta^(1-nu) = exp((1-nu) u)`` stays on
    the branch reached by continuation.
    """
    mode = _mode(mode, nu, w)
    if mode.is_exact:
        mode = DOUBLE
    nu, w = mode.convert(nu), mode.convert(w)
    _check_radius(w, psi_nu(nu).radius, "w")
    u = mode.zero
    tol = 8 * mode.eps
    t, dt = 0.0, 1.0 / steps
    while t < 1.0:
        t_next = min(1.0, t + dt)
        wt = w * t_next
        trial = u
        for _ in range(50):
            eu = mode.exp(trial)
            ev = mode.exp((1 - nu) * trial)
            f = 1 - eu + wt * ev
            df = -eu + (1 - nu) * wt * ev
            step = f / df
            trial -= step
            if abs(step) <= tol * max(1.0, abs(trial)):
                break
        else:
            dt /= 2
            if dt < 1e-8:
                raise BranchLost(f"continuation to w = {w} failed")
            continue
        if abs(trial - u) > 0.5 and dt > 1e-3:
            dt /= 2
            continue
        u, t = trial, t_next
    return mode.exp(u)


def theta_residual(nu, w, theta, mode: FieldMode | None = None) -> float:
    """``|1 - Theta + w Theta^(1-nu)|`` using the branch of ``log Theta`` near 0."""
    mode = _mode(mode, nu, w, theta)
    return float(abs(1 - theta + w * mode.exp((1 - nu) * mode.log(theta))))


def sigma_closed(nu, w, mode: FieldMode | None = None):
    """``Sigma(w) = (Theta(w) - 1) / (nu Theta(w) + 1 - nu)``."""
    mode = _mode(mode, nu, w)
    if mode.is_exact:
        mode = DOUBLE
    nu, w = mode.convert(nu), mode.convert(w)
    theta = theta_newton(nu, w, mode)
    return (theta - 1) / (nu * theta + 1 - nu)


def omega_closed(x, nu, xi, mode: FieldMode | None = None):
    """``Omega(xi) = Sigma(x xi) / ((1 - x(1-nu)) Sigma(x xi) - x)``, the inverse of ``Xi``."""
    mode = _mode(mode, x, nu, xi)
    if mode.is_exact:
        mode = DOUBLE
    x, nu, xi = (mode.convert(v) for v in (x, nu, xi))
    if x == 0:
        raise XZero("Omega needs x != 0")
    _check_radius(x * xi, psi_nu(nu).radius, "x * xi")
    s = sigma_closed(nu, x * xi, mode)
    return s / ((1 - x * (1 - nu)) * s - x)


def omega_closed_series(x, nu, order: int, mode: FieldMode | None = None) -> Series:
    """Series expansion of the closed form of ``Omega``."""
    mode = _mode(mode, x, nu)
    x, nu = mode.convert(x), mode.convert(nu)
    if x == 0:
        raise XZero("Omega needs x != 0")
    s = sigma_series(nu, order, mode).scale_variable(x)
    return s / ((1 - x * (1 - nu)) * s - x)


# The kernel U and the ordinary generating functions.


def gauss_series(a, b, c, order: int, mode: FieldMode | None = None) -> Series:
    """Formal series ``sum_{m<=order} (a)_m (b)_m / ((c)_m m!) t^m``."""
    mode = _mode(mode, a, b, c)
    a, b, c = (mode.convert(v) for v in (a, b, c))
    term = mode.one
    out = [term]
    for m in range(order):
        term = term * (a + m) * (b + m) / ((c + m) * (m + 1))
        out.append(term)
    return Series(out, mode)


def u_kernel(a1, a2, a3, order: int, x, mode: FieldMode | None = None) -> Series:
    """``U(z) = sum_n (1+a1)_n / n! F(-n, a2; a3; x) z^n`` summed directly."""
    mode = _mode(mode, a1, a2, a3, x)
    a1, a2, a3, x = (mode.convert(v) for v in (a1, a2, a3, x))
    return Series(
        [pochhammer(1 + a1, n) / math.factorial(n) * gauss_poly(n, a2, a3, x) for n in range(order + 1)],
        mode,
    )


def u_kernel_closed(a1, a2, a3, order: int, x, mode: FieldMode | None = None) -> Series:
    """``(1-z)^(-1-a1) F(1+a1, a2; a3; xz/(z-1))`` with the Gauss series expanded formally."""
    mode = _mode(mode, a1, a2, a3, x)
    a1, a2, a3, x = (mode.convert(v) for v in (a1, a2, a3, x))
    arg = Series([0] + [-x] * order, mode)  # xz/(z-1) = -x (z + z^2 + ...)
    return binom_pow(_one_minus(1, order, mode), -1 - a1) * compose(gauss_series(1 + a1, a2, a3, order, mode), arg)


def ogf_series(seq: Sequence, order: int, mode: FieldMode) -> Series:
    """``sum_{n=1..order} s_n z^n`` from ``seq = [s_1, s_2, ...]``."""
    if len(seq) < order:
        raise LengthMismatch(f"need {order} terms, got {len(seq)}")
    return Series([0] + [mode.convert(v) for v in seq[:order]], mode)


def _prefactor(x, nu, order: int, mode: FieldMode) -> Series:
    """``(1-nu)/(1-z) + nu/(1-(1-x) z)``."""
    out, p = [], mode.one
    for _ in range(order + 1):
        out.append(1 - nu + nu * p)
        p *= 1 - x
    return Series(out, mode)


def ogf_S_from_T(T: Sequence, x, nu, beta, gamma, order: int, mode: FieldMode | None = None) -> Series:
    """OGF of ``S = B(x, nu; gamma, beta, gamma) T``:

    ``G_S(z) = P(z) (-Xi(z)/z)^beta (1-z)^(beta-gamma) G_T(Xi(z))``,
    ``P(z) = (1-nu)/(1-z) + nu/(1-(1-x) z)``.
    """
    mode = _mode(mode, x, nu, beta, gamma)
    x, nu, beta, gamma = (mode.convert(v) for v in (x, nu, beta, gamma))
    g_t = ogf_series(T, order, mode)
    xi = xi_series(x, nu, order, mode)
    factor = binom_pow(_xi_over_minus_z(x, nu, order, mode), beta) * binom_pow(_one_minus(1, order, mode), beta - gamma)
    return _prefactor(x, nu, order, mode) * factor * compose(g_t, xi)


def ogf_T_from_S(S: Sequence, x, nu, beta, gamma, order: int, mode: FieldMode | None = None) -> Series:
    """OGF of ``T = A(x, nu; gamma, beta, gamma) S``:

    ``G_T(xi) = P(Omega)^-1 (-Omega/xi)^beta (1-Omega)^(gamma-beta) G_S(Omega)``.
    """
    mode = _mode(mode, x, nu, beta, gamma)
    x, nu, beta, gamma = (mode.convert(v) for v in (x, nu, beta, gamma))
    g_s = ogf_series(S, order, mode)
    omega_long = omega_series(x, nu, order + 1, mode)
    omega = omega_long.truncate(order)
    minus_omega_over_xi = -omega_long.shift_down()
    inv_pref = reciprocal(compose(_prefactor(x, nu, order, mode), omega))
    factor = binom_pow(minus_omega_over_xi, beta) * binom_pow(1 - omega, gamma - beta)
    return inv_pref * factor * compose(g_s, omega)


# Exponential generating function.


def egf_S(T: Sequence, x, nu, beta, gamma, z, order: int | None = None, mode: FieldMode | None = None):
    """EGF of ``S = B(x, nu; 0, beta, gamma) T`` at ``z`` for finitely supported ``T``.

    ``exp(z) sum_k (-1)^k T_k z^k/k! [ (gamma+k)/(beta+k) Phi((beta+k) nu; gamma+k; -xz)
    + (beta-gamma)/(beta+k) Phi((beta+k) nu; 1+gamma+k; -xz) ]``; ``order`` truncates Phi.
    """
    mode = _mode(mode, x, nu, beta, gamma, z)
    if mode.is_exact:
        mode = DOUBLE
    x, nu, beta, gamma, z = (mode.convert(v) for v in (x, nu, beta, gamma, z))
    p = Params(x, nu, 0, beta, gamma, mode=mode)
    p.check_beta(len(T))
    p.check_gamma(len(T))
    total = mode.zero
    zk = mode.one
    for k, t_k in enumerate(T, start=1):
        zk = zk * z / k
        if t_k == 0:
            continue
        lam = (beta + k) * nu
        phi1 = confluent_phi(lam, gamma + k, -x * z, order).value
        phi2 = confluent_phi(lam, 1 + gamma + k, -x * z, order).value
        bracket = (gamma + k) / (beta + k) * phi1 + (beta - gamma) / (beta + k) * phi2
        term = mode.convert(t_k) * zk * bracket
        total += -term if k % 2 else term
    return mode.exp(z) * total


def egf_S_direct(T: Sequence, x, nu, beta, gamma, z, n_terms: int = 50, mode: FieldMode | None = None):
    """``sum_{n<=n_terms} z^n/n! (B T)_n`` with ``B = B(x, nu; 0, beta, gamma)``.

    Only the columns where ``T`` is nonzero are built; with rational parameters
    the entries are exact and only the final sum is rounded.
    """
    build_mode = _mode(mode, x, nu, beta, gamma)
    p = Params(x, nu, 0, beta, gamma, mode=build_mode)
    p.check_beta(len(T))
    p.check_gamma(n_terms)
    cols = [(k, build_mode.convert(t)) for k, t in enumerate(T, start=1) if t != 0]
    out_mode = DOUBLE if build_mode.is_exact else build_mode
    z = out_mode.convert(z)
    total, zn = out_mode.zero, out_mode.one
    for n in range(1, n_terms + 1):
        zn = zn * z / n
        s_n = sum((b_entry(p, n, k) * t for k, t in cols if k <= n), build_mode.zero)
        total += zn * out_mode.convert(s_n)
    return total
