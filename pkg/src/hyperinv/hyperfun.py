"""Pochhammer symbols, terminating Gauss polynomials, Kummer's function and
the alternating reciprocal-gamma sum ``D_N(lambda, mu)``.

Everything here is generic over the scalar field: the polynomial routines
work bit-exactly on Fractions, while the gamma-based ones need a float mode.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DenominatorPole, DomainError, ModeMismatch
from .numfield import DOUBLE, FieldMode, _pole_index, common_mode, digamma, gamma_recip, log_gamma, mode_of

__all__ = [
    "pochhammer",
    "gauss_poly",
    "gauss_terms",
    "confluent_phi",
    "Truncated",
    "d_sum_direct",
    "d_closed",
    "gauss_at_one",
    "contiguous_gauss",
    "BRANCH_TOL",
]

# |mu - lambda| below which D_N is evaluated without the 1/(mu - lambda) factor.
BRANCH_TOL = 1e-7
# Below this separation the 1/(mu - lambda) quotient loses too many digits to
# cancellation and is evaluated as a contour integral instead.
_CANCEL_TOL = 1e-2
_CONTOUR_POINTS = 64
_CONTOUR_RADIUS = 0.5


class Truncated(NamedTuple):
    """A truncated series value with the magnitude of its last included term."""

    value: object
    tail: float
    order: int


def _one_like(*values):
    return common_mode(*values).one


def pochhammer(c, m: int):
    """Rising factorial ``(c)_m = c (c+1) ... (c+m-1)``, with ``(c)_0 = 1``."""
    if m < 0:
        raise ValueError("pochhammer order must be non-negative")
    out = _one_like(c)
    for j in range(m):
        out *= c + j
    return out


def gauss_terms(n: int, b, c, x):
    """Terms ``(-n)_m (b)_m / ((c)_m m!) x^m`` for ``m = 0..n`` of ``F(-n, b; c; x)``.

    Built from the term ratio, so exact inputs give exact terms. Once a
    numerator factor vanishes, every later term is zero and no further
    denominator is formed.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    term = _one_like(b, c, x)
    terms = [term]
    for m in range(n):
        num = (m - n) * (b + m) * x
        if term == 0 or num == 0:
            terms.extend([term * 0] * (n - m))
            break
        den = (c + m) * (m + 1)
        if den == 0:
            raise DenominatorPole(f"(c)_{m + 1} vanishes in F(-{n}, b; c; x) with c = {c}")
        term = term * num / den
        terms.append(term)
    return terms


def gauss_poly(n: int, b, c, x):
    """Terminating hypergeometric polynomial ``F(-n, b; c; x)`` of degree ``n``."""
    total = 0
    for t in gauss_terms(n, b, c, x):
        total = total + t
    return total


def confluent_phi(lam, mu, z, order: int | None = None) -> Truncated:
    """Truncated Kummer function ``sum_{j<=order} (lam)_j / ((mu)_j j!) z^j``.

    The default order is ``max(40, ceil(4|z|))``; ``tail`` is the modulus of
    the last included term.
    """
    if order is None:
        order = max(40, math.ceil(4 * abs(complex(z))))
    if order < 0:
        raise ValueError("order must be non-negative")
    term = _one_like(lam, mu, z)
    total = term
    for j in range(order):
        num = (lam + j) * z
        if num == 0:
            term = term * 0
            break
        den = (mu + j) * (j + 1)
        if den == 0:
            raise DenominatorPole(f"(mu)_{j + 1} vanishes in Phi with mu = {mu}")
        term = term * num / den
        total = total + term
    return Truncated(total, float(abs(term)), order)


def _float_pair(*values) -> FieldMode:
    mode = common_mode(*values)
    if mode.is_exact:
        if any(not isinstance(v, int) for v in values):
            raise ModeMismatch("this function needs float-mode arguments")
        return DOUBLE
    return mode


def d_sum_direct(N: int, lam, mu):
    """``D_N(lam, mu) = sum_{r<N} (-1)^r / (Gamma(1+r-lam) Gamma(1-r+mu))``."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    mode = _float_pair(lam, mu)
    lam, mu = mode.convert(lam), mode.convert(mu)
    total = mode.zero
    for r in range(N):
        term = gamma_recip(1 + r - lam) * gamma_recip(1 - r + mu)
        total += -term if r % 2 else term
    return total


def _sin_psi(lam, w, mode: FieldMode):
    """``sin(pi lam) * psi(w)`` for ``w = c - lam`` with integer ``c``.

    Reflection turns the pole of psi at a non-positive integer into the
    finite limit, so integer ``lam`` never yields 0 * inf.
    """
    s = mode.sinpi(lam)
    if complex(w).real >= 0.5:
        return s * digamma(w) if s != 0 else mode.zero
    # psi(w) = psi(1 - w) - pi cot(pi w), and sin(pi lam) cot(pi w) = -cos(pi lam)
    head = s * digamma(1 - w) if s != 0 else mode.zero
    return head + mode.pi * mode.cospi(lam)


def _g_numerator(N: int, lam, t):
    sign = -1 if N % 2 else 1
    return gamma_recip(-lam) * gamma_recip(1 + t) - sign * gamma_recip(N - lam) * gamma_recip(1 - N + t)


def _divided_difference(N: int, lam, mu, mode: FieldMode):
    # The numerator g(t) vanishes at t = lam and is entire in t, so
    # g(mu) / (mu - lam) = (1 / 2 pi i) \oint g(t) / ((t - lam)(t - mu)) dt.
    centre = (lam + mu) / 2
    total = mode.zero
    for j in range(_CONTOUR_POINTS):
        w = _CONTOUR_RADIUS * mode.exp(2j * mode.pi * (j + 0.5) / _CONTOUR_POINTS)
        t = centre + w
        total += _g_numerator(N, lam, t) * w / ((t - lam) * (t - mu))
    return total / _CONTOUR_POINTS


def d_closed(N: int, lam, mu, branch_tol: float = BRANCH_TOL):
    """Closed form of ``D_N(lam, mu)``.

    For ``mu != lam``::

        D = [1/(Gamma(-lam) Gamma(1+mu)) - (-1)^N/(Gamma(N-lam) Gamma(1-N+mu))] / (mu - lam)

    and on the diagonal ``D = sin(pi lam)/pi * [psi(-lam) - psi(N-lam)]``, with
    the 0 * inf at integer ``lam`` resolved by reflection.  Separations below
    ``branch_tol`` but nonzero, and anything under 1e-2, use a contour
    quadrature of the same quotient so the cancellation never happens.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    mode = _float_pair(lam, mu)
    lam, mu = mode.convert(lam), mode.convert(mu)
    gap = abs(mu - lam)
    if gap == 0:
        return (_sin_psi(lam, -lam, mode) - _sin_psi(lam, N - lam, mode)) / mode.pi
    if gap < max(branch_tol, _CANCEL_TOL):
        return _divided_difference(N, lam, mu, mode)
    return _g_numerator(N, lam, mu) / (mu - lam)


def _is_pole(z) -> bool:
    mode = mode_of(z)
    return _pole_index(mode.convert(z), mode) is not None


def gauss_at_one(alpha, beta, gamma):
    """Gauss's sum ``F(alpha, beta; gamma; 1) = G(g) G(g-a-b) / (G(g-a) G(g-b))``.

    Requires ``Re(gamma) > Re(alpha + beta)``.
    """
    mode = _float_pair(alpha, beta, gamma)
    alpha, beta, gamma = (mode.convert(v) for v in (alpha, beta, gamma))
    if not complex(gamma - alpha - beta).real > 0:
        raise DomainError("F(a, b; c; 1) diverges unless Re(c) > Re(a + b)")
    if _is_pole(gamma):
        raise DomainError("gamma must not be a non-positive integer")
    if _is_pole(gamma - alpha) or _is_pole(gamma - beta):
        return mode.zero
    return mode.exp(
        log_gamma(gamma) + log_gamma(gamma - alpha - beta) - log_gamma(gamma - alpha) - log_gamma(gamma - beta)
    )


def contiguous_gauss(alpha, beta, x):
    """``F(1+alpha, beta; alpha; x) = (1-x)^-beta + (beta x / alpha)(1-x)^(-1-beta)``, |x| < 1."""
    mode = _float_pair(alpha, beta, x)
    alpha, beta, x = (mode.convert(v) for v in (alpha, beta, x))
    if alpha == 0:
        raise DenominatorPole("alpha must be nonzero")
    base = mode.power(1 - x, -beta)
    return base + beta * x / alpha * base / (1 - x)
