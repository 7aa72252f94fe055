"""The queueing system that motivates the pair.

Given ``0 < x < 1`` and ``nu < 0``, solve the lower-triangular system

    sum_{l=1..b} (-1)^l C(b, l) Q[b,l] E_l = K_b,      b = 1, 2, ...

with ``Q[b,l] = q_b F(l-b, -b nu; -b; x)`` and
``q_b = -Gamma(b) Gamma(1-b nu) / Gamma(b-b nu) * x^(1-b) / (1-x)``.
Dividing row ``b`` by ``q_b`` leaves ``A(x, nu; 0, 0, 0) E = K~`` with
``K~_b = K_b / q_b``, so ``E = B(x, nu; 0, 0, 0) K~``.

Row ``b`` carries ``x^(1-b)`` and the entries of ``B`` grow quickly, so the
residual is only meaningful when evaluated with enough digits. The default
field is 256-bit mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, LengthMismatch
from .hyperfun import gauss_poly
from .invpair import Params, TriMatrix, apply, build_A, build_B, forward_solve
from .numfield import FieldMode, float_mode, log_gamma, scalar_from_json, scalar_to_json

__all__ = [
    "QueueProblem",
    "QueueSolution",
    "DEFAULT_BITS",
    "row_factor",
    "build_Q",
    "system_matrix",
    "reduce_rhs",
    "solve_E",
    "solve_forward",
    "residual_max",
    "problem_from_json",
    "solution_to_json",
]

DEFAULT_BITS = 256


def _real(value, name: str) -> float:
    z = complex(value)
    if z.imag != 0:
        raise DomainError(f"{name} must be real, got {value!r}")
    return z.real


@dataclass(frozen=True)
class QueueProblem:
    x: object
    nu: object
    b_max: int
    K: tuple
    mode: FieldMode = float_mode(DEFAULT_BITS)

    def __post_init__(self):
        if self.mode.is_exact:
            raise DomainError("the queueing matrix needs Gamma at non-integer points; use a float mode")
        x, nu = _real(self.x, "x"), _real(self.nu, "nu")
        if not 0 < x < 1:
            raise DomainError(f"x must lie in ]0,1[, got {x}")
        if not nu < 0:
            raise DomainError(f"nu must be negative, got {nu}")
        if isinstance(self.b_max, bool) or not isinstance(self.b_max, int) or self.b_max < 1:
            raise DomainError(f"b_max must be a positive integer, got {self.b_max!r}")
        if len(self.K) < self.b_max:
            raise LengthMismatch(f"K has {len(self.K)} terms, b_max = {self.b_max}")
        conv = self.mode.convert
        object.__setattr__(self, "x", conv(self.x))
        object.__setattr__(self, "nu", conv(self.nu))
        object.__setattr__(self, "K", tuple(conv(k) for k in self.K[: self.b_max]))


@dataclass(frozen=True)
class QueueSolution:
    E: list
    residual_max: float
    oracle_max_rel_diff: float
    mode: FieldMode


def row_factor(b: int, x, nu, mode: FieldMode):
    """``q_b = -Gamma(b) Gamma(1-b nu) / Gamma(b-b nu) * x^(1-b) / (1-x)``."""
    x, nu = mode.convert(x), mode.convert(nu)
    ratio = mode.exp(log_gamma(mode.convert(b)) + log_gamma(1 - b * nu) - log_gamma(b - b * nu))
    return -ratio * mode.power(x, 1 - b) / (1 - x)


def build_Q(x, nu, b_max: int, mode: FieldMode | None = None) -> TriMatrix:
    """``Q[b,l] = q_b F(l-b, -b nu; -b; x)``."""
    p = QueueProblem(x, nu, b_max, (0,) * b_max, mode or float_mode(DEFAULT_BITS))
    q = [row_factor(b, p.x, p.nu, p.mode) for b in range(1, b_max + 1)]
    return TriMatrix.from_function(b_max, lambda b, l: q[b - 1] * gauss_poly(b - l, -b * p.nu, -b, p.x), p.mode)


def system_matrix(x, nu, b_max: int, mode: FieldMode | None = None) -> TriMatrix:
    """The operator of the system, ``M[b,l] = (-1)^l C(b,l) Q[b,l]``."""
    Q = build_Q(x, nu, b_max, mode)
    return TriMatrix.from_function(
        b_max, lambda b, l: (-1) ** l * math.comb(b, l) * Q[b, l], Q.mode
    )


def reduce_rhs(K: Sequence, x, nu, mode: FieldMode | None = None) -> list:
    """``K~_b = -Gamma(b-b nu) / (Gamma(b) Gamma(1-b nu)) (1-x) x^(b-1) K_b = K_b / q_b``."""
    mode = mode or float_mode(DEFAULT_BITS)
    return [mode.convert(k) / row_factor(b, x, nu, mode) for b, k in enumerate(K, start=1)]


def residual_max(M: TriMatrix, E: Sequence, K: Sequence) -> float:
    """``max_b |(M E)_b - K_b|``, evaluated in the matrix's field."""
    MK = apply(M, E)
    return max((float(abs(a - M.mode.convert(k))) for a, k in zip(MK, K)), default=0.0)


def solve_forward(problem: QueueProblem) -> list:
    """Row-by-row substitution on the system matrix; the independent route."""
    M = system_matrix(problem.x, problem.nu, problem.b_max, problem.mode)
    return forward_solve(M, problem.K)


def solve_E(problem: QueueProblem) -> QueueSolution:
    """``E = B(x, nu; 0, 0, 0) K~``, with the residual and the gap to forward substitution."""
    p = Params(problem.x, problem.nu, 0, 0, 0, mode=problem.mode)
    n = problem.b_max
    E = apply(build_B(p, n), reduce_rhs(problem.K, p.x, p.nu, p.mode))
    M = system_matrix(p.x, p.nu, n, p.mode)
    res = residual_max(M, E, problem.K)
    ref = forward_solve(M, problem.K)
    diff = max(
        (float(abs(e - r)) / max(float(abs(r)), 1e-300) for e, r in zip(E, ref) if e != r),
        default=0.0,
    )
    return QueueSolution(E, res, diff, p.mode)


def scaled_A(x, nu, b_max: int, mode: FieldMode | None = None) -> TriMatrix:
    """``A(x, nu; 0, 0, 0)`` in the queue's field, for the row-scaling check."""
    mode = mode or float_mode(DEFAULT_BITS)
    return build_A(Params(x, nu, 0, 0, 0, mode=mode), b_max)


def problem_from_json(obj: dict, mode: FieldMode | None = None) -> QueueProblem:
    mode = mode or float_mode(DEFAULT_BITS)
    try:
        x = scalar_from_json(obj["x"], mode)
        nu = scalar_from_json(obj["nu"], mode)
        b_max = obj["b_max"]
        K = tuple(scalar_from_json(k, mode) for k in obj["K"])
    except KeyError as exc:
        raise ValueError(f"problem JSON lacks field {exc.args[0]!r}") from None
    return QueueProblem(x, nu, b_max, K, mode)


def solution_to_json(sol: QueueSolution) -> dict:
    return {
        "E": [scalar_to_json(e) for e in sol.E],
        "residual_max": sol.residual_max,
        "oracle_max_rel_diff": sol.oracle_max_rel_diff,
        "precision_bits": sol.mode.precision_bits,
    }
