"""The hypergeometric lower-triangular inverse pair ``A``, ``B``.

Indices are 1-based everywhere in the public interface: ``M[n, k]`` with
``1 <= k <= n <= n_max``.  Entries are

    A[n,k] = (-1)^k C(n+a, k+a) F(k-n, -(beta+n) nu; -(gamma+n); x)
    B[n,k] = (-1)^k C(n+a, k+a) [ (gamma+k)/(beta+k) F(k-n, (beta+k) nu; gamma+k; x)
                                  + (beta-gamma)/(beta+k) F(k-n, (beta+k) nu; 1+gamma+k; x) ]

with ``C(n+a, k+a) = prod_{j=k+1..n} (a+j) / (n-k)!`` (see :func:`genbinom`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import (
    BetaPole,
    GammaPole,
    LengthMismatch,
    ModeMismatch,
    SingularDiagonal,
    SizeMismatch,
)
from .hyperfun import gauss_poly, pochhammer
from .numfield import EXACT, FieldMode, common_mode, scalar_from_json, scalar_to_json
from .powerseries import Series, binom_pow

__all__ = [
    "a_entry",
    "b_entry",
    "Params",
    "TriMatrix",
    "SequenceSpec",
    "genbinom",
    "build_A",
    "build_B",
    "build_generic",
    "pair_sequences",
    "criterion_check",
    "CriterionReport",
    "CellResult",
    "mat_mul",
    "is_identity",
    "identity",
    "apply",
    "forward_solve",
    "x_kernel",
    "u_sum",
    "matrix_to_json",
    "matrix_from_json",
]


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass(frozen=True)
class Params:
    """The five scalars ``(x, nu, alpha, beta, gamma)`` of the pair."""

    x: object
    nu: object
    alpha: object = 0
    beta: object = 0
    gamma: object = 0
    mode: FieldMode = field(default=None, compare=False)

    def __post_init__(self):
        mode = self.mode or common_mode(self.x, self.nu, self.alpha, self.beta, self.gamma)
        object.__setattr__(self, "mode", mode)
        for name in ("x", "nu", "alpha", "beta", "gamma"):
            object.__setattr__(self, name, mode.convert(getattr(self, name)))

    def check_gamma(self, n_max: int) -> None:
        for k in range(1, n_max + 1):
            if self.gamma + k == 0:
                raise GammaPole(f"gamma = {self.gamma} is a negative integer within 1..{n_max}")

    def check_beta(self, n_max: int) -> None:
        for k in range(1, n_max + 1):
            if self.beta + k == 0:
                raise BetaPole(f"beta + {k} = 0: the B matrix carries 1/(beta + k)")

    def as_dict(self) -> dict:
        return {k: scalar_to_json(getattr(self, k)) for k in ("x", "nu", "alpha", "beta", "gamma")}


class TriMatrix:
    """Immutable lower-triangular matrix with 1-based indices."""

    __slots__ = ("rows", "mode")

    def __init__(self, rows: Sequence[Sequence], mode: FieldMode | None = None):
        rows = [list(r) for r in rows]
        for n, r in enumerate(rows, start=1):
            if len(r) != n:
                raise SizeMismatch(f"row {n} must hold {n} entries, got {len(r)}")
        flat = [v for r in rows for v in r]
        if mode is None:
            mode = common_mode(*flat) if flat else EXACT
        self.rows = tuple(tuple(mode.convert(v) for v in r) for r in rows)
        self.mode = mode

    @classmethod
    def from_function(cls, n_max: int, fn: Callable[[int, int], object], mode: FieldMode) -> "TriMatrix":
        return cls([[fn(n, k) for k in range(1, n + 1)] for n in range(1, n_max + 1)], mode)

    @property
    def n_max(self) -> int:
        return len(self.rows)

    def __getitem__(self, idx):
        n, k = idx
        if not (1 <= n <= self.n_max and 1 <= k <= self.n_max):
            raise IndexError(f"index {(n, k)} outside 1..{self.n_max}")
        if k > n:
            return self.mode.zero
        return self.rows[n - 1][k - 1]

    def __eq__(self, other):
        if not isinstance(other, TriMatrix):
            return NotImplemented
        return self.mode == other.mode and self.rows == other.rows

    __hash__ = None

    def __matmul__(self, other):
        if isinstance(other, TriMatrix):
            return mat_mul(self, other)
        return apply(self, other)

    def __repr__(self):
        return f"TriMatrix(n_max={self.n_max}, mode={self.mode})"

    def diagonal(self) -> list:
        return [self.rows[n][n] for n in range(self.n_max)]

    def truncate(self, n_max: int) -> "TriMatrix":
        return TriMatrix(self.rows[:n_max], self.mode)

    def max_abs(self) -> float:
        return max((float(abs(v)) for r in self.rows for v in r), default=0.0)


def identity(n_max: int, mode: FieldMode = EXACT) -> TriMatrix:
    return TriMatrix.from_function(n_max, lambda n, k: 1 if n == k else 0, mode)


def genbinom(n: int, k: int, alpha):
    """Generalized binomial ``C(n+alpha, k+alpha) = prod_{j=k+1..n} (alpha+j) / (n-k)!``."""
    out = pochhammer(alpha + k + 1, n - k)
    for j in range(2, n - k + 1):
        out = out / j
    return out


def a_entry(p: Params, n: int, k: int):
    """``A[n,k]``; the caller guarantees ``gamma + n`` is not a pole."""
    f = gauss_poly(n - k, -(p.beta + n) * p.nu, -(p.gamma + n), p.x)
    return _sign(k) * genbinom(n, k, p.alpha) * f


def b_entry(p: Params, n: int, k: int):
    """``B[n,k]``; the caller guarantees ``beta + k`` and ``gamma + k`` are nonzero."""
    b = (p.beta + k) * p.nu
    w1 = (p.gamma + k) / (p.beta + k)
    w2 = (p.beta - p.gamma) / (p.beta + k)
    f1 = gauss_poly(n - k, b, p.gamma + k, p.x)
    f2 = gauss_poly(n - k, b, 1 + p.gamma + k, p.x)
    return _sign(k) * genbinom(n, k, p.alpha) * (w1 * f1 + w2 * f2)


def build_A(p: Params, n_max: int) -> TriMatrix:
    p.check_gamma(n_max)
    return TriMatrix.from_function(n_max, lambda n, k: a_entry(p, n, k), p.mode)


def build_B(p: Params, n_max: int) -> TriMatrix:
    p.check_gamma(n_max)
    p.check_beta(n_max)
    return TriMatrix.from_function(n_max, lambda n, k: b_entry(p, n, k), p.mode)


@dataclass(frozen=True)
class SequenceSpec:
    """Coefficient family ``(m, n, k) -> c_m`` that depends on ``n`` only or ``k`` only."""

    generator: Callable[[int, int, int], object]
    depends_on: str  # "n" or "k"

    def __post_init__(self):
        if self.depends_on not in ("n", "k"):
            raise ValueError("depends_on must be 'n' or 'k'")

    def __call__(self, m: int, n: int, k: int):
        return self.generator(m, n, k)

    def values(self, count: int, n: int, k: int) -> list:
        return [self.generator(m, n, k) for m in range(count)]


def independent(a: SequenceSpec, b: SequenceSpec) -> bool:
    return a.depends_on != b.depends_on


def pair_sequences(p: Params) -> tuple[SequenceSpec, SequenceSpec]:
    """The coefficient families whose (DefAB)-matrices are ``build_A`` and ``build_B``."""
    nu, beta, gamma = p.nu, p.beta, p.gamma

    def a(m, n, k):
        return pochhammer(-(beta + n) * nu, m) / pochhammer(-gamma - n, m)

    def b(m, n, k):
        lam = pochhammer((beta + k) * nu, m)
        return (gamma + k) / (beta + k) * lam / pochhammer(gamma + k, m) + (beta - gamma) / (beta + k) * lam / pochhammer(
            1 + gamma + k, m
        )

    return SequenceSpec(a, "n"), SequenceSpec(b, "k")


def _generic_matrix(c: SequenceSpec, alpha, x, n_max: int, mode: FieldMode) -> TriMatrix:
    def entry(n, k):
        total = mode.zero
        term = mode.one  # (k-n)_m x^m / m!
        for m in range(n - k + 1):
            total += term * c(m, n, k)
            term = term * (k - n + m) * x / (m + 1)
        return _sign(k) * genbinom(n, k, alpha) * total

    return TriMatrix.from_function(n_max, entry, mode)


def build_generic(a: SequenceSpec, b: SequenceSpec, alpha, n_max: int, x, mode: FieldMode | None = None):
    """Matrices ``(-1)^k C(n+alpha, k+alpha) sum_m (k-n)_m c_m x^m / m!`` for ``c = a, b``."""
    mode = mode or common_mode(alpha, x)
    alpha, x = mode.convert(alpha), mode.convert(x)
    return _generic_matrix(a, alpha, x, n_max, mode), _generic_matrix(b, alpha, x, n_max, mode)


@dataclass
class CellResult:
    n: int
    k: int
    value: object
    expected: int
    passed: bool


@dataclass
class CriterionReport:
    n_max: int
    cells: list[CellResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    @property
    def failures(self) -> list[tuple[int, int]]:
        return [(c.n, c.k) for c in self.cells if not c.passed]


def _egf(c: SequenceSpec, n: int, k: int, order: int, mode: FieldMode) -> Series:
    out, fact = [], 1
    for m in range(order + 1):
        if m:
            fact *= m
        out.append(mode.convert(c(m, n, k)) / fact)
    return Series(out, mode)


def criterion_check(
    a: SequenceSpec,
    b: SequenceSpec,
    n_max: int,
    mode: FieldMode = EXACT,
    tol: float = 1e-10,
) -> CriterionReport:
    """Check ``[x^(n-k)] f_n(-x) g_k(x) == delta(n, k)`` for all ``1 <= k <= n <= n_max``.

    ``f`` and ``g`` are the exponential generating series of ``a(., n, k)`` and
    ``b(., n, k)``. Exact mode compares with equality, float modes with ``tol``.
    """
    if a.depends_on == b.depends_on:
        raise ValueError("the two sequences must depend on different indices")
    cells = []
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            d = n - k
            f = _egf(a, n, k, d, mode).negate_variable()
            g = _egf(b, n, k, d, mode)
            value = sum((f.coeffs[j] * g.coeffs[d - j] for j in range(d + 1)), mode.zero)
            expected = 1 if n == k else 0
            ok = value == expected if mode.is_exact else abs(value - expected) < tol
            cells.append(CellResult(n, k, value, expected, ok))
    return CriterionReport(n_max, cells)


def _same_shape(A: TriMatrix, B: TriMatrix):
    if A.n_max != B.n_max:
        raise SizeMismatch(f"orders {A.n_max} and {B.n_max} differ")
    if A.mode != B.mode:
        raise ModeMismatch(f"matrix modes {A.mode} and {B.mode} differ")


def mat_mul(A: TriMatrix, B: TriMatrix) -> TriMatrix:
    """``C[n,k] = sum_{l=k..n} A[n,l] B[l,k]``."""
    _same_shape(A, B)
    mode = A.mode
    rows = []
    for n in range(1, A.n_max + 1):
        arow = A.rows[n - 1]
        row = []
        for k in range(1, n + 1):
            s = mode.zero
            for l in range(k, n + 1):
                s += arow[l - 1] * B.rows[l - 1][k - 1]
            row.append(s)
        rows.append(row)
    return TriMatrix(rows, mode)


def is_identity(C: TriMatrix, tol: float | None = None) -> bool:
    """Exact equality in exact mode; max-abs deviation below ``tol`` otherwise."""
    if C.mode.is_exact and tol is None:
        return all(v == (1 if n == k else 0) for n, r in enumerate(C.rows) for k, v in enumerate(r))
    tol = 1e-6 if tol is None else tol
    return identity_defect(C) < tol


def identity_defect(C: TriMatrix) -> float:
    return max(
        (float(abs(v - (1 if n == k else 0))) for n, r in enumerate(C.rows) for k, v in enumerate(r)),
        default=0.0,
    )


def apply(M: TriMatrix, s: Sequence) -> list:
    """``t_n = sum_{k=1..n} M[n,k] s_k`` for ``n = 1..n_max``; ``s[0]`` holds ``s_1``."""
    if len(s) < M.n_max:
        raise LengthMismatch(f"sequence has {len(s)} terms, matrix needs {M.n_max}")
    mode = M.mode
    s = [mode.convert(v) for v in s[: M.n_max]]
    out = []
    for row in M.rows:
        acc = mode.zero
        for m, v in zip(row, s):
            acc += m * v
        out.append(acc)
    return out


def forward_solve(L: TriMatrix, rhs: Sequence) -> list:
    """Solve ``L s = rhs`` row by row."""
    if len(rhs) < L.n_max:
        raise LengthMismatch(f"right-hand side has {len(rhs)} terms, matrix needs {L.n_max}")
    mode = L.mode
    out = []
    for n, row in enumerate(L.rows):
        if row[n] == 0:
            raise SingularDiagonal(f"zero diagonal entry at row {n + 1}")
        acc = mode.convert(rhs[n])
        for j in range(n):
            acc -= row[j] * out[j]
        out.append(acc / row[n])
    return out


def _h(lam, order: int, mode: FieldMode) -> Series:
    """``h(x; lam) = (1 - x)^lam = sum (-lam)_m x^m / m!``."""
    return binom_pow(Series([1, -1] + [0] * (order - 1), mode), lam)


def x_kernel(n: int, k: int, beta, nu, mode: FieldMode | None = None):
    """``[x^(n-k)] { (beta+n) h(x; (beta+n) nu) h(x; -(beta+k) nu) - x h'(x; (beta+n) nu) h(x; -(beta+k) nu) }``.

    The convolution sum that the inverse-pair identity reduces to; it equals
    ``(beta + n)`` on the diagonal and zero below it.
    """
    mode = mode or common_mode(beta, nu)
    beta, nu = mode.convert(beta), mode.convert(nu)
    d = n - k
    order = max(d, 1)
    h_n = _h((beta + n) * nu, order + 1, mode)
    h_k = _h(-(beta + k) * nu, order, mode)
    x_dh = Series(list(h_n.deriv().coeffs), mode).times_x()
    h_n = h_n.truncate(order)
    x_dh = x_dh.truncate(order)
    series = (beta + n) * (h_n * h_k) - x_dh * h_k
    return series.coeffs[d]


def u_sum(ell: int, n: int, k: int, p: Params):
    """Coefficient ``U_ell^(n,k)`` of ``x^ell`` in ``f_n(-x) g_k(x)`` for the pair's sequences."""
    a, b = pair_sequences(p)
    total = p.mode.zero
    fact_m = 1
    for m in range(ell + 1):
        if m:
            fact_m *= m
        fact_r = 1
        for j in range(2, ell - m + 1):
            fact_r *= j
        term = a(m, n, k) / fact_m * b(ell - m, n, k) / fact_r
        total += -term if m % 2 else term
    return total


def matrix_to_json(M: TriMatrix) -> dict:
    return {"n_max": M.n_max, "rows": [[scalar_to_json(v) for v in r] for r in M.rows]}


def matrix_from_json(obj: dict, mode: FieldMode) -> TriMatrix:
    n_max = int(obj["n_max"])
    rows = obj["rows"]
    if len(rows) != n_max:
        raise SizeMismatch(f"n_max = {n_max} but {len(rows)} rows given")
    return TriMatrix([[scalar_from_json(v, mode) for v in r] for r in rows], mode)
