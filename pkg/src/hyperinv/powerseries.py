"""Truncated formal power series over a single numeric field.

A :class:`Series` stores ``c_0 .. c_N`` together with its truncation order
``N``; coefficients beyond ``N`` are unknown, not zero.  Binary operations
truncate to the smaller order.  All algorithms are rational recurrences, so
exact-mode series stay exact.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import (
    ConstantTermNotOne,
    ModeMismatch,
    NoConvergence,
    NonzeroInnerConstant,
    NotInvertible,
    OrderExceeded,
)
from .numfield import EXACT, FieldMode, common_mode, scalar_from_json, scalar_to_json

__all__ = [
    "Series",
    "coeff",
    "mul",
    "add",
    "sub",
    "scale",
    "reciprocal",
    "compose",
    "revert",
    "revert_newton",
    "revert_lagrange",
    "exp_series",
    "log_series",
    "binom_pow",
    "series_to_json",
    "series_from_json",
]


class Series:
    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs: Iterable, mode: FieldMode | None = None):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least its constant term")
        if mode is None:
            mode = common_mode(*coeffs)
        else:
            for c in coeffs:
                if not (isinstance(c, int) and not isinstance(c, bool)):
                    mode.check(c)
        self.coeffs = tuple(mode.convert(c) for c in coeffs)
        self.mode = mode

    # construction helpers

    @classmethod
    def constant(cls, value, order: int, mode: FieldMode | None = None) -> "Series":
        mode = mode or common_mode(value)
        return cls([value] + [0] * order, mode)

    @classmethod
    def variable(cls, order: int, mode: FieldMode = EXACT) -> "Series":
        """The series ``x`` truncated at ``order``."""
        if order < 1:
            raise ValueError("the variable x needs order >= 1")
        return cls([0, 1] + [0] * (order - 1), mode)

    @classmethod
    def from_function(cls, fn, order: int, mode: FieldMode) -> "Series":
        return cls([fn(n) for n in range(order + 1)], mode)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, n: int):
        return coeff(self, n)

    def __repr__(self):
        return f"Series({list(self.coeffs)!r}, order={self.order}, mode={self.mode})"

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.mode == other.mode and self.coeffs == other.coeffs

    __hash__ = None

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise OrderExceeded(f"cannot extend order {self.order} to {order}")
        return Series(self.coeffs[: order + 1], self.mode)

    def deriv(self) -> "Series":
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            raise OrderExceeded("derivative of an order-0 series has no known coefficients")
        return Series([n * c for n, c in enumerate(self.coeffs)][1:], self.mode)

    def shift_down(self) -> "Series":
        """``f(x) / x`` for ``f(0) == 0``; the order drops by one."""
        if self.coeffs[0] != 0:
            raise NonzeroInnerConstant("f(0) must vanish to divide by x")
        return Series(self.coeffs[1:], self.mode)

    def times_x(self) -> "Series":
        """``x * f(x)`` keeping the same truncation order."""
        return Series([0] + list(self.coeffs[:-1]), self.mode)

    def negate_variable(self) -> "Series":
        """``f(-x)``."""
        return Series([c if n % 2 == 0 else -c for n, c in enumerate(self.coeffs)], self.mode)

    def scale_variable(self, a) -> "Series":
        """``f(a x)``."""
        a = self.mode.convert(a)
        out, p = [], self.mode.one
        for c in self.coeffs:
            out.append(c * p)
            p *= a
        return Series(out, self.mode)

    def __call__(self, z):
        """Evaluate the truncated polynomial at ``z`` (Horner)."""
        acc = self.mode.zero
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Series):
            if other.mode != self.mode:
                raise ModeMismatch(f"series modes {self.mode} and {other.mode} differ")
            return other
        return Series.constant(self.mode.convert(other), self.order, self.mode)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, self._coerce(other))

    def __rsub__(self, other):
        return sub(self._coerce(other), self)

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.mode)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return mul(self, reciprocal(self._coerce(other)))
        return scale(self, 1 / self.mode.convert(other))

    def __rtruediv__(self, other):
        return mul(self._coerce(other), reciprocal(self))

    def __pow__(self, exponent):
        return binom_pow(self, exponent)


def _pair(f: Series, g: Series):
    if f.mode != g.mode:
        raise ModeMismatch(f"series modes {f.mode} and {g.mode} differ")
    return min(f.order, g.order)


def coeff(f: Series, n: int):
    """``[x^n] f``."""
    if n < 0:
        raise IndexError("coefficient index must be non-negative")
    if n > f.order:
        raise OrderExceeded(f"coefficient {n} requested from a series of order {f.order}")
    return f.coeffs[n]


def add(f: Series, g: Series) -> Series:
    n = _pair(f, g)
    return Series([f.coeffs[i] + g.coeffs[i] for i in range(n + 1)], f.mode)


def sub(f: Series, g: Series) -> Series:
    n = _pair(f, g)
    return Series([f.coeffs[i] - g.coeffs[i] for i in range(n + 1)], f.mode)


def scale(f: Series, a) -> Series:
    a = f.mode.convert(a)
    return Series([a * c for c in f.coeffs], f.mode)


def mul(f: Series, g: Series) -> Series:
    """Cauchy product truncated to the smaller order."""
    n = _pair(f, g)
    a, b = f.coeffs, g.coeffs
    zero = f.mode.zero
    out = []
    for k in range(n + 1):
        s = zero
        for j in range(k + 1):
            s += a[j] * b[k - j]
        out.append(s)
    return Series(out, f.mode)


def reciprocal(f: Series) -> Series:
    """``1/f`` for ``f(0) != 0``."""
    a = f.coeffs
    if a[0] == 0:
        raise NotInvertible("1/f needs a nonzero constant term")
    inv0 = 1 / a[0]
    out = [inv0]
    for k in range(1, f.order + 1):
        s = f.mode.zero
        for j in range(1, k + 1):
            s += a[j] * out[k - j]
        out.append(-s * inv0)
    return Series(out, f.mode)


def compose(f: Series, g: Series) -> Series:
    """``f(g(x))`` for ``g(0) == 0``, by Horner's scheme in ``g``."""
    n = _pair(f, g)
    if g.coeffs[0] != 0:
        raise NonzeroInnerConstant("inner series must have zero constant term")
    g = g.truncate(n)
    acc = Series.constant(f.coeffs[n], n, f.mode)
    for c in reversed(f.coeffs[:n]):
        acc = mul(acc, g)
        acc = Series([acc.coeffs[0] + c] + list(acc.coeffs[1:]), f.mode)
    return acc


def _check_revertible(f: Series):
    if f.order < 1:
        raise OrderExceeded("reversion needs order >= 1")
    if f.coeffs[0] != 0:
        raise NonzeroInnerConstant("reversion needs f(0) == 0")
    if f.coeffs[1] == 0:
        raise NotInvertible("reversion needs f'(0) != 0")


def revert_newton(f: Series, max_iter: int = 64) -> Series:
    """Compositional inverse by Newton's iteration ``g <- g - (f(g) - x) / f'(g)``.

    Each step doubles the number of correct coefficients.
    """
    _check_revertible(f)
    n, mode = f.order, f.mode
    x = Series.variable(n, mode)
    g = scale(x, 1 / f.coeffs[1])
    fprime = Series(list(f.deriv().coeffs) + [0], mode)
    correct = 1
    for _ in range(max_iter):
        resid = compose(f, g) - x
        if mode.is_exact:
            if all(c == 0 for c in resid.coeffs):
                return g
        elif correct > n:
            return g
        g = g - resid / compose(fprime, g)
        correct *= 2
    raise NoConvergence("Newton reversion did not settle")


def revert_lagrange(f: Series) -> Series:
    """Compositional inverse from ``[x^n] g = (1/n) [x^(n-1)] (x / f)^n``."""
    _check_revertible(f)
    n, mode = f.order, f.mode
    h = reciprocal(f.shift_down())  # x / f, order n - 1
    out = [mode.zero]
    power = Series.constant(mode.one, n - 1, mode)
    for k in range(1, n + 1):
        power = mul(power, h)
        out.append(power.coeffs[k - 1] / k)
    return Series(out, mode)


def revert(f: Series) -> Series:
    """Compositional inverse ``g`` with ``f(g(x)) = g(f(x)) = x`` to order."""
    try:
        return revert_newton(f)
    except NoConvergence:
        return revert_lagrange(f)


def exp_series(f: Series) -> Series:
    """``exp(f)`` for ``f(0) == 0`` from ``g' = f' g``."""
    if f.coeffs[0] != 0:
        raise NonzeroInnerConstant("exp needs f(0) == 0")
    a, mode = f.coeffs, f.mode
    out = [mode.one]
    for n in range(1, f.order + 1):
        s = mode.zero
        for k in range(1, n + 1):
            s += k * a[k] * out[n - k]
        out.append(s / n)
    return Series(out, mode)


def log_series(f: Series) -> Series:
    """``log(f)`` for ``f(0) == 1`` from ``f g' = f'``."""
    a, mode = f.coeffs, f.mode
    if a[0] != 1:
        raise ConstantTermNotOne("log needs f(0) == 1")
    out = [mode.zero]
    for n in range(1, f.order + 1):
        s = n * a[n]
        for k in range(1, n):
            s -= k * out[k] * a[n - k]
        out.append(s / n)
    return Series(out, mode)


def binom_pow(f: Series, lam) -> Series:
    """``f^lam = exp(lam log f)`` for ``f(0) == 1``.

    Uses the recurrence from ``f g' = lam f' g``, which is the same series
    without forming the logarithm.
    """
    a, mode = f.coeffs, f.mode
    if a[0] != 1:
        raise ConstantTermNotOne("binom_pow needs f(0) == 1")
    lam = mode.convert(lam)
    out = [mode.one]
    for n in range(1, f.order + 1):
        s = mode.zero
        for k in range(1, n + 1):
            if a[k] != 0:
                s += (lam * k - (n - k)) * a[k] * out[n - k]
        out.append(s / n)
    return Series(out, mode)


def series_to_json(f: Series) -> dict:
    return {"order": f.order, "coeffs": [scalar_to_json(c) for c in f.coeffs]}


def series_from_json(obj: dict, mode: FieldMode) -> Series:
    coeffs: Sequence = obj["coeffs"]
    order = int(obj["order"])
    if len(coeffs) != order + 1:
        raise ValueError(f"series of order {order} needs {order + 1} coefficients, got {len(coeffs)}")
    return Series([scalar_from_json(c, mode) for c in coeffs], mode)
