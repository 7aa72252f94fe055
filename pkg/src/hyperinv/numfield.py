"""Numeric fields and the gamma-family scalar functions.

Two kinds of field are supported:

* ``EXACT``: :class:`fractions.Fraction` values, closed and bit-exact.
* float modes: IEEE double (Python ``complex``) at 53 bits, or an
  isolated :class:`mpmath.MPContext` at any larger precision.

Scalars are plain Python/mpmath numbers; a :class:`FieldMode` describes
which field they belong to and converts foreign values into it.  Containers
(series, matrices) use ``FieldMode.check`` to refuse mixed-mode data.
"""

from __future__ import annotations

import cmath
import functools
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import mpmath
from scipy import special as _sp

from .errors import ModeMismatch, PoleError

__all__ = [
    "FieldMode",
    "EXACT",
    "DOUBLE",
    "float_mode",
    "mode_of",
    "common_mode",
    "gamma_recip",
    "log_gamma",
    "digamma",
    "scalar_to_json",
    "scalar_from_json",
    "parse_scalar",
]

# Relative distance to a non-positive integer below which a float argument
# counts as sitting on a pole of Gamma.
POLE_TOL = 1e-14


@functools.lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class FieldMode:
    """Which field a scalar lives in: ``exact`` or ``float`` at some precision."""

    kind: str
    precision_bits: int = 0

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "float" and self.precision_bits < 53:
            raise ValueError("float precision must be at least 53 bits")

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def is_double(self) -> bool:
        return self.kind == "float" and self.precision_bits == 53

    @property
    def context(self) -> mpmath.MPContext | None:
        """The private mpmath context for extended precision, else ``None``."""
        if self.kind == "float" and self.precision_bits > 53:
            return _mp_context(self.precision_bits)
        return None

    def __str__(self) -> str:
        return "exact" if self.is_exact else f"float{self.precision_bits}"

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    @property
    def eps(self) -> float:
        if self.is_exact:
            return 0.0
        return 2.0 ** (1 - self.precision_bits)

    def convert(self, value: Any):
        """Bring ``value`` into this field.

        Exact mode accepts ints, Fractions and decimal/rational strings;
        a Python float or complex is refused rather than silently rounded.
        """
        if self.is_exact:
            if isinstance(value, bool):
                raise ModeMismatch("booleans are not scalars")
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            if isinstance(value, str):
                return Fraction(value.strip())
            raise ModeMismatch(f"cannot use {type(value).__name__} value {value!r} in exact mode")
        ctx = self.context
        if isinstance(value, str):
            value = _parse_float_text(value)
        if ctx is None:
            if _is_mp(value):
                if value.context.prec < 53:
                    raise ModeMismatch("mpmath value has lower precision than double")
                return complex(value)
            if isinstance(value, Fraction):
                return complex(float(value))
            if isinstance(value, numbers.Complex):
                return complex(value)
            raise ModeMismatch(f"cannot convert {type(value).__name__} to a float scalar")
        if _is_mp(value):
            if value.context is ctx:
                return value if isinstance(value, ctx.mpc) else ctx.mpc(value)
            return ctx.mpc(ctx.convert(value))
        if isinstance(value, Fraction):
            return ctx.mpc(ctx.mpf(value.numerator) / value.denominator)
        if isinstance(value, numbers.Complex):
            return ctx.mpc(value)
        raise ModeMismatch(f"cannot convert {type(value).__name__} to a float scalar")

    def owns(self, value: Any) -> bool:
        try:
            return mode_of(value) == self
        except ModeMismatch:
            return False

    def check(self, *values) -> None:
        for v in values:
            if not self.owns(v):
                raise ModeMismatch(f"value {v!r} does not belong to field {self}")

    def is_zero(self, value) -> bool:
        return value == 0

    def close(self, a, b, tol: float) -> bool:
        if self.is_exact:
            return a == b
        return abs(a - b) <= tol

    # Elementary functions for float modes.

    def _need_float(self, name: str):
        if self.is_exact:
            raise ModeMismatch(f"{name} is transcendental and unavailable in exact mode")

    @property
    def pi(self):
        self._need_float("pi")
        ctx = self.context
        return ctx.mpc(ctx.pi) if ctx else complex(math.pi)

    def exp(self, z):
        self._need_float("exp")
        ctx = self.context
        return ctx.exp(z) if ctx else cmath.exp(z)

    def log(self, z):
        self._need_float("log")
        ctx = self.context
        return ctx.log(z) if ctx else cmath.log(z)

    def sqrt(self, z):
        self._need_float("sqrt")
        ctx = self.context
        return ctx.sqrt(z) if ctx else cmath.sqrt(z)

    def power(self, z, a):
        """Principal-branch ``z**a``."""
        if self.is_exact:
            if isinstance(a, Fraction) and a.denominator == 1:
                return Fraction(z) ** int(a)
            raise ModeMismatch("non-integer powers are unavailable in exact mode")
        if z == 0:
            return self.one if a == 0 else self.zero
        return self.exp(a * self.log(z))

    def sinpi(self, z):
        self._need_float("sinpi")
        ctx = self.context
        if ctx is not None:
            return ctx.mpc(ctx.sinpi(z))
        z = complex(z)
        a, b = z.real, z.imag
        return complex(_sinpi_real(a) * math.cosh(math.pi * b), _cospi_real(a) * math.sinh(math.pi * b))

    def cospi(self, z):
        self._need_float("cospi")
        ctx = self.context
        if ctx is not None:
            return ctx.mpc(ctx.cospi(z))
        z = complex(z)
        a, b = z.real, z.imag
        return complex(_cospi_real(a) * math.cosh(math.pi * b), -_sinpi_real(a) * math.sinh(math.pi * b))


EXACT = FieldMode("exact")
DOUBLE = FieldMode("float", 53)


def float_mode(bits: int = 53) -> FieldMode:
    return FieldMode("float", int(bits))


def _is_mp(value) -> bool:
    return isinstance(getattr(value, "context", None), mpmath.MPContext)


def _parse_float_text(text: str) -> complex:
    text = text.strip().replace(" ", "")
    if "/" in text and "j" not in text:
        return complex(float(Fraction(text)))
    return complex(text)


def mode_of(value) -> FieldMode:
    """Infer the field of a single scalar."""
    if isinstance(value, bool):
        raise ModeMismatch("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return EXACT
    if isinstance(value, (float, complex)):
        return DOUBLE
    if _is_mp(value):
        return float_mode(value.context.prec) if value.context.prec > 53 else DOUBLE
    raise ModeMismatch(f"{type(value).__name__} is not a supported scalar type")


def common_mode(*values) -> FieldMode:
    """The single field shared by ``values``; ints adapt to any field."""
    mode = None
    for v in values:
        if isinstance(v, int) and not isinstance(v, bool):
            continue
        m = mode_of(v)
        if mode is None:
            mode = m
        elif m != mode:
            raise ModeMismatch(f"mixed fields {mode} and {m}")
    return mode or EXACT


def _sinpi_real(a: float) -> float:
    r = math.fmod(a, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _cospi_real(a: float) -> float:
    r = math.fmod(abs(a), 2.0)
    if r > 1.0:
        r = 2.0 - r
    # cos(pi r) = sin(pi (1/2 - r)) for r in [0, 1]
    return _sinpi_real(0.5 - r)


def _float_arg(z, name: str):
    """Coerce ``z`` to its float field; Fractions are rejected."""
    if isinstance(z, Fraction):
        raise ModeMismatch(f"{name} needs a float-mode argument, got an exact rational")
    mode = mode_of(z)
    if mode.is_exact:  # plain int
        return complex(z), DOUBLE
    return mode.convert(z), mode


def _pole_index(z, mode: FieldMode) -> int | None:
    """Return -m when ``z`` is (within tolerance) the non-positive integer -m."""
    if mode.context is None:
        re, im = z.real, z.imag
        tol = POLE_TOL
    else:
        re, im = float(z.real), float(z.imag)
        tol = 64 * mode.eps
    n = round(re)
    if n > 0:
        return None
    scale = max(1.0, abs(re))
    if abs(im) <= tol * scale and abs(re - n) <= tol * scale:
        if mode.context is None or abs(mode.context.mpc(z) - n) <= tol * scale:
            return int(n)
    return None


def gamma_recip(z):
    """Reciprocal gamma ``1/Gamma(z)``, an entire function.

    Returns an exact zero at the non-positive integers (poles of Gamma).
    """
    z, mode = _float_arg(z, "gamma_recip")
    if _pole_index(z, mode) is not None:
        return mode.zero
    ctx = mode.context
    if ctx is not None:
        return ctx.mpc(ctx.rgamma(z))
    return complex(_sp.rgamma(z))


def log_gamma(z):
    """Principal branch of ``log Gamma(z)``, continuous off the negative real axis."""
    z, mode = _float_arg(z, "log_gamma")
    if _pole_index(z, mode) is not None:
        raise PoleError(f"log_gamma has a pole at {z}")
    ctx = mode.context
    if ctx is not None:
        return ctx.mpc(ctx.loggamma(z))
    return complex(_sp.loggamma(z))


def digamma(z):
    """Digamma function ``Gamma'(z)/Gamma(z)``."""
    z, mode = _float_arg(z, "digamma")
    if _pole_index(z, mode) is not None:
        raise PoleError(f"digamma has a pole at {z}")
    ctx = mode.context
    if ctx is not None:
        return ctx.mpc(ctx.digamma(z))
    return complex(_sp.psi(z))


def scalar_to_json(value) -> dict:
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        q = Fraction(value)
        return {"rat": f"{q.numerator}/{q.denominator}"}
    mode_of(value)
    z = complex(value)
    return {"re": z.real, "im": z.imag}


def scalar_from_json(obj, mode: FieldMode):
    """Decode a JSON scalar into ``mode``.

    Accepts ``{"rat": "p/q"}``, ``{"re": f, "im": f}``, bare numbers and
    rational strings.  ``{"re", "im"}`` objects are refused in exact mode.
    """
    if isinstance(obj, dict):
        if "rat" in obj:
            return mode.convert(Fraction(str(obj["rat"])))
        if "re" in obj:
            if mode.is_exact:
                raise ModeMismatch("float scalar given where an exact rational is required")
            return mode.convert(complex(float(obj["re"]), float(obj.get("im", 0.0))))
        raise ValueError(f"malformed scalar {obj!r}")
    if isinstance(obj, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(obj, int):
        return mode.convert(obj)
    if isinstance(obj, float):
        return mode.convert(Fraction(repr(obj)) if mode.is_exact else obj)
    if isinstance(obj, str):
        return parse_scalar(obj, mode)
    raise ValueError(f"malformed scalar {obj!r}")


def parse_scalar(text: str, mode: FieldMode):
    """Parse ``"1/3"``, ``"-0.25"`` or (float modes) ``"2+1j"``."""
    text = text.strip()
    if mode.is_exact:
        try:
            return Fraction(text)
        except ValueError:
            raise ModeMismatch(f"{text!r} is not an exact rational") from None
    return mode.convert(_parse_float_text(text))
