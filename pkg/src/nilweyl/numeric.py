"""Fixed-point reals and circle points with certified error radii.

Every real is stored as ``mantissa / 2**B`` for a process-wide precision ``B``
together with an error radius ``err`` counted in ulps (units of ``2**-B``).
The true value is only known to lie in ``[mantissa - err, mantissa + err]``
ulps, and every operation propagates that radius with interval rules.

Irrational constants are expanded once (``sqrt(k)`` via ``math.isqrt``,
decimal strings via exact rationals); everything after that is integer
arithmetic.  No irrationality or rational-independence checks are made;
hypotheses such as the independence of ``1, alpha, beta`` are the caller's.

Precision defaults to 192 bits with a 64-bit guard budget and can be set by
the ``NILWEYL_PRECISION_BITS`` environment variable or :func:`configure`,
which must be called before any value is built.
"""

import cmath
import math
import os
import re
from fractions import Fraction

import mpmath
import numpy as np

from .errors import AmbiguousBoundary, PrecisionExhausted

DEFAULT_BITS = 192
DEFAULT_GUARD = 64
ENV_BITS = "NILWEYL_PRECISION_BITS"


class _Precision:
    __slots__ = ("bits", "guard", "one", "mask")

    def __init__(self, bits, guard):
        self.set(bits, guard)

    def set(self, bits, guard):
        if bits < 128:
            raise ValueError(f"precision must be at least 128 bits, got {bits}")
        if not 0 < guard < bits:
            raise ValueError(f"guard bits must lie in (0, {bits}), got {guard}")
        self.bits = bits
        self.guard = guard
        self.one = 1 << bits
        self.mask = self.one - 1


PRECISION = _Precision(int(os.environ.get(ENV_BITS, DEFAULT_BITS)), DEFAULT_GUARD)


def configure(bits=None, guard=None):
    """Set the global precision.  Values built before the call become invalid."""
    PRECISION.set(PRECISION.bits if bits is None else int(bits),
                  PRECISION.guard if guard is None else int(guard))


def check_scale(n):
    """Raise PrecisionExhausted if ``|n|`` exceeds ``2**(B - G)``."""
    if abs(n) > 1 << (PRECISION.bits - PRECISION.guard):
        raise PrecisionExhausted(
            f"scale factor {n} exceeds 2^{PRECISION.bits - PRECISION.guard}")


def _ceil_shift(x, s):
    return -((-x) >> s)


class PreciseReal:
    """A real number ``m / 2**B`` with an error radius of ``err`` ulps."""

    __slots__ = ("m", "err")

    def __init__(self, m, err=0):
        if err < 0:
            raise ValueError("error radius must be non-negative")
        self.m = m
        self.err = err

    @classmethod
    def from_int(cls, k):
        return cls(int(k) << PRECISION.bits, 0)

    @classmethod
    def from_fraction(cls, q):
        q = Fraction(q)
        num = q.numerator << PRECISION.bits
        m, r = divmod(num, q.denominator)
        if 2 * r >= q.denominator:
            m += 1
        return cls(m, 0 if r == 0 else 1)

    @classmethod
    def sqrt(cls, k):
        """``sqrt(k)`` for a non-negative integer ``k``, correct to one ulp."""
        if k < 0:
            raise ValueError("sqrt of a negative integer")
        s = math.isqrt(k << (2 * PRECISION.bits))
        return cls(s, 0 if s * s == k << (2 * PRECISION.bits) else 1)

    # arithmetic

    def __add__(self, other):
        if isinstance(other, int):
            return PreciseReal(self.m + (other << PRECISION.bits), self.err)
        if isinstance(other, CirclePoint):
            other = other.as_real()
        return PreciseReal(self.m + other.m, self.err + other.err)

    __radd__ = __add__

    def __neg__(self):
        return PreciseReal(-self.m, self.err)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return PreciseReal(self.m * other, self.err * abs(other))
        if isinstance(other, CirclePoint):
            other = other.as_real()
        b = PRECISION.bits
        p = self.m * other.m
        m = (p + (1 << (b - 1))) >> b
        spread = abs(self.m) * other.err + abs(other.m) * self.err + self.err * other.err
        err = _ceil_shift(spread, b) + (1 if p & PRECISION.mask else 0)
        return PreciseReal(m, err)

    __rmul__ = __mul__

    # comparisons are interval-aware helpers, not operators

    def close(self, other, slack=0):
        """True if the two enclosures overlap (plus ``slack`` ulps)."""
        return abs(self.m - other.m) <= self.err + other.err + slack

    def is_exact_integer(self):
        return self.err == 0 and self.m & PRECISION.mask == 0

    def to_int(self):
        if not self.is_exact_integer():
            raise ValueError(f"{self!r} is not an exact integer")
        return self.m >> PRECISION.bits

    def to_circle(self):
        """Wrap onto the circle.  Never ambiguous: the circle has no boundary."""
        return CirclePoint(self.m & PRECISION.mask, self.err)

    def __float__(self):
        return math.ldexp(self.m, -PRECISION.bits) if abs(self.m) < 1 << 1000 \
            else float(Fraction(self.m, PRECISION.one))

    def error_bound(self):
        """Absolute error radius as a float."""
        return math.ldexp(self.err, -PRECISION.bits)

    def __eq__(self, other):
        return isinstance(other, PreciseReal) and self.m == other.m and self.err == other.err

    def __hash__(self):
        return hash((self.m, self.err))

    def __repr__(self):
        return f"PreciseReal({float(self)!r} ± {self.error_bound():.3g})"


class CirclePoint:
    """A point of ``R/Z`` stored as a mantissa in ``[0, 2**B)``."""

    __slots__ = ("m", "err")

    def __init__(self, m, err=0):
        self.m = m & PRECISION.mask
        self.err = err

    @classmethod
    def zero(cls):
        return cls(0, 0)

    def __add__(self, other):
        if isinstance(other, PreciseReal):
            return CirclePoint(self.m + other.m, self.err + other.err)
        return CirclePoint(self.m + other.m, self.err + other.err)

    __radd__ = __add__

    def __neg__(self):
        return CirclePoint(-self.m, self.err)

    def __sub__(self, other):
        return CirclePoint(self.m - other.m, self.err + other.err)

    def scale(self, n):
        return scale_mod1(n, self)

    def as_real(self):
        return PreciseReal(self.m, self.err)

    def __float__(self):
        return math.ldexp(self.m >> (PRECISION.bits - 64), -64)

    def signed_float(self):
        """Representative in ``[-1/2, 1/2)`` as a float."""
        t = float(self)
        return t - 1.0 if t >= 0.5 else t

    def distance(self, other):
        """Circular distance in ulps between the stored mantissas."""
        d = (self.m - other.m) & PRECISION.mask
        return min(d, PRECISION.one - d)

    def close(self, other, slack=0):
        return self.distance(other) <= self.err + other.err + slack

    def error_bound(self):
        return math.ldexp(self.err, -PRECISION.bits)

    def __eq__(self, other):
        return isinstance(other, CirclePoint) and self.m == other.m and self.err == other.err

    def __hash__(self):
        return hash(("circle", self.m, self.err))

    def __repr__(self):
        return f"CirclePoint({float(self)!r} ± {self.error_bound():.3g})"


class UnitComplex:
    """``e^{2 pi i x}`` with both parts as PreciseReals."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    def __mul__(self, other):
        return UnitComplex(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    def close(self, other, slack=0):
        return self.re.close(other.re, slack) and self.im.close(other.im, slack)

    def norm_defect(self):
        """``|re^2 + im^2 - 1|`` as a float."""
        n = self.re * self.re + self.im * self.im - 1
        return abs(float(n))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"UnitComplex({complex(self)!r})"


# operations


def _floor_bounds(x):
    b = PRECISION.bits
    return (x.m - x.err) >> b, (x.m + x.err) >> b


def floor_certified(x, snap=False):
    """Return ``floor(x)``, guaranteed exact for every value in the enclosure.

    Raises AmbiguousBoundary when the enclosure contains an integer other than
    its own floor, unless ``snap`` is set, in which case the value is snapped
    onto that integer.
    """
    lo, hi = _floor_bounds(x)
    if lo != hi:
        if not snap:
            raise AmbiguousBoundary(f"floor of {x!r} straddles an integer")
        return hi
    return lo


def frac(x, snap=False):
    """``x - floor(x)`` in ``[0, 1)``; the error radius is preserved."""
    lo, hi = _floor_bounds(x)
    if lo != hi:
        if not snap:
            raise AmbiguousBoundary(f"fractional part of {x!r} straddles an integer")
        return CirclePoint(0, x.err)
    return CirclePoint(x.m - (lo << PRECISION.bits), x.err)


def scale_mod1(n, x):
    """``{n x}`` by one big-integer multiply and a mask.

    The multiply adds no rounding; the radius scales to ``|n| * x.err``.
    """
    check_scale(n)
    return CirclePoint(x.m * n, x.err * abs(n))


def unit_exp(x):
    """``e^{2 pi i x}`` at full precision.

    Each part is within ``ceil(2 pi err) + 1`` ulps of the true value: the
    enclosure contributes ``2 pi err`` by the Lipschitz bound on cos and sin,
    and rounding the mpmath result contributes one ulp.
    """
    b = PRECISION.bits
    with mpmath.workprec(b + 40):
        theta = mpmath.mpf(x.m) / mpmath.mpf(2) ** b
        c = mpmath.cospi(2 * theta)
        s = mpmath.sinpi(2 * theta)
        scale = mpmath.mpf(2) ** b
        re_m = int(mpmath.nint(c * scale))
        im_m = int(mpmath.nint(s * scale))
    err = math.ceil(2 * math.pi * x.err) + 1
    return UnitComplex(PreciseReal(re_m, err), PreciseReal(im_m, err))


def unit_exp_fast(x):
    """Double-precision ``e^{2 pi i x}`` for bulk sums."""
    return cmath.exp(2j * math.pi * x.signed_float())


def phases_to_floats(points):
    """Circle points as float64 phases in ``[0, 1)``, keeping the top 62 bits."""
    shift = PRECISION.bits - 62
    ints = np.fromiter((p.m >> shift for p in points), dtype=np.int64)
    return np.ldexp(ints.astype(np.float64), -62)


def phases_to_unit(points):
    """Vectorised fast-mode ``e^{2 pi i x}`` over a sequence of circle points."""
    t = phases_to_floats(points)
    t = np.where(t >= 0.5, t - 1.0, t)
    return np.exp(2j * np.pi * t)


def csum(values):
    """Compensated sum of a complex array (exactly rounded per component)."""
    v = np.asarray(values, dtype=np.complex128)
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


# constants

_SQRT = re.compile(r"^([+-]?)\s*(?:(\d+)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)$")


def parse_constant(token):
    """Parse ``"sqrt(k)"``, ``"-2*sqrt(k)"``, decimals, or ``"p/q"``."""
    if isinstance(token, PreciseReal):
        return token
    if isinstance(token, int):
        return PreciseReal.from_int(token)
    s = str(token).strip()
    m = _SQRT.match(s)
    if m:
        value = PreciseReal.sqrt(int(m.group(3)))
        if m.group(2):
            value = value * int(m.group(2))
        return -value if m.group(1) == "-" else value
    try:
        q = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse constant {token!r}") from None
    return PreciseReal.from_fraction(q)


def parse_circle(token):
    """Parse a constant and reduce it mod 1 (never ambiguous on the circle)."""
    if isinstance(token, CirclePoint):
        return token
    return parse_constant(token).to_circle()
