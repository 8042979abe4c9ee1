"""Heisenberg groups H and H_m, their lattice quotients, and orbit formulas.

Elements are written in first-kind coordinates ``<a, b, c>`` with product

    <a, b, c><x, y, z> = <a + x, b + y, c + z + B(a, y)>,    B(a, y) = sum a_i y_i,

so H is the case m = 1.  The lattice is the set of integer points, and the
unit cube is the fundamental domain; :func:`reduce_fundamental` returns both
the representative and the lattice element that moves a point onto it.

Powers and orbits use closed forms (one big-integer evaluation per n); the
iterated products exist only as test oracles.  Negative exponents are
rejected, use ``power(inverse(g), n)`` instead.

Mal'cev coordinates of the second kind ``<t1, t2, t3>_II`` (the factorisation
``e1^t1 e2^t2 e3^t3``) relate to first-kind ones by ``c = t3 + t1 t2``.
"""

from dataclasses import dataclass
from math import comb

from .errors import DimensionMismatch
from .numeric import (CirclePoint, PreciseReal, check_scale, floor_certified,
                      parse_constant)

FIRST_KIND = "first"
MALCEV2 = "malcev2"


def _real(v):
    return v if isinstance(v, PreciseReal) else parse_constant(v)


def _check_n(n):
    if n < 0:
        raise ValueError(f"negative exponent {n} (use the inverse element)")
    check_scale(n)
    check_scale(comb(n, 2))


@dataclass(frozen=True)
class HeisenbergElement:
    a: PreciseReal
    b: PreciseReal
    c: PreciseReal

    @classmethod
    def of(cls, a, b, c):
        return cls(_real(a), _real(b), _real(c))

    @classmethod
    def identity(cls):
        return cls.of(0, 0, 0)

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, n):
        return power(self, n)

    def close(self, other, slack=0):
        return (self.a.close(other.a, slack) and self.b.close(other.b, slack)
                and self.c.close(other.c, slack))

    def coords(self):
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class HeisenbergMElement:
    a: tuple
    b: tuple
    c: PreciseReal

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise DimensionMismatch(f"a has {len(self.a)} entries, b has {len(self.b)}")

    @classmethod
    def of(cls, a, b, c):
        return cls(tuple(_real(v) for v in a), tuple(_real(v) for v in b), _real(c))

    @classmethod
    def identity(cls, m):
        return cls.of([0] * m, [0] * m, 0)

    @property
    def m(self):
        return len(self.a)

    def __mul__(self, other):
        return multiply_m(self, other)

    def __pow__(self, n):
        return power(self, n)

    def close(self, other, slack=0):
        return all(u.close(v, slack) for u, v in zip(self.coords(), other.coords()))

    def coords(self):
        return self.a + self.b + (self.c,)


@dataclass(frozen=True)
class MalcevIIElement:
    t1: PreciseReal
    t2: PreciseReal
    t3: PreciseReal

    @classmethod
    def of(cls, t1, t2, t3):
        return cls(_real(t1), _real(t2), _real(t3))

    @classmethod
    def identity(cls):
        return cls.of(0, 0, 0)

    def __mul__(self, other):
        return malcev2_multiply(self, other)

    def __pow__(self, n):
        return power(self, n)

    def close(self, other, slack=0):
        return (self.t1.close(other.t1, slack) and self.t2.close(other.t2, slack)
                and self.t3.close(other.t3, slack))

    def coords(self):
        return (self.t1, self.t2, self.t3)


@dataclass(frozen=True)
class FundamentalPoint:
    """Representative of a point of the nilmanifold in the unit cube."""

    coords: tuple
    convention: str = FIRST_KIND

    @classmethod
    def origin(cls, dim=3, convention=FIRST_KIND):
        return cls(tuple(CirclePoint.zero() for _ in range(dim)), convention)

    def lift(self):
        """The representative as a group element with coordinates in [0, 1)."""
        reals = [c.as_real() for c in self.coords]
        if self.convention == MALCEV2:
            return MalcevIIElement(*reals)
        if len(reals) == 3:
            return HeisenbergElement(*reals)
        m = (len(reals) - 1) // 2
        return HeisenbergMElement(tuple(reals[:m]), tuple(reals[m:2 * m]), reals[-1])

    def close(self, other, slack=0):
        return (self.convention == other.convention
                and len(self.coords) == len(other.coords)
                and all(u.close(v, slack) for u, v in zip(self.coords, other.coords)))

    def floats(self):
        return [float(c) for c in self.coords]


def bilinear(a, y):
    """``B(a, y) = sum a_i y_i``."""
    if len(a) != len(y):
        raise DimensionMismatch(f"bilinear form of vectors of length {len(a)} and {len(y)}")
    total = PreciseReal(0, 0)
    for u, v in zip(a, y):
        total = total + _real(u) * (v if isinstance(v, int) else _real(v))
    return total


def multiply(g, h):
    return HeisenbergElement(g.a + h.a, g.b + h.b, g.c + h.c + g.a * h.b)


def multiply_m(g, h):
    if g.m != h.m:
        raise DimensionMismatch(f"H_{g.m} times H_{h.m}")
    return HeisenbergMElement(tuple(u + v for u, v in zip(g.a, h.a)),
                              tuple(u + v for u, v in zip(g.b, h.b)),
                              g.c + h.c + bilinear(g.a, h.b))


def malcev2_multiply(p, q):
    return MalcevIIElement(p.t1 + q.t1, p.t2 + q.t2, p.t3 + q.t3 - p.t2 * q.t1)


def inverse(g):
    if isinstance(g, HeisenbergElement):
        return HeisenbergElement(-g.a, -g.b, g.a * g.b - g.c)
    if isinstance(g, HeisenbergMElement):
        return HeisenbergMElement(tuple(-u for u in g.a), tuple(-v for v in g.b),
                                  bilinear(g.a, g.b) - g.c)
    if isinstance(g, MalcevIIElement):
        return MalcevIIElement(-g.t1, -g.t2, -g.t3 - g.t2 * g.t1)
    raise TypeError(type(g).__name__)


def power(g, n):
    """Closed-form ``g^n`` for ``n >= 0``; C(n, 2) is an exact integer."""
    _check_n(n)
    c2 = comb(n, 2)
    if isinstance(g, HeisenbergElement):
        return HeisenbergElement(g.a * n, g.b * n, g.c * n + (g.a * g.b) * c2)
    if isinstance(g, HeisenbergMElement):
        return HeisenbergMElement(tuple(u * n for u in g.a), tuple(v * n for v in g.b),
                                  g.c * n + bilinear(g.a, g.b) * c2)
    if isinstance(g, MalcevIIElement):
        return MalcevIIElement(g.t1 * n, g.t2 * n, g.t3 * n - (g.t1 * g.t2) * c2)
    raise TypeError(type(g).__name__)


def malcev2_to_first(p):
    """``<t1, t2, t3>_II = <t1, t2, t3 + t1 t2>``."""
    return HeisenbergElement(p.t1, p.t2, p.t3 + p.t1 * p.t2)


def first_to_malcev2(g):
    """``<a, b, c> = <a, b, c - a b>_II``."""
    return MalcevIIElement(g.a, g.b, g.c - g.a * g.b)


def _int_real(k):
    return PreciseReal.from_int(k)


def reduce_fundamental(x, snap=False):
    """Map ``x`` to its representative in the unit cube.

    Returns ``(tau, gamma)`` with ``x * gamma == tau`` and ``gamma`` a lattice
    element (exact integer coordinates).  In first-kind coordinates the
    representative is ``<{x1}, {x2}, {x3 - x1 [x2]}>``; for Mal'cev-II it is
    ``<{x1}, {x2}, {x3 + [x1] x2}>_II``.  Every floor is certified, so
    AmbiguousBoundary is raised if any of them straddles an integer.
    """
    if isinstance(x, HeisenbergElement):
        f1 = floor_certified(x.a, snap)
        f2 = floor_certified(x.b, snap)
        t = x.c - x.a * f2
        f3 = floor_certified(t, snap)
        gamma = HeisenbergElement(_int_real(-f1), _int_real(-f2), _int_real(-f3))
        tau = (x.a - f1, x.b - f2, t - f3)
        return FundamentalPoint(tuple(r.to_circle() for r in tau), FIRST_KIND), gamma
    if isinstance(x, HeisenbergMElement):
        f1 = [floor_certified(u, snap) for u in x.a]
        f2 = [floor_certified(v, snap) for v in x.b]
        t = x.c - bilinear(x.a, f2)
        f3 = floor_certified(t, snap)
        gamma = HeisenbergMElement(tuple(_int_real(-k) for k in f1),
                                   tuple(_int_real(-k) for k in f2), _int_real(-f3))
        tau = [u - k for u, k in zip(x.a, f1)] + [v - k for v, k in zip(x.b, f2)] + [t - f3]
        return FundamentalPoint(tuple(r.to_circle() for r in tau), FIRST_KIND), gamma
    if isinstance(x, MalcevIIElement):
        f1 = floor_certified(x.t1, snap)
        f2 = floor_certified(x.t2, snap)
        t = x.t3 + x.t2 * f1
        f3 = floor_certified(t, snap)
        gamma = MalcevIIElement(_int_real(-f1), _int_real(-f2), _int_real(-f3))
        tau = (x.t1 - f1, x.t2 - f2, t - f3)
        return FundamentalPoint(tuple(r.to_circle() for r in tau), MALCEV2), gamma
    raise TypeError(type(x).__name__)


def translate(g, x):
    """One step ``T_g x`` on the quotient, by multiplication and reduction."""
    return reduce_fundamental(g * x.lift())[0]


def orbit_point(g, x, n):
    """``T_g^n x`` in the fundamental domain, by the closed form.

    For H:  ``<n a1 + x1, n a2 + x2, n a3 + x3 + C(n,2) a1 a2 + n a1 x2
    - (n a1 + x1)[n a2 + x2]>`` mod 1, and the analogous bilinear expression
    for H_m.  Only the bracket needs a certified floor.
    """
    _check_n(n)
    c2 = comb(n, 2)
    if isinstance(g, HeisenbergElement):
        if x.convention != FIRST_KIND:
            raise ValueError("orbit_point expects a first-kind point")
        x1, x2, x3 = (c.as_real() for c in x.coords)
        u = g.a * n + x1
        v = g.b * n + x2
        f = floor_certified(v)
        w = g.c * n + x3 + (g.a * g.b) * c2 + (g.a * x2) * n - u * f
        return FundamentalPoint((u.to_circle(), v.to_circle(), w.to_circle()), FIRST_KIND)
    if isinstance(g, HeisenbergMElement):
        m = g.m
        if len(x.coords) != 2 * m + 1:
            raise DimensionMismatch(f"point of dimension {len(x.coords)} for H_{m}")
        xs = [c.as_real() for c in x.coords]
        xa, xb, xc = xs[:m], xs[m:2 * m], xs[-1]
        u = [a * n + p for a, p in zip(g.a, xa)]
        v = [b * n + q for b, q in zip(g.b, xb)]
        f = [floor_certified(q) for q in v]
        w = g.c * n + xc + bilinear(g.a, g.b) * c2 + bilinear(g.a, xb) * n - bilinear(u, f)
        coords = [r.to_circle() for r in u] + [r.to_circle() for r in v] + [w.to_circle()]
        return FundamentalPoint(tuple(coords), FIRST_KIND)
    if isinstance(g, MalcevIIElement):
        return orbit_point_malcev2(g, x, n)
    raise TypeError(type(g).__name__)


def orbit_point_malcev2(g, x, n):
    """``T_g^n x`` in Mal'cev-II coordinates.

    ``g^n x = <n a1 + x1, n a2 + x2, n a3 + x3 - C(n,2) a1 a2 - n a2 x1>_II``
    followed by the reduction ``t3 -> {t3 + [t1] t2}``.
    """
    _check_n(n)
    if x.convention != MALCEV2:
        raise ValueError("orbit_point_malcev2 expects a Mal'cev-II point")
    x1, x2, x3 = (c.as_real() for c in x.coords)
    u = g.t1 * n + x1
    v = g.t2 * n + x2
    f = floor_certified(u)
    w = g.t3 * n + x3 - (g.t1 * g.t2) * comb(n, 2) - (g.t2 * x1) * n + v * f
    return FundamentalPoint((u.to_circle(), v.to_circle(), w.to_circle()), MALCEV2)


def orbit_origin_malcev2(g, n):
    """``T_g^n 0 = <n a1, n a2, n a3 - C(n,2) a1 a2 + [n a1] n a2>_II`` mod 1."""
    return orbit_point_malcev2(g, FundamentalPoint.origin(3, MALCEV2), n)


def omega(alpha, beta, gamma, n):
    """``omega_n = n gamma + C(n,2) B(alpha, beta) - B(n alpha, [n beta])`` mod 1.

    ``alpha`` and ``beta`` are equal-length sequences; each product
    ``(n alpha_i)[n beta_i]`` is formed as ``alpha_i * (n [n beta_i])`` so that
    only one exact integer multiply touches the irrational.
    """
    _check_n(n)
    alpha = [_real(v) for v in alpha]
    beta = [_real(v) for v in beta]
    if len(alpha) != len(beta):
        raise DimensionMismatch(f"alpha has {len(alpha)} entries, beta has {len(beta)}")
    total = _real(gamma) * n + bilinear(alpha, beta) * comb(n, 2)
    for a, b in zip(alpha, beta):
        k = n * floor_certified(b * n)
        check_scale(k)
        total = total - a * k
    return total.to_circle()
