"""Sequence families: polynomial phases, bracket polynomials, affine unipotent
realisations of polynomial phases, and quasi-eigenfunction orbits.

Polynomial coefficients are stored mod 1.  For integer arguments this is
lossless, since ``e^{2 pi i P(n)}`` does not see integer shifts of any
coefficient; it is also what turns the sup over all real polynomials into a
sup over a compact coefficient torus.
"""

import re
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DimensionMismatch
from .numeric import (CirclePoint, PreciseReal, check_scale, floor_certified,
                      parse_circle, parse_constant, phases_to_unit, unit_exp)


@dataclass(frozen=True)
class PhasePoly:
    """``P(t) = sum_j c_j t^j`` with every ``c_j`` stored mod 1."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a phase polynomial needs at least one coefficient")

    @classmethod
    def of(cls, *coeffs):
        return cls(tuple(parse_circle(c) for c in coeffs))

    @classmethod
    def zero(cls, degree=0):
        return cls(tuple(CirclePoint.zero() for _ in range(degree + 1)))

    @classmethod
    def parse(cls, text):
        """Comma-separated coefficients, constant term first."""
        return cls.of(*[t for t in text.split(",") if t.strip()])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __neg__(self):
        return PhasePoly(tuple(-c for c in self.coeffs))

    def floats(self):
        return [float(c) for c in self.coeffs]


def phase_value(P, n):
    """``P(n)`` mod 1, each term by one exact multiply by ``n^j``."""
    if n < 0:
        raise ValueError("negative index")
    total = CirclePoint.zero()
    nj = 1
    for c in P.coeffs:
        check_scale(nj)
        total = total + c.scale(nj)
        nj *= n
    return total


def poly_phase(P, n):
    """``e^{2 pi i P(n)}`` at full precision."""
    return unit_exp(phase_value(P, n))


def phase_sequence(P, N):
    """Circle points ``P(0), ..., P(N-1)``."""
    return [phase_value(P, n) for n in range(N)]


def poly_phase_sequence(P, N):
    """Fast-mode complex array of ``e^{2 pi i P(n)}``, ``n < N``."""
    return phases_to_unit(phase_sequence(P, N))


# bracket forms

@dataclass(frozen=True)
class TrigPoly:
    """``phi(x) = sum_k a_k e^{2 pi i k x}`` over nonzero frequencies ``k``."""

    terms: tuple  # ((k, a_k), ...)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty trigonometric polynomial")
        for k, _ in self.terms:
            if k == 0:
                raise ValueError("phi must have zero mean: frequency 0 is not allowed")

    @classmethod
    def character(cls, m=1):
        return cls(((int(m), 1.0 + 0j),))

    def __call__(self, x):
        """Evaluate at a circle point (fast mode)."""
        return sum(a * complex(np.exp(2j * np.pi * float(x.scale(k)))) for k, a in self.terms)

    def evaluate_phases(self, points):
        out = np.zeros(len(points), dtype=np.complex128)
        for k, a in self.terms:
            out += a * phases_to_unit([p.scale(k) for p in points])
        return out


@dataclass(frozen=True)
class BracketForm:
    """``n -> phi(n a_1 [n b_1] + ... + n a_m [n b_m])``."""

    alpha: tuple
    beta: tuple
    phi: TrigPoly = field(default_factory=TrigPoly.character)

    def __post_init__(self):
        if len(self.alpha) != len(self.beta):
            raise DimensionMismatch(f"{len(self.alpha)} alphas, {len(self.beta)} betas")
        if not self.alpha:
            raise ValueError("bracket form needs m >= 1")

    @classmethod
    def of(cls, alpha, beta, phi=None):
        return cls(tuple(parse_constant(a) for a in alpha),
                   tuple(parse_constant(b) for b in beta),
                   phi if phi is not None else TrigPoly.character())

    @property
    def m(self):
        return len(self.alpha)

    @classmethod
    def parse(cls, text):
        """Parse ``"phi=exp(m=1); a=[sqrt(2)]; b=[sqrt(3)]"``.

        ``phi`` may also be ``trig(k:coef, k:coef, ...)`` with complex
        coefficients in Python syntax, e.g. ``trig(1:0.5, -2:0.25j)``.
        """
        fields = {}
        for part in text.split(";"):
            if not part.strip():
                continue
            key, _, value = part.partition("=")
            fields[key.strip()] = value.strip()
        try:
            alpha = _parse_list(fields["a"])
            beta = _parse_list(fields["b"])
        except KeyError as exc:
            raise ValueError(f"bracket form is missing {exc.args[0]!r}") from None
        phi = _parse_phi(fields.get("phi", "exp(m=1)"))
        return cls.of(alpha, beta, phi)


def _parse_list(text):
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        text = text[1:-1]
    return [t.strip() for t in text.split(",") if t.strip()]


_EXP = re.compile(r"^exp\(\s*(?:m\s*=\s*)?([+-]?\d+)\s*\)$")
_TRIG = re.compile(r"^trig\((.*)\)$")


def _parse_phi(text):
    m = _EXP.match(text)
    if m:
        return TrigPoly.character(int(m.group(1)))
    m = _TRIG.match(text)
    if m:
        terms = []
        for item in m.group(1).split(","):
            k, _, a = item.partition(":")
            terms.append((int(k), complex(a.strip())))
        return TrigPoly(tuple(terms))
    raise ValueError(f"cannot parse phi {text!r}")


def bracket_phase(form, n):
    """``sum_i n a_i [n b_i]`` mod 1; only the floors need certifying."""
    if n < 0:
        raise ValueError("negative index")
    total = CirclePoint.zero()
    for a, b in zip(form.alpha, form.beta):
        k = n * floor_certified(b * n)
        check_scale(k)
        total = total + (a * k).to_circle()
    return total


def bracket_eval(form, n):
    return form.phi(bracket_phase(form, n))


def bracket_sequence(form, N):
    return form.phi.evaluate_phases([bracket_phase(form, n) for n in range(N)])


# affine unipotent systems

def _matmul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B)))
                       for j in range(len(B[0]))) for i in range(len(A)))


def _identity(d):
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def _matpow(A, n):
    result = _identity(len(A))
    base = A
    while n:
        if n & 1:
            result = _matmul(result, base)
        base = _matmul(base, base)
        n >>= 1
    return result


def _apply(U, y):
    out = []
    for row in U:
        acc = CirclePoint.zero()
        for u, v in zip(row, y):
            if u:
                acc = acc + v.scale(u)
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class AffineUnipotentSystem:
    """``S y = U y + b`` on the torus, ``U`` an integer unipotent matrix."""

    U: tuple
    b: tuple
    y0: tuple

    def __post_init__(self):
        d = len(self.U)
        if any(len(row) != d for row in self.U) or len(self.b) != d or len(self.y0) != d:
            raise DimensionMismatch("U, b and y0 must share one dimension")
        nil = tuple(tuple(self.U[i][j] - int(i == j) for j in range(d)) for i in range(d))
        if any(any(v for v in row) for row in _matpow(nil, d)):
            raise ValueError("U - I is not nilpotent")

    @property
    def dim(self):
        return len(self.U)

    def step(self, y):
        return tuple(u + c for u, c in zip(_apply(self.U, y), self.b))


def affine_orbit(A, n):
    """``S^n y0`` by ``n`` applications of the step (exact on phases)."""
    if n < 0:
        raise ValueError("negative index")
    y = A.y0
    for _ in range(n):
        y = A.step(y)
    return y


def affine_orbit_closed(A, n):
    """``S^n y0 = U^n y0 + (sum_{j<n} U^j) b`` with exact integer matrices.

    With ``U = I + N`` and ``N`` nilpotent, ``sum_{j<n} U^j = sum_k C(n, k+1) N^k``.
    """
    if n < 0:
        raise ValueError("negative index")
    d = A.dim
    nil = tuple(tuple(A.U[i][j] - int(i == j) for j in range(d)) for i in range(d))
    geo = [[0] * d for _ in range(d)]
    nk = _identity(d)
    for k in range(d):
        ck = comb(n, k + 1)
        for i in range(d):
            for j in range(d):
                geo[i][j] += ck * nk[i][j]
        nk = _matmul(nk, nil)
    first = _apply(_matpow(A.U, n), A.y0)
    second = _apply(tuple(tuple(r) for r in geo), A.b)
    return tuple(u + v for u, v in zip(first, second))


def poly_to_affine(P):
    """Realise ``e^{2 pi i P(n)}`` as ``f(S^n y0)`` on a torus.

    The state is the finite-difference vector ``(P, dP, ..., d^{k-1} P)`` with
    ``k = max(deg P, 1)``; the top difference ``d^k P`` is constant and enters
    as the translation.  The observable reads the first coordinate.
    """
    d = P.degree
    k = max(d, 1)
    values = [phase_value(P, i) for i in range(k + 1)]
    diffs = []
    for order in range(k + 1):
        acc = CirclePoint.zero()
        for i in range(order + 1):
            acc = acc + values[i].scale((-1) ** (order - i) * comb(order, i))
        diffs.append(acc)
    U = tuple(tuple(int(j == i or j == i + 1) for j in range(k)) for i in range(k))
    b = tuple(CirclePoint.zero() for _ in range(k - 1)) + (diffs[k],)
    system = AffineUnipotentSystem(U, b, tuple(diffs[:k]))
    return system, first_coordinate_observable


def first_coordinate_observable(y):
    """``f(y) = e^{2 pi i y_1}`` at full precision."""
    return unit_exp(y[0])


# quasi-eigenfunctions

@dataclass(frozen=True)
class QuasiEigenData:
    """Phases ``theta_0`` (eigenvalue argument) through ``theta_{k-1}``."""

    theta: tuple

    def __post_init__(self):
        if not self.theta:
            raise ValueError("order k must be at least 1")

    @classmethod
    def of(cls, *theta):
        return cls(tuple(parse_circle(t) for t in theta))

    @property
    def k(self):
        return len(self.theta)


def quasi_eigen_phase(Q, n):
    """``p_x(n) = sum_j theta_j C(n, k - j)`` mod 1."""
    if n < 0:
        raise ValueError("negative index")
    total = CirclePoint.zero()
    for j, t in enumerate(Q.theta):
        c = comb(n, Q.k - j)
        check_scale(c)
        total = total + t.scale(c)
    return total


def quasi_eigen_orbit(Q, f_x, n):
    """``f(T^n x) = f(x) e^{2 pi i p_x(n)}``; ``f_x`` is the phase of ``f(x)``."""
    return unit_exp(f_x + quasi_eigen_phase(Q, n))
