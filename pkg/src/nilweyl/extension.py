"""Abelian tower extensions ``S(x, z_1..z_p) = (Tx, gamma(x) z_1, z_1 z_2, ..., z_{p-1} z_p)``.

Fibre coordinates are stored as phases, so multiplication on the circle is
addition mod 1.  The cocycle is ``gamma = lambda * gamma~`` where ``gamma~`` is
an eigenfunction of the base with eigenvalue ``e^{2 pi i xi}``, i.e.
``arg gamma~(Tx) = arg gamma~(x) + xi``.

``lambda`` must avoid a countable bad set that no finite computation can
identify; :func:`choose_lambda` draws it from a seeded generator instead and
:func:`avoids_rationals` offers a partial check against low-height rationals.
"""

import hashlib
from dataclasses import dataclass, replace
from math import comb
from typing import Callable

import numpy as np

from . import heisenberg
from .numeric import PRECISION, CirclePoint, check_scale, parse_circle


@dataclass(frozen=True)
class BaseSystem:
    """A base ``(X, T)`` with an explicit continuous eigenfunction.

    ``step(x)`` is ``Tx``; ``orbit(x, n)`` is ``T^n x`` (closed form where one
    exists); ``eigen_phase(x)`` is ``arg gamma~(x)``; ``xi`` the eigenvalue phase.
    """

    step: Callable
    orbit: Callable
    eigen_phase: Callable
    xi: CirclePoint
    name: str = "base"


def rotation_base(xi):
    """Circle rotation ``x -> x + xi`` with eigenfunction ``x -> e^{2 pi i x}``."""
    xi = parse_circle(xi)
    return BaseSystem(step=lambda x: x + xi,
                      orbit=lambda x, n: x + xi.scale(n),
                      eigen_phase=lambda x: x,
                      xi=xi, name="rotation")


def heisenberg_base(g):
    """Nilrotation ``T_g`` on ``H / Gamma`` with eigenfunction ``e^{2 pi i x_1}``."""
    return BaseSystem(step=lambda x: heisenberg.translate(g, x),
                      orbit=lambda x, n: heisenberg.orbit_point(g, x, n),
                      eigen_phase=lambda x: x.coords[0],
                      xi=g.a.to_circle(), name="heisenberg")


@dataclass(frozen=True)
class ExtensionState:
    x: object
    z: tuple

    def __post_init__(self):
        if not self.z:
            raise ValueError("an extension needs p >= 1 fibre coordinates")

    @property
    def p(self):
        return len(self.z)

    def close(self, other, slack=0):
        return self.x.close(other.x, slack) and all(u.close(v, slack) for u, v in zip(self.z, other.z))


@dataclass(frozen=True)
class TowerExtension:
    base: BaseSystem
    lam: CirclePoint

    def gamma_phase(self, x):
        return self.lam + self.base.eigen_phase(x)

    def step(self, s):
        """One application of S."""
        z = s.z
        new = [z[0] + self.gamma_phase(s.x)]
        new.extend(z[j - 1] + z[j] for j in range(1, len(z)))
        return ExtensionState(self.base.step(s.x), tuple(new))

    def power(self, s, n):
        """``S^n`` in one shot.

        The phase of ``Z_j`` (1-based) is
        ``C(n, j+1) xi + C(n, j) arg gamma(x) + sum_{i<j} C(n, j-i) z_i + z_j``,
        with ``C(n, k) = 0`` for ``k > n``.
        """
        if n < 0:
            raise ValueError("negative exponent")
        g = self.gamma_phase(s.x)
        out = []
        for j in range(1, s.p + 1):
            acc = self.base.xi.scale(_c(n, j + 1)) + g.scale(_c(n, j)) + s.z[j - 1]
            for i in range(1, j):
                acc = acc + s.z[i - 1].scale(_c(n, j - i))
            out.append(acc)
        return ExtensionState(self.base.orbit(s.x, n), tuple(out))

    def orbit(self, s, N):
        return [self.power(s, n) for n in range(N)]

    def observe(self, s, F, N):
        """``F(S^n s)`` for ``n < N`` as a complex array."""
        return np.array([F(self.power(s, n)) for n in range(N)], dtype=np.complex128)


def _c(n, k):
    c = comb(n, k)
    check_scale(c)
    return c


def power_closed_form(ext, s, n):
    return ext.power(s, n)


def step(ext, s):
    return ext.step(s)


def observe(ext, s, F, N):
    return ext.observe(s, F, N)


def exponent_table(n, p):
    """Integer exponents of ``(xi, gamma(x), z_1..z_p)`` in each ``Z_j`` of ``S^n``.

    Row ``j-1`` is ``[C(n,j+1), C(n,j), C(n,j-1), ..., C(n,1), 1, 0, ...]``.
    """
    rows = []
    for j in range(1, p + 1):
        row = [comb(n, j + 1), comb(n, j)]
        row += [comb(n, j - i) for i in range(1, j)] + [1] + [0] * (p - j)
        rows.append(row)
    return rows


def iterate_exponents(n, p):
    """The same table by symbolic iteration of S over exact integer vectors.

    At step ``t`` the cocycle contributes ``gamma(T^t x) = xi^t gamma(x)``.
    """
    width = p + 2
    state = []
    for j in range(p):
        v = [0] * width
        v[2 + j] = 1
        state.append(v)
    for t in range(n):
        new = [list(state[0])]
        new[0][0] += t
        new[0][1] += 1
        for j in range(1, p):
            new.append([a + b for a, b in zip(state[j - 1], state[j])])
        state = new
    return state


def choose_lambda(seed):
    """A reproducible pseudo-random phase with B bits, derived by SHA-256."""
    bits = PRECISION.bits
    out = b""
    counter = 0
    while len(out) * 8 < bits:
        out += hashlib.sha256(f"nilweyl-lambda:{seed}:{counter}".encode()).digest()
        counter += 1
    return CirclePoint(int.from_bytes(out, "big") >> (len(out) * 8 - bits), 0)


def avoids_rationals(lam, max_denominator, relative_to=()):
    """True if ``lam`` stays away from every ``p/q + r`` with ``q <= max_denominator``.

    ``relative_to`` lists extra phases ``r`` (e.g. the eigenvalue ``xi``) whose
    rational shifts are also excluded.  Distances are certified against the
    combined error radius.
    """
    shifts = [CirclePoint.zero()] + [parse_circle(r) for r in relative_to]
    one = PRECISION.one
    for r in shifts:
        for q in range(1, max_denominator + 1):
            for p in range(q):
                target = r + CirclePoint((p * one) // q, 1)
                if lam.close(target):
                    return False
    return True


def last_fiber_observable(f=None):
    """``F(x, z) = f(x) e^{2 pi i z_p}``; ``f`` defaults to 1."""
    def F(s):
        z = np.exp(2j * np.pi * float(s.z[-1]))
        return z if f is None else f(s.x) * z
    return F


def with_z(s, z):
    return replace(s, z=tuple(parse_circle(v) for v in z))
