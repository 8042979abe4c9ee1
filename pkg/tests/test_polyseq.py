import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilweyl import heisenberg as hz
from nilweyl import polyseq as ps
from nilweyl.errors import DimensionMismatch
from nilweyl.numeric import PRECISION, CirclePoint, PreciseReal, parse_circle, unit_exp
from nilweyl.polyseq import BracketForm, PhasePoly, QuasiEigenData, TrigPoly

from conftest import circles


def one():
    return unit_exp(CirclePoint.zero())


def test_poly_phase_examples():
    zero = PhasePoly.zero(3)
    for n in (0, 1, 17, 10 ** 6):
        assert ps.poly_phase(zero, n).close(one())
    z = ps.poly_phase(PhasePoly.of(0, "1/2"), 3)
    assert z.re.close(PreciseReal.from_int(-1)) and abs(z.im.m) <= z.im.err


def test_poly_phase_against_quad_oracle():
    P = PhasePoly.of(0, 0, "sqrt(2)")
    z = complex(ps.poly_phase(P, 10 ** 4))
    with mpmath.workprec(4 * PRECISION.bits):
        t = mpmath.sqrt(2) * 10 ** 8
        ref = complex(mpmath.expjpi(2 * (t - mpmath.floor(t))))
    assert abs(z - ref) < 1e-15
    # the phase itself, where the 1e-20 claim lives
    ph = ps.phase_value(P, 10 ** 4)
    with mpmath.workprec(4 * PRECISION.bits):
        t = mpmath.sqrt(2) * 10 ** 8
        exact = t - mpmath.floor(t)
        assert abs(mpmath.mpf(ph.m) / 2 ** PRECISION.bits - exact) < mpmath.mpf(10) ** -40


def test_bracket_examples():
    form = BracketForm.parse("phi=exp(m=1); a=[sqrt(2)]; b=[0.5]")
    assert ps.bracket_eval(form, 0) == pytest.approx(1.0)
    assert ps.bracket_eval(form, 1) == pytest.approx(1.0)
    form = BracketForm.parse("phi=trig(1:0.5, -2:0.25j); a=[sqrt(2)]; b=[0.5]")
    assert ps.bracket_eval(form, 0) == pytest.approx(0.5 + 0.25j)


def test_bracket_parse_errors():
    with pytest.raises(ValueError):
        BracketForm.parse("a=[sqrt(2)]")
    with pytest.raises(DimensionMismatch):
        BracketForm.parse("a=[sqrt(2), sqrt(5)]; b=[sqrt(3)]")
    with pytest.raises(ValueError):
        TrigPoly(((0, 1.0),))


def test_bracket_matches_omega():
    alpha, beta = PreciseReal.sqrt(2), PreciseReal.sqrt(3)
    form = BracketForm((alpha,), (beta,))
    ab = alpha * beta
    for n in range(0, 3000, 13):
        lhs = unit_exp(ps.bracket_phase(form, n)) * unit_exp(hz.omega([alpha], [beta], 0, n))
        rhs = unit_exp((ab * math.comb(n, 2)).to_circle())
        assert lhs.close(rhs, slack=64)
        q = (ab * math.comb(n, 2)).to_circle()
        assert abs(ps.bracket_eval(form, n) - complex(unit_exp(q - hz.omega([alpha], [beta], 0, n)))) < 1e-12


def test_bracket_sequence_matches_pointwise():
    form = BracketForm.parse("a=[sqrt(2), 0.3]; b=[sqrt(3), sqrt(7)]")
    w = ps.bracket_sequence(form, 200)
    assert np.allclose(w, [ps.bracket_eval(form, n) for n in range(200)], atol=1e-15)


def check_affine(P, n_max):
    A, f = ps.poly_to_affine(P)
    y = A.y0
    worst = 0
    for n in range(n_max):
        worst = max(worst, y[0].distance(ps.phase_value(P, n)))
        y = A.step(y)
    return A, worst


def test_poly_to_affine_examples():
    A, worst = check_affine(PhasePoly.of("0.3"), 50)
    assert A.dim == 1 and A.U == ((1,),) and worst == 0
    A, worst = check_affine(PhasePoly.of(0, "sqrt(2)"), 50)
    assert A.dim == 1 and A.b[0] == PreciseReal.sqrt(2).to_circle() and A.y0[0] == CirclePoint.zero()
    alpha = PreciseReal.sqrt(2).to_circle()
    A, worst = check_affine(PhasePoly((CirclePoint.zero(), CirclePoint.zero(), alpha)), 101)
    assert A.U == ((1, 1), (0, 1))
    assert A.y0 == (CirclePoint.zero(), alpha)
    assert A.b[0] == CirclePoint.zero() and A.b[1].close(alpha.scale(2))
    assert worst == 0


def test_affine_orbit_examples():
    alpha = parse_circle("sqrt(2)")
    A = ps.AffineUnipotentSystem(((1,),), (alpha,), (parse_circle("0.1"),))
    assert ps.affine_orbit(A, 0) == A.y0
    assert ps.affine_orbit(A, 37)[0].close(A.y0[0] + alpha.scale(37))
    B, _ = ps.poly_to_affine(PhasePoly.of("0.2", "sqrt(3)", "sqrt(5)", "1/7", "sqrt(11)"))
    for n in range(0, 201, 5):
        assert all(u.close(v) for u, v in zip(ps.affine_orbit(B, n), ps.affine_orbit_closed(B, n)))


def test_affine_rejects_non_unipotent():
    z = CirclePoint.zero()
    with pytest.raises(ValueError):
        ps.AffineUnipotentSystem(((2,),), (z,), (z,))
    with pytest.raises(DimensionMismatch):
        ps.AffineUnipotentSystem(((1, 1), (0, 1)), (z,), (z, z))


def cocycle_oracle(theta, fx, n):
    """Iterate ``T f_j = f_{j-1} f_j`` on phases, ``f_0`` the eigenvalue."""
    phases = list(theta[1:]) + [fx]
    for _ in range(n):
        prev = [theta[0]] + phases[:-1]
        phases = [p + q for p, q in zip(prev, phases)]
    return phases[-1]


def test_quasi_eigen_examples():
    fx = parse_circle("0.1")
    Q1 = QuasiEigenData.of("sqrt(2)")
    for n in (0, 1, 5, 1000):
        assert ps.quasi_eigen_orbit(Q1, fx, n).close(unit_exp(fx + Q1.theta[0].scale(n)))
    Q = QuasiEigenData.of("sqrt(2)", "sqrt(3)", "0.4")
    assert ps.quasi_eigen_orbit(Q, fx, 0).close(unit_exp(fx))
    for n in range(301):
        assert ps.quasi_eigen_phase(Q, n) + fx == cocycle_oracle(Q.theta, fx, n)


# properties

@given(st.lists(circles(), min_size=1, max_size=5), st.integers(0, 4), st.integers(-5, 5),
       st.integers(0, 10 ** 6))
def test_integer_shift_invariance(coeffs, j, shift, n):
    j = min(j, len(coeffs) - 1)
    P = PhasePoly(tuple(coeffs))
    real = coeffs[j].as_real() + shift
    Q = PhasePoly(tuple(real.to_circle() if i == j else c for i, c in enumerate(coeffs)))
    assert ps.phase_value(P, n) == ps.phase_value(Q, n)


@given(st.lists(circles(), min_size=1, max_size=5))
def test_poly_to_affine_contract(coeffs):
    _, worst = check_affine(PhasePoly(tuple(coeffs)), 200)
    assert worst == 0


@given(st.lists(circles(), min_size=2, max_size=4), st.integers(0, 400))
def test_quasi_eigen_recursion(theta, n):
    Q = QuasiEigenData(tuple(theta))
    lower = QuasiEigenData(tuple(theta[:-1]))
    step = ps.quasi_eigen_phase(lower, n) + theta[-1]
    assert ps.quasi_eigen_phase(Q, n + 1) == ps.quasi_eigen_phase(Q, n) + step
