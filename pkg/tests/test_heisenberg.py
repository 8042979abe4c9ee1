import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilweyl import heisenberg as hz
from nilweyl.errors import DimensionMismatch
from nilweyl.heisenberg import (FundamentalPoint, HeisenbergElement as E,
                                HeisenbergMElement as EM, MalcevIIElement as M2)
from nilweyl.numeric import PRECISION, CirclePoint, PreciseReal, parse_circle

from conftest import random_real, reals

elements = st.builds(E, reals(), reals(), reals())
malcev = st.builds(M2, reals(), reals(), reals())


def rand_m(rng, m, bound=4):
    return EM(tuple(random_real(rng, bound) for _ in range(m)),
              tuple(random_real(rng, bound) for _ in range(m)), random_real(rng, bound))


def in_unit_cube(p):
    return all(0 <= c.m < PRECISION.one for c in p.coords)


def as_m(g):
    return EM((g.a,), (g.b,), g.c)


def iterate(g, n, identity):
    acc = identity
    for _ in range(n):
        acc = acc * g
    return acc


def test_multiply_examples():
    x = E.of("0.1", "sqrt(2)", "-3")
    assert (E.identity() * x).close(x)
    assert (E.of(1, 2, 3) * E.of(4, 5, 6)).close(E.of(5, 7, 14))


def test_inverse_by_linear_solve():
    # <a,b,c><x,y,z> = e  =>  x = -a, y = -b, z = -c - a y
    g = E.of("sqrt(2)", "sqrt(3)", "0.7")
    x, y = -g.a, -g.b
    z = -g.c - g.a * y
    assert hz.inverse(g).close(E(x, y, z))
    assert (g * hz.inverse(g)).close(E.identity())


def test_multiply_m_examples():
    h = EM.of(["sqrt(2)", "0.5"], ["1/3", "sqrt(7)"], "0.2")
    assert (EM.identity(2) * h).close(h)
    assert (EM.of([1, 0], [0, 1], 0) * EM.of([0, 1], [1, 0], 0)).close(EM.of([1, 1], [1, 1], 1))
    with pytest.raises(DimensionMismatch):
        EM.identity(2) * EM.identity(3)


def test_bilinear_examples():
    assert hz.bilinear([0, 0], ["sqrt(2)", 3]).close(PreciseReal(0))
    assert hz.bilinear([1, 2], [3, 4]).close(PreciseReal.from_int(11))
    a, y = ["sqrt(2)", "0.3"], ["sqrt(5)", "-7"]
    assert hz.bilinear(a, y).close(hz.bilinear(y, a))
    with pytest.raises(DimensionMismatch):
        hz.bilinear([1], [1, 2])


def test_power_examples(rng):
    g = E.of("sqrt(2)", "sqrt(3)", "sqrt(5)")
    assert hz.power(g, 0).close(E.identity())
    assert hz.power(g, 2).close(E(g.a * 2, g.b * 2, g.c * 2 + g.a * g.b))
    for _ in range(10):
        h = E(random_real(rng), random_real(rng), random_real(rng))
        assert hz.power(h, 7).close(iterate(h, 7, E.identity()))
    with pytest.raises(ValueError):
        hz.power(g, -1)


def test_reduce_examples():
    x = E.of("0.25", "0.5", "0.75")
    tau, gamma = hz.reduce_fundamental(x)
    assert tau.lift().close(x) and gamma.close(E.identity())
    tau, gamma = hz.reduce_fundamental(E.of("1.5", "2.25", "0.3"))
    assert tau.close(FundamentalPoint(tuple(parse_circle(v) for v in ("0.5", "0.25", "0.3"))))
    assert gamma.close(E.of(-1, -2, 3))


def test_malcev2_examples():
    q = M2.of("0.3", "sqrt(2)", "-1")
    assert (M2.identity() * q).close(q)
    assert (M2.of(1, 2, 3) * M2.of(4, 5, 6)).close(M2.of(5, 7, 1))
    assert hz.malcev2_to_first(M2.identity()).close(E.identity())
    assert hz.malcev2_to_first(M2.of(1, 2, 3)).close(E.of(1, 2, 5))


def test_orbit_point_examples(rng):
    x = FundamentalPoint(tuple(parse_circle(v) for v in ("0.1", "0.6", "0.9")))
    g = E.of("0.3", "0.4", "0.7")
    assert hz.orbit_point(g, x, 0).close(x)
    origin = FundamentalPoint.origin()
    assert hz.orbit_point(g, origin, 1).close(
        FundamentalPoint(tuple(parse_circle(v) for v in ("0.3", "0.4", "0.7"))))
    g = E.of("sqrt(2)", "sqrt(3)", "sqrt(5)")
    for n in range(0, 501, 7):
        expected, _ = hz.reduce_fundamental(hz.power(g, n) * x.lift())
        assert hz.orbit_point(g, x, n).close(expected)


def test_orbit_origin_malcev2_examples():
    g = M2.of("0.3", "0.4", "0.7")
    assert hz.orbit_origin_malcev2(g, 0).close(FundamentalPoint.origin(3, hz.MALCEV2))
    assert hz.orbit_origin_malcev2(g, 1).close(
        FundamentalPoint(tuple(parse_circle(v) for v in ("0.3", "0.4", "0.7")), hz.MALCEV2))
    g = M2.of("sqrt(2)", "sqrt(3)", "sqrt(7)")
    p = FundamentalPoint.origin(3, hz.MALCEV2)
    for n in range(1, 501):
        p = hz.translate(g, p)
        if n % 10 == 0:
            assert hz.orbit_origin_malcev2(g, n).close(p)


def test_orbit_origin_malcev2_sign_of_bracket_term():
    # T_g 0 = tau(g); for a1 = sqrt(2) the bracket [a1] = 1 contributes +a2
    g = M2.of("sqrt(2)", "sqrt(3)", "0")
    p = hz.orbit_origin_malcev2(g, 1)
    assert p.coords[2].close(PreciseReal.sqrt(3).to_circle())


def test_omega_examples():
    alpha, beta = ["sqrt(2)", "sqrt(3)"], ["0.25", "0.5"]
    assert hz.omega(alpha, beta, "sqrt(5)", 0) == CirclePoint.zero()
    assert hz.omega(alpha, beta, "sqrt(5)", 1).close(PreciseReal.sqrt(5).to_circle())
    alpha, beta = ["sqrt(2)", "sqrt(11)"], ["sqrt(3)", "sqrt(13)"]
    g = EM.of(alpha, beta, "sqrt(5)")
    origin = FundamentalPoint.origin(5)
    for n in list(range(0, 200)) + list(range(9_800, 10_001)):
        assert hz.omega(alpha, beta, "sqrt(5)", n).close(hz.orbit_point(g, origin, n).coords[-1])


def test_h1_specialisation(rng):
    for _ in range(20):
        a, b, c = (random_real(rng) for _ in range(3))
        x, y, z = (random_real(rng) for _ in range(3))
        prod = EM((a,), (b,), c) * EM((x,), (y,), z)
        ref = E(a, b, c) * E(x, y, z)
        assert prod.close(as_m(ref))
        n = rng.randrange(1000)
        assert hz.power(EM((a,), (b,), c), n).close(as_m(hz.power(E(a, b, c), n)))


# properties

@given(elements, elements, elements)
def test_associativity(g, h, k):
    assert ((g * h) * k).close(g * (h * k))


@given(malcev, malcev, malcev)
def test_associativity_malcev2(p, q, r):
    assert ((p * q) * r).close(p * (q * r))


@given(malcev, malcev)
def test_malcev2_is_isomorphism(p, q):
    lhs = hz.malcev2_to_first(p * q)
    rhs = hz.malcev2_to_first(p) * hz.malcev2_to_first(q)
    assert lhs.close(rhs)
    assert hz.first_to_malcev2(hz.malcev2_to_first(p)).close(p)


@given(elements, st.integers(0, 60))
def test_power_matches_iteration(g, n):
    assert hz.power(g, n).close(iterate(g, n, E.identity()))


@given(elements)
def test_inverse(g):
    assert (g * hz.inverse(g)).close(E.identity())
    assert (hz.inverse(g) * g).close(E.identity())


@given(elements)
def test_reduce_fundamental_invariants(x):
    tau, gamma = hz.reduce_fundamental(x)
    assert in_unit_cube(tau)
    assert all(c.is_exact_integer() for c in gamma.coords())
    assert (x * gamma).close(tau.lift())
    # uniqueness: moving gamma by one lattice unit leaves the cube
    for i in range(3):
        for s in (-1, 1):
            coords = list(gamma.coords())
            coords[i] = coords[i] + s
            y = x * E(*coords)
            inside = all(0 <= c.m < PRECISION.one for c in y.coords())
            assert not inside


@given(malcev)
def test_reduce_malcev2(x):
    tau, gamma = hz.reduce_fundamental(x)
    assert in_unit_cube(tau) and tau.convention == hz.MALCEV2
    assert (x * gamma).close(tau.lift())
