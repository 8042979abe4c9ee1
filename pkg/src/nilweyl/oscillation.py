"""Weyl averages against polynomial phases and certified suprema over them.

The central reduction: for integer arguments ``e^{2 pi i P(n)}`` only sees the
coefficients of ``P`` mod 1, so the sup of ``|A_N(P)|`` over all real
polynomials of degree <= d is a max over the compact torus ``[0,1)^{d+1}``.
The constant term only rotates ``A_N`` by a unit scalar and is not swept.

:func:`sup_over_degree` brackets that max.  The lower bound is the best value
on a grid (coefficients of degree >= 2 on ``G`` points each, the linear
coefficient on ``M`` points via one FFT per higher tuple).  The upper bound
adds the Lipschitz slack

    2 pi * sum_j s_j * (1/N) sum_n |w_n| n^j,     s_j = half grid step,

which follows from ``|e^{iu} - e^{iv}| <= |u - v|``.  ``certified`` is the
smallest of that bound, a Bernstein-inequality bound along the FFT axis, and
the trivial bound ``(1/N) sum |w_n|``.  All three are rigorous up to
floating-point rounding in the sums (relative error ~1e-15).
"""

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BadWindow, DegenerateFit, EmptyRange, GridTooCoarse
from .numeric import PRECISION, csum, phases_to_unit, unit_exp
from .polyseq import PhasePoly, phase_sequence

REPORT_SCHEMA = "nilweyl.report/1"


@dataclass(frozen=True)
class WeylAverage:
    N: int
    value: complex
    P: PhasePoly = None

    def __abs__(self):
        return abs(self.value)


def _as_array(w, N):
    if N < 1:
        raise EmptyRange("N must be at least 1")
    w = np.asarray(w, dtype=np.complex128)
    if len(w) < N:
        raise ValueError(f"sequence has {len(w)} terms, need {N}")
    return w[:N]


def weyl_average(w, N, P=None, golden=False):
    """``(1/N) sum_{n<N} w_n e^{2 pi i P(n)}``.

    The fast path multiplies by double-precision phases and sums with
    ``math.fsum``; ``golden=True`` evaluates every phase at full precision and
    accumulates in mpmath.
    """
    w = _as_array(w, N)
    if P is None:
        return WeylAverage(N, csum(w) / N, P)
    phases = phase_sequence(P, N)
    if not golden:
        return WeylAverage(N, csum(w * phases_to_unit(phases)) / N, P)
    import mpmath
    with mpmath.workprec(PRECISION.bits + 40):
        scale = mpmath.mpf(2) ** -PRECISION.bits
        re = mpmath.mpf(0)
        im = mpmath.mpf(0)
        for wn, ph in zip(w, phases):
            z = unit_exp(ph)
            zr, zi = z.re.m * scale, z.im.m * scale
            re += wn.real * zr - wn.imag * zi
            im += wn.real * zi + wn.imag * zr
        return WeylAverage(N, complex(float(re / N), float(im / N)), P)


# sup over polynomial phases

def default_points(d):
    if d <= 2:
        return 256
    if d == 3:
        return 64
    return 16


def default_transform(N):
    return 1 << max(0, (4 * N - 1).bit_length())


@dataclass(frozen=True)
class GridSpec:
    """Grid for :func:`sup_over_degree`.

    ``points`` is the number of grid values per coefficient of degree >= 2,
    ``transform_size`` the FFT length for the linear coefficient (must be
    ``>= N``), ``inject`` extra polynomials evaluated exactly, ``max_slack``
    raises GridTooCoarse when exceeded.
    """

    points: int = None
    transform_size: int = None
    inject: tuple = ()
    max_slack: float = None
    workers: int = 1


@dataclass
class SupEstimate:
    degree: int
    N: int
    lower: float
    upper: float
    certified: float
    slack: float
    grid: dict
    argmax: list

    def to_dict(self):
        return {"N": self.N, "lower": self.lower, "upper": self.upper,
                "certified": self.certified, "slack": self.slack,
                "argmax_coeffs": list(self.argmax), "grid": dict(self.grid)}


def _residues(N, j, G):
    """``n^j mod G`` for ``n < N`` as int64 without overflow."""
    base = np.arange(N, dtype=np.int64) % G
    r = np.ones(N, dtype=np.int64)
    for _ in range(j):
        r = (r * base) % G
    return r


def sup_over_degree(w, N, d, grid=None):
    """Bracket ``sup_{deg P <= d} |(1/N) sum_{n<N} w_n e^{2 pi i P(n)}|``.

    Parameters
    ----------
    w : array_like
        Complex sequence, at least ``N`` terms.
    N : int
        Averaging length.
    d : int
        Maximal degree of the phase polynomials.
    grid : GridSpec, optional

    Returns
    -------
    SupEstimate
        ``lower <= sup <= certified <= upper`` and ``upper - lower == slack``.
    """
    grid = grid or GridSpec()
    w = _as_array(w, N)
    if d < 0:
        raise ValueError("degree must be non-negative")
    absw = np.abs(w)
    mean_abs = math.fsum(absw.tolist()) / N

    if d == 0:
        lower = abs(csum(w)) / N
        for P in grid.inject:
            lower = max(lower, abs(weyl_average(w, N, P).value))
        return SupEstimate(0, N, lower, lower, lower, 0.0,
                           {"points": 0, "transform_size": 0, "half_steps": [0.0]},
                           [0.0])

    G = grid.points or default_points(d)
    M = grid.transform_size or default_transform(N)
    if M < N:
        raise ValueError(f"transform size {M} is shorter than N = {N}")
    if G < 1:
        raise ValueError("grid needs at least one point per coefficient")

    half_steps = [0.0, 1.0 / (2 * M)] + [1.0 / (2 * G)] * (d - 1)
    n = np.arange(N, dtype=np.float64)
    moments = [math.fsum((absw * n ** j).tolist()) / N for j in range(d + 1)]
    slack_high = 2 * math.pi * sum(s * m for s, m in zip(half_steps[2:], moments[2:]))
    slack = 2 * math.pi * half_steps[1] * moments[1] + slack_high
    if grid.max_slack is not None and slack > grid.max_slack:
        raise GridTooCoarse(f"Lipschitz slack {slack:.6g} exceeds {grid.max_slack:.6g}")

    residues = [_residues(N, j, G) for j in range(2, d + 1)]
    table = np.exp(2j * np.pi * np.arange(G) / G)
    tuples = list(itertools.product(range(G), repeat=d - 1))

    def sweep(ks):
        if residues:
            idx = np.zeros(N, dtype=np.int64)
            for k, r in zip(ks, residues):
                idx = (idx + k * r) % G
            v = w * table[idx]
        else:
            v = w
        mags = np.abs(np.fft.ifft(v, M)) * (M / N)
        a = int(np.argmax(mags))
        return float(mags[a]), a

    if grid.workers > 1:
        with ThreadPoolExecutor(grid.workers) as pool:
            results = list(pool.map(sweep, tuples))
    else:
        results = [sweep(ks) for ks in tuples]

    best = max(range(len(results)), key=lambda i: results[i][0])
    grid_max, a = results[best]
    argmax = [0.0, a / M] + [k / G for k in tuples[best]]
    lower = grid_max
    for P in grid.inject:
        if P.degree > d:
            raise ValueError(f"injected polynomial of degree {P.degree} > {d}")
        val = abs(weyl_average(w, N, P).value)
        if val > lower:
            lower = val
            argmax = P.floats() + [0.0] * (d - P.degree)

    bounds = [lower + slack, mean_abs]
    ratio = math.pi * (N - 1) / (2 * M)
    if ratio < 1:
        bounds.append(grid_max / (1 - ratio) + slack_high)
    certified = max(lower, min(bounds))
    return SupEstimate(d, N, lower, lower + slack, certified, slack,
                       {"points": G, "transform_size": M, "half_steps": half_steps},
                       argmax)


# Van der Corput

@dataclass(frozen=True)
class VdcResult:
    lhs: float
    rhs: float
    holds: bool


VDC_TOLERANCE = 2.0 ** -30


def _modulate(w, N, alpha=None, P=None):
    if P is not None:
        return w * phases_to_unit(phase_sequence(P, N))
    if alpha is not None:
        return w * np.exp(2j * np.pi * float(alpha) * np.arange(N))
    return w


def autocorrelations(u, H):
    """``c_h = sum_{n < N-h} u_{n+h} conj(u_n)`` for ``h = 0..H``."""
    N = len(u)
    L = 1 << (2 * N - 1).bit_length()
    U = np.fft.fft(u, L)
    return np.fft.ifft(U * np.conj(U))[:H + 1]


def van_der_corput_check(w, N, H, alpha=None, P=None, tol=VDC_TOLERANCE):
    """Evaluate both sides of the Van der Corput inequality.

    With ``u_n = w_n e^{2 pi i n alpha}`` (or ``e^{2 pi i P(n)}``)::

        |(1/N) sum u_n|^2 <= (N+H)/(N(H+1)) (1/N) sum |w_n|^2
            + 2 (N+H)/(N(H+1)^2) |sum_{h=1}^{H} (H+1-h)(N-h)/N
                                   (1/(N-h)) sum_{n<N-h} u_{n+h} conj(u_n)|
    """
    if not 0 <= H < N:
        raise BadWindow(f"need 0 <= H < N, got H={H}, N={N}")
    w = _as_array(w, N)
    u = _modulate(w, N, alpha, P)
    lhs = abs(csum(u) / N) ** 2
    energy = math.fsum((np.abs(w) ** 2).tolist()) / N
    rhs = (N + H) / (N * (H + 1)) * energy
    if H > 0:
        c = autocorrelations(u, H)
        h = np.arange(1, H + 1)
        weights = (H + 1 - h) * (N - h) / N / (N - h)
        rhs += 2 * (N + H) / (N * (H + 1) ** 2) * abs(csum(weights * c[1:]))
    return VdcResult(lhs, rhs, lhs <= rhs + tol)


def cesaro2(values, H):
    """``(1/(H+1)^2) sum_{h=1}^{H} (H+1-h) values_h``; ``values[0]`` is ``values_1``."""
    if H < 1:
        raise ValueError("H must be at least 1")
    v = np.asarray(values, dtype=np.complex128)[:H]
    if len(v) < H:
        raise ValueError(f"need {H} values, got {len(v)}")
    h = np.arange(1, H + 1)
    return csum((H + 1 - h) * v) / (H + 1) ** 2


def equidistribution_weyl_test(x, N, max_freq):
    """``|(1/N) sum_{n<N} e^{2 pi i m x_n}|`` for ``m = 1..max_freq``.

    Each ``m x_n`` is reduced mod 1 exactly before conversion to double.
    """
    if N < 1:
        raise EmptyRange("N must be at least 1")
    pts = list(x[:N])
    return np.array([abs(csum(phases_to_unit([p.scale(m) for p in pts]))) / N
                     for m in range(1, max_freq + 1)])


# reports

@dataclass
class OscillationReport:
    sequence: str
    degree: int
    points: list = field(default_factory=list)
    fit: dict = None
    config: dict = None

    def __post_init__(self):
        Ns = [p.N for p in self.points]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError("report lengths must be strictly increasing")

    def to_dict(self):
        out = {"schema": REPORT_SCHEMA, "sequence": self.sequence, "degree": self.degree,
               "points": [p.to_dict() for p in self.points], "fit": self.fit}
        if self.config is not None:
            out["config"] = self.config
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def csv_rows(self):
        header = ["N", "lower", "upper", "certified", "slack", "argmax_coeffs"]
        rows = [[p.N, repr(p.lower), repr(p.upper), repr(p.certified), repr(p.slack),
                 " ".join(repr(c) for c in p.argmax)] for p in self.points]
        return header, rows


def decay_fit(report, field="upper"):
    """Least-squares slope of ``log(bound)`` against ``log N``.

    Returns ``(exponent, residual)``, the residual being the RMS deviation
    from the fitted line in log space.
    """
    points = report.points if isinstance(report, OscillationReport) else report
    if len(points) < 3:
        raise DegenerateFit(f"need at least 3 points, got {len(points)}")
    Ns = np.array([p.N for p in points], dtype=np.float64)
    sups = np.array([getattr(p, field) for p in points], dtype=np.float64)
    if np.any(sups <= 0):
        raise DegenerateFit("bounds must be positive")
    if np.all(sups == sups[0]):
        raise DegenerateFit("all bounds are equal")
    x, y = np.log(Ns), np.log(sups)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), resid


def oscillation_report(name, w, Ns, d, grid=None, fit_field="upper"):
    """Sup estimates for each length in ``Ns`` (prefixes of ``w``) plus a decay fit."""
    Ns = list(Ns)
    if not Ns:
        raise ValueError("empty N schedule")
    report = OscillationReport(name, d, [sup_over_degree(w, N, d, grid) for N in Ns])
    try:
        exponent, residual = decay_fit(report, fit_field)
        report.fit = {"exponent": exponent, "residual": residual, "field": fit_field}
    except DegenerateFit:
        report.fit = None
    return report


def sup_estimate_from_dict(d, degree):
    return SupEstimate(degree, d["N"], d["lower"], d["upper"], d["certified"],
                       d["slack"], d["grid"], d["argmax_coeffs"])

