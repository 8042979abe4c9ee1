"""Brute-force pre-runs that produce the thresholds in tests/fixtures/prerun.json.

Independent of the package on purpose: sequences are generated with mpmath at
50 digits, suprema are plain grid maxima at four times the package's default
resolution (4x the points per quadratic coefficient, 4x the FFT length).
Rerun with ``python3 scripts/prerun_fixtures.py`` and commit the JSON.
"""

import argparse
import json
import math
import time
from pathlib import Path

import mpmath
import numpy as np

mpmath.mp.dps = 50
SQRT2 = mpmath.sqrt(2)
SQRT3 = mpmath.sqrt(3)

SCHEDULE = (1_000, 10_000, 100_000)
FINE_POINTS = 4 * 256


def _frac_floats(values):
    return np.array([float(v - mpmath.floor(v)) for v in values])


def bracket_phases(N):
    """``n sqrt2 [n sqrt3]`` mod 1."""
    return _frac_floats(n * SQRT2 * mpmath.floor(n * SQRT3) for n in range(N))


def square_phases(N, alpha=SQRT2):
    return _frac_floats(alpha * n * n for n in range(N))


def fine_transform(N):
    return 4 * (1 << (4 * N - 1).bit_length())


def grid_max_linear(w, M):
    N = len(w)
    return float(np.max(np.abs(np.fft.ifft(w, M))) * M / N)


def grid_max_quadratic(w, G, M):
    """Max of ``|(1/N) sum w_n e(c1 n + c2 n^2)|`` over ``c2 = k/G`` and ``c1 = j/M``."""
    N = len(w)
    n = np.arange(N, dtype=np.int64)
    sq = (n * n) % G
    best = 0.0
    for k in range(G):
        v = w * np.exp(2j * np.pi * ((k * sq) % G) / G)
        best = max(best, grid_max_linear(v, M))
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                          / "tests" / "fixtures" / "prerun.json"))
    args = ap.parse_args()
    out = {"schema": "nilweyl.fixtures/1",
           "method": "mpmath 50-digit phases; numpy FFT grid maxima at 4x default resolution"}
    t0 = time.time()

    # bracket sequence, degree 2
    x = bracket_phases(SCHEDULE[-1])
    w = np.exp(2j * np.pi * x)
    tau = {}
    for N in SCHEDULE:
        tau[str(N)] = grid_max_quadratic(w[:N], FINE_POINTS, fine_transform(N))
        print(f"bracket d=2 N={N}: fine grid max {tau[str(N)]!r} ({time.time() - t0:.0f}s)")
    out["bracket_degree2"] = {"points": FINE_POINTS,
                              "transform": {str(N): fine_transform(N) for N in SCHEDULE},
                              "fine_max": tau, "tau_star": tau[str(SCHEDULE[-1])]}

    # e(sqrt2 n^2), degree 1
    y = square_phases(SCHEDULE[-1])
    v = np.exp(2j * np.pi * y)
    tau1 = {str(N): grid_max_linear(v[:N], fine_transform(N)) for N in SCHEDULE}
    print(f"square d=1: {tau1}")
    out["square_degree1"] = {"transform": {str(N): fine_transform(N) for N in SCHEDULE},
                             "fine_max": tau1, "tau_1": tau1["10000"]}

    # equidistribution of n^2 frac(sqrt2), N = 1e5, m <= 5
    N = SCHEDULE[-1]
    fr = SQRT2 - 1
    mags = []
    for m in range(1, 6):
        ph = square_phases(N, m * fr)
        z = np.exp(2j * np.pi * ph)
        mags.append(abs(complex(math.fsum(z.real), math.fsum(z.imag))) / N)
    out["square_equidistribution"] = {
        "N": N, "magnitudes": mags,
        "thresholds": [m * (1 + 1e-6) + 1e-9 for m in mags]}
    print(f"equidistribution: {mags}")

    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {args.out} in {time.time() - t0:.0f}s")


if __name__ == "__main__":
    main()
