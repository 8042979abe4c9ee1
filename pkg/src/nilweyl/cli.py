"""Command-line driver: orbit files, oscillation reports and Van der Corput tables.

Exit codes: 0 success, 2 usage error, 3 numeric error (AmbiguousBoundary or
PrecisionExhausted), 4 GridTooCoarse.  Settings resolve as flags, then
environment, then defaults; ``--dump-config`` writes the resolved settings
into the output header.
"""

import argparse
import contextlib
import os
import sys

from . import __version__, extension, heisenberg, numeric, oscillation, polyseq
from .errors import BadWindow, GridTooCoarse, NumericError
from .formats import (ORBIT_SCHEMA, SEQUENCE_SCHEMA, VDC_SCHEMA, infer_format,
                      to_decimal, write_records, write_report)

SEQUENCES = ("heisenberg", "bracket", "poly-phase", "extension", "affine", "quasi-eigen")
ORBIT_SYSTEMS = ("heisenberg", "extension", "affine")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_GRID = 0, 2, 3, 4


class UsageError(Exception):
    pass


def parse_lengths(text):
    """``"1e3,1e4,1e5"`` -> ``[1000, 10000, 100000]``, strictly increasing."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            v = float(tok) if ("e" in tok.lower() or "." in tok) else int(tok)
        except ValueError:
            raise UsageError(f"bad length {tok!r}") from None
        if v != int(v) or v < 1:
            raise UsageError(f"lengths must be positive integers, got {tok!r}")
        out.append(int(v))
    if not out:
        raise UsageError("empty N schedule")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise UsageError(f"N schedule must be strictly increasing, got {out}")
    return out


def _split(text):
    return [t.strip() for t in str(text).split(",") if t.strip()]


# sequence construction

def _heisenberg_element(args):
    alpha, beta = _split(args.alpha), _split(args.beta)
    if len(alpha) != len(beta):
        raise UsageError(f"--alpha has {len(alpha)} entries, --beta has {len(beta)}")
    if len(alpha) > 1:
        if args.coords != heisenberg.FIRST_KIND:
            raise UsageError("H_m with m > 1 is only available in first-kind coordinates")
        return heisenberg.HeisenbergMElement.of(alpha, beta, args.gamma)
    if args.coords == heisenberg.MALCEV2:
        return heisenberg.MalcevIIElement.of(alpha[0], beta[0], args.gamma)
    return heisenberg.HeisenbergElement.of(alpha[0], beta[0], args.gamma)


def _heisenberg_orbit(args, N):
    g = _heisenberg_element(args)
    dim = len(g.coords())
    x0 = heisenberg.FundamentalPoint.origin(dim, args.coords)
    return [heisenberg.orbit_point(g, x0, n) for n in range(N)]


def _extension(args):
    base = extension.rotation_base(args.xi)
    lam = numeric.parse_circle(args.lam) if args.lam else extension.choose_lambda(args.seed)
    ext = extension.TowerExtension(base, lam)
    zero = numeric.CirclePoint.zero()
    return ext, extension.ExtensionState(zero, tuple(zero for _ in range(args.p)))


def _affine(args):
    if not args.poly:
        raise UsageError("--poly is required for the affine system")
    system, _ = polyseq.poly_to_affine(polyseq.PhasePoly.parse(args.poly))
    return system


def _affine_states(system, N):
    y = system.y0
    out = []
    for _ in range(N):
        out.append(y)
        y = system.step(y)
    return out


def build_phases(args, N):
    """Circle points ``x_n`` with ``w_n = e^{2 pi i freq x_n}`` (all but bracket)."""
    kind = args.sequence
    if kind == "heisenberg":
        return [p.coords[-1] for p in _heisenberg_orbit(args, N)]
    if kind == "poly-phase":
        if not args.poly:
            raise UsageError("--poly is required for poly-phase")
        return polyseq.phase_sequence(polyseq.PhasePoly.parse(args.poly), N)
    if kind == "extension":
        ext, s = _extension(args)
        return [ext.power(s, n).z[-1] for n in range(N)]
    if kind == "affine":
        return [y[0] for y in _affine_states(_affine(args), N)]
    if kind == "quasi-eigen":
        if not args.theta:
            raise UsageError("--theta is required for quasi-eigen")
        Q = polyseq.QuasiEigenData.of(*_split(args.theta))
        fx = numeric.parse_circle(args.fx)
        return [fx + polyseq.quasi_eigen_phase(Q, n) for n in range(N)]
    raise UsageError(f"unknown sequence {kind!r}")


def build_sequence(args, N):
    """The complex sequence ``w_0..w_{N-1}`` described by ``args``."""
    if args.sequence == "bracket":
        if not args.bracket:
            raise UsageError("--bracket is required for the bracket sequence")
        try:
            form = polyseq.BracketForm.parse(args.bracket)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return polyseq.bracket_sequence(form, N)
    phases = build_phases(args, N)
    return numeric.phases_to_unit([p.scale(args.freq) for p in phases])


# config

def resolve_config(args):
    env_bits = os.environ.get(numeric.ENV_BITS)
    if args.precision is not None:
        bits, source = args.precision, "flag"
    elif env_bits:
        bits, source = int(env_bits), "env"
    else:
        bits, source = numeric.DEFAULT_BITS, "default"
    config = {"command": args.command, "precision_bits": bits, "precision_source": source,
              "seed": args.seed, "version": __version__}
    skip = {"command", "precision", "dump_config", "seed", "func", "out"}
    for key, value in sorted(vars(args).items()):
        if key not in skip:
            config[key] = value
    return config


@contextlib.contextmanager
def _output(path):
    if not path or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _header(schema, config, args, **extra):
    head = {"schema": schema, **extra}
    if args.dump_config:
        head["config"] = config
    return head


# commands

def cmd_orbit(args, config):
    fmt = args.format or infer_format(args.out, "jsonl")
    N = parse_lengths(str(args.N))[-1]
    if args.system == "heisenberg":
        points = _heisenberg_orbit(args, N)
        records = ({"n": n, "coords": [to_decimal(c) for c in p.coords]}
                   for n, p in enumerate(points))
        head = _header(ORBIT_SCHEMA, config, args, system="heisenberg", coords=args.coords)
    elif args.system == "extension":
        ext, s = _extension(args)
        records = ({"n": n, "x": [to_decimal(t.x)], "z": [to_decimal(z) for z in t.z]}
                   for n, t in ((n, ext.power(s, n)) for n in range(N)))
        head = _header(ORBIT_SCHEMA, config, args, system="extension", p=args.p)
    elif args.system == "affine":
        states = _affine_states(_affine(args), N)
        records = ({"n": n, "y": [to_decimal(c) for c in y]} for n, y in enumerate(states))
        head = _header(ORBIT_SCHEMA, config, args, system="affine")
    else:
        raise UsageError(f"unknown system {args.system!r}")
    with _output(args.out) as fh:
        write_records(fh, head, records, fmt)
    return EXIT_OK


def cmd_sequence(args, config):
    fmt = args.format or infer_format(args.out, "jsonl")
    N = parse_lengths(str(args.N))[-1]
    w = build_sequence(args, N)
    records = ({"n": n, "re": float(z.real), "im": float(z.imag)}
               for n, z in enumerate(w))
    head = _header(SEQUENCE_SCHEMA, config, args, sequence=args.sequence)
    with _output(args.out) as fh:
        write_records(fh, head, records, fmt)
    return EXIT_OK


def _grid(args):
    inject = [polyseq.PhasePoly.parse(t) for t in args.inject or ()]
    if args.inject_conjugate:
        if args.sequence != "poly-phase":
            raise UsageError("--inject-conjugate needs a poly-phase sequence")
        inject.append(-polyseq.PhasePoly.parse(args.poly))
    return oscillation.GridSpec(points=args.grid, transform_size=args.transform_size,
                                inject=tuple(inject), max_slack=args.max_slack,
                                workers=args.workers)


def cmd_oscillate(args, config):
    fmt = args.format or infer_format(args.out, "json")
    Ns = parse_lengths(args.N)
    if args.degree < 0:
        raise UsageError("degree must be non-negative")
    grid = _grid(args)
    w = build_sequence(args, Ns[-1])
    report = oscillation.oscillation_report(args.sequence, w, Ns, args.degree, grid,
                                            args.fit_field)
    if args.dump_config:
        report.config = config
    with _output(args.out) as fh:
        write_report(fh, report, fmt)
    return EXIT_OK


def cmd_vdc(args, config):
    fmt = args.format or infer_format(args.out, "csv")
    Ns = parse_lengths(args.N)
    Hs = [int(h) for h in _split(args.H)]
    if not Hs:
        raise UsageError("empty H list")
    w = build_sequence(args, Ns[-1])
    shift = numeric.parse_circle(args.shift) if args.shift else None
    rows, rejected = [], 0
    for N in Ns:
        for H in Hs:
            try:
                r = oscillation.van_der_corput_check(w, N, H, alpha=shift)
            except BadWindow as exc:
                print(f"nilweyl vdc: skipping N={N}, H={H}: {exc}", file=sys.stderr)
                rejected += 1
                continue
            rows.append({"N": N, "H": H, "lhs": r.lhs, "rhs": r.rhs,
                         "holds": "true" if r.holds else "false"})
    head = _header(VDC_SCHEMA, config, args, sequence=args.sequence,
                   tolerance=repr(oscillation.VDC_TOLERANCE))
    with _output(args.out) as fh:
        write_records(fh, head, rows, fmt, columns=["N", "H", "lhs", "rhs", "holds"])
    return EXIT_USAGE if rejected else EXIT_OK


# parser

def _add_common(p):
    p.add_argument("--precision", type=int, default=None,
                   help=f"fixed-point bits (default ${numeric.ENV_BITS} or {numeric.DEFAULT_BITS})")
    p.add_argument("--seed", type=int, default=0, help="seed for the cocycle phase lambda")
    p.add_argument("--out", "-o", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("jsonl", "json", "csv"), default=None,
                   help="output format (default from the file extension)")
    p.add_argument("--dump-config", action="store_true",
                   help="write the resolved configuration into the output header")


def _add_source(p, orbit=False):
    if not orbit:
        p.add_argument("--sequence", choices=SEQUENCES, required=True)
        p.add_argument("--freq", type=int, default=1,
                       help="observable frequency m, w_n = e(m x_n)")
    p.add_argument("--alpha", default="sqrt(2)", help="comma list for H_m")
    p.add_argument("--beta", default="sqrt(3)")
    p.add_argument("--gamma", default="0")
    p.add_argument("--coords", choices=(heisenberg.FIRST_KIND, heisenberg.MALCEV2),
                   default=heisenberg.MALCEV2)
    p.add_argument("--bracket", default=None,
                   help='e.g. "phi=exp(m=1); a=[sqrt(2)]; b=[sqrt(3)]"')
    p.add_argument("--poly", default=None, help="coefficients, constant first")
    p.add_argument("--xi", default="sqrt(2)", help="rotation angle of the extension base")
    p.add_argument("--p", type=int, default=2, help="number of fibre coordinates")
    p.add_argument("--lam", default=None, help="cocycle phase (default: from --seed)")
    p.add_argument("--theta", default=None, help="quasi-eigen phases theta_0,...")
    p.add_argument("--fx", default="0", help="phase of f(x) for quasi-eigen")


def build_parser():
    parser = argparse.ArgumentParser(prog="nilweyl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="stream orbit points of a system")
    p.add_argument("--system", choices=ORBIT_SYSTEMS, required=True)
    p.add_argument("--N", required=True, help="number of points")
    _add_source(p, orbit=True)
    _add_common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("sequence", help="export a complex sequence w_n")
    p.add_argument("--N", required=True)
    _add_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("oscillate", help="sup of Weyl averages over polynomial phases")
    p.add_argument("--N", required=True, help="comma-separated increasing lengths")
    p.add_argument("--degree", "-d", type=int, default=2)
    p.add_argument("--grid", type=int, default=None, help="points per coefficient of degree >= 2")
    p.add_argument("--transform-size", type=int, default=None, help="FFT length for the linear term")
    p.add_argument("--inject", action="append", help="extra polynomial to evaluate exactly")
    p.add_argument("--inject-conjugate", action="store_true",
                   help="inject -P for a poly-phase sequence")
    p.add_argument("--max-slack", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--fit-field", choices=("lower", "upper", "certified"), default="upper")
    _add_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_oscillate)

    p = sub.add_parser("vdc", help="Van der Corput inequality over an (N, H) grid")
    p.add_argument("--N", required=True)
    p.add_argument("--H", required=True)
    p.add_argument("--shift", default=None, help="modulating frequency alpha")
    _add_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_vdc)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        numeric.configure(config["precision_bits"])
        return args.func(args, config)
    except UsageError as exc:
        print(f"nilweyl: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"nilweyl: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GridTooCoarse as exc:
        print(f"nilweyl: {exc}", file=sys.stderr)
        return EXIT_GRID
    except ValueError as exc:
        print(f"nilweyl: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
