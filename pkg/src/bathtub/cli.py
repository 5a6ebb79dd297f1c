"""Command-line front end.

Subcommands (each names the spectral statement it exercises):

  eig       exact eigenvalues from the quantization condition
  bohr      leading-order (action-quantized) energies
  expand    leading-order energies plus the correction series
  oracle    finite-difference cross-check of the exact eigenvalues
  orbits    catalog of periodic trajectories (transmitted/one-reflection)
  count     smoothed counting sums vs orbit-sum amplitude predictions
  heat      heat trace, its closed-form reference, and the t^5 log t fit
  selftest  run the acceptance criteria and print one line per criterion

Output is deterministic: identical configuration yields byte-identical
bytes (floats carry 17 significant digits, CSV has a header row, batch
JSON is one object per line).

Exit codes: 0 success; 1 selftest failures; 2 configuration/usage errors;
3 domain errors; 4 eigenvalue-coverage errors; 5 isolation errors;
6 unreliable heat fit; 7 convergence failures.

The environment variable BATHTUB_THREADS caps worker-pool sizes of the
underlying linear-algebra libraries (exported before numpy loads); the
package's own code is sequential and deterministic regardless.
"""

from __future__ import annotations

import argparse
import os
import sys


def _apply_thread_cap():
    cap = os.environ.get("BATHTUB_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)


_apply_thread_cap()

from .errors import (  # noqa: E402
    BathtubError,
    ConfigError,
    ConvergenceError,
    CoverageError,
    DomainError,
    IsolationError,
)

EXIT_SELFTEST = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_COVERAGE = 4
EXIT_ISOLATION = 5
EXIT_FIT = 6
EXIT_CONVERGENCE = 7


def _parse_range(text):
    """Half-open index range 'a..b'."""
    try:
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ConfigError("expected an index range like 0..20, got %r" % text)
    if hi < lo or lo < 0:
        raise ConfigError("invalid index range %r" % text)
    return lo, hi


def _parse_float_list(text):
    try:
        return [float(part) for part in text.split(",") if part]
    except ValueError:
        raise ConfigError("expected a comma-separated float list, got %r" % text)


def _params_from_args(args):
    from .model import ModelParams

    values = {}
    if args.config:
        with open(args.config, "r", encoding="ascii") as handle:
            base = ModelParams.from_config(handle.read())
        values = {
            "m": base.m,
            "omega_minus": base.omega_minus,
            "omega_plus": base.omega_plus,
            "ell": base.ell,
            "hbar": base.hbar,
        }
    for key in ("m", "omega_minus", "omega_plus", "ell", "hbar"):
        override = getattr(args, key)
        if override is not None:
            values[key] = override
    return ModelParams(**values)


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_eig(args):
    from .quantization import eigen_records, records_to_csv, records_to_json_lines

    p = _params_from_args(args)
    lo, hi = _parse_range(args.n)
    records = eigen_records(lo, hi, p, order=args.order)
    _emit(args, records_to_csv(records) if args.format == "csv" else records_to_json_lines(records))
    return 0


_cmd_expand = _cmd_eig  # same table; kept as a distinct verb for discoverability


def _cmd_bohr(args):
    from .quantization import bohr_sommerfeld
    from .util import fmt_float, json_object_line

    p = _params_from_args(args)
    lo, hi = _parse_range(args.n)
    rows = [(n, bohr_sommerfeld(n, p)) for n in range(lo, hi)]
    if args.format == "csv":
        text = "n,E_bohr\n" + "".join("%d,%s\n" % (n, fmt_float(e)) for n, e in rows)
    else:
        text = "".join(json_object_line([("n", n), ("E_bohr", e)]) + "\n" for n, e in rows)
    _emit(args, text)
    return 0


def _cmd_oracle(args):
    from .oracle import oracle_eigenvalues
    from .util import fmt_float, json_object_line

    p = _params_from_args(args)
    values, estimates = oracle_eigenvalues(p, args.count, n_points=args.points, tol=args.tol)
    if args.format == "csv":
        text = "n,value,error_estimate\n" + "".join(
            "%d,%s,%s\n" % (n, fmt_float(v), fmt_float(e))
            for n, (v, e) in enumerate(zip(values, estimates))
        )
    else:
        text = "".join(
            json_object_line([("n", n), ("value", float(v)), ("error_estimate", float(e))]) + "\n"
            for n, (v, e) in enumerate(zip(values, estimates))
        )
    _emit(args, text)
    return 0


def _cmd_orbits(args):
    from .model import orbit_catalog
    from .util import fmt_float, json_object_line

    p = _params_from_args(args)
    orbits = orbit_catalog(args.E, args.N, args.kmax, p, include_degenerate=args.include_degenerate)
    if args.format == "csv":
        text = "k,alpha,beta,kind,period,action\n" + "".join(
            "%d,%d,%d,%s,%s,%s\n"
            % (o.k, o.alpha, o.beta, o.kind, fmt_float(o.period), fmt_float(o.action))
            for o in orbits
        )
    else:
        text = "".join(
            json_object_line(
                [
                    ("k", o.k),
                    ("alpha", o.alpha),
                    ("beta", o.beta),
                    ("kind", o.kind),
                    ("period", o.period),
                    ("action", o.action),
                ]
            )
            + "\n"
            for o in orbits
        )
    _emit(args, text)
    return 0


def _cmd_count(args):
    from .model import ModelParams
    from .traces import (
        BumpSpec,
        TestPair,
        counting_sum,
        default_chi,
        prediction_reflected,
        prediction_transmitted,
    )
    from .util import json_object_line

    base = _params_from_args(args)
    predict = None
    if args.predict:
        try:
            k, alpha, beta = (int(part) for part in args.predict.split(","))
        except ValueError:
            raise ConfigError("--predict expects 'k,alpha,beta', got %r" % args.predict)
        predict = (k, alpha, beta)

    lines = []
    for hbar in _parse_float_list(args.hbar_list):
        p = ModelParams(base.m, base.omega_minus, base.omega_plus, base.ell, hbar)
        chi = (
            BumpSpec(args.chi_center, args.chi_width)
            if args.chi_center is not None
            else default_chi(args.E)
        )
        pair = TestPair(chi, BumpSpec(args.rho_center, args.rho_width))
        result = counting_sum(args.E, p, pair)
        prediction = 0j
        if predict is not None:
            k, alpha, beta = predict
            if alpha == 0 and beta == 0:
                prediction = prediction_transmitted(args.E, k, p, pair)
            else:
                prediction = prediction_reflected(args.E, k, alpha, beta, p, pair)
        ratio = abs(result.value) / abs(prediction) if prediction else float("nan")
        lines.append(
            json_object_line(
                [
                    ("hbar", hbar),
                    ("sum_re", result.value.real),
                    ("sum_im", result.value.imag),
                    ("prediction_re", prediction.real),
                    ("prediction_im", prediction.imag),
                    ("ratio", ratio),
                ]
            )
        )
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_heat(args):
    import numpy as np

    from .heat import exact_heat_trace, extract_log_coefficient, reference_trace
    from .util import fmt_float, json_object_line

    p = _params_from_args(args)
    grid = np.geomspace(args.t_min, args.t_max, args.points)
    exact = exact_heat_trace(grid, p)
    reference = reference_trace(grid, p)
    csv_text = "t,exact,reference,D\n" + "".join(
        "%s,%s,%s,%s\n" % (fmt_float(t), fmt_float(e), fmt_float(r), fmt_float(e - r))
        for t, e, r in zip(grid, exact, reference)
    )
    _emit(args, csv_text)

    fit = extract_log_coefficient(p)
    report = json_object_line(
        [
            ("log_coefficient", fit.log_coefficient),
            ("log_uncertainty", fit.log_uncertainty),
            ("predicted", fit.predicted),
            ("ratio", fit.ratio),
            ("rms", fit.rms),
            ("rms_without_log", fit.rms_without_log),
            ("condition", fit.condition_estimate),
            ("reliable", fit.reliable),
        ]
    )
    stream = sys.stdout if args.out else sys.stderr
    stream.write(report + "\n")
    if not fit.reliable:
        return EXIT_FIT
    return 0


def _cmd_selftest(args):
    from .selftest import format_line, run_all

    ids = [int(part) for part in args.criteria.split(",")] if args.criteria else None
    results = run_all(ids)
    for result in results:
        sys.stdout.write(format_line(result) + "\n")
    return 0 if all(r.passed for r in results) else EXIT_SELFTEST


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bathtub",
        description="Spectral toolkit for the piecewise-quadratic (bathtub) oscillator.",
    )
    parser.add_argument("--config", help="key=value parameter file (keys: m, omega_minus, omega_plus, ell, hbar)")
    for key in ("m", "omega_minus", "omega_plus", "ell", "hbar"):
        parser.add_argument("--%s" % key.replace("_", "-"), dest=key, type=float, default=None)
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eig", help="exact eigenvalues (quantization condition)")
    s.add_argument("--n", required=True, help="half-open index range a..b")
    s.add_argument("--order", type=int, default=6, help="correction-series cutoff (<= 6)")
    s.set_defaults(func=_cmd_eig)

    s = sub.add_parser("bohr", help="leading-order action-quantized energies")
    s.add_argument("--n", required=True)
    s.set_defaults(func=_cmd_bohr)

    s = sub.add_parser("expand", help="eigenvalue table with the correction series")
    s.add_argument("--n", required=True)
    s.add_argument("--order", type=int, default=6)
    s.set_defaults(func=_cmd_expand)

    s = sub.add_parser("oracle", help="finite-difference eigenvalue cross-check")
    s.add_argument("--count", type=int, default=20)
    s.add_argument("--points", type=int, default=16001)
    s.add_argument("--tol", type=float, default=None)
    s.set_defaults(func=_cmd_oracle)

    s = sub.add_parser("orbits", help="periodic-orbit catalog (periods and actions)")
    s.add_argument("--E", type=float, required=True)
    s.add_argument("--N", type=int, default=1, help="max reflections (0 or 1)")
    s.add_argument("--kmax", type=int, default=2)
    s.add_argument("--include-degenerate", action="store_true")
    s.set_defaults(func=_cmd_orbits)

    s = sub.add_parser("count", help="smoothed counting sum vs orbit amplitudes")
    s.add_argument("--E", type=float, required=True)
    s.add_argument("--hbar-list", required=True, help="comma-separated hbar values")
    s.add_argument("--rho-center", type=float, required=True)
    s.add_argument("--rho-width", type=float, required=True)
    s.add_argument("--chi-center", type=float, default=None)
    s.add_argument("--chi-width", type=float, default=None)
    s.add_argument("--predict", default=None, help="orbit triple 'k,alpha,beta'")
    s.set_defaults(func=_cmd_count)

    s = sub.add_parser("heat", help="heat trace, reference, and t^5 log t fit")
    s.add_argument("--t-min", type=float, default=1e-3)
    s.add_argument("--t-max", type=float, default=5e-2)
    s.add_argument("--points", type=int, default=60)
    s.set_defaults(func=_cmd_heat)

    s = sub.add_parser("selftest", help="run acceptance criteria")
    s.add_argument("--criteria", default=None, help="comma-separated criterion ids")
    s.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code = args.func(args)
    except ConfigError as exc:
        sys.stderr.write('{"error": "config", "message": "%s"}\n' % exc)
        code = EXIT_CONFIG
    except CoverageError as exc:
        sys.stderr.write('{"error": "coverage", "message": "%s"}\n' % exc)
        code = EXIT_COVERAGE
    except IsolationError as exc:
        sys.stderr.write('{"error": "isolation", "message": "%s"}\n' % exc)
        code = EXIT_ISOLATION
    except ConvergenceError as exc:
        sys.stderr.write('{"error": "convergence", "message": "%s"}\n' % exc)
        code = EXIT_CONVERGENCE
    except DomainError as exc:
        sys.stderr.write('{"error": "domain", "message": "%s"}\n' % exc)
        code = EXIT_DOMAIN
    except BathtubError as exc:
        sys.stderr.write('{"error": "internal", "message": "%s"}\n' % exc)
        code = EXIT_DOMAIN
    sys.exit(code)


if __name__ == "__main__":
    main()
