"""Command-line front end.

Subcommands: ``state``, ``qfi``, ``qfi-matrix``, ``scan``, ``phase-scaling``
and ``check``. JSON goes to stdout as a single object, CSV to ``--out`` or
stdout, diagnostics to stderr.

Exit codes: 0 success, 2 usage or domain error, 3 computational failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import check as checks
from .errors import ComputationError, DomainError, SingularFisherError, ZeroInformationError
from .families import (
    FAMILY_NAMES,
    ParamFamily,
    analytic_derivative,
    canonical_name,
    closed_form_qfi,
    coordinate_derivatives,
)
from .fd_oracle import qfi_from_fidelity
from .gaussian import PARAM_KEYS, StateParams, from_params, is_physical
from .qfi import crb_matrix, crb_single, qfi_matrix, qfi_single
from .scaling import phase_scaling

EXIT_OK, EXIT_DOMAIN, EXIT_COMPUTE = 0, 2, 3
MATRIX_LABELS = ("alpha", "psi", "sigma2", "r", "chi", "n_th", "purity")
CLOSED_MATRIX_LABELS = ("alpha", "psi", "sigma2", "r", "chi", "n_th")
DEFAULT_N_TOTAL = "1e2,1e3,1e4,1e5,1e6"


# ---------------------------------------------------------------- formatting

def fmt(x) -> str:
    """Round-trip-exact float token (17 significant digits)."""
    return "%.17g" % x


def dumps(obj) -> str:
    """JSON with every float written as ``%.17g`` and non-finite values as null."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit(obj, stream=None):
    stream = stream or sys.stdout
    stream.write(dumps(obj) + "\n")


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows):
    """Write CSV to ``path`` (or stdout); a partially written file is removed."""
    text = csv_text(header, rows)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except BaseException:
        if os.path.exists(path):
            os.remove(path)
        raise


# ---------------------------------------------------------------- parameters

def _add_param_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("state parameters")
    g.add_argument("--params", metavar="FILE", help="JSON file with alpha, psi, r, chi, n_th")
    g.add_argument("--alpha", type=float)
    g.add_argument("--psi", type=float)
    sq = g.add_mutually_exclusive_group()
    sq.add_argument("--r", type=float, help="squeezing parameter, sigma = exp(-r)")
    sq.add_argument("--sigma", type=float, help="squeezing factor")
    g.add_argument("--chi", type=float)
    g.add_argument("--nth", "--n-th", dest="nth", type=float)


def _load_params_file(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise DomainError(f"{path}: expected a JSON object")
    return StateParams.from_dict(data).to_dict()


def params_from_args(args) -> StateParams:
    """StateParams from ``--params`` overlaid with explicit flags."""
    values = dict.fromkeys(PARAM_KEYS, 0.0)
    if getattr(args, "params", None):
        values.update(_load_params_file(args.params))
    for key, flag in (("alpha", "alpha"), ("psi", "psi"), ("r", "r"), ("chi", "chi"), ("n_th", "nth")):
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    if getattr(args, "sigma", None) is not None:
        if not args.sigma > 0:
            raise DomainError(f"sigma must be > 0, got {args.sigma}")
        values["r"] = -math.log(args.sigma)
    return StateParams(**values)


def family_from_args(name: str, args, base: StateParams | None = None) -> ParamFamily:
    name = canonical_name(name)
    if base is None:
        base = params_from_args(args)
    if name == "loss_eta":
        if args.eta is None:
            raise DomainError("loss_eta needs --eta")
        alpha0 = args.alpha0 if args.alpha0 is not None else base.alpha
        return ParamFamily("loss_eta", base.replace(alpha=alpha0), args.eta)
    return ParamFamily(name, base)


def _information(f: ParamFamily):
    closed = closed_form_qfi(f)
    state, d = analytic_derivative(f)
    return closed, qfi_single(state, d)


def _crb(info: float, Q: int) -> float:
    try:
        return crb_single(info, Q)
    except ZeroInformationError:
        return math.inf


# ---------------------------------------------------------------- commands

def cmd_state(args) -> int:
    p = params_from_args(args)
    s = from_params(p)
    out = {"params": p.to_dict(), "state": s.to_dict(), "purity": s.purity, "physical": is_physical(s.cov)}
    emit(out)
    return EXIT_OK


def cmd_qfi(args) -> int:
    f = family_from_args(args.family, args)
    closed, generic = _information(f)
    oracle = None
    if args.oracle == "fd":
        oracle = qfi_from_fidelity(f.state_at, f.point, f.fd_step)
    elif args.oracle == "fock":
        oracle, _ = checks.fock_family_qfi(f)
    crb = _crb(closed, args.Q)
    if math.isinf(crb):
        print(f"{f.name}: Fisher information is zero, bound is infinite", file=sys.stderr)
    emit({"family": f.name, "I_closed": closed, "I_generic": generic, "I_oracle": oracle,
          "crb": crb, "Q": args.Q})
    return EXIT_OK


def cmd_qfi_matrix(args) -> int:
    labels = [x.strip() for x in args.wrt.split(",") if x.strip()]
    labels = [canonical_name(x) for x in labels]
    if len(labels) < 2:
        raise DomainError("--wrt needs at least two parameters")
    if len(set(labels)) != len(labels):
        raise DomainError("--wrt lists a parameter twice")
    bad = [x for x in labels if x not in MATRIX_LABELS]
    if bad:
        raise DomainError(f"--wrt: {', '.join(bad)} is not a state coordinate")
    base = params_from_args(args)
    state, ds = coordinate_derivatives(base, labels)
    fm = qfi_matrix(state, ds, labels)
    out = fm.to_dict()
    out["I_closed"] = None
    if all(x in CLOSED_MATRIX_LABELS for x in labels):
        try:
            out["I_closed"] = checks.closed_form_matrix(base, labels)
        except DomainError as exc:
            print(f"closed form unavailable: {exc}", file=sys.stderr)
    out["Q"] = args.Q
    try:
        out["crb"] = crb_matrix(fm, args.Q)
        out["singular"] = False
        out["null_direction"] = None
    except SingularFisherError as exc:
        print(str(exc), file=sys.stderr)
        out["crb"] = None
        out["singular"] = True
        out["null_direction"] = exc.direction
    emit(out)
    return EXIT_OK


def parse_vary(spec: str):
    """``name=start:stop:count`` -> (name, grid)."""
    try:
        name, rng = spec.split("=", 1)
        start, stop, count = rng.split(":")
        start, stop = float(start), float(stop)
        count = int(count)
    except ValueError:
        raise DomainError(f"malformed --vary {spec!r}; expected name=start:stop:count") from None
    if count < 2:
        raise DomainError("--vary count must be >= 2")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise DomainError("--vary bounds must be finite")
    name = name.strip()
    allowed = ("alpha", "psi", "r", "sigma", "chi", "nth", "n_th", "eta", "alpha0")
    if name not in allowed:
        raise DomainError(f"--vary: unknown parameter {name!r}; expected one of {', '.join(allowed)}")
    return ("n_th" if name == "nth" else name), np.linspace(start, stop, count)


def _scan_point(family: str, args, name: str, value: float):
    ns = argparse.Namespace(**vars(args))
    if name == "sigma":
        ns.sigma, ns.r = value, None
    elif name == "r":
        ns.r, ns.sigma = value, None
    elif name == "n_th":
        ns.nth = value
    else:
        setattr(ns, name, value)
    f = family_from_args(family, ns)
    closed, generic = _information(f)
    return value, closed, generic, _crb(closed, args.Q)


def cmd_scan(args) -> int:
    name, grid = parse_vary(args.vary)
    canonical_name(args.family)

    def point(v):
        return _scan_point(args.family, args, name, float(v))

    jobs = max(1, args.jobs)
    if jobs == 1:
        rows = [point(v) for v in grid]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(point, grid))
    write_csv(args.out, ("theta", "I_closed", "I_generic", "crb"), rows)
    return EXIT_OK


def cmd_phase_scaling(args) -> int:
    try:
        n_values = [float(x) for x in args.n_total.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"malformed --n-total {args.n_total!r}") from None
    if len(n_values) < 2:
        raise DomainError("--n-total needs at least two values for the fit")
    rows, slope, r2 = phase_scaling(n_values, coherent_only=args.coherent_only)
    write_csv(args.out, ("N", "fraction", "delta_psi_min"),
              [(r.n_total, r.fraction, r.delta_psi) for r in rows])
    fit = {"slope": slope, "r2": r2, "points": len(rows), "coherent_only": bool(args.coherent_only)}
    emit(fit, sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.families == "all":
        families = "all"
    else:
        families = [canonical_name(x.strip()) for x in args.families.split(",") if x.strip()]
        if not families:
            raise DomainError("--families is empty")
    report = checks.run_check(args.oracle, families, seed=args.seed, points=args.points,
                              generic_points=args.generic_points)
    # wall time would break bit-identical output
    print(f"check finished in {report.pop('seconds'):.1f} s", file=sys.stderr)
    emit(report)
    if not report["pass"]:
        print(f"check failed: {report['failing'][0]}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaussqfi", description="Quantum Cramer-Rao bounds for single-mode Gaussian states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("state", help="covariance, mean and purity of a state")
    _add_param_flags(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("qfi", help="Fisher information and bound for one family")
    _add_param_flags(p)
    p.add_argument("--family", required=True, help=", ".join(FAMILY_NAMES))
    p.add_argument("--alpha0", type=float, help="input amplitude for loss_eta (default --alpha)")
    p.add_argument("--eta", type=float, help="attenuation for loss_eta")
    p.add_argument("--Q", type=_positive_int, default=1, help="number of repetitions")
    p.add_argument("--oracle", choices=("fd", "fock", "none"), default="none")
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("qfi-matrix", help="Fisher matrix over several coordinates")
    _add_param_flags(p)
    p.add_argument("--wrt", required=True, help="comma list, e.g. alpha,psi,chi")
    p.add_argument("--Q", type=_positive_int, default=1)
    p.set_defaults(func=cmd_qfi_matrix)

    p = sub.add_parser("scan", help="Fisher information over a parameter grid (CSV)")
    _add_param_flags(p)
    p.add_argument("--family", required=True)
    p.add_argument("--vary", required=True, help="name=start:stop:count")
    p.add_argument("--alpha0", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--Q", type=_positive_int, default=1)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--jobs", type=_positive_int, default=min(4, os.cpu_count() or 1))
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("phase-scaling", help="optimal phase error against total photon number")
    p.add_argument("--n-total", default=DEFAULT_N_TOTAL, help="comma list of N")
    p.add_argument("--coherent-only", action="store_true", help="no squeezing (r = 0)")
    p.add_argument("--out", help="CSV path (default stdout; fit then goes to stderr)")
    p.set_defaults(func=cmd_phase_scaling)

    p = sub.add_parser("check", help="closed forms against the generic engine and an oracle")
    p.add_argument("--oracle", choices=("fd", "fock"), default="fd")
    p.add_argument("--families", default="all", help="comma list or 'all'")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--points", type=_positive_int, help="oracle points per family")
    p.add_argument("--generic-points", type=_positive_int, default=1000)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_DOMAIN
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"gaussqfi {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ComputationError as exc:
        print(f"gaussqfi {args.command}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"gaussqfi {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
