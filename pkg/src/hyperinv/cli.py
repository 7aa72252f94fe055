"""Command-line front end: ``hyperinv {build,verify,solve,ogf,egf,series}``.

All output is JSON (sorted keys).  With ``--out`` the file is written to a
temporary sibling and renamed into place, so a failing command never leaves
a partial file.

Exit codes: 0 success, 1 a check failed or a residual exceeded ``--tol``,
2 malformed input or a parameter outside its domain.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import genfun, invpair, queueapp, suites
from .errors import BranchLost, HyperinvError, NoConvergence
from .numfield import EXACT, FieldMode, float_mode, parse_scalar, scalar_from_json, scalar_to_json
from .powerseries import series_to_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

PARAM_NAMES = ("x", "nu", "alpha", "beta", "gamma")


class InputError(Exception):
    pass


def _resolve_mode(args, default: str = "exact", default_bits: int = 53) -> FieldMode:
    kind = args.mode or default
    if kind == "exact":
        if args.precision_bits is not None:
            raise InputError("--precision-bits only applies to --mode float")
        return EXACT
    return float_mode(args.precision_bits or default_bits)


def parse_params(text: str | None, mode: FieldMode) -> dict:
    """``"x=1/3,nu=-1/2"`` -> ``{"x": Fraction(1, 3), "nu": Fraction(-1, 2)}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not of the form name=value")
        name, value = (s.strip() for s in item.split("=", 1))
        if name not in PARAM_NAMES:
            raise InputError(f"unknown parameter {name!r}; expected one of {', '.join(PARAM_NAMES)}")
        try:
            out[name] = parse_scalar(value, mode)
        except (ValueError, TypeError) as exc:
            raise InputError(f"cannot read {name}={value!r} in {mode} mode: {exc}") from None
    return out


def _need(params: dict, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise InputError(f"missing parameter(s): {', '.join(missing)}")


def _pair_params(params: dict, mode: FieldMode) -> invpair.Params:
    _need(params, "x", "nu")
    return invpair.Params(**{k: params.get(k, 0) for k in PARAM_NAMES}, mode=mode)


def _read_json(path: str | None):
    if not path:
        raise InputError("--in is required")
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _read_sequence(path: str | None, mode: FieldMode) -> list:
    obj = _read_json(path)
    seq = obj.get("seq") if isinstance(obj, dict) else obj
    if not isinstance(seq, list):
        raise InputError("sequence JSON must be a list or {\"seq\": [...]}")
    return [scalar_from_json(v, mode) for v in seq]


def write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if not path:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hyperinv-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# commands


def cmd_build(args) -> int:
    if args.kind == "Q":
        mode = _resolve_mode(args, "float", queueapp.DEFAULT_BITS)
        params = parse_params(args.params, mode)
        _need(params, "x", "nu")
        Q = queueapp.build_Q(params["x"], params["nu"], args.n_max, mode)
        write_json({"kind": "Q", "mode": str(mode), "matrix": invpair.matrix_to_json(Q)}, args.out)
        return EXIT_OK
    mode = _resolve_mode(args)
    p = _pair_params(parse_params(args.params, mode), mode)
    out = {"kind": args.kind, "mode": str(mode), "params": p.as_dict()}
    if args.kind == "A":
        out["matrix"] = invpair.matrix_to_json(invpair.build_A(p, args.n_max))
    elif args.kind == "B":
        out["matrix"] = invpair.matrix_to_json(invpair.build_B(p, args.n_max))
    else:
        p.check_gamma(args.n_max)
        p.check_beta(args.n_max)
        a, b = invpair.pair_sequences(p)
        GA, GB = invpair.build_generic(a, b, p.alpha, args.n_max, p.x, mode)
        out["A"], out["B"] = invpair.matrix_to_json(GA), invpair.matrix_to_json(GB)
    write_json(out, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    mode = _resolve_mode(args)
    report = suites.run_suite(
        args.suite,
        seed=args.seed,
        trials=args.trials,
        n_max=args.n_max,
        order=args.order,
        mode=mode,
        tol=args.tol,
        perturb=args.perturb,
    )
    obj = report.to_json()
    obj["mode"] = str(mode)
    write_json(obj, args.out)
    if not report.passed:
        print(f"{args.suite}: {obj['n_failed']} of {obj['n_checks']} checks failed ({obj['identity']})", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_solve(args) -> int:
    mode = _resolve_mode(args, "float", queueapp.DEFAULT_BITS)
    obj = _read_json(args.input)
    if not isinstance(obj, dict):
        raise InputError("problem JSON must be an object")
    problem = queueapp.problem_from_json(obj, mode)
    sol = queueapp.solve_E(problem)
    out = queueapp.solution_to_json(sol)
    out["tol"] = args.tol
    out["passed"] = sol.residual_max < args.tol and sol.oracle_max_rel_diff < args.tol
    write_json(out, args.out)
    if not out["passed"]:
        print(f"residual {sol.residual_max:.3e} or oracle gap {sol.oracle_max_rel_diff:.3e} exceeds {args.tol}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_ogf(args) -> int:
    mode = _resolve_mode(args)
    params = parse_params(args.params, mode)
    _need(params, "x", "nu")
    beta, gamma = params.get("beta", 0), params.get("gamma", 0)
    if params.get("alpha", gamma) != gamma:
        raise InputError("the OGF relation needs alpha = gamma")
    seq = _read_sequence(args.input, mode)
    fn = genfun.ogf_S_from_T if args.direction == "S_from_T" else genfun.ogf_T_from_S
    series = fn(seq, params["x"], params["nu"], beta, gamma, args.order, mode)
    write_json({"direction": args.direction, "mode": str(mode), "series": series_to_json(series)}, args.out)
    return EXIT_OK


def cmd_egf(args) -> int:
    mode = _resolve_mode(args, "float")
    if mode.is_exact:
        raise InputError("the EGF is evaluated in a float mode")
    params = parse_params(args.params, mode)
    _need(params, "x", "nu")
    if params.get("alpha", 0) != 0:
        raise InputError("the Kummer form of the EGF needs alpha = 0")
    seq = _read_sequence(args.input, mode)
    values = []
    for text in args.z:
        z = parse_scalar(text, mode)
        v = genfun.egf_S(seq, params["x"], params["nu"], params.get("beta", 0), params.get("gamma", 0), z, args.order, mode)
        values.append({"z": scalar_to_json(z), "value": scalar_to_json(v)})
    write_json({"mode": str(mode), "values": values}, args.out)
    return EXIT_OK


def cmd_series(args) -> int:
    mode = _resolve_mode(args)
    params = parse_params(args.params, mode)
    name, order = args.name, args.order
    if name in ("theta", "sigma"):
        _need(params, "nu")
        fn = genfun.theta_series if name == "theta" else genfun.sigma_series
        series = fn(params["nu"], order, mode)
    else:
        _need(params, "x", "nu")
        fn = {"xi": genfun.xi_series, "omega": genfun.omega_series, "omega_closed": genfun.omega_closed_series}[name]
        series = fn(params["x"], params["nu"], order, mode)
    write_json({"name": name, "mode": str(mode), "series": series_to_json(series)}, args.out)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, order=15, tol=1e-10) -> None:
    p.add_argument("--mode", choices=("exact", "float"), default=None, help="numeric field (default depends on command)")
    p.add_argument("--precision-bits", type=int, default=None, help="float precision; above 53 uses mpmath")
    p.add_argument("--params", default=None, help="comma list such as x=1/3,nu=-1/2,alpha=0,beta=0,gamma=0")
    p.add_argument("--order", type=int, default=order, help="series truncation order")
    p.add_argument("--tol", type=float, default=tol, help="tolerance for float comparisons")
    p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED, help=f"RNG seed (default {suites.DEFAULT_SEED})")
    p.add_argument("--in", dest="input", default=None, help="input JSON file")
    p.add_argument("--out", default=None, help="output JSON file (stdout if omitted)")
    p.add_argument("--n-max", type=int, default=12, help="matrix size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperinv", description="Hypergeometric inverse pairs and their generating functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write A, B, Q or the generic pair as JSON")
    p.add_argument("kind", choices=("A", "B", "Q", "generic"))
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run a randomized verification suite")
    p.add_argument("suite", choices=sorted(suites.SUITES))
    p.add_argument("--trials", type=int, default=None, help="number of random draws")
    p.add_argument("--perturb", action="store_true", help="inject a known defect (negative control)")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="solve the queueing system from a problem file")
    _add_common(p, tol=1e-8)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("ogf", help="transform ordinary generating functions")
    p.add_argument("--direction", choices=("S_from_T", "T_from_S"), default="S_from_T")
    _add_common(p)
    p.set_defaults(func=cmd_ogf)

    p = sub.add_parser("egf", help="evaluate the EGF of S = B T")
    p.add_argument("--z", nargs="+", default=["0.5"], help="evaluation points")
    _add_common(p, order=None)
    p.set_defaults(func=cmd_egf)

    p = sub.add_parser("series", help="expand Xi, Omega, Theta or Sigma")
    p.add_argument("name", choices=("xi", "omega", "omega_closed", "theta", "sigma"))
    _add_common(p)
    p.set_defaults(func=cmd_series)
    return parser


def _validate(args) -> None:
    if args.tol is not None and not args.tol > 0:
        raise InputError("--tol must be positive")
    if args.order is not None and args.order < 1:
        raise InputError("--order must be >= 1")
    if args.n_max < 1:
        raise InputError("--n-max must be >= 1")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except (NoConvergence, BranchLost) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, HyperinvError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
