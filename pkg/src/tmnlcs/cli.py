"""Command-line front end.

Usage::

    tmnlcs construct --kind pair --eigenvalue 0.5,0 --q 1 -o pair.json
    tmnlcs transform pair.json --add 1 0 -o added.json
    tmnlcs transform pair.json --sub 1 1
    tmnlcs evolve pair.json --kerr 1.5707963267948966
    tmnlcs stats pair.json
    tmnlcs verify --suite default
    tmnlcs verify --spec spec.json
    tmnlcs sweep --kind pair --q 0 --abs-grid 1 --kerr-grid 0,1.5707963267948966,3.141592653589793

Complex numbers are passed as ``re,im``.  Custom nonlinear functions
(``--kind custom --function EXPR``, or ``--function`` on ``transform``) are
either a catalog name (``unity``, ``perelomov_full``, ``perelomov_reduced``,
``parity_b``, ``parity_perelomov``) or an expression over ``na`` and ``nb``::

    expr   := expr ('+'|'-') term | term
    term   := term ('*'|'/') unary | unary
    unary  := '-' unary | '+' unary | atom
    atom   := NUMBER | na | nb | powneg1(expr) | '(' expr ')'

``powneg1(k)`` is ``(-1)**k``.  Example: ``"powneg1(nb)/(na+1)"``.

Exit codes: 0 success, 1 verification failed, 2 domain or convergence error,
3 I/O, schema or usage error.  Errors are reported as JSON on stderr.  The
environment variable ``TMNLCS_MAX_TRUNC`` overrides the adaptive truncation cap.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import serialization
from .constructors import StateSpec, Truncation, build
from .errors import SchemaError, TmnlcsError
from .nlfun import resolve
from .transforms import kerr_evolve, photon_add, photon_subtract
from .verify import default_suite, eigen_residual, fidelity, photon_statistics, run_suite

EXIT_OK, EXIT_FAILED, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3
_CONSTRUCTION_OPS = ("recursion", "exponential", "perelomov_closed", "parity_superposition")

SWEEP_COLUMNS = (
    "kind", "q", "abs", "arg", "gamma_t", "fidelity_vs_parity", "eigen_residual",
    "mean_na", "mean_nb", "var_nb", "mandel_q_b", "cross_corr", "error",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None


def parse_grid(text: str) -> list:
    if not text.strip():
        return []
    try:
        return sorted(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise SchemaError(f"cannot write {path}: {exc.strerror}") from None


def _spec_from_args(args) -> StateSpec:
    if args.spec:
        try:
            d = json.loads(_read(args.spec))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON in {args.spec}: {exc}") from None
        spec = StateSpec.from_dict(d)
        if args.allow_unconverged:
            spec = StateSpec(spec.kind, spec.eigenvalue, spec.charge_q, spec.truncation, spec.function, True)
        return spec
    if args.kind is None or args.eigenvalue is None:
        raise UsageError("construct needs --spec FILE or --kind and --eigenvalue")
    if args.truncation == "fixed":
        if args.trunc_param is None:
            raise UsageError("--truncation fixed needs --trunc-param N")
        truncation = Truncation.fixed(int(args.trunc_param))
    else:
        truncation = Truncation("adaptive", args.trunc_param if args.trunc_param is not None else 1e-14)
    function = resolve(args.function, args.q) if args.function else None
    return StateSpec(args.kind, args.eigenvalue, args.q, truncation, function, args.allow_unconverged)


def cmd_construct(args):
    spec = _spec_from_args(args)
    state = build(spec, args.method)
    if not state.converged:
        print(json.dumps({"warning": "state not converged", "truncation_n": state.truncation_n}), file=sys.stderr)
    _write(args.output, serialization.dump_state(state))
    return EXIT_OK


def _infer_function(state, override):
    if override:
        return resolve(override, state.charge_q)
    if state.provenance:
        last = state.provenance[-1]
        if last.get("operation") in _CONSTRUCTION_OPS and "kind" in last:
            spec_d = {"kind": last["kind"], "eigenvalue": [0.0, 0.0], "charge_q": state.charge_q}
            if last["kind"] == "custom":
                spec_d["function"] = last["function"]
            return StateSpec.from_dict(spec_d).nonlinear_function()
    raise UsageError("cannot infer the state's nonlinear function from provenance; pass --function")


def cmd_transform(args):
    state = serialization.load_state(_read(args.input))
    if args.kerr is not None:
        state, _ = kerr_evolve(state, args.kerr)
    else:
        f = _infer_function(state, args.function)
        if args.add is not None:
            state, _, _ = photon_add(state, f, *args.add)
        else:
            state, _, _ = photon_subtract(state, f, *args.sub)
    _write(args.output, serialization.dump_state(state))
    return EXIT_OK


def cmd_evolve(args):
    state = serialization.load_state(_read(args.input))
    state, _ = kerr_evolve(state, args.kerr)
    _write(args.output, serialization.dump_state(state))
    return EXIT_OK


def cmd_stats(args):
    state = serialization.load_state(_read(args.input))
    stats = photon_statistics(state)
    stats = {"charge_q": state.charge_q, **stats}
    _write(args.output, serialization.dumps(stats))
    return EXIT_OK


def cmd_verify(args):
    if args.suite:
        report = default_suite()
    else:
        try:
            d = json.loads(_read(args.spec))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON in {args.spec}: {exc}") from None
        specs = d if isinstance(d, list) else [d]
        report = run_suite([StateSpec.from_dict(s) for s in specs])
    _write(args.output, serialization.dumps(report.to_dict()))
    return EXIT_OK if report.overall_passed else EXIT_FAILED


def sweep_rows(kind, q, abs_grid, arg_grid, kerr_grid):
    """Rows of the sweep table, nested over ``abs``, ``arg``, ``gamma_t`` in that order."""
    parity_of = {"pair": "parity_pair", "perelomov": "parity_perelomov"}
    rows = []
    for r in abs_grid:
        for phi in arg_grid:
            z = r * complex(math.cos(phi), math.sin(phi))
            try:
                spec = StateSpec(kind, z, q)
                base = build(spec)
                residual = eigen_residual(base, spec.nonlinear_function(), spec.effective_eigenvalue())
                target = build(StateSpec(parity_of[kind], z, q)) if kind in parity_of else None
                error = None
            except TmnlcsError as exc:
                base, error = None, f"{type(exc).__name__}: {exc}"
            for g in kerr_grid:
                row = dict.fromkeys(SWEEP_COLUMNS)
                row.update(kind=kind, q=q, abs=r, arg=phi, gamma_t=g)
                if base is None:
                    row["error"] = error
                else:
                    evolved, _ = kerr_evolve(base, g)
                    row["eigen_residual"] = residual
                    if target is not None:
                        row["fidelity_vs_parity"] = fidelity(evolved, target)
                    stats = photon_statistics(evolved)
                    for key in ("mean_na", "mean_nb", "var_nb", "mandel_q_b", "cross_corr"):
                        row[key] = stats[key]
                rows.append(row)
    return rows


def cmd_sweep(args):
    if args.kind == "custom":
        raise UsageError("sweep supports catalog kinds only")
    rows = sweep_rows(args.kind, args.q, args.abs_grid, args.arg_grid, args.kerr_grid)
    lines = [",".join(SWEEP_COLUMNS)]
    lines += [",".join(serialization.csv_cell(row[c]) for c in SWEEP_COLUMNS) for row in rows]
    _write(args.output, "\n".join(lines) + "\n")
    if rows and all(row["error"] for row in rows):
        return EXIT_DOMAIN
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tmnlcs", description="Two-mode nonlinear coherent states on the Fock ladder.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a state and write it as JSON")
    p.add_argument("--spec", help="StateSpec JSON file")
    p.add_argument("--kind", choices=("custom", "pair", "perelomov", "parity_pair", "parity_perelomov"))
    p.add_argument("--eigenvalue", type=parse_complex, help="alpha (or xi for Perelomov kinds) as re,im")
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--function", help="catalog name or expression (custom kind)")
    p.add_argument("--truncation", choices=("adaptive", "fixed"), default="adaptive")
    p.add_argument("--trunc-param", type=float, help="tail tolerance (adaptive) or N (fixed)")
    p.add_argument("--method", choices=("recursion", "exponential", "closed"), default="recursion")
    p.add_argument("--allow-unconverged", action="store_true")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("transform", help="photon addition/subtraction or Kerr evolution")
    p.add_argument("input")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--add", nargs=2, type=int, metavar=("M", "N"))
    group.add_argument("--sub", nargs=2, type=int, metavar=("M", "N"))
    group.add_argument("--kerr", type=float, metavar="GAMMA_T")
    p.add_argument("--function", help="nonlinear function the input state satisfies")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("evolve", help="Kerr evolution exp(-i gamma_t N_b (N_b - 1))")
    p.add_argument("input")
    p.add_argument("--kerr", type=float, required=True, metavar="GAMMA_T")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("stats", help="photon-number moments")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="run verification checks")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="StateSpec JSON file (object or list)")
    group.add_argument("--suite", choices=("default",))
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="CSV table over |z|, arg z and gamma_t")
    p.add_argument("--kind", required=True, choices=("pair", "perelomov", "parity_pair", "parity_perelomov"))
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--abs-grid", type=parse_grid, default=[1.0])
    p.add_argument("--arg-grid", type=parse_grid, default=[0.0])
    p.add_argument("--kerr-grid", type=parse_grid, default=[0.0])
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_sweep)
    return parser


def _fail(code, kind, message):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail(EXIT_IO, "UsageError", str(exc))
    except SchemaError as exc:
        return _fail(EXIT_IO, "SchemaError", str(exc))
    except TmnlcsError as exc:
        return _fail(EXIT_DOMAIN, type(exc).__name__, str(exc))
    except ValueError as exc:
        return _fail(EXIT_DOMAIN, "ValueError", str(exc))


if __name__ == "__main__":
    sys.exit(main())
