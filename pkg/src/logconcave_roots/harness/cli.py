"""Command-line interface.

Exit codes: 0 success, 1 usage or domain error, 2 partial convergence
(or too many failed replicates), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .. import theory
from ..errors import ConvergenceError, DomainError
from ..rootsolver import LogCoeffPoly, SolverConfig, find_roots, roots_to_csv
from ..sampler import dumps_document, make_coeffs, make_rng, sample_convex, to_document
from .config import SUITES, ExperimentConfig

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL, EXIT_IO = 0, 1, 2, 3

_MODEL_FLAGS = {"uniform": "uniform", "beta": "beta", "alpha": "alpha_scaled",
                "alpha_scaled": "alpha_scaled"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _precision(text: str):
    if text == "auto":
        return "auto"
    try:
        bits = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a bit count, got {text!r}") from None
    if bits < 2:
        raise argparse.ArgumentTypeError(f"bit count must be >= 2, got {bits}")
    return bits


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="logconcave-roots", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="draw model coefficient vectors as JSON documents")
    s.add_argument("--model", choices=sorted(_MODEL_FLAGS), default="uniform")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--out", default="-", help="output path, one JSON document per line ('-' for stdout)")

    r = sub.add_parser("roots", help="find all roots of a sampled polynomial")
    r.add_argument("--in", dest="inp", required=True, help="JSON document (first line is used)")
    r.add_argument("--index", type=int, default=0, help="which document of a multi-line file")
    r.add_argument("--precision", type=_precision, default="auto")
    r.add_argument("--target-residual", type=float, default=1e-12)
    r.add_argument("--out", default="-")

    e = sub.add_parser("experiment", help="run Monte Carlo replicates and summarize")
    e.add_argument("--suite", default="all", help=f"comma list of {', '.join(SUITES)} or 'all'")
    e.add_argument("--model", choices=sorted(_MODEL_FLAGS), default="beta")
    e.add_argument("--n", type=_int_list, required=True)
    e.add_argument("--replicates", type=int, default=1)
    e.add_argument("--master-seed", type=int, default=0)
    e.add_argument("--alpha", type=float, default=1.0)
    e.add_argument("--precision", type=_precision, default="auto")
    e.add_argument("--target-residual", type=float, default=1e-12)
    e.add_argument("--out", default=None, help="output directory")
    e.add_argument("--threads", type=int, default=None)
    e.add_argument("--svg", action="store_true", help="also write a root scatter SVG")

    t = sub.add_parser("theory", help="evaluate limit-law functions")
    tsub = t.add_subparsers(dest="theory_command", required=True, parser_class=_Parser)
    ev = tsub.add_parser("eval")
    ev.add_argument("--fn", required=True, choices=sorted(THEORY_FUNCTIONS))
    ev.add_argument("--at", required=True, nargs="+",
                    help="points; psi-n takes n,R,k triples")
    return p


# ---------------------------------------------------------------------------
# theory eval
# ---------------------------------------------------------------------------

def _psi_n(arg: str) -> float:
    parts = arg.split(",")
    if len(parts) != 3:
        raise DomainError(f"psi-n expects n,R,k, got {arg!r}")
    n, r, k = (int(x) for x in parts)
    return theory.psi_n_profile(n, r, k)


THEORY_FUNCTIONS = {
    "psi": lambda a: theory.psi(float(a)),
    "G": lambda a: theory.big_g(complex(a)),
    "mu-cdf": lambda a: theory.mu_radial_cdf(float(a)),
    "mu-density": lambda a: theory.mu_density(complex(a)),
    "log-radial-cdf": lambda a: theory.log_radial_cdf(float(a)),
    "psi-n": _psi_n,
}


def format_value(v: float) -> str:
    if v == 0:
        return "0"
    return format(v, ".17g")


def cmd_theory(args) -> int:
    fn = THEORY_FUNCTIONS[args.fn]
    for a in args.at:
        try:
            v = fn(a)
        except (DomainError, ValueError) as exc:
            print(f"error: {args.fn} at {a!r}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(format_value(v))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sample / roots
# ---------------------------------------------------------------------------

def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_sample(args) -> int:
    model = _MODEL_FLAGS[args.model]
    if args.n < 1 or args.count < 1:
        raise DomainError("--n and --count must be positive")
    lines = []
    for j in range(args.count):
        s = sample_convex(args.n, make_rng(args.seed, j))
        c = make_coeffs(s, model, args.alpha)
        lines.append(dumps_document(to_document(s, c, seed=[args.seed, j])))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def read_document(path: str, index: int = 0) -> dict:
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if doc is not None and index == 0:
        return doc
    docs = [line for line in text.splitlines() if line.strip()]
    if not 0 <= index < len(docs):
        raise DomainError(f"{path}: no document at index {index}")
    return json.loads(docs[index])


def poly_from_document(doc: dict) -> LogCoeffPoly:
    """Polynomial of a sampler document; an optional ``coeffs`` field gives the
    coefficients exactly and takes precedence over ``log_coeffs``."""
    if "coeffs" in doc:
        return LogCoeffPoly.from_coeffs(doc["coeffs"])
    if "log_coeffs" not in doc:
        raise DomainError("document has neither 'log_coeffs' nor 'coeffs'")
    return LogCoeffPoly([float(x) for x in doc["log_coeffs"]])


def cmd_roots(args) -> int:
    doc = read_document(args.inp, args.index)
    poly = poly_from_document(doc)
    config = SolverConfig(target_residual=args.target_residual, precision=args.precision)
    try:
        rs = find_roots(poly, config)
    except ConvergenceError as exc:
        print(f"partial convergence: {exc}", file=sys.stderr)
        _write(args.out, "# partial convergence\n" + roots_to_csv(exc.partial))
        return EXIT_PARTIAL
    _write(args.out, roots_to_csv(rs))
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

def cmd_experiment(args) -> int:
    from .experiment import run_experiment
    from .output import format_table, write_record

    config = ExperimentConfig(
        model=_MODEL_FLAGS[args.model], n_values=tuple(args.n), replicates=args.replicates,
        master_seed=args.master_seed, alpha=args.alpha, precision=args.precision,
        target_residual=args.target_residual, suites=args.suite, output_dir=args.out,
        emit_svg=args.svg, threads=args.threads)
    record = run_experiment(config)
    paths = write_record(record, config.output_dir, emit_svg=config.emit_svg)
    print(format_table(record))
    for path in paths:
        print(f"wrote {path}")
    frac = record.failure_fraction
    if frac > config.thresholds["max_failure_fraction"]:
        print(f"{frac:.0%} of replicates failed to converge", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


COMMANDS = {"sample": cmd_sample, "roots": cmd_roots, "experiment": cmd_experiment,
            "theory": cmd_theory}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"I/O error{where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
