"""Command-line interface: ``nq fit | report | predict | negate``.

Exit codes: 0 success, 1 input error, 2 a fit did not converge (the report is
still written).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from nqdecision.datasets import load_dataset, narrow_records
from nqdecision.errors import NQError
from nqdecision.fit import FitConfig
from nqdecision.model import OBSERVABLES, ModelConfig, ModelParams, predict
from nqdecision.negation import iterate_negation, shannon_entropy
from nqdecision.report import build_report, emit_report, run_fits

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2

DIST_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for non-convergence here.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hamiltonian-norm", choices=("paper", "sqrt"), default="paper")
    p.add_argument("--d-weighting", choices=("paper", "sqrt"), default="paper")
    p.add_argument("--pab-formula", choices=("paper", "sum"), default="paper")
    p.add_argument("--negation-domain", choices=("conditional", "joint"), default="conditional")


def _add_fit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--restarts", type=_pos_int, default=32)
    p.add_argument("--max-iter", type=_pos_int, default=2000, help="iteration budget per restart")
    p.add_argument("--tol", type=float, default=1e-9, help="simplex convergence tolerance")
    p.add_argument("--format", choices=("md", "csv", "json"), default="md")
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    _add_model_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nq", description="Negation quantum decision model.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_fit = sub.add_parser("fit", help="fit the model to one or more datasets")
    p_fit.add_argument(
        "--dataset", action="append", required=True, metavar="NAME|PATH",
        help="catalog name or JSON record file; repeat for several",
    )
    _add_fit_flags(p_fit)

    p_rep = sub.add_parser("report", help="fit all six narrow-face datasets")
    _add_fit_flags(p_rep)

    p_pred = sub.add_parser("predict", help="evaluate the model at given parameters")
    p_pred.add_argument("--hg", type=float, required=True)
    p_pred.add_argument("--hb", type=float, required=True)
    p_pred.add_argument("--alpha", type=float, required=True)
    p_pred.add_argument("--pg", type=float, required=True)
    p_pred.add_argument("--t", type=float, default=math.pi / 2)
    p_pred.add_argument("--format", choices=("md", "csv", "json"), default="md")
    _add_model_flags(p_pred)

    p_neg = sub.add_parser("negate", help="iterate the exponential negation")
    p_neg.add_argument("--dist", required=True, help="comma-separated probabilities")
    p_neg.add_argument("--iterations", type=_nonneg_int, default=10)
    p_neg.add_argument("--format", choices=("md", "csv", "json"), default="md")
    return parser


def _model_config(args: argparse.Namespace) -> ModelConfig:
    return ModelConfig(
        hamiltonian_norm=args.hamiltonian_norm,
        d_weighting=args.d_weighting,
        pab_formula=args.pab_formula,
        negation_domain=args.negation_domain,
    )


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _run_fit(args: argparse.Namespace, records: list) -> int:
    config = FitConfig(
        seed=args.seed,
        restarts=args.restarts,
        max_iter=args.max_iter,
        tol=args.tol,
        model=_model_config(args),
    )
    results = run_fits(records, config)
    _write(emit_report(build_report(results, config), args.format), args.out)
    if not all(r.fit.converged for r in results):
        names = [r.record.name for r in results if not r.fit.converged]
        print(f"nq: fit did not converge for {', '.join(names)}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    return _run_fit(args, [load_dataset(src) for src in args.dataset])


def cmd_report(args: argparse.Namespace) -> int:
    return _run_fit(args, narrow_records())


def cmd_predict(args: argparse.Namespace) -> int:
    params = ModelParams(args.hg, args.hb, args.alpha, args.pg, args.t)
    pred = predict(params, _model_config(args))
    values = pred.as_dict()
    values["interference_gap"] = pred.interference_gap
    if args.format == "json":
        out = {"params": params.as_dict(), "prediction": values, "clamped": list(pred.clamped)}
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    elif args.format == "csv":
        keys = list(values)
        sys.stdout.write(",".join(keys) + "\n" + ",".join(repr(values[k]) for k in keys) + "\n")
    else:
        for key in (*OBSERVABLES, "interference_gap"):
            sys.stdout.write(f"{key:>16}  {values[key]:.6f}\n")
        if pred.clamped:
            sys.stdout.write(f"clamped: {', '.join(pred.clamped)}\n")
    return EXIT_OK


def _parse_dist(text: str) -> np.ndarray:
    try:
        values = np.array([float(tok) for tok in text.split(",") if tok.strip()])
    except ValueError as exc:
        raise NQError(f"cannot parse distribution {text!r}: {exc}") from exc
    if values.size < 2:
        raise NQError("distribution needs at least two entries")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise NQError("distribution entries must be finite and nonnegative")
    total = float(values.sum())
    if abs(total - 1.0) > DIST_TOL:
        raise NQError(f"distribution is not normalized: entries sum to {total!r}")
    return values / total


def cmd_negate(args: argparse.Namespace) -> int:
    dist = _parse_dist(args.dist)
    steps = iterate_negation(dist, args.iterations)
    rows = [(i + 1, p, shannon_entropy(p)) for i, p in enumerate(steps)]
    if args.format == "json":
        out = {
            "initial": dist.tolist(),
            "initial_entropy": shannon_entropy(dist),
            "iterations": [{"step": i, "probs": p.tolist(), "entropy": h} for i, p, h in rows],
        }
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    elif args.format == "csv":
        n = dist.size
        sys.stdout.write(",".join(["step", *(f"p{j + 1}" for j in range(n)), "entropy"]) + "\n")
        for i, p, h in rows:
            sys.stdout.write(",".join([str(i), *(repr(float(v)) for v in p), repr(h)]) + "\n")
    else:
        sys.stdout.write(f"{'step':>4}  {'distribution':<40} entropy\n")
        sys.stdout.write(f"{0:>4}  {_fmt_dist(dist):<40} {shannon_entropy(dist):.6f}\n")
        for i, p, h in rows:
            sys.stdout.write(f"{i:>4}  {_fmt_dist(p):<40} {h:.6f}\n")
    return EXIT_OK


def _fmt_dist(p: np.ndarray) -> str:
    return "(" + ", ".join(f"{v:.6f}" for v in p) + ")"


COMMANDS = {"fit": cmd_fit, "report": cmd_report, "predict": cmd_predict, "negate": cmd_negate}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except NQError as exc:
        print(f"nq: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"nq: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
