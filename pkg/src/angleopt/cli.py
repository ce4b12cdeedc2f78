"""Command-line experiments over the library.

Subcommands: energy, maximizer, ledger, verify, optimize, sweep, qp.
Exit codes: 0 success / all checks passed; 1 usage or unreadable input;
2 validation failure (a structural invariant was violated); 3 a
falsifying instance was found (a verification check failed or an
optimizer run beat the even-frame energy beyond tolerance).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from fractions import Fraction

from . import closed_form, measures, optimizer, rational_qp
from .errors import (
    DimensionMismatchError,
    DomainError,
    FalsificationError,
    StructureError,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_FALSIFIED = 3

#: An optimize/sweep best energy may exceed the even-frame energy by at most
#: this before the run counts as a falsifying instance.
NEVER_EXCEED_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; reserve 2 for
    validation failures and use 1 for usage instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_alpha(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(v) or v < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must be >= 1 or 'inf', got {text}")
    return v


def _parse_alpha_list(text: str) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("need at least one alpha")
    return [_parse_alpha(p) for p in parts]


def _inputs_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _print_value(v) -> None:
    if isinstance(v, Fraction):
        print(v)
    else:
        print(f"{v:.15g}")


def _load_params(args) -> optimizer.OptimizerParams:
    if getattr(args, "params", None):
        with open(args.params) as fh:
            obj = json.load(fh)
        params = optimizer.OptimizerParams.from_json_obj(obj)
    else:
        params = optimizer.OptimizerParams()
    overrides = {}
    if getattr(args, "starts", None) is not None:
        overrides["n_starts"] = args.starts
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if overrides:
        merged = params.to_json_obj()
        merged.update(overrides)
        params = optimizer.OptimizerParams.from_json_obj(merged)
    return params


def _figure_path(out_csv: str) -> str:
    return out_csv + ".png" if not out_csv.endswith(".csv") else out_csv[:-4] + ".png"


# -- subcommand handlers -----------------------------------------------------


def cmd_energy(args) -> int:
    config = measures.load_config(args.config)
    value = measures.energy(config, args.alpha, orth_tol=args.orth_tol)
    _print_value(value)
    return EXIT_OK


def cmd_maximizer(args) -> int:
    if args.n is not None:
        config = measures.conjectured_maximizer(args.d, args.n)
    else:
        raw = json.loads(args.splits)
        if not isinstance(raw, list):
            raise StructureError("splits JSON must be a list of [a, b] pairs")
        splits = []
        for entry in raw:
            if not isinstance(entry, list) or len(entry) != 2:
                raise StructureError(f"split entry must be a pair, got {entry!r}")
            splits.append((Fraction(str(entry[0])), Fraction(str(entry[1]))))
        config = measures.conjectured_maximizer_weighted(args.d, splits)
    text = json.dumps(config.to_json_obj(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_ledger(args) -> int:
    try:
        if args.k is None:
            print(closed_form.f_dn(args.d, args.n))
        else:
            print(closed_form.f_dnk(args.d, args.n, args.k))
    except DomainError as exc:
        print(f"ledger: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        report = closed_form.verify_comparison_lemma(args.d_max, args.n_max)
    except DomainError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    comment = "angleopt verify inputs_sha256=" + _inputs_hash(
        {"cmd": "verify", "d_max": args.d_max, "n_max": args.n_max}
    )
    report.write_csv(args.out_csv)
    with open(args.out_csv) as fh:
        body = fh.read()
    with open(args.out_csv, "w") as fh:
        fh.write(f"# {comment}\n")
        fh.write(body)
    if args.plot:
        from . import plots

        plots.render_verify_figure(report, _figure_path(args.out_csv))
    counts = report.counts()
    total = len(report.checks)
    breakdown = " ".join(f"{name}={counts[name]}" for name in sorted(counts))
    print(f"checked {total} instances up to d={args.d_max}, n={args.n_max}: {breakdown}")
    failures = report.failures()
    if failures:
        for c in failures[:20]:
            print(
                f"FAILED {c.check_name} at d={c.d}, n={c.n}, k={c.k}: "
                f"lhs={c.lhs}, rhs={c.rhs}",
                file=sys.stderr,
            )
        print(f"{len(failures)} checks failed", file=sys.stderr)
        return EXIT_FALSIFIED
    print("all checks passed")
    return EXIT_OK


def _run_summary_lines(run: optimizer.OptRun, conjectured: float, verdict: bool) -> list[str]:
    gap = conjectured - run.best_energy
    return [
        f"best_energy={run.best_energy!r} conjectured={conjectured!r} gap={gap!r}",
        f"equivalent_to_even_frame={'true' if verdict else 'false'} "
        f"converged_fraction={run.converged_fraction!r} best_start={run.best_start}",
    ]


def cmd_optimize(args) -> int:
    params = _load_params(args)
    workers = args.workers if args.workers is not None else optimizer.resolve_workers()
    try:
        run = optimizer.optimize(
            args.d, args.n, args.alpha, params=params, workers=workers
        )
    except DomainError as exc:
        print(f"optimize: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    conj = measures.conjectured_maximizer(args.d, args.n).to_probability()
    conjectured = float(measures.energy(conj, math.inf))
    verdict = measures.equivalent(run.best_config, conj, tol=args.equiv_tol)
    if args.out:
        comment = (
            f"angleopt optimize seed={params.master_seed} inputs_sha256="
            + _inputs_hash(
                {
                    "cmd": "optimize",
                    "d": args.d,
                    "n": args.n,
                    "alpha": args.alpha,
                    "params": params.to_json_obj(),
                }
            )
        )
        optimizer.write_optrun_csv(run, args.out, comment=comment)
        if args.plot:
            from . import plots

            plots.render_optrun_figure(run, _figure_path(args.out))
    for line in _run_summary_lines(run, conjectured, verdict):
        print(line)
    if run.best_energy > conjectured + NEVER_EXCEED_TOL:
        print(
            f"FALSIFIED: best energy exceeds the even frame by "
            f"{run.best_energy - conjectured!r}",
            file=sys.stderr,
        )
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_sweep(args) -> int:
    params = _load_params(args)
    workers = args.workers if args.workers is not None else optimizer.resolve_workers()
    try:
        rows = optimizer.alpha_sweep(
            args.d,
            args.n,
            args.alphas,
            params=params,
            workers=workers,
            equiv_tol=args.equiv_tol,
        )
    except DomainError as exc:
        print(f"sweep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    comment = (
        f"angleopt sweep seed={params.master_seed} inputs_sha256="
        + _inputs_hash(
            {
                "cmd": "sweep",
                "d": args.d,
                "n": args.n,
                "alphas": args.alphas,
                "params": params.to_json_obj(),
            }
        )
    )
    optimizer.write_sweep_csv(rows, args.out, comment=comment)
    if args.plot:
        from . import plots

        plots.render_sweep_figure(rows, _figure_path(args.out))
    worst = None
    for r in rows:
        print(
            f"alpha={r.alpha:g}: best={r.best_energy!r} frame={r.conjectured_energy!r} "
            f"gap={r.gap!r} equivalent={'true' if r.equivalent else 'false'}"
        )
        if worst is None or r.gap < worst:
            worst = r.gap
    if worst is not None and worst < -NEVER_EXCEED_TOL:
        print(f"FALSIFIED: a run beat the even frame by {-worst!r}", file=sys.stderr)
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_qp(args) -> int:
    with open(args.matrix) as fh:
        obj = json.load(fh)
    A = rational_qp.RationalSymMatrix.from_json_obj(obj)
    witness = rational_qp.simplex_extremum(A, args.sense)
    text = json.dumps(witness.to_json_obj(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.grid_check is not None:
        ok = rational_qp.verify_witness(A, witness, args.sense, grid_res=args.grid_check)
        if not ok:
            print(
                f"FALSIFIED: a denominator-{args.grid_check} grid point beats the witness",
                file=sys.stderr,
            )
            return EXIT_FALSIFIED
        print(f"grid_check res={args.grid_check}: witness dominates")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(
        prog="angleopt",
        description=(
            "Energies of unoriented-line configurations on spheres: exact "
            "pair-count ledgers, comparison sweeps, multistart maximization, "
            "and exact simplex QP."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", help="energy of a configuration JSON at a given alpha")
    p.add_argument("config", help="path to a configuration JSON file")
    p.add_argument("--alpha", type=_parse_alpha, required=True, help="exponent >= 1 or 'inf'")
    p.add_argument("--orth-tol", type=float, default=1e-9,
                   help="|dot| threshold for perpendicularity at alpha=inf")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("maximizer", help="emit an evenly-spread frame configuration as JSON")
    p.add_argument("--d", type=int, required=True, help="sphere dimension")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="number of unit-mass atoms (counting mode)")
    group.add_argument(
        "--splits",
        help="JSON list of d+1 [a_i, b_i] rational pairs, each summing to 1/(d+1)",
    )
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_maximizer)

    p = sub.add_parser("ledger", help="exact pair-count ledger values")
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.add_argument("k", type=int, nargs="?", default=None,
                   help="optional: lines confined to a hyperplane")
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("verify", help="sweep the comparison inequalities, write a CSV report")
    p.add_argument("d_max", type=int)
    p.add_argument("n_max", type=int)
    p.add_argument("out_csv", help="report CSV path")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", help="multistart energy maximization at one alpha")
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.add_argument("alpha", type=_parse_alpha)
    p.add_argument("--params", help="optimizer params JSON file")
    p.add_argument("--starts", type=int, help="override n_starts")
    p.add_argument("--seed", type=int, help="override master_seed")
    p.add_argument("--workers", type=int, default=None,
                   help=f"process count (default: ${optimizer.THREADS_ENV_VAR} or CPU count)")
    p.add_argument("--equiv-tol", type=float, default=1e-4,
                   help="tolerance for the equivalence verdict")
    p.add_argument("--out", help="write per-start CSV here")
    p.add_argument("--plot", action="store_true",
                   help="render a PNG next to the CSV (requires --out)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="optimize across several alphas, write a CSV report")
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--alphas", type=_parse_alpha_list, required=True,
                   help="comma-separated list, e.g. 1.5,2,4")
    p.add_argument("--params", help="optimizer params JSON file")
    p.add_argument("--starts", type=int, help="override n_starts")
    p.add_argument("--seed", type=int, help="override master_seed")
    p.add_argument("--workers", type=int, default=None,
                   help=f"process count (default: ${optimizer.THREADS_ENV_VAR} or CPU count)")
    p.add_argument("--equiv-tol", type=float, default=1e-4,
                   help="tolerance for the equivalence verdicts")
    p.add_argument("--out", required=True, help="report CSV path")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("qp", help="exact simplex extremum of a rational quadratic form")
    p.add_argument("matrix", help="path to a JSON 2-D array of 'num/den' entries")
    p.add_argument("--sense", required=True, choices=["max", "min"])
    p.add_argument("--grid-check", type=int, default=None,
                   help="also verify against the denominator-N grid")
    p.add_argument("--out", help="write the witness JSON here instead of stdout")
    p.set_defaults(func=cmd_qp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StructureError, DimensionMismatchError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FalsificationError as exc:
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    raise SystemExit(main())
