"""Batch command-line front end.

Subcommands: dist, ci, test, simulate, audit, repair-sweep.  Single results
print as JSON on stdout, tables and sweeps as CSV; diagnostics go to stderr.
Exit codes: 0 success, 2 usage/input errors, 3 numerical failures.
``WASSER_INFER_THREADS`` caps replication parallelism; ``WASSER_INFER_BACKEND``
selects the numba or numpy kernel lane.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import fairness, montecarlo
from .distributions import GaussianDist, load_sample
from .errors import NumericalError, SingularMatrix, WasserInferError
from .inference import confidence_interval, similarity_test
from .transport import wasserstein_pp_one_sample, wasserstein_pp_two_sample

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit_json(payload: dict, out) -> None:
    json.dump(_sanitize(payload), out, indent=2)
    out.write("\n")


def _emit_single(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        _emit_json(payload, out)
        return
    keys = list(payload)
    out.write(",".join(keys) + "\n")
    out.write(",".join(str(_sanitize(payload)[k]) for k in keys) + "\n")


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


# ---------------------------------------------------------------------------
# subcommands


def _cmd_dist(args) -> int:
    if (args.y is None) == (args.gaussian is None):
        raise WasserInferError("dist needs a second sample file or --gaussian MU,SIGMA (not both)")
    x = load_sample(args.x, args.column)
    if args.gaussian is not None:
        mu, sigma = (float(v) for v in args.gaussian.split(","))
        result = wasserstein_pp_one_sample(x, GaussianDist(mu, sigma), args.p, args.quad_order)
    else:
        y = load_sample(args.y, args.column)
        result = wasserstein_pp_two_sample(x, y, args.p)
    _emit_single(result.to_dict(), args.format, sys.stdout)
    return 0


def _cmd_ci(args) -> int:
    x = load_sample(args.x, args.column)
    y = load_sample(args.y, args.column)
    verdict = confidence_interval(x, y, args.p, args.alpha)
    _emit_single(verdict.to_dict(), args.format, sys.stdout)
    return 0


def _cmd_test(args) -> int:
    x = load_sample(args.x, args.column)
    y = load_sample(args.y, args.column)
    verdict = similarity_test(x, y, args.p, args.delta0, args.alpha)
    _emit_single(verdict.to_dict(), args.format, sys.stdout)
    return 0


def _scaled_grid(n_list, scale: float):
    cap = scale * max(n_list)
    kept = tuple(n for n in n_list if n <= cap)
    return kept or (min(n_list),)


def _cmd_simulate(args) -> int:
    scale = args.scale
    if not (0.0 < scale <= 1.0):
        raise WasserInferError(f"--scale must lie in (0, 1], got {scale}")
    comments = [
        f"table={args.table} seed={args.seed} scale={scale}",
    ]
    if args.table == 1:
        reps = args.reps if args.reps is not None else 1
        reps = max(1, math.ceil(reps * scale))
        rows = montecarlo.run_table1(
            n_list=_scaled_grid(montecarlo.TABLE1_N, scale),
            replications=reps, seed=args.seed,
        )
    else:
        reps = args.reps if args.reps is not None else 1000
        reps = max(1, math.ceil(reps * scale))
        n_list = _scaled_grid(montecarlo.TABLE23_N, scale)
        if args.table == 2:
            rows = montecarlo.run_table2(n_list=n_list, replications=reps, seed=args.seed)
        else:
            for p in montecarlo.DEFAULT_P:
                comments.append(f"delta0 p={p}: {montecarlo.table3_delta0(p)!r}")
            rows = montecarlo.run_table3(n_list=n_list, replications=reps, seed=args.seed)
    comments.append(f"replications={reps}")

    out, should_close = _open_out(args.out)
    try:
        if args.format == "json":
            _emit_json({"comments": comments, "rows": montecarlo.rows_to_records(rows)}, out)
        else:
            montecarlo.rows_to_csv(rows, out, comments=comments)
    finally:
        if should_close:
            out.close()
    return 0


_SCHEMA_KEYS = (
    "features", "label_column", "positive_label", "negative_label",
    "protected_column", "protected_value",
)


def _read_config(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise WasserInferError(f"{path}:{lineno}: expected key=value, got {text!r}")
            key, value = text.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _dataset_from_args(args) -> fairness.LabeledDataset:
    cfg = _read_config(args.config) if args.config else {}
    merged = {k: getattr(args, k, None) or cfg.get(k) for k in _SCHEMA_KEYS}
    missing = [k for k in ("features", "label_column", "positive_label",
                           "protected_column", "protected_value") if not merged[k]]
    if missing:
        raise WasserInferError(f"missing dataset schema option(s): {missing} "
                               "(pass flags or a --config file)")
    return fairness.load_csv_dataset(
        args.data,
        feature_columns=[c.strip() for c in merged["features"].split(",") if c.strip()],
        label_column=merged["label_column"],
        positive_label=merged["positive_label"],
        protected_column=merged["protected_column"],
        protected_value=merged["protected_value"],
        negative_label=merged["negative_label"],
    )


def _group_scores_from_args(args):
    data = _dataset_from_args(args)
    model = fairness.fit_logit(data)
    s0, s1 = fairness.group_scores(model, data)
    return data, model, s0, s1


def _cmd_audit(args) -> int:
    data, model, s0, s1 = _group_scores_from_args(args)
    verdict = similarity_test(s0, s1, args.p, args.delta0, args.alpha)
    report = {
        "group_sizes": {"s0": s0.n, "s1": s1.n},
        "dropped_rows": data.dropped_count,
        "cutoff": args.cutoff,
        "di": fairness.disparate_impact(s0, s1, args.cutoff, flip=args.flip_di),
        "ber": fairness.balanced_error_rate(s0, s1, args.cutoff),
        "model_converged": model.converged,
        "verdict": verdict.to_dict(),
    }
    _emit_json(report, sys.stdout)
    return 0


def _cmd_repair_sweep(args) -> int:
    data, _, s0, s1 = _group_scores_from_args(args)
    if args.thetas:
        grid = [float(v) for v in args.thetas.split(",")]
    else:
        steps = args.theta_steps
        grid = [i / steps for i in range(steps + 1)]
    rows = fairness.repair_sweep(
        s0, s1, grid, p=args.p, alpha=args.alpha, cutoff=args.cutoff, flip_di=args.flip_di
    )
    comments = [
        f"p={args.p} alpha={args.alpha} cutoff={args.cutoff} "
        f"n0={s0.n} n1={s1.n} dropped_rows={data.dropped_count}",
    ]
    out, should_close = _open_out(args.out)
    try:
        if args.format == "json":
            _emit_json({"comments": comments,
                        "rows": [r.to_record() for r in rows]}, out)
        else:
            fairness.sweep_to_csv(rows, out, comments=comments)
    finally:
        if should_close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_schema_flags(sp) -> None:
    sp.add_argument("--data", required=True, help="dataset CSV with header row")
    sp.add_argument("--config", help="key=value file holding the schema options below")
    sp.add_argument("--features", help="comma-separated numeric feature columns")
    sp.add_argument("--label-column", dest="label_column")
    sp.add_argument("--positive-label", dest="positive_label")
    sp.add_argument("--negative-label", dest="negative_label")
    sp.add_argument("--protected-column", dest="protected_column")
    sp.add_argument("--protected-value", dest="protected_value",
                    help="rows with this value form group S=1")
    sp.add_argument("--cutoff", type=float, default=0.5)
    sp.add_argument("--flip-di", action="store_true",
                    help="swap the DI numerator/denominator orientation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wasserinfer",
        description="Distances, intervals and similarity tests for one-dimensional "
                    "transport costs, plus simulation tables and fairness audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("dist", help="transport cost between two samples or sample vs Gaussian")
    sp.add_argument("x", help="first sample file")
    sp.add_argument("y", nargs="?", help="second sample file")
    sp.add_argument("--gaussian", metavar="MU,SIGMA", help="analytic second marginal")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--quad-order", type=int, default=16)
    sp.add_argument("--column", help="read samples from this CSV column")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=_cmd_dist)

    sp = sub.add_parser("ci", help="confidence interval for the transport cost")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--column")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=_cmd_ci)

    sp = sub.add_parser("test", help="one-sided similarity test")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--delta0", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--column")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=_cmd_test)

    sp = sub.add_parser("simulate", help="regenerate a benchmark table")
    sp.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--reps", type=int, help="replications per cell (default: 1 for table 1, 1000 otherwise)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale", type=float, default=1.0,
                    help="shrink the grid and replication counts by this factor")
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("audit", help="fairness audit of logit scores across a protected attribute")
    _add_schema_flags(sp)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--delta0", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.set_defaults(func=_cmd_audit)

    sp = sub.add_parser("repair-sweep", help="geometric repair sweep with distance, CI, DI, BER")
    _add_schema_flags(sp)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--thetas", help="comma-separated repair amounts in [0,1]")
    sp.add_argument("--theta-steps", dest="theta_steps", type=int, default=20,
                    help="use an even grid of this many steps when --thetas is absent")
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=_cmd_repair_sweep)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except (NumericalError, SingularMatrix) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except (WasserInferError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
