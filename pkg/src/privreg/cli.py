"""Command-line entry point: ``privreg <subcommand> [flags]``.

Exit status is 0 on success, 1 on runtime errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import bounds as B
from .errors import ConditionViolated, PrivregError
from .experiments import (
    ScheduleKind,
    classification_experiment,
    generate_blobs,
    generate_random_dataset,
    projection_schedule,
    sweep_epsilon,
    sweep_n,
)
from .io import ReportTable, emit_report, load_csv_dataset, report_metadata
from .mechanisms import calibrate_additive_noise, calibrate_projection_noise, mi_dp_to_dp

SCHEDULE_NAMES = ("log", "linear", "full", "none")


def _schedules(text: str, base: int) -> tuple[list[ScheduleKind], bool]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in names if s not in SCHEDULE_NAMES]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"schedules must be a comma list of {','.join(SCHEDULE_NAMES)}")
    return [ScheduleKind(s, base) for s in names if s != "none"], "none" in names


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from None


def _label_map(text: str) -> dict[str, float]:
    out = {}
    for part in text.split(","):
        key, sep, value = part.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"label map entries look like 4:1,9:-1, got {part!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad label value in {part!r}") from None
    return out


def _label_col(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def _delta_free(text: str):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--delta-free takes a positive number or 'auto'") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("--delta-free must be positive")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("--seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="privreg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schedules="log,linear,full,none", base=1000, trials=5):
        p.add_argument("--schedules", default=schedules,
                       help="comma list of log,linear,full,none (none = additive noise)")
        p.add_argument("--base", type=int, default=base, help="projection schedule base")
        p.add_argument("--trials", type=int, default=trials)
        p.add_argument("--seed", type=_seed, default=0, help="base seed; trial i uses seed + i")
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    p = sub.add_parser("sweep-n", help="relative error against n = n_per_k * k")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--d", type=int, default=800)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--n-per-k", type=int, default=1000)
    common(p)

    p = sub.add_parser("sweep-eps", help="relative error against epsilon at fixed n")
    p.add_argument("--epsilon", type=_float_list, default=[0.1, 0.2, 0.5, 1.0, 2.0, 4.0],
                   help="comma list of budgets in bits")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--d", type=int, default=800)
    p.add_argument("--k", type=int, default=None, help="schedule index (default n / n_per_k)")
    p.add_argument("--n-per-k", type=int, default=1000)
    common(p)

    p = sub.add_parser("classify", help="test error of a private least-squares classifier")
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--input-csv", default=None, help="CSV with +-1 labels (or use --label-map)")
    p.add_argument("--label-col", type=_label_col, default=-1)
    p.add_argument("--label-map", type=_label_map, default=None, help="e.g. 4:1,9:-1")
    p.add_argument("--max-rows", type=int, default=None, help="sample this many rows without replacement")
    p.add_argument("--n", type=int, default=2000, help="synthetic data size when no CSV is given")
    p.add_argument("--d", type=int, default=50)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--split", type=float, default=0.8)
    common(p, base=200, trials=10)

    p = sub.add_parser("bounds", help="evaluate the theoretical bounds for one dataset")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--input-csv", default=None)
    p.add_argument("--label-col", type=_label_col, default=-1)
    p.add_argument("--n", type=int, default=1000, help="synthetic data size when no CSV is given")
    p.add_argument("--d", type=int, default=100)
    p.add_argument("--n-prime", type=int, default=None, help="projection dimension (default: log schedule)")
    p.add_argument("--delta-free", type=_delta_free, default="auto")
    p.add_argument("--base", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("calibrate", help="print the calibrated noise variances")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n-prime", type=int, default=1)
    p.add_argument("--f-sq", type=float, default=0.0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", default="-")
    return parser


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "out"}


def _cmd_sweep_n(args, parser):
    scheds, with_an = _parse_schedules(args, parser)
    if args.k_min < 1 or args.k_max < args.k_min:
        parser.error("need 1 <= --k-min <= --k-max")
    recs = sweep_n(args.d, args.epsilon, range(args.k_min, args.k_max + 1), scheds, args.trials, args.seed,
                   n_per_k=args.n_per_k, include_additive=with_an)
    return ReportTable.from_records(recs, report_metadata(args.seed, _config_echo(args)),
                                    header=_TRADEOFF_HEADER)


def _cmd_sweep_eps(args, parser):
    scheds, with_an = _parse_schedules(args, parser)
    recs = sweep_epsilon(args.n, args.d, args.epsilon, scheds, args.trials, args.seed, k=args.k,
                         n_per_k=args.n_per_k, include_additive=with_an)
    return ReportTable.from_records(recs, report_metadata(args.seed, _config_echo(args)),
                                    header=_TRADEOFF_HEADER)


def _cmd_classify(args, parser):
    scheds, with_an = _parse_schedules(args, parser)
    if args.input_csv:
        ds = load_csv_dataset(args.input_csv, args.label_col, args.label_map, args.max_rows, seed=args.seed)
        source = args.input_csv
    else:
        ds = generate_blobs(args.n, args.d, args.seed)
        source = "synthetic-blobs"
    recs = classification_experiment(ds, args.epsilon, scheds, args.split, args.trials, args.seed,
                                     k=args.k, include_additive=with_an)
    meta = report_metadata(args.seed, _config_echo(args), data=source, n=ds.n, d=ds.d)
    return ReportTable.from_records(recs, meta, header=_CLASSIFY_HEADER)


def _cmd_bounds(args, parser):
    if args.input_csv:
        ds = load_csv_dataset(args.input_csv, args.label_col, seed=args.seed)
    else:
        ds = generate_random_dataset(args.n, args.d, args.seed)
    ss = ds.spectral
    n_prime = args.n_prime
    if n_prime is None:
        n_prime = min(projection_schedule(ScheduleKind("log", args.base), max(1, round(ds.n / 1000))), ds.n - 1)
    rows = [("spectral", key, getattr(ss, key)) for key in ("sigma_max", "sigma_min", "kappa", "r", "f")]

    try:
        rep = B.additive_noise_bound(ss, args.epsilon, ds.n, ds.d, args.delta_free)
        rows += _report_rows("additive_noise", rep)
    except ConditionViolated as exc:
        Delta = B.additive_noise_delta(ss, args.epsilon, ds.n, ds.d)
        rows += [("additive_noise", "eta_bound", math.inf), ("additive_noise", "probability_lower_bound", 0.0),
                 ("additive_noise", "Delta", Delta), ("additive_noise", "condition_violated", str(exc))]

    delta_rp = args.delta_free if args.delta_free != "auto" else math.sqrt(ds.d / n_prime)
    rep = B.projection_bound(ss, args.epsilon, n_prime, delta_rp, ds.d)
    rows += [("random_projection", "n_prime", n_prime)] + _report_rows("random_projection", rep)
    rows.append(("random_projection", "unresolved_constants", ";".join(rep.unresolved)))

    lam = rep.intermediates["sigma_sq"]
    rows += [
        ("ridge", "lambda", lam),
        ("ridge", "relative_bound", B.ridge_relative_bound(ss.sigma_min, lam, ss.r)),
        ("ridge", "norm_bound", B.ridge_norm_bound(ss.singular_values, lam, ss.fit_norm)),
    ]
    ch = B.ChannelSpec(n_prime, lam, ss.f_sq)
    if ch.sigma_nu_sq > 0:
        rows += [("channel", "coherent_capacity_bits", B.coherent_simo_capacity(ch)),
                 ("channel", "noncoherent_capacity_bits", B.noncoherent_simo_capacity(ch))]
    meta = report_metadata(args.seed, _config_echo(args), n=ds.n, d=ds.d)
    return ReportTable(["bound", "quantity", "value"], rows, meta)


def _cmd_calibrate(args, parser):
    rows = [
        ("sigma_sq_additive", calibrate_additive_noise(args.epsilon)),
        ("sigma_sq_projection", calibrate_projection_noise(args.epsilon, args.n_prime, math.sqrt(args.f_sq))),
        ("dp_delta", mi_dp_to_dp(args.epsilon).delta_dp),
    ]
    return ReportTable(["quantity", "value"], rows, report_metadata(args.seed, _config_echo(args)))


def _report_rows(name, rep):
    rows = [(name, "eta_bound", rep.eta_bound), (name, "probability_lower_bound", rep.probability_lower_bound),
            (name, "delta_free", rep.delta_free)]
    rows += [(name, k, v) for k, v in rep.intermediates.items()]
    return rows


def _parse_schedules(args, parser):
    try:
        return _schedules(args.schedules, args.base)
    except (argparse.ArgumentTypeError, ValueError) as exc:
        parser.error(str(exc))


_TRADEOFF_HEADER = ["scheme", "schedule", "epsilon", "n", "d", "n_prime", "eta_mean", "eta_std", "trials", "base_seed"]
_CLASSIFY_HEADER = ["scheme", "schedule", "epsilon", "n", "n_prime", "test_error", "test_error_std",
                    "split_fraction", "trials", "base_seed"]

COMMANDS = {
    "sweep-n": _cmd_sweep_n,
    "sweep-eps": _cmd_sweep_eps,
    "classify": _cmd_classify,
    "bounds": _cmd_bounds,
    "calibrate": _cmd_calibrate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    try:
        table = COMMANDS[args.command](args, parser)
        emit_report(table, args.out)
    except (PrivregError, ValueError, OSError) as exc:
        print(f"privreg {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
