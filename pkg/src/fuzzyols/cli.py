"""Command-line front end.

Exit codes: 0 success, 1 computation error, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import __version__
from .config import MODES, PipelineConfig
from .crossval import DEFAULT_ALPHAS, average_curve, cross_validate, fold_rows, format_table
from .data import load_csv
from .exceptions import DataFormatError, FisFormatError, FuzzyOLSError
from .fis import FuzzyInferenceSystem
from .metrics import evaluate, format_report
from .ols import format_trace
from .serialization import dumps_fis, load_fis
from .structure import learn, selection_curve
from .vocabulary import reduce_vocabulary

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2

# flag name -> config field; every one defaults to None so unset flags leave the config alone
CONFIG_FLAGS = {
    "mode": "mode", "alpha": "alpha", "epsilon": "epsilon", "max_rules": "max_rules", "s": "s",
    "n_max": "n_max", "iter_max": "iter_max", "thres": "thres", "c": "c",
    "conjunction": "conjunction", "seed": "seed",
}


class UsageError(Exception):
    pass


def _max_rules(text: str):
    if text.lower() in ("none", "unlimited", "inf"):
        return None
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("--max-rules must be >= 1 or 'none'")
    return value


def _float_list(text: str):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cap_list(text: str):
    return tuple(_max_rules(v.strip()) for v in text.split(",") if v.strip())


def _config_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("learning parameters")
    g.add_argument("--config", type=Path, help="key = value file; flags override it")
    g.add_argument("--mode", choices=MODES)
    g.add_argument("--alpha", type=float, help="activation threshold (default 0.1)")
    g.add_argument("--epsilon", type=float, help="unexplained-variance stop (default 0.01)")
    g.add_argument("--max-rules", type=_max_rules, default=argparse.SUPPRESS, help="rule cap or 'none'")
    g.add_argument("--s", type=float, help="Gaussian width scale for the original mode (default 0.2)")
    g.add_argument("--n-max", type=int, help="largest partition size per input (default 7)")
    g.add_argument("--iter-max", type=int, help="refinement iterations (default 20)")
    g.add_argument("--thres", type=float, help="coverage required of the chosen partition (default 0.9)")
    g.add_argument("--c", type=int, help="output vocabulary size; unset for no reduction")
    g.add_argument("--conjunction", choices=("min", "prod"))
    g.add_argument("--seed", type=int, help="seed for every random choice (default 42)")
    return p


def _data_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--data", type=Path, required=True, help="CSV file with a header row")
    p.add_argument("--output-col", help="output column name or index (default: last column)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzyols", description="Fuzzy rule bases by orthogonal least squares.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress warnings")
    sub = parser.add_subparsers(dest="command", required=True)
    cfg, data = _config_parent(), _data_parent()

    p = sub.add_parser("learn", parents=[data, cfg], help="learn a system and write it with its trace and report")
    p.add_argument("--out-dir", type=Path, default=Path("."), help="where fis.json, trace.csv, report.csv go")
    p.add_argument("--emit-curves", action="store_true", help="also write curves.csv (PI/CI per rule count)")

    p = sub.add_parser("crossval", parents=[data, cfg], help="k-fold cross-validation table")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seeds", type=_int_list, help="fold seeds, comma-separated (default: --seed)")
    p.add_argument("--caps", type=_cap_list, help="rule caps, e.g. none,15,10,5 (default: --max-rules)")
    p.add_argument("--alphas", type=_float_list, default=DEFAULT_ALPHAS, help="evaluation thresholds")
    p.add_argument("--workers", type=int, default=1, help="folds run in parallel processes")
    p.add_argument("--out-dir", type=Path, help="also write folds.csv (and curves.csv) here")
    p.add_argument("--emit-curves", action="store_true", help="fold-averaged test PI/CI per rule count")

    p = sub.add_parser("describe", help="print the rule base in words")
    p.add_argument("fis", type=Path)
    p.add_argument("--labels", help="comma-separated set labels, used for partitions of that many sets")
    p.add_argument("--precision", type=int, default=3, help="decimals of the conclusions")

    p = sub.add_parser("evaluate", parents=[data], help="coverage and accuracy of a saved system")
    p.add_argument("fis", type=Path)
    p.add_argument("--alpha", type=_float_list, default=DEFAULT_ALPHAS, help="thresholds, comma-separated")
    p.add_argument("--out", type=Path, help="write the report for the first threshold here")

    p = sub.add_parser("reduce", parents=[data], help="snap conclusions onto c output levels")
    p.add_argument("fis", type=Path)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path, required=True)
    return parser


def config_from_args(args) -> PipelineConfig:
    base = PipelineConfig()
    if getattr(args, "config", None) is not None:
        try:
            base = PipelineConfig.from_file(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror or exc}") from exc
        except ValueError as exc:
            raise UsageError(f"{args.config}: {exc}") from exc
    changes = {}
    for flag, name in CONFIG_FLAGS.items():
        if flag == "max_rules":
            if hasattr(args, "max_rules"):
                changes[name] = args.max_rules
            continue
        value = getattr(args, flag, None)
        if value is not None:
            changes[name] = value
    try:
        return base.replace(**changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load_data(args):
    if not args.data.is_file():
        raise UsageError(f"data file not found: {args.data}")
    return load_csv(args.data, args.output_col)


def _load_fis(path: Path) -> FuzzyInferenceSystem:
    if not path.is_file():
        raise UsageError(f"FIS file not found: {path}")
    return load_fis(path)


def _write_rows(path: Path, rows, fields):
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in fields})


def _out_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {path}: {exc.strerror or exc}") from exc
    return path


def cmd_learn(args, out) -> int:
    config = config_from_args(args)
    data = _load_data(args)
    out_dir = _out_dir(args.out_dir)
    result = learn(data, config)
    (out_dir / "fis.json").write_text(dumps_fis(result.fis))
    (out_dir / "trace.csv").write_text(format_trace(result.trace))
    (out_dir / "report.csv").write_text(format_report(result.training_report))
    if args.emit_curves:
        rows = selection_curve(result, data, DEFAULT_ALPHAS)
        _write_rows(out_dir / "curves.csv", rows, ("n_rules", "alpha", "ci", "pi", "rmse"))
    rep = result.training_report
    print(f"# data = {args.data} ({data.n_samples} rows, {data.n_inputs} inputs, output {data.output_name})", file=out)
    print(config.to_text(), end="", file=out)
    print(f"# rules = {result.n_rules}", file=out)
    print(f"# stop = {result.selection.stop_reason}", file=out)
    print(f"# mf_per_variable = {result.fis.mean_mfs_per_variable():.3f}", file=out)
    print(f"# training alpha={rep.alpha:g} ci={rep.ci:.4f} pi={_num(rep.pi)} rmse={_num(rep.rmse)} mae={_num(rep.mae)}",
          file=out)
    print(f"# wrote {out_dir / 'fis.json'}, {out_dir / 'trace.csv'}, {out_dir / 'report.csv'}", file=out)
    return EXIT_OK


def _num(v, digits=4):
    return "none" if v is None else f"{v:.{digits}f}"


def cmd_crossval(args, out) -> int:
    config = config_from_args(args)
    data = _load_data(args)
    if args.folds < 2:
        raise UsageError("--folds must be >= 2")
    if data.n_samples < args.folds:
        raise UsageError(f"cannot split {data.n_samples} rows into {args.folds} folds")
    seeds = args.seeds or (config.seed,)
    caps = args.caps or (config.max_rules,)
    results = {}
    for cap in caps:
        results[cap] = cross_validate(
            data, config.replace(max_rules=cap), args.folds, seeds, args.alphas, args.workers, args.emit_curves
        )
    print(f"# data = {args.data} ({data.n_samples} rows); folds = {args.folds}; seeds = "
          f"{','.join(map(str, seeds))}", file=out)
    print(config.to_text(), end="", file=out)
    print(format_table(results, args.alphas, label=config.mode[:4] + ". "), end="", file=out)
    if args.out_dir is not None:
        out_dir = _out_dir(args.out_dir)
        rows = [r for cap in caps for r in fold_rows(results[cap], cap)]
        _write_rows(out_dir / "folds.csv", rows, list(rows[0]))
        if args.emit_curves:
            curve = [dict(max_rules="none" if cap is None else cap, **row)
                     for cap in caps for row in average_curve(results[cap])]
            _write_rows(out_dir / "curves.csv", curve, list(curve[0]) if curve else ["max_rules"])
    elif args.emit_curves:
        raise UsageError("--emit-curves needs --out-dir")
    return EXIT_OK


def describe_rules(fis: FuzzyInferenceSystem, labels=None, precision: int = 3) -> str:
    """One line per rule, in stored order, e.g. ``If v1 is A_3 and v2 is A_1, then output is 0.999``."""
    if fis.n_rules == 0:
        return "0 rules\n"
    lines = [f"{fis.n_rules} rule{'s' if fis.n_rules != 1 else ''}"]
    for q, rule in enumerate(fis.rules, start=1):
        terms = []
        for v, s in rule.premise:
            size = fis.partitions[v].size
            term = labels[s] if labels is not None and len(labels) == size else f"A_{s + 1}"
            terms.append(f"{fis.input_names[v]} is {term}")
        value = f"{rule.conclusion:.{precision}f}"
        if terms:
            lines.append(f"Rule {q}: If {' and '.join(terms)}, then output is {value}")
        else:
            lines.append(f"Rule {q}: then output is {value}")
    return "\n".join(lines) + "\n"


def cmd_describe(args, out) -> int:
    fis = _load_fis(args.fis)
    if args.precision < 0:
        raise UsageError("--precision must be >= 0")
    labels = [t.strip() for t in args.labels.split(",")] if args.labels else None
    print(describe_rules(fis, labels, args.precision), end="", file=out)
    return EXIT_OK


def cmd_evaluate(args, out) -> int:
    fis = _load_fis(args.fis)
    data = _load_data(args)
    if not args.alpha:
        raise UsageError("at least one --alpha value is required")
    print("alpha\tn_active\tci\tpi\trmse\tmae", file=out)
    first = None
    for a in args.alpha:
        if not 0 <= a < 1:
            raise UsageError(f"alpha must lie in [0, 1), got {a}")
        rep = evaluate(fis, data.X, data.y, a)
        if first is None:
            first = rep
        print(f"{a:g}\t{rep.n_active}\t{rep.ci:.4f}\t{_num(rep.pi, 6)}\t{_num(rep.rmse)}\t{_num(rep.mae)}", file=out)
    if args.out is not None:
        args.out.write_text(format_report(first))
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    fis = _load_fis(args.fis)
    data = _load_data(args)
    reduced = reduce_vocabulary(fis, data.y, args.c, args.seed)
    args.out.write_text(dumps_fis(reduced))
    before = evaluate(fis, data.X, data.y, 0.0)
    after = evaluate(reduced, data.X, data.y, 0.0)
    print(f"# distinct conclusions {len(set(fis.conclusions.tolist()))} -> {len(set(reduced.conclusions.tolist()))}",
          file=out)
    print(f"# pi(0) {_num(before.pi, 6)} -> {_num(after.pi, 6)}", file=out)
    print(f"# wrote {args.out}", file=out)
    return EXIT_OK


COMMANDS = {
    "learn": cmd_learn, "crossval": cmd_crossval, "describe": cmd_describe,
    "evaluate": cmd_evaluate, "reduce": cmd_reduce,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="warning: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, FisFormatError, DataFormatError) as exc:
        print(f"fuzzyols: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fuzzyols: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FuzzyOLSError, ValueError, ArithmeticError) as exc:
        print(f"fuzzyols: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
