"""K-fold cross-validation harness and the comparison table layout."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import PipelineConfig
from .data import Dataset, make_folds, train_test
from .metrics import EvaluationReport, evaluate
from .serialization import dumps_fis
from .structure import learn, selection_curve

DEFAULT_ALPHAS = (0.0, 0.1, 0.2)


@dataclass(frozen=True)
class FoldResult:
    seed: int
    fold: int
    n_rules: int
    mfs_per_variable: float
    mfs_per_used_variable: float
    reports: dict[float, EvaluationReport]
    fis_json: str
    curve: tuple = ()


@dataclass(frozen=True)
class Summary:
    """Fold averages at one alpha. PI-type means skip folds with no active test sample."""

    alpha: float
    n_folds: int
    n_rules: float
    mfs_per_variable: float
    mfs_per_used_variable: float
    ci: float
    pi: float
    rmse: float
    mae: float
    undefined_folds: int


def _run_fold(args) -> FoldResult:
    dataset, config, seed, k, fold, alphas, with_curve = args
    plan = make_folds(dataset, k, seed)
    train, test = train_test(dataset, plan, fold)
    result = learn(train, config)
    reports = {a: evaluate(result.fis, test.X, test.y, a) for a in alphas}
    fis = result.fis
    curve = tuple(selection_curve(result, train, alphas, evaluation=test)) if with_curve else ()
    return FoldResult(
        seed, fold, fis.n_rules, fis.mean_mfs_per_variable(), fis.mean_mfs_per_used_variable(),
        reports, dumps_fis(fis), curve,
    )


def cross_validate(
    dataset: Dataset,
    config: PipelineConfig,
    k: int = 10,
    seeds=(42,),
    alphas=DEFAULT_ALPHAS,
    workers: int = 1,
    curves: bool = False,
) -> list[FoldResult]:
    """Learn on k-1 folds and test on the remaining one, for every fold and seed.

    Results come back ordered by seed, then fold, whatever ``workers`` is.
    With ``curves`` each fold also records test PI/CI for every prefix of the
    selected rules.
    """
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("at least one seed is required")
    for s in seeds:
        make_folds(dataset, k, s)
    jobs = [(dataset, config, s, k, f, tuple(alphas), curves) for s in seeds for f in range(k)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_fold, jobs))
    return [_run_fold(job) for job in jobs]


def _mean_defined(values) -> float:
    vals = [v for v in values if v is not None]
    return float(np.mean(vals)) if vals else math.nan


def summarize(folds: list[FoldResult], alpha: float) -> Summary:
    reps = [f.reports[alpha] for f in folds]
    return Summary(
        alpha=alpha,
        n_folds=len(folds),
        n_rules=float(np.mean([f.n_rules for f in folds])),
        mfs_per_variable=float(np.mean([f.mfs_per_variable for f in folds])),
        mfs_per_used_variable=float(np.mean([f.mfs_per_used_variable for f in folds])),
        ci=float(np.mean([r.ci for r in reps])),
        pi=_mean_defined([r.pi for r in reps]),
        rmse=_mean_defined([r.rmse for r in reps]),
        mae=_mean_defined([r.mae for r in reps]),
        undefined_folds=sum(r.pi is None for r in reps),
    )


def fold_rows(folds: list[FoldResult], cap) -> list[dict]:
    rows = []
    for f in folds:
        for a, r in f.reports.items():
            rows.append({
                "max_rules": "none" if cap is None else cap, "seed": f.seed, "fold": f.fold, "alpha": a,
                "n_rules": f.n_rules, "mf": f.mfs_per_variable, "mf_used": f.mfs_per_used_variable,
                "n_active": r.n_active, "ci": r.ci, "pi": r.pi, "rmse": r.rmse, "mae": r.mae,
            })
    return rows


def average_curve(folds: list[FoldResult]) -> list[dict]:
    """Fold-averaged curve rows keyed by (prefix length, alpha); means skip undefined PI."""
    groups: dict[tuple[int, float], list[dict]] = {}
    for f in folds:
        for row in f.curve:
            groups.setdefault((row["n_rules"], row["alpha"]), []).append(row)
    out = []
    for (n, a), rows in sorted(groups.items()):
        out.append({
            "n_rules": n, "alpha": a, "n_folds": len(rows),
            "ci": float(np.mean([r["ci"] for r in rows])),
            "pi": _mean_defined([r["pi"] for r in rows]),
            "rmse": _mean_defined([r["rmse"] for r in rows]),
        })
    return out


def _cell(v, digits=2) -> str:
    return "-" if v is None or (isinstance(v, float) and math.isnan(v)) else f"{v:.{digits}f}"


def format_table(results: dict, alphas=DEFAULT_ALPHAS, label: str = "") -> str:
    """Rows per alpha, one column group per rule cap.

    ``results`` maps a rule cap (None for unlimited) to the fold results run
    with that cap. The #MF columns come from the first cap. Each group shows
    the mean rule count, PI, RMSE, CI and MAE on the test folds.
    """
    caps = list(results)
    head = ["row", "#MF", "#MF(used)"]
    for cap in caps:
        tag = "inf" if cap is None else str(cap)
        head += [f"#R[{tag}]", f"PI[{tag}]", f"RMSE[{tag}]", f"CI[{tag}]", f"MAE[{tag}]"]
    lines = ["\t".join(head)]
    for a in alphas:
        first = summarize(results[caps[0]], a)
        cells = [f"{label}({a:g})", _cell(first.mfs_per_variable, 1), _cell(first.mfs_per_used_variable, 1)]
        for cap in caps:
            s = summarize(results[cap], a)
            cells += [_cell(s.n_rules, 1), _cell(s.pi, 4), _cell(s.rmse), _cell(s.ci), _cell(s.mae)]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"
