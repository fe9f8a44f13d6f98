"""Partition-size refinement, FIS generation and the two learning pipelines."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .config import PipelineConfig
from .data import Dataset
from .exceptions import CoverageConstraintError, EmptyRuleBaseError
from .fis import FuzzyInferenceSystem, FuzzyPartition, Rule
from .metrics import EvaluationReport, evaluate, pi_from_errors
from .ols import (
    OlsSelection,
    SecondPassResult,
    assemble_problem,
    ols_select,
    second_pass,
    trace_rows,
)
from .partitioning import (
    PartitionHierarchy,
    build_gaussian_candidate_rules,
    build_partition_hierarchy,
)
from .vocabulary import reduce_vocabulary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratedFIS:
    """A system built from partition sizes, with its training PI and CI."""

    sizes: tuple[int, ...]
    fis: FuzzyInferenceSystem
    pi: float
    ci: float
    iteration: int = 0

    @property
    def n_rules(self) -> int:
        return self.fis.n_rules


@dataclass
class RefinementState:
    """Kept systems in order of increasing complexity plus every probe made."""

    sizes: tuple[int, ...]
    iteration: int
    kept: list[GeneratedFIS] = field(default_factory=list)
    probes: list[tuple[int, tuple[int, ...], float, float]] = field(default_factory=list)

    @property
    def history(self) -> list[tuple[tuple[int, ...], float, float]]:
        return [(g.sizes, g.pi, g.ci) for g in self.kept]


def _bracket(part: FuzzyPartition, x: np.ndarray):
    """Lower set index and the two nonzero memberships of x in a standardized partition."""
    c = np.asarray(part.centers)
    lo = np.clip(np.searchsorted(c, x, side="right") - 1, 0, c.size - 2)
    c_lo = c[lo]
    c_hi = c[lo + 1]
    width = c_hi - c_lo
    mu_lo = np.clip((c_hi - x) / width, 0.0, 1.0)
    mu_hi = np.clip((x - c_lo) / width, 0.0, 1.0)
    return lo.astype(np.int64), mu_lo, mu_hi


def _partitions_for(sizes, hierarchies) -> list[FuzzyPartition]:
    return [h[n] for n, h in zip(sizes, hierarchies)]


def fired_premises(partitions, X, conjunction="min", thresh=0.0):
    """All premises over ``partitions`` that some sample fires above ``thresh``.

    Variables whose partition has a single set carry no premise term. Returns
    ``(vars, codes, sample, code_index, firing)``: ``codes`` are the distinct
    premise codes in increasing order, and the triplets list every
    (sample, premise, firing) with firing above ``thresh``, sorted by sample
    then premise.
    """
    X = np.asarray(X, dtype=float)
    variables = [j for j, part in enumerate(partitions) if part.size > 1]
    n = X.shape[0]
    q = len(variables)
    lo = np.zeros((n, q), dtype=np.int64)
    mu_lo = np.zeros((n, q))
    mu_hi = np.zeros((n, q))
    strides = np.zeros(q, dtype=np.int64)
    stride = 1
    for col in range(q - 1, -1, -1):
        j = variables[col]
        lo[:, col], mu_lo[:, col], mu_hi[:, col] = _bracket(partitions[j], X[:, j])
        strides[col] = stride
        stride *= partitions[j].size
    sample, code, firing = kernels.fired_premises(lo, mu_lo, mu_hi, strides, conjunction == "prod", float(thresh))
    order = np.lexsort((code, sample))
    sample, code, firing = sample[order], code[order], firing[order]
    codes, inverse = np.unique(code, return_inverse=True)
    return variables, codes, strides, sample, inverse.ravel(), firing


def _decode(code: int, variables, strides, partitions) -> tuple[tuple[int, int], ...]:
    out = []
    for j, st in zip(variables, strides):
        out.append((j, int(code // st) % partitions[j].size))
    return tuple(out)


def generate_fis(
    sizes,
    X,
    y,
    alpha: float,
    hierarchies: list[PartitionHierarchy],
    conjunction: str = "min",
    literal_conclusions: bool = False,
    input_names=(),
    output_name: str = "y",
    input_ranges=(),
    iteration: int = 0,
) -> GeneratedFIS:
    """Cross-product rule base over the partitions of the given sizes.

    Rules no training sample fires above ``alpha`` are removed. Survivors
    conclude the firing-weighted mean of ``y`` (or the sum divided by N with
    ``literal_conclusions``). PI and CI are measured on the training data at
    ``alpha``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    sizes = tuple(int(n) for n in sizes)
    partitions = _partitions_for(sizes, hierarchies)
    variables, codes, strides, sample, idx, w = fired_premises(partitions, X, conjunction, 0.0)
    n_codes = codes.size
    max_w = np.zeros(n_codes)
    np.maximum.at(max_w, idx, w)
    keep = max_w > alpha
    if not keep.any():
        raise EmptyRuleBaseError(f"empty rule base at alpha={alpha} for sizes {sizes}")
    den = np.bincount(idx, weights=w, minlength=n_codes)
    num = np.bincount(idx, weights=w * y[sample], minlength=n_codes)
    conclusions = num / (X.shape[0] if literal_conclusions else den)

    surv = keep[idx]
    s_sample, s_idx, s_w = sample[surv], idx[surv], w[surv]
    n = X.shape[0]
    tot = np.bincount(s_sample, weights=s_w, minlength=n)
    pnum = np.bincount(s_sample, weights=s_w * conclusions[s_idx], minlength=n)
    best = np.zeros(n)
    np.maximum.at(best, s_sample, s_w)
    active = best > alpha
    pred = np.divide(pnum, tot, out=np.full(n, np.nan), where=tot > 0)
    err = (pred - y)[active]
    pi = pi_from_errors(err) if err.size else float("inf")
    ci = active.sum() / n

    rules = [
        Rule(_decode(int(codes[r]), variables, strides, partitions), conclusions[r])
        for r in np.flatnonzero(keep)
    ]
    fis = FuzzyInferenceSystem(
        partitions=tuple(partitions),
        rules=tuple(rules),
        conjunction=conjunction,
        input_ranges=tuple(input_ranges),
        input_names=tuple(input_names),
        output_name=output_name,
        regime="standardized",
    )
    return GeneratedFIS(sizes, fis, pi, float(ci), iteration)


def build_hierarchies(X, n_max: int, seed: int = 0) -> list[PartitionHierarchy]:
    X = np.asarray(X, dtype=float)
    return [build_partition_hierarchy(X[:, j], n_max, seed, j) for j in range(X.shape[1])]


def refine(
    X,
    y,
    hierarchies: list[PartitionHierarchy],
    iter_max: int = 20,
    alpha: float = 0.1,
    conjunction: str = "min",
    literal_conclusions: bool = False,
    **fis_kwargs,
) -> RefinementState:
    """Grow one variable's partition per iteration, picking the one with the lowest PI.

    Starts from the one-rule system (every size 1), which counts as the
    first kept system; at most ``iter_max`` systems are kept. Stops early
    when every variable has reached its largest available partition.
    """
    if iter_max < 1:
        raise ValueError("iter_max must be >= 1")
    caps = [h.max_size for h in hierarchies]
    p = len(hierarchies)

    def gen(sizes, iteration):
        return generate_fis(
            sizes, X, y, alpha, hierarchies, conjunction, literal_conclusions, iteration=iteration, **fis_kwargs
        )

    sizes = [1] * p
    state = RefinementState(tuple(sizes), 1, [gen(sizes, 1)])
    while len(state.kept) < iter_max:
        open_vars = [j for j in range(p) if sizes[j] < caps[j]]
        if not open_vars:
            break
        iteration = len(state.kept) + 1
        trial: dict[int, GeneratedFIS] = {}
        scores = {}
        for j in open_vars:
            sizes[j] += 1
            try:
                trial[j] = gen(sizes, iteration)
                scores[j] = trial[j].pi
                state.probes.append((iteration, tuple(sizes), trial[j].pi, trial[j].ci))
            except EmptyRuleBaseError:
                scores[j] = float("inf")
                state.probes.append((iteration, tuple(sizes), float("inf"), 0.0))
            sizes[j] -= 1
        best_pi = min(scores.values())
        s = min(j for j in open_vars if scores[j] == best_pi)
        sizes[s] += 1
        kept = trial.get(s)
        if kept is None:
            logger.warning("no probe produced a rule base at iteration %d; stopping", iteration)
            sizes[s] -= 1
            break
        state.kept.append(kept)
        state.sizes = tuple(sizes)
        state.iteration = iteration
    return state


def select_best_fis(kept: list[GeneratedFIS], thres: float = 0.9) -> GeneratedFIS:
    """Lowest PI among systems whose coverage reaches ``thres``.

    Ties go to fewer rules, then to the earlier system.
    """
    if not kept:
        raise ValueError("no candidate systems")
    ok = [(g.pi, g.n_rules, i) for i, g in enumerate(kept) if g.ci >= thres]
    if not ok:
        best_ci = max(g.ci for g in kept)
        raise CoverageConstraintError(
            f"no system reaches CI >= {thres}; best achievable CI is {best_ci:.4f}", best_ci
        )
    return kept[min(ok)[2]]


@dataclass
class PipelineResult:
    fis: FuzzyInferenceSystem
    selection: OlsSelection
    second_pass: SecondPassResult
    candidates: FuzzyInferenceSystem
    config: PipelineConfig
    training_report: EvaluationReport
    trace: list[dict]
    refinement: RefinementState | None = None
    best: GeneratedFIS | None = None
    unreduced: FuzzyInferenceSystem | None = None

    @property
    def n_rules(self) -> int:
        return self.fis.n_rules

    @property
    def mfs_per_variable(self) -> float:
        return self.fis.mean_mfs_per_variable()


def premise_label(rule: Rule, names) -> str:
    if not rule.premise:
        return "(any)"
    return " & ".join(f"{names[v]}=A{s + 1}" for v, s in rule.premise)


def activation_counts(fis: FuzzyInferenceSystem, X, alpha: float):
    """Per rule: samples firing it above ``alpha``, and samples firing it and no other rule."""
    w = fis.firing_strengths(X) > alpha
    alone = w.sum(axis=1) == 1
    return [(int(w[:, q].sum()), int((w[:, q] & alone).sum())) for q in range(fis.n_rules)]


def _fit_selected(candidates: FuzzyInferenceSystem, selection: OlsSelection, X, y, norm_tol, count=None):
    """Selected rules, in selection order, with second-pass conclusions."""
    chosen = list(selection.selected if count is None else selection.selected[:count])
    fis = candidates.with_rules(candidates.rules[i] for i in chosen)
    problem, _ = assemble_problem(fis, X, y)
    sp = second_pass(problem, norm_tol=norm_tol)
    if sp.dropped:
        logger.warning("second pass dropped %d numerically dependent rule(s)", len(sp.dropped))
    rules = [fis.rules[i].with_conclusion(t) for i, t in zip(sp.kept, sp.theta)]
    return fis.with_rules(rules), sp


def _prune_gaussian(fis: FuzzyInferenceSystem) -> FuzzyInferenceSystem:
    """Drop Gaussian sets no rule uses and renumber the rest."""
    used = [sorted({s for r in fis.rules for v, s in r.premise if v == j}) for j in range(fis.n_inputs)]
    remap = [{old: new for new, old in enumerate(u)} for u in used]
    partitions = []
    for j, part in enumerate(fis.partitions):
        keep = used[j] or [0]
        partitions.append(
            FuzzyPartition(j, tuple(part.centers[k] for k in keep), tuple(part.mfs[k] for k in keep), False)
        )
    rules = [Rule(tuple((v, remap[v][s]) for v, s in r.premise), r.conclusion) for r in fis.rules]
    return FuzzyInferenceSystem(
        tuple(partitions), tuple(rules), fis.conjunction, fis.input_ranges, fis.input_names, fis.output_name, "gaussian"
    )


def _finish(candidates, selection, data: Dataset, config: PipelineConfig, prune=False, **extra) -> PipelineResult:
    fis, sp = _fit_selected(candidates, selection, data.X, data.y, config.norm_tol)
    if prune:
        fis = _prune_gaussian(fis)
    unreduced = None
    if config.c is not None:
        unreduced = fis
        fis = reduce_vocabulary(fis, data.y, config.c, config.seed)
    counts = activation_counts(fis, data.X, config.alpha)
    kept_candidates = [selection.selected[i] for i in sp.kept]
    activation = dict(zip(kept_candidates, counts))
    labels = [premise_label(r, candidates.input_names) for r in candidates.rules]
    trace = trace_rows(selection, labels, activation)
    report = evaluate(fis, data.X, data.y, config.alpha, params=config.to_dict())
    return PipelineResult(
        fis=fis, selection=selection, second_pass=sp, candidates=candidates, config=config,
        training_report=report, trace=trace, unreduced=unreduced, **extra,
    )


def modified_ols_pipeline(data: Dataset, config: PipelineConfig | None = None) -> PipelineResult:
    """Standardized partitions chosen by refinement, rules chosen by OLS."""
    config = (config or PipelineConfig()).replace(mode="modified")
    hierarchies = build_hierarchies(data.X, config.n_max, config.seed)
    meta = dict(input_names=data.input_names, output_name=data.output_name, input_ranges=data.ranges)
    state = refine(
        data.X, data.y, hierarchies, config.iter_max, config.alpha, config.conjunction,
        config.literal_conclusions, **meta,
    )
    best = select_best_fis(state.kept, config.thres)
    candidates = best.fis
    problem, _ = assemble_problem(candidates, data.X, data.y)
    selection = ols_select(problem, config.epsilon, config.max_rules, config.norm_tol)
    return _finish(candidates, selection, data, config, refinement=state, best=best)


def original_ols_pipeline(data: Dataset, config: PipelineConfig | None = None) -> PipelineResult:
    """One Gaussian rule per training sample, rules chosen by OLS."""
    config = (config or PipelineConfig(mode="original")).replace(mode="original")
    _, partitions, rules = build_gaussian_candidate_rules(data.X, data.y, config.s)
    candidates = FuzzyInferenceSystem(
        tuple(partitions), tuple(rules), config.conjunction, data.ranges, data.input_names, data.output_name, "gaussian"
    )
    problem, _ = assemble_problem(candidates, data.X, data.y)
    selection = ols_select(problem, config.epsilon, config.max_rules, config.norm_tol)
    return _finish(candidates, selection, data, config, prune=True)


def learn(data: Dataset, config: PipelineConfig | None = None) -> PipelineResult:
    config = config or PipelineConfig()
    if config.mode == "original":
        return original_ols_pipeline(data, config)
    return modified_ols_pipeline(data, config)


def selection_curve(result: PipelineResult, data: Dataset, alphas=(0.0,), evaluation: Dataset | None = None):
    """PI and CI for the first k selected rules, k = 1..n_selected.

    Conclusions are refit on the training data for each prefix. Rows are
    dicts with keys ``n_rules``, ``alpha``, ``ci``, ``pi``, ``rmse``.
    """
    target = evaluation or data
    rows = []
    for k in range(1, result.selection.n_selected + 1):
        fis, _ = _fit_selected(result.candidates, result.selection, data.X, data.y, result.config.norm_tol, k)
        if result.fis.regime == "gaussian":
            fis = _prune_gaussian(fis)
        for a in alphas:
            rep = evaluate(fis, target.X, target.y, a)
            rows.append({"n_rules": fis.n_rules, "alpha": a, "ci": rep.ci, "pi": rep.pi, "rmse": rep.rmse})
    return rows
