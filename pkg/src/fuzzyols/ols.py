"""Orthogonal least squares rule selection over fuzzy basis functions."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import NoCoveredSamplesError, ZeroVarianceOutputError

DEFAULT_NORM_TOL = 1e-10
TIE_TOL = 1e-12

STOP_REASONS = {
    kernels.STOP_VARIANCE: "variance_threshold",
    kernels.STOP_MAX_RULES: "max_rules",
    kernels.STOP_EXHAUSTED: "exhausted",
    kernels.STOP_RANK: "numerical_rank",
}


@dataclass(frozen=True)
class RegressionProblem:
    """Fuzzy basis function matrix ``P`` (samples x candidate rules) and outputs ``y``."""

    P: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.P, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if P.shape[0] != y.shape[0]:
            raise ValueError(f"P has {P.shape[0]} rows but y has {y.shape[0]} entries")
        sums = P.sum(axis=1)
        if np.any(sums == 0):
            raise ValueError("P has an all-zero row; exclude uncovered samples first")
        if np.any(np.abs(sums - 1.0) > 1e-9):
            raise ValueError("rows of P must be fuzzy basis function rows summing to 1")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "y", y)

    @property
    def n_samples(self) -> int:
        return self.P.shape[0]

    @property
    def n_candidates(self) -> int:
        return self.P.shape[1]


@dataclass(frozen=True)
class OlsSelection:
    selected: tuple[int, ...]
    theta: np.ndarray
    step_variance: np.ndarray
    cumulative_variance: np.ndarray
    stop_reason: str
    g: np.ndarray
    A: np.ndarray

    @property
    def n_selected(self) -> int:
        return len(self.selected)


@dataclass(frozen=True)
class SecondPassResult:
    theta: np.ndarray
    kept: tuple[int, ...]
    dropped: tuple[int, ...]


def problem_from_firing(w, y) -> tuple[RegressionProblem, np.ndarray]:
    """Normalize firing strengths into FBF rows, dropping uncovered samples.

    Returns the problem and the indices of the samples kept.
    """
    w = np.atleast_2d(np.asarray(w, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if w.shape[1] == 0:
        raise ValueError("at least one candidate rule is required")
    total = w.sum(axis=1)
    kept = np.flatnonzero(total > 0)
    if kept.size == 0:
        raise NoCoveredSamplesError("no sample is covered by the candidate rules")
    return RegressionProblem(w[kept] / total[kept, None], y[kept]), kept


def assemble_problem(fis, X, y) -> tuple[RegressionProblem, np.ndarray]:
    """Regression problem whose columns are the rules of ``fis``."""
    return problem_from_firing(fis.firing_strengths(X), y)


def back_substitute(A, g) -> np.ndarray:
    """Solve the unit upper-triangular system ``A theta = g``."""
    A = np.asarray(A, dtype=float)
    g = np.asarray(g, dtype=float)
    m = g.shape[0]
    theta = np.zeros(m)
    for k in range(m - 1, -1, -1):
        theta[k] = g[k] - A[k, k + 1:] @ theta[k + 1:]
    return theta


def ols_select(
    problem: RegressionProblem,
    epsilon: float = 0.01,
    max_rules: int | None = None,
    norm_tol: float = DEFAULT_NORM_TOL,
) -> OlsSelection:
    """Greedy selection of the columns that explain most output energy.

    Candidates are orthogonalized against the already selected vectors at
    every step. Selection stops when the unexplained fraction drops below
    ``epsilon``, when ``max_rules`` columns are in, when candidates run out,
    or when every remaining column is numerically dependent (squared norm
    below ``norm_tol`` times its original squared norm).
    """
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    if norm_tol <= 0:
        raise ValueError("norm_tol must be positive")
    if max_rules is not None and max_rules < 1:
        raise ValueError("max_rules must be >= 1 or None")
    y = problem.y
    if float(y @ y) == 0.0:
        raise ZeroVarianceOutputError("zero-variance output: y'y = 0")
    selected, g, coef, xvar, stop = kernels.mgs_select(
        problem.P, y, float(epsilon), -1 if max_rules is None else int(max_rules), float(norm_tol), TIE_TOL
    )
    m = selected.shape[0]
    A = np.eye(m)
    for k in range(m):
        A[k, k + 1:] = coef[k, selected[k + 1:]]
    theta = back_substitute(A, g)
    return OlsSelection(
        selected=tuple(int(i) for i in selected),
        theta=theta,
        step_variance=xvar,
        cumulative_variance=np.cumsum(xvar),
        stop_reason=STOP_REASONS[stop],
        g=g,
        A=A,
    )


def second_pass(problem: RegressionProblem, order=None, norm_tol: float = DEFAULT_NORM_TOL) -> SecondPassResult:
    """Re-estimate conclusions on a fixed set of columns, no selection.

    Columns are orthogonalized in ``order`` (default: left to right); a column
    whose orthogonalized squared norm falls below ``norm_tol`` times its
    original squared norm is dropped and reported.
    """
    P = problem.P
    y = problem.y
    order = list(range(P.shape[1])) if order is None else [int(i) for i in order]
    basis: list[np.ndarray] = []
    kept: list[int] = []
    dropped: list[int] = []
    coefs: list[list[float]] = []
    g: list[float] = []
    for col in order:
        v = P[:, col].astype(float).copy()
        orig = float(v @ v)
        row = []
        for m in basis:
            a = float(m @ v) / float(m @ m)
            row.append(a)
            v -= a * m
        sq = float(v @ v)
        if orig <= 0 or sq < norm_tol * orig:
            dropped.append(col)
            continue
        basis.append(v)
        kept.append(col)
        coefs.append(row)
        g.append(float(v @ y) / sq)
    m = len(kept)
    A = np.eye(m)
    for l, row in enumerate(coefs):
        for k, a in enumerate(row):
            A[k, l] = a
    return SecondPassResult(back_substitute(A, np.array(g)), tuple(kept), tuple(dropped))


TRACE_FIELDS = ("step", "candidate", "premise", "xvar", "cumulative", "n_active", "n_exclusive")


def trace_rows(selection: OlsSelection, labels=None, activation=None):
    """Per-step audit records.

    ``labels`` optionally gives a premise description per candidate.
    ``activation`` optionally maps a candidate index to ``(n_active,
    n_exclusive)``: samples firing the rule above the threshold, and samples
    firing that rule and no other.
    """
    rows = []
    for step, (cand, xv, cum) in enumerate(
        zip(selection.selected, selection.step_variance, selection.cumulative_variance), start=1
    ):
        n_act, n_exc = ("", "") if activation is None else activation.get(cand, ("", ""))
        rows.append({
            "step": step, "candidate": cand, "premise": "" if labels is None else labels[cand],
            "xvar": repr(float(xv)), "cumulative": repr(float(cum)),
            "n_active": n_act, "n_exclusive": n_exc,
        })
    return rows


def format_trace(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TRACE_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
