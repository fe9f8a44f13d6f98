"""Coverage index, performance index and error measures."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataFormatError, NoActiveSamplesError

REPORT_TAG = "fuzzyols-report"
REPORT_VERSION = 1


def _firing(fis, X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("empty dataset")
    return fis.firing_strengths(X)


def active_mask(w, alpha: float) -> np.ndarray:
    """A sample is active when some rule fires strictly above ``alpha``."""
    if w.shape[1] == 0:
        return np.zeros(w.shape[0], dtype=bool)
    return w.max(axis=1) > alpha


def coverage_index(fis, X, alpha: float = 0.0):
    """Fraction of active samples and the active mask."""
    mask = active_mask(_firing(fis, X), alpha)
    return mask.sum() / mask.shape[0], mask


def _predictions(w, conclusions):
    total = w.sum(axis=1)
    out = np.full(w.shape[0], np.nan)
    ok = total > 0
    out[ok] = (w[ok] @ conclusions) / total[ok]
    return out


def pi_from_errors(err) -> float:
    """(1/n) * sqrt(sum of squared errors)."""
    err = np.asarray(err, dtype=float)
    if err.size == 0:
        raise NoActiveSamplesError("no active samples")
    return math.sqrt(float(np.sum(err * err))) / err.size


def _active_errors(fis, X, y, alpha):
    w = _firing(fis, X)
    mask = active_mask(w, alpha)
    pred = _predictions(w, fis.conclusions)
    return (pred - np.asarray(y, dtype=float))[mask]


def performance_index(fis, X, y, alpha: float = 0.0) -> float:
    return pi_from_errors(_active_errors(fis, X, y, alpha))


def mean_absolute_error(fis, X, y, alpha: float = 0.0) -> float:
    err = _active_errors(fis, X, y, alpha)
    if err.size == 0:
        raise NoActiveSamplesError("no active samples")
    return float(np.mean(np.abs(err)))


def root_mean_squared_error(fis, X, y, alpha: float = 0.0) -> float:
    err = _active_errors(fis, X, y, alpha)
    if err.size == 0:
        raise NoActiveSamplesError("no active samples")
    return math.sqrt(float(np.mean(err * err)))


@dataclass
class EvaluationReport:
    """Metrics of one system on one dataset at one activation threshold.

    ``pi``, ``rmse`` and ``mae`` are None when no sample is active.
    ``predictions`` holds NaN for samples no rule fires.
    """

    alpha: float
    n_samples: int
    n_active: int
    ci: float
    pi: float | None
    rmse: float | None
    mae: float | None
    active: np.ndarray
    predictions: np.ndarray
    targets: np.ndarray
    params: dict[str, str] = field(default_factory=dict)

    @property
    def errors(self) -> np.ndarray:
        return self.predictions - self.targets

    def __eq__(self, other):
        if not isinstance(other, EvaluationReport):
            return NotImplemented
        return (
            (self.alpha, self.n_samples, self.n_active, self.ci, self.pi, self.rmse, self.mae, self.params)
            == (other.alpha, other.n_samples, other.n_active, other.ci, other.pi, other.rmse, other.mae, other.params)
            and np.array_equal(self.active, other.active)
            and np.array_equal(self.predictions, other.predictions, equal_nan=True)
            and np.array_equal(self.targets, other.targets)
        )


def evaluate(fis, X, y, alpha: float = 0.0, params=None) -> EvaluationReport:
    w = _firing(fis, X)
    y = np.asarray(y, dtype=float).ravel()
    mask = active_mask(w, alpha)
    pred = _predictions(w, fis.conclusions)
    n = int(mask.sum())
    err = (pred - y)[mask]
    return EvaluationReport(
        alpha=float(alpha),
        n_samples=int(y.shape[0]),
        n_active=n,
        ci=n / y.shape[0],
        pi=pi_from_errors(err) if n else None,
        rmse=math.sqrt(float(np.mean(err * err))) if n else None,
        mae=float(np.mean(np.abs(err))) if n else None,
        active=mask,
        predictions=pred,
        targets=y,
        params={str(k): str(v) for k, v in (params or {}).items()},
    )


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_opt(s):
    return None if s == "none" else float(s)


def format_report(report: EvaluationReport) -> str:
    """Summary block of ``# key=value`` lines followed by one CSV row per sample."""
    lines = [f"# {REPORT_TAG} v{REPORT_VERSION}"]
    for key in ("alpha", "n_samples", "n_active", "ci", "pi", "rmse", "mae"):
        lines.append(f"# {key}={_fmt(getattr(report, key))}")
    for key in sorted(report.params):
        value = report.params[key].replace("\n", " ")
        lines.append(f"# param.{key}={value}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "active", "prediction", "target", "error"])
    for i in range(report.n_samples):
        p = report.predictions[i]
        t = report.targets[i]
        covered = not np.isnan(p)
        writer.writerow([
            i, int(report.active[i]), repr(float(p)) if covered else "",
            repr(float(t)), repr(float(p - t)) if covered else "",
        ])
    return "\n".join(lines) + "\n" + buf.getvalue()


def parse_report(text: str) -> EvaluationReport:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != f"# {REPORT_TAG} v{REPORT_VERSION}":
        raise DataFormatError("not an evaluation report or unsupported version")
    summary: dict[str, str] = {}
    params: dict[str, str] = {}
    body_start = len(lines)
    for i, line in enumerate(lines[1:], start=1):
        if not line.startswith("# "):
            body_start = i
            break
        key, sep, value = line[2:].partition("=")
        if not sep:
            raise DataFormatError(f"line {i + 1}: malformed summary entry")
        if key.startswith("param."):
            params[key[len("param."):]] = value
        else:
            summary[key] = value
    try:
        rows = list(csv.reader(lines[body_start:]))
        n = int(summary["n_samples"])
        if len(rows) != n + 1 or rows[0] != ["index", "active", "prediction", "target", "error"]:
            raise DataFormatError("sample table does not match n_samples")
        active = np.array([row[1] == "1" for row in rows[1:]], dtype=bool)
        pred = np.array([float(row[2]) if row[2] else np.nan for row in rows[1:]], dtype=float)
        targets = np.array([float(row[3]) for row in rows[1:]], dtype=float)
        return EvaluationReport(
            alpha=float(summary["alpha"]),
            n_samples=n,
            n_active=int(summary["n_active"]),
            ci=float(summary["ci"]),
            pi=_parse_opt(summary["pi"]),
            rmse=_parse_opt(summary["rmse"]),
            mae=_parse_opt(summary["mae"]),
            active=active,
            predictions=pred,
            targets=targets,
            params=params,
        )
    except (KeyError, ValueError, IndexError) as exc:
        if isinstance(exc, DataFormatError):
            raise
        raise DataFormatError(f"malformed report: {exc}") from exc
