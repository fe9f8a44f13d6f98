"""Fuzzy sets, partitions, rules and zero-order Takagi-Sugeno inference."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import IncompleteSampleError, UncoveredSampleError

TRIANGULAR = "triangular"
LEFT_SHOULDER = "semi-trapezoid-left"
RIGHT_SHOULDER = "semi-trapezoid-right"
GAUSSIAN = "gaussian"
UNIVERSAL = "universal"

MF_KINDS = (TRIANGULAR, LEFT_SHOULDER, RIGHT_SHOULDER, GAUSSIAN, UNIVERSAL)
CONJUNCTIONS = ("min", "prod")
REGIMES = ("standardized", "gaussian")


@dataclass(frozen=True)
class MembershipFunction:
    """A single fuzzy set on a scalar domain.

    ``params`` depends on ``kind``:

    * triangular: (left, center, right)
    * semi-trapezoid-left: (center, right), plateau at 1 for x <= center
    * semi-trapezoid-right: (left, center), plateau at 1 for x >= center
    * gaussian: (center, sigma)
    * universal: (center,), membership 1 everywhere (one-term partition)
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in MF_KINDS:
            raise ValueError(f"unknown membership function kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        p = self.params
        expected = {TRIANGULAR: 3, LEFT_SHOULDER: 2, RIGHT_SHOULDER: 2, GAUSSIAN: 2, UNIVERSAL: 1}
        if len(p) != expected[self.kind]:
            raise ValueError(f"{self.kind} takes {expected[self.kind]} parameters, got {len(p)}")
        if self.kind == TRIANGULAR and not p[0] < p[1] < p[2]:
            raise ValueError(f"triangular needs left < center < right, got {p}")
        if self.kind in (LEFT_SHOULDER, RIGHT_SHOULDER) and not p[0] < p[1]:
            raise ValueError(f"{self.kind} needs increasing parameters, got {p}")
        if self.kind == GAUSSIAN and not p[1] > 0:
            raise ValueError(f"gaussian sigma must be positive, got {p[1]}")

    @classmethod
    def triangular(cls, left, center, right):
        return cls(TRIANGULAR, (left, center, right))

    @classmethod
    def left_shoulder(cls, center, right):
        return cls(LEFT_SHOULDER, (center, right))

    @classmethod
    def right_shoulder(cls, left, center):
        return cls(RIGHT_SHOULDER, (left, center))

    @classmethod
    def gaussian(cls, center, sigma):
        return cls(GAUSSIAN, (center, sigma))

    @classmethod
    def universal(cls, center=0.0):
        return cls(UNIVERSAL, (center,))

    @property
    def center(self) -> float:
        if self.kind == TRIANGULAR:
            return self.params[1]
        if self.kind == RIGHT_SHOULDER:
            return self.params[1]
        return self.params[0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind == TRIANGULAR:
            left, c, right = p
            mu = np.minimum((x - left) / (c - left), (right - x) / (right - c))
        elif self.kind == LEFT_SHOULDER:
            c, right = p
            mu = (right - x) / (right - c)
        elif self.kind == RIGHT_SHOULDER:
            left, c = p
            mu = (x - left) / (c - left)
        elif self.kind == GAUSSIAN:
            c, sigma = p
            mu = np.exp(-0.5 * ((x - c) / sigma) ** 2)
        else:
            mu = np.ones_like(x)
        mu = np.clip(mu, 0.0, 1.0)
        return float(mu) if mu.ndim == 0 else mu


def membership(mf: MembershipFunction, x: float) -> float:
    """Degree of membership of the scalar ``x`` in ``mf``."""
    return mf(float(x))


@dataclass(frozen=True)
class FuzzyPartition:
    """Ordered fuzzy sets over one input variable."""

    variable_index: int
    centers: tuple[float, ...]
    mfs: tuple[MembershipFunction, ...]
    standardized: bool

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(float(c) for c in self.centers))
        object.__setattr__(self, "mfs", tuple(self.mfs))
        if len(self.centers) != len(self.mfs) or not self.mfs:
            raise ValueError("a partition needs one center per membership function")
        if self.standardized and any(b <= a for a, b in zip(self.centers, self.centers[1:])):
            raise ValueError(f"standardized partition centers must increase strictly: {self.centers}")

    @classmethod
    def standardized_from_centers(cls, variable_index: int, centers: Sequence[float]) -> "FuzzyPartition":
        """Triangles with neighbouring centers as feet, shoulders at both edges."""
        c = [float(v) for v in centers]
        m = len(c)
        if m == 1:
            mfs = [MembershipFunction.universal(c[0])]
        else:
            mfs = [MembershipFunction.left_shoulder(c[0], c[1])]
            mfs += [MembershipFunction.triangular(c[k - 1], c[k], c[k + 1]) for k in range(1, m - 1)]
            mfs.append(MembershipFunction.right_shoulder(c[-2], c[-1]))
        return cls(variable_index, tuple(c), tuple(mfs), True)

    @classmethod
    def gaussian(cls, variable_index: int, centers: Sequence[float], sigma: float) -> "FuzzyPartition":
        c = tuple(float(v) for v in centers)
        return cls(variable_index, c, tuple(MembershipFunction.gaussian(v, sigma) for v in c), False)

    @property
    def size(self) -> int:
        return len(self.mfs)

    def __len__(self):
        return len(self.mfs)

    def memberships(self, x) -> np.ndarray:
        """Membership matrix of shape (len(x), size)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.mfs[0].kind == GAUSSIAN and all(mf.kind == GAUSSIAN for mf in self.mfs):
            centers = np.array([mf.params[0] for mf in self.mfs])
            sigmas = np.array([mf.params[1] for mf in self.mfs])
            return np.exp(-0.5 * ((x[:, None] - centers[None, :]) / sigmas[None, :]) ** 2)
        out = np.empty((x.shape[0], self.size))
        for k, mf in enumerate(self.mfs):
            out[:, k] = mf(x)
        return out


@dataclass(frozen=True)
class Rule:
    """Premise as sorted (variable, fuzzy set) pairs plus a crisp conclusion."""

    premise: tuple[tuple[int, int], ...]
    conclusion: float

    def __post_init__(self):
        premise = tuple(sorted((int(v), int(s)) for v, s in self.premise))
        variables = [v for v, _ in premise]
        if len(set(variables)) != len(variables):
            raise ValueError(f"variable repeated in premise {premise}")
        object.__setattr__(self, "premise", premise)
        object.__setattr__(self, "conclusion", float(self.conclusion))

    def with_conclusion(self, value: float) -> "Rule":
        return Rule(self.premise, value)


def combine(degrees, conjunction: str = "min", axis: int = -1):
    """Conjunction of premise degrees; an empty premise yields 1."""
    degrees = np.asarray(degrees, dtype=float)
    if degrees.shape[axis] == 0:
        shape = list(degrees.shape)
        del shape[axis]
        out = np.ones(shape)
        return float(out) if out.ndim == 0 else out
    if conjunction == "min":
        out = np.min(degrees, axis=axis)
    elif conjunction == "prod":
        out = np.prod(degrees, axis=axis)
    else:
        raise ValueError(f"unknown conjunction {conjunction!r}")
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class FuzzyInferenceSystem:
    """Zero-order Takagi-Sugeno system.

    ``partitions[j]`` belongs to input column ``j``. Rules list premises in
    terms of those partitions; a variable absent from a premise does not
    constrain the rule.
    """

    partitions: tuple[FuzzyPartition, ...]
    rules: tuple[Rule, ...]
    conjunction: str = "min"
    input_ranges: tuple[tuple[float, float], ...] = ()
    input_names: tuple[str, ...] = ()
    output_name: str = "y"
    regime: str = "standardized"
    _rule_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "partitions", tuple(self.partitions))
        object.__setattr__(self, "rules", tuple(self.rules))
        p = len(self.partitions)
        if self.conjunction not in CONJUNCTIONS:
            raise ValueError(f"unknown conjunction {self.conjunction!r}")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        for j, part in enumerate(self.partitions):
            if part.variable_index != j:
                raise ValueError(f"partition {j} declares variable {part.variable_index}")
            if part.standardized != (self.regime == "standardized"):
                raise ValueError("standardized and Gaussian partitions cannot be mixed")
        if not self.input_names:
            object.__setattr__(self, "input_names", tuple(f"v{j + 1}" for j in range(p)))
        if not self.input_ranges:
            object.__setattr__(
                self, "input_ranges", tuple((min(q.centers), max(q.centers)) for q in self.partitions)
            )
        object.__setattr__(
            self, "input_ranges", tuple((float(lo), float(hi)) for lo, hi in self.input_ranges)
        )
        if len(self.input_names) != p or len(self.input_ranges) != p:
            raise ValueError("input_names and input_ranges must match the partitions")
        table = np.full((len(self.rules), p), -1, dtype=np.int64)
        for q, rule in enumerate(self.rules):
            for v, s in rule.premise:
                if not 0 <= v < p:
                    raise ValueError(f"rule {q} references unknown variable {v}")
                if not 0 <= s < self.partitions[v].size:
                    raise ValueError(f"rule {q} references missing fuzzy set {s} of variable {v}")
                table[q, v] = s
        object.__setattr__(self, "_rule_table", table)

    @property
    def n_inputs(self) -> int:
        return len(self.partitions)

    @property
    def n_rules(self) -> int:
        return len(self.rules)

    @property
    def conclusions(self) -> np.ndarray:
        return np.array([r.conclusion for r in self.rules], dtype=float)

    def used_variables(self) -> list[int]:
        return sorted({v for r in self.rules for v, _ in r.premise})

    def mean_mfs_per_variable(self) -> float:
        return float(np.mean([part.size for part in self.partitions]))

    def mean_mfs_per_used_variable(self) -> float:
        """Mean partition size over the variables that appear in some premise (1.0 if none do)."""
        used = self.used_variables()
        if not used:
            return 1.0
        return float(np.mean([self.partitions[j].size for j in used]))

    def with_rules(self, rules) -> "FuzzyInferenceSystem":
        return FuzzyInferenceSystem(
            self.partitions, tuple(rules), self.conjunction, self.input_ranges,
            self.input_names, self.output_name, self.regime,
        )

    def with_conclusions(self, values) -> "FuzzyInferenceSystem":
        values = list(values)
        if len(values) != self.n_rules:
            raise ValueError("one conclusion per rule expected")
        return self.with_rules(r.with_conclusion(v) for r, v in zip(self.rules, values))

    def _check_inputs(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        used = self.used_variables()
        if used and X.shape[1] <= used[-1]:
            raise IncompleteSampleError(
                f"sample has {X.shape[1]} values but rules use variable {used[-1]}"
            )
        if used and not np.all(np.isfinite(X[:, used])):
            raise IncompleteSampleError("sample has missing values for premise variables")
        return X

    def firing_strengths(self, X) -> np.ndarray:
        """Firing strengths, shape (n_samples, n_rules)."""
        X = self._check_inputs(X)
        n = X.shape[0]
        w = np.ones((n, self.n_rules))
        table = self._rule_table
        for j in self.used_variables():
            mu = self.partitions[j].memberships(X[:, j])
            present = table[:, j] >= 0
            vals = mu[:, np.where(present, table[:, j], 0)]
            vals[:, ~present] = 1.0
            if self.conjunction == "min":
                np.minimum(w, vals, out=w)
            else:
                w *= vals
        return w

    def predict(self, X) -> np.ndarray:
        """Weighted-mean outputs; NaN where no rule fires."""
        w = self.firing_strengths(X)
        total = w.sum(axis=1)
        num = w @ self.conclusions
        out = np.full(w.shape[0], np.nan)
        covered = total > 0
        out[covered] = num[covered] / total[covered]
        return out


def firing_strength(fis: FuzzyInferenceSystem, rule: Rule, x) -> float:
    """Conjunction of the premise memberships of ``rule`` at sample ``x``."""
    x = np.asarray(x, dtype=float).ravel()
    degrees = []
    for v, s in rule.premise:
        if v >= x.shape[0] or not np.isfinite(x[v]):
            raise IncompleteSampleError(f"no value for variable {v}")
        degrees.append(fis.partitions[v].mfs[s](x[v]))
    return combine(np.array(degrees, dtype=float), fis.conjunction)


def infer(fis: FuzzyInferenceSystem, x) -> float | None:
    """Model output at a single sample, or None when the sample is not covered."""
    y = fis.predict(np.asarray(x, dtype=float).ravel()[None, :])[0]
    return None if np.isnan(y) else float(y)


def normalize_firing(w) -> np.ndarray:
    """Fuzzy basis function values from one row of firing strengths."""
    w = np.asarray(w, dtype=float)
    total = w.sum()
    if not total > 0:
        raise UncoveredSampleError("uncovered sample: total firing strength is zero")
    return w / total


def fbf_row(fis: FuzzyInferenceSystem, x) -> np.ndarray:
    """Relative contribution of each rule at sample ``x``."""
    return normalize_firing(fis.firing_strengths(np.asarray(x, dtype=float).ravel())[0])
