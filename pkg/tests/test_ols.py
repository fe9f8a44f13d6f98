import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyols.exceptions import NoCoveredSamplesError, ZeroVarianceOutputError
from fuzzyols.fis import FuzzyInferenceSystem, FuzzyPartition, Rule
from fuzzyols.ols import (
    RegressionProblem,
    assemble_problem,
    format_trace,
    ols_select,
    problem_from_firing,
    second_pass,
    trace_rows,
)


def normal_equations(P, y, cols):
    A = P[:, list(cols)]
    return np.linalg.solve(A.T @ A, A.T @ y)


def residual_energy(P, y, cols):
    if not cols:
        return float(y @ y)
    th, *_ = np.linalg.lstsq(P[:, list(cols)], y, rcond=None)
    r = y - P[:, list(cols)] @ th
    return float(r @ r)


def greedy_oracle(P, y, steps):
    """Greedy forward selection by largest drop of the least-squares residual."""
    sel = []
    for _ in range(steps):
        rem = [c for c in range(P.shape[1]) if c not in sel]
        sel.append(min(rem, key=lambda c: residual_energy(P, y, sel + [c])))
    return sel


def random_problem(seed, n, r):
    rng = np.random.default_rng(seed)
    w = rng.random((n, r)) ** 2
    return RegressionProblem(w / w.sum(axis=1, keepdims=True), rng.normal(size=n) * 2 + 1)


# six-sample, three-rule instance; expected values from greedy_oracle and normal_equations
FROZEN_W = np.array([[1, 0, 0], [3, 1, 0], [1, 1, 2], [0, 1, 1], [0, 0, 1], [2, 0, 1]], float)
FROZEN_Y = np.array([1.0, 2.0, 3.0, 2.5, 4.0, 1.5])


class TestSelection:
    def test_orthogonal_columns(self):
        sel = ols_select(RegressionProblem(np.eye(3), [2.0, 0.0, 0.0]), epsilon=0.01)
        assert sel.selected == (0,)
        assert sel.step_variance.tolist() == [1.0]
        assert sel.theta.tolist() == [2.0]
        assert sel.stop_reason == "variance_threshold"

    def test_frozen_instance(self):
        problem, _ = problem_from_firing(FROZEN_W, FROZEN_Y)
        sel = ols_select(problem, epsilon=0.0)
        assert sel.selected == (2, 0, 1)
        assert np.allclose(sel.step_variance, [0.8474025974025974, 0.09405410904600531, 0.03246660344308664],
                           rtol=0, atol=1e-12)
        assert np.allclose(sel.theta, [3.7509881422924907, 1.1660079051383403, 2.138339920948616],
                           rtol=0, atol=1e-10)
        assert sel.stop_reason == "exhausted"

    def test_frozen_instance_two_rules(self):
        problem, _ = problem_from_firing(FROZEN_W, FROZEN_Y)
        sel = ols_select(problem, epsilon=0.0, max_rules=2)
        assert sel.selected == (2, 0) and sel.stop_reason == "max_rules"
        assert sel.cumulative_variance[-1] == pytest.approx(0.9414567064486027, abs=1e-12)
        assert np.allclose(sel.theta, [4.209616423554835, 1.3473797947055648], rtol=0, atol=1e-10)

    def test_proportional_columns_never_both_selected(self):
        P = np.array([[0.5, 0.5, 0.0], [0.25, 0.25, 0.5], [0.5, 0.5, 0.0], [0.0, 0.0, 1.0]])
        sel = ols_select(RegressionProblem(P, [1.0, 2.0, 1.5, 3.0]), epsilon=0.0)
        assert not {0, 1} <= set(sel.selected)
        assert sel.stop_reason == "numerical_rank"

    def test_zero_output(self):
        with pytest.raises(ZeroVarianceOutputError):
            ols_select(RegressionProblem(np.eye(2), [0.0, 0.0]))

    @pytest.mark.parametrize("eps", [-0.1, 1.0])
    def test_bad_epsilon(self, eps):
        with pytest.raises(ValueError):
            ols_select(RegressionProblem(np.eye(2), [1.0, 0.0]), epsilon=eps)

    def test_tie_goes_to_lowest_index(self):
        sel = ols_select(RegressionProblem(np.eye(2), [1.0, 1.0]), epsilon=0.0)
        assert sel.selected == (0, 1)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracles(self, seed):
        problem = random_problem(seed, 8 + seed, 2 + seed % 7)
        sel = ols_select(problem, epsilon=0.0)
        k = len(sel.selected)
        assert list(sel.selected) == greedy_oracle(problem.P, problem.y, k)
        assert np.allclose(sel.theta, normal_equations(problem.P, problem.y, sel.selected), rtol=0, atol=1e-8)
        explained = 1 - residual_energy(problem.P, problem.y, sel.selected) / float(problem.y @ problem.y)
        assert sel.cumulative_variance[-1] == pytest.approx(explained, abs=1e-8)

    @given(st.integers(0, 10_000), st.integers(3, 30), st.integers(1, 8))
    def test_invariants(self, seed, n, r):
        problem = random_problem(seed, n, r)
        sel = ols_select(problem, epsilon=0.0)
        assert len(set(sel.selected)) == len(sel.selected)
        assert np.all(sel.step_variance >= 0)
        assert sel.cumulative_variance[-1] <= 1 + 1e-9
        # the orthogonal basis implied by A: M = P_sel A^{-1}
        M = problem.P[:, list(sel.selected)] @ np.linalg.inv(sel.A)
        G = M.T @ M
        norms = np.sqrt(np.diag(G))
        off = np.abs(G - np.diag(np.diag(G)))
        assert np.all(off <= 1e-8 * np.outer(norms, norms) + 1e-14)

    @given(st.integers(0, 10_000), st.permutations(range(6)))
    def test_permutation(self, seed, perm):
        problem = random_problem(seed, 15, 6)
        a = ols_select(problem, epsilon=0.0)
        b = ols_select(RegressionProblem(problem.P[:, perm], problem.y), epsilon=0.0)
        assert [perm[i] for i in b.selected] == list(a.selected)
        assert np.allclose(a.step_variance, b.step_variance, rtol=0, atol=1e-12)


class TestSecondPass:
    def test_unchanged_when_all_selected(self):
        problem = random_problem(7, 20, 4)
        sel = ols_select(problem, epsilon=0.0)
        assert len(sel.selected) == 4
        sp = second_pass(RegressionProblem(problem.P[:, list(sel.selected)], problem.y))
        assert np.allclose(sp.theta, sel.theta, rtol=0, atol=1e-10)

    def test_two_of_three(self):
        problem, _ = problem_from_firing(FROZEN_W, FROZEN_Y)
        sp = second_pass(problem, order=[2, 0])
        assert sp.kept == (2, 0) and sp.dropped == ()
        assert np.allclose(sp.theta, [4.209616423554835, 1.3473797947055648], rtol=0, atol=1e-10)

    def test_single_column(self):
        P = np.ones((4, 1))
        y = np.array([1.0, 2.0, 4.0, 5.0])
        assert second_pass(RegressionProblem(P, y)).theta.tolist() == [3.0]

    def test_dependent_column_dropped(self):
        P = np.array([[0.5, 0.5, 0.0], [0.25, 0.25, 0.5], [0.5, 0.5, 0.0], [0.0, 0.0, 1.0]])
        sp = second_pass(RegressionProblem(P, [1.0, 2.0, 1.5, 3.0]))
        assert sp.kept == (0, 2) and sp.dropped == (1,)

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_normal_equations(self, seed):
        problem = random_problem(seed + 100, 25, 6)
        order = list(np.random.default_rng(seed).permutation(6)[:3])
        sp = second_pass(problem, order=order)
        assert np.allclose(sp.theta, normal_equations(problem.P, problem.y, order), rtol=0, atol=1e-8)


class TestAssemble:
    def _fis(self, rules):
        return FuzzyInferenceSystem((FuzzyPartition.standardized_from_centers(0, [0, 1, 2]),), tuple(rules))

    def test_single_rule_covering_all(self):
        problem, kept = assemble_problem(self._fis([Rule((), 0.0)]), np.array([[0.1], [1.4], [2.0]]), [1, 2, 3])
        assert problem.P.tolist() == [[1.0], [1.0], [1.0]] and kept.tolist() == [0, 1, 2]

    def test_uncovered_excluded(self):
        fis = self._fis([Rule(((0, 0),), 0.0)])
        problem, kept = assemble_problem(fis, np.array([[0.5], [1.5]]), [1.0, 2.0])
        assert kept.tolist() == [0] and problem.y.tolist() == [1.0]

    def test_normalization(self):
        problem, _ = problem_from_firing(np.array([[0.3, 0.1]]), [1.0])
        assert np.allclose(problem.P, [[0.75, 0.25]])

    def test_nothing_covered(self):
        with pytest.raises(NoCoveredSamplesError):
            problem_from_firing(np.zeros((3, 2)), [1, 2, 3])

    def test_problem_invariants(self):
        with pytest.raises(ValueError):
            RegressionProblem(np.array([[0.5, 0.4]]), [1.0])
        with pytest.raises(ValueError):
            RegressionProblem(np.array([[0.0, 0.0]]), [1.0])


def test_trace_csv():
    problem, _ = problem_from_firing(FROZEN_W, FROZEN_Y)
    sel = ols_select(problem, epsilon=0.0)
    rows = trace_rows(sel, labels=["a", "b", "c"], activation={2: (4, 1)})
    text = format_trace(rows)
    lines = text.splitlines()
    assert lines[0] == "step,candidate,premise,xvar,cumulative,n_active,n_exclusive"
    assert lines[1].startswith("1,2,c,") and lines[1].endswith(",4,1")
    assert len(lines) == 4
