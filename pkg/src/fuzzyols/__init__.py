"""Interpretable zero-order Takagi-Sugeno rule bases learned by orthogonal least squares."""
__version__ = "0.1.0"

from .config import PipelineConfig
from .crossval import cross_validate, format_table, summarize
from .data import Dataset, FoldPlan, load_csv, make_folds, train_test
from .exceptions import FuzzyOLSError
from .fis import FuzzyInferenceSystem, FuzzyPartition, MembershipFunction, Rule, infer
from .kernels import BACKEND
from .metrics import (
    EvaluationReport,
    coverage_index,
    evaluate,
    mean_absolute_error,
    performance_index,
)
from .ols import RegressionProblem, assemble_problem, ols_select, second_pass
from .partitioning import build_standardized_partition, kmeans_1d
from .serialization import dumps_fis, load_fis, loads_fis, save_fis
from .structure import learn, modified_ols_pipeline, original_ols_pipeline, refine, select_best_fis
from .vocabulary import reduce_vocabulary

