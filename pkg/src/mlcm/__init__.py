"""Multilabel consensus maximization.

Combine the binary multilabel predictions of several base models, given
only those predictions, into a single relevance-score matrix.
"""

from .config import ConsensusConfig
from .exceptions import MLCMError
from .metrics import (
    MetricReport,
    average_precision,
    evaluate,
    micro_auc,
    one_error,
    ranking_loss,
)
from .mlcma import MLCMa, estimate_covariance, mlcm_a, mlcm_a_step
from .mlcmr import (
    BGCMBinaryRelevance,
    ConsensusGraph,
    MLCMr,
    bgcm_binary_relevance,
    build_graph,
    instance_scores,
    mlcm_r,
    solve_group_distributions,
    solve_group_distributions_iterative,
    transition_matrix,
)
from .synth import SynthSpec, generate_truth, simulate_base_models
from .validation import validate
from .voting import MajorityVoting, average_predictions, row_normalized_voting

__version__ = "0.1.0"

__all__ = [
    "BGCMBinaryRelevance",
    "ConsensusConfig",
    "ConsensusGraph",
    "MLCMError",
    "MLCMa",
    "MLCMr",
    "MajorityVoting",
    "MetricReport",
    "SynthSpec",
    "average_precision",
    "average_predictions",
    "bgcm_binary_relevance",
    "build_graph",
    "estimate_covariance",
    "evaluate",
    "generate_truth",
    "instance_scores",
    "micro_auc",
    "mlcm_a",
    "mlcm_a_step",
    "mlcm_r",
    "one_error",
    "ranking_loss",
    "row_normalized_voting",
    "simulate_base_models",
    "solve_group_distributions",
    "solve_group_distributions_iterative",
    "transition_matrix",
    "validate",
]
