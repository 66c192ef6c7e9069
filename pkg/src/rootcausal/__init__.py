"""Exact root-cause attribution over binary causal Bayesian networks.

Computes the probability that a candidate variable set is the root cause of
an observed outcome, by a closed-form identification formula over the
observational law, cross-verified against an exact structural-equation
counterfactual oracle.
"""

from .attribution import AttributionReport, ReportRow, default_candidates, rank_candidates
from .closedform import (
    ImpossibleObservationError,
    flip_network,
    prc,
    prc_full_obs,
    prc_posttce_scaling,
)
from .counterfactual import (
    CellCapExceededError,
    IndicatorPair,
    LatentCell,
    Mechanism,
    MonotoneSEM,
    MonotonicityError,
    canonical_sem_from_network,
    cause_indicator,
    eval_under_intervention,
    indicator_pair,
    oracle_pc,
    oracle_pn,
    oracle_postdce,
    oracle_posttce,
    oracle_prc,
    random_monotone_sem,
    root_indicator,
    sem_to_cpt,
)
from .joint import (
    ConditionalTable,
    ImpossibleEvidenceError,
    condition_on_evidence,
    joint_prob,
    posterior_event_prob,
)
from .model import (
    NO_ROOT_CAUSE,
    Assignment,
    CandidateSet,
    Evidence,
    ModelError,
    MonotonicityViolation,
    Network,
    leq_partial_order,
    partition_candidate,
    validate_monotone_cpt,
)
from .netformat import (
    NetworkDocument,
    ParseError,
    network_fingerprint,
    parse_candidate,
    parse_evidence,
    parse_network,
    serialize_network,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AttributionReport",
    "CandidateSet",
    "CellCapExceededError",
    "ConditionalTable",
    "Evidence",
    "ImpossibleEvidenceError",
    "ImpossibleObservationError",
    "IndicatorPair",
    "LatentCell",
    "Mechanism",
    "ModelError",
    "MonotoneSEM",
    "MonotonicityError",
    "MonotonicityViolation",
    "NO_ROOT_CAUSE",
    "Network",
    "NetworkDocument",
    "ParseError",
    "ReportRow",
    "canonical_sem_from_network",
    "cause_indicator",
    "condition_on_evidence",
    "default_candidates",
    "eval_under_intervention",
    "flip_network",
    "indicator_pair",
    "joint_prob",
    "leq_partial_order",
    "network_fingerprint",
    "oracle_pc",
    "oracle_pn",
    "oracle_postdce",
    "oracle_posttce",
    "oracle_prc",
    "parse_candidate",
    "parse_evidence",
    "parse_network",
    "partition_candidate",
    "posterior_event_prob",
    "prc",
    "prc_full_obs",
    "prc_posttce_scaling",
    "rank_candidates",
    "random_monotone_sem",
    "root_indicator",
    "sem_to_cpt",
    "serialize_network",
    "validate_monotone_cpt",
]
