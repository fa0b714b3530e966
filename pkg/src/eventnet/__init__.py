"""Abductive inference over probabilistic event networks."""

from .kbdsl import (
    Diagnostic,
    KBError,
    KBSyntaxError,
    KBValidationError,
    Observation,
    load_kb,
    load_observations,
    parse_kb,
    parse_observations,
    serialize_kb,
    serialize_observations,
)
from .network import (
    AmbiguousStatistic,
    EventDescription,
    EventNetwork,
    InvalidNetwork,
    NetworkError,
    NoStatistic,
    UnknownType,
    inherited_feature_paths,
    legal_feature_links,
    legal_spec_refinements,
    lookup_feature_cond,
    lookup_prior,
    lookup_spec_cond,
    validate_network,
)
from .render import render, render_result
from .scenario import (
    Explanation,
    Inconsistency,
    Scenario,
    ScenarioError,
    entails,
    explain_scenario,
    extend_with_feature,
    extend_with_local_tree,
    extend_with_spec,
    new_scenario,
    percolate_and_check,
    probability,
)
from .search import (
    RankedResult,
    SearchParams,
    UnknownObservationType,
    compare_explanations,
    enumerate_explanations,
    explain,
    is_minimal,
)

__version__ = "0.1.0"
