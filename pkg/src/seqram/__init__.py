"""Random attention choice and sequential pairwise tournaments."""

from __future__ import annotations

from seqram.arity import (
    SEQ_DOMINANT,
    SIM_DOMINANT,
    TIE,
    ArityParams,
    FidelityModel,
    binary_advantage_threshold,
    dominance_condition,
    fidelity,
    general_n_dominance,
    seq_success,
    sim_success,
    superiority_qr,
)
from seqram.attention import (
    NO_CHOICE,
    RENORMALIZE,
    AttentionRule,
    ValidationReport,
    full_attention,
    independent_attention,
    is_size_decreasing,
    load_explicit,
    random_monotone_rule,
    validate,
)
from seqram.core import (
    AlternativeUniverse,
    CapacityError,
    ChoiceDistribution,
    ChoiceModelError,
    ConfigurationError,
    GenerationError,
    IncompleteRuleError,
    InputError,
    enumerate_subsets,
    max_preferred,
)
from seqram.ram import choice_probability, pairwise_preservation_violations, regularity_check
from seqram.rulefile import RuleFileError, beverage_rule, load_rule_file, write_rule_file
from seqram.sequential import (
    TournamentPlan,
    check_equivalence_conditions,
    compare_architectures,
    divergence_witness,
    sequential_distribution,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
