"""decspace: an exact algebra for merging rectilinear classifier models.

Classifiers are represented as decision spaces: finite sets of disjoint
axis-aligned regions, each carrying a class probability distribution.
The package provides exact set algebra over such regions, converters from
rule sets and decision trees, the merge and restriction operators with
their composites, merging schemes with impact analysis, and a synthetic
drift-stream experiment harness.
"""

from .geometry import Interval, Region, box
from .model import (
    Attribute,
    AttributeSchema,
    ClassDistribution,
    DecisionSpace,
    Element,
    classify,
    classify_many,
    semantically_equal,
    space_from_json,
    space_to_json,
    specialization,
    validate,
)
from .conversion import (
    DecisionTreeNode,
    OverlappingRulesError,
    Rule,
    RuleSet,
    RuleSyntaxError,
    format_ruleset,
    parse_ruleset,
    rules_to_space,
    tree_from_json,
    tree_to_rules,
    tree_to_space,
)
from .operators import (
    combine_values,
    intersection_report,
    merge,
    merge_nary,
    merge_streaming,
    op_barodot,
    op_plus,
    restrict,
    strictly_subsumes,
    subsumes,
)
from .schemes import (
    MergeScheme,
    build_balanced,
    build_chain,
    build_factored,
    execute,
    impacts,
)
from .harness import ExperimentResult, StreamConfig, generate_batch, induce_rules, run_experiment
from .laws import LawResult, nonassociativity_witness, run_all

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "AttributeSchema",
    "ClassDistribution",
    "DecisionSpace",
    "DecisionTreeNode",
    "Element",
    "ExperimentResult",
    "Interval",
    "LawResult",
    "MergeScheme",
    "OverlappingRulesError",
    "Region",
    "Rule",
    "RuleSet",
    "RuleSyntaxError",
    "StreamConfig",
    "box",
    "build_balanced",
    "build_chain",
    "build_factored",
    "classify",
    "classify_many",
    "combine_values",
    "execute",
    "format_ruleset",
    "generate_batch",
    "impacts",
    "induce_rules",
    "intersection_report",
    "merge",
    "merge_nary",
    "merge_streaming",
    "nonassociativity_witness",
    "op_barodot",
    "op_plus",
    "parse_ruleset",
    "restrict",
    "rules_to_space",
    "run_all",
    "run_experiment",
    "semantically_equal",
    "space_from_json",
    "space_to_json",
    "specialization",
    "strictly_subsumes",
    "subsumes",
    "tree_from_json",
    "tree_to_rules",
    "tree_to_space",
    "validate",
]
