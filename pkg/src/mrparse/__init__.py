"""Joint constituent and dependency parsing with a multitask pointer network."""

from .encoding import (
    assign_heads,
    collapse_unary_chains,
    decode,
    encode,
    is_continuous,
    is_projective,
    restore_unary_chains,
    tree_to_augmented,
)
from .headrules import HeadRuleSet, load_head_rules, parse_head_rules
from .transition import ParserState, TransitionSequence, greedy_parse, legal_heads, oracle, replay
from .trees import (
    AugmentedDepTree,
    ConstituentTree,
    DependencyTree,
    Node,
    Token,
    parse_augmented,
    parse_constituent,
    parse_dependency,
    serialize_augmented,
    serialize_constituent,
    serialize_dependency,
)

__version__ = "0.1.0"
