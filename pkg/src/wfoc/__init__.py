"""Weighted automata, weighted first-order logic, and the translations
between them, with multiset abstract semantics and semiring aggregators."""

from .automata import (
    Nfa, WeightedAutomaton, Run,
    enumerate_runs, count_accepting_runs, abstract_semantics,
    pair_semantics, accepts, words_upto, language_upto,
    scc_decompose, is_unambiguous, is_scc_unambiguous,
    classify_ambiguity, ambiguity_degree_bounded,
    UNAMBIGUOUS, FINITELY, POLYNOMIALLY, EXPONENTIALLY,
    transition_monoid, aperiodicity_index,
    product, disjoint_union, weighted_union, trim,
)
from .errors import HypothesisError, InputError, VerificationFailure
from .multiset import SeqMultiset
from .semantics import (
    Aggregator, Semiring, builtin_semiring, SEMIRING_NAMES,
    aggr_sp, aggr_ma, sum_product_aggregator, max_average_aggregator,
    concrete_semantics,
)
from .textfmt import (
    parse_automaton, parse_automaton_inline, serialize_automaton,
    serialize_automaton_inline, canonical_relabel, to_dot,
)
from .weights import Symbol, parse_weight, format_weight

__version__ = "0.1.0"
