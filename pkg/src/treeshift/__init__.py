"""Markov tree-shifts of finite type: block counting, recurrence systems, entropy."""
from .boundary import (
    BoundaryKind,
    TheoremCheck,
    boundary_entropy,
    check_all,
    check_dirichlet,
    check_neumann,
    check_periodic,
    count_boundary,
)
from .classify import ClassificationVerdict, classify_2x2, classify_general
from .core import (
    BasicSet,
    Block,
    Signature,
    TwoBlock,
    basic_set_from_mask,
    basic_set_mask,
    essentialize,
    format_basic_set,
    full_basic_set,
    make_basic_set,
    parse_basic_set,
    relabel,
    swap_children,
)
from .counting import count_blocks, estimate_entropy, log_block_counts
from .entropy import (
    EntropyEstimate,
    aho_sloane_probe,
    entropy_estimate,
    hidden_entropy_estimate,
    limit_existence_diagnostic,
)
from .errors import BudgetExceeded, ParseError, TreeShiftError, UnrealizableError, ValidationError
from .oracle import OracleQuery, enumerate_blocks, oracle_boundary_count, oracle_count
from .realize import build_realization, max_root, parse_polynomial, verify_realization
from .snre import Snre, derive_snre, evaluate_exact, evaluate_log, initial_counts, snre_to_basic_set

__version__ = "0.1.0"
