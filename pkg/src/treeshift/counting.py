"""Block counts of a basic set through any backend."""
from __future__ import annotations

from typing import Union

from .core import BasicSet, essentialize
from .entropy import EntropyEstimate, entropy_estimate
from .errors import ValidationError
from .snre import (
    DEFAULT_PRECISION,
    CountSequence,
    LogCountSequence,
    derive_snre,
    evaluate_exact,
    evaluate_log,
    initial_counts,
)

__all__ = ["count_blocks", "log_block_counts", "estimate_entropy", "BACKENDS"]

BACKENDS = ("exact", "log", "oracle")


def count_blocks(
    b: BasicSet,
    n_max: int,
    backend: str = "exact",
    essential: bool = True,
    precision_bits: int = DEFAULT_PRECISION,
    **limits,
) -> Union[CountSequence, LogCountSequence]:
    """Per-symbol counts of height-``n`` blocks for ``n = 2..n_max``.

    With ``essential=True`` (default) the basic set is essentialized first, so
    the counts are those of blocks that occur in some infinite tree; with
    ``essential=False`` they count locally admissible blocks.  ``limits`` is
    forwarded as ``max_bits`` (exact) or ``budget`` (oracle).
    """
    if backend not in BACKENDS:
        raise ValidationError(f"unknown backend {backend!r}")
    if n_max < 2:
        raise ValidationError("n_max must be >= 2")
    if essential:
        b, _ = essentialize(b)
    if backend == "oracle":
        from .oracle import OracleQuery, oracle_count

        rows = tuple(oracle_count(OracleQuery(b, n, **limits)).per_symbol for n in range(2, n_max + 1))
        return CountSequence(2, rows)
    s = derive_snre(b)
    if backend == "exact":
        return evaluate_exact(s, initial_counts(b), n_max, **limits)
    return evaluate_log(s, initial_counts(b), n_max, precision_bits)


def log_block_counts(b: BasicSet, n_max: int, essential: bool = True,
                     precision_bits: int = DEFAULT_PRECISION) -> LogCountSequence:
    return count_blocks(b, n_max, "log", essential, precision_bits)


def estimate_entropy(b: BasicSet, n_max: int = 40, estimator: str = "difference",
                     essential: bool = True) -> EntropyEstimate:
    return entropy_estimate(log_block_counts(b, n_max, essential), estimator)
