"""
Brute-force block enumeration.

Labels of a height-``n`` block are assigned one node at a time in
breadth-first order; as soon as the last child of a node is labeled, the
node's 2-block is checked against the basic set and the branch is cut if it
is forbidden.  Nothing here uses the product recurrence, so the counts are
an independent check of :mod:`treeshift.snre` and :mod:`treeshift.boundary`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .boundary import BoundaryKind
from .core import BasicSet, Block
from .errors import BudgetExceeded, ValidationError

__all__ = ["OracleQuery", "OracleResult", "oracle_count", "oracle_boundary_count", "enumerate_blocks"]

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class OracleQuery:
    basic_set: BasicSet
    height: int
    root_filter: Optional[int] = None
    boundary: Optional[BoundaryKind] = None
    extend_horizon: int = 0
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.height < 1:
            raise ValidationError("height must be >= 1")
        if self.extend_horizon < 0:
            raise ValidationError("extend_horizon must be >= 0")
        k = self.basic_set.k
        if self.root_filter is not None and not 1 <= self.root_filter <= k:
            raise ValidationError(f"root filter {self.root_filter} out of range 1..{k}")
        if self.boundary is not None:
            self.boundary.check(k)


@dataclass(frozen=True)
class OracleResult:
    per_symbol: tuple[int, ...]
    total: int
    visits: int


def _extendable_table(b: BasicSet, horizon: int):
    """``ok(s)``: some admissible block of height ``horizon + 1`` is rooted at ``s``."""
    rules = {s: b.rooted_at(s) for s in b.signature.symbols}

    @lru_cache(maxsize=None)
    def exists(s: int, h: int) -> bool:
        if h == 1:
            return True
        return any(all(exists(c, h - 1) for c in kids) for kids in rules[s])

    return {s: exists(s, horizon + 1) for s in b.signature.symbols}


class _Search:
    def __init__(self, q: OracleQuery):
        b = q.basic_set
        self.d = b.d
        self.symbols = tuple(b.signature.symbols)
        self.size = b.signature.block_size(q.height)
        self.n_internal = b.signature.block_size(q.height - 1)
        self.allowed = b.tuples()
        self.root_filter = q.root_filter
        self.boundary = q.boundary
        self.ext = _extendable_table(b, q.extend_horizon) if q.extend_horizon else None
        self.budget = q.budget
        self.visits = 0
        self.labels = [0] * self.size

    def candidates(self, j: int):
        if j == 0:
            return (self.root_filter,) if self.root_filter is not None else self.symbols
        if j >= self.n_internal and self.boundary is not None:
            kind = self.boundary.tag
            if kind == "periodic":
                return (self.labels[0],)
            if kind == "dirichlet":
                return (self.boundary.symbol,)
            return (self.labels[(j - 1) // self.d],)
        return self.symbols

    def accept(self, j: int) -> bool:
        """Check every constraint completed by labeling node ``j``."""
        self.visits += 1
        if self.visits > self.budget:
            raise BudgetExceeded(
                f"oracle exceeded {self.budget} node visits; use a recurrence backend"
            )
        labels = self.labels
        if self.ext is not None and j >= self.n_internal and not self.ext[labels[j]]:
            return False
        if j and (j - 1) % self.d == self.d - 1:
            p = (j - 1) // self.d
            return (labels[p],) + tuple(labels[p * self.d + 1 : j + 1]) in self.allowed
        return True

    def count(self, j: int) -> int:
        if j == self.size:
            return 1
        total = 0
        for s in self.candidates(j):
            self.labels[j] = s
            if self.accept(j):
                total += self.count(j + 1)
        return total

    def walk(self, j: int) -> Iterator[tuple[int, ...]]:
        if j == self.size:
            yield tuple(self.labels)
            return
        for s in self.candidates(j):
            self.labels[j] = s
            if self.accept(j):
                yield from self.walk(j + 1)


def oracle_count(q: OracleQuery) -> OracleResult:
    """Count admissible height-``n`` blocks by exhaustive search.

    Raises :class:`BudgetExceeded` once more than ``q.budget`` label
    assignments have been tried.
    """
    search = _Search(q)
    per_symbol = []
    for s in q.basic_set.signature.symbols:
        if q.root_filter is not None and s != q.root_filter:
            per_symbol.append(0)
            continue
        search.labels[0] = s
        per_symbol.append(search.count(1) if search.accept(0) else 0)
    return OracleResult(tuple(per_symbol), sum(per_symbol), search.visits)


def oracle_boundary_count(q: OracleQuery) -> OracleResult:
    """:func:`oracle_count` for a query that carries a boundary condition."""
    if q.boundary is None:
        raise ValidationError("oracle_boundary_count needs a boundary condition")
    return oracle_count(q)


def enumerate_blocks(q: OracleQuery) -> Iterator[Block]:
    """Yield the admissible blocks themselves, in lexicographic label order."""
    search = _Search(q)
    sig = q.basic_set.signature
    for labels in search.walk(0):
        yield Block(sig, q.height, labels)
