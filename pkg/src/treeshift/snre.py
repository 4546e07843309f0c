"""
Systems of nonlinear recurrence equations (SNREs) of degree ``(d, k)``.

An SNRE assigns to each symbol ``i`` a set of ordered ``d``-tuples; the count
of height-``n`` blocks rooted at ``i`` is

    a_n^(i) = sum over tuples (u_0..u_{d-1}) of  a_{n-1}^(u_0) * ... * a_{n-1}^(u_{d-1}).

:func:`derive_snre` compiles a basic set into this form and
:func:`snre_to_basic_set` goes back from monomial coefficients.  Sequences are
indexed by block height; :func:`initial_counts` gives the values at ``n = 2``.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Mapping, Optional, Sequence, Union

import mpmath

from .core import BasicSet, Signature, make_basic_set
from .errors import BudgetExceeded, UnrealizableError, ValidationError

__all__ = [
    "Snre",
    "IndicatorVector",
    "CountSequence",
    "LogCountSequence",
    "derive_snre",
    "snre_to_basic_set",
    "initial_counts",
    "evaluate_exact",
    "evaluate_log",
    "log_context",
    "logsumexp",
    "DEFAULT_PRECISION",
    "DEFAULT_MAX_BITS",
]

DEFAULT_PRECISION = 128
DEFAULT_MAX_BITS = 1 << 23

Monomial = tuple  # sorted tuple of d symbols (a multiset)


@lru_cache(maxsize=None)
def log_context(precision_bits: int) -> mpmath.ctx_mp.MPContext:
    """A private mpmath context; never mutated after creation."""
    if precision_bits < 53:
        raise ValidationError("precision_bits must be >= 53")
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    return ctx


@dataclass(frozen=True)
class IndicatorVector:
    """0/1 entries over ``A^d`` in lexicographic order."""

    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if any(e not in (0, 1) for e in self.entries):
            raise ValidationError("indicator entries must be 0 or 1")

    @classmethod
    def from_tuples(cls, signature: Signature, tuples) -> IndicatorVector:
        present = set(map(tuple, tuples))
        return cls(tuple(int(t in present) for t in signature.child_tuples()))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def support_size(self) -> int:
        return sum(self.entries)

    def dominates(self, other: IndicatorVector) -> bool:
        if len(self) != len(other):
            raise ValidationError("indicator vectors of different length")
        return all(x >= y for x, y in zip(self.entries, other.entries))

    def __str__(self):
        return "(" + ",".join(map(str, self.entries)) + ")"


@dataclass(frozen=True)
class Snre:
    """Ordered-tuple rules per symbol; ``rules[i - 1]`` belongs to symbol ``i``."""

    signature: Signature
    rules: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        sig = self.signature
        rules = tuple(tuple(sorted(set(map(tuple, r)))) for r in self.rules)
        if len(rules) != sig.k:
            raise ValidationError(f"need one rule set per symbol ({sig.k}), got {len(rules)}")
        for r in rules:
            for t in r:
                if len(t) != sig.d or any(not 1 <= s <= sig.k for s in t):
                    raise ValidationError(f"tuple {t} invalid for d={sig.d}, k={sig.k}")
        object.__setattr__(self, "rules", rules)

    def monomials(self) -> list[dict[Monomial, int]]:
        """Per symbol: multiset of factors -> number of ordered tuples realizing it."""
        return [dict(sorted(Counter(tuple(sorted(t)) for t in r).items())) for r in self.rules]

    def indicator_vectors(self) -> list[IndicatorVector]:
        return [IndicatorVector.from_tuples(self.signature, r) for r in self.rules]

    @classmethod
    def from_indicator_vectors(cls, signature: Signature, vectors: Sequence) -> Snre:
        index = signature.child_tuples()
        rules = []
        for v in vectors:
            v = v if isinstance(v, IndicatorVector) else IndicatorVector(v)
            if len(v) != len(index):
                raise ValidationError(f"indicator vector needs {len(index)} entries")
            rules.append(tuple(t for t, e in zip(index, v.entries) if e))
        return cls(signature, tuple(rules))

    def to_text(self, names: Optional[Mapping[int, str]] = None) -> str:
        """One line per symbol: ``a^(i)_n = <coeff*monomial> + ...``."""
        names = names or {}

        def var(s):
            return f"{names.get(s, f'a^({s})')}_{{n-1}}"

        lines = []
        for i, mons in enumerate(self.monomials(), start=1):
            terms = []
            for mono, coeff in mons.items():
                factors = [
                    var(s) + (f"^{e}" if e > 1 else "") for s, e in sorted(Counter(mono).items())
                ]
                terms.append(("" if coeff == 1 else f"{coeff}*") + "*".join(factors))
            lhs = f"{names.get(i, f'a^({i})')}_n"
            lines.append(f"{lhs} = {' + '.join(terms) if terms else '0'}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "d": self.signature.d,
            "k": self.signature.k,
            "rules": {str(i): [list(t) for t in r] for i, r in enumerate(self.rules, start=1)},
            "monomials": {
                str(i): [{"factors": list(m), "coefficient": c} for m, c in mons.items()]
                for i, mons in enumerate(self.monomials(), start=1)
            },
            "indicator_vectors": {
                str(i): list(v.entries) for i, v in enumerate(self.indicator_vectors(), start=1)
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def derive_snre(b: BasicSet) -> Snre:
    """Rules of symbol ``i`` are the children tuples of the blocks rooted at ``i``."""
    return Snre(b.signature, tuple(b.rooted_at(s) for s in b.signature.symbols))


def _orderings(mono: Monomial) -> list[tuple[int, ...]]:
    return sorted(set(permutations(mono)))


def snre_to_basic_set(
    system: Union[Snre, Sequence[Mapping], Mapping[int, Mapping]],
    signature: Optional[Signature] = None,
) -> BasicSet:
    """Build a basic set whose SNRE has the given monomial coefficients.

    ``system`` is an :class:`Snre` (its monomial form is used) or per-symbol
    mappings ``multiset -> coefficient``, given as a list indexed from symbol 1
    or a dict keyed by symbol; then ``signature`` is required.  For each
    monomial the ``coefficient`` lexicographically smallest distinct
    orderings are chosen.
    """
    if isinstance(system, Snre):
        signature = system.signature
        per_symbol = dict(enumerate(system.monomials(), start=1))
    else:
        if signature is None:
            raise ValidationError("signature required for a monomial system")
        if isinstance(system, Mapping):
            per_symbol = dict(system)
        else:
            per_symbol = dict(enumerate(system, start=1))
    blocks = []
    for i, mons in per_symbol.items():
        if not 1 <= i <= signature.k:
            raise ValidationError(f"symbol {i} out of range 1..{signature.k}")
        for mono, coeff in mons.items():
            mono = tuple(sorted(mono))
            if len(mono) != signature.d:
                raise ValidationError(f"monomial {mono} does not have degree d={signature.d}")
            if coeff < 0:
                raise ValidationError(f"negative coefficient {coeff} on {mono}")
            orders = _orderings(mono)
            if coeff > len(orders):
                raise UnrealizableError(
                    f"coefficient {coeff} on {mono} exceeds its {len(orders)} distinct orderings"
                )
            blocks.extend((i,) + t for t in orders[:coeff])
    return make_basic_set(signature, blocks)


def initial_counts(b: BasicSet) -> tuple[int, ...]:
    """``a_2^(i)``: number of blocks rooted at ``i``."""
    return tuple(len(b.rooted_at(s)) for s in b.signature.symbols)


@dataclass(frozen=True)
class CountSequence:
    """Exact per-symbol counts for heights ``start .. start + len(values) - 1``."""

    start: int
    values: tuple[tuple[int, ...], ...]

    @property
    def n_max(self) -> int:
        return self.start + len(self.values) - 1

    def heights(self) -> range:
        return range(self.start, self.n_max + 1)

    def __getitem__(self, n: int) -> tuple[int, ...]:
        if not self.start <= n <= self.n_max:
            raise IndexError(f"height {n} outside {self.start}..{self.n_max}")
        return self.values[n - self.start]

    def total(self, n: int) -> int:
        return sum(self[n])

    def totals(self) -> list[int]:
        return [sum(v) for v in self.values]


@dataclass(frozen=True)
class LogCountSequence:
    """Natural logs of per-symbol counts; ``-inf`` marks a zero count."""

    start: int
    values: tuple  # tuple[tuple[mpf, ...], ...]
    precision: int = DEFAULT_PRECISION

    @property
    def ctx(self):
        return log_context(self.precision)

    @property
    def n_max(self) -> int:
        return self.start + len(self.values) - 1

    def heights(self) -> range:
        return range(self.start, self.n_max + 1)

    def __getitem__(self, n: int):
        if not self.start <= n <= self.n_max:
            raise IndexError(f"height {n} outside {self.start}..{self.n_max}")
        return self.values[n - self.start]

    def log_total(self, n: int):
        return logsumexp(self.ctx, self[n])

    def log_totals(self) -> dict:
        return {n: self.log_total(n) for n in self.heights()}

    @classmethod
    def from_exact(cls, seq: CountSequence, precision: int = DEFAULT_PRECISION):
        ctx = log_context(precision)
        vals = tuple(tuple(ctx.log(a) if a else ctx.ninf for a in row) for row in seq.values)
        return cls(seq.start, vals, precision)


def logsumexp(ctx, terms):
    """``ln sum exp(t)`` with the largest term factored out; ``-inf`` terms are skipped."""
    terms = [t for t in terms if t != ctx.ninf]
    if not terms:
        return ctx.ninf
    m = max(terms)
    return m + ctx.log(ctx.fsum(ctx.exp(t - m) for t in terms))


def _check_initial(s: Snre, initial) -> tuple:
    initial = tuple(initial)
    if len(initial) != s.signature.k:
        raise ValidationError(f"need {s.signature.k} initial values, got {len(initial)}")
    return initial


def evaluate_exact(
    s: Snre,
    initial: Sequence[int],
    n_max: int,
    start: int = 2,
    max_bits: int = DEFAULT_MAX_BITS,
) -> CountSequence:
    """Iterate the recurrence with Python integers from height ``start`` to ``n_max``.

    Raises :class:`BudgetExceeded` before producing any count longer than
    ``max_bits`` bits.
    """
    initial = _check_initial(s, initial)
    if any(not isinstance(a, int) or a < 0 for a in initial):
        raise ValidationError("initial counts must be non-negative integers")
    if n_max < start:
        raise ValidationError(f"n_max={n_max} is below the start height {start}")
    mons = [[(Counter(m), c) for m, c in per.items()] for per in s.monomials()]
    rows = [initial]
    for n in range(start + 1, n_max + 1):
        prev = rows[-1]
        bits = [a.bit_length() for a in prev]
        bound = max(
            (sum(e * bits[x - 1] for x, e in m.items()) + c.bit_length() for per in mons for m, c in per),
            default=0,
        )
        if bound > max_bits:
            raise BudgetExceeded(
                f"height {n} needs ~{bound} bits (> {max_bits}); use the log backend"
            )
        row = []
        for per in mons:
            acc = 0
            for m, c in per:
                term = c
                for x, e in m.items():
                    term *= prev[x - 1] ** e
                acc += term
            row.append(acc)
        rows.append(tuple(row))
    return CountSequence(start, tuple(rows))


def evaluate_log(
    s: Snre,
    initial: Sequence,
    n_max: int,
    precision_bits: int = DEFAULT_PRECISION,
    start: int = 2,
    initial_is_log: bool = False,
) -> LogCountSequence:
    """Iterate ``ln a_n^(i)`` with ``precision_bits`` of mantissa.

    Each step is a log-sum-exp over the monomials of a symbol with the
    largest term factored out; zero counts stay ``-inf``.
    """
    ctx = log_context(precision_bits)
    initial = _check_initial(s, initial)
    if n_max < start:
        raise ValidationError(f"n_max={n_max} is below the start height {start}")
    if initial_is_log:
        row = tuple(ctx.mpf(v) for v in initial)
    else:
        if any(a < 0 for a in initial):
            raise ValidationError("initial counts must be non-negative")
        row = tuple(ctx.log(a) if a else ctx.ninf for a in initial)
    mons = [
        [(tuple(Counter(m).items()), ctx.log(c)) for m, c in per.items()] for per in s.monomials()
    ]
    rows = [row]
    for _ in range(start + 1, n_max + 1):
        prev = rows[-1]
        new = []
        for per in mons:
            terms = []
            for factors, lc in per:
                if any(prev[x - 1] == ctx.ninf for x, _ in factors):
                    continue
                terms.append(lc + ctx.fsum(e * prev[x - 1] for x, e in factors))
            new.append(logsumexp(ctx, terms))
        rows.append(tuple(new))
    return LogCountSequence(start, tuple(rows), precision_bits)
