"""
Block counts under leaf constraints, and the ``h = h^N = h^P = h^D`` criteria.

All three boundary conditions fix the labels on the bottom level of a block,
which turns counting into the ordinary product recurrence started from a
different base vector at height 1:

* Dirichlet(i): leaves are ``i``, so ``base[j] = [j == i]``; run ``n`` levels
  and sum over roots.
* Neumann: every leaf copies its parent, so each bottom internal node ``j``
  needs the constant block ``(j, j, ..., j)``; ``base[j]`` is 1 iff that block
  is allowed, and the count is the sum of the height ``n - 1`` values.
* Periodic: leaves equal the root.  For each root ``i`` run the Dirichlet(i)
  recurrence and keep only the root-``i`` entry.

The recurrences are not restricted to ``d = k = 2``; the three criteria are.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .classify import classify_2x2
from .core import BasicSet, essentialize
from .counting import estimate_entropy
from .entropy import EntropyEstimate, entropy_estimate
from .errors import ValidationError
from .snre import (
    DEFAULT_PRECISION,
    CountSequence,
    LogCountSequence,
    derive_snre,
    evaluate_exact,
    evaluate_log,
    log_context,
    logsumexp,
)

__all__ = [
    "BoundaryKind",
    "BoundaryCounts",
    "TheoremCheck",
    "count_boundary",
    "boundary_log_counts",
    "boundary_entropy",
    "check_neumann",
    "check_dirichlet",
    "check_periodic",
    "check_all",
]


@dataclass(frozen=True)
class BoundaryKind:
    tag: str  # periodic | dirichlet | neumann
    symbol: Optional[int] = None

    def __post_init__(self):
        if self.tag not in ("periodic", "dirichlet", "neumann"):
            raise ValidationError(f"unknown boundary kind {self.tag!r}")
        if (self.tag == "dirichlet") != (self.symbol is not None):
            raise ValidationError("exactly the Dirichlet kind carries a symbol")

    @classmethod
    def periodic(cls):
        return cls("periodic")

    @classmethod
    def neumann(cls):
        return cls("neumann")

    @classmethod
    def dirichlet(cls, i: int):
        return cls("dirichlet", i)

    @classmethod
    def parse(cls, text: str) -> BoundaryKind:
        """``periodic``, ``neumann`` or ``dirichlet:<i>``."""
        tag, _, arg = text.strip().lower().partition(":")
        if tag == "dirichlet":
            try:
                return cls(tag, int(arg))
            except ValueError:
                raise ValidationError(f"bad Dirichlet symbol in {text!r}") from None
        if arg:
            raise ValidationError(f"{tag} takes no argument")
        return cls(tag)

    def check(self, k: int) -> None:
        if self.symbol is not None and not 1 <= self.symbol <= k:
            raise ValidationError(f"Dirichlet symbol {self.symbol} out of range 1..{k}")

    def __str__(self):
        return f"dirichlet:{self.symbol}" if self.tag == "dirichlet" else self.tag


@dataclass(frozen=True)
class BoundaryCounts:
    per_symbol: tuple  # counts (or logs) indexed by root symbol
    total: object


def _runs(b: BasicSet, kind: BoundaryKind, n: int):
    """(base vector, number of heights, root filter) for each recurrence run."""
    k = b.k
    if kind.tag == "dirichlet":
        return [(tuple(int(j == kind.symbol) for j in b.signature.symbols), n, None)]
    if kind.tag == "neumann":
        base = tuple(int((j,) * (b.d + 1) in b) for j in b.signature.symbols)
        return [(base, n - 1, None)]
    return [(tuple(int(j == i) for j in b.signature.symbols), n, i) for i in range(1, k + 1)]


def _prepare(b: BasicSet, kind: BoundaryKind, n: int, essential: bool):
    if n < 2:
        raise ValidationError("boundary counts need n >= 2")
    kind.check(b.k)
    if essential:
        b, _ = essentialize(b)
    return b, derive_snre(b)


def count_boundary(
    b: BasicSet,
    kind: BoundaryKind,
    n: int,
    backend: str = "exact",
    essential: bool = True,
    precision_bits: int = DEFAULT_PRECISION,
) -> BoundaryCounts:
    """Number of admissible height-``n`` blocks satisfying the leaf constraint.

    ``backend="exact"`` gives integers; ``"log"`` gives natural logs.
    """
    if backend not in ("exact", "log"):
        raise ValidationError(f"unknown backend {backend!r}")
    b, s = _prepare(b, kind, n, essential)
    per = [0] * b.k if backend == "exact" else None
    logs = []
    for base, height, root in _runs(b, kind, n):
        if backend == "exact":
            seq = evaluate_exact(s, base, height, start=1) if height > 1 else CountSequence(1, (base,))
            top = seq[height]
            if root is None:
                per = [x + y for x, y in zip(per, top)]
            else:
                per[root - 1] += top[root - 1]
        else:
            seq = evaluate_log(s, base, height, precision_bits, start=1) if height > 1 else \
                LogCountSequence.from_exact(CountSequence(1, (base,)), precision_bits)
            logs.append((seq[height], root))
    if backend == "exact":
        return BoundaryCounts(tuple(per), sum(per))
    ctx = seq.ctx
    if kind.tag == "periodic":
        per = tuple(row[root - 1] for row, root in logs)
    else:
        per = logs[0][0]
    return BoundaryCounts(tuple(per), logsumexp(ctx, per))


def boundary_log_counts(
    b: BasicSet,
    kind: BoundaryKind,
    n_max: int,
    essential: bool = True,
    precision_bits: int = DEFAULT_PRECISION,
) -> dict:
    """``{n: ln |B_n^kind|}`` for ``n = 2..n_max``, one recurrence pass per run."""
    b, s = _prepare(b, kind, 2, essential)
    ctx = log_context(precision_bits)
    out = {n: [] for n in range(2, n_max + 1)}
    shift = 1 if kind.tag == "neumann" else 0
    for base, _, root in _runs(b, kind, n_max):
        seq = evaluate_log(s, base, max(n_max - shift, 2), precision_bits, start=1)
        for n in out:
            row = seq[n - shift]
            out[n].extend(row if root is None else (row[root - 1],))
    return {n: logsumexp(ctx, terms) for n, terms in out.items()}


def boundary_entropy(
    b: BasicSet,
    kind: BoundaryKind,
    n_max: int = 30,
    estimator: str = "difference",
    essential: bool = True,
) -> EntropyEstimate:
    if n_max < 4:
        raise ValidationError("boundary_entropy needs n_max >= 4")
    return entropy_estimate(boundary_log_counts(b, kind, n_max, essential), estimator)


# --- criteria for d = k = 2 ------------------------------------------------------

CHECK_HEIGHT = 30


@dataclass(frozen=True)
class TheoremCheck:
    relation: str  # equal | strictly_less | unknown
    condition_witnesses: tuple  # (label, blocks, holds)
    numeric: Optional[dict] = None
    note: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "relation": self.relation,
            "witnesses": [
                {"condition": label, "blocks": [list(t) for t in blocks], "holds": holds}
                for label, blocks, holds in self.condition_witnesses
            ],
            "h": None if self.numeric is None else self.numeric["h_estimate"],
            "h_boundary": None if self.numeric is None else self.numeric["h_boundary_estimate"],
            "note": self.note,
        }


def _require_binary(b: BasicSet):
    if (b.d, b.k) != (2, 2):
        raise ValidationError(f"boundary criteria need d = k = 2, got d={b.d} k={b.k}")


def _hypothesis(b: BasicSet) -> Optional[str]:
    """None if ``h(B) > 0`` is established, else a note explaining why not."""
    v = classify_2x2(b)
    if v.kind == "ln_d":
        return None
    if v.kind == "zero":
        return "theorem hypothesis not met: h(B) = 0"
    return "theorem hypothesis not established: h(B) undetermined"


def _numerics(b: BasicSet, kind: BoundaryKind) -> dict:
    return {
        "h_estimate": estimate_entropy(b, CHECK_HEIGHT).value,
        "h_boundary_estimate": boundary_entropy(b, kind, CHECK_HEIGHT).value,
    }


def _cond(b: BasicSet, label: str, blocks) -> tuple:
    blocks = tuple(blocks)
    return (label, blocks, b.issuperset(blocks))


def check_neumann(b: BasicSet) -> TheoremCheck:
    """``h^N = h`` iff ``{(1,1,1),(2,2,2)}`` or some ``{(1,i,i),(2,i,i)}`` is allowed."""
    _require_binary(b)
    conds = (
        _cond(b, "(1)", [(1, 1, 1), (2, 2, 2)]),
        _cond(b, "(2) i=1", [(1, 1, 1), (2, 1, 1)]),
        _cond(b, "(2) i=2", [(1, 2, 2), (2, 2, 2)]),
    )
    kind = BoundaryKind.neumann()
    note = _hypothesis(b)
    if note:
        return TheoremCheck("unknown", conds, _numerics(b, kind), note)
    relation = "equal" if any(c[2] for c in conds) else "strictly_less"
    return TheoremCheck(relation, conds, _numerics(b, kind))


def check_dirichlet(b: BasicSet, i: int) -> TheoremCheck:
    """``h^{D_i} = h`` iff ``{(1,i,i),(2,i,i)}`` or ``{(j,i,i),(1,j,j),(2,j,j)}`` (``j = 3 - i``)."""
    _require_binary(b)
    if i not in (1, 2):
        raise ValidationError("Dirichlet symbol must be 1 or 2")
    j = 3 - i
    conds = (
        _cond(b, "(1)", [(1, i, i), (2, i, i)]),
        _cond(b, "(2)", [(j, i, i), (1, j, j), (2, j, j)]),
    )
    kind = BoundaryKind.dirichlet(i)
    note = _hypothesis(b)
    if note:
        return TheoremCheck("unknown", conds, _numerics(b, kind), note)
    relation = "equal" if any(c[2] for c in conds) else "strictly_less"
    return TheoremCheck(relation, conds, _numerics(b, kind))


def check_periodic(b: BasicSet) -> TheoremCheck:
    """Sufficient: ``v_i`` dominates ``v_j`` and ``{(1,i,i),(2,i,i)}`` allowed.
    Necessary: ``{(1,i,i),(2,i,i)}`` allowed for some ``i``.  Between the two
    the relation is reported unknown with numerics attached.
    """
    _require_binary(b)
    v = derive_snre(b).indicator_vectors()
    conds = []
    sufficient = False
    for i in (1, 2):
        j = 3 - i
        pair = _cond(b, f"(b) i={i}", [(1, i, i), (2, i, i)])
        dom = v[i - 1].dominates(v[j - 1])
        conds.append((f"(a) i={i}: v_{i} dominates v_{j}", (), dom))
        conds.append(pair)
        sufficient |= dom and pair[2]
    necessary = any(c[2] for c in conds if c[0].startswith("(b)"))
    conds = tuple(conds)
    kind = BoundaryKind.periodic()
    note = _hypothesis(b)
    numeric = _numerics(b, kind)
    if note:
        return TheoremCheck("unknown", conds, numeric, note)
    if sufficient:
        return TheoremCheck("equal", conds, numeric)
    if not necessary:
        return TheoremCheck("strictly_less", conds, numeric)
    return TheoremCheck("unknown", conds, numeric, "between the necessary and sufficient conditions")


def check_all(b: BasicSet) -> dict:
    return {
        "neumann": check_neumann(b),
        "dirichlet:1": check_dirichlet(b, 1),
        "dirichlet:2": check_dirichlet(b, 2),
        "periodic": check_periodic(b),
    }
