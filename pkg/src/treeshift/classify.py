"""
Symbolic entropy classification.

For ``d = k = 2`` the entropy is either 0 or ``ln 2``; :func:`classify_2x2`
decides which by a fixed sequence of structural rules on the two indicator
vectors ``v_F`` (root 1) and ``v_G`` (root 2), falling back to a numeric
estimate only when no rule applies.  :func:`classify_general` applies the
dominant-vector and symmetric-type criteria for arbitrary ``(d, k)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .core import BasicSet, essentialize, make_basic_set
from .counting import estimate_entropy
from .errors import ValidationError
from .snre import IndicatorVector, Snre, derive_snre

__all__ = [
    "ClassificationVerdict",
    "dominance",
    "is_complementary",
    "is_symmetric",
    "classify_2x2",
    "classify_general",
    "CASE_TABLE",
]

NUMERIC_HEIGHT = 40
NUMERIC_BAND = 0.1


@dataclass(frozen=True)
class ClassificationVerdict:
    kind: str  # zero | ln_d | ln_h | undetermined
    degree: Optional[int] = None
    justification: Optional[str] = None
    witnesses: tuple[IndicatorVector, ...] = ()
    numeric_check: Optional[float] = None
    bounds: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if self.kind in ("ln_d", "ln_h") and (self.degree is None or self.degree < 2):
            raise ValidationError(f"{self.kind} verdict needs an integer degree >= 2")
        if self.kind != "undetermined" and not self.justification:
            raise ValidationError("decided verdicts need a justification")

    @property
    def label(self) -> str:
        return {
            "zero": "Zero",
            "ln_d": f"LnD({self.degree})",
            "ln_h": f"LnH({self.degree})",
            "undetermined": "Undetermined",
        }[self.kind]

    @property
    def value(self) -> Optional[float]:
        if self.kind == "zero":
            return 0.0
        if self.kind in ("ln_d", "ln_h"):
            return math.log(self.degree)
        return None

    @property
    def decided(self) -> bool:
        return self.kind != "undetermined"

    def to_json_dict(self) -> dict:
        w = [list(v.entries) for v in self.witnesses]
        return {
            "value": self.label,
            "h": self.value,
            "justification": self.justification,
            "v_F": w[0] if len(w) > 0 else None,
            "v_G": w[1] if len(w) > 1 else None,
            "indicator_vectors": w,
            "numeric_check": self.numeric_check,
            "bounds": list(self.bounds) if self.bounds else None,
        }


def _vec(v) -> IndicatorVector:
    return v if isinstance(v, IndicatorVector) else IndicatorVector(v)


def dominance(v, w) -> str:
    """``v_dominates``, ``w_dominates``, ``both`` (equal) or ``neither``."""
    v, w = _vec(v), _vec(w)
    vd, wd = v.dominates(w), w.dominates(v)
    if vd and wd:
        return "both"
    if vd:
        return "v_dominates"
    if wd:
        return "w_dominates"
    return "neither"


def is_complementary(v, w) -> bool:
    v, w = _vec(v), _vec(w)
    if len(v) != 4 or len(w) != 4:
        raise ValidationError("complementarity is defined for d = k = 2 (length-4 vectors)")
    return all(x + y >= 1 for x, y in zip(v.entries, w.entries))


def is_symmetric(b: BasicSet) -> bool:
    """All root symbols allow exactly the same set of children tuples."""
    images = {frozenset(b.rooted_at(s)) for s in b.signature.symbols}
    return len(images) <= 1


# Residual configurations (v_F, v_G) that no corollary covers, up to symmetry.
CASE_TABLE = {
    ((0, 1, 1, 0), (1, 0, 1, 0)): ("case (1)", "ln_d"),
    ((0, 1, 1, 0), (1, 1, 0, 0)): ("case (2)", "ln_d"),
    ((0, 0, 1, 1), (0, 1, 1, 0)): ("case (3)", "ln_d"),
    ((0, 1, 1, 0), (1, 0, 0, 0)): ("case (4)", "ln_d"),
    ((0, 0, 1, 1), (0, 1, 0, 0)): ("case (5)", "ln_d"),
    ((0, 1, 1, 0), (0, 0, 0, 1)): ("case (6)", "zero"),
}


def _swap_children(v):
    return (v[0], v[2], v[1], v[3])


def _orbit(vf, vg):
    """Images of ``(v_F, v_G)`` under child swap and symbol swap."""
    out = []
    for f, g in ((vf, vg), (vg[::-1], vf[::-1])):
        out.append((f, g))
        out.append((_swap_children(f), _swap_children(g)))
    return out


def _is_unit(snre: Snre, symbol: int) -> bool:
    # only rule is the constant tuple (s, ..., s): count is 1 at every height
    return snre.rules[symbol - 1] == ((symbol,) * snre.signature.d,)


def _numeric(b: BasicSet) -> float:
    return estimate_entropy(b, NUMERIC_HEIGHT).value


def classify_2x2(b: BasicSet, numeric_check: bool = True) -> ClassificationVerdict:
    """Decide ``h(B) in {0, ln 2}`` for a binary basic set over two symbols.

    Rules, first match wins: empty or degenerate after essentialization;
    dominant type with at least two terms on the dominating side (Corollary 1,
    except when the dominated symbol is a unit and the dominating one is linear
    in itself); complementary type; a self-square term with at least two
    terms (Corollary 2); ``v_F + v_G >= (1,0,1,1)`` or ``(1,1,0,1)``
    (Corollary 3); the residual cases (1)-(6) up to symmetry; one tuple per
    symbol, or a unit symbol beside a symbol linear in itself (zero);
    otherwise the difference estimator at height 40 with a 0.1 band.
    """
    if (b.d, b.k) != (2, 2):
        raise ValidationError(f"classify_2x2 needs d = k = 2, got d={b.d} k={b.k}")
    e, removed = essentialize(b)
    snre = derive_snre(e)
    vf, vg = snre.indicator_vectors()
    check = _numeric(e) if numeric_check else None

    def verdict(kind, why, **kw):
        return ClassificationVerdict(
            kind, 2 if kind == "ln_d" else None, why, (vf, vg), check, **kw
        )

    if e.is_empty():
        return verdict("zero", "empty basic set")
    if removed:
        # one live symbol whose only block is constant: every count is 1
        return verdict("zero", "degenerate: single live symbol")

    F, G = vf.entries, vg.entries
    nf, ng = vf.support_size, vg.support_size
    dom = dominance(vf, vg)
    if dom != "neither":
        # dominating symbol first
        pairs = {"v_dominates": [(1, nf, 2)], "w_dominates": [(2, ng, 1)],
                 "both": [(1, nf, 2), (2, ng, 1)]}[dom]
        for top, n_top, low in pairs:
            # a unit dominated symbol beside a dominating symbol linear in itself
            # collapses to a linear recurrence (e.g. a_n = a_{n-1} + 1)
            linear = all(t.count(top) <= 1 for t in snre.rules[top - 1])
            if n_top >= 2 and not (_is_unit(snre, low) and linear):
                return verdict("ln_d", "Corollary 1")

    if is_complementary(vf, vg):
        return verdict("ln_d", "complementary Lemma")

    if (F[0] and nf >= 2) or (G[3] and ng >= 2):
        return verdict("ln_d", "Corollary 2")

    union = tuple(x | y for x, y in zip(F, G))
    if all(u >= t for u, t in zip(union, (1, 0, 1, 1))) or all(
        u >= t for u, t in zip(union, (1, 1, 0, 1))
    ):
        return verdict("ln_d", "Corollary 3")

    for f, g in _orbit(F, G):
        hit = CASE_TABLE.get((f, g))
        if hit:
            why, kind = hit
            return verdict(kind, why)

    if nf == 1 and ng == 1:
        return verdict("zero", "single tuple per symbol: counts constant")
    for unit, other in ((1, 2), (2, 1)):
        # with the unit count fixed at 1, a_n <= (#terms) * a_{n-1}: at most exponential
        if _is_unit(snre, unit) and all(t.count(other) <= 1 for t in snre.rules[other - 1]):
            return verdict("zero", "unit symbol: linear growth bound")

    h = check if check is not None else _numeric(e)
    if abs(h) < NUMERIC_BAND:
        return ClassificationVerdict("zero", None, "numeric fallback", (vf, vg), h)
    if abs(h - math.log(2)) < NUMERIC_BAND:
        return ClassificationVerdict("ln_d", 2, "numeric fallback", (vf, vg), h)
    return ClassificationVerdict("undetermined", None, None, (vf, vg), h)


def _as_basic_set(s: Union[Snre, BasicSet]) -> BasicSet:
    if isinstance(s, BasicSet):
        return s
    return make_basic_set(s.signature, ((i,) + t for i, r in enumerate(s.rules, start=1) for t in r))


def classify_general(s: Union[Snre, BasicSet], numeric_check: bool = False) -> ClassificationVerdict:
    """Sufficient conditions for any ``(d, k)``.

    After essentialization: symmetric type (all live symbols share one set of
    children tuples, at least two of them) gives ``ln d``; a dominant vector
    ``v^(l)`` with at least two terms containing the pure power
    ``(a^(l))^d`` gives ``ln d``.  A dominant vector whose largest self-degree
    ``h`` is below ``d`` only yields the bounds ``[ln h, ln d]``.
    """
    b = _as_basic_set(s)
    d = b.d
    e, removed = essentialize(b)
    snre = derive_snre(e)
    vectors = tuple(snre.indicator_vectors())
    check = estimate_entropy(e).value if numeric_check else None

    def verdict(kind, why=None, degree=None, bounds=None):
        return ClassificationVerdict(kind, degree, why, vectors, check, bounds)

    if e.is_empty():
        return verdict("zero", "empty basic set")
    alive = [i for i in e.signature.symbols if i not in removed]
    images = {snre.rules[i - 1] for i in alive}
    if len(images) == 1:
        n1 = len(snre.rules[alive[0] - 1])
        if n1 >= 2:
            if d < 2:
                return verdict("undetermined")
            return verdict("ln_d", "symmetric-type Proposition", d)
        return verdict("zero", "symmetric-type with a single tuple: counts constant")

    for l in alive:
        vl = vectors[l - 1]
        if not all(vl.dominates(vectors[j - 1]) for j in alive):
            continue
        n_l = vl.support_size
        self_degree = max(t.count(l) for t in snre.rules[l - 1])
        if n_l >= 2 and self_degree == d and d >= 2:
            return verdict("ln_d", "dominant-vector Proposition", d)
        if n_l >= 2 and self_degree >= 2:
            return verdict(
                "undetermined",
                "dominant-vector Proposition (lower bound)",
                bounds=(math.log(self_degree), math.log(d)),
            )
    return verdict("undetermined")
