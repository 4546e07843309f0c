"""
Tree-shifts with prescribed entropy ``ln rho``.

Given ``F(x) = x^p - k_1 x^{p_1} - ... - k_l x^{p_l}`` with positive integer
``k_j``, let ``q_j = p - p_j`` and let ``rho`` be the root ``> 1`` of
``1 = sum_j k_j x^{-q_j}``.  The construction uses

* ``a^(0)``, whose count at height ``n`` is twice the product of
  ``(count of the term-j source at n-1)^{k_j}``;
* for each term with ``q_j >= 2`` a delay chain ``a^(j,0) .. a^(j,q_j-2)``
  feeding ``a^(0)`` back ``q_j - 1`` heights later (a term with ``q_j = 1`` uses
  ``a^(0)`` itself as its source);
* a filler symbol ``b`` with the single block ``(b, b, ..., b)`` so ``b_n = 1``.

Then ``x_n = ln a^(0)_n`` obeys ``x_n = ln 2 + sum_j k_j x_{n - q_j}`` and the
entropy is ``ln rho`` with ``d = sum_j k_j``.  When the leading monomial has a
single distinct ordering (one term only), the factor 2 cannot be written as two
orderings; the all-``b`` tuple is added instead, giving
``x_n = ln(exp(sum_j k_j x_{n-q_j}) + 1)`` with the same growth rate.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import permutations

from .core import BasicSet, Signature
from .counting import log_block_counts
from .entropy import EntropyEstimate, entropy_estimate
from .errors import ParseError, ValidationError
from .snre import Snre, derive_snre, snre_to_basic_set

__all__ = [
    "RealizationPolynomial",
    "Realization",
    "RealizationReport",
    "parse_polynomial",
    "max_root",
    "build_realization",
    "verify_realization",
    "multinacci",
]


@dataclass(frozen=True)
class RealizationPolynomial:
    """``x^p - sum k_i x^{p_i}``; ``terms`` holds ``(p_i, k_i)`` with ``p_i`` decreasing."""

    p: int
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.p < 1:
            raise ValidationError("leading exponent must be >= 1")
        merged: dict[int, int] = {}
        for e, c in self.terms:
            if not 0 <= e < self.p:
                raise ValidationError(f"exponent {e} must lie in 0..{self.p - 1}")
            if c < 0:
                raise ValidationError(f"coefficient {c} on x^{e} must be >= 0")
            merged[e] = merged.get(e, 0) + c
        terms = tuple(sorted(((e, c) for e, c in merged.items() if c), reverse=True))
        object.__setattr__(self, "terms", terms)

    @property
    def delays(self) -> tuple[int, ...]:
        """``q_i = p - p_i``, strictly increasing."""
        return tuple(self.p - e for e, _ in self.terms)

    @property
    def coefficients(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.terms)

    def __str__(self):
        out = f"x^{self.p}" if self.p > 1 else "x"
        for e, c in self.terms:
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if not mono:
                out += f" - {c}"
            else:
                out += f" - {c}*{mono}" if c != 1 else f" - {mono}"
        return out

    def coefficient_vector(self) -> list[int]:
        """Dense coefficients, highest degree first (``numpy.roots`` order)."""
        v = [0] * (self.p + 1)
        v[0] = 1
        for e, c in self.terms:
            v[self.p - e] -= c
        return v


_TERM = re.compile(r"([+-])\s*(\d*)\s*\*?\s*(x(?:\s*\^\s*(\d+))?)?\s*")


def parse_polynomial(text: str) -> RealizationPolynomial:
    """Read ``x^p - k1*x^p1 - ...`` or the compact form ``p; p1:k1; p2:k2``."""
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial")
    if ";" in text or ":" in text or re.fullmatch(r"\d+", text):
        parts = [s.strip() for s in text.split(";") if s.strip()]
        try:
            p = int(parts[0])
            terms = []
            for part in parts[1:]:
                e, _, c = part.partition(":")
                terms.append((int(e), int(c)))
        except ValueError:
            raise ParseError(f"bad compact polynomial {text!r}") from None
        return RealizationPolynomial(p, tuple(terms))

    if text[0] not in "+-":
        text = "+" + text
    pos = 0
    found = []
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ParseError(f"cannot parse polynomial near {text[pos:]!r}")
        sign, coeff, xpart, exp = m.groups()
        c = int(coeff) if coeff else 1
        e = (int(exp) if exp else 1) if xpart else 0
        found.append((sign, c, e))
        pos = m.end()
    sign, c, p = found[0]
    if sign != "+" or c != 1 or p < 1:
        raise ParseError("polynomial must start with a monic term x^p")
    terms = []
    for sign, c, e in found[1:]:
        if sign != "-":
            raise ParseError(f"term of degree {e} must be subtracted")
        if e >= p:
            raise ParseError(f"term of degree {e} is not below the leading degree {p}")
        terms.append((e, c))
    return RealizationPolynomial(p, tuple(terms))


def _as_poly(poly) -> RealizationPolynomial:
    return poly if isinstance(poly, RealizationPolynomial) else parse_polynomial(poly)


def max_root(poly, tol: float = 1e-14) -> float:
    """The root ``> 1`` of ``1 = sum k_j x^{-q_j}``, by bisection on ``[1, 1 + sum k_j]``.

    Returns 1.0 when ``sum k_j <= 1`` (no root above 1).
    """
    poly = _as_poly(poly)
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if not poly.terms:
        raise ValidationError("polynomial needs at least one subtracted term")
    pairs = list(zip(poly.delays, poly.coefficients))
    total = sum(poly.coefficients)
    if total <= 1:
        return 1.0
    if len(pairs) == 1 and pairs[0][0] == 1:
        return float(total)

    def excess(x):
        return sum(c * x ** (-q) for q, c in pairs) - 1

    lo, hi = 1.0, 1.0 + total
    for _ in range(400):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def multinacci(order: int) -> RealizationPolynomial:
    """``x^m - x^{m-1} - ... - 1``; its root above 1 is the multinacci number of that order."""
    if order < 2:
        raise ValidationError("multinacci order must be >= 2")
    return RealizationPolynomial(order, tuple((e, 1) for e in range(order)))


@dataclass(frozen=True)
class Realization:
    polynomial: RealizationPolynomial
    snre: Snre
    basic_set: BasicSet
    legend: dict  # symbol name -> integer symbol
    rho: float
    forcing: str  # "double": coefficient 2 via two orderings; "unit": all-b tuple added

    @property
    def d(self) -> int:
        return self.basic_set.d

    @property
    def k(self) -> int:
        return self.basic_set.k

    @property
    def step(self) -> int:
        """gcd of the delays; the counts grow in steps of this many heights."""
        return reduce(math.gcd, self.polynomial.delays)

    def names(self) -> dict:
        return {v: n for n, v in self.legend.items()}

    def legend_json(self) -> str:
        return json.dumps(self.legend, sort_keys=True)


def build_realization(poly) -> Realization:
    """Construct the basic set realizing ``ln rho`` for ``poly``."""
    poly = _as_poly(poly)
    if not poly.terms:
        raise ValidationError("polynomial needs at least one subtracted term")
    d = sum(poly.coefficients)
    if d < 2:
        raise ValidationError("sum of coefficients must be >= 2 (d = 1 is not a tree)")

    legend = {"a^(0)": 1}
    chains = []
    for j, q in enumerate(poly.delays, start=1):
        names = [f"a^({j},{r})" for r in range(q - 1)]
        for name in names:
            legend[name] = len(legend) + 1
        chains.append(names)
    legend["b"] = len(legend) + 1
    k = len(legend)
    a0, b = legend["a^(0)"], legend["b"]

    rules: dict[int, list[tuple[int, ...]]] = {s: [] for s in range(1, k + 1)}
    factors = []
    for names, coeff in zip(chains, poly.coefficients):
        source = legend[names[0]] if names else a0
        factors.extend([source] * coeff)
        for r, name in enumerate(names):
            nxt = legend[names[r + 1]] if r + 1 < len(names) else a0
            rules[legend[name]].append((nxt,) + (b,) * (d - 1))
    orders = sorted(set(permutations(sorted(factors))))
    if len(orders) >= 2:
        rules[a0].extend(orders[:2])
        forcing = "double"
    else:
        rules[a0].extend([orders[0], (b,) * d])
        forcing = "unit"
    rules[b].append((b,) * d)

    signature = Signature(d, k)
    monomials = {
        s: {tuple(sorted(t)): sum(1 for u in ts if sorted(u) == sorted(t)) for t in ts}
        for s, ts in rules.items()
    }
    basic = snre_to_basic_set(monomials, signature)
    return Realization(poly, derive_snre(basic), basic, legend, max_root(poly), forcing)


@dataclass(frozen=True)
class RealizationReport:
    entropy_estimate: EntropyEstimate
    ln_rho: float
    abs_error: float


def verify_realization(r: Realization, n_max: int = 40) -> RealizationReport:
    """Compare the difference estimator on the realized counts with ``ln rho``.

    When the delays share a factor ``g`` the counts grow in steps of ``g``
    heights, so heights ``n`` and ``n - g`` are compared.
    """
    if n_max < 10 + max(r.polynomial.delays):
        raise ValidationError(f"n_max must be >= {10 + max(r.polynomial.delays)}")
    est = entropy_estimate(log_block_counts(r.basic_set, n_max), "difference", lag=r.step)
    ln_rho = math.log(r.rho)
    return RealizationReport(est, ln_rho, abs(est.value - ln_rho))
