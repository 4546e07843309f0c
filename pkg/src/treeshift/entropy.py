"""
Entropy and hidden-entropy estimates from block-count sequences.

Block counts of a strict tree-shift grow doubly exponentially, so entropy is
read off ``ln ln c_n``.  Two estimators are offered:

* ``ratio``      -- ``ln ln c_n / n``, the defining limit; converges like ``O(1/n)``.
* ``difference`` -- ``ln ln c_n - ln ln c_{n-1}``; when ``ln c_n ~ alpha * kappa**n``
  the error decays geometrically, so this is the default.

All functions take either a :class:`~treeshift.snre.LogCountSequence` (per-symbol
logs are summed) or a mapping ``n -> ln c_n``.
"""
from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .errors import ValidationError
from .snre import DEFAULT_PRECISION, LogCountSequence, log_context

__all__ = [
    "EntropyEstimate",
    "HiddenEntropyEstimate",
    "LimitDiagnostic",
    "entropy_estimate",
    "hidden_entropy_estimate",
    "limit_existence_diagnostic",
    "aho_sloane_probe",
    "entropy_table",
    "format_entropy_csv",
    "CONVERGENCE_TOL",
]

CONVERGENCE_TOL = 1e-6

SeqLike = Union[LogCountSequence, Mapping[int, object]]


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    estimator: str
    n_used: int
    diagnostic: str  # converged | slow | degenerate-zero | empty
    lag: int = 1
    trend: tuple[float, ...] = ()


@dataclass(frozen=True)
class HiddenEntropyEstimate:
    alpha: float
    kappa_used: float
    n_used: int
    trend: tuple[float, ...]


@dataclass(frozen=True)
class LimitDiagnostic:
    verdict: str  # positive | zero | inconclusive
    trend: tuple[float, ...]
    empty: bool = False


def _log_totals(seq: SeqLike):
    if isinstance(seq, LogCountSequence):
        return seq.ctx, seq.log_totals()
    ctx = log_context(DEFAULT_PRECISION)
    out = {}
    for n, v in dict(seq).items():
        out[int(n)] = ctx.ninf if v is None or v == -math.inf else ctx.mpf(v)
    return ctx, dict(sorted(out.items()))


def _lnln(ctx, x):
    return ctx.log(x) if x > 0 else None


def _ratio_at(ctx, L, n):
    v = _lnln(ctx, L[n]) if L[n] != ctx.ninf else None
    return None if v is None else v / n


def _difference_at(ctx, L, n, lag):
    if n - lag not in L or L[n] == ctx.ninf or L[n - lag] == ctx.ninf:
        return None
    hi, lo = _lnln(ctx, L[n]), _lnln(ctx, L[n - lag])
    if hi is None or lo is None:
        return None
    return (hi - lo) / lag


def entropy_estimate(seq: SeqLike, estimator: str = "difference", lag: int = 1) -> EntropyEstimate:
    """Estimate the entropy (in nats) at the largest available height.

    Heights with ``ln c_n <= 0`` are skipped.  If every ``ln c_n <= 1`` the
    result is 0 with diagnostic ``degenerate-zero``; if the counts vanish it
    is 0 with ``empty``.  ``lag`` > 1 compares ``n`` with ``n - lag`` and
    divides by ``lag``; use it for sequences that grow in periodic steps.
    """
    if estimator not in ("ratio", "difference"):
        raise ValidationError(f"unknown estimator {estimator!r}")
    if lag < 1:
        raise ValidationError("lag must be >= 1")
    ctx, L = _log_totals(seq)
    if len(L) < 3:
        raise ValidationError("need at least 3 heights to estimate entropy")
    ns = list(L)
    n_max = ns[-1]
    if L[n_max] == ctx.ninf:
        return EntropyEstimate(0.0, estimator, n_max, "empty", lag)
    if all(v == ctx.ninf or v <= 1 for v in L.values()):
        return EntropyEstimate(0.0, estimator, n_max, "degenerate-zero", lag)

    def at(n):
        if estimator == "ratio":
            return _ratio_at(ctx, L, n)
        return _difference_at(ctx, L, n, lag)

    history = [(n, at(n)) for n in ns]
    history = [(n, v) for n, v in history if v is not None]
    if not history:
        return EntropyEstimate(0.0, estimator, n_max, "degenerate-zero", lag)
    n_used, value = history[-1]
    trend = tuple(float(v) for _, v in history[-5:])
    # with lag > 1 consecutive heights may sit on different phases; compare n with n - lag
    prev = dict(history).get(n_used - (lag if estimator == "difference" else 1))
    if prev is not None and abs(value - prev) <= CONVERGENCE_TOL:
        diagnostic = "converged"
    else:
        diagnostic = "slow"
    return EntropyEstimate(float(value), estimator, n_used, diagnostic, lag, trend)


def hidden_entropy_estimate(seq: SeqLike, kappa: float) -> HiddenEntropyEstimate:
    """``ln c_n / kappa**n`` at the largest height, with the last five values as trend.

    A heuristic only: no convergence claim is attached.
    """
    if not kappa > 1:
        raise ValidationError("kappa must be > 1")
    ctx, L = _log_totals(seq)
    k = ctx.mpf(kappa)
    alphas = [(n, (0 if v == ctx.ninf else v / k**n)) for n, v in L.items()]
    n_used, alpha = alphas[-1]
    return HiddenEntropyEstimate(
        float(alpha), float(kappa), n_used, tuple(float(a) for _, a in alphas[-5:])
    )


def limit_existence_diagnostic(seq: SeqLike, d: int) -> LimitDiagnostic:
    """Is ``ln c_n / d**n`` bounded away from 0?  (If so, the entropy limit exists.)

    Looks at the ratios of consecutive values over the last five heights:
    ratios settling at 1 read as ``positive``, ratios all below 0.95
    (geometric decay) as ``zero``.
    """
    ctx, L = _log_totals(seq)
    if len(L) < 3:
        raise ValidationError("need at least 3 heights")
    ns = list(L)[-5:]
    if L[ns[-1]] == ctx.ninf:
        return LimitDiagnostic("zero", tuple(0.0 for _ in ns), empty=True)
    r = [(0 if L[n] == ctx.ninf else L[n] / ctx.mpf(d) ** n) for n in ns]
    trend = tuple(float(x) for x in r)
    if r[-1] <= 0:
        return LimitDiagnostic("zero", trend)
    ratios = [b / a for a, b in zip(r, r[1:]) if a > 0]
    if not ratios:
        return LimitDiagnostic("inconclusive", trend)
    if abs(ratios[-1] - 1) < 0.01:
        return LimitDiagnostic("positive", trend)
    if all(q < 0.95 for q in ratios):
        return LimitDiagnostic("zero", trend)
    return LimitDiagnostic("inconclusive", trend)


# --- quadratic recurrences with bounded perturbation -------------------------

# rule(n, ln_x, rng) -> ln|g_n|   (ctx.ninf for g_n = 0)
PerturbationRule = Callable[[int, object, random.Random], object]


def _rule(name: str, ctx) -> PerturbationRule:
    if name == "zero":
        return lambda n, lx, rng: ctx.ninf
    if name == "max":
        return lambda n, lx, rng: lx
    if name == "uniform":

        def uniform(n, lx, rng):
            u = rng.random()
            return lx + ctx.log(u) if u > 0 else ctx.ninf

        return uniform
    raise ValidationError(f"unknown perturbation rule {name!r} (zero, max, uniform)")


def aho_sloane_probe(
    x1: float,
    g: Union[str, PerturbationRule] = "uniform",
    n_max: int = 50,
    seed: Optional[int] = None,
    estimator: str = "difference",
    precision_bits: int = DEFAULT_PRECISION,
) -> EntropyEstimate:
    """Iterate ``x_{n+1} = x_n**2 + |g_n|`` in log space and estimate its entropy.

    ``g`` is ``"zero"``, ``"max"`` (``|g_n| = x_n``), ``"uniform"``
    (``|g_n|`` uniform on ``[0, x_n]``, seeded) or a callable returning
    ``ln|g_n|``.  Every step checks ``|g_n| <= x_n``.
    """
    if x1 < 1:
        raise ValidationError("x1 must be >= 1")
    if n_max < 3:
        raise ValidationError("n_max must be >= 3")
    ctx = log_context(precision_bits)
    rule = _rule(g, ctx) if isinstance(g, str) else g
    rng = random.Random(seed)
    lx = ctx.log(x1)
    logs = {1: lx}
    for n in range(1, n_max):
        lg = rule(n, lx, rng)
        if lg != ctx.ninf and lg > lx:
            raise ValidationError(f"perturbation rule violated |g_n| <= x_n at n={n}")
        step = 2 * lx
        if lg != ctx.ninf:
            step += ctx.log1p(ctx.exp(lg - 2 * lx))
        lx = step
        logs[n + 1] = lx
    return entropy_estimate(logs, estimator)


# --- tabular output -------------------------------------------------------------

CSV_COLUMNS = ("n", "ln_c_n", "ratio_estimate", "difference_estimate", "alpha_hat")


def entropy_table(seq: SeqLike, kappa: Optional[float] = None, scale: float = 1.0) -> list[dict]:
    """Per-height rows; undefined entries are None.  ``scale`` rescales displayed values only."""
    ctx, L = _log_totals(seq)
    rows = []
    k = ctx.mpf(kappa) if kappa and kappa > 1 else None
    for n, v in L.items():
        defined = v != ctx.ninf
        ratio = _ratio_at(ctx, L, n)
        diff = _difference_at(ctx, L, n, 1)
        rows.append(
            {
                "n": n,
                "ln_c_n": float(v) * scale if defined else None,
                "ratio_estimate": float(ratio) * scale if ratio is not None else None,
                "difference_estimate": float(diff) * scale if diff is not None else None,
                "alpha_hat": float(v / k**n) * scale if (k is not None and defined) else None,
            }
        )
    return rows


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return "%.17g" % x


def format_entropy_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in CSV_COLUMNS])
    return buf.getvalue()
