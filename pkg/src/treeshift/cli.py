"""
``tsft``: command-line access to parsing, counting, entropy, classification,
realization, boundary checks and the exhaustive binary sweep.

Exit status is 0 on success, 1 on validation or usage errors and 2 when a
computation budget (oracle visits, exact-integer size) is exceeded.  Output is
deterministic: JSON keys are sorted and CSV floats carry 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

from . import __version__
from .boundary import BoundaryKind, boundary_log_counts, check_all, count_boundary
from .classify import classify_2x2, classify_general
from .core import Signature, basic_set_from_mask, essentialize, format_basic_set, parse_basic_set
from .counting import count_blocks, estimate_entropy
from .entropy import (
    aho_sloane_probe,
    entropy_estimate,
    entropy_table,
    format_entropy_csv,
    hidden_entropy_estimate,
)
from .errors import BudgetExceeded, TreeShiftError, ValidationError
from .oracle import OracleQuery, oracle_boundary_count
from .realize import build_realization, verify_realization
from .snre import DEFAULT_PRECISION, derive_snre, initial_counts

__all__ = ["main", "build_parser"]

INDEXING_NOTE = (
    "indexing: a^(i)_n = number of height-n blocks rooted at symbol i, n >= 2; "
    "a^(i)_2 = number of allowed 2-blocks rooted at i"
)
REALIZE_NOTE = (
    "delay chains have q_j - 1 intermediate symbols, so k = 2 + sum(q_j - 1); "
    "initial counts a^(0)_2 = 2, all other symbols 1"
)
SWEEP_COLUMNS = ("basicset_bitmask", "v_F", "v_G", "verdict", "justification", "h_numeric")

DEFAULT_N = {
    "count": 10,
    "entropy": 40,
    "realize": 40,
    "sweep": 40,
    "probe": 50,
}


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 like any other validation failure
    def error(self, message):
        raise UsageError(message)


# --- output helpers ---------------------------------------------------------------


def _num(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    f = float(x)
    if math.isinf(f):
        return "-inf" if f < 0 else "inf"
    return f


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _num(obj)


def _dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, str)):
        return str(x)
    f = float(x)
    if math.isinf(f):
        return "-inf" if f < 0 else "inf"
    return "%.17g" % f


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _text_table(columns, rows) -> str:
    lines = ["  ".join(columns)]
    lines += ["  ".join(_fmt(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def _estimate_dict(est, scale=1.0) -> dict:
    return {
        "value": est.value * scale,
        "estimator": est.estimator,
        "n_used": est.n_used,
        "diagnostic": est.diagnostic,
        "lag": est.lag,
        "trend": [t * scale for t in est.trend],
    }


def _vec(v) -> str:
    return "".join(str(x) for x in v.entries)


# --- commands -----------------------------------------------------------------------


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    return parse_basic_set(text)


def _n(args) -> int:
    n = args.n if args.n is not None else DEFAULT_N.get(args.command, 10)
    if n < 2:
        raise ValidationError("--n must be >= 2")
    return n


def _boundary(args) -> Optional[BoundaryKind]:
    if args.boundary in (None, "none"):
        return None
    return BoundaryKind.parse(args.boundary)


def cmd_validate(args) -> str:
    b = _load(args.file)
    e, removed = essentialize(b)
    doc = {
        "d": b.d,
        "k": b.k,
        "blocks": len(b),
        "essential": not removed,
        "removed_symbols": removed,
        "essential_blocks": len(e),
    }
    if args.out == "json":
        return _dump_json(doc)
    status = "essential" if not removed else f"dead symbols {removed}"
    return f"ok: d={b.d} k={b.k} blocks={len(b)} ({status})\n"


def cmd_derive(args) -> str:
    b = _load(args.file)
    if not args.no_essentialize:
        b, _ = essentialize(b)
    s = derive_snre(b)
    init = initial_counts(b)
    if args.out == "json":
        doc = s.to_json_dict()
        doc["indexing"] = INDEXING_NOTE
        doc["initial_counts"] = list(init)
        return _dump_json(doc)
    lines = [f"# {INDEXING_NOTE}", s.to_text().rstrip("\n")]
    lines.append("# initial: " + ", ".join(f"a^({i})_2 = {c}" for i, c in enumerate(init, start=1)))
    return "\n".join(lines) + "\n"


def _count_rows(args):
    b = _load(args.file)
    n_max = _n(args)
    essential = not args.no_essentialize
    kind = _boundary(args)
    log = args.backend == "log"
    rows = []
    if kind is None:
        seq = count_blocks(b, n_max, args.backend, essential, args.precision)
        for n in seq.heights():
            per = seq[n]
            total = seq.log_total(n) if log else sum(per)
            rows.append((n, per, total))
        return b, rows
    if essential:
        b, _ = essentialize(b)
    for n in range(2, n_max + 1):
        if args.backend == "oracle":
            r = oracle_boundary_count(OracleQuery(b, n, boundary=kind))
            rows.append((n, r.per_symbol, r.total))
        else:
            r = count_boundary(b, kind, n, args.backend, essential=False, precision_bits=args.precision)
            rows.append((n, r.per_symbol, r.total))
    return b, rows


def cmd_count(args) -> str:
    b, rows = _count_rows(args)
    prefix = "ln_" if args.backend == "log" else ""
    columns = ("n",) + tuple(f"{prefix}root_{i}" for i in b.signature.symbols) + (f"{prefix}total",)
    table = []
    for n, per, total in rows:
        row = {"n": n, f"{prefix}total": total}
        row.update({f"{prefix}root_{i}": c for i, c in enumerate(per, start=1)})
        table.append(row)
    if args.out == "csv":
        return _csv(columns, table)
    if args.out == "text":
        return _text_table(columns, table)
    return _dump_json(
        {
            "backend": args.backend,
            "boundary": args.boundary or "none",
            "essentialized": not args.no_essentialize,
            "rows": [
                {"n": n, "per_symbol": list(per), "total": total} for n, per, total in rows
            ],
        }
    )


def cmd_entropy(args) -> str:
    b = _load(args.file)
    n_max = _n(args)
    if n_max < 4:
        raise ValidationError("entropy needs --n >= 4")
    kind = _boundary(args)
    essential = not args.no_essentialize
    scale = 1 / math.log(2) if args.log2 else 1.0
    if kind is None:
        seq = count_blocks(b, n_max, "log", essential, args.precision)
    else:
        seq = boundary_log_counts(b, kind, n_max, essential, args.precision)
    est = entropy_estimate(seq, args.estimator)
    kappa = b.d if b.d >= 2 else None
    if args.out == "csv":
        return format_entropy_csv(entropy_table(seq, kappa, scale))
    doc = {
        "entropy": _estimate_dict(est, scale),
        "units": "bits" if args.log2 else "nats",
        "boundary": args.boundary or "none",
    }
    if kappa:
        hidden = hidden_entropy_estimate(seq, kappa)
        doc["hidden_entropy"] = {"alpha": hidden.alpha * scale, "kappa": hidden.kappa_used,
                                 "n_used": hidden.n_used}
    if args.out == "json":
        return _dump_json(doc)
    return f"h = {_fmt(est.value * scale)} {doc['units']} ({est.estimator}, n={est.n_used}, {est.diagnostic})\n"


def cmd_classify(args) -> str:
    b = _load(args.file)
    if (b.d, b.k) == (2, 2):
        v = classify_2x2(b, numeric_check=True)
    else:
        v = classify_general(b, numeric_check=True)
    doc = v.to_json_dict()
    if args.out == "json":
        return _dump_json(doc)
    return f"{v.label}: {v.justification or 'no rule applies'} (numeric {_fmt(v.numeric_check)})\n"


def cmd_realize(args) -> str:
    if not args.poly:
        raise ValidationError("realize needs --poly")
    r = build_realization(args.poly)
    rep = verify_realization(r, _n(args))
    scale = 1 / math.log(2) if args.log2 else 1.0
    names = r.names()
    comments = [
        f"realizes ln rho for {r.polynomial}",
        REALIZE_NOTE,
        "legend: " + ", ".join(f"{i}={names[i]}" for i in sorted(names)),
    ]
    basic = format_basic_set(r.basic_set, comments)
    report = {
        "rho": r.rho,
        "ln_rho": rep.ln_rho * scale,
        "entropy_estimate": _estimate_dict(rep.entropy_estimate, scale),
        "abs_error": rep.abs_error * scale,
        "d": r.d,
        "k": r.k,
        "forcing": r.forcing,
        "legend": r.legend,
        "note": REALIZE_NOTE,
    }
    if args.out == "json":
        report["basic_set"] = basic
        report["snre"] = r.snre.to_text(names)
        return _dump_json(report)
    return (
        basic
        + f"# rho = {_fmt(r.rho)}  ln rho = {_fmt(rep.ln_rho * scale)}"
        + f"  estimate = {_fmt(rep.entropy_estimate.value * scale)}"
        + f"  abs_error = {_fmt(rep.abs_error * scale)}\n"
        + "# legend-json: " + r.legend_json() + "\n"
    )


def cmd_boundary_check(args) -> str:
    b = _load(args.file)
    checks = check_all(b)
    doc = {kind: c.to_json_dict() for kind, c in checks.items()}
    if args.out == "json":
        return _dump_json(doc)
    return "".join(
        f"{kind}: {c.relation}" + (f" ({c.note})" if c.note else "") + "\n"
        for kind, c in checks.items()
    )


def sweep_rows(n: int = 40, estimator: str = "difference", essential: bool = True) -> list[dict]:
    """One row per mask of the 256 binary basic sets over two symbols."""
    sig = Signature(2, 2)
    rows = []
    for mask in range(256):
        b = basic_set_from_mask(sig, mask)
        v = classify_2x2(b, numeric_check=False)
        vf, vg = v.witnesses
        h = estimate_entropy(b, n, estimator, essential).value
        rows.append(
            {
                "basicset_bitmask": mask,
                "v_F": _vec(vf),
                "v_G": _vec(vg),
                "verdict": v.label,
                "justification": v.justification or "",
                "h_numeric": h,
            }
        )
    return rows


def cmd_sweep(args) -> str:
    if (args.d, args.k) != (2, 2):
        raise ValidationError("sweep supports --d 2 --k 2 only")
    n = _n(args)
    if n < 4:
        raise ValidationError("sweep needs --n >= 4")
    rows = sweep_rows(n, args.estimator, not args.no_essentialize)
    if args.log2:
        for r in rows:
            r["h_numeric"] /= math.log(2)
    if args.out == "json":
        return _dump_json(rows)
    if args.out == "text":
        return _text_table(SWEEP_COLUMNS, rows)
    return _csv(SWEEP_COLUMNS, rows)


def cmd_probe(args) -> str:
    n = _n(args)
    est = aho_sloane_probe(args.x1, args.rule, n, args.seed, args.estimator, args.precision)
    scale = 1 / math.log(2) if args.log2 else 1.0
    doc = {"seed": args.seed, "rule": args.rule, "x1": args.x1, "entropy": _estimate_dict(est, scale)}
    if args.out == "json":
        return _dump_json(doc)
    return f"h = {_fmt(est.value * scale)} ({est.diagnostic}, n={est.n_used}, seed={args.seed})\n"


COMMANDS = {
    "validate": cmd_validate,
    "derive": cmd_derive,
    "count": cmd_count,
    "entropy": cmd_entropy,
    "classify": cmd_classify,
    "realize": cmd_realize,
    "boundary-check": cmd_boundary_check,
    "sweep": cmd_sweep,
    "probe": cmd_probe,
}

DEFAULT_OUT = {"validate": "text", "derive": "text", "count": "json", "realize": "text", "sweep": "csv"}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="maximal height")
    common.add_argument("--backend", choices=("exact", "log", "oracle"), default="exact")
    common.add_argument("--estimator", choices=("ratio", "difference"), default="difference")
    common.add_argument("--boundary", default="none",
                        help="none | periodic | neumann | dirichlet:<i>")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help="mantissa bits for the log backend")
    common.add_argument("--out", choices=("json", "csv", "text"), default=None)
    common.add_argument("--no-essentialize", action="store_true",
                        help="count locally admissible blocks instead of extendable ones")
    common.add_argument("--seed", type=int, default=0, help="seed for the probe command")
    common.add_argument("--log2", action="store_true", help="display entropies in bits")

    parser = _Parser(prog="tsft", description="Markov tree-shifts of finite type")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("validate", "derive", "count", "entropy", "classify", "boundary-check"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file", help="basic-set file")
    p = sub.add_parser("realize", parents=[common])
    p.add_argument("--poly", required=True, help='e.g. "x^2 - x - 1" or "2; 1:1; 0:1"')
    p = sub.add_parser("sweep", parents=[common])
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p = sub.add_parser("probe", parents=[common])
    p.add_argument("--x1", type=float, default=2.0)
    p.add_argument("--rule", choices=("uniform", "zero", "max"), default="uniform")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 53:
            raise ValidationError("--precision must be >= 53")
        if args.seed < 0 or args.seed >= 1 << 64:
            raise ValidationError("--seed must be an unsigned 64-bit integer")
        if args.out is None:
            args.out = DEFAULT_OUT.get(args.command, "json")
        out = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"tsft: budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (TreeShiftError, ValueError) as exc:
        print(f"tsft: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
