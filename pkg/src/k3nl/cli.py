"""Command-line frontend.

Every numeric value is printed as an exact rational string, except the
floating diagnostics of ``picrank`` and ``theta --s-check`` (12 significant
digits).  Exit status: 0 on success, 1 on computation errors (or failed
checks under ``verify``), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bpsk3, bridge, lattice, mirror, modforms, picrank
from .checks import SUITES, run_suite

DEFAULTS = {
    "scalar_q_order": 30,
    "d1max": 10,
    "d2max": 2,
    "gmax": 4,
    "hmax": 4,
    "format": "text",
    "family": "quartic-pencil",
}
INT_KEYS = ("scalar_q_order", "d1max", "d2max", "gmax", "hmax")
FORMATS = ("text", "json", "csv")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    scalar_q_order: int = 30
    d1max: int = 10
    d2max: int = 2
    gmax: int = 4
    hmax: int = 4
    format: str = "text"
    family: str = "quartic-pencil"

    def __post_init__(self):
        for k in INT_KEYS:
            low = 0 if k in ("d2max", "gmax") else 1
            if getattr(self, k) < low:
                raise UsageError(f"{k} must be at least {low}")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.family not in modforms.PRESETS:
            raise UsageError(f"unknown family {self.family!r}")


def read_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        if key in INT_KEYS:
            try:
                val = int(val)
            except ValueError:
                raise UsageError(f"{path}:{n}: {key} must be an integer") from None
        out[key] = val
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if args.config:
        values.update(read_config(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if getattr(args, "json", False):
        values["format"] = "json"
    return RunConfig(**values)


# -- output ---------------------------------------------------------------------------

@dataclass
class Table:
    title: str
    header: list
    rows: list


@dataclass
class Payload:
    obj: dict
    tables: list = field(default_factory=list)
    lines: list = field(default_factory=list)  # extra text-mode lines


def _s(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def render(p: Payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(p.obj, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for i, t in enumerate(p.tables):
            if i:
                buf.write("\n")
            w.writerow(t.header)
            for row in t.rows:
                w.writerow([_s(v) for v in row])
        return buf.getvalue()
    out = []
    for t in p.tables:
        cells = [list(map(str, t.header))] + [[_s(v) for v in row] for row in t.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(t.header))]
        # text columns read left to right, numbers align on the right
        left = [bool(t.rows) and all(isinstance(row[i], str) for row in t.rows) for i in range(len(t.header))]
        if t.title:
            out.append(t.title)
        for r in cells:
            out.append("  ".join(c.ljust(w) if lj else c.rjust(w)
                                 for c, w, lj in zip(r, widths, left)).rstrip())
        out.append("")
    out += p.lines
    return "\n".join(out).rstrip("\n") + "\n"


def _series_pairs(s) -> list:
    return [[str(e), str(c)] for e, c in s.terms()]


# -- commands -------------------------------------------------------------------------

def cmd_theta(args, cfg: RunConfig) -> Payload:
    name = modforms.preset_for(args.l, args.l6_family)
    coeffs, form = modforms.fit_preset(name, cfg.scalar_q_order)
    scalar = modforms.scalarize(form)
    obj = {
        "level": args.l,
        "preset": name,
        "weight": str(form.weight),
        "trunc": str(form.trunc),
        "coefficients": [str(c) for c in coeffs],
        "components": {str(r): _series_pairs(c) for r, c in enumerate(form.components)},
        "scalar": _series_pairs(scalar),
    }
    rows = [(e, c) for e, c in scalar.terms()]
    tables = [
        Table(f"{name}: fitted coefficients", ["n", "c_n"], list(enumerate(coeffs))),
        Table(f"scalar form (known below q^{form.trunc})", ["exponent", "coefficient"], rows),
    ]
    lines = []
    if args.s_check:
        res = modforms.numeric_modularity_check(form, [1.5j])
        obj["s_residual"] = float(f"{res:.12g}")
        lines.append(f"S-transformation residual at tau=1.5i: {res:.12g}")
    return Payload(obj, tables, lines)


def cmd_nl(args, cfg: RunConfig) -> Payload:
    name = args.nl_family or cfg.family
    name = "quartic-pencil" if name == "quartic" else name
    _, form = modforms.fit_preset(name, cfg.scalar_q_order)
    need = Fraction(args.dmax * args.dmax, 2 * form.level) + 1
    if need >= form.trunc:
        raise ValueError(f"dmax={args.dmax} needs scalar_q_order above {need}")
    table = bridge.nl_table_from_form(form, args.dmax)
    rows = list(table.rows())
    obj = {
        "family": name,
        "level": table.l,
        "provenance": table.provenance,
        "rows": [{"h": h, "d": d, "disc": D, "coset": c, "value": str(v)} for h, d, D, c, v in rows],
    }
    return Payload(obj, [Table(f"NL numbers of {name}", ["h", "d", "disc", "coset", "value"], rows)])


def cmd_gw(args, cfg: RunConfig) -> Payload:
    dmax = args.dmax if args.dmax is not None else cfg.d1max
    N = mirror.fiber_gw(dmax, cfg.d2max)
    n = bpsk3.gv_invert({(0, d): N[d] for d in range(1, dmax + 1)}, 0, dmax)
    rows = [(d, N[d], n[(0, d)]) for d in range(1, dmax + 1)]
    obj = {"dmax": dmax, "d2max": cfg.d2max,
           "rows": [{"d": d, "gw": str(a), "bps": str(b)} for d, a, b in rows]}
    return Payload(obj, [Table("genus 0 fiber classes", ["d", "N_0d", "n_0d"], rows)])


def cmd_bps(args, cfg: RunConfig) -> Payload:
    gmax, hmax = cfg.gmax, cfg.hmax
    t = bpsk3.kkv_table(gmax, hmax)
    rows = [(h, *(t[(g, h)] for g in range(gmax + 1))) for h in range(hmax + 1)]
    obj = {"gmax": gmax, "hmax": hmax,
           "r": [{"g": g, "h": h, "value": t[(g, h)]} for h in range(hmax + 1) for g in range(gmax + 1)]}
    return Payload(obj, [Table("r_{g,h}", ["h"] + [f"g={g}" for g in range(gmax + 1)], rows)])


def cmd_predict(args, cfg: RunConfig) -> Payload:
    _, form = modforms.fit_preset("quartic-pencil", cfg.scalar_q_order)
    need = Fraction(args.dmax * args.dmax, 8) + 1
    if need >= form.trunc:
        raise ValueError(f"dmax={args.dmax} needs scalar_q_order above {need}")
    nl = bridge.nl_table_from_form(form, args.dmax)
    if args.multiplicity == "doubled":
        nl = nl.scaled(2)
    pred = bridge.predict(args.genus, nl, args.dmax)
    rows = [(d, v) for d, v in sorted(pred.items())]
    obj = {"genus": args.genus, "family": args.multiplicity,
           "rows": [{"d": d, "value": str(v)} for d, v in rows]}
    return Payload(obj, [Table(f"n_{{{args.genus},d}} ({args.multiplicity} quartic pencil)", ["d", "value"], rows)])


def cmd_lattice(args, cfg: RunConfig) -> Payload:
    try:
        gram = lattice.parse_gram(args.gram)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sols = lattice.solutions(args.l, args.h, args.d, gram)
    from math import gcd

    refined = {}
    for x, y in sols:
        m = gcd(x, y)
        refined[m] = refined.get(m, 0) + 1
    obj = {"l": args.l, "h": args.h, "d": args.d, "gram": [list(r) for r in gram],
           "disc": lattice.disc(args.l, args.h, args.d), "mu": len(sols),
           "solutions": [list(s) for s in sols],
           "refined": {str(m): c for m, c in sorted(refined.items())}}
    rows = [(x, y, gcd(x, y)) for x, y in sols]
    return Payload(obj, [Table("solutions x*v + y*e", ["x", "y", "divisibility"], rows)],
                   [f"mu = {len(sols)}"])


def cmd_picrank(args, cfg: RunConfig) -> Payload:
    if args.sweep is not None:
        levels = list(range(2, args.sweep + 1, 2))
    else:
        levels = [args.l]
    rows = []
    for l in levels:
        val = picrank.bruinier_value(l)
        rows.append((l, picrank.bruinier_rank(l), val))
    obj = {"rows": [{"l": l, "rank": r, "value": float(f"{v:.12g}")} for l, r, v in rows]}
    if args.sweep is None:
        return Payload(obj, [], [str(rows[0][1])])
    return Payload(obj, [Table("", ["l", "rank", "value"], rows)])


def cmd_verify(args, cfg: RunConfig) -> Payload:
    results = run_suite(args.suite)
    obj = {"suite": args.suite, "passed": all(r.ok for r in results),
           "checks": [{"number": r.number, "name": r.name, "ok": r.ok, "detail": r.detail} for r in results]}
    rows = [(r.number, "PASS" if r.ok else "FAIL", r.name, r.detail) for r in results]
    p = Payload(obj, [Table("", ["#", "status", "check", "detail"], rows)])
    p.failed = not obj["passed"]
    return p


# -- parser ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--json", action="store_true", help="same as --format json")
    common.add_argument("--trunc", dest="scalar_q_order", type=_positive, default=None,
                        help="q-order for modular forms (default 30)")

    p = argparse.ArgumentParser(prog="k3nl", description="Noether-Lefschetz numbers of K3 families.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("theta", parents=[common], help="fitted Noether-Lefschetz modular form")
    s.add_argument("--l", type=int, choices=(2, 4, 6, 8), required=True)
    s.add_argument("--family", dest="l6_family", type=int, choices=(1, 2), default=1, help="l=6 family")
    s.add_argument("--s-check", action="store_true", help="numeric S-transformation residual")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("nl", parents=[common], help="NL_{h,d} table")
    s.add_argument("nl_family", metavar="family", nargs="?", choices=["quartic"] + sorted(modforms.PRESETS),
                   help="preset (default: config family)")
    s.add_argument("--dmax", type=_positive, default=6)
    s.set_defaults(func=cmd_nl)

    s = sub.add_parser("gw", parents=[common], help="mirror genus 0 fiber invariants")
    s.add_argument("--dmax", type=_positive, default=None, help="fiber degree bound (config d1max)")
    s.add_argument("--d2max", type=_nonneg, default=None)
    s.set_defaults(func=cmd_gw)

    s = sub.add_parser("bps", parents=[common], help="reduced K3 BPS counts")
    s.add_argument("source", choices=["kkv"])
    s.add_argument("--gmax", type=_nonneg, default=None)
    s.add_argument("--hmax", type=_positive, default=None)
    s.set_defaults(func=cmd_bps)

    s = sub.add_parser("predict", parents=[common], help="BPS numbers of the quartic pencil total space")
    s.add_argument("--genus", type=_nonneg, required=True)
    s.add_argument("--dmax", type=_positive, default=6)
    s.add_argument("--family", dest="multiplicity", choices=["single", "doubled"], default="single")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("lattice", parents=[common], help="lattice vector counts")
    s.add_argument("what", choices=["mu"])
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--gram", required=True, help="a,b,c,d row-major")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("picrank", parents=[common], help="span of NL divisors")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--l", type=int)
    g.add_argument("--sweep", type=_positive, metavar="LMAX")
    s.set_defaults(func=cmd_picrank)

    s = sub.add_parser("verify", parents=[common], help="run the verification suite")
    s.add_argument("--suite", choices=sorted(SUITES), default="all")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    # gw/bps flags double as config keys
    for key in ("gmax", "hmax", "d2max"):
        if not hasattr(args, key):
            setattr(args, key, None)
    try:
        cfg = resolve_config(args)
        payload = args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(err)
        print(f"k3nl: error: {exc}", file=err)
        return 2
    except (ArithmeticError, ValueError, KeyError) as exc:
        print(f"k3nl: {type(exc).__name__}: {exc}", file=err)
        return 1
    out.write(render(payload, cfg.format))
    return 1 if getattr(payload, "failed", False) else 0


def main() -> None:
    sys.exit(run())
