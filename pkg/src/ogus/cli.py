"""Command line front end: ``ogus realize|hom|decompose|check``.

Motive configs are flat ``key = value`` files::

    # [Z -> G_m], 1 |-> 2
    field_d = 1
    r = 1
    s = 1
    u[1][1] = 2/1

``u[i][j]`` is 1-based (row i of the torus, column j of the lattice).  An
optional ``twist = k`` realizes T_Og(M)(k) instead of T_Og(M).
"""
from __future__ import annotations

import argparse
import hashlib
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import isprime

from . import linalg
from .errors import ConfigError, NonPositiveEntry, NotAGoodPlace, OgusError
from .isocrystal import decompose, poly_str, restrict, weil_weight
from .motive import (KummerMotive, check_fullness, choose_places, delta_section, good_places, t_Og)
from .numfield import Place, QuadField, classify_place, embed
from .ogcat import (OgObject, check_object, gr, is_e_effective, is_l_effective, is_level_le_1,
                    twist_object)
from .padic import PadicContext
from .semilinear import SemilinearOperator, commutes, linearize

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2

_KEY_ALIASES = {"lattice_rank": "r", "torus_rank": "s"}
_U_KEY = re.compile(r"^u\[(\d+)\]\[(\d+)\]$")


@dataclass
class MotiveConfig:
    field_d: int | None
    r: int
    s: int
    u_entries: dict  # (i, j) 0-based -> Fraction
    twist: int = 0
    text: str = ""

    def motive(self, default_d: int = 1) -> KummerMotive:
        field = QuadField(self.field_d if self.field_d is not None else default_d)
        u = [[self.u_entries[(i, j)] for j in range(self.r)] for i in range(self.s)]
        return KummerMotive(self.r, self.s, tuple(tuple(row) for row in u), field)


def _parse_int(value: str, key: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}", line) from None


def parse_config(text: str) -> MotiveConfig:
    values: dict = {}
    entries: dict = {}
    entry_lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (t.strip() for t in line.split("=", 1))
        key = _KEY_ALIASES.get(key, key)
        m = _U_KEY.match(key)
        if m:
            i, j = int(m.group(1)), int(m.group(2))
            if i < 1 or j < 1:
                raise ConfigError("u indices are 1-based", lineno)
            try:
                q = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"cannot read {value!r} as num/den", lineno) from None
            if q <= 0:
                raise NonPositiveEntry(f"line {lineno}: u[{i}][{j}] = {value} is not positive")
            if (i - 1, j - 1) in entries:
                raise ConfigError(f"u[{i}][{j}] given twice", lineno)
            entries[(i - 1, j - 1)] = q
            entry_lines[(i - 1, j - 1)] = lineno
        elif key in ("field_d", "r", "s", "twist"):
            if key in values:
                raise ConfigError(f"{key} given twice", lineno)
            values[key] = (_parse_int(value, key, lineno), lineno)
        else:
            raise ConfigError(f"unknown key {key!r}", lineno)
    for key in ("r", "s"):
        if key not in values:
            raise ConfigError(f"missing key {key!r}")
    r, s = values["r"][0], values["s"][0]
    if r < 0 or s < 0:
        raise ConfigError("ranks must be nonnegative")
    for (i, j), lineno in entry_lines.items():
        if i >= s or j >= r:
            raise ConfigError(f"u[{i + 1}][{j + 1}] is outside the {s} x {r} array", lineno)
    missing = [(i, j) for i in range(s) for j in range(r) if (i, j) not in entries]
    if missing:
        i, j = missing[0]
        raise ConfigError(f"missing entry u[{i + 1}][{j + 1}]")
    field_d = values["field_d"][0] if "field_d" in values else None
    if field_d is not None:
        try:
            QuadField(field_d)
        except ValueError as exc:
            raise ConfigError(str(exc), values["field_d"][1]) from None
    twist = values["twist"][0] if "twist" in values else 0
    return MotiveConfig(field_d, r, s, entries, twist, text)


def parse_matrix(text: str) -> list[list[Fraction]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([Fraction(t) for t in line.replace(",", " ").split()])
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot read matrix row {raw.strip()!r}", lineno) from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ConfigError("matrix must be square and nonempty")
    return rows


def parse_charpoly(text: str) -> list[Fraction]:
    """Comma-separated coefficients, leading coefficient first."""
    try:
        coeffs = [Fraction(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot read charpoly {text!r}") from None
    return list(reversed(coeffs))


def resolve_places(choice: str, motives: Sequence[KummerMotive]) -> list[Place]:
    field = motives[0].field
    if choice.startswith("auto:"):
        bound = _parse_int(choice[5:], "--places bound", None)
        sets = [set(good_places(M, field, bound)) for M in motives]
        return choose_places(set.intersection(*sets), field)
    if choice.startswith("list:"):
        out = []
        for tok in choice[5:].split(","):
            p = _parse_int(tok.strip(), "--places entry", None)
            if not isprime(p):
                raise ConfigError(f"{p} is not prime")
            v = classify_place(field, p)
            for M in motives:
                if p in M.bad_primes():
                    raise NotAGoodPlace(f"{p} is not a good place for {M}")
            out.append(v)
        return out
    raise ConfigError(f"--places must be auto:<bound> or list:p1,p2,..., got {choice!r}")


# -- report -----------------------------------------------------------------------

class Report:
    def __init__(self, command: str, digest: str):
        self.command = command
        self.digest = digest
        self.places: list = []
        self.precision: int | None = None
        self.bound: int | None = None
        self.status = "OK"
        self.lines: list[str] = []

    def add(self, line: str = ""):
        self.lines.append(line)

    def render(self) -> str:
        head = [f"command: {self.command}", f"inputs: sha256:{self.digest}",
                "places: " + (" ".join(str(v) for v in self.places) if self.places else "-"),
                "precision: " + (str(self.precision) if self.precision is not None else "-")]
        if self.bound is not None:
            head.append(f"bound: {self.bound}")
        head.append(f"status: {self.status}")
        return "\n".join(head + ["---"] + self.lines) + "\n"


def _digest(parts: Sequence[str]) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def _fmt_matrix(X) -> list[str]:
    return ["  [" + ", ".join(str(x) for x in row) + "]" for row in X]


def _fmt_padic(x) -> str:
    return f"{x.digits()} (+O({x.ctx.p}^{x.prec}))"


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


# -- commands ---------------------------------------------------------------------

def _realization(cfg: MotiveConfig, args) -> tuple[KummerMotive, OgObject, list[Place]]:
    M = cfg.motive(args.field_d)
    places = resolve_places(args.places, [M])
    X = t_Og(M, places, args.prec)
    if cfg.twist:
        X = twist_object(X, cfg.twist)
    return M, X, places


def cmd_realize(args, rep: Report):
    cfg = parse_config(_read(args.config))
    M, X, places = _realization(cfg, args)
    rep.places, rep.precision = places, args.prec
    rep.add(f"motive: {M}")
    if cfg.twist:
        rep.add(f"twist: {cfg.twist}")
    rep.add("weight steps: " + ", ".join(f"W_{w} dim {d}" for w, d in X.weight_steps))
    rep.add("graded weights: " + ", ".join(str(w) for w in X.weights()))
    for v in places:
        F = X.frobenii[v]
        rep.add(f"place {v}: F = p^{F.shift} * A * sigma, A (base-{v.p} digits, least significant first):")
        for i, row in enumerate(F.integral):
            for j, x in enumerate(row):
                rep.add(f"  A[{i + 1}][{j + 1}] = {_fmt_padic(x)}")
        lam = delta_section(M, v, args.prec)
        for i, row in enumerate(lam.Lambda):
            for j, lv in enumerate(row):
                rep.add(f"  Lambda[{i + 1}][{j + 1}] = {_fmt_padic(lv.element)}")
    chk = check_object(X)
    rep.add("purity:")
    for v, w, found in chk.purity:
        rep.add(f"  {v} gr_{w}: weights {found if found is not None else 'undetermined'}")
    for msg in chk.violations:
        rep.add(f"violation: {msg}")
    if not chk.ok:
        rep.status = "VIOLATION"


def cmd_hom(args, rep: Report):
    left = parse_config(_read(args.left)).motive(args.field_d)
    right = parse_config(_read(args.right)).motive(args.field_d)
    if left.field != right.field:
        raise ConfigError("the two motives are over different fields")
    places = resolve_places(args.places, [left, right])
    rep.places, rep.precision, rep.bound = places, args.prec, args.bound
    res = check_fullness(left, right, places, args.prec, args.bound)
    sol = res.analytic
    rep.add(f"source: {left}")
    rep.add(f"target: {right}")
    rep.add(f"exact dimension: {res.exact_dimension}")
    for k, phi in enumerate(res.exact_basis, 1):
        rep.add(f"exact basis {k}: E = {[[str(x) for x in r] for r in phi.E]}, D = {[[str(x) for x in r] for r in phi.D]}")
        rep.add(f"realized {k}:")
        for line in _fmt_matrix(res.realized[k - 1]):
            rep.add(line)
    rep.add(f"analytic dimension: {sol.analytic_dimension}")
    rep.add("per-place dimensions: " + ", ".join(f"{v}: {d}" for v, d in sol.place_dimensions.items()))
    for k, X in enumerate(sol.basis, 1):
        rep.add(f"analytic basis {k}:")
        for line in _fmt_matrix(X):
            rep.add(line)
    rep.add(f"faithful: {res.faithful}")
    rep.add(f"full: {res.full}")
    rep.add(f"strict: {sol.strict}")
    if left.dim == right.dim and left.dim:
        ident = [[int(i == j) for j in range(left.dim)] for i in range(left.dim)]
        if not sol.contains(ident):
            XM, XN = t_Og(left, places, args.prec), t_Og(right, places, args.prec)
            for v in places:
                ctx = XM.frobenii[v].ctx
                w = commutes([[ctx.element(x) for x in row] for row in ident], XM.frobenii[v], XN.frobenii[v])
                if not w:
                    i, j = w.entry
                    rep.add(f"note: identity not a morphism; witness place {v}, entry ({i + 1},{j + 1}), "
                            f"difference valuation {w.difference.valuation}")
                    break
    if res.status != "OK":
        rep.status = "VIOLATION"
        rep.add("FULLNESS_VIOLATION")


def cmd_decompose(args, rep: Report):
    A = parse_matrix(_read(args.matrix))
    if args.p == 2 or not isprime(args.p):
        raise ConfigError("--p must be an odd prime")
    if args.n not in (1, 2):
        raise ConfigError("--n must be 1 or 2")
    cp = parse_charpoly(args.charpoly) if args.charpoly else linalg.charpoly(A)
    rep.places, rep.precision = [], args.prec
    rep.add(f"p: {args.p}")
    rep.add(f"n: {args.n}")
    rep.add(f"charpoly: {poly_str(cp)}")
    ctx = PadicContext(args.p, 1, args.prec)
    F = SemilinearOperator.from_rational(ctx, A, 0)
    dec = decompose(F, cp, n=args.n)
    for r in dec.reports:
        mods = ", ".join(f"{m:.12g}" for m in r.numeric_moduli)
        rep.add(f"factor {poly_str(r.factor)}: weight {r.weight}, root moduli [{mods}]")
    for s in dec.summands:
        rep.add(f"weight {s.weight}: dimension {s.dim}")
        for b in s.basis:
            rep.add("  basis vector: [" + ", ".join(_fmt_padic(x) for x in b) + "]")
    rep.add("weights: " + ", ".join(str(w) for w in dec.weights))


def cmd_check(args, rep: Report):
    cfg = parse_config(_read(args.config))
    M, X, places = _realization(cfg, args)
    rep.places, rep.precision = places, args.prec
    rep.add(f"motive: {M}")
    if cfg.twist:
        rep.add(f"twist: {cfg.twist}")
    chk = check_object(X)
    rep.add(f"object valid: {chk.ok}")
    for msg in chk.violations:
        rep.add(f"  violation: {msg}")
    lx = is_l_effective(X)
    lt = is_l_effective(twist_object(X, -1))
    rep.add(f"l-effective X: {lx.ok}" + (f" ({lx.witness})" if lx.witness else ""))
    rep.add(f"l-effective X(-1): {lt.ok}" + (f" ({lt.witness})" if lt.witness else ""))
    lvl = is_level_le_1(X)
    rep.add("level <= 1 clauses:")
    for name, ok in lvl.clauses():
        rep.add(f"  {name}: {ok}")
    rep.add(f"level <= 1 (implemented reading): {lvl.ok}")
    if not chk.ok:
        rep.status = "VIOLATION"


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--places", default="auto:50", help="auto:<bound> or list:p1,p2,...")
    common.add_argument("--prec", type=int, default=40, help="p-adic working precision in digits")
    common.add_argument("--bound", type=int, default=10**6, help="height bound for reconstruction")
    common.add_argument("--field-d", dest="field_d", type=int, default=1, help="K = Q(sqrt d) unless the config sets field_d")
    parser = argparse.ArgumentParser(prog="ogus", description="p-adic Frobenius structures on Kummer motives")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("realize", parents=[common], help="print T_Og of a motive")
    p.add_argument("config")
    p = sub.add_parser("hom", parents=[common], help="compare exact and analytic hom spaces")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("decompose", help="weight decomposition of a rational matrix")
    p.add_argument("matrix")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--charpoly", default=None, help="coefficients, leading first, comma separated")
    p.add_argument("--prec", type=int, default=40)
    p = sub.add_parser("check", parents=[common], help="structural and effectivity checks")
    p.add_argument("config")
    return parser


COMMANDS = {"realize": cmd_realize, "hom": cmd_hom, "decompose": cmd_decompose, "check": cmd_check}


def _inputs(args) -> list[str]:
    parts = [args.command]
    for name in ("config", "left", "right", "matrix"):
        path = getattr(args, name, None)
        if path is not None:
            try:
                parts.append(_read(path))
            except ConfigError:
                parts.append(f"<unreadable {path}>")
    for name in ("places", "prec", "bound", "field_d", "p", "n", "charpoly"):
        if hasattr(args, name):
            parts.append(f"{name}={getattr(args, name)}")
    return parts


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    rep = Report(args.command, _digest(_inputs(args)))
    if getattr(args, "prec", 40) < 4:
        rep.status = "ERROR(ConfigError)"
        rep.add("error: --prec must be at least 4")
        out.write(rep.render())
        return EXIT_ERROR
    try:
        COMMANDS[args.command](args, rep)
    except OgusError as exc:
        rep.status = f"ERROR({exc.kind})"
        rep.add(f"error: {exc}")
        place = getattr(exc, "place", None)
        if place is not None:
            rep.add(f"place: {place}")
    except ValueError as exc:
        rep.status = "ERROR(ValueError)"
        rep.add(f"error: {exc}")
    out.write(rep.render())
    if rep.status == "OK":
        return EXIT_OK
    return EXIT_VIOLATION if rep.status == "VIOLATION" else EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
