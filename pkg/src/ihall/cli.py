"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import repmod as rm
from .exactarith import QuadCoeff
from .hallcore import HallContext, HallElement, verify_quantum_serre
from .ihallalg import IHallContext, IHallElement
from .iqgverify import PresentationError
from .reflectors import ReflectionError
from .quiver import (IQuiver, QuiverError, iquiver_from_json, jordan_quiver, kronecker,
                     linear_quiver, point_quiver, quasi_split_a3, rank_two, validate_iquiver)

OK, FAIL, SKIP = "OK", "FAIL", "SKIP"


class InputError(ValueError):
    """Bad command-line input: reported with exit code 2."""


@dataclass
class Check:
    id: str
    status: str
    detail: str = ""


@dataclass
class Outcome:
    title: str
    checks: List[Check] = field(default_factory=list)
    body: List[str] = field(default_factory=list)
    data: Dict[str, object] = field(default_factory=dict)

    def extend(self, checks: Sequence[Check]):
        self.checks.extend(checks)

    @property
    def code(self) -> int:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return 1
        if SKIP in statuses:
            return 3
        return 0

    def render(self, fmt: str) -> str:
        if fmt == "json":
            out = {"checks": [c.__dict__ for c in self.checks]}
            out.update(self.data)
            return json.dumps(out, indent=2, sort_keys=True)
        lines = [self.title] + self.body
        for c in sorted(self.checks, key=lambda c: c.id):
            lines.append(f"{c.id} {c.status}" + (f" {c.detail}" if c.detail else ""))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Input: quivers, expressions, rendered elements
# ---------------------------------------------------------------------------

BUILTIN = {
    "a1": lambda: validate_iquiver(point_quiver()),
    "a2": lambda: validate_iquiver(linear_quiver(2)),
    "a3": lambda: validate_iquiver(linear_quiver(3)),
    "a1xa1": lambda: validate_iquiver(rank_two(0, 0)),
    "qsa3": quasi_split_a3,
    "kronecker": lambda: validate_iquiver(kronecker()),
    "jordan": lambda: validate_iquiver(jordan_quiver()),
}


def load_quiver(source: Optional[str]) -> IQuiver:
    if source is None:
        raise InputError("--quiver is required")
    if os.path.exists(source):
        try:
            with open(source) as fh:
                return iquiver_from_json(json.load(fh))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read quiver file {source}: {exc}") from exc
    if source.lower() in BUILTIN:
        return BUILTIN[source.lower()]()
    raise InputError(f"no quiver file or builtin named {source!r} (builtins: {', '.join(BUILTIN)})")


def check_prime(q: int) -> int:
    if q < 2 or any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
        raise InputError(f"q must be a prime, got {q}")
    return q


TOKEN = re.compile(r"^(?:(S|E|K)([^\s^@]+)(\^-1)?|M@(.+))$")


def _vertex(iq: IQuiver, v: str) -> str:
    if v not in iq.vertices:
        raise InputError(f"unknown vertex {v!r}")
    return v


def _module_file(path: str, bq, p: int) -> rm.FqRep:
    try:
        with open(path) as fh:
            M = rm.rep_from_json(bq, p, json.load(fh))
        rm.check_relations(M)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read module {path}: {exc}") from exc
    return M


def parse_tokens(ctx, tokens: Sequence[str]):
    """Left-associated product of S<v>, E<v>, K<v>, K<v>^-1 and M@<path> tokens."""
    if not tokens:
        raise InputError("empty expression")
    hall = isinstance(ctx, HallContext)
    vertices = ctx.bq.vertices if hall else ctx.vertices
    out = None
    for tok in tokens:
        m = TOKEN.match(tok)
        if not m:
            raise InputError(f"bad token {tok!r}")
        kind, v, inv, path = m.groups()
        if path is not None:
            el = ctx.module(_module_file(path, ctx.bq, ctx.p))
        else:
            if v not in vertices:
                raise InputError(f"unknown vertex {v!r} in {tok!r}")
            if kind == "S":
                if inv:
                    raise InputError(f"{tok!r}: only torus classes can be inverted")
                el = ctx.simple(v)
            elif hall:
                raise InputError(f"{tok!r}: torus classes need the iHall algebra")
            else:
                el = ctx.E(v, -1 if inv else 1)
                if kind == "E" and inv:
                    raise InputError(f"{tok!r}: write K{v}^-1 for the inverse")
        out = el if out is None else out * el
    return out


_COEFF = r"(?:\((?P<a>-?\d+(?:/\d+)?) \+ (?P<b>-?\d+(?:/\d+)?)\*v\)|(?P<bv>-?\d+(?:/\d+)?)\*v|(?P<v>v)|(?P<r>-?\d+(?:/\d+)?))"
_TERM = re.compile(r"^" + _COEFF + r"\*(?P<basis>.+)$")


def _split_terms(text: str) -> List[str]:
    out, depth, cur, i = [], 0, "", 0
    while i < len(text):
        ch = text[i]
        depth += ch == "(" or ch == "{"
        depth -= ch == ")" or ch == "}"
        if depth == 0 and text.startswith(" + ", i):
            out.append(cur)
            cur, i = "", i + 3
            continue
        cur += ch
        i += 1
    out.append(cur)
    return out


def _name_to_key(cls: rm.Classifier, name: str) -> rm.Key:
    ids = {ind.name: ind.id for ind in cls.catalog}
    counts: Dict[int, int] = {}
    for part in name.split("+"):
        m = re.match(r"^(\d*)(.+)$", part)
        mult = int(m.group(1)) if m.group(1) else 1
        if m.group(2) not in ids:
            raise InputError(f"unknown indecomposable {m.group(2)!r}")
        j = ids[m.group(2)]
        counts[j] = counts.get(j, 0) + mult
    return tuple(sorted(counts.items()))


def parse_element(ctx, text: str):
    """Inverse of the element renderers of both Hall contexts."""
    hall = isinstance(ctx, HallContext)
    text = text.strip()
    if text == "0":
        return ctx.zero()
    terms = {}
    for piece in _split_terms(text):
        m = _TERM.match(piece)
        if not m:
            raise InputError(f"cannot parse term {piece!r}")
        if m.group("a") is not None:
            c = QuadCoeff(Fraction(m.group("a")), Fraction(m.group("b")), ctx.p)
        elif m.group("bv") is not None:
            c = QuadCoeff(0, Fraction(m.group("bv")), ctx.p)
        elif m.group("v") is not None:
            c = QuadCoeff(0, 1, ctx.p)
        else:
            c = QuadCoeff(Fraction(m.group("r")), 0, ctx.p)
        key, alpha = (), None
        for factor in m.group("basis").split("*"):
            if factor == "1":
                continue
            if factor.startswith("[") and factor.endswith("]"):
                key = _name_to_key(ctx.cls, factor[1:-1])
            elif factor.startswith("K{") and factor.endswith("}") and not hall:
                alpha = tuple(int(x) for x in factor[2:-1].split(","))
            else:
                raise InputError(f"cannot parse basis factor {factor!r}")
        b = key if hall else (key, alpha or ctx.zero_alpha())
        terms[b] = terms[b] + c if b in terms else c
    return HallElement(ctx, terms) if hall else IHallElement(ctx, terms)


# ---------------------------------------------------------------------------
# Report adapters
# ---------------------------------------------------------------------------

def from_relation_report(rep) -> List[Check]:
    return [Check(r.id, r.status, r.residual) for r in rep.results]


def from_check_report(rep) -> List[Check]:
    return [Check(rid, OK if ok else FAIL, detail) for rid, ok, detail in rep.lines]


def guarded(outcome: Outcome, rid: str, fn: Callable[[], List[Check]]):
    try:
        outcome.extend(fn())
    except rm.CapacityError as exc:
        outcome.checks.append(Check(rid, SKIP, str(exc)))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_product(args) -> Outcome:
    iq = load_quiver(args.quiver)
    if args.algebra == "hall":
        ctx = HallContext(iq.quiver, args.q)
    else:
        ctx = IHallContext(iq, args.q)
    out = Outcome(f"{args.algebra} product q={args.q}")
    x = parse_tokens(ctx, args.tokens)
    text = ctx.render(x)
    out.body.append(text)
    back = parse_element(ctx, text)
    out.checks.append(Check("round-trip", OK if back == x else FAIL, "" if back == x else ctx.render(back)))
    out.data["result"] = text
    if args.algebra == "ihall":
        out.data["terms"] = ctx.to_json(x)
    return out


def cmd_verify(args) -> Outcome:
    from . import iqgverify as iv
    from . import reflectors as rf
    what = args.what
    out = Outcome(f"verify {what}")
    qs = args.q_list
    if what == "serre":
        for q in qs:
            def run(q=q):
                r = verify_quantum_serre(args.a, args.b, q, args.closed_form_max)
                checks = [Check(f"serre12[q={q}]", OK if r.residual_12.is_zero() else FAIL,
                                "" if r.residual_12.is_zero() else str(r.residual_12)),
                          Check(f"serre21[q={q}]", OK if r.residual_21.is_zero() else FAIL,
                                "" if r.residual_21.is_zero() else str(r.residual_21))]
                if args.closed_form_max is not None:
                    checks.append(Check(f"closed-form[q={q}]",
                                        FAIL if r.closed_form_mismatches else OK,
                                        "; ".join(r.closed_form_mismatches)))
                return checks
            guarded(out, f"serre[q={q}]", run)
    elif what == "iserre":
        parities = (0, 1) if args.parity is None else (args.parity,)
        for q in qs:
            for p in parities:
                guarded(out, f"iserre[q={q},p={p}]", lambda q=q, p=p: [
                    Check(f"{c.id}[q={q},p={p}]", c.status, c.detail)
                    for c in from_relation_report(iv.verify_iserre(args.a, args.b, q, p))])
    elif what == "sss":
        for q in qs:
            guarded(out, f"sss[q={q}]", lambda q=q: [
                Check(f"{c.id}[q={q}]", c.status, c.detail)
                for c in from_relation_report(iv.verify_sss(args.a, args.b, q, args.smax))])
    elif what == "presentation":
        iq = load_quiver(args.quiver)
        for q in qs:
            rep = iv.verify_presentation(iq, q, args.style)
            out.extend([Check(f"{c.id}[q={q}]", c.status, c.detail) for c in from_relation_report(rep)])
    elif what == "rank-two":
        for q in qs:
            rep = iv.verify_rank_two_dynkin(q)
            out.extend([Check(f"{c.id}[q={q}]", c.status, c.detail) for c in from_relation_report(rep)])
    elif what == "tilde-t":
        tuples = list(iv.tilde_T_tuples(args.max_ab))
        bad = [t for t in tuples if not iv.tilde_T(*t).is_zero()]
        out.body.append(f"{len(tuples)} tuples with a+b <= {args.max_ab}")
        out.checks.append(Check("tilde-t", FAIL if bad else OK,
                                f"nonzero at {bad}" if bad else ""))
        out.data["tuples"] = len(tuples)
    elif what == "aux-binomial":
        out.extend(from_relation_report(iv.aux_binomial_identities(args.p_max, args.d_max)))
    elif what == "drinfeld-double":
        iq = load_quiver(args.quiver)
        for q in qs:
            rep = iv.verify_drinfeld_double(iq.quiver, q)
            out.extend([Check(f"{c.id}[q={q}]", c.status, c.detail) for c in from_relation_report(rep)])
    elif what == "square":
        iq = load_quiver(args.quiver)
        sink = _sink(iq, args.sink)
        parities = (0, 1) if args.parity is None else (args.parity,)
        for q in qs:
            for p in parities:
                guarded(out, f"square[q={q},p={p}]", lambda q=q, p=p: [
                    Check(f"{c.id}[q={q},p={p}]", c.status, c.detail)
                    for c in from_relation_report(rf.verify_commuting_square(iq, sink, q, p))])
    return out


def _sink(iq: IQuiver, sink: Optional[str]) -> str:
    if sink is None:
        raise InputError("--sink is required")
    return _vertex(iq, sink)


def cmd_reflect(args) -> Outcome:
    from . import reflectors as rf
    iq = load_quiver(args.quiver)
    sink = _sink(iq, args.sink)
    q = args.q
    out = Outcome(f"reflect sink={sink} q={q}")
    try:
        R = rf.Reflection(iq, sink, q)
    except rf.ReflectionError as exc:
        raise InputError(str(exc)) from exc
    if args.tokens:
        x = parse_tokens(R.src, args.tokens)
        y = R(x)
        out.body.append(f"source: {R.src.render(x)}")
        out.body.append(f"image:  {R.dst.render(y)}")
        out.data["image"] = R.dst.render(y)
    checks = args.checks.split(",") if args.checks else []
    suites = {
        "generators": lambda: rf.verify_generator_images(iq, sink, q),
        "dimension": lambda: rf.dimension_law(iq, sink, q, args.max_dim),
        "faithful": lambda: rf.full_faithfulness(iq, sink, q, min(args.max_dim, 3)),
        "multiplicative": lambda: rf.verify_multiplicative(iq, sink, q),
        "inverse": lambda: rf.verify_inverse(iq, sink, q),
    }
    for name in checks:
        if name not in suites:
            raise InputError(f"unknown reflection check {name!r} (choose from {', '.join(suites)})")
        guarded(out, name, lambda name=name: [
            Check(f"{name}:{c.id}", c.status, c.detail) for c in from_relation_report(suites[name]())])
    return out


def _partition(text: Optional[str]):
    from .symfun import Partition
    if text is None:
        raise InputError("--partition is required")
    try:
        parts = tuple(int(x) for x in text.split(",") if x.strip())
        if parts and list(parts) != sorted(parts, reverse=True):
            return parts
        return Partition(parts)
    except ValueError as exc:
        raise InputError(f"bad partition {text!r}") from exc


def cmd_symfun(args) -> Outcome:
    from . import symfun as sf
    out = Outcome(f"symfun {args.what}")
    if args.what in ("hl", "ihl"):
        lam = _partition(args.partition)
        parts = lam.parts if isinstance(lam, sf.Partition) else lam
        f = sf.hl_Q(parts) if args.what == "hl" else sf.ihl_Q(parts)
        out.body.append(f.render())
        out.data["result"] = f.render()
        oracle = sf.ihl_genfun_coeff(parts, theta=args.what == "ihl")
        out.checks.append(Check(f"oracle[{args.partition}]", OK if oracle == f else FAIL,
                                "" if oracle == f else oracle.render()))
        if args.what == "ihl":
            ok = f.at_theta_zero() == sf.hl_Q(parts)
            out.checks.append(Check(f"theta0[{args.partition}]", OK if ok else FAIL))
    elif args.what == "jordan-iso":
        sizes = [args.partition] if args.partition else None
        for q in args.q_list:
            alg = sf.JordanIHall(q)
            lams = [_partition(sizes[0])] if sizes else [l for n in range(1, args.max_size + 1)
                                                         for l in sf.partitions(n)]
            for lam in lams:
                guarded(out, f"iso[{lam},q={q}]", lambda lam=lam, q=q: [
                    Check(f"{rid}[q={q}]", OK if ok else FAIL, d)
                    for rid, ok, d in sf.jordan_iso_check(lam, q, alg).lines])
    elif args.what == "steinitz":
        for q in args.q_list:
            guarded(out, f"steinitz[q={q}]", lambda q=q: [
                Check(f"{rid}[q={q}]", OK if ok else FAIL, d)
                for rid, ok, d in sf.steinitz_suite(args.max_total, q).lines])
            jm = sf.JordanModules(q)
            for n in range(1, args.max_total + 1):
                for lam in sf.partitions(n):
                    ok = jm.aut_count(lam) == sf.aut_formula(lam, q)
                    out.checks.append(Check(f"aut[{lam}][q={q}]", OK if ok else FAIL))
    return out


def cmd_enumerate(args) -> Outcome:
    from .quiver import bound_quiver, path_algebra
    iq = load_quiver(args.quiver)
    bq = bound_quiver(iq) if args.category == "iquiver" else path_algebra(iq.quiver)
    table = rm.enumerate_isoclasses(bq, args.q, args.max_dim)
    cls = rm.classifier_for(bq, args.q)
    out = Outcome(f"isoclasses {args.category} q={args.q} total dim <= {args.max_dim}")
    rows = []
    for key in table.keys:
        rows.append({"name": cls.name(key), "dims": list(cls.dims(key)), "aut": cls.aut_count(key)})
        out.body.append(f"{cls.name(key):24s} dims={cls.dims(key)} |Aut|={cls.aut_count(key)}")
    out.data["isoclasses"] = rows
    out.checks.append(Check("enumerate", OK, f"{len(rows)} classes"))
    return out


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--quiver", help="iquiver JSON file or builtin name")
    common.add_argument("--q", type=int, action="append", help="prime; repeat for several")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-dim", type=int, default=4, help="total dimension bound")
    common.add_argument("--max-hom-dim", type=int, default=None,
                        help="largest Hom/Ext dimension enumerated by brute force")

    p = _Parser(prog="ihall", description="Exact Hall and iHall algebra computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pr = sub.add_parser("product", parents=[common], help="product of expression tokens")
    pr.add_argument("--algebra", choices=("ihall", "hall"), default="ihall")
    pr.add_argument("tokens", nargs="+")

    ve = sub.add_parser("verify", parents=[common], help="run a verification")
    ve.add_argument("what", choices=("serre", "iserre", "sss", "presentation", "rank-two", "tilde-t",
                                     "aux-binomial", "drinfeld-double", "square"))
    ve.add_argument("--a", type=int, default=1)
    ve.add_argument("--b", type=int, default=0)
    ve.add_argument("--parity", type=int, choices=(0, 1))
    ve.add_argument("--style", choices=("idynkin", "ikm"), default="idynkin")
    ve.add_argument("--sink")
    ve.add_argument("--max-ab", type=int, default=4)
    ve.add_argument("--p-max", type=int, default=8)
    ve.add_argument("--d-max", type=int, default=6)
    ve.add_argument("--smax", type=int, default=2)
    ve.add_argument("--closed-form-max", type=int, default=None)

    rf = sub.add_parser("reflect", parents=[common], help="reflection at a sink")
    rf.add_argument("--sink")
    rf.add_argument("--checks", help="comma list: generators,dimension,faithful,multiplicative,inverse")
    rf.add_argument("tokens", nargs="*")

    sy = sub.add_parser("symfun", parents=[common], help="symmetric-function computations")
    sy.add_argument("what", choices=("hl", "ihl", "jordan-iso", "steinitz"))
    sy.add_argument("--partition", help="comma-separated parts, e.g. 2,1")
    sy.add_argument("--max-size", type=int, default=3)
    sy.add_argument("--max-total", type=int, default=4)

    en = sub.add_parser("enumerate", parents=[common], help="isoclass table")
    en.add_argument("--category", choices=("kq", "iquiver"), default="kq")
    return p


def run(argv: Sequence[str]) -> tuple:
    """(exit code, rendered output)."""
    saved = dataclasses.replace(rm.BUDGET)
    try:
        args = build_parser().parse_args(list(argv))
        args.q_list = [check_prime(q) for q in (args.q or [2])]
        args.q = args.q_list[0]
        for name in ("max_dim", "max_hom_dim"):
            val = getattr(args, name)
            if val is not None and val <= 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if args.max_hom_dim is not None:
            rm.BUDGET.search_cap = rm.BUDGET.ext_cap = max(args.q_list) ** args.max_hom_dim
        handler = {"product": cmd_product, "verify": cmd_verify, "reflect": cmd_reflect,
                   "symfun": cmd_symfun, "enumerate": cmd_enumerate}[args.command]
        outcome = handler(args)
    except (InputError, QuiverError, PresentationError, ReflectionError) as exc:
        return 2, f"error: {exc}"
    except rm.CapacityError as exc:
        return 3, f"capacity exceeded: {exc}"
    finally:
        rm.BUDGET.search_cap, rm.BUDGET.ext_cap = saved.search_cap, saved.ext_cap
    return outcome.code, outcome.render(args.format)


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    print(text, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
