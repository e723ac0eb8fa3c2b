"""Ringel-Hall algebras of quiver representations at a fixed prime q.

Elements are finite sums of isoclasses with coefficients in Q(v), v^2 = q.
The product [X]<>[Y] sums the middle terms of all extensions
0 -> Y -> L -> X -> 0 weighted by 1/|Hom(X, Y)|; the twisted product
multiplies it by v^<dim X, dim Y>.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import linalg as la
from . import repmod as rm
from .exactarith import QuadCoeff, q_binom, q_factorial, qc_vpow, specialize
from .quiver import BoundQuiver, FormData, Quiver, path_algebra, rank_two

Key = rm.Key


class UnsupportedError(ValueError):
    """Operation not available for this module category."""


def fmt_coeff(c: QuadCoeff) -> str:
    """Compact rendering of a + b*v."""
    def fr(x: Fraction) -> str:
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if c.b == 0:
        return fr(c.a)
    if c.a == 0:
        return f"{fr(c.b)}*v" if c.b != 1 else "v"
    return f"({fr(c.a)} + {fr(c.b)}*v)"


class HallContext:
    """Hall algebra of nilpotent representations of a bound quiver over F_p.

    ``forms`` supplies the Euler form used for twisting; it defaults to the
    form of the underlying quiver.
    """

    def __init__(self, bq: BoundQuiver | Quiver, p: int, forms: FormData | None = None,
                 cap: int | None = None):
        if isinstance(bq, Quiver):
            bq = path_algebra(bq)
        self.bq = bq
        self.p = p
        self.cls = rm.classifier_for(bq, p)
        self.forms = forms or FormData.of(bq.quiver)
        self.cap = cap or rm.BUDGET.ext_cap
        self._raw: Dict[Tuple[Key, Key], Dict[Key, Fraction]] = {}

    # basis ---------------------------------------------------------------
    def coeff(self, x) -> QuadCoeff:
        if isinstance(x, QuadCoeff):
            return x
        return specialize(x, self.p)

    def zero(self) -> "HallElement":
        return HallElement(self, {})

    def one(self) -> "HallElement":
        return HallElement(self, {(): QuadCoeff(1, 0, self.p)})

    def basis(self, key: Key, c=1) -> "HallElement":
        return HallElement(self, {key: self.coeff(c)})

    def module(self, M: rm.FqRep, c=1) -> "HallElement":
        return self.basis(self.cls.key(M), c)

    def simple(self, v: str, mult: int = 1) -> "HallElement":
        return self.module(rm.simple(self.bq, self.p, v, mult))

    def dbl_bracket(self, M: rm.FqRep | Key) -> "HallElement":
        key = M if isinstance(M, tuple) else self.cls.key(M)
        return self.basis(key, Fraction(1, self.cls.aut_count(key)))

    def dims(self, key: Key) -> Tuple[int, ...]:
        return self.cls.dims(key)

    # products ------------------------------------------------------------
    def raw_product(self, kx: Key, ky: Key) -> Dict[Key, Fraction]:
        """Coefficients of [X]<>[Y] (untwisted)."""
        hit = self._raw.get((kx, ky))
        if hit is not None:
            return hit
        X, Y = self.cls.rep(kx), self.cls.rep(ky)
        if not kx or not ky:
            out = {kx or ky: Fraction(1)}
        else:
            hom = self.p ** rm.hom_dim(X, Y)
            counts: Dict[Key, int] = {}
            for cnt, L in rm.extension_middle_terms(X, Y, cap=self.cap):
                k = self.cls.key(L)
                counts[k] = counts.get(k, 0) + cnt
            out = {k: Fraction(c, hom) for k, c in counts.items()}
        self._raw[(kx, ky)] = out
        return out

    def euler(self, a: Sequence[int], b: Sequence[int]) -> int:
        return self.forms.euler(a, b)

    def basis_product(self, kx: Key, ky: Key, twisted: bool = True) -> Dict[Key, QuadCoeff]:
        raw = self.raw_product(kx, ky)
        scale = qc_vpow(self.euler(self.dims(kx), self.dims(ky)), self.p) if twisted \
            else QuadCoeff(1, 0, self.p)
        return {k: scale * c for k, c in raw.items()}

    def product(self, x: "HallElement", y: "HallElement", twisted: bool = True) -> "HallElement":
        out: Dict[Key, QuadCoeff] = {}
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                c = cx * cy
                for k, ck in self.basis_product(kx, ky, twisted).items():
                    out[k] = out.get(k, 0) + c * ck
        return HallElement(self, out)

    def power(self, x: "HallElement", n: int) -> "HallElement":
        out = self.one()
        for _ in range(n):
            out = out * x
        return out

    def divided_power(self, x: "HallElement", n: int) -> "HallElement":
        return self.power(x, n) * (1 / self.coeff(q_factorial(n)))

    # Green coproduct and pairing ----------------------------------------
    def _require_hereditary(self):
        if self.bq.relations:
            raise UnsupportedError("coproduct and pairing need a category without relations")

    def green_coproduct(self, x: "HallElement") -> Dict[Tuple[Key, Key], QuadCoeff]:
        """r'([[A]]) = sum v^<B,C> |Ext^1(B,C)_A|/|Hom(B,C)| [[B]] (x) [[C]].

        Returned in the [M] (x) [N] basis.
        """
        self._require_hereditary()
        out: Dict[Tuple[Key, Key], QuadCoeff] = {}
        for ka, ca in x.terms.items():
            A = self.cls.rep(ka)
            for sub_dims in _dim_vectors_below(A.dims):
                for (kb, kc), F in rm.hall_numbers_of(A, sub_dims).items():
                    # in the [M] basis the coefficient reduces to v^<B,C> F^A_{B,C}
                    w = qc_vpow(self.euler(self.dims(kb), self.dims(kc)), self.p)
                    out[(kb, kc)] = out.get((kb, kc), 0) + ca * w * F
        return {k: c for k, c in out.items() if c}

    def green_pairing(self, x: "HallElement", y: "HallElement") -> QuadCoeff:
        """Bilinear form with ([[M]], [[N]])' = delta / |Aut M|."""
        self._require_hereditary()
        total = QuadCoeff(0, 0, self.p)
        for k, c in x.terms.items():
            if k in y.terms:
                # ([M],[M])' = |Aut M|^2 ([[M]],[[M]])' = |Aut M|
                total = total + c * y.terms[k] * self.cls.aut_count(k)
        return total

    def tensor_pairing(self, t1: Dict[Tuple[Key, Key], QuadCoeff],
                       t2: Dict[Tuple[Key, Key], QuadCoeff]) -> QuadCoeff:
        self._require_hereditary()
        total = QuadCoeff(0, 0, self.p)
        for (a, b), c in t1.items():
            d = t2.get((a, b))
            if d is not None:
                total = total + c * d * self.cls.aut_count(a) * self.cls.aut_count(b)
        return total

    def render(self, x: "HallElement") -> str:
        if not x.terms:
            return "0"
        items = sorted(x.terms.items(), key=lambda kv: (sum(self.dims(kv[0])), kv[0]))
        return " + ".join(f"{fmt_coeff(c)}*[{self.cls.name(k)}]" for k, c in items)


def _dim_vectors_below(dims: Sequence[int]):
    return itertools.product(*(range(d + 1) for d in dims))


@dataclass
class HallElement:
    ctx: HallContext
    terms: Dict[Key, QuadCoeff]

    def __post_init__(self):
        self.terms = {k: self.ctx.coeff(c) for k, c in self.terms.items() if c}

    def __add__(self, other: "HallElement") -> "HallElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return HallElement(self.ctx, out)

    def __neg__(self):
        return HallElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return self.ctx.product(self, other, twisted=True)
        c = self.ctx.coeff(other)
        return HallElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = self.ctx.coeff(other)
        return HallElement(self.ctx, {k: c * v for k, v in self.terms.items()})

    def diamond(self, other: "HallElement") -> "HallElement":
        return self.ctx.product(self, other, twisted=False)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.terms == other.terms

    def __str__(self):
        return self.ctx.render(self)


def hall_product(x: HallElement, y: HallElement, twisted: bool = True) -> HallElement:
    return x.ctx.product(x, y, twisted)


def dbl_bracket(ctx: HallContext, M) -> HallElement:
    return ctx.dbl_bracket(M)


def green_coproduct(x: HallElement):
    return x.ctx.green_coproduct(x)


def green_pairing(x: HallElement, y: HallElement) -> QuadCoeff:
    return x.ctx.green_pairing(x, y)


# ---------------------------------------------------------------------------
# Rank-2 quantum Serre relations
# ---------------------------------------------------------------------------


@dataclass
class SerreReport:
    a: int
    b: int
    q: int
    residual_12: HallElement
    residual_21: HallElement
    closed_form_mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.residual_12.is_zero() and self.residual_21.is_zero()
                and not self.closed_form_mismatches)

    def summary(self) -> str:
        status = "ok" if self.ok else "FAIL"
        lines = [f"rank-2 quiver a={self.a} b={self.b} q={self.q}: {status}"]
        if not self.residual_12.is_zero():
            lines.append(f"  residual (S1,S2): {self.residual_12}")
        if not self.residual_21.is_zero():
            lines.append(f"  residual (S2,S1): {self.residual_21}")
        lines.extend("  " + m for m in self.closed_form_mismatches)
        return "\n".join(lines)


def serre_sum(ctx: HallContext, i: str, j: str, n: int) -> HallElement:
    """sum_t (-1)^t [[S_i]]^(n-t) * [[S_j]] * [[S_i]]^(t) with [[S]]^(l) = [[S]]^{*l}/[l]!."""
    si = ctx.dbl_bracket(rm.simple(ctx.bq, ctx.p, i))
    sj = ctx.dbl_bracket(rm.simple(ctx.bq, ctx.p, j))
    dp = [ctx.divided_power(si, l) for l in range(n + 1)]
    total = ctx.zero()
    for t in range(n + 1):
        term = dp[n - t] * sj * dp[t]
        total = total + (term if t % 2 == 0 else -term)
    return total


def rank_two_u_w(M: rm.FqRep, a: int, b: int) -> Tuple[int, int, bool]:
    """(dim U_M, dim W_M, W_M inside U_M) for a module with dim M_2 = 1."""
    p = M.p
    r = M.dims[0]
    if a:
        stacked = la.as_mat([M.maps[f"a{k}"].reshape(-1) for k in range(1, a + 1)], p)
        U = la.nullspace(stacked, p)
    else:
        U = la.eye(r)
    if b:
        cols = la.as_mat([M.maps[f"b{k}"].reshape(-1) for k in range(1, b + 1)], p).T
        W = la.column_space(cols, p)
    else:
        W = la.zeros(r, 0)
    u, w = U.shape[1], W.shape[1]
    inside = w == 0 or la.rank(np.concatenate([U, W], axis=1), p) == u
    return u, w, inside


def rank_two_modules(cls: rm.Classifier, r: int, a: int, b: int) -> Dict[Key, rm.FqRep]:
    """Isoclasses with dimension vector (r, 1), written down from their invariants.

    Nilpotency forces every composite a_i b_j to vanish, so W = im(b) lies in
    U = ker(a). Up to base change at vertex 1 the module is then fixed by the
    kernel of k^b -> W and the image of M_1/U -> k^a.
    """
    p = cls.p
    out: Dict[Key, rm.FqRep] = {}
    for w in range(min(b, r) + 1):
        for u in range(max(w, r - a), r + 1):
            for P in la.rref_subspaces(b, w, p):          # w x b, rank w
                for R in la.rref_subspaces(a, r - u, p):  # (r-u) x a, rank r-u
                    Bm = la.zeros(r, b)
                    Bm[:w, :] = P
                    Am = la.zeros(a, r)
                    Am[:, u:] = R.T
                    maps = {f"a{k + 1}": Am[k:k + 1, :].copy() for k in range(a)}
                    maps.update({f"b{k + 1}": Bm[:, k:k + 1].copy() for k in range(b)})
                    M = rm.FqRep(cls.bq, p, (r, 1), maps)
                    out.setdefault(cls.key(M), M)
    return out


def rank_two_modules_bruteforce(cls: rm.Classifier, r: int, a: int, b: int) -> Dict[Key, rm.FqRep]:
    """Same isoclasses by running over every tuple of maps."""
    p = cls.p
    out: Dict[Key, rm.FqRep] = {}
    nvars = (a + b) * r
    for vals in itertools.product(range(p), repeat=nvars):
        maps = {}
        for k in range(a):
            maps[f"a{k + 1}"] = la.as_mat(vals[k * r:(k + 1) * r], p, (1, r))
        for k in range(b):
            off = (a + k) * r
            maps[f"b{k + 1}"] = la.as_mat(vals[off:off + r], p, (r, 1))
        M = rm.FqRep(cls.bq, p, (r, 1), maps)
        if not rm.is_nilpotent_rep(M):
            continue
        k = cls.key(M)
        out.setdefault(k, M)
    return out


def closed_form_rank_two(ctx: HallContext, a: int, b: int, s: int, t: int) -> HallElement:
    """Closed form for [[sS1]] * [[S2]] * [[tS1]] over the rank-2 quiver."""
    q = ctx.p
    total = ctx.zero()
    for k, M in rank_two_modules(ctx.cls, s + t, a, b).items():
        u, w, inside = rank_two_u_w(M, a, b)
        if not inside or t - w < 0 or t - w > u - w:
            continue
        coeff = qc_vpow(s * t - s * a - t * b + (u - t) * (t - w), q) * specialize(
            q_binom(u - w, t - w), q)
        total = total + ctx.dbl_bracket(k) * coeff
    return total


def verify_quantum_serre(a: int, b: int, q: int, closed_form_max: int | None = 2) -> SerreReport:
    """Check both quantum Serre relations for the rank-2 quiver with a arrows 1->2 and b arrows 2->1."""
    quiver = rank_two(a, b)
    ctx = HallContext(quiver, q)
    n = a + b + 1
    r12 = serre_sum(ctx, "1", "2", n)
    r21 = serre_sum(ctx, "2", "1", n)
    mismatches = []
    if closed_form_max is not None:
        for s in range(closed_form_max + 1):
            for t in range(closed_form_max + 1):
                lhs = (ctx.dbl_bracket(rm.simple(ctx.bq, q, "1", s))
                       * ctx.dbl_bracket(rm.simple(ctx.bq, q, "2"))
                       * ctx.dbl_bracket(rm.simple(ctx.bq, q, "1", t)))
                rhs = closed_form_rank_two(ctx, a, b, s, t)
                if lhs != rhs:
                    mismatches.append(f"closed form s={s} t={t}: {lhs - rhs}")
    return SerreReport(a, b, q, r12, r21, mismatches)
