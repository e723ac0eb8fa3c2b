"""The iHall algebra of an iquiver at a fixed prime q.

Basis elements are pairs ([X], alpha): a kQ-module X (all eps maps zero) and
an integer vector alpha standing for the torus element K_alpha. Products lift
both factors to the iquiver algebra, sum the middle terms of all extensions
and bring each middle term back to normal form by taking eps-homology.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import linalg as la
from . import repmod as rm
from .exactarith import (LaurentPoly, QuadCoeff, RationalFunction, V, q_double_factorial,
                         q_factorial, q_int, qc_vpow, specialize, vpow)
from .hallcore import fmt_coeff
from .quiver import IQuiver, bound_quiver, eps_label, path_algebra

Key = rm.Key
Alpha = Tuple[int, ...]
Basis = Tuple[Key, Alpha]


class IHallContext:
    def __init__(self, iq: IQuiver, p: int, cap: int | None = None):
        self.iq = iq
        self.p = p
        self.cap = cap or rm.BUDGET.ext_cap
        self.bq = bound_quiver(iq)
        self.kq = path_algebra(iq.quiver)
        self.cls = rm.classifier_for(self.kq, p)
        self.fd = iq.forms
        self.vertices = iq.vertices
        self.n = len(self.vertices)
        self._tau_idx = [self.vertices.index(iq.t(v)) for v in self.vertices]
        self._raw: Dict[Tuple[Key, Key], Dict[Basis, QuadCoeff]] = {}
        self._reduce_cache: Dict[tuple, Tuple[QuadCoeff, Key, Alpha]] = {}

    # vectors -------------------------------------------------------------
    def tau(self, alpha: Sequence[int]) -> Alpha:
        out = [0] * self.n
        for i, a in enumerate(alpha):
            out[self._tau_idx[i]] += a
        return tuple(out)

    def unit(self, v: str) -> Alpha:
        return tuple(int(w == v) for w in self.vertices)

    def zero_alpha(self) -> Alpha:
        return (0,) * self.n

    def coeff(self, x) -> QuadCoeff:
        return x if isinstance(x, QuadCoeff) else specialize(x, self.p)

    def vq(self, k: int) -> QuadCoeff:
        return qc_vpow(k, self.p)

    # modules -------------------------------------------------------------
    def lift(self, key: Key) -> rm.FqRep:
        """The kQ-module as an iquiver-algebra module with zero eps maps."""
        X = self.cls.rep(key)
        return rm.FqRep(self.bq, self.p, X.dims, dict(X.maps))

    def generalized_simple(self, v: str) -> rm.FqRep:
        """E_v: top at v, eps_v sending it to vertex tau(v)."""
        tv = self.iq.t(v)
        if tv == v:
            dims = [2 if w == v else 0 for w in self.vertices]
            m = la.zeros(2, 2)
            m[1, 0] = 1
            return rm.FqRep(self.bq, self.p, dims, {eps_label(v): m})
        dims = [1 if w in (v, tv) else 0 for w in self.vertices]
        return rm.FqRep(self.bq, self.p, dims, {eps_label(v): la.as_mat([[1]], self.p)})

    def reduce(self, M: rm.FqRep) -> Tuple[QuadCoeff, Key, Alpha]:
        """[M] = scalar * [X] * K_alpha with X the eps-homology of M."""
        bk = M.byte_key()
        hit = self._reduce_cache.get(bk)
        if hit is not None:
            return hit
        p = self.p
        vs = self.vertices
        alpha = []
        ker, comp, full = [], [], []
        for i, v in enumerate(vs):
            e_out = M.maps[eps_label(v)]                 # M_v -> M_{tau v}
            e_in = M.maps[eps_label(self.iq.t(v))]       # M_{tau v} -> M_v
            alpha.append(la.rank(e_out, p) if e_out.size else 0)
            K = la.nullspace(e_out, p) if e_out.shape[0] else la.eye(M.dims[i])
            I = la.column_space(e_in, p) if e_in.size else la.zeros(M.dims[i], 0)
            # complement of I inside K
            if K.shape[1] == I.shape[1]:
                C = la.zeros(M.dims[i], 0)
            else:
                _, piv = la.rref(np.concatenate([I, K], axis=1), p)
                C = K[:, [c - I.shape[1] for c in piv if c >= I.shape[1]]]
            ker.append(K)
            comp.append(C)
            full.append(np.concatenate([I, C], axis=1))
        maps = {}
        vi = {v: i for i, v in enumerate(vs)}
        for a in self.iq.quiver.arrows:
            s, t = vi[a.source], vi[a.target]
            Cs, Ct = comp[s], comp[t]
            if Cs.shape[1] == 0 or Ct.shape[1] == 0:
                maps[a.label] = la.zeros(Ct.shape[1], Cs.shape[1])
                continue
            coords = la.solve(full[t], (M.maps[a.label] @ Cs) % p, p)
            maps[a.label] = coords[full[t].shape[1] - Ct.shape[1]:]
        X = rm.FqRep(self.kq, p, [c.shape[1] for c in comp], maps)
        key = self.cls.key(X)
        alpha_t = tuple(alpha)
        xdims = X.dims
        scalar = self.vq(self.fd.euler(xdims, tuple(t - a for t, a in zip(self.tau(alpha_t), alpha_t))))
        out = (scalar, key, alpha_t)
        self._reduce_cache[bk] = out
        return out

    # elements ------------------------------------------------------------
    def element(self, terms: Dict[Basis, object]) -> "IHallElement":
        return IHallElement(self, terms)

    def basis(self, key: Key = (), alpha: Sequence[int] | None = None, c=1) -> "IHallElement":
        alpha = tuple(alpha) if alpha is not None else self.zero_alpha()
        return IHallElement(self, {(key, alpha): c})

    def one(self) -> "IHallElement":
        return self.basis()

    def zero(self) -> "IHallElement":
        return IHallElement(self, {})

    def module(self, X: rm.FqRep, c=1) -> "IHallElement":
        """[X] for a kQ-module X, or the normal form of an iquiver-algebra module."""
        if X.bq is self.kq:
            return self.basis(self.cls.key(X), None, c)
        sc, k, a = self.reduce(X)
        return self.basis(k, a, self.coeff(c) * sc)

    def simple(self, v: str, mult: int = 1) -> "IHallElement":
        return self.module(rm.simple(self.kq, self.p, v, mult))

    def K(self, alpha: Sequence[int]) -> "IHallElement":
        return self.basis((), alpha)

    def E(self, v: str, power: int = 1) -> "IHallElement":
        return self.K(tuple(power * x for x in self.unit(v)))

    # products --------------------------------------------------------------
    def raw_module_product(self, kx: Key, ky: Key) -> Dict[Basis, QuadCoeff]:
        """[X] * [Y] for kQ-modules, twisted by the Euler form of Q."""
        hit = self._raw.get((kx, ky))
        if hit is not None:
            return hit
        if not kx or not ky:
            out = {(kx or ky, self.zero_alpha()): QuadCoeff(1, 0, self.p)}
        else:
            X, Y = self.lift(kx), self.lift(ky)
            hom = self.p ** rm.hom_dim(X, Y)
            twist = self.vq(self.fd.euler(X.dims, Y.dims)) / hom
            out = {}
            for cnt, L in rm.extension_middle_terms(X, Y, cap=self.cap):
                sc, k, a = self.reduce(L)
                out[(k, a)] = out.get((k, a), 0) + sc * cnt
            out = {b: c * twist for b, c in out.items() if c}
        self._raw[(kx, ky)] = out
        return out

    def basis_product(self, x: Basis, y: Basis) -> Dict[Basis, QuadCoeff]:
        (kx, ax), (ky, ay) = x, y
        ydims = self.cls.dims(ky) if ky else self.zero_alpha()
        diff = tuple(t - a for t, a in zip(self.tau(ax), ax))
        scale = self.vq(self.fd.symmetric(ydims, diff))
        shift = tuple(a + b for a, b in zip(ax, ay))
        out = {}
        for (k, a), c in self.raw_module_product(kx, ky).items():
            b = (k, tuple(u + w for u, w in zip(a, shift)))
            out[b] = c * scale
        return out

    def product(self, x: "IHallElement", y: "IHallElement") -> "IHallElement":
        out: Dict[Basis, QuadCoeff] = {}
        for bx, cx in x.terms.items():
            for by, cy in y.terms.items():
                c = cx * cy
                for b, cb in self.basis_product(bx, by).items():
                    out[b] = out.get(b, 0) + c * cb
        return IHallElement(self, out)

    def degree(self, b: Basis) -> Alpha:
        return self.cls.dims(b[0]) if b[0] else self.zero_alpha()

    # rendering -------------------------------------------------------------
    def render_basis(self, b: Basis) -> str:
        key, alpha = b
        parts = []
        if key:
            parts.append(f"[{self.cls.name(key)}]")
        if any(alpha):
            parts.append("K{" + ",".join(str(a) for a in alpha) + "}")
        return "*".join(parts) if parts else "1"

    def render(self, x: "IHallElement") -> str:
        if not x.terms:
            return "0"
        items = sorted(x.terms.items(),
                       key=lambda kv: (sum(self.degree(kv[0])), kv[0][0], kv[0][1]))
        return " + ".join(f"{fmt_coeff(c)}*{self.render_basis(b)}" for b, c in items)

    def to_json(self, x: "IHallElement") -> list:
        out = []
        for (key, alpha), c in sorted(x.terms.items()):
            out.append({"module": self.cls.name(key), "dims": list(self.cls.dims(key)),
                        "alpha": list(alpha), "coeff": [str(c.a), str(c.b)]})
        return out


@dataclass
class IHallElement:
    ctx: IHallContext
    terms: Dict[Basis, QuadCoeff]

    def __post_init__(self):
        out = {}
        for b, c in self.terms.items():
            c = self.ctx.coeff(c)
            if c:
                out[b] = c
        self.terms = out

    def __add__(self, other: "IHallElement") -> "IHallElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return IHallElement(self.ctx, out)

    def __neg__(self):
        return IHallElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, IHallElement):
            return self.ctx.product(self, other)
        c = self.ctx.coeff(other)
        return IHallElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int) -> "IHallElement":
        if n < 0:
            # only torus monomials are invertible here
            if len(self.terms) != 1:
                raise ValueError("only scalar multiples of K_alpha can be inverted")
            ((key, alpha), c), = self.terms.items()
            if key:
                raise ValueError("only scalar multiples of K_alpha can be inverted")
            return IHallElement(self.ctx, {((), tuple(a * n for a in alpha)): c ** n})
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, IHallElement):
            return NotImplemented
        return self.terms == other.terms

    def __str__(self):
        return self.ctx.render(self)


def reduce(ctx: IHallContext, M: rm.FqRep):
    return ctx.reduce(M)


def iproduct(x: IHallElement, y: IHallElement) -> IHallElement:
    return x.ctx.product(x, y)


# ---------------------------------------------------------------------------
# Generators and the map from the iquantum group
# ---------------------------------------------------------------------------


def generator(ctx: IHallContext, symbol: str) -> IHallElement:
    """'S<v>', 'E<v>' or 'Kinv<v>'."""
    for prefix, fn in (("Kinv", lambda v: ctx.E(v, -1)), ("S", ctx.simple), ("E", ctx.E)):
        if symbol.startswith(prefix):
            v = symbol[len(prefix):]
            if v not in ctx.vertices:
                raise KeyError(f"unknown vertex in {symbol!r}")
            return fn(v)
    raise KeyError(f"unknown generator {symbol!r}")


def in_representatives(iq: IQuiver, v: str) -> bool:
    return v in iq.representatives


def psi_B(ctx: IHallContext, v: str) -> IHallElement:
    q = ctx.p
    if in_representatives(ctx.iq, v):
        return ctx.simple(v) * Fraction(-1, q - 1)
    return ctx.simple(v) * (ctx.vq(1) / (q - 1))


def psi_k(ctx: IHallContext, v: str, power: int = 1) -> IHallElement:
    """Image of tk_v (or its inverse for power -1)."""
    q = ctx.p
    if ctx.iq.is_split(v):
        c = QuadCoeff(Fraction(-1, q), 0, q)
    else:
        # the Cartan entry c_{v, tau v} is even
        c = ctx.vq(-ctx.fd.cartan_entry(v, ctx.iq.t(v)) // 2)
    return ctx.E(v, power) * (c ** power)


def psi_image(ctx: IHallContext, symbol: str) -> IHallElement:
    """Images of 'B<v>', 'k<v>', 'kinv<v>'."""
    if symbol.startswith("kinv"):
        return psi_k(ctx, symbol[4:], -1)
    if symbol.startswith("k"):
        return psi_k(ctx, symbol[1:], 1)
    if symbol.startswith("B"):
        return psi_B(ctx, symbol[1:])
    raise KeyError(f"unknown generator {symbol!r}")


def idivided_power_hall(ctx: IHallContext, v: str, n: int, parity: str) -> IHallElement:
    """[S_v]^(n) for a split vertex, built from products with K = K_{e_v}."""
    if not ctx.iq.is_split(v):
        raise ValueError("idivided powers need a split vertex")
    S = ctx.simple(v)
    K = ctx.E(v)
    c = ctx.vq(-1) * ctx.coeff((V * V - 1) ** 2)

    def factor(m: int):
        return S * S + K * (c * ctx.coeff(q_int(m) ** 2))

    out = ctx.one()
    k, odd = divmod(n, 2)
    if parity == "odd":
        for j in range(1, k + 1):
            out = out * factor(2 * j - 1)
    elif parity == "even":
        for j in range(1, k + 1):
            out = out * factor(2 * j if odd else 2 * j - 2)
    else:
        raise ValueError("parity must be 'even' or 'odd'")
    if odd:
        out = S * out
    return out * (1 / ctx.coeff(q_factorial(n)))


# ---------------------------------------------------------------------------
# Formal rank-one model: symbolic in v with a formal torus generator K
# ---------------------------------------------------------------------------

FormalKey = Tuple[int, int]  # (m, k) for [mS]*K^k


class FormalRank1:
    """Split rank-one iHall algebra with coefficients in Q(v)."""

    def __init__(self, terms: Dict[FormalKey, object] | None = None):
        out = {}
        for k, c in (terms or {}).items():
            c = RationalFunction.of(c)
            if not c.is_zero():
                out[k] = c
        self.terms = out

    @classmethod
    def S(cls, m: int = 1) -> "FormalRank1":
        return cls({(m, 0): 1})

    @classmethod
    def K(cls, k: int = 1) -> "FormalRank1":
        return cls({(0, k): 1})

    @classmethod
    def one(cls) -> "FormalRank1":
        return cls({(0, 0): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return FormalRank1(out)

    def __neg__(self):
        return FormalRank1({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FormalRank1":
        c = RationalFunction.of(c)
        return FormalRank1({k: v * c for k, v in self.terms.items()})

    def left_S(self) -> "FormalRank1":
        """[S] * x using [S]*[mS] = v^-m [(m+1)S] + (v^m - v^-m) [(m-1)S] K."""
        out = FormalRank1()
        for (m, k), c in self.terms.items():
            part = {(m + 1, k): c * vpow(-m)}
            if m >= 1:
                part[(m - 1, k + 1)] = c * (vpow(m) - vpow(-m))
            out = out + FormalRank1(part)
        return out

    def times_K(self, e: int = 1) -> "FormalRank1":
        return FormalRank1({(m, k + e): c for (m, k), c in self.terms.items()})

    def times_mS(self, m: int) -> "FormalRank1":
        """[mS] * x, unwinding [S]*[(m-1)S] = v^{1-m}[mS] + (v^{m-1} - v^{1-m})[(m-2)S]K."""
        prev, cur = None, self
        for j in range(1, m + 1):
            nxt = cur.left_S()
            if j >= 2:
                nxt = nxt - prev.times_K().scale(vpow(j - 1) - vpow(1 - j))
            nxt = nxt.scale(vpow(j - 1))
            prev, cur = cur, nxt
        return cur

    def mul(self, other: "FormalRank1") -> "FormalRank1":
        """Product; the rank-one algebra is commutative."""
        out = FormalRank1()
        for (m, k), c in other.terms.items():
            out = out + self.scale(c).times_K(k).times_mS(m)
        return out

    def __eq__(self, other):
        return isinstance(other, FormalRank1) and self.terms == other.terms

    def __repr__(self):
        items = sorted(self.terms.items())
        return " + ".join(f"({c.render()})*[{m}S]*K^{k}" for (m, k), c in items) or "0"


def idivided_power_recursive(n: int, parity: str) -> FormalRank1:
    """[S]^(n) from its defining product formula in the formal model."""
    c = vpow(-1) * (V * V - 1) ** 2
    S = FormalRank1.S()

    def factor(m: int):
        return S.mul(S) + FormalRank1.K().scale(c * q_int(m) ** 2)

    out = FormalRank1.one()
    k, odd = divmod(n, 2)
    for j in range(1, k + 1):
        if parity == "odd":
            m = 2 * j - 1
        elif parity == "even":
            m = 2 * j if odd else 2 * j - 2
        else:
            raise ValueError("parity must be 'even' or 'odd'")
        out = out.mul(factor(m))
    if odd:
        out = S.mul(out)
    return out.scale(RationalFunction(LaurentPoly.const(1), q_factorial(n)))


def idivided_power(n: int, parity: str) -> FormalRank1:
    """Closed-form expansion of [S]^(n) in the basis [(n-2k)S]*K^k."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    sign = 1 if parity == "even" else -1
    terms = {}
    for k in range(n // 2 + 1):
        r = n - 2 * k
        e = k * (k - sign * (-1) ** n) - r * (r - 1) // 2
        num = vpow(e) * (V - vpow(-1)) ** k
        den = q_factorial(r) * q_double_factorial(2 * k)
        terms[(r, k)] = RationalFunction(num, den)
    return FormalRank1(terms)


def check_idivided_recursions(n_max: int) -> List[str]:
    """Failures of the four recursions relating consecutive idivided powers."""
    fails = []
    S = FormalRank1.S()
    c = V * (V - vpow(-1)) ** 2
    for parity in ("odd", "even"):
        dp = [idivided_power_recursive(n, parity) for n in range(n_max + 2)]
        for n in range(n_max):
            lhs = S.mul(dp[n])
            rhs = dp[n + 1].scale(q_int(n + 1))
            if (parity == "odd" and n % 2 == 1) or (parity == "even" and n % 2 == 0 and n > 0):
                rhs = rhs - dp[n - 1].times_K().scale(c * q_int(n))
            if lhs != rhs:
                fails.append(f"{parity} n={n}")
    return fails
