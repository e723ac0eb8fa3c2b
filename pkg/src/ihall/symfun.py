"""Hall-Littlewood and iHall-Littlewood functions in the q_r generators.

A symmetric function is stored as a map (theta exponent, q-monomial) -> rational
function of t, where a q-monomial is a weakly decreasing tuple of positive
subscripts. Raising and lowering operators act on index sequences; an index
sequence is turned into a monomial only at the end (q_0 = 1, q_r = 0 for r < 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import repmod as rm
from .exactarith import LaurentPoly, RationalFunction
from .ihallalg import IHallContext, IHallElement
from .quiver import jordan_quiver, path_algebra, validate_iquiver

Mono = Tuple[int, ...]
TermKey = Tuple[int, Mono]

T = LaurentPoly.monomial(1)        # the HL parameter t
ONE_T = LaurentPoly.const(1)


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(x) for x in self.parts if x)
        if any(x < 0 for x in ps) or list(ps) != sorted(ps, reverse=True):
            raise ValueError(f"not a partition: {self.parts}")
        object.__setattr__(self, "parts", ps)

    @classmethod
    def parse(cls, s: str) -> "Partition":
        s = s.strip()
        return cls(tuple(int(x) for x in s.split(",") if x.strip())) if s else cls(())

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def n(self) -> int:
        """sum (i-1) lambda_i."""
        return sum(i * x for i, x in enumerate(self.parts))

    def multiplicities(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for x in self.parts:
            out[x] = out.get(x, 0) + 1
        return out

    def dominates(self, other: "Partition") -> bool:
        a, b = self.parts, other.parts
        sa = sb = 0
        for k in range(max(len(a), len(b))):
            sa += a[k] if k < len(a) else 0
            sb += b[k] if k < len(b) else 0
            if sa < sb:
                return False
        return self.size == other.size

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions(n: int, max_part: Optional[int] = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order."""
    max_part = n if max_part is None else max_part

    def rec(n, m):
        if n == 0:
            yield ()
            return
        for k in range(min(n, m), 0, -1):
            for rest in rec(n - k, k):
                yield (k,) + rest
    for p in rec(n, max_part):
        yield Partition(p)


# ---------------------------------------------------------------------------
# The coefficient ring and symmetric functions
# ---------------------------------------------------------------------------

def phi(r: int) -> LaurentPoly:
    """(1-t)(1-t^2)...(1-t^r)."""
    out = ONE_T
    for k in range(1, r + 1):
        out = out * (ONE_T - T ** k)
    return out


def b_coeff(lam: Partition) -> LaurentPoly:
    out = ONE_T
    for m in lam.multiplicities().values():
        out = out * phi(m)
    return out


def _mono(seq: Sequence[int]) -> Optional[Mono]:
    if any(x < 0 for x in seq):
        return None
    return tuple(sorted((x for x in seq if x), reverse=True))


class SymFun:
    """Polynomial in q_1, q_2, ... with coefficients in Q(t)[theta]."""

    def __init__(self, terms: Dict[TermKey, object] | None = None):
        out: Dict[TermKey, RationalFunction] = {}
        for k, c in (terms or {}).items():
            c = RationalFunction.of(c)
            if k in out:
                c = out[k] + c
            out[k] = c
        self.terms = {k: c for k, c in out.items() if not c.is_zero()}

    @classmethod
    def q(cls, *subscripts: int) -> "SymFun":
        m = _mono(subscripts)
        return cls({(0, m): 1}) if m is not None else cls()

    @classmethod
    def theta(cls, power: int = 1) -> "SymFun":
        return cls({(power, ()): 1})

    def __add__(self, other: "SymFun") -> "SymFun":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return SymFun(out)

    def __neg__(self):
        return SymFun({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "SymFun":
        if not isinstance(other, SymFun):
            c = RationalFunction.of(other)
            return SymFun({k: v * c for k, v in self.terms.items()})
        out: Dict[TermKey, RationalFunction] = {}
        for (ta, ma), ca in self.terms.items():
            for (tb, mb), cb in other.terms.items():
                k = (ta + tb, tuple(sorted(ma + mb, reverse=True)))
                c = ca * cb
                out[k] = out[k] + c if k in out else c
        return SymFun(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, SymFun) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def theta_part(self, power: int) -> "SymFun":
        return SymFun({k: c for k, c in self.terms.items() if k[0] == power})

    def at_theta_zero(self) -> "SymFun":
        return self.theta_part(0)

    def degree_ok(self, total: int) -> bool:
        """Every theta^r term has q-degree total - 2r."""
        return all(sum(m) == total - 2 * th for th, m in self.terms)

    def specialize(self, q: int) -> "SpecialFun":
        """t = 1/q."""
        x = Fraction(1, q)
        out = {}
        for k, c in self.terms.items():
            val = c.num.evaluate(x) / c.den.evaluate(x)
            if val:
                out[k] = val
        return SpecialFun(out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (th, m), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0], [-x for x in kv[0][1]])):
            mono = "*".join(f"q{x}" for x in m)
            if th:
                mono = ("theta" if th == 1 else f"theta^{th}") + ("*" + mono if mono else "")
            parts.append(f"({c.render('t')})" + ("*" + mono if mono else ""))
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"SymFun({self.render()})"


@dataclass
class SpecialFun:
    """A symmetric function with t specialized to a rational number."""
    terms: Dict[TermKey, Fraction] = field(default_factory=dict)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return SpecialFun({k: c for k, c in out.items() if c})

    def __sub__(self, other):
        return self + SpecialFun({k: -c for k, c in other.terms.items()})

    def scale(self, c) -> "SpecialFun":
        c = Fraction(c)
        return SpecialFun({k: v * c for k, v in self.terms.items() if v * c})

    def __mul__(self, other: "SpecialFun") -> "SpecialFun":
        out: Dict[TermKey, Fraction] = {}
        for (ta, ma), ca in self.terms.items():
            for (tb, mb), cb in other.terms.items():
                k = (ta + tb, tuple(sorted(ma + mb, reverse=True)))
                out[k] = out.get(k, 0) + ca * cb
        return SpecialFun({k: c for k, c in out.items() if c})

    def __eq__(self, other):
        return isinstance(other, SpecialFun) and self.terms == other.terms

    def is_zero(self):
        return not self.terms


# ---------------------------------------------------------------------------
# Raising and lowering operators
# ---------------------------------------------------------------------------

def _factor_series(r: int, theta: bool) -> RationalFunction:
    """Coefficient of X^r in (1 - X)/(1 - tX): 1 for r = 0, (t-1) t^(r-1) otherwise."""
    if r == 0:
        return RationalFunction.of(1)
    return RationalFunction.of((T - ONE_T) * T ** (r - 1))


def _apply_operators(alpha: Sequence[int], lowering: bool) -> SymFun:
    """prod_{i<j} [lowering factors] (1-R_ij)/(1-tR_ij) applied to q_alpha.

    Pairs are grouped by their larger index j, processed from the last index
    down: within group j every operator lowers alpha_j and nothing later
    raises it, so exponents are bounded by the running value of alpha_j.
    """
    n = len(alpha)
    states: Dict[Tuple[Tuple[int, ...], int], RationalFunction] = {(tuple(alpha), 0): RationalFunction.of(1)}
    for j in range(n - 1, 0, -1):
        for i in range(j):
            ops = [("R", i, j)] + ([("L", i, j)] if lowering else [])
            for kind, a, b in ops:
                new: Dict[Tuple[Tuple[int, ...], int], RationalFunction] = {}
                for (seq, th), c in states.items():
                    for r in range(0, max(seq[b], 0) + 1):
                        s = list(seq)
                        if kind == "R":
                            s[a] += r
                        else:
                            s[a] -= r
                        s[b] -= r
                        k = (tuple(s), th + (r if kind == "L" else 0))
                        val = c * _factor_series(r, kind == "L")
                        new[k] = new[k] + val if k in new else val
                states = new
    out: Dict[TermKey, RationalFunction] = {}
    for (seq, th), c in states.items():
        m = _mono(seq)
        if m is None:
            continue
        k = (th, m)
        out[k] = out[k] + c if k in out else c
    return SymFun(out)


def hl_Q(lam: Partition | Sequence[int]) -> SymFun:
    parts = lam.parts if isinstance(lam, Partition) else tuple(lam)
    return _apply_operators(parts, lowering=False)


def hl_P(lam: Partition) -> SymFun:
    Q = hl_Q(lam)
    b = RationalFunction.of(b_coeff(lam))
    return SymFun({k: c / b for k, c in Q.terms.items()})


def ihl_Q(alpha: Partition | Sequence[int]) -> SymFun:
    parts = alpha.parts if isinstance(alpha, Partition) else tuple(alpha)
    return _apply_operators(parts, lowering=True)


# ---------------------------------------------------------------------------
# Generating-function oracle
# ---------------------------------------------------------------------------

def ihl_genfun_coeff(lam: Sequence[int], theta: bool = True) -> SymFun:
    """Coefficient of u^lam in prod Q(u_i) prod_{i<j} F(u_j/u_i) F(theta u_i u_j).

    The pair factors are multiplied into a Laurent series in u_1..u_n grouped by
    the larger index j; inside group j the exponent of u_j only grows and must
    end at most lam_j, which bounds every power. The Q(u_i) factors are
    applied last by reading off q_{lam_i - e_i}.
    """
    lam = tuple(lam.parts if isinstance(lam, Partition) else lam)
    n = len(lam)
    series: Dict[Tuple[Tuple[int, ...], int], RationalFunction] = {((0,) * n, 0): RationalFunction.of(1)}
    for j in range(n - 1, 0, -1):
        for i in range(j):
            for th_factor in ((False, True) if theta else (False,)):
                new: Dict[Tuple[Tuple[int, ...], int], RationalFunction] = {}
                for (e, th), c in series.items():
                    room = lam[j] - e[j]
                    for m in range(0, max(room, 0) + 1):
                        f = list(e)
                        f[j] += m
                        f[i] += m if th_factor else -m
                        k = (tuple(f), th + (m if th_factor else 0))
                        val = c * _factor_series(m, th_factor)
                        new[k] = new[k] + val if k in new else val
                series = new
    out: Dict[TermKey, RationalFunction] = {}
    for (e, th), c in series.items():
        m = _mono([lam[k] - e[k] for k in range(n)])
        if m is None:
            continue
        key = (th, m)
        out[key] = out[key] + c if key in out else c
    return SymFun(out)


# ---------------------------------------------------------------------------
# Steinitz-Hall algebra of the Jordan quiver
# ---------------------------------------------------------------------------

class JordanModules:
    """Nilpotent Jordan-quiver modules indexed by partitions."""

    def __init__(self, q: int):
        self.q = q
        self.kq = path_algebra(jordan_quiver())
        self.cls = rm.classifier_for(self.kq, q)
        self._hall: Dict[Tuple[Partition, int], Dict[Tuple[Partition, Partition], int]] = {}

    def key(self, lam: Partition) -> rm.Key:
        return tuple(sorted((self.cls.jordan_id(k), m) for k, m in lam.multiplicities().items()))

    def rep(self, lam: Partition) -> rm.FqRep:
        return self.cls.rep(self.key(lam))

    def partition(self, key: rm.Key) -> Partition:
        parts = []
        for j, m in key:
            parts += [self.cls.catalog[j].rep.dims[0]] * m
        return Partition(tuple(sorted(parts, reverse=True)))

    def hall_numbers(self, lam: Partition, nu_size: int) -> Dict[Tuple[Partition, Partition], int]:
        """(mu, nu) -> number of submodules N of M(lam) with N = M(nu), M(lam)/N = M(mu)."""
        if (lam, nu_size) not in self._hall:
            out = {}
            for (km, kn), cnt in rm.hall_numbers_of(self.rep(lam), (nu_size,)).items():
                out[(self.partition(km), self.partition(kn))] = cnt
            self._hall[(lam, nu_size)] = out
        return self._hall[(lam, nu_size)]

    def aut_count(self, lam: Partition) -> int:
        return self.cls.aut_count(self.key(lam))


def aut_formula(lam: Partition, q: int) -> Fraction:
    """q^{|lam| + 2 n(lam)} b_lam(1/q)."""
    return Fraction(q) ** (lam.size + 2 * lam.n()) * b_coeff(lam).evaluate(Fraction(1, q))


@dataclass
class CheckReport:
    title: str
    lines: List[Tuple[str, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.lines)

    def add(self, rid: str, ok: bool, detail: str = ""):
        self.lines.append((rid, ok, "" if ok else detail))

    def text(self) -> str:
        return "\n".join([self.title] + [f"{r} {'OK' if ok else 'FAIL'}" + (f" {d}" if d else "")
                                         for r, ok, d in self.lines])


def steinitz_image(lam: Partition, q: int) -> SpecialFun:
    """q^{-n(lam)} P_lam at t = 1/q."""
    return hl_P(lam).specialize(q).scale(Fraction(1, q ** lam.n()))


def steinitz_product_check(mu: Partition, nu: Partition, q: int,
                           modules: JordanModules | None = None) -> CheckReport:
    """phi(u_mu) phi(u_nu) == sum_lam F^lam_{mu nu} phi(u_lam)."""
    jm = modules or JordanModules(q)
    rep = CheckReport(f"steinitz mu={mu} nu={nu} q={q}")
    lhs = steinitz_image(mu, q) * steinitz_image(nu, q)
    rhs = SpecialFun()
    for lam in partitions(mu.size + nu.size):
        F = jm.hall_numbers(lam, nu.size).get((mu, nu), 0)
        if F:
            rhs = rhs + steinitz_image(lam, q).scale(F)
    rep.add(f"product[{mu},{nu}]", lhs == rhs, f"difference {(lhs - rhs).terms}")
    return rep


def steinitz_suite(max_total: int, q: int) -> CheckReport:
    """Every product of two nonempty partitions with |mu| + |nu| <= max_total."""
    jm = JordanModules(q)
    rep = CheckReport(f"steinitz |mu|+|nu|<={max_total} q={q}")
    for total in range(2, max_total + 1):
        for a in range(1, total):
            for mu in partitions(a):
                for nu in partitions(total - a):
                    rep.lines += steinitz_product_check(mu, nu, q, jm).lines
    return rep


# ---------------------------------------------------------------------------
# The iHall algebra of the Jordan quiver
# ---------------------------------------------------------------------------

def _solve_fraction(A: List[List[Fraction]], b: List[Fraction]) -> List[Fraction]:
    """Exact Gaussian elimination for a square nonsingular system."""
    n = len(A)
    M = [list(r) + [bb] for r, bb in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ArithmeticError("generator system is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


class JordanIHall:
    """The iHall algebra of the Jordan quiver and its map to symmetric functions."""

    def __init__(self, q: int):
        self.q = q
        self.ctx = IHallContext(validate_iquiver(jordan_quiver()), q)
        self.jm = JordanModules(q)
        self.jm.kq, self.jm.cls = self.ctx.kq, self.ctx.cls
        self._gen_cache: Dict[Tuple[Tuple[int, ...], int], IHallElement] = {}

    def module(self, lam: Partition) -> IHallElement:
        return self.ctx.basis(self.jm.key(lam)) if lam.parts else self.ctx.one()

    def monomial(self, rho: Partition, a: int) -> IHallElement:
        """[S^(rho_1)] * [S^(rho_2)] * ... * [E_1]^a."""
        k = (rho.parts, a)
        if k not in self._gen_cache:
            out = self.ctx.one()
            for r in rho.parts:
                out = out * self.module(Partition((r,)))
            self._gen_cache[k] = out * self.ctx.E("1", a)
        return self._gen_cache[k]

    def express(self, lam: Partition) -> Dict[Tuple[Partition, int], Fraction]:
        """[S^(lam)] as a polynomial in [E_1] and the [S^(r)]."""
        d = lam.size
        monos = [(rho, a) for a in range(d // 2 + 1) for rho in partitions(d - 2 * a)]
        basis = [(self.jm.key(mu), (a,)) for a in range(d // 2 + 1) for mu in partitions(d - 2 * a)]
        cols = []
        for rho, a in monos:
            el = self.monomial(rho, a)
            for b in el.terms:
                if b not in basis:
                    raise ArithmeticError(f"unexpected basis element {b}")
            cols.append([_rational(el.terms.get(b)) for b in basis])
        A = [[cols[c][r] for c in range(len(monos))] for r in range(len(basis))]
        target = self.module(lam)
        rhs = [_rational(target.terms.get(b)) for b in basis]
        sol = _solve_fraction(A, rhs)
        return {m: s for m, s in zip(monos, sol) if s}

    def phi(self, expr: Dict[Tuple[Partition, int], Fraction]) -> SpecialFun:
        """E_1 -> q theta, [S^(r)] -> q^r q_r, with t = 1/q."""
        out = SpecialFun()
        for (rho, a), c in expr.items():
            term = SpecialFun({(a, rho.parts): Fraction(self.q) ** (rho.size + a) * c})
            out = out + term
        return out


def _rational(c) -> Fraction:
    if c is None:
        return Fraction(0)
    if c.b:
        raise ArithmeticError("irrational coefficient in the Jordan iHall algebra")
    return Fraction(c.a)


def jordan_iso_check(lam: Partition, q: int, algebra: JordanIHall | None = None) -> CheckReport:
    """Phi([S^(lam)]) == q^{|lam| + n(lam)} Q^i_lam at t = 1/q."""
    alg = algebra or JordanIHall(q)
    rep = CheckReport(f"jordan iso lam={lam} q={q}")
    got = alg.phi(alg.express(lam))
    want = ihl_Q(lam).specialize(q).scale(Fraction(q) ** (lam.size + lam.n()))
    rep.add(f"iso[{lam}]", got == want, f"difference {(got - want).terms}")
    return rep
