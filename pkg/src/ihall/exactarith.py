"""Exact coefficient arithmetic.

Three scalar types live here:

* ``LaurentPoly``: finite Laurent polynomials in one formal variable with
  rational coefficients.
* ``RationalFunction``: quotients of Laurent polynomials, kept reduced.
* ``QuadCoeff``: elements ``a + b*v`` of Q[v]/(v^2 - q) for a fixed prime q.

Plus the usual quantum-integer combinatorics ([n], [n]!, q-binomials,
double factorials, Pochhammer symbols) and ``specialize`` which sends a
formal expression to the quadratic ring at a given q.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Dict, Iterable, Tuple, Union

Number = Union[int, Fraction]


class ModeError(TypeError):
    """Raised when formal and specialized coefficients are mixed."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not a rational number: {x!r}")


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Immutable Laurent polynomial ``sum c_k v^k`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[int, Number] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = _frac(c)
                if c:
                    clean[int(k)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def _raw(cls, terms: Dict[int, Fraction]) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = dict(sorted((k, c) for k, c in terms.items() if c))
        obj._hash = None
        return obj

    # basic queries ------------------------------------------------------
    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[int, Fraction]]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_exp(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_exp(self) -> int:
        return max(self._terms) if self._terms else 0

    def coeff(self, k: int) -> Fraction:
        return self._terms.get(k, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in o._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in o._terms.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (k, c), = self._terms.items()
            return LaurentPoly({k * n: c ** n})
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _frac(other)
            return LaurentPoly._raw({k: c / other for k, c in self._terms.items()})
        if isinstance(other, LaurentPoly):
            if other.is_monomial():
                (k, c), = other._terms.items()
                return LaurentPoly._raw({e - k: a / c for e, a in self._terms.items()})
            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def divmod_poly(self, other: "LaurentPoly"):
        """Division of polynomial parts after shifting both to start at v^0.

        Returns ``(quot, rem)`` with ``self = quot*other + rem`` where the
        shift bookkeeping is absorbed into ``quot``.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        s_shift, o_shift = self.min_exp(), other.min_exp()
        num = {k - s_shift: c for k, c in self._terms.items()}
        den = {k - o_shift: c for k, c in other._terms.items()}
        dd = max(den)
        lead = den[dd]
        quot: Dict[int, Fraction] = {}
        while num and max(num) >= dd:
            nd = max(num)
            factor = num[nd] / lead
            quot[nd - dd] = factor
            for k, c in den.items():
                key = k + nd - dd
                val = num.get(key, 0) - factor * c
                if val:
                    num[key] = val
                else:
                    num.pop(key, None)
        shift = s_shift - o_shift
        q = LaurentPoly._raw({k + shift: c for k, c in quot.items()})
        r = LaurentPoly._raw({k + s_shift: c for k, c in num.items()})
        return q, r

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.divmod_poly(other)
        if not r.is_zero():
            raise ArithmeticError("Laurent division is not exact")
        return q

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: Fraction(other)} if other else {})
        if isinstance(other, RationalFunction):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # misc ---------------------------------------------------------------
    def substitute_power(self, s: int) -> "LaurentPoly":
        """Return p(v^s)."""
        return LaurentPoly._raw({k * s: c for k, c in self._terms.items()})

    def bar(self) -> "LaurentPoly":
        return self.substitute_power(-1)

    def evaluate(self, x: Number) -> Fraction:
        x = _frac(x)
        return sum((c * x ** k for k, c in self._terms.items()), Fraction(0))

    def render(self, var: str = "v") -> str:
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms, reverse=True):
            c = self._terms[k]
            if k == 0:
                mono = ""
            elif k == 1:
                mono = var
            else:
                mono = f"{var}^{k}"
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_render_frac(mag)}*{mono}"
            else:
                body = _render_frac(mag)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LaurentPoly({self.render()!r})"


def _render_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


V = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()


def vpow(k: int) -> LaurentPoly:
    return LaurentPoly.monomial(k)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


def _poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd of the polynomial parts (monomial factors ignored)."""
    a = a.divmod_poly(vpow(a.min_exp()))[0] if a else a
    b = b.divmod_poly(vpow(b.min_exp()))[0] if b else b
    while b:
        _, r = a.divmod_poly(b)
        if r:
            r = r / vpow(r.min_exp())
        a, b = b, r
    if a.is_zero():
        return ONE
    a = a / vpow(a.min_exp())
    return a / a.coeff(a.max_exp())


class RationalFunction:
    """Quotient of Laurent polynomials in lowest terms.

    The denominator is normalized to have lowest exponent 0 and leading
    coefficient 1, so equal values have equal representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = _as_laurent(num)
        den = ONE if den is None else _as_laurent(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den, self._hash = ZERO, ONE, None
            return
        if not den.is_monomial():
            g = _poly_gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
        shift = den.min_exp()
        lead = den.coeff(den.max_exp())
        self.num = LaurentPoly._raw({k - shift: c / lead for k, c in num.items()})
        self.den = LaurentPoly._raw({k - shift: c / lead for k, c in den.items()})
        self._hash = None

    @classmethod
    def of(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_laurent(self) -> bool:
        return self.den == ONE

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ArithmeticError("not a Laurent polynomial")
        return self.num

    def __add__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num, r.den, r._hash = -self.num, self.den, None
        return r

    def __sub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n >= 0:
            return RationalFunction(self.num ** n, self.den ** n)
        return RationalFunction(self.den ** (-n), self.num ** (-n))

    def __eq__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def render(self, var: str = "v") -> str:
        if self.is_laurent():
            return self.num.render(var)
        return f"({self.num.render(var)})/({self.den.render(var)})"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"RationalFunction({self.render()!r})"


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")


def _as_rf(x) -> "RationalFunction | None":
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (LaurentPoly, int, Fraction)):
        return RationalFunction(x)
    return None


# ---------------------------------------------------------------------------
# Specialized quadratic ring Q[v]/(v^2 - q)
# ---------------------------------------------------------------------------


class QuadCoeff:
    """Element ``a + b*v`` with ``v*v == q``."""

    __slots__ = ("a", "b", "q")

    def __init__(self, a: Number = 0, b: Number = 0, q: int = 2):
        self.a = _frac(a)
        self.b = _frac(b)
        self.q = q

    def _coerce(self, other):
        if isinstance(other, QuadCoeff):
            if other.q != self.q:
                raise ModeError(f"mixing q={self.q} and q={other.q}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadCoeff(other, 0, self.q)
        if isinstance(other, (LaurentPoly, RationalFunction)):
            raise ModeError("cannot mix formal and specialized coefficients")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadCoeff(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadCoeff(-self.a, -self.b, self.q)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadCoeff(self.a - o.a, self.b - o.b, self.q)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadCoeff(self.a * o.a + self.q * self.b * o.b,
                         self.a * o.b + self.b * o.a, self.q)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.q * self.b * self.b

    def inverse(self) -> "QuadCoeff":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadCoeff division by zero")
        return QuadCoeff(self.a / n, -self.b / n, self.q)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = QuadCoeff(1, 0, self.q)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, QuadCoeff):
            return self.q == other.q and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def render(self) -> str:
        return f"{_render_frac(self.a)} + {_render_frac(self.b)}*v"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"QuadCoeff({self.render()!r}, q={self.q})"


def qc_vpow(k: int, q: int) -> QuadCoeff:
    """v^k in Q[v]/(v^2 - q)."""
    half, odd = divmod(k, 2)
    scale = Fraction(q) ** half
    return QuadCoeff(0, scale, q) if odd else QuadCoeff(scale, 0, q)


def specialize(p, q: int) -> QuadCoeff:
    """Image of a formal Laurent polynomial or rational function at v^2 = q."""
    if isinstance(p, QuadCoeff):
        if p.q != q:
            raise ModeError(f"mixing q={p.q} and q={q}")
        return p
    if isinstance(p, (int, Fraction)):
        return QuadCoeff(p, 0, q)
    if isinstance(p, RationalFunction):
        num = specialize(p.num, q)
        den = specialize(p.den, q)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at q={q}")
        return num / den
    if isinstance(p, LaurentPoly):
        a = Fraction(0)
        b = Fraction(0)
        for k, c in p.items():
            half, odd = divmod(k, 2)
            w = c * Fraction(q) ** half
            if odd:
                b += w
            else:
                a += w
        return QuadCoeff(a, b, q)
    raise TypeError(f"cannot specialize {p!r}")


# ---------------------------------------------------------------------------
# Quantum combinatorics
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def q_int(n: int) -> LaurentPoly:
    """[n] = (v^n - v^-n)/(v - v^-1)."""
    if n == 0:
        return ZERO
    if n < 0:
        return -q_int(-n)
    return LaurentPoly({n - 1 - 2 * i: 1 for i in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    out = ONE
    for i in range(1, n + 1):
        out = out * q_int(i)
    return out


@lru_cache(maxsize=None)
def q_binom(m: int, r: int) -> LaurentPoly:
    """Quantum binomial [m choose r] for any integer m and r >= 0."""
    if r < 0:
        raise ValueError("q_binom requires r >= 0")
    num = ONE
    for i in range(r):
        num = num * q_int(m - i)
    return num.exact_div(q_factorial(r)) if num else ZERO


@lru_cache(maxsize=None)
def q_double_factorial(n: int) -> LaurentPoly:
    """[n]!! = [n][n-2]...[2] for even n >= 0."""
    if n < 0 or n % 2:
        raise ValueError("double factorial needs an even nonnegative argument")
    out = ONE
    for i in range(2, n + 1, 2):
        out = out * q_int(i)
    return out


def pochhammer(a: LaurentPoly, x: LaurentPoly, n: int) -> LaurentPoly:
    """(a; x)_n = (1 - a)(1 - a x)...(1 - a x^(n-1))."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    a, x = _as_laurent(a), _as_laurent(x)
    out = ONE
    term = a
    for _ in range(n):
        out = out * (ONE - term)
        term = term * x
    return out


def binom_safe(m: int, r: int) -> LaurentPoly:
    """q_binom that returns 0 for negative lower index."""
    return ZERO if r < 0 else q_binom(m, r)
