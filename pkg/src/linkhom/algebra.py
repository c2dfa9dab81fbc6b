"""Exact arithmetic in the three graded variables q, a, t.

Laurent polynomials are stored sparsely as maps from exponent triples
``(q_exp, a_exp, t_exp)`` to nonzero integer coefficients.  Rational
functions keep an integer numerator/denominator pair in a lightly
reduced canonical form: the common monomial factor, the common integer
content and any shared powers of ``1 - q^2`` are cancelled, and the
denominator's earliest term (lexicographic on (t, a, q) exponents) is
made positive.  That is enough to give every value this package
produces a unique normal form without a general multivariate gcd.

``TriSeries`` is a triple-graded coefficient table truncated at a
q-degree cutoff, optionally carrying the closed form it came from; it
is the interchange format between the homology engine and the
polynomial evaluators.  ``series_expand`` and ``ratfunc_reconstruct``
convert between the two representations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union


Exp = tuple[int, int, int]  # (q exponent, a exponent, t exponent)


class InvalidOperandError(ValueError):
    """Raised for division by zero and malformed arithmetic operands."""


class UnsupportedExpansionError(ValueError):
    """Raised when a denominator cannot be inverted as a q-series."""


def _lex_key(e: Exp) -> tuple[int, int, int]:
    """Canonical monomial order: lexicographic on (t, a, q) exponents."""
    return (e[2], e[1], e[0])


class LaurentPoly:
    """A Laurent polynomial in q, a, t with integer coefficients.

    Instances are immutable; all arithmetic returns new objects.  The
    usual operators work, and plain ``int`` operands are coerced, so
    ``1 + A * Q**2`` builds the polynomial ``1 + a q^2``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Exp, int]] = None):
        clean: dict[Exp, int] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[(int(e[0]), int(e[1]), int(e[2]))] = int(c)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({(0, 0, 0): 1})

    @staticmethod
    def mono(q: int = 0, a: int = 0, t: int = 0, coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly({(q, a, t): coeff})

    @staticmethod
    def const(c: int) -> "LaurentPoly":
        return LaurentPoly({(0, 0, 0): c})

    # -- structure ----------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def items(self) -> Iterator[tuple[Exp, int]]:
        return iter(self.terms.items())

    def coeff(self, q: int = 0, a: int = 0, t: int = 0) -> int:
        return self.terms.get((q, a, t), 0)

    def min_q(self) -> int:
        if not self.terms:
            raise InvalidOperandError("zero polynomial has no degrees")
        return min(e[0] for e in self.terms)

    def max_q(self) -> int:
        if not self.terms:
            raise InvalidOperandError("zero polynomial has no degrees")
        return max(e[0] for e in self.terms)

    def lead(self) -> tuple[Exp, int]:
        """Largest term in the canonical (t, a, q) order."""
        e = max(self.terms, key=_lex_key)
        return e, self.terms[e]

    def trail(self) -> tuple[Exp, int]:
        """Smallest term in the canonical (t, a, q) order."""
        e = min(self.terms, key=_lex_key)
        return e, self.terms[e]

    def content_monomial(self) -> Exp:
        """Componentwise minimum exponent over the support."""
        if not self.terms:
            return (0, 0, 0)
        qs, as_, ts = zip(*self.terms)
        return (min(qs), min(as_), min(ts))

    def int_content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, abs(c))
        return g

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: object) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: object) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exp, int] = {}
        for (q1, a1, t1), c1 in self.terms.items():
            for (q2, a2, t2), c2 in other.terms.items():
                e = (q1 + q2, a1 + a2, t1 + t2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self.terms) == 1:
                ((e, c),) = self.terms.items()
                if c in (1, -1):
                    return LaurentPoly.mono(
                        e[0] * n, e[1] * n, e[2] * n, _int_pow(c, n)
                    )
            raise InvalidOperandError("only unit monomials have negative powers")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, q: int = 0, a: int = 0, t: int = 0) -> "LaurentPoly":
        """Multiply by the monomial q^q a^a t^t."""
        return LaurentPoly(
            {(e[0] + q, e[1] + a, e[2] + t): c for e, c in self.terms.items()}
        )

    def scale(self, c: int) -> "LaurentPoly":
        return LaurentPoly({e: c * v for e, v in self.terms.items()})

    def subst_t(self, value: int) -> "LaurentPoly":
        """Substitute an integer for t (used for t = -1 shadows)."""
        out: dict[Exp, int] = {}
        for (q, a, t), c in self.terms.items():
            e = (q, a, 0)
            s = out.get(e, 0) + c * _int_pow(value, t)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(out)

    def divexact(self, divisor: "LaurentPoly") -> Optional["LaurentPoly"]:
        """Exact division; returns None when the divisor does not divide.

        Both operands are shifted to have componentwise-minimal exponent
        zero, then divided by lex leading terms.  In the divisible case
        every partial quotient monomial stays componentwise nonnegative,
        so a negative component is a certificate of non-divisibility and
        the loop always terminates.
        """
        if not divisor:
            raise InvalidOperandError("division by zero polynomial")
        if not self:
            return LaurentPoly.zero()
        sc = self.content_monomial()
        dcm = divisor.content_monomial()
        a = self.shift(-sc[0], -sc[1], -sc[2])
        b = divisor.shift(-dcm[0], -dcm[1], -dcm[2])
        (de, dc) = b.lead()
        rem = dict(a.terms)
        quo: dict[Exp, int] = {}
        while rem:
            e = max(rem, key=_lex_key)
            c = rem[e]
            if c % dc:
                return None
            fe = (e[0] - de[0], e[1] - de[1], e[2] - de[2])
            if fe[0] < 0 or fe[1] < 0 or fe[2] < 0:
                return None
            fc = c // dc
            quo[fe] = quo.get(fe, 0) + fc
            for (ge, gc) in b.terms.items():
                pe = (fe[0] + ge[0], fe[1] + ge[1], fe[2] + ge[2])
                s = rem.get(pe, 0) - fc * gc
                if s:
                    rem[pe] = s
                else:
                    rem.pop(pe, None)
        return LaurentPoly(quo).shift(
            sc[0] - dcm[0], sc[1] - dcm[1], sc[2] - dcm[2]
        )

    # -- io -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_lex_key):
            c = self.terms[e]
            body = _fmt_mono(e, abs(c))
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def to_json(self) -> list[list[int]]:
        return [[e[0], e[1], e[2], c] for e, c in sorted(self.terms.items(), key=lambda x: _lex_key(x[0]))]

    @staticmethod
    def from_json(data: Iterable[Iterable[int]]) -> "LaurentPoly":
        out: dict[Exp, int] = {}
        for rec in data:
            q, a, t, c = (int(v) for v in rec)
            out[(q, a, t)] = out.get((q, a, t), 0) + c
        return LaurentPoly(out)


def _int_pow(value: int, n: int) -> int:
    if n >= 0:
        return value**n
    if value == 1:
        return 1
    if value == -1:
        return -1 if n % 2 else 1
    raise InvalidOperandError("cannot substitute a non-unit into a negative power")


def _coerce(x: object) -> Union[LaurentPoly, type(NotImplemented)]:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    return NotImplemented


def _fmt_mono(e: Exp, coeff: int) -> str:
    q, a, t = e
    vars_ = []
    for sym, ex in (("q", q), ("a", a), ("t", t)):
        if ex == 1:
            vars_.append(sym)
        elif ex:
            vars_.append(f"{sym}^{ex}")
    if not vars_:
        return str(coeff)
    body = "*".join(vars_)
    return body if coeff == 1 else f"{coeff}*{body}"


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
Q = LaurentPoly.mono(q=1)
A = LaurentPoly.mono(a=1)
T = LaurentPoly.mono(t=1)
ONE_MINUS_Q2 = ONE - Q**2


class RatFunc:
    """A rational function num/den with integer Laurent coefficients.

    The constructor canonicalizes: both parts are shifted so that their
    joint support has componentwise-minimal exponent zero, the common
    integer content and common powers of ``1 - q^2`` are cancelled, and
    the denominator's earliest term is made positive.  Equality is by
    cross-multiplication, so it is independent of any reduction left
    undone (general gcds are deliberately out of scope).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[LaurentPoly, int], den: Union[LaurentPoly, int] = 1):
        num = _coerce(num)
        den = _coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise InvalidOperandError("RatFunc parts must be LaurentPoly or int")
        if den.is_zero():
            raise InvalidOperandError("zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", ZERO)
            object.__setattr__(self, "den", ONE)
            return
        nq, na, nt = num.content_monomial()
        dq, da, dt = den.content_monomial()
        sq, sa, st = min(nq, dq), min(na, da), min(nt, dt)
        if (sq, sa, st) != (0, 0, 0):
            num = num.shift(-sq, -sa, -st)
            den = den.shift(-sq, -sa, -st)
        g = math.gcd(num.int_content(), den.int_content())
        if g > 1:
            num = num.divexact(LaurentPoly.const(g))
            den = den.divexact(LaurentPoly.const(g))
        while True:
            dn = den.divexact(ONE_MINUS_Q2)
            if dn is None or dn.is_zero():
                break
            nn = num.divexact(ONE_MINUS_Q2)
            if nn is None:
                break
            num, den = nn, dn
        if den.trail()[1] < 0:
            num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def zero() -> "RatFunc":
        return RatFunc(ZERO)

    @staticmethod
    def one() -> "RatFunc":
        return RatFunc(ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den == ONE

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other: object) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: object) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise InvalidOperandError("division by zero")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: object) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc.one() / (self ** (-n))
        out = RatFunc.one()
        for _ in range(n):
            out = out * self
        return out

    def shift(self, q: int = 0, a: int = 0, t: int = 0) -> "RatFunc":
        return RatFunc(self.num.shift(q, a, t), self.den)

    def subst_t(self, value: int) -> "RatFunc":
        den = self.den.subst_t(value)
        if den.is_zero():
            raise InvalidOperandError("t-substitution kills the denominator")
        return RatFunc(self.num.subst_t(value), den)

    def __str__(self) -> str:
        if self.is_poly():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(data: Mapping) -> "RatFunc":
        return RatFunc(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))


def _coerce_rf(x: object) -> Union[RatFunc, type(NotImplemented)]:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (LaurentPoly, int)):
        return RatFunc(x)
    return NotImplemented


def rf_arith(op: str, x: RatFunc, y: RatFunc) -> RatFunc:
    """Dispatch {add, sub, mul, div} on rational functions.

    INPUT:
      op -- one of "add", "sub", "mul", "div"
      x, y -- RatFunc operands (div requires y nonzero)

    OUTPUT: the exact result in canonical reduced form.
    """
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise InvalidOperandError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class DotEqResult:
    """Outcome of a unit-monomial comparison.

    ``kind`` is one of "equal", "equal_up_to_unit", "unequal".  For the
    unit case, ``second = sign * q^q a^a t^t * first``.
    """

    kind: str
    sign: int = 1
    q: int = 0
    a: int = 0
    t: int = 0

    def __bool__(self) -> bool:
        return self.kind in ("equal", "equal_up_to_unit")

    def witness(self) -> str:
        if self.kind == "equal":
            return "1"
        if self.kind == "unequal":
            raise InvalidOperandError("no witness for unequal values")
        body = _fmt_mono((self.q, self.a, self.t), 1)
        return body if self.sign > 0 else "-" + body

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "equal_up_to_unit":
            out.update({"sign": self.sign, "q": self.q, "a": self.a, "t": self.t})
        return out


def dot_eq(x: RatFunc, y: RatFunc) -> DotEqResult:
    """Compare two rational functions up to a unit monomial.

    Reports "equal" when x = y, "equal_up_to_unit" with the witness
    monomial m (in the orientation y = m * x) when x and y differ by
    ±q^i a^j t^k, and "unequal" otherwise.  Two zeros compare equal; a
    single zero is unequal to anything else.
    """
    ax = x.num * y.den
    bx = y.num * x.den
    if ax.is_zero() and bx.is_zero():
        return DotEqResult("equal")
    if ax.is_zero() or bx.is_zero():
        return DotEqResult("unequal")
    if len(ax.terms) != len(bx.terms):
        return DotEqResult("unequal")
    (ea, ca) = ax.lead()
    (eb, cb) = bx.lead()
    if abs(ca) != abs(cb):
        return DotEqResult("unequal")
    sign = 1 if (ca > 0) == (cb > 0) else -1
    delta = (eb[0] - ea[0], eb[1] - ea[1], eb[2] - ea[2])
    if bx == ax.shift(*delta).scale(sign):
        if sign == 1 and delta == (0, 0, 0):
            return DotEqResult("equal")
        return DotEqResult("equal_up_to_unit", sign, *delta)
    return DotEqResult("unequal")


class TriSeries:
    """A triple-graded coefficient table truncated at a q-degree cutoff.

    ``dims`` maps exponent triples (q, a, t) to integer coefficients;
    entries with q-exponent above the cutoff are unreliable and are not
    stored.  Homology results use nonnegative entries (dimensions);
    signed tables also flow through internal comparisons, so
    nonnegativity is checked by the producer, not the type.
    """

    __slots__ = ("dims", "cutoff", "closed_form")

    def __init__(
        self,
        dims: Mapping[Exp, int],
        cutoff: int,
        closed_form: Optional[RatFunc] = None,
    ):
        clean = {
            (int(e[0]), int(e[1]), int(e[2])): int(c)
            for e, c in dims.items()
            if c and e[0] <= cutoff
        }
        object.__setattr__(self, "dims", clean)
        object.__setattr__(self, "cutoff", int(cutoff))
        object.__setattr__(self, "closed_form", closed_form)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TriSeries is immutable")

    def is_zero(self) -> bool:
        return not self.dims

    def nonneg(self) -> bool:
        return all(c >= 0 for c in self.dims.values())

    def shift(self, q: int = 0, a: int = 0, t: int = 0) -> "TriSeries":
        dims = {(e[0] + q, e[1] + a, e[2] + t): c for e, c in self.dims.items()}
        cf = self.closed_form.shift(q, a, t) if self.closed_form is not None else None
        return TriSeries(dims, self.cutoff + q, cf)

    def add(self, other: "TriSeries") -> "TriSeries":
        cutoff = min(self.cutoff, other.cutoff)
        dims = dict(self.dims)
        for e, c in other.dims.items():
            dims[e] = dims.get(e, 0) + c
        return TriSeries(dims, cutoff)

    def scale(self, c: int) -> "TriSeries":
        return TriSeries({e: c * v for e, v in self.dims.items()}, self.cutoff)

    def mul_poly(self, p: LaurentPoly) -> "TriSeries":
        """Multiply by a Laurent polynomial, adjusting the cutoff.

        Coefficients of the product at q-degree m draw on series terms
        down to m - min_q(p), so the reliable window moves by min(0,
        min_q(p)) and never grows.
        """
        if p.is_zero():
            return TriSeries({}, self.cutoff)
        cutoff = self.cutoff + min(0, p.min_q())
        dims: dict[Exp, int] = {}
        for (q1, a1, t1), c1 in self.dims.items():
            for (q2, a2, t2), c2 in p.terms.items():
                e = (q1 + q2, a1 + a2, t1 + t2)
                dims[e] = dims.get(e, 0) + c1 * c2
        return TriSeries(dims, cutoff)

    def subst_t(self, value: int) -> "TriSeries":
        dims: dict[Exp, int] = {}
        for (q, a, t), c in self.dims.items():
            e = (q, a, 0)
            dims[e] = dims.get(e, 0) + c * _int_pow(value, t)
        return TriSeries(dims, self.cutoff)

    def agrees_with(self, other: "TriSeries", cutoff: Optional[int] = None) -> bool:
        """Entrywise equality through the (smaller) cutoff."""
        n = min(self.cutoff, other.cutoff) if cutoff is None else cutoff
        keys = set(self.dims) | set(other.dims)
        for e in keys:
            if e[0] > n:
                continue
            if self.dims.get(e, 0) != other.dims.get(e, 0):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TriSeries):
            return NotImplemented
        return self.cutoff == other.cutoff and self.dims == other.dims

    def __str__(self) -> str:
        poly = LaurentPoly(self.dims)
        return f"{poly}  (through q^{self.cutoff})"

    def __repr__(self) -> str:
        return f"TriSeries({self})"

    def to_json(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "dims": [[e[0], e[1], e[2], c] for e, c in sorted(self.dims.items(), key=lambda x: _lex_key(x[0]))],
            "closed_form": self.closed_form.to_json() if self.closed_form is not None else None,
        }

    @staticmethod
    def from_json(data: Mapping) -> "TriSeries":
        dims = {(int(q), int(a), int(t)): int(c) for q, a, t, c in data["dims"]}
        cf = RatFunc.from_json(data["closed_form"]) if data.get("closed_form") else None
        return TriSeries(dims, int(data["cutoff"]), cf)


def series_expand(x: RatFunc, N: int) -> TriSeries:
    """Expand a rational function as a q-series through degree N.

    The denominator must have a unique lowest-q term, which must be a
    monomial with coefficient ±1; everything of that shape (all the
    ``1 - q^2`` style denominators in this package) inverts by a
    geometric series.  Raises UnsupportedExpansionError otherwise.
    """
    if x.is_zero():
        return TriSeries({}, N, closed_form=x)
    den = x.den
    min_q = den.min_q()
    low = [(e, c) for e, c in den.items() if e[0] == min_q]
    if len(low) != 1:
        raise UnsupportedExpansionError("denominator has a tied lowest q-term")
    (e0, c0) = low[0]
    if abs(c0) != 1:
        raise UnsupportedExpansionError("denominator lowest term is not a unit")
    # den = c0 * m0 * (1 - E) with E supported in strictly positive q-degrees
    rest = LaurentPoly(
        {
            (e[0] - e0[0], e[1] - e0[1], e[2] - e0[2]): c * c0
            for e, c in den.items()
            if e != e0
        }
    )
    E = -rest
    shift_q = x.num.min_q() - e0[0]
    M = N - shift_q  # needed q-precision for the inverse series
    inv = LaurentPoly.one()
    power = LaurentPoly.one()
    while True:
        power = _trunc_q(power * E, M)
        if power.is_zero():
            break
        inv = inv + power
    result = (
        _trunc_q(x.num * inv, N + e0[0]).shift(-e0[0], -e0[1], -e0[2]).scale(c0)
    )
    return TriSeries(dict(result.terms), N, closed_form=x)


def _trunc_q(p: LaurentPoly, N: int) -> LaurentPoly:
    return LaurentPoly({e: c for e, c in p.terms.items() if e[0] <= N})


def ratfunc_reconstruct(s: TriSeries, max_c: int) -> Optional[RatFunc]:
    """Recover a closed form num/(1-q^2)^c from a truncated series.

    Tries c = 0..max_c; a candidate is accepted when the product of the
    truncated series with (1-q^2)^c clears a guard window of
    max(2(c+1), 4) q-degrees below the cutoff (the numerator
    "stabilizes"; the window is at least one full even-lattice step so
    a plain truncation is never mistaken for a polynomial) and its
    re-expansion reproduces the series through the cutoff.  Returns
    None when no c works.
    """
    if s.is_zero():
        return RatFunc.zero()
    table = LaurentPoly(s.dims)
    for c in range(max_c + 1):
        candidate = _trunc_q(table * ONE_MINUS_Q2**c, s.cutoff)
        if candidate.is_zero():
            continue
        if candidate.max_q() > s.cutoff - max(2 * (c + 1), 4):
            continue
        value = RatFunc(candidate, ONE_MINUS_Q2**c)
        if series_expand(value, s.cutoff).agrees_with(s):
            return value
    return None


def laurent_from_pairs(pairs: Iterable[tuple[Exp, int]]) -> LaurentPoly:
    out: dict[Exp, int] = {}
    for e, c in pairs:
        out[e] = out.get(e, 0) + c
    return LaurentPoly(out)


def dumps(value: Union[LaurentPoly, RatFunc, TriSeries, DotEqResult]) -> str:
    """JSON text for any algebra value."""
    return json.dumps(value.to_json())
