"""Exact univariate polynomials over the rationals, in the indeterminate ``q``.

Coefficients are stored densely as :class:`fractions.Fraction`, lowest degree
first.  The module also provides the integer-cleared extended GCD certificate:
integer polynomials ``r1, p1, q1`` with ``p1*a + q1*b == r1``, so that for every
integer ``n`` at which ``a(n)`` and ``b(n)`` are integers, ``gcd(a(n), b(n))``
divides ``r1(n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

__all__ = [
    "QPoly",
    "GcdCertificate",
    "PolySyntaxError",
    "poly_parse",
    "poly_print",
    "poly_xgcd",
    "poly_xgcd_cert",
    "poly_eval",
    "poly_cauchy_root_bound",
    "poly_fujiwara_root_bound",
]

Number = Union[int, Fraction]


def _trim(coeffs: Iterable[Number]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class QPoly:
    """Immutable dense polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``q**i``; trailing zeros are trimmed,
    so the zero polynomial has ``coeffs == ()`` and degree ``-1``.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        self._c = _trim(coeffs)
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> "QPoly":
        return cls((c,))

    @classmethod
    def var(cls) -> "QPoly":
        return cls((0, 1))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integer coefficients")
        return [int(c) for c in self._c]

    def content(self) -> int:
        """GCD of the (integer) coefficients; 0 for the zero polynomial."""
        return reduce(math.gcd, self.int_coeffs(), 0)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        n = max(len(a), len(b))
        return QPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self):
        return QPoly(-c for c in self._c)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if not a or not b:
            return QPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = QPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Number) -> "QPoly":
        c = Fraction(c)
        return QPoly(x * c for x in self._c)

    def __divmod__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self._c)
        db, lb = other.degree, other.lead
        if len(rem) - 1 < db:
            return QPoly(), self
        quot = [Fraction(0)] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] / lb
            if c == 0:
                continue
            quot[i - db] = c
            for j, bj in enumerate(other._c):
                rem[i - db + j] -= c * bj
        return QPoly(quot), QPoly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "QPoly") -> "QPoly":
        quot, rem = divmod(self, other)
        if not rem.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return quot

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)

    def __call__(self, x):
        return poly_eval(self, x)

    # comparison / display ----------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    def __repr__(self):
        return f"QPoly({poly_print(self)!r})"

    def __str__(self):
        return poly_print(self)


def _coerce(x):
    if isinstance(x, QPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return QPoly.const(x)
    return NotImplemented


# ---------------------------------------------------------------------------
# text form


class PolySyntaxError(ValueError):
    """Raised by :func:`poly_parse`; ``pos`` is the 0-based offending column."""

    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class _Parser:
    # expr ::= ["-"] term (("+"|"-") term)*
    # term ::= pow ("*" pow)*
    # pow  ::= atom ("^" integer)?
    # atom ::= integer | "q" | "(" expr ")"

    def __init__(self, text: str):
        self.text = text
        self.toks = list(self._tokenize(text))
        self.i = 0

    def _tokenize(self, text):
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                yield ("int", int(text[i:j]), i)
                i = j
            elif ch in "q+-*^()":
                yield (ch, ch, i)
                i += 1
            else:
                raise PolySyntaxError(f"unexpected character {ch!r}", text, i)
        yield ("end", None, len(text))

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolySyntaxError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> QPoly:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolySyntaxError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return p

    def expr(self):
        neg = False
        if self.peek()[0] == "-":
            self.take("-")
            neg = True
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek()[0] in "+-":
            op = self.take(self.peek()[0])[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.power()
        while self.peek()[0] == "*":
            self.take("*")
            acc = acc * self.power()
        return acc

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take("^")
            tok = self.peek()
            if tok[0] != "int":
                raise PolySyntaxError(
                    "exponent must be a nonnegative integer literal", self.text, tok[2]
                )
            self.take("int")
            base = base ** tok[1]
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take("int")
            return QPoly.const(val)
        if kind == "q":
            self.take("q")
            return QPoly.var()
        if kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(val)
        raise PolySyntaxError(f"expected a number, 'q' or '(', found {what}", self.text, pos)


def poly_parse(expr: str) -> QPoly:
    """Parse and expand an integer polynomial expression in ``q``.

    >>> poly_print(poly_parse("q^2*(q^2+1)*(q-1)"))
    'q^5 - q^4 + q^3 - q^2'
    """
    return _Parser(expr).parse()


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_print(p: QPoly) -> str:
    """Canonical text, highest degree first.

    Integer polynomials print in the grammar accepted by :func:`poly_parse`;
    non-integer coefficients print as ``a/b`` and do not round-trip.
    """
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = _fmt_coeff(a)
        else:
            mono = "q" if i == 1 else f"q^{i}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# evaluation and root bounds


def poly_eval(p: QPoly, x: Number):
    """Horner evaluation; returns an ``int`` when the result is integral."""
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return int(acc) if acc.denominator == 1 else acc


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def poly_cauchy_root_bound(p: QPoly) -> int:
    """Integer M with |root| < M for every complex root: 1 + ceil(max|c_i/c_n|)."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no root bound")
    lead = p.lead
    m = max((abs(c / lead) for c in p.coeffs[:-1]), default=Fraction(0))
    return 1 + _ceil(m)


def _ceil_root(x: Fraction, k: int) -> int:
    """Smallest integer m >= 0 with m**k >= x."""
    if x <= 0:
        return 0
    lo, hi = 0, 1
    while Fraction(hi) ** k < x:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if Fraction(mid) ** k >= x:
            hi = mid
        else:
            lo = mid + 1
    return lo


def poly_fujiwara_root_bound(p: QPoly) -> int:
    """Integer M with |root| < M, from Fujiwara's bound.

    Fujiwara: |z| <= 2 * max(|c_{n-1}/c_n|, |c_{n-2}/c_n|^(1/2), ...,
    |c_0/(2 c_n)|^(1/n)).  Each term is rounded up to an integer exactly.
    Much tighter than Cauchy when the large coefficients sit at low degree.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no root bound")
    n, lead = p.degree, p.lead
    if n == 0:
        return 1
    best = 0
    for i in range(1, n + 1):
        c = abs(p.coeffs[n - i] / lead)
        if i == n:
            c /= 2
        best = max(best, _ceil_root(c, i))
    return 2 * best + 1


# ---------------------------------------------------------------------------
# extended gcd


def poly_xgcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Rational extended Euclid: ``(r, s, t)`` with ``s*a + t*b == r`` and r monic.

    The higher-degree input is used as the first dividend (``b`` on ties), which
    yields the minimal-degree Bezout pair.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("xgcd of two zero polynomials is undefined")
    swap = a.degree <= b.degree
    x, y = (b, a) if swap else (a, b)
    r0, s0, t0 = x, QPoly.const(1), QPoly()
    r1, s1, t1 = y, QPoly(), QPoly.const(1)
    while not r1.is_zero():
        quot, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quot * s1
        t0, t1 = t1, t0 - quot * t1
    inv = 1 / r0.lead
    r, s, t = r0.scale(inv), s0.scale(inv), t0.scale(inv)
    return (r, t, s) if swap else (r, s, t)


@dataclass(frozen=True)
class GcdCertificate:
    """Integer polynomials with ``p1*input_a + q1*input_b == r1``."""

    r1: QPoly
    p1: QPoly
    q1: QPoly
    input_a: QPoly
    input_b: QPoly

    def check(self) -> bool:
        return (
            self.p1 * self.input_a + self.q1 * self.input_b == self.r1
            and self.r1.is_integral()
            and self.p1.is_integral()
            and self.q1.is_integral()
        )

    def as_dict(self) -> dict:
        return {
            "r1": [str(c) for c in self.r1.coeffs],
            "p1": [str(c) for c in self.p1.coeffs],
            "q1": [str(c) for c in self.q1.coeffs],
        }


def _lcm_denominators(polys: Sequence[QPoly]) -> int:
    return reduce(math.lcm, (c.denominator for p in polys for c in p.coeffs), 1)


def poly_xgcd_cert(a: QPoly, b: QPoly) -> GcdCertificate:
    """Integer-cleared extended GCD certificate for ``a`` and ``b``.

    Runs :func:`poly_xgcd`, scales ``(r, p, q)`` by the lcm of all coefficient
    denominators, divides out the content common to all three, and makes the
    leading coefficient of ``r1`` positive.
    """
    r, s, t = poly_xgcd(a, b)
    scale = _lcm_denominators((r, s, t))
    r1, p1, q1 = r.scale(scale), s.scale(scale), t.scale(scale)
    g = reduce(math.gcd, (int(c) for p in (r1, p1, q1) for c in p.coeffs), 0)
    if r1.lead < 0:
        g = -g
    if g not in (0, 1):
        r1, p1, q1 = r1.scale(Fraction(1, g)), p1.scale(Fraction(1, g)), q1.scale(Fraction(1, g))
    cert = GcdCertificate(r1, p1, q1, a, b)
    assert cert.check()
    return cert
