"""Exact coefficient arithmetic.

Everything symbolic in this package carries coefficients that are Laurent
polynomials in the deformation parameter ``q`` with Gaussian-rational
coefficients.  Expansions around the classical point use ``eps = 1 - q``
and are kept in a separate, explicitly truncated type.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "GaussRational",
    "LaurentPoly",
    "EpsSeries",
    "lp_arith",
    "lp_conj",
    "lp_expand_eps",
    "lp_eval",
    "Q",
    "ONE",
    "ZERO",
    "I",
]

_EXP_LIMIT = 2**31

Number = Union[int, Fraction, "GaussRational"]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


class GaussRational:
    """A number ``re + im*i`` with both parts exact rationals."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)
        self._hash = None

    @classmethod
    def coerce(cls, v) -> "GaussRational":
        if isinstance(v, GaussRational):
            return v
        if isinstance(v, complex):
            raise TypeError("float complex values are not exact; use GaussRational")
        return cls(v)

    def __add__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRational(
            (self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den
        )

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            return GaussRational(1) / (self ** (-n))
        out = GaussRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.re, self.im)) if self.im else hash(self.re)
        return self._hash

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


_G0 = GaussRational(0)
_G1 = GaussRational(1)


def _check_exp(e: int) -> int:
    if not -_EXP_LIMIT < e < _EXP_LIMIT:
        raise OverflowError(f"q-exponent {e} outside machine-integer range")
    return e


class LaurentPoly:
    """Immutable Laurent polynomial ``sum_n c_n q^n`` over Gaussian rationals.

    Zero coefficients are never stored; the zero polynomial has no terms.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                g = GaussRational.coerce(c)
                if g:
                    clean[_check_exp(int(e))] = g
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Number) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: Number, exp: int) -> "LaurentPoly":
        return cls({exp: c})

    @classmethod
    def coerce(cls, v) -> "LaurentPoly":
        if isinstance(v, LaurentPoly):
            return v
        return cls.const(v)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __iter__(self):
        return iter(sorted(self._terms))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coeff(self, exp: int) -> GaussRational:
        return self._terms.get(exp, _G0)

    @staticmethod
    def _foreign(other) -> bool:
        return not isinstance(other, (LaurentPoly, GaussRational, int, Fraction))

    def __add__(self, other):
        if self._foreign(other):
            return NotImplemented
        o = LaurentPoly.coerce(other)
        out = dict(self._terms)
        for e, c in o._terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if self._foreign(other):
            return NotImplemented
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if self._foreign(other):
            return NotImplemented
        o = LaurentPoly.coerce(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = _check_exp(e1 + e2)
                s = out.get(e)
                p = c1 * c2
                out[e] = p if s is None else s + p
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            return self.inverse() ** (-n)
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit (single-term) Laurent polynomial."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a unit")
        (e, c), = self._terms.items()
        return LaurentPoly._raw({-e: _G1 / c})

    def conj(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: c.conj() for e, c in self._terms.items()})

    def shift(self, n: int) -> "LaurentPoly":
        """Multiply by ``q**n``."""
        return LaurentPoly._raw({_check_exp(e + n): c for e, c in self._terms.items()})

    def eval(self, q_value) -> GaussRational:
        return lp_eval(self, q_value)

    def eval_complex(self, q_value: float) -> complex:
        return sum((complex(c) * q_value**e for e, c in self._terms.items()), 0j)

    def expand_eps(self, order: int) -> "EpsSeries":
        return lp_expand_eps(self, order)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussRational)):
            return self == LaurentPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return render_lp(self)


def _render_gauss(c: GaussRational) -> str:
    if not c.im:
        return str(c.re)
    if not c.re:
        return f"{c.im}*i"
    sign = "+" if c.im > 0 else "-"
    return f"({c.re}{sign}{abs(c.im)}*i)"


def render_lp(p: LaurentPoly) -> str:
    """Canonical text: ascending exponents, ``c*q^n`` terms joined by signs."""
    if not p._terms:
        return "0"
    parts = []
    for e, c in p.items():
        neg = not c.im and c.re < 0
        mag = -c if neg else c
        body = _render_gauss(mag)
        if e == 0:
            term = body
        else:
            qpart = "q" if e == 1 else f"q^{e}"
            term = qpart if mag == _G1 else f"{body}*{qpart}"
        parts.append(("-" if neg else "+", term))
    sign, first = parts[0]
    out = ("-" if sign == "-" else "") + first
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
Q = LaurentPoly.monomial(1, 1)
I = LaurentPoly.const(GaussRational(0, 1))


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def lp_conj(a: LaurentPoly) -> LaurentPoly:
    return a.conj()


def lp_eval(a: LaurentPoly, q_value) -> GaussRational:
    qv = _frac(q_value)
    if qv == 0 and any(e < 0 for e in a._terms):
        raise ZeroDivisionError("q = 0 is a pole of a term with negative exponent")
    total = _G0
    for e, c in a._terms.items():
        total = total + c * (qv**e)
    return total


class EpsSeries:
    """Power series in ``eps = 1 - q`` truncated after ``eps**order``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[Number], order: int):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = [GaussRational.coerce(c) for c in coeffs][: order + 1]
        cs += [_G0] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    def _match(self, other) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            return EpsSeries([other], self.order)
        if other.order != self.order:
            raise ValueError("truncation orders differ")
        return other

    def __add__(self, other):
        o = self._match(other)
        return EpsSeries([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return EpsSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._match(other))

    def __mul__(self, other):
        o = self._match(other)
        out = [_G0] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(self.order + 1 - i):
                out[i + j] = out[i + j] + a * o.coeffs[j]
        return EpsSeries(out, self.order)

    __rmul__ = __mul__

    def __getitem__(self, k: int) -> GaussRational:
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def leading_order(self) -> int | None:
        """Smallest k with a nonzero eps**k coefficient, or None."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def eval(self, eps) -> GaussRational:
        e = _frac(eps)
        return sum((c * e**k for k, c in enumerate(self.coeffs)), _G0)

    def __eq__(self, other):
        if isinstance(other, EpsSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __repr__(self):
        return f"EpsSeries({[str(c) for c in self.coeffs]}, order={self.order})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            eps = "" if k == 0 else ("eps" if k == 1 else f"eps^{k}")
            body = _render_gauss(c)
            parts.append(body if not eps else (eps if c == _G1 else f"{body}*{eps}"))
        return " + ".join(parts) if parts else "0"


def _qpow_series(n: int, order: int) -> list[Fraction]:
    # q**n = (1 - eps)**n; negative n uses the generalized binomial series
    if n >= 0:
        return [Fraction((-1) ** k * comb(n, k)) for k in range(order + 1)]
    m = -n
    return [Fraction(comb(m + k - 1, k)) for k in range(order + 1)]


def lp_expand_eps(a: LaurentPoly, order: int) -> EpsSeries:
    """Substitute ``q = 1 - eps`` and truncate after ``eps**order``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    out = [_G0] * (order + 1)
    for e, c in a._terms.items():
        for k, b in enumerate(_qpow_series(e, order)):
            if b:
                out[k] = out[k] + c * b
    return EpsSeries(out, order)
