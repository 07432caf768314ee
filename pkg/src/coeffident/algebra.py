"""Exact scalars, generalized binomials, and univariate polynomials.

The scalar domain for the whole package is ``fractions.Fraction``:
arbitrary precision, always in lowest terms with positive denominator, so
equality is bit-exact.  Floats are refused everywhere they could sneak in.
``Poly`` adds dense univariate polynomials over that domain, used both for
coefficient tables in a formal parameter and for certifying an identity as
a *polynomial* identity rather than a numerical coincidence.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "Rational",
    "as_rational",
    "parse_rational",
    "format_rational",
    "binomial",
    "rising_factorial",
    "Poly",
]

# The one scalar type. Everything exact flows through this alias.
Rational = Fraction

Scalar = Union[int, Fraction]
_SCALARS = (int, Fraction)

_RATIONAL_PATTERN = re.compile(r"^-?\d+(?:/\d+)?$")


def as_rational(value: Scalar) -> Fraction:
    """Coerce an int or Fraction to Fraction, refusing floats outright.

    ``Fraction(0.1)`` would silently produce the exact binary expansion of
    the float, which is never what an exact computation wants.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}: pass an exact Fraction instead")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse a rational in canonical ``p/q`` (or plain ``p``) form.

    A leading ASCII hyphen or U+2212 minus sign is accepted; whitespace is
    trimmed.  Decimal points, exponents, and embedded spaces are rejected.
    """
    normalized = text.strip().replace("−", "-")
    if not _RATIONAL_PATTERN.match(normalized):
        raise ValueError(f"not a rational in p/q form: {text!r}")
    numerator, _, denominator = normalized.partition("/")
    if denominator:
        if int(denominator) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(numerator), int(denominator))
    return Fraction(int(numerator))


def format_rational(value: Scalar) -> str:
    """Canonical string form: ``p/q`` in lowest terms, or ``p`` when q = 1."""
    return str(as_rational(value))


def binomial(x, b: int):
    """Binomial coefficient with an arbitrary ring element on top.

    Computed as prod_{i=0}^{b-1} (x - i) / b!, the degree-b polynomial
    extension of the integer binomial: for integers 0 <= x < b the product
    contains a zero factor, and b < 0 gives 0 outright.  ``x`` may be an
    int, a Fraction, or a Poly; the result lives in the same ring.
    """
    if b < 0:
        return Fraction(0)
    acc = Fraction(1)
    for i in range(b):
        acc = acc * (x - i)
    return acc * Fraction(1, math.factorial(b))


def rising_factorial(x, n: int):
    """Product x (x+1) ... (x+n-1); the empty product (= 1) for n = 0."""
    if n < 0:
        raise ValueError("rising_factorial needs n >= 0")
    acc = Fraction(1)
    for i in range(n):
        acc = acc * (x + i)
    return acc


class Poly:
    """Dense univariate polynomial with exact rational coefficients.

    Coefficients are stored lowest degree first with trailing zeros
    stripped, so equal polynomials compare equal; the zero polynomial has
    an empty coefficient tuple and degree -1.  Every polynomial is tagged
    with the name of its indeterminate and arithmetic between different
    indeterminates is refused.  Instances are immutable in practice
    (tuple storage, no mutating methods) and hashable.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[Scalar] = (), var: str = "gamma"):
        normalized = [as_rational(c) for c in coeffs]
        while normalized and normalized[-1] == 0:
            normalized.pop()
        self.coeffs = tuple(normalized)
        self.var = var

    @classmethod
    def constant(cls, value: Scalar, var: str = "gamma") -> "Poly":
        return cls((value,), var)

    @classmethod
    def indeterminate(cls, var: str = "gamma") -> "Poly":
        """The polynomial x itself."""
        return cls((0, 1), var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        """Coefficient of x**k, zero beyond the degree."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def _check_var(self, other: "Poly") -> None:
        if self.var != other.var:
            raise ValueError(f"indeterminate mismatch: {self.var!r} vs {other.var!r}")

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = Poly((other,), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_var(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            (self.coefficient(k) + other.coefficient(k) for k in range(n)),
            self.var,
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly((-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = Poly((other,), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, _SCALARS):
            return Poly((other,), self.var) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            factor = as_rational(other)
            return Poly((factor * c for c in self.coeffs), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_var(other)
        if not self.coeffs or not other.coeffs:
            return Poly((), self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return self * (1 / as_rational(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("polynomial powers must be integers")
        if n < 0:
            raise ValueError("polynomial powers must be >= 0")
        result = Poly((1,), self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __call__(self, x):
        """Horner evaluation; the argument may be any ring element."""
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = Poly((other,), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                head = "" if abs(c) == 1 else f"{abs(c)}*"
                power = self.var if k == 1 else f"{self.var}^{k}"
                body = head + power
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = (first_sign if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text
