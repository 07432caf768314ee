"""Closed forms for the residues of the exponential core.

Write f = exp(-w) - t*exp(w) and g = exp(-w) + t*exp(w).  Since f' = -g
and g' = -f (derivatives in w), repeated differentiation of f**(-c-1)
stays inside the span of products f**a g**b, and the w**alpha coefficient
of f**(-c-1) -- a power series in t -- acquires a closed description:

    [w**alpha] f**(-c-1)
        = (1-t)**(-c-alpha-1) * (1+t)**alpha
          * sum_k weight_k(c) * ((1-t)/(1+t))**(2k)

where weight_k = (row k of the derivative table) / alpha!; the k = 0
weight is the binomial C(alpha + c, alpha), so for alpha <= 1 the sum
is that binomial alone.

``derivative_table`` carries the coefficient rows of the derivatives
(polynomials in the exponent parameter with integer coefficients, built
by a two-term recurrence), ``w_residue_closed`` assembles the display
above, and ``w_residue_series`` is the same object computed the honest
way, as the term-by-term sum

    sum_b C(b + c, b) * (2b + c + 1)**alpha / alpha! * t**b.

``base_t_residue`` and ``correction_t_residue`` are the two scalar
t-extractions the reduced-product route of the identity engine needs:
the base one always equals 4**s, and the corrections vanish exactly at
even correction index (the coefficient vector of the underlying
polynomial is palindromic with sign (-1)**(k-1), killing the middle
coefficient only when that sign is -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly, as_rational
from .series import TSeries, binomial_series, residue, _OPS

__all__ = [
    "DerivativeTable",
    "derivative_table",
    "correction_weight",
    "w_residue_series",
    "w_residue_closed",
    "base_t_residue",
    "correction_t_residue",
]


@dataclass(frozen=True)
class DerivativeTable:
    """Coefficient rows of the alpha-th w-derivative of f**(-c-1).

    The derivative equals

        sum_{k=0}^{alpha//2} entries[k](c) * f**(-c-1-alpha+2k) * g**(alpha-2k)

    with f, g as in the module docstring.  entries[0] is the rising
    factorial (c+1)(c+2)...(c+alpha); every row is a polynomial in c
    with integer coefficients.
    """

    alpha: int
    entries: tuple[Poly, ...]

    def weight(self, k: int, value) -> Fraction:
        """entries[k] evaluated at a rational, normalized by alpha!."""
        return self.entries[k](as_rational(value)) / math.factorial(self.alpha)

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "entries": [[str(c) for c in e.coeffs] for e in self.entries],
        }


@lru_cache(maxsize=None)
def derivative_table(alpha: int) -> DerivativeTable:
    """Build the coefficient rows for the alpha-th derivative.

    One differentiation step maps row k of level alpha to

        (c + 1 + alpha - 2k) * row_k  -  (alpha - 2k + 2) * row_{k-1}

    at level alpha + 1 (the first term from differentiating the f-power,
    the second from g' = -f turning a g into an f and bumping k).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha == 0:
        return DerivativeTable(0, (Poly((1,), var="gamma"),))
    prev = derivative_table(alpha - 1)
    a = alpha - 1
    c = Poly.indeterminate("gamma")
    entries = []
    for k in range(alpha // 2 + 1):
        acc = Poly((), var="gamma")
        if k < len(prev.entries):
            acc = acc + prev.entries[k] * (c + (1 + a - 2 * k))
        if 1 <= k and k - 1 < len(prev.entries):
            acc = acc - prev.entries[k - 1] * (a - 2 * k + 2)
        entries.append(acc)
    return DerivativeTable(alpha, tuple(entries))


def correction_weight(alpha: int, k: int, gamma) -> Fraction:
    """The k-th correction weight: entries[k](gamma) / alpha!.

    Defined for 1 <= k <= alpha//2 (k = 0 is the leading row, which is
    absorbed into the binomial prefactor instead).
    """
    if not 1 <= k <= alpha // 2:
        raise ValueError(f"k={k} outside 1..{alpha // 2} for alpha={alpha}")
    return derivative_table(alpha).weight(k, gamma)


def w_residue_series(alpha: int, gamma, order: int) -> TSeries:
    """[w**alpha] of the exponential core, as a t-series, by direct sum.

    The b-th coefficient is C(b + gamma, b) * (2b + gamma + 1)**alpha / alpha!.
    Costs O(order * alpha) multiplications; deliberately uncached so
    callers' cost reports are reproducible.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    g = as_rational(gamma)
    inv_fact = Fraction(1, math.factorial(alpha))
    binom = Fraction(1)
    coeffs = []
    for b in range(order + 1):
        coeffs.append(binom * (2 * b + g + 1) ** alpha * inv_fact)
        binom = binom * (g + b + 1) / (b + 1)
    _OPS.count += (order + 1) * (alpha + 4)
    return TSeries(coeffs, order)


def w_residue_closed(alpha: int, gamma, order: int) -> TSeries:
    """Same series as ``w_residue_series``, via the derivative table:

        (1-t)**(-gamma-alpha-1) * (1+t)**alpha
            * sum_k weight_k * ((1-t)/(1+t))**(2k)

    with weight_k = entries[k](gamma) / alpha!.  The k = 0 term carries
    the binomial C(alpha + gamma, alpha); keeping the prefactor inside
    the sum (rather than dividing it out) keeps the form valid even at
    the negative integers gamma where that binomial vanishes.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    g = as_rational(gamma)
    table = derivative_table(alpha)
    base = binomial_series(-1, -g - alpha - 1, order) * binomial_series(
        1, alpha, order
    )
    bracket = TSeries.constant(table.weight(0, g), order)
    if alpha >= 2:
        ratio_sq = (
            binomial_series(-1, 1, order) * binomial_series(1, -1, order)
        ) ** 2
        upow = TSeries.one(order)
        for k in range(1, alpha // 2 + 1):
            upow = upow * ratio_sq
            bracket = bracket + upow.scale(table.weight(k, g))
    return base * bracket


def base_t_residue(s: int) -> Fraction:
    """[t**s] (1-t)**(-1) (1+t)**(2s+1); equals 4**s.

    This is the sum of the first s+1 binomials C(2s+1, j), which is half
    of 2**(2s+1) by symmetry of the binomial row.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    ser = binomial_series(-1, -1, s) * binomial_series(1, 2 * s + 1, s)
    return residue(ser, s)


def correction_t_residue(s: int, k: int) -> Fraction:
    """[t**s] (1-t)**(k-1) (1+t)**(2s-k+1), for 1 <= k <= 2s.

    The polynomial has degree 2s and palindromic coefficients up to the
    sign (-1)**(k-1), so the middle coefficient extracted here vanishes
    exactly for even k.  Odd k gives a genuinely nonzero value (k = 1
    yields the central binomial C(2s, s)); the product route never asks
    for odd k because its correction polynomial is even.
    """
    if not 1 <= k <= 2 * s:
        raise ValueError(f"k={k} outside 1..{2 * s} for s={s}")
    ser = binomial_series(-1, k - 1, s) * binomial_series(1, 2 * s - k + 1, s)
    return residue(ser, s)
