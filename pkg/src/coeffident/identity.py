"""The multi-binomial identity and its three evaluation routes.

An instance fixes an integer s >= 0, a vector alpha of d+1 nonnegative
integers with sum 2s+1, and a vector gamma of d+1 rationals.  The claim
under test is

    sum_{j=0}^{s} (-1)**j * C(d + sum_i(alpha_i + gamma_i), j) * S_j
        =  4**s * prod_i C(alpha_i + gamma_i, alpha_i)

where S_j sums over all compositions beta of s - j into d+1 parts:

    S_j = sum_{|beta| = s-j} prod_i C(beta_i + gamma_i, beta_i)
                                   * (2*beta_i + gamma_i + 1)**alpha_i / alpha_i!

The left side is evaluated three independent ways:

* ``lhs_direct``   -- the literal double sum over compositions;
* ``lhs_residue``  -- [t**s] of (1-t)**(d + sum(alpha+gamma)) times the
                      product of per-coordinate w-residue series, letting
                      the Cauchy product do the composition sum;
* ``lhs_product``  -- the reduced product: the same extraction after the
                      series product is collapsed in closed form, leaving
                      one base residue plus even-index corrections
                      weighted by a correction polynomial.

All three must equal ``rhs_closed`` exactly -- Fraction equality, no
tolerances -- on every valid instance.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import ClassVar, Iterable, Iterator, Sequence

from .algebra import Poly, as_rational, binomial
from .residues import (
    base_t_residue,
    correction_t_residue,
    correction_weight,
    w_residue_series,
)
from .series import binomial_series, coefficient_ops, residue

__all__ = [
    "InvalidInstance",
    "IdentityInstance",
    "VerificationReport",
    "BenchRow",
    "compositions",
    "inner_sum",
    "lhs_direct",
    "lhs_residue",
    "lhs_product",
    "rhs_closed",
    "correction_polynomial",
    "verify",
    "verify_poly_gamma",
    "iter_instances",
    "sweep",
    "bench_instance",
    "bench",
]


class InvalidInstance(ValueError):
    """Instance parameters violate the identity's standing hypotheses."""


@dataclass(frozen=True)
class IdentityInstance:
    """One cell of the identity: s plus the alpha and gamma vectors.

    Validation happens at construction: the two vectors must have equal
    positive length, alpha must be nonnegative integers, and sum(alpha)
    must equal 2s+1 (the identity is not claimed outside that
    hypothesis).
    """

    s: int
    alpha: tuple[int, ...]
    gamma: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(
            self, "gamma", tuple(as_rational(g) for g in self.gamma)
        )
        if self.s < 0:
            raise InvalidInstance("s must be >= 0")
        if not self.alpha:
            raise InvalidInstance("alpha needs at least one coordinate")
        if len(self.alpha) != len(self.gamma):
            raise InvalidInstance(
                f"alpha and gamma lengths differ: {len(self.alpha)} vs {len(self.gamma)}"
            )
        if any(a < 0 for a in self.alpha):
            raise InvalidInstance("alpha coordinates must be >= 0")
        if sum(self.alpha) != 2 * self.s + 1:
            raise InvalidInstance(
                f"sum(alpha) = {sum(self.alpha)} but the hypothesis needs "
                f"2s+1 = {2 * self.s + 1}"
            )

    @property
    def d(self) -> int:
        """Number of coordinates minus one."""
        return len(self.alpha) - 1


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative integers summing to n, in
    lexicographic order.  There are C(n + parts - 1, parts - 1) of them."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# direct route


@lru_cache(maxsize=None)
def _coordinate_factors(alpha_i: int, gamma_i: Fraction, limit: int) -> tuple[Fraction, ...]:
    """One coordinate's factor C(b+g, b) (2b+g+1)**a / a! for b = 0..limit."""
    inv_fact = Fraction(1, math.factorial(alpha_i))
    return tuple(
        binomial(gamma_i + b, b) * (2 * b + gamma_i + 1) ** alpha_i * inv_fact
        for b in range(limit + 1)
    )


def _inner_sum_counted(inst: IdentityInstance, j: int) -> tuple[Fraction, int]:
    tables = [
        _coordinate_factors(a, g, inst.s) for a, g in zip(inst.alpha, inst.gamma)
    ]
    total = Fraction(0)
    terms = 0
    for beta in compositions(inst.s - j, len(tables)):
        term = Fraction(1)
        for table, b in zip(tables, beta):
            term *= table[b]
        total += term
        terms += 1
    return total, terms


def inner_sum(inst: IdentityInstance, j: int) -> Fraction:
    """The inner sum S_j: compositions of s-j across the coordinates."""
    if not 0 <= j <= inst.s:
        raise ValueError(f"j={j} outside 0..{inst.s}")
    return _inner_sum_counted(inst, j)[0]


def _lhs_direct_counted(inst: IdentityInstance) -> tuple[Fraction, int]:
    top = inst.d + sum(inst.alpha) + sum(inst.gamma)
    total = Fraction(0)
    terms = 0
    sign = 1
    for j in range(inst.s + 1):
        value, n = _inner_sum_counted(inst, j)
        total += sign * binomial(top, j) * value
        terms += n
        sign = -sign
    return total, terms


def lhs_direct(inst: IdentityInstance) -> Fraction:
    """Left side by literal summation."""
    return _lhs_direct_counted(inst)[0]


# ---------------------------------------------------------------------------
# residue route


def lhs_residue(inst: IdentityInstance) -> Fraction:
    """Left side as one coefficient extraction.

    The alternating j-sum is [t**s] (1-t)**(d + sum(alpha+gamma)) times
    the product of the coordinate series; the Cauchy product performs
    the composition sum implicitly.
    """
    order = inst.s
    exponent = inst.d + sum(inst.alpha) + sum(inst.gamma)
    acc = binomial_series(-1, exponent, order)
    for a, g in zip(inst.alpha, inst.gamma):
        acc = acc * w_residue_series(a, g, order)
    return residue(acc, order)


# ---------------------------------------------------------------------------
# reduced-product route


def correction_polynomial(inst: IdentityInstance) -> Poly:
    """Product of the per-coordinate correction factors, in u = (1-t)/(1+t).

    Each coordinate contributes 1 + sum_k weight_k u**(2k) with
    k <= alpha_i//2, so the product contains only even powers of u and
    has degree at most 2 * sum(alpha_i//2) <= 2s.  Its constant term
    is exactly 1.
    """
    lam = Poly((1,), var="u")
    for a, g in zip(inst.alpha, inst.gamma):
        half = a // 2
        if half == 0:
            continue
        coeffs = [Fraction(0)] * (2 * half + 1)
        coeffs[0] = Fraction(1)
        for k in range(1, half + 1):
            coeffs[2 * k] = correction_weight(a, k, g)
        lam = lam * Poly(coeffs, var="u")
    return lam


def lhs_product(inst: IdentityInstance) -> Fraction:
    """Left side by the reduced product.

    After substituting the closed forms, the (1-t) exponents across all
    factors sum to -1 and the (1+t) exponents to 2s+1, so the extraction
    collapses to scalar residues: the base one (worth 4**s) plus the
    even-index corrections weighted by the correction polynomial.  The
    binomial prefactors come out in front.
    """
    lam = correction_polynomial(inst)
    assert lam.coefficient(0) == 1, "correction polynomial must be monic at u**0"
    assert lam.degree <= 2 * inst.s, "correction degree exceeded 2s"
    assert all(
        lam.coefficient(k) == 0 for k in range(1, lam.degree + 1, 2)
    ), "correction polynomial acquired odd powers"
    total = base_t_residue(inst.s)
    for k in range(2, lam.degree + 1, 2):
        weight = lam.coefficient(k)
        if weight:
            total += weight * correction_t_residue(inst.s, k)
    lead = Fraction(1)
    for a, g in zip(inst.alpha, inst.gamma):
        lead *= binomial(g + a, a)
    return lead * total


def rhs_closed(inst: IdentityInstance) -> Fraction:
    """Right side: 4**s times the product of C(alpha_i + gamma_i, alpha_i)."""
    acc = Fraction(4) ** inst.s
    for a, g in zip(inst.alpha, inst.gamma):
        acc *= binomial(g + a, a)
    return acc


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    """All four route values for one instance, plus timings and costs.

    Equality of the four values is the verdict; timings are wall-clock
    microseconds and purely informational (they are the one part of a
    report allowed to differ between identical runs).
    """

    instance: IdentityInstance
    lhs_direct: Fraction
    lhs_residue: Fraction
    lhs_product: Fraction
    rhs: Fraction
    all_equal: bool
    time_direct_us: int
    time_residue_us: int
    time_product_us: int
    time_rhs_us: int
    direct_terms: int
    residue_ops: int
    product_ops: int

    CSV_FIELDS: ClassVar[tuple[str, ...]] = (
        "s",
        "d",
        "alpha",
        "gamma",
        "lhs_direct",
        "lhs_residue",
        "lhs_product",
        "rhs",
        "all_equal",
        "time_direct_us",
        "time_residue_us",
        "time_product_us",
        "time_rhs_us",
        "direct_terms",
        "residue_ops",
        "product_ops",
    )

    def to_json_dict(self) -> dict:
        return {
            "s": self.instance.s,
            "d": self.instance.d,
            "alpha": list(self.instance.alpha),
            "gamma": [str(g) for g in self.instance.gamma],
            "lhs_direct": str(self.lhs_direct),
            "lhs_residue": str(self.lhs_residue),
            "lhs_product": str(self.lhs_product),
            "rhs": str(self.rhs),
            "all_equal": self.all_equal,
            "time_direct_us": self.time_direct_us,
            "time_residue_us": self.time_residue_us,
            "time_product_us": self.time_product_us,
            "time_rhs_us": self.time_rhs_us,
            "direct_terms": self.direct_terms,
            "residue_ops": self.residue_ops,
            "product_ops": self.product_ops,
        }

    def csv_row(self) -> list[str]:
        return [
            str(self.instance.s),
            str(self.instance.d),
            ",".join(str(a) for a in self.instance.alpha),
            ",".join(str(g) for g in self.instance.gamma),
            str(self.lhs_direct),
            str(self.lhs_residue),
            str(self.lhs_product),
            str(self.rhs),
            "true" if self.all_equal else "false",
            str(self.time_direct_us),
            str(self.time_residue_us),
            str(self.time_product_us),
            str(self.time_rhs_us),
            str(self.direct_terms),
            str(self.residue_ops),
            str(self.product_ops),
        ]


def verify(inst: IdentityInstance) -> VerificationReport:
    """Evaluate all four values with per-route timings and cost counters."""
    t0 = time.perf_counter_ns()
    direct, terms = _lhs_direct_counted(inst)
    t1 = time.perf_counter_ns()
    ops0 = coefficient_ops()
    res = lhs_residue(inst)
    ops1 = coefficient_ops()
    t2 = time.perf_counter_ns()
    prod = lhs_product(inst)
    ops2 = coefficient_ops()
    t3 = time.perf_counter_ns()
    rhs = rhs_closed(inst)
    t4 = time.perf_counter_ns()
    return VerificationReport(
        instance=inst,
        lhs_direct=direct,
        lhs_residue=res,
        lhs_product=prod,
        rhs=rhs,
        all_equal=(direct == res == prod == rhs),
        time_direct_us=(t1 - t0) // 1000,
        time_residue_us=(t2 - t1) // 1000,
        time_product_us=(t3 - t2) // 1000,
        time_rhs_us=(t4 - t3) // 1000,
        direct_terms=terms,
        residue_ops=ops1 - ops0,
        product_ops=ops2 - ops1,
    )


# ---------------------------------------------------------------------------
# polynomial certification in one gamma coordinate


def _as_gamma_poly(value) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly((value,), var="gamma")


def _lhs_direct_symbolic(s: int, alpha: Sequence[int], gammas: Sequence):
    """The literal double sum with ring-generic gamma entries.

    Each gamma may be a Fraction or a Poly; the result lands in whatever
    ring the inputs span.  Used only for certification, so it favors
    clarity over the cached fast path.
    """
    top = len(alpha) - 1 + sum(alpha)
    for g in gammas:
        top = top + g
    total = Fraction(0)
    sign = 1
    for j in range(s + 1):
        inner = Fraction(0)
        for beta in compositions(s - j, len(alpha)):
            term = Fraction(1)
            for b, a, g in zip(beta, alpha, gammas):
                term = (
                    term
                    * binomial(g + b, b)
                    * (2 * b + g + 1) ** a
                    * Fraction(1, math.factorial(a))
                )
            inner = inner + term
        total = total + sign * binomial(top, j) * inner
        sign = -sign
    return total


def _rhs_symbolic(s: int, alpha: Sequence[int], gammas: Sequence):
    acc = Fraction(4) ** s
    for a, g in zip(alpha, gammas):
        acc = acc * binomial(g + a, a)
    return acc


def verify_poly_gamma(
    inst: IdentityInstance, coordinate: int
) -> tuple[Poly, Poly, bool]:
    """Certify the instance polynomially in one gamma coordinate.

    Re-evaluates the direct left side and the closed right side with
    gamma[coordinate] replaced by a polynomial indeterminate (its
    concrete value in the instance is ignored).  Both sides are
    polynomials of bounded degree, so their coefficient-wise equality
    proves the identity for *every* real value of that coordinate.
    Returns (lhs_poly, rhs_poly, equal).
    """
    if not 0 <= coordinate <= inst.d:
        raise ValueError(f"coordinate {coordinate} outside 0..{inst.d}")
    gammas: list = list(inst.gamma)
    gammas[coordinate] = Poly.indeterminate("gamma")
    lhs = _as_gamma_poly(_lhs_direct_symbolic(inst.s, inst.alpha, gammas))
    rhs = _as_gamma_poly(_rhs_symbolic(inst.s, inst.alpha, gammas))
    return lhs, rhs, lhs == rhs


# ---------------------------------------------------------------------------
# sweeping and benchmarking


def iter_instances(
    max_s: int,
    max_d: int,
    gamma_set: Sequence,
    cap: int | None = None,
) -> Iterator[IdentityInstance]:
    """Deterministic grid enumeration.

    Order: s ascending, then d ascending, then alpha in lexicographic
    composition order, then gamma running through the Cartesian power of
    ``gamma_set`` in the given order.  ``cap`` cuts the stream after
    that many instances, so a capped sweep is a prefix of the uncapped
    one.
    """
    if max_s < 0 or max_d < 0:
        raise ValueError("max_s and max_d must be >= 0")
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    gam = tuple(as_rational(g) for g in gamma_set)
    if not gam:
        raise ValueError("gamma_set must be nonempty")
    produced = 0
    for s in range(max_s + 1):
        for d in range(max_d + 1):
            for alpha in compositions(2 * s + 1, d + 1):
                for gamma in itertools.product(gam, repeat=d + 1):
                    if cap is not None and produced >= cap:
                        return
                    produced += 1
                    yield IdentityInstance(s=s, alpha=alpha, gamma=gamma)


def sweep(
    max_s: int,
    max_d: int,
    gamma_set: Sequence,
    cap: int | None = None,
    jobs: int = 1,
) -> Iterator[VerificationReport]:
    """``verify`` over the instance grid, yielded in enumeration order.

    With jobs > 1 the instances are verified in worker processes;
    ordered imap keeps the output stream identical to the serial one.
    """
    instances = iter_instances(max_s, max_d, gamma_set, cap)
    if jobs <= 1:
        for inst in instances:
            yield verify(inst)
        return
    with multiprocessing.Pool(processes=jobs) as pool:
        yield from pool.imap(verify, instances, chunksize=32)


@dataclass(frozen=True)
class BenchRow:
    """Cost comparison of the direct and residue routes on one instance."""

    instance: IdentityInstance
    lhs_direct: Fraction
    lhs_residue: Fraction
    routes_equal: bool
    direct_terms: int
    residue_ops: int
    time_direct_us: int
    time_residue_us: int

    CSV_FIELDS: ClassVar[tuple[str, ...]] = (
        "s",
        "d",
        "alpha",
        "gamma",
        "lhs_direct",
        "lhs_residue",
        "routes_equal",
        "direct_terms",
        "residue_ops",
        "time_direct_us",
        "time_residue_us",
    )

    def to_json_dict(self) -> dict:
        return {
            "s": self.instance.s,
            "d": self.instance.d,
            "alpha": list(self.instance.alpha),
            "gamma": [str(g) for g in self.instance.gamma],
            "lhs_direct": str(self.lhs_direct),
            "lhs_residue": str(self.lhs_residue),
            "routes_equal": self.routes_equal,
            "direct_terms": self.direct_terms,
            "residue_ops": self.residue_ops,
            "time_direct_us": self.time_direct_us,
            "time_residue_us": self.time_residue_us,
        }

    def csv_row(self) -> list[str]:
        return [
            str(self.instance.s),
            str(self.instance.d),
            ",".join(str(a) for a in self.instance.alpha),
            ",".join(str(g) for g in self.instance.gamma),
            str(self.lhs_direct),
            str(self.lhs_residue),
            "true" if self.routes_equal else "false",
            str(self.direct_terms),
            str(self.residue_ops),
            str(self.time_direct_us),
            str(self.time_residue_us),
        ]


def bench_instance(inst: IdentityInstance) -> BenchRow:
    """Time and count the two summation-flavored routes on one instance."""
    t0 = time.perf_counter_ns()
    direct, terms = _lhs_direct_counted(inst)
    t1 = time.perf_counter_ns()
    ops0 = coefficient_ops()
    res = lhs_residue(inst)
    ops1 = coefficient_ops()
    t2 = time.perf_counter_ns()
    return BenchRow(
        instance=inst,
        lhs_direct=direct,
        lhs_residue=res,
        routes_equal=(direct == res),
        direct_terms=terms,
        residue_ops=ops1 - ops0,
        time_direct_us=(t1 - t0) // 1000,
        time_residue_us=(t2 - t1) // 1000,
    )


def bench(
    max_s: int,
    max_d: int,
    gamma_set: Sequence,
    cap: int | None = None,
    jobs: int = 1,
) -> Iterator[BenchRow]:
    """``bench_instance`` over the instance grid, in enumeration order
    (which is already sorted by (s, d))."""
    instances = iter_instances(max_s, max_d, gamma_set, cap)
    if jobs <= 1:
        for inst in instances:
            yield bench_instance(inst)
        return
    with multiprocessing.Pool(processes=jobs) as pool:
        yield from pool.imap(bench_instance, instances, chunksize=32)
