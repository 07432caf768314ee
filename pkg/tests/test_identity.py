import itertools
import math
import random
from fractions import Fraction as F

import pytest

from coeffident.algebra import Poly, binomial
from coeffident.identity import (
    IdentityInstance,
    InvalidInstance,
    bench_instance,
    compositions,
    correction_polynomial,
    inner_sum,
    iter_instances,
    lhs_direct,
    lhs_product,
    lhs_residue,
    rhs_closed,
    sweep,
    verify,
    verify_poly_gamma,
)


# --- independent brute-force oracle (kept deliberately naive) ----------------


def oracle_compositions(n, parts):
    if parts == 1:
        return [(n,)]
    out = []
    for first in range(n + 1):
        for rest in oracle_compositions(n - first, parts - 1):
            out.append((first,) + rest)
    return out


def oracle_lhs(s, alpha, gamma):
    d = len(alpha) - 1
    top = d + sum(alpha) + sum(gamma)
    total = F(0)
    for j in range(s + 1):
        inner = F(0)
        for beta in oracle_compositions(s - j, d + 1):
            term = F(1)
            for b, a, g in zip(beta, alpha, gamma):
                term *= binomial(g + b, b) * (2 * b + g + 1) ** a
                term /= math.factorial(a)
            inner += term
        total += (-1) ** j * binomial(top, j) * inner
    return total


def oracle_rhs(s, alpha, gamma):
    out = F(4) ** s
    for a, g in zip(alpha, gamma):
        out *= binomial(g + a, a)
    return out


# --- instances -----------------------------------------------------------------


def test_instance_validation():
    inst = IdentityInstance(s=1, alpha=(1, 2), gamma=(F(0), F(0)))
    assert inst.d == 1
    with pytest.raises(InvalidInstance, match="2s\\+1"):
        IdentityInstance(s=1, alpha=(1, 1), gamma=(F(0), F(0)))
    with pytest.raises(InvalidInstance):
        IdentityInstance(s=-1, alpha=(1,), gamma=(F(0),))
    with pytest.raises(InvalidInstance):
        IdentityInstance(s=0, alpha=(1, 0), gamma=(F(0),))
    with pytest.raises(InvalidInstance):
        IdentityInstance(s=0, alpha=(), gamma=())
    with pytest.raises(InvalidInstance):
        IdentityInstance(s=1, alpha=(4, -1), gamma=(F(0), F(0)))
    with pytest.raises(TypeError):
        IdentityInstance(s=0, alpha=(1,), gamma=(0.5,))


def test_instance_accepts_zero_coordinates():
    inst = IdentityInstance(s=0, alpha=(1, 0, 0), gamma=(F(1), F(2), F(3)))
    assert inst.d == 2
    assert verify(inst).all_equal
    assert rhs_closed(inst) == 2


# --- compositions ----------------------------------------------------------------


def test_compositions_examples():
    assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(0, 3)) == [(0, 0, 0)]
    assert sum(1 for _ in compositions(5, 4)) == 56


def test_compositions_are_lexicographic_and_complete():
    seen = list(compositions(4, 3))
    assert seen == sorted(seen)
    assert len(set(seen)) == len(seen) == math.comb(4 + 2, 2)
    assert all(sum(c) == 4 for c in seen)


def test_compositions_validation():
    with pytest.raises(ValueError):
        list(compositions(-1, 2))
    with pytest.raises(ValueError):
        list(compositions(2, 0))


# --- the four routes ----------------------------------------------------------------


SPOT = IdentityInstance(s=1, alpha=(1, 2), gamma=(F(0), F(0)))


def test_inner_sum_examples():
    assert inner_sum(SPOT, 0) == 6
    assert inner_sum(SPOT, 1) == F(1, 2)
    with pytest.raises(ValueError):
        inner_sum(SPOT, 2)


def test_inner_sum_at_j_equals_s():
    # single composition (0,...,0)
    inst = IdentityInstance(s=2, alpha=(2, 3), gamma=(F(1, 2), F(3)))
    expected = F(1)
    for a, g in zip(inst.alpha, inst.gamma):
        expected *= (g + 1) ** a / F(math.factorial(a))
    assert inner_sum(inst, 2) == expected


def test_lhs_direct_examples():
    assert lhs_direct(IdentityInstance(0, (1,), (F(0),))) == 1
    assert lhs_direct(SPOT) == 4
    assert lhs_direct(IdentityInstance(1, (3,), (F(0),))) == 4


def test_rhs_closed_examples():
    assert rhs_closed(IdentityInstance(0, (1,), (F(0),))) == 1
    assert rhs_closed(SPOT) == 4
    assert rhs_closed(IdentityInstance(0, (1,), (F(1, 2),))) == F(3, 2)


def test_lhs_residue_examples():
    assert lhs_residue(IdentityInstance(0, (1,), (F(0),))) == 1
    assert lhs_residue(IdentityInstance(1, (3,), (F(0),))) == 4
    assert lhs_residue(SPOT) == 4


def test_lhs_product_trivial_when_alphas_small():
    # all alpha_i <= 1: the correction polynomial is 1
    inst = IdentityInstance(s=1, alpha=(1, 1, 1), gamma=(F(1, 2), F(0), F(2)))
    assert correction_polynomial(inst) == Poly([1], var="u")
    assert lhs_product(inst) == rhs_closed(inst)


def test_lhs_product_with_corrections():
    inst = IdentityInstance(1, (3,), (F(0),))
    lam = correction_polynomial(inst)
    assert lam == Poly([1, 0, F(-5, 6)], var="u")
    assert lhs_product(inst) == 4


def test_correction_polynomial_structure():
    inst = IdentityInstance(s=3, alpha=(4, 3), gamma=(F(1, 2), F(2)))
    lam = correction_polynomial(inst)
    assert lam.coefficient(0) == 1
    assert lam.degree <= 2 * inst.s
    assert all(lam.coefficient(k) == 0 for k in range(1, lam.degree + 1, 2))


def test_regression_instance():
    inst = IdentityInstance(s=2, alpha=(2, 3), gamma=(F(1), F(0)))
    report = verify(inst)
    assert report.all_equal
    assert report.lhs_direct == 48
    assert report.lhs_residue == 48
    assert report.lhs_product == 48
    assert report.rhs == 48


def test_rational_gamma_stress_instance():
    inst = IdentityInstance(s=2, alpha=(1, 2, 2), gamma=(F(1, 2), F(3, 7), F(2)))
    report = verify(inst)
    assert report.all_equal
    assert report.rhs == F(12240, 49)


def test_verify_report_metadata():
    report = verify(SPOT)
    assert report.instance is SPOT
    assert report.all_equal
    assert report.direct_terms == 3  # compositions of 1 and of 0 into 2 parts
    assert report.residue_ops > 0
    assert report.product_ops > 0
    assert all(
        t >= 0
        for t in (
            report.time_direct_us,
            report.time_residue_us,
            report.time_product_us,
            report.time_rhs_us,
        )
    )


def test_report_serialization_round_trip():
    report = verify(SPOT)
    d = report.to_json_dict()
    assert d["s"] == 1 and d["d"] == 1
    assert d["alpha"] == [1, 2]
    assert d["gamma"] == ["0", "0"]
    assert d["lhs_direct"] == d["rhs"] == "4"
    assert d["all_equal"] is True
    row = report.csv_row()
    assert len(row) == len(report.CSV_FIELDS)
    assert row[:4] == ["1", "1", "1,2", "0,0"]


# --- oracle cross-checks -----------------------------------------------------------


def test_routes_match_oracle_on_random_instances():
    rng = random.Random(20240817)
    pool = [F(0), F(1), F(2), F(1, 2), F(-1, 2), F(3, 7), F(5), F(-2, 3)]
    for _ in range(60):
        s = rng.randrange(0, 3)
        d = rng.randrange(0, 3)
        cuts = sorted(rng.randrange(0, 2 * s + 2) for _ in range(d))
        alpha = tuple(
            b - a for a, b in zip((0, *cuts), (*cuts, 2 * s + 1))
        )
        gamma = tuple(rng.choice(pool) for _ in range(d + 1))
        inst = IdentityInstance(s=s, alpha=alpha, gamma=gamma)
        expected = oracle_lhs(s, alpha, gamma)
        assert lhs_direct(inst) == expected
        assert lhs_residue(inst) == expected
        assert lhs_product(inst) == expected
        assert rhs_closed(inst) == oracle_rhs(s, alpha, gamma) == expected


# --- polynomial certification ---------------------------------------------------------


def test_verify_poly_gamma_simplest():
    inst = IdentityInstance(0, (1,), (F(0),))
    lhs, rhs, equal = verify_poly_gamma(inst, 0)
    assert equal
    assert lhs == rhs == Poly([1, 1])  # gamma + 1


def test_verify_poly_gamma_spot_instance():
    lhs, rhs, equal = verify_poly_gamma(SPOT, 1)
    assert equal
    assert rhs == Poly([4, 6, 2])  # 4*C(g+2,2) = 2(g+1)(g+2)


def test_verify_poly_gamma_coordinate_range():
    with pytest.raises(ValueError):
        verify_poly_gamma(SPOT, 2)
    with pytest.raises(ValueError):
        verify_poly_gamma(SPOT, -1)


def test_poly_gamma_specialization_coherence():
    # evaluating the certified polynomials at rational points reproduces
    # the pointwise routes
    inst = IdentityInstance(s=1, alpha=(2, 1), gamma=(F(1, 2), F(2)))
    for i in range(2):
        lhs, rhs, equal = verify_poly_gamma(inst, i)
        assert equal
        for value in (F(0), F(1), F(-1, 2), F(7, 3)):
            gammas = list(inst.gamma)
            gammas[i] = value
            pinned = IdentityInstance(s=inst.s, alpha=inst.alpha, gamma=tuple(gammas))
            assert lhs(value) == lhs_direct(pinned)
            assert rhs(value) == rhs_closed(pinned)


# --- enumeration, sweep, bench -----------------------------------------------------------


def test_iter_instances_order_and_counts():
    insts = list(iter_instances(1, 0, (F(0),)))
    assert [(i.s, i.alpha) for i in insts] == [(0, (1,)), (1, (3,))]
    insts = list(iter_instances(1, 1, (F(0),)))
    alphas = [i.alpha for i in insts]
    assert alphas == [
        (1,),
        (0, 1),
        (1, 0),
        (3,),
        (0, 3),
        (1, 2),
        (2, 1),
        (3, 0),
    ]


def test_iter_instances_gamma_cartesian_order():
    insts = list(iter_instances(0, 1, (F(0), F(1))))
    # d=0 first: one alpha, two gammas; then d=1: two alphas, four gammas each
    assert [tuple(i.gamma) for i in insts[:2]] == [(F(0),), (F(1),)]
    assert [tuple(i.gamma) for i in insts[2:6]] == [
        (F(0), F(0)),
        (F(0), F(1)),
        (F(1), F(0)),
        (F(1), F(1)),
    ]


def test_iter_instances_cap_is_prefix():
    full = list(iter_instances(2, 2, (F(0), F(1))))
    capped = list(iter_instances(2, 2, (F(0), F(1)), cap=17))
    assert capped == full[:17]


def test_iter_instances_validation():
    with pytest.raises(ValueError):
        list(iter_instances(1, 1, (F(0),), cap=0))
    with pytest.raises(ValueError):
        list(iter_instances(1, 1, ()))
    with pytest.raises(ValueError):
        list(iter_instances(-1, 0, (F(0),)))


def test_sweep_serial():
    reports = list(sweep(1, 1, (F(0), F(1)), cap=10))
    assert len(reports) == 10
    assert all(r.all_equal for r in reports)


def test_sweep_parallel_matches_serial():
    serial = list(sweep(1, 1, (F(0), F(1, 2))))
    parallel = list(sweep(1, 1, (F(0), F(1, 2)), jobs=2))
    stripped = lambda r: (r.instance, r.lhs_direct, r.lhs_residue, r.lhs_product,
                          r.rhs, r.all_equal, r.direct_terms, r.residue_ops,
                          r.product_ops)
    assert [stripped(r) for r in serial] == [stripped(r) for r in parallel]


def test_bench_instance_counters():
    for s, d in [(0, 0), (1, 1), (2, 2), (3, 1)]:
        alpha = (2 * s + 1,) + (0,) * d
        inst = IdentityInstance(s=s, alpha=alpha, gamma=(F(1),) * (d + 1))
        row = bench_instance(inst)
        assert row.routes_equal
        expected_terms = sum(math.comb(s - j + d, d) for j in range(s + 1))
        assert row.direct_terms == expected_terms
        assert expected_terms == math.comb(s + d + 1, d + 1)  # hockey stick


def test_bench_row_serialization():
    row = bench_instance(SPOT)
    d = row.to_json_dict()
    assert d["routes_equal"] is True
    assert len(row.csv_row()) == len(row.CSV_FIELDS)
