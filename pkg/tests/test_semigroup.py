import itertools

import numpy as np
import pytest

from boolperm.partitions import equivalent
from boolperm.semigroup import (
    build_averaging_rep,
    build_standard_rep,
    check_relations,
    comultiplication_check,
    sum_identity_check,
    u_product,
)


def maxabs(a):
    return float(np.abs(a).max())


def test_standard_rep_shape_and_rejection():
    rep = build_standard_rep(3)
    assert rep.dim == 6
    assert rep.u.shape == (3, 3, 6, 6)
    with pytest.raises(ValueError):
        build_standard_rep(1)


@pytest.mark.parametrize("n", range(2, 9))
def test_standard_rep_relations(n):
    rep = build_standard_rep(n)
    report = check_relations(rep, tol=1e-12)
    assert report.verdict, report.residuals
    assert report.max_residual <= 1e-12


def test_corner_compression_is_one_over_n():
    # P u_{1,1} P = (1/3) P at n = 3, and (1/n) P for every cell in general
    rep = build_standard_rep(3)
    assert maxabs(u_product(rep, (1,), (1,)) - rep.P / 3) <= 1e-12
    for n in (2, 4):
        rep = build_standard_rep(n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                assert maxabs(u_product(rep, (i,), (j,)) - rep.P / n) <= 1e-12


def test_invariant_projection_law_every_column():
    for n in (2, 3, 4):
        rep = build_standard_rep(n)
        for i in range(n):
            total = sum(rep.u[k, i] for k in range(n))
            assert maxabs(total @ rep.P - rep.P) <= 1e-12


def test_check_relations_flags_broken_idempotency():
    rep = build_standard_rep(3)
    bad = rep.u[0, 0].copy()
    bad[0, 0] += 0.05
    broken = rep.replace_generator(1, 1, bad)
    report = check_relations(broken, tol=1e-12)
    assert not report.verdict
    assert report.residuals["u_idempotent"] > 1e-12


def test_check_relations_measures_rounding_at_tol_zero():
    report = check_relations(build_standard_rep(2), tol=0.0)
    assert report.max_residual < 1e-15  # machine-rounding scale, recorded


def test_u_product_basics():
    rep = build_standard_rep(3)
    assert maxabs(u_product(rep, (), ()) - rep.P) == 0.0
    with pytest.raises(ValueError):
        u_product(rep, (1, 2), (1,))
    with pytest.raises(IndexError):
        u_product(rep, (4,), (1,))


def test_u_product_matches_literal_fold():
    rep = build_standard_rep(2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        k = rng.integers(1, 6)
        J1 = tuple(rng.integers(1, 3, size=k))
        J2 = tuple(rng.integers(1, 3, size=k))
        expected = rep.P.copy()
        for a, b in zip(J1, J2):
            expected = expected @ rep.u_mat(a, b)
        expected = expected @ rep.P
        assert maxabs(u_product(rep, J1, J2) - expected) <= 1e-14


def test_vanishing_for_inequivalent_pairs_small():
    rep = build_standard_rep(3)
    for k in (2, 3):
        for J1 in itertools.product((1, 2, 3), repeat=k):
            for J2 in itertools.product((1, 2, 3), repeat=k):
                if not equivalent(J1, J2):
                    assert maxabs(u_product(rep, J1, J2)) <= 1e-12


def test_sum_identity_examples():
    rep2 = build_standard_rep(2)
    rpt = sum_identity_check(rep2, (1, 2, 1), tol=1e-10)
    assert rpt.verdict and rpt.residual <= 1e-10
    rep3 = build_standard_rep(3)
    assert sum_identity_check(rep3, (1,), tol=1e-10).verdict
    # both index orders collapse in the standard rep
    for i in (1, 2, 3):
        rpt = sum_identity_check(rep3, (i,), tol=1e-12)
        assert rpt.residual_first_index <= 1e-12
        assert rpt.residual_second_index <= 1e-12


def test_sum_identity_matches_direct_summation():
    # oracle: brute-force sum over all j-tuples, literal products
    rep = build_standard_rep(2)
    for I_seq in (((1,)), (1, 2), (2, 1, 1)):
        I_seq = tuple(I_seq) if isinstance(I_seq, tuple) else (I_seq,)
        k = len(I_seq)
        second = np.zeros_like(rep.P)
        first = np.zeros_like(rep.P)
        for js in itertools.product((1, 2), repeat=k):
            second = second + u_product(rep, I_seq, js)
            first = first + u_product(rep, js, I_seq)
        rpt = sum_identity_check(rep, I_seq, tol=1e-10)
        assert abs(maxabs(second - rep.P) - rpt.residual_second_index) <= 1e-13
        assert abs(maxabs(first - rep.P) - rpt.residual_first_index) <= 1e-13


@pytest.mark.parametrize("n", (2, 3))
def test_comultiplication_preserves_relations(n):
    report = comultiplication_check(build_standard_rep(n), tol=1e-10)
    assert report.verdict, report.residuals


def test_comultiplication_flags_corruption():
    rep = build_standard_rep(2)
    bad = rep.u[0, 0].copy()
    bad[0, 1] += 0.2
    report = comultiplication_check(rep.replace_generator(1, 1, bad), tol=1e-10)
    assert not report.verdict


def test_averaging_rep_structure():
    N, M = 1, 3
    rep = build_averaging_rep(N, M)
    assert rep.n == M + N and rep.dim == 2 * M
    assert check_relations(rep, tol=1e-10).verdict
    # delta block: u_{i,j} = delta_{ij} P when min(i,j) <= N
    assert maxabs(rep.u_mat(1, 1) - rep.P) == 0.0
    assert maxabs(rep.u_mat(1, 2)) == 0.0
    assert maxabs(rep.u_mat(3, 1)) == 0.0
    # inner block: P u_{i,j} P = (1/M) P when min(i,j) > N
    for i in range(N + 1, M + N + 1):
        for j in range(N + 1, M + N + 1):
            assert maxabs(u_product(rep, (i,), (j,)) - rep.P / M) <= 1e-12
    with pytest.raises(ValueError):
        build_averaging_rep(0, 3)
    with pytest.raises(ValueError):
        build_averaging_rep(1, 1)
