import itertools

import numpy as np
import pytest

from boolperm.coaction import (
    algebraic_invariance_check,
    averaging_invariance_experiment,
    bsn_invariance_check,
    linear_invariance_check,
)
from boolperm.models import (
    build_classical_iid,
    build_constant,
    build_shift_nonunital,
    build_shift_unital,
    build_zero,
)
from boolperm.probspace import check_boolean_independence, moment
from boolperm.semigroup import build_averaging_rep, build_standard_rep, u_product


def oracle_linear_residual(model, rep, max_degree):
    """Brute force: direct summation over ALL j-tuples, literal products."""
    worst, worst_w = 0.0, ()
    for k in range(1, max_degree + 1):
        for w in itertools.product(range(1, model.n + 1), repeat=k):
            lhs = moment(model, w) * rep.P
            rhs = np.zeros_like(rep.P)
            for j in itertools.product(range(1, rep.n + 1), repeat=k):
                rhs = rhs + moment(model, j) * u_product(rep, j, w)
            r = float(np.abs(lhs - rhs).max())
            if r > worst:
                worst, worst_w = r, w
    return worst, worst_w


def test_linear_invariance_shift_models():
    rep = build_standard_rep(3)
    for build in (build_shift_nonunital, build_shift_unital):
        model, _ = build(3, 6)
        report = linear_invariance_check(model, rep, max_degree=5, tol=1e-10)
        assert report.verdict, (report.worst_word, report.max_residual)


def test_linear_invariance_constant_model():
    report = linear_invariance_check(build_constant(3), build_standard_rep(3), max_degree=4)
    assert report.verdict


def test_linear_invariance_grid_mismatch():
    model, _ = build_shift_nonunital(2, 4)
    with pytest.raises(ValueError):
        linear_invariance_check(model, build_standard_rep(3), 2)


def test_pruned_matches_unpruned_and_oracle():
    model, _ = build_shift_nonunital(2, 5)
    rep = build_standard_rep(2)
    pruned = linear_invariance_check(model, rep, 3, prune=True)
    full = linear_invariance_check(model, rep, 3, prune=False)
    for (w1, r1), (w2, r2) in zip(pruned.residuals, full.residuals):
        assert w1 == w2
        assert abs(r1 - r2) <= 1e-13
    worst, _ = oracle_linear_residual(model, rep, 3)
    assert abs(worst - pruned.max_residual) <= 1e-13


def test_linear_invariance_parallel_jobs_agree():
    model, _ = build_shift_nonunital(2, 5)
    rep = build_standard_rep(2)
    seq = linear_invariance_check(model, rep, 4, jobs=1)
    par = linear_invariance_check(model, rep, 4, jobs=2)
    assert sorted(seq.residuals) == sorted(par.residuals)


def test_classical_iid_fails_in_averaging_rep():
    # frozen by the brute-force oracle: residual exactly 1/8 at (1,2,1,2)
    model = build_classical_iid(3)
    rep = build_averaging_rep(1, 2)
    report = linear_invariance_check(model, rep, max_degree=4, tol=1e-10)
    assert not report.verdict
    assert report.max_residual == pytest.approx(0.125, abs=1e-12)
    assert report.worst_word == (1, 2, 1, 2)
    worst, worst_w = oracle_linear_residual(model, rep, 4)
    assert worst == pytest.approx(report.max_residual, abs=1e-12)


def test_classical_pair_passes_linear_invariance_structurally():
    # for n = 2 every compatibility class is a swap-orbit and exchangeable
    # pairs have class-constant moments, so the condition holds in any rep
    model = build_classical_iid(2)
    report = linear_invariance_check(model, build_standard_rep(2), max_degree=5)
    assert report.max_residual <= 1e-12


def test_standard_rep_is_circulant_blind_to_cyclic_exchangeability():
    # u_{i,j} depends only on (i-j) mod n, so the standard rep cannot
    # separate any cyclically exchangeable model, classical coins included
    rep = build_standard_rep(3)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            shifted_i = i % 3 + 1
            shifted_j = j % 3 + 1
            assert np.abs(rep.u_mat(i, j) - rep.u_mat(shifted_i, shifted_j)).max() <= 1e-15
    model = build_classical_iid(3)
    report = linear_invariance_check(model, rep, max_degree=4)
    assert report.max_residual <= 1e-12


def test_boolean_models_pass_linear_invariance_in_averaging_rep():
    rep = build_averaging_rep(1, 2)
    model, _ = build_shift_nonunital(3, 6)
    assert linear_invariance_check(model, rep, 4).verdict


def test_algebraic_invariance_constant_passes():
    report = algebraic_invariance_check(build_constant(3), build_standard_rep(3), 4, 1e-10)
    assert report.verdict


def test_algebraic_invariance_shift_fails_with_known_residual():
    # degree-2 word (1,1): LHS = phi(x_1^2) P = P with max entry 1/6; the
    # fully cornered sum averages all second moments, giving (1/3) P, so
    # the residual is (1 - 1/3) / 6 = 1/9
    model, _ = build_shift_nonunital(3, 5)
    report = algebraic_invariance_check(model, build_standard_rep(3), 2, 1e-10)
    assert not report.verdict
    assert report.max_residual == pytest.approx(1.0 / 9.0, abs=1e-12)
    assert report.max_residual >= 0.1
    assert len(report.worst_word) == 2


def test_algebraic_term_structure_in_standard_rep():
    # each fully cornered degree-k term equals (1/n^k) P
    rep = build_standard_rep(3)
    for k in (1, 2, 3):
        for j in itertools.product((1, 2, 3), repeat=k):
            for i in itertools.product((1, 2, 3), repeat=k):
                chain = rep.P.copy()
                for a, b in zip(j, i):
                    chain = chain @ rep.u_mat(a, b) @ rep.P
                assert np.abs(chain - rep.P / 3 ** k).max() <= 1e-12


def test_algebraic_pass_implies_linear_pass_on_zoo():
    rep3 = build_standard_rep(3)
    zoo = [build_constant(3), build_zero(3, 2), build_shift_nonunital(3, 5)[0],
           build_shift_unital(3, 5)[0], build_classical_iid(3)]
    for model in zoo:
        alg = algebraic_invariance_check(model, rep3, 3, 1e-10)
        if alg.verdict:
            assert linear_invariance_check(model, rep3, 3, 1e-10).verdict


def test_boolean_pass_implies_linear_pass_on_zoo():
    for n in (2, 3, 4):
        rep = build_standard_rep(n)
        candidates = [build_shift_nonunital(n, n + 2), build_shift_unital(n, n + 2),
                      (build_zero(n, 2), None)]
        for model, E in candidates:
            if check_boolean_independence(model, E, max_len=4, tol=1e-10).verdict:
                assert linear_invariance_check(model, rep, 4, 1e-10).verdict


def test_bsn_invariance():
    assert bsn_invariance_check(build_zero(2, 2), 4).verdict
    model, _ = build_shift_nonunital(3, 5)
    report = bsn_invariance_check(model, 2)
    assert not report.verdict
    assert report.max_residual == pytest.approx(1.0)
    assert report.worst_word == (1, 1)
    const = bsn_invariance_check(build_constant(3), 2)
    assert not const.verdict and const.max_residual >= 0.5


def test_bsn_pass_iff_all_moments_small():
    for model in (build_zero(2, 3), build_shift_nonunital(2, 4)[0]):
        report = bsn_invariance_check(model, 3, tol=1e-10)
        all_small = all(abs(moment(model, w)) <= 1e-10
                        for k in range(1, 4)
                        for w in itertools.product((1, 2), repeat=k))
        assert report.verdict == all_small


def test_averaging_experiment_even_powers():
    n_vars = 33
    model, _ = build_shift_nonunital(n_vars, n_vars + 1)
    table = averaging_invariance_experiment(model, 1, (4, 8, 16, 32), (2, 2, 1, 1, 2, 2))
    assert table.repeat_count == 2
    devs = [r.deviation for r in table.rows]
    assert all(a > b for a, b in zip(devs, devs[1:]))  # strictly decreasing
    for r in table.rows:
        # closed form: 1 - M(M-1)/M^2 = 1/M, moment bound 1
        assert r.deviation == pytest.approx(1.0 / r.M, rel=1e-12)
        assert r.bound_factor == pytest.approx(1.0 / r.M, rel=1e-12)
        assert abs(r.deviation - r.bound_factor * r.moment_bound) <= 0.1 * r.bound_factor
        assert r.rep_residual <= 1e-12
        assert r.identity_residual <= 1e-12
    assert table.verdict


def test_averaging_experiment_m4_factor():
    n_vars = 5
    model, _ = build_shift_nonunital(n_vars, n_vars + 1)
    table = averaging_invariance_experiment(model, 1, (4,), (2, 2, 1, 1, 2, 2))
    assert table.rows[0].bound_factor == pytest.approx(1.0 - (4 * 3) / 16.0)


def test_averaging_experiment_no_repeats():
    n_vars = 9
    model, _ = build_shift_nonunital(n_vars, n_vars + 1)
    table = averaging_invariance_experiment(model, 1, (4, 8), (2, 2, 1, 1))
    assert table.repeat_count == 1
    for r in table.rows:
        assert r.deviation <= 1e-10
        assert r.distinct_fraction == 1.0


def test_averaging_experiment_validation():
    model, _ = build_shift_nonunital(4, 5)
    with pytest.raises(ValueError):
        averaging_invariance_experiment(model, 1, (4,), (3, 1, 3))  # letter > N+1
    with pytest.raises(ValueError):
        averaging_invariance_experiment(model, 1, (8,), (2, 1, 2))  # too few variables
    with pytest.raises(ValueError):
        averaging_invariance_experiment(model, 1, (4,), ())
