import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolperm.ncpoly import Polynomial, Word, evaluate, word_runs, words_up_to_degree


class TinyModel:
    """Minimal stand-in with .x and .dim, independent of the model zoo."""

    def __init__(self, mats):
        self.x = [np.asarray(m, dtype=complex) for m in mats]
        self.dim = self.x[0].shape[0]


def shift_3x3():
    # explicit truncation to basis e_0, e_1, e_2: x_i e_0 = e_i, x_i e_i = e_0
    x1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
    x2 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)
    return TinyModel([x1, x2])


def test_word_runs_examples():
    assert word_runs((1, 1, 2)) == [(1, 2), (2, 1)]
    assert word_runs(()) == []
    assert word_runs((1, 2, 1)) == [(1, 1), (2, 1), (1, 1)]


def test_word_runs_reconstructs():
    for letters in itertools.product((1, 2, 3), repeat=4):
        runs = word_runs(letters)
        rebuilt = tuple(itertools.chain.from_iterable([v] * t for v, t in runs))
        assert rebuilt == letters
        assert all(a != b for (a, _), (b, _) in zip(runs, runs[1:]))


def test_word_validation():
    with pytest.raises(ValueError):
        Word((0,), 2)
    with pytest.raises(ValueError):
        Word((3,), 2)
    assert len(Word((), 2)) == 0


def test_evaluate_empty_word_is_identity():
    model = shift_3x3()
    out = evaluate(Word((), 2), model)
    assert np.array_equal(out, np.eye(3))


def test_evaluate_square_by_direct_multiplication():
    # oracle: multiply the two explicit 3x3 matrices by hand
    model = shift_3x3()
    expected = model.x[0] @ model.x[0]
    out = evaluate(Word((1, 1), 2), model)
    assert np.array_equal(out, expected)
    assert out[0, 0] == 1.0


def test_evaluate_equal_matrices_substitution():
    model = TinyModel([shift_3x3().x[0], shift_3x3().x[0]])
    assert np.array_equal(evaluate(Word((1, 2), 2), model), evaluate(Word((1, 1), 2), model))


def test_evaluate_errors():
    model = shift_3x3()
    with pytest.raises(IndexError):
        evaluate(Word((3,), 3), model)  # valid word, but no third matrix
    bad = TinyModel([np.eye(3), np.eye(2)])
    bad.dim = 3
    with pytest.raises(ValueError):
        evaluate(Word((2,), 2), bad)


def test_evaluate_is_monoid_homomorphism():
    rng = np.random.default_rng(7)
    mats = [rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3)]
    mats = [m + m.conj().T for m in mats]
    model = TinyModel(mats)
    for lv in range(3):
        for lw in range(3):
            for v in itertools.product((1, 2, 3), repeat=lv):
                for w in itertools.product((1, 2, 3), repeat=lw):
                    lhs = evaluate(Word(v, 3) * Word(w, 3), model)
                    rhs = evaluate(Word(v, 3), model) @ evaluate(Word(w, 3), model)
                    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


@given(st.lists(st.integers(1, 3), max_size=4), st.lists(st.integers(1, 3), max_size=4),
       st.lists(st.integers(1, 3), max_size=4))
@settings(max_examples=200, deadline=None)
def test_concatenation_associative_with_identity(a, b, c):
    wa, wb, wc = (Word(tuple(t), 3) for t in (a, b, c))
    assert ((wa * wb) * wc).letters == (wa * (wb * wc)).letters
    e = Word((), 3)
    assert (e * wa).letters == wa.letters == (wa * e).letters


def test_words_up_to_degree_examples():
    ws = words_up_to_degree(2, 1)
    assert [w.letters for w in ws] == [(), (1,), (2,)]
    assert len(words_up_to_degree(2, 2)) == 7  # 1 + 2 + 4
    ws1 = words_up_to_degree(1, 3)
    assert [w.letters for w in ws1] == [(), (1,), (1, 1), (1, 1, 1)]


def test_words_up_to_degree_counts_and_uniqueness():
    for n in (1, 2, 3):
        for d in range(4):
            ws = words_up_to_degree(n, d)
            assert len(ws) == sum(n ** k for k in range(d + 1))
            assert len({w.letters for w in ws}) == len(ws)


def test_polynomial_arithmetic():
    p = Polynomial.monomial((1,), 2) + Polynomial.monomial((2,), 2, 2.0)
    q = Polynomial.monomial((1,), 2)
    prod = p * q
    assert prod.terms[Word((1, 1), 2)] == 1.0
    assert prod.terms[Word((2, 1), 2)] == 2.0
    assert (p - p) == Polynomial.zero(2)
    # near-zero coefficients are dropped after arithmetic
    tiny = p + Polynomial.monomial((1,), 2, -1.0 + 1e-16)
    assert Word((1,), 2) not in tiny.terms


def test_polynomial_evaluate_distributes():
    model = shift_3x3()
    p = Polynomial.monomial((1,), 2, 0.5) + Polynomial.monomial((2, 2), 2, -1.0)
    expected = 0.5 * model.x[0] - model.x[1] @ model.x[1]
    assert np.abs(p.evaluate(model) - expected).max() == 0.0
