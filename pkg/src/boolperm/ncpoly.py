"""Noncommutative words and polynomials in n indeterminants.

A word is a finite sequence of generator indices (1-based), standing for
the monomial X_{i_1}...X_{i_k}; the empty word is the monomial 1.
Polynomials are finitely supported complex combinations of words with
free-algebra (concatenation) multiplication.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

# Coefficients below this magnitude are dropped after polynomial arithmetic.
COEFF_EPS = 1e-14


@dataclass(frozen=True)
class Word:
    """A monomial X_{i_1}...X_{i_k} over n indeterminants, letters 1-based."""

    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one indeterminant, got n={self.n}")
        for a in self.letters:
            if not 1 <= a <= self.n:
                raise ValueError(f"letter {a} outside [1, {self.n}]")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.n != other.n:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.letters + other.letters, self.n)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)}, n={self.n})"


def word_runs(w: Word | tuple[int, ...]) -> list[tuple[int, int]]:
    """Maximal constant runs of a word, as (index, run length) pairs in order."""
    letters = w.letters if isinstance(w, Word) else tuple(w)
    runs: list[tuple[int, int]] = []
    for a in letters:
        if runs and runs[-1][0] == a:
            runs[-1] = (a, runs[-1][1] + 1)
        else:
            runs.append((a, 1))
    return runs


def evaluate(w: Word, model) -> np.ndarray:
    """Substitute model matrices into a word: the ordered product x_{i_1}...x_{i_k}.

    The empty word evaluates to the identity of the model's dimension.
    `model` needs attributes `x` (list of d x d matrices) and `dim`.
    """
    d = model.dim
    for a in w.letters:
        if not 1 <= a <= len(model.x):
            raise IndexError(f"word letter {a} has no matrix in the model")
    out = np.eye(d, dtype=complex)
    for a in w.letters:
        m = model.x[a - 1]
        if m.shape != (d, d):
            raise ValueError(f"matrix for index {a} has shape {m.shape}, expected {(d, d)}")
        out = out @ m
    return out


def words_up_to_degree(n: int, d: int) -> list[Word]:
    """All words over [1, n] of length 0..d in graded lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 0:
        raise ValueError("degree must be >= 0")
    out = [Word((), n)]
    for k in range(1, d + 1):
        out.extend(Word(t, n) for t in itertools.product(range(1, n + 1), repeat=k))
    return out


class Polynomial:
    """A complex polynomial in noncommuting indeterminants.

    Stored as a map Word -> coefficient; coefficients with magnitude
    below COEFF_EPS are dropped after every arithmetic operation.
    """

    def __init__(self, terms: dict[Word, complex] | None = None, n: int | None = None):
        terms = dict(terms or {})
        if n is None:
            if not terms:
                raise ValueError("need n for the empty polynomial")
            n = next(iter(terms)).n
        for w in terms:
            if w.n != n:
                raise ValueError("mixed alphabets in polynomial terms")
        self.n = n
        self.terms = {w: complex(c) for w, c in terms.items() if abs(c) >= COEFF_EPS}

    @classmethod
    def monomial(cls, letters: tuple[int, ...], n: int, coeff: complex = 1.0) -> "Polynomial":
        return cls({Word(tuple(letters), n): coeff}, n)

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls({}, n)

    @classmethod
    def one(cls, n: int) -> "Polynomial":
        return cls({Word((), n): 1.0}, n)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.n != other.n:
            raise ValueError("mixed alphabets")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0.0) + c
        return Polynomial(out, self.n)

    def __neg__(self) -> "Polynomial":
        return Polynomial({w: -c for w, c in self.terms.items()}, self.n)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, float, complex)):
            return Polynomial({w: c * other for w, c in self.terms.items()}, self.n)
        if self.n != other.n:
            raise ValueError("mixed alphabets")
        out: dict[Word, complex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                out[w] = out.get(w, 0.0) + c1 * c2
        return Polynomial(out, self.n)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.n == other.n and self.terms == other.terms

    def evaluate(self, model) -> np.ndarray:
        out = np.zeros((model.dim, model.dim), dtype=complex)
        for w, c in self.terms.items():
            out += c * evaluate(w, model)
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        bits = [f"{c:g}*X{list(w.letters)}" for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0].letters), t[0].letters))]
        return "Polynomial(" + " + ".join(bits) + ")"
