"""Invariance conditions for joint distributions under the semigroup coactions.

Three conditions are checked against a model's moments, all of the form
mu(p) * pi(P) = sum over index tuples of mu(word_j) * pi(corner product):

* linear: corner products P u_{j_1,i_1} ... u_{j_k,i_k} P, the condition
  characterizing identically distributed boolean families;
* algebraic: P inserted between every pair of generators, so strong it
  forces a constant sequence;
* full-semigroup: products without the corner, checked in the trivial
  one-dimensional representation, so strong it forces vanishing moments.

Summation indices always sit in the first (row) slot of the generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .ncpoly import Word, word_runs
from .partitions import canonical_partition
from .probspace import MatrixModel, moment
from .semigroup import SemigroupRep, build_averaging_rep, u_product

DEFAULT_TOL = 1e-10


def _maxabs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


@dataclass
class InvarianceReport:
    """Per-word residuals of one invariance condition."""

    kind: str
    rep_label: str
    max_degree: int
    tol: float
    residuals: list[tuple[tuple[int, ...], float]] = field(default_factory=list)

    def record(self, letters: tuple[int, ...], residual: float):
        self.residuals.append((letters, residual))

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.residuals), default=0.0)

    @property
    def worst_word(self) -> tuple[int, ...]:
        return max(self.residuals, key=lambda t: t[1])[0] if self.residuals else ()

    @property
    def verdict(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self) -> dict:
        top = sorted(self.residuals, key=lambda t: -t[1])[:10]
        return {
            "kind": self.kind,
            "rep": self.rep_label,
            "max_degree": self.max_degree,
            "tolerance": self.tol,
            "words_checked": len(self.residuals),
            "max_residual": self.max_residual,
            "worst_word": list(self.worst_word),
            "top_offenders": [{"word": list(w), "residual": r} for w, r in top],
            "verdict": "pass" if self.verdict else "fail",
        }


def _compatible_j_words(letters: tuple[int, ...], n: int):
    """Expanded j-words sharing the run composition of the given word.

    Corner products vanish for every other tuple (the interval-partition
    vanishing lemma), so these are the only contributors to the linear
    invariance sum.
    """
    runs = word_runs(letters)
    sizes = [t for _, t in runs]
    r = len(sizes)
    for values in itertools.product(range(1, n + 1), repeat=r):
        if any(values[s] == values[s + 1] for s in range(r - 1)):
            continue
        yield tuple(itertools.chain.from_iterable([v] * t for v, t in zip(values, sizes)))


def _moment_cached(model: MatrixModel, letters: tuple[int, ...], cache: dict) -> complex:
    if letters not in cache:
        cache[letters] = moment(model, letters)
    return cache[letters]


def _linear_residual(model: MatrixModel, rep: SemigroupRep, letters: tuple[int, ...],
                     prune: bool, cache: dict) -> float:
    lhs = _moment_cached(model, letters, cache) * rep.P
    if prune:
        j_words = list(_compatible_j_words(letters, rep.n))
    else:
        j_words = list(itertools.product(range(1, rep.n + 1), repeat=len(letters)))
    rows = np.asarray(j_words, dtype=np.int64) - 1
    cols = np.broadcast_to(np.asarray(letters, dtype=np.int64) - 1, rows.shape)
    weights = np.asarray([_moment_cached(model, jw, cache) for jw in j_words], dtype=complex)
    rhs = kernels.weighted_chain_sum(rep.u, rep.P, rows, np.ascontiguousarray(cols), weights)
    return _maxabs(lhs - rhs)


def _linear_chunk(args):
    model, rep, words, prune = args
    cache: dict = {}
    return [(w, _linear_residual(model, rep, w, prune, cache)) for w in words]


def linear_invariance_check(model: MatrixModel, rep: SemigroupRep, max_degree: int = 5,
                            tol: float = DEFAULT_TOL, prune: bool = True,
                            jobs: int = 1) -> InvarianceReport:
    """Check mu(w) P = sum_j mu(w_j) P u_{j_1,i_1} ... u_{j_k,i_k} P.

    Runs over every word of length 1..max_degree. With prune=True the sum
    skips j-tuples whose run composition differs from the word's, which
    the vanishing lemma sends to zero (verified separately; a test pins
    pruned == unpruned). jobs > 1 fans words out to worker processes.
    """
    if rep.n != model.n:
        raise ValueError(f"rep grid size {rep.n} != model variables {model.n}")
    report = InvarianceReport("linear", rep.label, max_degree, tol)
    words = [w for k in range(1, max_degree + 1)
             for w in itertools.product(range(1, model.n + 1), repeat=k)]
    if jobs > 1 and len(words) >= 64:
        results = _parallel_chunks(_linear_chunk, [(model, rep, chunk, prune) for chunk
                                                   in _split(words, jobs)])
    else:
        results = [_linear_chunk((model, rep, words, prune))]
    for chunk in results:
        for w, res in chunk:
            report.record(w, res)
    return report


def _split(items, parts):
    parts = max(1, min(parts, len(items)))
    step = (len(items) + parts - 1) // parts
    return [items[i:i + step] for i in range(0, len(items), step)]


def _parallel_chunks(fn, arg_list):
    try:
        import multiprocessing as mp

        with mp.Pool(processes=len(arg_list)) as pool:
            return pool.map(fn, arg_list)
    except (ImportError, OSError):
        return [fn(a) for a in arg_list]


def algebraic_invariance_check(model: MatrixModel, rep: SemigroupRep, max_degree: int = 4,
                               tol: float = DEFAULT_TOL) -> InvarianceReport:
    """Check mu(w) P = sum_j mu(w_j) P u_{j_1,i_1} P u_{j_2,i_2} P ... P u_{j_k,i_k} P.

    No tuple is pruned: the fully cornered factors P u P never vanish in
    the built-in representations, so all n^k tuples contribute.
    """
    if rep.n != model.n:
        raise ValueError(f"rep grid size {rep.n} != model variables {model.n}")
    report = InvarianceReport("algebraic", rep.label, max_degree, tol)
    # g[a, b] = u_{a+1,b+1} P, so P g g ... g is the fully cornered chain.
    g = rep.u @ rep.P
    cache: dict = {}
    for k in range(1, max_degree + 1):
        tuples = np.array(list(itertools.product(range(rep.n), repeat=k)), dtype=np.int64)
        for letters in itertools.product(range(1, model.n + 1), repeat=k):
            lhs = _moment_cached(model, letters, cache) * rep.P
            cols = np.asarray(letters, dtype=np.int64) - 1
            acc = np.broadcast_to(rep.P, (len(tuples), rep.dim, rep.dim))
            for t in range(k):
                acc = acc @ g[tuples[:, t], cols[t]]
            weights = np.asarray(
                [_moment_cached(model, tuple(int(a) + 1 for a in row), cache) for row in tuples],
                dtype=complex)
            rhs = np.einsum("t,tij->ij", weights, acc)
            report.record(letters, _maxabs(lhs - rhs))
    return report


def bsn_invariance_check(model: MatrixModel, max_degree: int = 4,
                         tol: float = DEFAULT_TOL) -> InvarianceReport:
    """Invariance under the full-semigroup coaction, in the trivial representation.

    The one-dimensional representation sends the identity to 1 and every
    generator and P to 0, so the right-hand side vanishes on nonempty
    words and the residual of each word is simply |mu(w)|.
    """
    report = InvarianceReport("bsn", "trivial(dim=1)", max_degree, tol)
    cache: dict = {}
    for k in range(1, max_degree + 1):
        for letters in itertools.product(range(1, model.n + 1), repeat=k):
            report.record(letters, abs(_moment_cached(model, letters, cache)))
    return report


# ---------------------------------------------------------------------------
# averaging experiment


@dataclass
class AveragingRow:
    M: int
    invariance_sum: complex
    reduced_moment: complex
    distinct_fraction: float
    deviation: float
    bound_factor: float
    moment_bound: float
    rep_residual: float
    identity_residual: float

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "invariance_sum": _c2j(self.invariance_sum),
            "reduced_moment": _c2j(self.reduced_moment),
            "distinct_fraction": self.distinct_fraction,
            "deviation": self.deviation,
            "bound_factor": self.bound_factor,
            "bound": self.bound_factor * self.moment_bound,
            "rep_residual": self.rep_residual,
            "identity_residual": self.identity_residual,
        }


def _c2j(z: complex):
    return z.real if abs(z.imag) < 1e-14 else [z.real, z.imag]


@dataclass
class AveragingTable:
    word: tuple[int, ...]
    N: int
    repeat_count: int
    tol: float
    rows: list[AveragingRow] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        ok = all(r.rep_residual <= self.tol for r in self.rows)
        ok = ok and all(r.deviation <= r.bound_factor * r.moment_bound + self.tol for r in self.rows)
        for prev, cur in zip(self.rows, self.rows[1:]):
            ok = ok and cur.deviation <= prev.deviation + self.tol
        return ok

    def to_dict(self) -> dict:
        return {
            "word": list(self.word),
            "N": self.N,
            "repeat_count": self.repeat_count,
            "tolerance": self.tol,
            "rows": [r.to_dict() for r in self.rows],
            "verdict": "pass" if self.verdict else "fail",
        }


def averaging_invariance_experiment(model: MatrixModel, N: int, M_list,
                                    word: Word | tuple[int, ...],
                                    tol: float = DEFAULT_TOL) -> AveragingTable:
    """Finite-size averaging of a repeated index over M fresh variables.

    The word's run pattern may use the values 1..N freely plus the value
    N+1 repeated m times. For each M, the invariance sum under the
    averaging representation replaces those repeats by all M^m choices of
    fresh variables with weight 1/M per factor. Its distinct-choice part
    is f(M) = M(M-1)...(M-m+1)/M^m times the reduced moment (repeats sent
    to distinct fresh variables); the recorded deviation is the remaining
    coincident-choice mass, bounded by (1 - f(M)) times the moment bound
    and shrinking to zero as M grows.
    """
    letters = word.letters if isinstance(word, Word) else tuple(word)
    if not letters:
        raise ValueError("the averaging experiment needs a nonempty word")
    runs = word_runs(letters)
    pattern = tuple(v for v, _ in runs)
    powers = tuple(t for _, t in runs)
    if any(v > N + 1 for v in pattern):
        raise ValueError(f"run values must lie in [1, N+1] = [1, {N + 1}]")
    repeat_positions = [idx for idx, v in enumerate(pattern) if v == N + 1]
    m = len(repeat_positions)
    M_list = list(M_list)
    need = N + (max(M_list) if m else 0)
    if model.n < max(need, N + m):
        raise ValueError(f"model exposes {model.n} variables; experiment needs {max(need, N + m)}")

    def expanded(pat: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable([v] * t for v, t in zip(pat, powers)))

    def substituted(pat: tuple[int, ...], values) -> tuple[int, ...]:
        out = list(pat)
        for pos, val in zip(repeat_positions, values):
            out[pos] = val
        return tuple(out)

    base_moment = moment(model, expanded(pattern))
    reduced = moment(model, expanded(substituted(pattern, [N + 1 + s for s in range(m)])))

    table = AveragingTable(letters, N, m, tol)
    for M in M_list:
        rep = build_averaging_rep(N, M)
        s_matrix = np.zeros((rep.dim, rep.dim), dtype=complex)
        s_scalar = 0.0 + 0.0j
        bound_c = abs(reduced)
        for values in itertools.product(range(N + 1, N + M + 1), repeat=m):
            pat = substituted(pattern, values)
            mom = moment(model, expanded(pat))
            s_matrix += mom * u_product(rep, pat, pattern)
            s_scalar += mom
            bound_c = max(bound_c, abs(mom))
        s_scalar /= M ** m
        f = 1.0
        for s in range(m):
            f *= (M - s) / M
        table.rows.append(AveragingRow(
            M=M,
            invariance_sum=complex(s_scalar),
            reduced_moment=complex(reduced),
            distinct_fraction=f,
            deviation=abs(s_scalar - f * reduced),
            bound_factor=1.0 - f,
            moment_bound=bound_c,
            rep_residual=_maxabs(s_matrix - s_scalar * rep.P),
            identity_residual=abs(s_scalar - base_moment),
        ))
    return table
