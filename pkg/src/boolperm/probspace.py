"""Finite-dimensional noncommutative probability spaces.

A MatrixModel is a tuple of self-adjoint matrices together with a state
(vector or density). Conditional expectations onto small range algebras
are compressions by a projection, optionally with a rank-one scalar part.
The checks in this module measure boolean independence, the inner
factorization property, moment reduction across index tuples, and the
passage from boolean to free independence after adjoining a unit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .ncpoly import Word, evaluate, word_runs

SELFADJOINT_TOL = 1e-12
STATE_TOL = 1e-12


def _maxabs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


@dataclass(frozen=True)
class State:
    """A state on d x d matrices: a unit vector or a density matrix."""

    vector: np.ndarray | None = None
    density: np.ndarray | None = None

    def __post_init__(self):
        if (self.vector is None) == (self.density is None):
            raise ValueError("state needs exactly one of vector, density")
        if self.vector is not None:
            v = np.asarray(self.vector, dtype=complex)
            if abs(v.conj() @ v - 1.0) > STATE_TOL:
                raise ValueError("state vector is not normalized")
            object.__setattr__(self, "vector", v)
        else:
            rho = np.asarray(self.density, dtype=complex)
            if _maxabs(rho - rho.conj().T) > STATE_TOL:
                raise ValueError("density matrix is not self-adjoint")
            if abs(np.trace(rho) - 1.0) > STATE_TOL:
                raise ValueError("density matrix does not have unit trace")
            object.__setattr__(self, "density", rho)

    @property
    def dim(self) -> int:
        return len(self.vector) if self.vector is not None else self.density.shape[0]

    def phi(self, mat: np.ndarray) -> complex:
        if self.vector is not None:
            return complex(self.vector.conj() @ mat @ self.vector)
        return complex(np.trace(self.density @ mat))


@dataclass(frozen=True)
class MatrixModel:
    """n self-adjoint d x d matrices with a state; immutable after build."""

    n: int
    dim: int
    x: tuple[np.ndarray, ...]
    state: State
    label: str = "custom"

    def __post_init__(self):
        if self.n != len(self.x):
            raise ValueError(f"n={self.n} but {len(self.x)} matrices supplied")
        if self.state.dim != self.dim:
            raise ValueError("state dimension does not match the model")
        mats = []
        for i, m in enumerate(self.x):
            m = np.asarray(m, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"x_{i + 1} has shape {m.shape}, expected {(self.dim, self.dim)}")
            if _maxabs(m - m.conj().T) > SELFADJOINT_TOL:
                raise ValueError(f"x_{i + 1} is not self-adjoint")
            mats.append(m)
        object.__setattr__(self, "x", tuple(mats))

    def phi(self, mat: np.ndarray) -> complex:
        return self.state.phi(mat)

    def replace_variable(self, i: int, mat: np.ndarray, label: str | None = None) -> "MatrixModel":
        """A copy with x_i replaced, 1-based (fault injection for tests/CLI)."""
        mats = list(self.x)
        mats[i - 1] = np.asarray(mat, dtype=complex)
        return MatrixModel(self.n, self.dim, tuple(mats), self.state,
                           label or f"{self.label}+corrupted")


def moment(model: MatrixModel, w: Word | tuple[int, ...]) -> complex:
    """The joint moment phi(x_{i_1} ... x_{i_k}); the empty word gives 1."""
    letters = w.letters if isinstance(w, Word) else tuple(w)
    if any(a > model.n for a in letters):
        raise IndexError("word letter outside the model's variables")
    return model.phi(evaluate(Word(letters, max(model.n, 1)), model))


def boolean_predicted_moment(single_var_moments, w: Word | tuple[int, ...]) -> complex:
    """The identically-distributed boolean prediction for a mixed moment.

    Factor the word into maximal constant runs and multiply m_t over the
    run lengths t, where single_var_moments = (m_1, m_2, ...).
    """
    letters = w.letters if isinstance(w, Word) else tuple(w)
    if not letters:
        raise ValueError("the boolean prediction needs a nonempty word")
    out = 1.0 + 0.0j
    for _, t in word_runs(letters):
        if t > len(single_var_moments):
            raise ValueError(f"run length {t} exceeds available moment data")
        out *= single_var_moments[t - 1]
    return complex(out)


# ---------------------------------------------------------------------------
# conditional expectations


@dataclass(frozen=True)
class CondExpectation:
    """A conditional expectation onto a small range algebra.

    kind "compression":        x -> Q x Q
    kind "compression_scalar": x -> Q x Q + <x w, w> (I - R)

    The range algebra is spanned by Q (compression) or by Q and I - R.
    """

    kind: str
    Q: np.ndarray
    w: np.ndarray | None = None
    R: np.ndarray | None = None

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=complex)
        if _maxabs(Q @ Q - Q) > 1e-12 or _maxabs(Q - Q.conj().T) > 1e-12:
            raise ValueError("Q must be an orthogonal projection")
        object.__setattr__(self, "Q", Q)
        if self.kind == "compression":
            if self.w is not None or self.R is not None:
                raise ValueError("compression form takes no scalar part")
        elif self.kind == "compression_scalar":
            w = np.asarray(self.w, dtype=complex)
            R = np.asarray(self.R, dtype=complex)
            if abs(w.conj() @ w - 1.0) > 1e-12:
                raise ValueError("scalar-part vector must be a unit vector")
            if _maxabs(R @ R - R) > 1e-12 or _maxabs(R - R.conj().T) > 1e-12:
                raise ValueError("R must be an orthogonal projection")
            object.__setattr__(self, "w", w)
            object.__setattr__(self, "R", R)
        else:
            raise ValueError(f"unknown conditional expectation kind {self.kind!r}")

    @classmethod
    def compression(cls, Q: np.ndarray) -> "CondExpectation":
        return cls("compression", np.asarray(Q, dtype=complex))

    @classmethod
    def compression_plus_scalar(cls, Q, w, R) -> "CondExpectation":
        return cls("compression_scalar", np.asarray(Q, dtype=complex),
                   np.asarray(w, dtype=complex), np.asarray(R, dtype=complex))

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    def apply(self, mat: np.ndarray) -> np.ndarray:
        out = self.Q @ mat @ self.Q
        if self.kind == "compression_scalar":
            scalar = complex(self.w.conj() @ mat @ self.w)
            out = out + scalar * (np.eye(self.dim, dtype=complex) - self.R)
        return out

    def range_basis(self) -> list[np.ndarray]:
        basis = [self.Q]
        if self.kind == "compression_scalar":
            basis.append(np.eye(self.dim, dtype=complex) - self.R)
        return basis

    def idempotency_residual(self, test_mats) -> float:
        return max(_maxabs(self.apply(self.apply(m)) - self.apply(m)) for m in test_mats)

    def bimodule_residual(self, test_mats) -> float:
        """Max residual of E[b1 x b2] - b1 E[x] b2 over range-basis b's."""
        worst = 0.0
        for m in test_mats:
            for b1 in self.range_basis():
                for b2 in self.range_basis():
                    worst = max(worst, _maxabs(self.apply(b1 @ m @ b2) - b1 @ self.apply(m) @ b2))
        return worst


# ---------------------------------------------------------------------------
# unitalization


@dataclass(frozen=True)
class UnitalizedElement:
    """A pair (scalar, body) in the algebra with a unit adjoined.

    Arithmetic: (x,a) + (y,b) = (x+y, a+b),
    (x,a)(y,b) = (xy, x b + y a + a b), (x,a)* = (conj x, a*).
    """

    scalar: complex
    body: np.ndarray

    def __add__(self, other: "UnitalizedElement") -> "UnitalizedElement":
        return UnitalizedElement(self.scalar + other.scalar, self.body + other.body)

    def __sub__(self, other: "UnitalizedElement") -> "UnitalizedElement":
        return UnitalizedElement(self.scalar - other.scalar, self.body - other.body)

    def __mul__(self, other: "UnitalizedElement") -> "UnitalizedElement":
        return UnitalizedElement(
            self.scalar * other.scalar,
            self.scalar * other.body + other.scalar * self.body + self.body @ other.body,
        )

    def adjoint(self) -> "UnitalizedElement":
        return UnitalizedElement(np.conj(self.scalar), self.body.conj().T)

    def norm(self) -> float:
        return max(abs(self.scalar), _maxabs(self.body))


def unitalize(scalar: complex, body: np.ndarray) -> UnitalizedElement:
    return UnitalizedElement(complex(scalar), np.asarray(body, dtype=complex))


def lift_expectation(E: CondExpectation):
    """The lifted expectation on the unitalization: (x, a) -> (x, E[a])."""

    def lifted(elem: UnitalizedElement) -> UnitalizedElement:
        return UnitalizedElement(elem.scalar, E.apply(elem.body))

    return lifted


# ---------------------------------------------------------------------------
# reports and case enumeration


@dataclass
class IndependenceReport:
    """Outcome of one independence-style check over an enumerated case set."""

    name: str
    tol: float
    max_residual: float = 0.0
    worst_case: dict = field(default_factory=dict)
    n_cases: int = 0

    @property
    def verdict(self) -> bool:
        return self.max_residual <= self.tol

    def record(self, residual: float, case: dict):
        self.n_cases += 1
        if residual > self.max_residual:
            self.max_residual = residual
            self.worst_case = case

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tolerance": self.tol,
            "max_residual": self.max_residual,
            "worst_case": self.worst_case,
            "cases": self.n_cases,
            "verdict": "pass" if self.verdict else "fail",
        }


def alternating_patterns(n: int, length: int):
    """Consecutive-distinct index tuples over [1, n] of the given length."""
    if length == 0:
        yield ()
        return
    for first in range(1, n + 1):
        stack = [(first,)]
        while stack:
            pat = stack.pop()
            if len(pat) == length:
                yield pat
            else:
                for nxt in range(1, n + 1):
                    if nxt != pat[-1]:
                        stack.append(pat + (nxt,))


def power_vectors(r: int, total_max: int):
    """Tuples (t_1..t_r), all >= 1, summing to at most total_max."""
    if r > total_max:
        return
    for s in range(r, total_max + 1):
        for cuts in itertools.combinations(range(1, s), r - 1):
            bounds = (0, *cuts, s)
            yield tuple(bounds[i + 1] - bounds[i] for i in range(r))


def _slot_matrices(model: MatrixModel, i: int, t: int, dressing) -> np.ndarray:
    """p(x_i) for p(X) = X^t, b X^t, X^t b, or b X^t b."""
    m = np.linalg.matrix_power(model.x[i - 1], t)
    if dressing is None:
        return m
    mode, b = dressing
    if mode == "left":
        return b @ m
    if mode == "right":
        return m @ b
    return b @ m @ b


def check_boolean_independence(model: MatrixModel, E: CondExpectation | None = None,
                               max_len: int = 5, tol: float = 1e-10) -> IndependenceReport:
    """Residuals of E[p_1(x_{i_1}) ... p_r(x_{i_r})] = E[p_1] ... E[p_r].

    Cases run over consecutive-distinct patterns, power vectors of total
    degree <= max_len, and (in the operator-valued case) one slot dressed
    with range-algebra coefficients. With E=None the scalar state plays
    the role of the expectation.
    """
    name = "boolean_independence" if E is not None else "boolean_independence_scalar"
    report = IndependenceReport(name, tol)
    basis = E.range_basis() if E is not None else []
    for r in range(2, max_len + 1):
        for pattern in alternating_patterns(model.n, r):
            for powers in power_vectors(r, max_len):
                dressings: list = [None]
                if E is not None:
                    dressings += [("both", b) for b in basis]
                for dress in dressings:
                    slots = [
                        _slot_matrices(model, i, t, dress if (dress and idx == r // 2) else None)
                        for idx, (i, t) in enumerate(zip(pattern, powers))
                    ]
                    prod = slots[0]
                    for s in slots[1:]:
                        prod = prod @ s
                    case = {"pattern": list(pattern), "powers": list(powers),
                            "dressed": dress is not None}
                    if E is None:
                        lhs = model.phi(prod)
                        rhs = np.prod([model.phi(s) for s in slots])
                        report.record(abs(lhs - rhs), case)
                    else:
                        lhs = E.apply(prod)
                        rhs = E.apply(slots[0])
                        for s in slots[1:]:
                            rhs = rhs @ E.apply(s)
                        report.record(_maxabs(lhs - rhs), case)
    return report


def check_factorization_property(model: MatrixModel, E: CondExpectation,
                                 max_len: int = 4, tol: float = 1e-10) -> IndependenceReport:
    """Residuals of E[p_1 ... p_m ... p_r] = E[p_1 ... E[p_m] ... p_r].

    The inner position m runs over every slot; powers have total degree
    <= max_len over consecutive-distinct patterns.
    """
    report = IndependenceReport("factorization_property", tol)
    for r in range(1, max_len + 1):
        for pattern in alternating_patterns(model.n, r):
            for powers in power_vectors(r, max_len):
                slots = [np.linalg.matrix_power(model.x[i - 1], t)
                         for i, t in zip(pattern, powers)]
                prod = slots[0]
                for s in slots[1:]:
                    prod = prod @ s
                lhs = E.apply(prod)
                for m_pos in range(r):
                    inner = list(slots)
                    inner[m_pos] = E.apply(slots[m_pos])
                    rhs_mat = inner[0]
                    for s in inner[1:]:
                        rhs_mat = rhs_mat @ s
                    rhs = E.apply(rhs_mat)
                    report.record(
                        _maxabs(lhs - rhs),
                        {"pattern": list(pattern), "powers": list(powers), "inner_position": m_pos + 1},
                    )
    return report


def check_boolean_implies_free(model: MatrixModel, E: CondExpectation,
                               max_len: int = 4, tol: float = 1e-10) -> IndependenceReport:
    """Free-independence residuals for centered elements in the unitalization.

    Test elements are a_k = (0, p_k(x_{i_k}) - E[p_k(x_{i_k})]), which the
    lifted expectation kills one at a time; the check verifies it also
    kills every alternating product, the defining property of freeness.
    """
    report = IndependenceReport("boolean_implies_free", tol)
    lifted = lift_expectation(E)
    basis = E.range_basis()
    for r in range(2, max_len + 1):
        for pattern in alternating_patterns(model.n, r):
            for powers in itertools.product((1, 2), repeat=r):
                dressings: list = [None] + [("left", b) for b in basis]
                for dress in dressings:
                    factors = []
                    for idx, (i, t) in enumerate(zip(pattern, powers)):
                        p = _slot_matrices(model, i, t, dress if (dress and idx == r // 2) else None)
                        factors.append(unitalize(0.0, p - E.apply(p)))
                    prod = factors[0]
                    for f in factors[1:]:
                        prod = prod * f
                    out = lifted(prod)
                    report.record(
                        out.norm(),
                        {"pattern": list(pattern), "powers": list(powers),
                         "dressed": dress is not None},
                    )
    return report


def check_moment_reduction(model: MatrixModel, max_indices: int = 3,
                           max_power: int = 3, tol: float = 1e-10) -> IndependenceReport:
    """Moment agreement across consecutive-distinct tuples sharing powers.

    For every power vector (k_1..k_r) with r <= max_indices and entries
    <= max_power, the moments phi(x_{i_1}^{k_1} ... x_{i_r}^{k_r}) must
    agree over all consecutive-distinct tuples (i_1..i_r) drawn from
    [1, min(max_indices, n)]. max_indices bounds both the index range and
    the tuple length.
    """
    report = IndependenceReport("moment_reduction", tol)
    m = min(max_indices, model.n)
    for r in range(1, max_indices + 1):
        for powers in itertools.product(range(1, max_power + 1), repeat=r):
            values = []
            for pattern in alternating_patterns(m, r):
                letters = tuple(itertools.chain.from_iterable([i] * t for i, t in zip(pattern, powers)))
                values.append((pattern, moment(model, letters)))
            for (p1, v1), (p2, v2) in itertools.combinations(values, 2):
                report.record(
                    abs(v1 - v2),
                    {"powers": list(powers), "pattern_a": list(p1), "pattern_b": list(p2)},
                )
    return report
