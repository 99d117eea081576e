"""Finite-dimensional representations of the boolean permutation semigroups.

The semigroup B_s(n) is the universal unital C*-algebra on an n x n grid
of orthogonal projections u_{i,j} with row and column orthogonality and an
invariant projection P satisfying sum_k u_{k,i} P = P for every column i.
This module builds concrete matrix representations, measures the defining
relations as residuals, and forms the corner products
P u_{i_1,j_1} ... u_{i_k,j_k} P that drive the invariance checks.

All generator indices in the public API are 1-based, matching the grid
convention u_{i,j} with i, j in {1, ..., n}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

#: residual at which the built-in representations satisfy the relations
DEFAULT_TOL = 1e-12


def _maxabs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


@dataclass(frozen=True)
class SemigroupRep:
    """Concrete matrices for the generators of B_s(n).

    u has shape (n, n, dim, dim); u[i-1, j-1] represents u_{i,j}.
    The representation is immutable; checks never mutate it.
    """

    n: int
    dim: int
    u: np.ndarray
    P: np.ndarray
    label: str = "custom"

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def u_mat(self, i: int, j: int) -> np.ndarray:
        """The matrix of u_{i,j}, 1-based indices."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"generator index ({i},{j}) outside [1,{self.n}]^2")
        return self.u[i - 1, j - 1]

    def replace_generator(self, i: int, j: int, mat: np.ndarray, label: str | None = None) -> "SemigroupRep":
        """A copy with u_{i,j} replaced (for fault injection in tests and the CLI)."""
        u = self.u.copy()
        u[i - 1, j - 1] = np.asarray(mat, dtype=complex)
        return SemigroupRep(self.n, self.dim, u, self.P.copy(), label or f"{self.label}+corrupted")


@dataclass
class RelationReport:
    """Residuals of the defining relations, max-abs entry per relation."""

    residuals: dict[str, float]
    tol: float
    rep_label: str = ""
    checked: list[str] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    @property
    def worst(self) -> tuple[str, float]:
        name = max(self.residuals, key=self.residuals.get)
        return name, self.residuals[name]

    @property
    def verdict(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "rep": self.rep_label,
            "tolerance": self.tol,
            "residuals": dict(self.residuals),
            "max_residual": self.max_residual,
            "worst_relation": self.worst[0],
            "verdict": "pass" if self.verdict else "fail",
        }


def _rank_one_projection(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj()) / (vec.conj() @ vec).real


def build_standard_rep(n: int) -> SemigroupRep:
    """The 2n-dimensional representation of B_s(n).

    With basis vectors v_1..v_{2n} read cyclically (v_k = v_{k+2n}),
    u_{i,j} is the rank-one projection onto v_{2(i-j)+1} + v_{2(j-i)+2}
    and P is the rank-one projection onto v_1 + ... + v_{2n}. For every
    i, j this gives P u_{i,j} P = (1/n) P.
    """
    if n < 2:
        raise ValueError("the 2n-dimensional construction needs n >= 2")
    dim = 2 * n
    u = np.zeros((n, n, dim, dim), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a = (2 * (i - j) + 1 - 1) % dim  # 0-based position of v_{2(i-j)+1}
            b = (2 * (j - i) + 2 - 1) % dim
            vec = np.zeros(dim, dtype=complex)
            vec[a] += 1.0
            vec[b] += 1.0
            u[i - 1, j - 1] = _rank_one_projection(vec)
    P = np.full((dim, dim), 1.0 / dim, dtype=complex)
    return SemigroupRep(n, dim, u, P, label=f"standard(n={n})")


def build_averaging_rep(N: int, M: int) -> SemigroupRep:
    """The averaging representation of B_s(M+N) on 2M dimensions.

    The first N rows and columns of the grid act as delta_{i,j} P; the
    remaining M x M block carries the standard 2M-dimensional projections,
    so P u_{i,j} P = (1/M) P whenever min(i, j) > N.
    """
    if N < 1:
        raise ValueError("frozen prefix size N must be >= 1")
    if M < 2:
        raise ValueError("averaging size M must be >= 2")
    inner = build_standard_rep(M)
    n, dim = M + N, 2 * M
    u = np.zeros((n, n, dim, dim), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if min(i, j) > N:
                u[i - 1, j - 1] = inner.u[i - N - 1, j - N - 1]
            elif i == j:
                u[i - 1, j - 1] = inner.P
            # else: the zero matrix
    return SemigroupRep(n, dim, u, inner.P.copy(), label=f"averaging(N={N},M={M})")


def check_relations(rep: SemigroupRep, tol: float = DEFAULT_TOL) -> RelationReport:
    """Residuals of all defining relations of B_s(n) for a representation.

    Measured relations: self-adjointness and idempotency of every u_{i,j}
    and of P, row orthogonality u_{i,k} u_{i,l} = 0, column orthogonality
    u_{k,i} u_{l,i} = 0 (k != l), and the invariant-projection law
    sum_k u_{k,i} P = P.
    """
    n, u, P = rep.n, rep.u, rep.P
    res = {
        "P_selfadjoint": _maxabs(P - P.conj().T),
        "P_idempotent": _maxabs(P @ P - P),
        "u_selfadjoint": 0.0,
        "u_idempotent": 0.0,
        "row_orthogonality": 0.0,
        "column_orthogonality": 0.0,
        "invariant_projection": 0.0,
    }
    for i in range(n):
        for j in range(n):
            m = u[i, j]
            res["u_selfadjoint"] = max(res["u_selfadjoint"], _maxabs(m - m.conj().T))
            res["u_idempotent"] = max(res["u_idempotent"], _maxabs(m @ m - m))
    for i in range(n):
        for k in range(n):
            for l in range(k + 1, n):
                res["row_orthogonality"] = max(res["row_orthogonality"], _maxabs(u[i, k] @ u[i, l]))
                res["column_orthogonality"] = max(res["column_orthogonality"], _maxabs(u[k, i] @ u[l, i]))
    col_sums = u.sum(axis=0)  # col_sums[i] = sum_k u_{k, i+1}
    for i in range(n):
        res["invariant_projection"] = max(res["invariant_projection"], _maxabs(col_sums[i] @ P - P))
    return RelationReport(res, tol, rep_label=rep.label,
                          checked=["projections", "orthogonality", "invariant_projection"])


def u_product(rep: SemigroupRep, J1, J2) -> np.ndarray:
    """The corner product P u_{i_1,j_1} u_{i_2,j_2} ... u_{i_k,j_k} P.

    J1 supplies the first (row) indices, J2 the second (column) indices,
    both 1-based and of equal length; the empty product returns P.
    """
    J1, J2 = tuple(J1), tuple(J2)
    if len(J1) != len(J2):
        raise ValueError(f"index sequences differ in length: {len(J1)} vs {len(J2)}")
    for a in (*J1, *J2):
        if not 1 <= a <= rep.n:
            raise IndexError(f"generator index {a} outside [1,{rep.n}]")
    if not J1:
        return rep.P.copy()
    rows = np.asarray(J1, dtype=np.int64) - 1
    cols = np.asarray(J2, dtype=np.int64) - 1
    return np.asarray(kernels.chain_product(rep.u, rep.P, rows, cols))


@dataclass
class SumIdentityReport:
    """Residuals of the corner-sum collapse sum_j P u.. u.. P = P.

    `second_index` sums the column indices against the fixed row word;
    `first_index` sums the row indices (the order the defining relation
    sum_k u_{k,i} P = P forces). Both collapse in the built-in reps.
    """

    I_seq: tuple[int, ...]
    residual_second_index: float
    residual_first_index: float
    tol: float

    @property
    def residual(self) -> float:
        return max(self.residual_second_index, self.residual_first_index)

    @property
    def verdict(self) -> bool:
        return self.residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "word": list(self.I_seq),
            "residual_second_index": self.residual_second_index,
            "residual_first_index": self.residual_first_index,
            "residual": self.residual,
            "tolerance": self.tol,
            "verdict": "pass" if self.verdict else "fail",
        }


def sum_identity_check(rep: SemigroupRep, I_seq, tol: float = 1e-10) -> SumIdentityReport:
    """Check sum over all j-tuples of P u_{i_1,j_1} ... u_{i_k,j_k} P = P.

    The sum over independent indices factors exactly into a product of
    row sums (resp. column sums), which is how it is evaluated here; a
    test compares this against direct summation on small cases.
    """
    I_seq = tuple(I_seq)
    for a in I_seq:
        if not 1 <= a <= rep.n:
            raise IndexError(f"index {a} outside [1,{rep.n}]")
    row_sums = rep.u.sum(axis=1)  # row_sums[i] = sum_j u_{i+1, j}
    col_sums = rep.u.sum(axis=0)
    second = rep.P.copy()
    first = rep.P.copy()
    for a in I_seq:
        second = second @ row_sums[a - 1]
        first = first @ col_sums[a - 1]
    res2 = _maxabs(second @ rep.P - rep.P)
    res1 = _maxabs(first @ rep.P - rep.P)
    return SumIdentityReport(I_seq, res2, res1, tol)


def comultiplication_check(rep: SemigroupRep, tol: float = 1e-10) -> RelationReport:
    """Verify the comultiplication image satisfies the defining relations.

    Builds A_{i,j} = sum_k u_{i,k} (x) u_{k,j} and Q = P (x) P with
    Kronecker products and runs the full relation battery on (A, Q).
    """
    n, dim = rep.n, rep.dim
    A = np.zeros((n, n, dim * dim, dim * dim), dtype=complex)
    for i in range(n):
        for j in range(n):
            acc = np.zeros((dim * dim, dim * dim), dtype=complex)
            for k in range(n):
                acc += np.kron(rep.u[i, k], rep.u[k, j])
            A[i, j] = acc
    Q = np.kron(rep.P, rep.P)
    image = SemigroupRep(n, dim * dim, A, Q, label=f"Delta({rep.label})")
    return check_relations(image, tol)
