"""The model zoo: every concrete example plus negative controls.

Shift models realize n identically distributed, boolean independent
variables at finite truncation: on basis e_0, ..., e_N the variable x_i
sends e_0 to e_i, e_i back to e_0, and kills every other basis vector.
The unital variant adjoins an extra vector e_{-1} annihilated by all
variables, splitting the state between e_0 and e_{-1}.

Models can also be described on disk as JSON (ModelSpec) for the CLI.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .probspace import CondExpectation, MatrixModel, State

BUILTIN_KINDS = ("shift-nonunital", "shift-unital", "constant", "zero", "classical-iid")


def build_shift_nonunital(n: int, truncation: int | None = None) -> tuple[MatrixModel, CondExpectation]:
    """The shift model on basis e_0..e_N with vector state at e_0.

    x_i = |e_i><e_0| + |e_0><e_i|. Any truncation N >= n gives exact
    moments for words of every length: the action never leaves
    span{e_0, ..., e_n}. E is the compression by the projection onto e_0.
    """
    if n < 1:
        raise ValueError("need n >= 1 variables")
    N = truncation if truncation is not None else n + 1
    if N < n:
        raise ValueError(f"truncation {N} < number of variables {n}")
    dim = N + 1
    mats = []
    for i in range(1, n + 1):
        m = np.zeros((dim, dim), dtype=complex)
        m[i, 0] = 1.0
        m[0, i] = 1.0
        mats.append(m)
    state_vec = np.zeros(dim, dtype=complex)
    state_vec[0] = 1.0
    Q = np.zeros((dim, dim), dtype=complex)
    Q[0, 0] = 1.0
    model = MatrixModel(n, dim, tuple(mats), State(vector=state_vec),
                        label=f"shift-nonunital(n={n},N={N})")
    return model, CondExpectation.compression(Q)


def build_shift_unital(n: int, truncation: int | None = None) -> tuple[MatrixModel, CondExpectation]:
    """The unital shift model on basis e_{-1}, e_0, ..., e_N.

    Basis index 0 holds e_{-1}, which every variable annihilates; the
    state is the vector state at (e_0 + e_{-1})/sqrt(2). The conditional
    expectation compresses by Q = proj(e_0) and routes <x e_{-1}, e_{-1}>
    to I - Q, so its range is the span of Q and I - Q and it fixes both.
    """
    if n < 1:
        raise ValueError("need n >= 1 variables")
    N = truncation if truncation is not None else n + 1
    if N < n:
        raise ValueError(f"truncation {N} < number of variables {n}")
    dim = N + 2
    e = lambda k: k + 1  # basis position of e_k, k >= -1
    mats = []
    for i in range(1, n + 1):
        m = np.zeros((dim, dim), dtype=complex)
        m[e(i), e(0)] = 1.0
        m[e(0), e(i)] = 1.0
        mats.append(m)
    vec = np.zeros(dim, dtype=complex)
    vec[e(-1)] = vec[e(0)] = 1.0 / np.sqrt(2.0)
    Q = np.zeros((dim, dim), dtype=complex)
    Q[e(0), e(0)] = 1.0
    w = np.zeros(dim, dtype=complex)
    w[e(-1)] = 1.0
    model = MatrixModel(n, dim, tuple(mats), State(vector=vec),
                        label=f"shift-unital(n={n},N={N})")
    return model, CondExpectation.compression_plus_scalar(Q, w, Q)


def build_constant(n: int, seed: np.ndarray | None = None,
                   state_vector: np.ndarray | None = None) -> MatrixModel:
    """x_1 = ... = x_n = seed; default seed diag(1, -1), state (e_1+e_2)/sqrt(2)."""
    if n < 1:
        raise ValueError("need n >= 1 variables")
    if seed is None:
        seed = np.diag([1.0, -1.0]).astype(complex)
    seed = np.asarray(seed, dtype=complex)
    if np.abs(seed - seed.conj().T).max() > 1e-12:
        raise ValueError("seed matrix must be self-adjoint")
    dim = seed.shape[0]
    if state_vector is None:
        state_vector = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    return MatrixModel(n, dim, tuple(seed.copy() for _ in range(n)),
                       State(vector=np.asarray(state_vector, dtype=complex)),
                       label=f"constant(n={n})")


def build_zero(n: int, dim: int = 2) -> MatrixModel:
    """All variables zero; every invariance condition holds trivially."""
    if n < 1 or dim < 1:
        raise ValueError("need n >= 1 and dim >= 1")
    vec = np.zeros(dim, dtype=complex)
    vec[0] = 1.0
    zero = np.zeros((dim, dim), dtype=complex)
    return MatrixModel(n, dim, tuple(zero.copy() for _ in range(n)),
                       State(vector=vec), label=f"zero(n={n},dim={dim})")


def build_classical_iid(n: int) -> MatrixModel:
    """n commuting Rademacher variables on the 2^n product space.

    x_i acts as diag(1, -1) on tensor slot i; the state is the uniform
    product vector, so each x_i is a fair +-1 coin and all moments are
    classical expectations. A negative control: classically independent,
    not boolean independent.
    """
    if n < 1:
        raise ValueError("need n >= 1 variables")
    dim = 2 ** n
    sz = np.diag([1.0, -1.0]).astype(complex)
    eye = np.eye(2, dtype=complex)
    mats = []
    for i in range(n):
        m = np.array([[1.0]], dtype=complex)
        for slot in range(n):
            m = np.kron(m, sz if slot == i else eye)
        mats.append(m)
    vec = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    return MatrixModel(n, dim, tuple(mats), State(vector=vec),
                       label=f"classical-iid(n={n})")


# ---------------------------------------------------------------------------
# on-disk model descriptions


@dataclass
class ModelSpec:
    """JSON-serializable description of a model.

    Schema: {"kind": one of BUILTIN_KINDS or "custom", "n": int,
    "truncation": int (shift kinds), "matrices": nested arrays with
    entries either numbers or [re, im] pairs (custom), "state":
    {"vector": [...]} or {"density": [[...]]} (custom)}.
    """

    kind: str
    n: int
    truncation: int | None = None
    matrices: list | None = None
    state: dict | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        known = {"kind", "n", "truncation", "matrices", "state"}
        extra = {k: v for k, v in data.items() if k not in known}
        return cls(kind=data["kind"], n=int(data["n"]),
                   truncation=data.get("truncation"),
                   matrices=data.get("matrices"), state=data.get("state"),
                   extra=extra)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        if self.truncation is not None:
            out["truncation"] = self.truncation
        if self.matrices is not None:
            out["matrices"] = self.matrices
        if self.state is not None:
            out["state"] = self.state
        out.update(self.extra)
        return out

    def build(self) -> tuple[MatrixModel, CondExpectation | None]:
        if self.kind == "shift-nonunital":
            return build_shift_nonunital(self.n, self.truncation)
        if self.kind == "shift-unital":
            return build_shift_unital(self.n, self.truncation)
        if self.kind == "constant":
            return build_constant(self.n), None
        if self.kind == "zero":
            return build_zero(self.n, self.truncation or 2), None
        if self.kind == "classical-iid":
            return build_classical_iid(self.n), None
        if self.kind == "custom":
            if self.matrices is None or self.state is None:
                raise ValueError("custom model needs 'matrices' and 'state'")
            mats = [_decode_matrix(m) for m in self.matrices]
            dim = mats[0].shape[0]
            if "vector" in self.state:
                st = State(vector=np.asarray([_decode_scalar(v) for v in self.state["vector"]]))
            elif "density" in self.state:
                st = State(density=_decode_matrix(self.state["density"]))
            else:
                raise ValueError("state needs 'vector' or 'density'")
            return MatrixModel(self.n, dim, tuple(mats), st, label="custom"), None
        raise ValueError(f"unknown model kind {self.kind!r}")


def _decode_scalar(v) -> complex:
    if isinstance(v, (list, tuple)):
        re, im = v
        return complex(re, im)
    return complex(v)


def _decode_matrix(rows) -> np.ndarray:
    return np.array([[_decode_scalar(v) for v in row] for row in rows], dtype=complex)


def load_model(source: str, n: int | None = None,
               truncation: int | None = None) -> tuple[MatrixModel, CondExpectation | None]:
    """Build a model from a builtin name or a ModelSpec JSON file path."""
    if source in BUILTIN_KINDS:
        spec = ModelSpec(kind=source, n=n or 3, truncation=truncation)
        return spec.build()
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"model {source!r} is neither a builtin kind nor a file")
    spec = ModelSpec.from_dict(json.loads(path.read_text()))
    if n is not None and n != spec.n:
        raise ValueError(f"requested n={n} but model file declares n={spec.n}")
    return spec.build()
