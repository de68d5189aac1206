"""Nearest-neighbour cellular-automaton operators on a path of N sites.

The local operator is a 4x4 matrix of transition weights a^{ij}_{kl} from an
adjacent site pair (i, j) to (k, l), with rows indexed by the output pair and
columns by the input pair in basis order (00, 01, 10, 11).  The right site of
a pair never changes (a^{ij}_{kl} = 0 for j != l), which is what makes the
global operator well defined:

    Q_N = (I x ... x Q) (I x ... x Q x I) ... (Q x I x ... x I),

a product of N-1 Kronecker layers on the 2^N-dimensional configuration space.
Site 0 is the most significant bit of the basis index, so the configuration
(0,0,1) is basis vector 1 of dimension 8.

Vectors are plain numpy arrays: dtype object for exact entries, complex or
float otherwise.  All values here are immutable after construction and all
operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CapabilityError, ExactnessError
from .scalars import (
    Scalar,
    entry_from_json,
    entry_to_json,
    is_exact,
    trig_values,
)

# Dense materialization refuses above this site count unless overridden.
DENSE_CAP_SITES = 12

DEFAULT_CLASSIFY_TOL = 1e-10

Configuration = tuple[int, ...]

# Forbidden (row, col) slots of a local operator: output pair (k,l), input
# pair (i,j) with j != l.
_FORBIDDEN_SLOTS = tuple(
    (2 * k + l, 2 * i + j)
    for k in (0, 1)
    for l in (0, 1)
    for i in (0, 1)
    for j in (0, 1)
    if j != l
)


def _matrix_is_exact(matrix: np.ndarray) -> bool:
    if matrix.dtype != object:
        return False
    return all(is_exact(v) for v in matrix.flat)


def _as_object_array(rows: Sequence[Sequence[Scalar]]) -> np.ndarray:
    arr = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            arr[i, j] = v
    return arr


def _freeze(matrix: np.ndarray) -> np.ndarray:
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """4x4 transition-weight matrix with right-site preservation."""

    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (4, 4):
            raise ValueError("local operator must be 4x4")
        for r, c in _FORBIDDEN_SLOTS:
            if self.matrix[r, c] != 0:
                raise ValueError(
                    f"right-site preservation violated at row {r}, col {c}"
                )
        _freeze(self.matrix)

    @property
    def exact(self) -> bool:
        return _matrix_is_exact(self.matrix)

    def weight(self, in_pair: tuple[int, int], out_pair: tuple[int, int]) -> Scalar:
        """Transition weight a^{ij}_{kl} for (i,j) -> (k,l)."""
        i, j = in_pair
        k, l = out_pair
        return self.matrix[2 * k + l, 2 * i + j]

    def block(self, right_state: int) -> np.ndarray:
        """2x2 action on the left site when the right site is fixed."""
        idx = [2 * b + right_state for b in (0, 1)]
        return self.matrix[np.ix_(idx, idx)]

    def as_complex(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=complex)

    def to_json(self) -> dict:
        return matrix_to_json(self.matrix)

    @classmethod
    def from_json(cls, obj: dict) -> "LocalOperator":
        return cls(matrix_from_json(obj))


def matrix_to_json(matrix: np.ndarray) -> dict:
    rows, cols = matrix.shape
    entries = [entry_to_json(v) for v in matrix.flat]
    return {"rows": rows, "cols": cols, "entries": entries}


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    values = [entry_from_json(e) for e in obj["entries"]]
    if len(values) != rows * cols:
        raise ValueError("entry count does not match rows*cols")
    if all(is_exact(v) for v in values):
        arr = _as_object_array([values[r * cols : (r + 1) * cols] for r in range(rows)])
    elif any(isinstance(v, complex) for v in values):
        arr = np.array(values, dtype=complex).reshape(rows, cols)
    else:
        arr = np.array([float(v) for v in values], dtype=float).reshape(rows, cols)
    return arr


def local_from_blocks(block0, block1) -> LocalOperator:
    """Assemble a local operator from its two 2x2 right-state blocks.

    block0 acts on the left site when the right site is 0, block1 when it
    is 1; the layout enforces right-site preservation by construction.
    """
    b0 = [[block0[k][i] for i in (0, 1)] for k in (0, 1)]
    b1 = [[block1[k][i] for i in (0, 1)] for k in (0, 1)]
    exact = all(is_exact(v) for row in b0 + b1 for v in row)
    zero: Scalar = 0 if exact else 0.0
    rows = [[zero] * 4 for _ in range(4)]
    for k in (0, 1):
        for i in (0, 1):
            rows[2 * k + 0][2 * i + 0] = b0[k][i]
            rows[2 * k + 1][2 * i + 1] = b1[k][i]
    if exact:
        return LocalOperator(_as_object_array(rows))
    if any(isinstance(v, complex) for row in rows for v in row):
        return LocalOperator(np.array(rows, dtype=complex))
    return LocalOperator(np.array(rows, dtype=float))


def _rotation(theta: float):
    c, s = trig_values(theta)
    return [[c, -s], [s, c]]


def _reflection(theta: float):
    c, s = trig_values(theta)
    return [[-s, c], [c, s]]


def local_qca1(xi1: float, xi2: float) -> LocalOperator:
    """First rotation-pair family; xi1 = xi2 = 0 gives the identity."""
    return local_from_blocks(_rotation(xi1), _rotation(xi2))


def local_qca2(xi1: float, xi2: float) -> LocalOperator:
    """Second family; xi1 = xi2 = 0 gives the Rule 90 permutation."""
    return local_from_blocks(_rotation(xi1), _reflection(xi2))


def local_tensor(xi: float) -> LocalOperator:
    """Tensor-type operator I2 (x) E00 + sigma(xi) (x) E11.

    sigma(xi) = [[-sin, cos], [cos, sin]] is an involution, so the operator
    is orthogonal for every xi.  Coincides with local_qca2(0, xi).
    """
    c, s = trig_values(xi)
    one: Scalar = 1 if is_exact(c) else 1.0
    zero: Scalar = 0 if is_exact(c) else 0.0
    eye2 = [[one, zero], [zero, one]]
    sigma = [[-s, c], [c, s]]
    e00 = [[one, zero], [zero, zero]]
    e11 = [[zero, zero], [zero, one]]

    def kron2(a, b):
        return [
            [a[p][q] * b[r][c_] for q in (0, 1) for c_ in (0, 1)]
            for p in (0, 1)
            for r in (0, 1)
        ]

    ka = kron2(eye2, e00)
    kb = kron2(sigma, e11)
    rows = [[ka[r][c_] + kb[r][c_] for c_ in range(4)] for r in range(4)]
    if all(is_exact(v) for row in rows for v in row):
        return LocalOperator(_as_object_array(rows))
    return LocalOperator(np.array(rows, dtype=float))


def config_index(bits: Sequence[int]) -> int:
    """Basis index of a configuration; site 0 is the most significant bit."""
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError("configuration bits must be 0 or 1")
        idx = (idx << 1) | b
    return idx


def index_config(index: int, n_sites: int) -> Configuration:
    if not 0 <= index < (1 << n_sites):
        raise ValueError("index out of range")
    return tuple((index >> (n_sites - 1 - x)) & 1 for x in range(n_sites))


def parse_config(text: str) -> Configuration:
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"not a bit string: {text!r}")
    return tuple(int(ch) for ch in text)


def format_config(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def basis_state(bits: Sequence[int], exact: bool = False) -> np.ndarray:
    """Unit vector of the basis configuration."""
    n = len(bits)
    if exact:
        vec = np.zeros(1 << n, dtype=object)
        vec[:] = 0
        vec[config_index(bits)] = 1
    else:
        vec = np.zeros(1 << n, dtype=complex)
        vec[config_index(bits)] = 1.0
    return vec


def _apply_layer(q4: np.ndarray, vec: np.ndarray, x: int, n_sites: int) -> np.ndarray:
    """Apply I_{2^x} (x) Q (x) I_{2^(n-x-2)} to a batch of vectors.

    vec may be shape (2^n,) or (2^n, m); columns are independent states.
    """
    lead = 1 << x
    trail = 1 << (n_sites - x - 2)
    cols = 1 if vec.ndim == 1 else vec.shape[1]
    v = vec.reshape(lead, 4, trail * cols)
    out = np.tensordot(q4, v, axes=([1], [1]))  # (4, lead, trail*cols)
    out = np.moveaxis(out, 0, 1)
    return np.ascontiguousarray(out).reshape(vec.shape)


@dataclass(frozen=True, eq=False)
class GlobalOperator:
    """Ordered product of Kronecker layers of one local operator.

    Layers are applied for x = 0 up to N-2 (the factor Q (x) I (x) ... acts
    first), which reproduces the printed operator product read right to
    left.  For N = 1 the operator is the 2x2 identity.
    """

    local: LocalOperator
    n_sites: int
    dense_cap: int = DENSE_CAP_SITES

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("need at least one site")

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    @property
    def exact(self) -> bool:
        return self.local.exact

    def layer_sites(self) -> Iterable[int]:
        """Left sites of the layers in application order."""
        return range(self.n_sites - 1)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        if vec.shape[0] != self.dim:
            raise ValueError(f"state length must be {self.dim}")
        if self.n_sites == 1:
            return vec.copy()
        if self.exact and vec.dtype == object:
            q4 = self.local.matrix
        else:
            q4 = self.local.as_complex()
            vec = np.asarray(vec, dtype=complex)
        out = vec
        for x in self.layer_sites():
            out = _apply_layer(q4, out, x, self.n_sites)
        return out

    def dense(self, cap: int | None = None) -> np.ndarray:
        """Materialized 2^N x 2^N matrix (cached)."""
        cap = self.dense_cap if cap is None else cap
        if self.n_sites > cap:
            raise CapabilityError(
                f"dense materialization capped at {cap} sites (requested {self.n_sites})"
            )
        cached = getattr(self, "_dense", None)
        if cached is None:
            if self.exact:
                eye = np.zeros((self.dim, self.dim), dtype=object)
                for i in range(self.dim):
                    eye[i, i] = 1
            else:
                eye = np.eye(self.dim, dtype=complex)
            mat = self.apply(eye)
            object.__setattr__(self, "_dense", _freeze(mat))
            cached = mat
        return cached

    def as_complex(self, cap: int | None = None) -> np.ndarray:
        return np.asarray(self.dense(cap), dtype=complex)


def assemble_global(local: LocalOperator, n_sites: int, dense_cap: int = DENSE_CAP_SITES) -> GlobalOperator:
    """Global evolution operator on n_sites path sites (n_sites >= 1)."""
    return GlobalOperator(local=local, n_sites=n_sites, dense_cap=dense_cap)


def transition_weight(local: LocalOperator, frm: Sequence[int], to: Sequence[int]) -> Scalar:
    """Weight of the one-step transition between two configurations.

    Equal to the dense global-operator entry: the layer at site x fires
    while site x+1 still holds its input state, so the weight is
    prod_x a^{i_x i_{x+1}}_{k_x i_{x+1}}, and the last site must be fixed.
    """
    if len(frm) != len(to):
        raise ValueError("configurations must have equal length")
    n = len(frm)
    if n < 2:
        raise ValueError("need at least two sites")
    zero: Scalar = 0 if local.exact else 0.0
    if frm[-1] != to[-1]:
        return zero
    one: Scalar = 1 if local.exact else 1.0
    weight = one
    for x in range(n - 1):
        factor = local.weight((frm[x], frm[x + 1]), (to[x], frm[x + 1]))
        if factor == 0:
            return zero
        weight = weight * factor
    return weight


@dataclass(frozen=True)
class OperatorClass:
    """Structure flags of a square operator at a given tolerance."""

    unitary: bool
    orthogonal: bool
    transposed_stochastic: bool
    permutation: bool
    tol: float

    def __post_init__(self):
        if self.permutation and not (self.orthogonal and self.transposed_stochastic):
            raise ValueError("a permutation matrix is orthogonal and stochastic")


def _dense_of(op) -> np.ndarray:
    if isinstance(op, LocalOperator):
        return op.as_complex()
    if isinstance(op, GlobalOperator):
        return op.as_complex()
    return np.asarray(op, dtype=complex)


def classify(op, tol: float = DEFAULT_CLASSIFY_TOL) -> OperatorClass:
    """Classify a square matrix as unitary / orthogonal / transposed
    stochastic / permutation, each within tol.

    Entries are snapped to {0, 1} only for the permutation flag.
    """
    m = _dense_of(op)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("classify needs a square matrix")
    dim = m.shape[0]
    gram = m.conj().T @ m
    unitary = bool(np.max(np.abs(gram - np.eye(dim))) < tol)
    real = bool(np.max(np.abs(m.imag)) < tol)
    orthogonal = unitary and real

    col_sums = m.sum(axis=0)
    in_range = bool(
        real
        and np.all(m.real >= -tol)
        and np.all(m.real <= 1.0 + tol)
    )
    stochastic = in_range and bool(np.max(np.abs(col_sums - 1.0)) < tol)

    permutation = False
    if real:
        near0 = np.abs(m.real) < tol
        near1 = np.abs(m.real - 1.0) < tol
        if bool(np.all(near0 | near1)):
            snapped = near1.astype(int)
            permutation = bool(
                np.all(snapped.sum(axis=0) == 1) and np.all(snapped.sum(axis=1) == 1)
            )
    return OperatorClass(
        unitary=unitary,
        orthogonal=orthogonal,
        transposed_stochastic=stochastic,
        permutation=permutation,
        tol=tol,
    )


def evolve(global_op: GlobalOperator, initial: np.ndarray, steps: int) -> np.ndarray:
    """(Q_N)^steps applied to the initial state, layer by layer."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    state = np.asarray(initial)
    if state.shape != (global_op.dim,):
        raise ValueError(f"state length must be {global_op.dim}")
    if state.dtype != object and global_op.exact:
        state = state.astype(complex)
    out = state.copy()
    for _ in range(steps):
        out = global_op.apply(out)
    return out


def measure_probabilities(state: np.ndarray, mode: str = "quantum") -> list[tuple[Configuration, float]]:
    """Per-configuration probabilities of a state vector.

    mode="quantum" squares amplitude moduli; mode="stochastic" reads the
    amplitudes themselves as probabilities (transposed-stochastic dynamics
    acting on a probability vector).
    """
    n = (len(state) - 1).bit_length()
    if len(state) != (1 << n):
        raise ValueError("state length must be a power of two")
    out = []
    for idx, amp in enumerate(state):
        if mode == "quantum":
            p = float(abs(complex(amp)) ** 2)
        elif mode == "stochastic":
            a = complex(amp)
            p = float(a.real)
        else:
            raise ValueError("mode must be 'quantum' or 'stochastic'")
        out.append((index_config(idx, n), p))
    return out


def local_stochastic(p1: float, p2: float) -> LocalOperator:
    """Transposed-stochastic local operator (Domany-Kinzel style blocks).

    The left site becomes 1 with probability p1 when exactly one site of
    the input pair is occupied, p2 when both are, 0 when neither is.
    """
    for p in (p1, p2):
        if not 0.0 <= p <= 1.0:
            raise ValueError("probabilities must lie in [0, 1]")
    b0 = [[1.0, 1.0 - p1], [0.0, p1]]
    b1 = [[1.0 - p1, 1.0 - p2], [p1, p2]]
    return local_from_blocks(b0, b1)
