"""Built-in state families, vectorization and a small gate utility.

States are carried as a DensityMatrix: a bipartite dimension tag plus
the dense matrix.  Construction here does not validate; the built-in
families are valid by construction and externally loaded matrices are
checked explicitly through `load_state` / `is_density_matrix`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .linalg import frobenius_norm, is_density_matrix, kron, partial_trace

KET_PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
KET_PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2.0)

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class DensityMatrix:
    """A bipartite density matrix with subsystem dimension tags."""

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        m, n = self.dims
        if self.matrix.shape != (m * n, m * n):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match dims {self.dims}"
            )

    def validity(self, tol: float = 1e-9):
        return is_density_matrix(self.matrix, tol)

    def marginal(self, keep: str) -> np.ndarray:
        return partial_trace(self.matrix, keep, self.dims)


def werner(a: float) -> DensityMatrix:
    """Mixture of the singlet with the maximally mixed state, weight a."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"mixing parameter {a} outside [0,1]")
    singlet = np.outer(KET_PSI_MINUS, KET_PSI_MINUS.conj())
    rho = a * singlet + (1.0 - a) * np.eye(4) / 4.0
    return DensityMatrix((2, 2), rho.astype(complex))


def mixed_bell_family(a: float) -> DensityMatrix:
    """Rank-3 mixture of |00>, the Bell state |psi+>, and |11>.

    rho(a) = (1/3) [ (1-a)|00><00| + 2|psi+><psi+| + a|11><11| ],
    0 < a <= 1.  The factor 2 on the Bell projector keeps the trace at 1
    (equivalently the Bell ket enters unnormalized).
    """
    if not 0.0 < a <= 1.0:
        raise ValueError(f"mixing parameter {a} outside (0,1]")
    k00 = np.zeros(4)
    k00[0] = 1.0
    k11 = np.zeros(4)
    k11[3] = 1.0
    rho = ((1.0 - a) * np.outer(k00, k00)
           + 2.0 * np.outer(KET_PSI_PLUS, KET_PSI_PLUS)
           + a * np.outer(k11, k11)) / 3.0
    return DensityMatrix((2, 2), rho.astype(complex))


def bell_diagonal(omega) -> DensityMatrix:
    """(1/4)(I + sum_j w_j s_j x s_j); rejects parameter triples that
    produce a negative eigenvalue."""
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (3,):
        raise ValueError("omega must be a real 3-vector")
    rho = np.eye(4, dtype=complex)
    for w, axis in zip(omega, "xyz"):
        rho += w * kron(_PAULI[axis], _PAULI[axis])
    rho /= 4.0
    from .linalg import hermitian_eig

    lam = hermitian_eig(rho).eigenvalues
    if lam[0] < -1e-9:
        raise ValueError(
            f"omega {tuple(omega)} gives negative eigenvalue {lam[0]}"
        )
    return DensityMatrix((2, 2), rho)


# Fixed 4x4 benchmark state (entries quoted to three significant digits,
# hence the symmetrize-and-renormalize repair below).
_FIXED_RANDOM_ENTRIES = [
    [0.437, 0.126 + 0.197j, 0.0271 - 0.0258j, -0.247 + 0.0997j],
    [0.126 - 0.197j, 0.154, -0.0115 - 0.0187j, -0.0315 + 0.170j],
    [0.0271 + 0.0258j, -0.0115 + 0.0187j, 0.0370, 0.00219 - 0.0367j],
    [-0.247 - 0.0997j, -0.0315 - 0.170j, 0.00219 + 0.0367j, 0.372],
]


def fixed_random_state() -> DensityMatrix:
    """A fixed mixed two-qubit benchmark state.

    The raw entries are only three significant digits, so the matrix is
    symmetrized and trace-normalized; construction aborts if the result
    is still far from positive semidefinite.
    """
    raw = np.array(_FIXED_RANDOM_ENTRIES, dtype=complex)
    sym = 0.5 * (raw + raw.conj().T)
    rho = sym / np.trace(sym).real
    from .linalg import hermitian_eig

    lam = hermitian_eig(rho).eigenvalues
    if lam[0] < -1e-3:
        raise ValueError("benchmark state irreparably non-positive")
    return DensityMatrix((2, 2), rho)


@dataclass(frozen=True)
class VectorizedState:
    """Row-major flattening of a matrix, scaled to a unit vector.

    `normalization` keeps the original Frobenius norm so the matrix can
    be recovered exactly.
    """

    dims: tuple[int, int]
    amplitudes: np.ndarray
    normalization: float


def vectorize(rho: DensityMatrix) -> VectorizedState:
    flat = np.asarray(rho.matrix, dtype=complex).reshape(-1)
    norm = frobenius_norm(flat)
    if norm == 0.0:
        raise ValueError("cannot vectorize the zero matrix")
    return VectorizedState(rho.dims, flat / norm, norm)


def devectorize(v: VectorizedState) -> np.ndarray:
    """Inverse of vectorize; returns the dense matrix."""
    m, n = v.dims
    d = m * n
    if v.amplitudes.shape != (d * d,):
        raise ValueError(
            f"amplitude length {v.amplitudes.shape} does not match dims {v.dims}"
        )
    return (v.amplitudes * v.normalization).reshape(d, d)


@dataclass(frozen=True)
class GateOp:
    """One gate in a preparation sequence.

    kind: 'H', 'CNOT', 'U2' (payload: arbitrary 2x2 unitary) or
    'RPARAM' (payload: rotation exp(-i theta/2 axis.sigma)).
    """

    kind: str
    targets: tuple[int, ...]
    matrix: np.ndarray | None = None
    theta: float = 0.0
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def single_qubit_matrix(self) -> np.ndarray:
        if self.kind == "H":
            return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
        if self.kind == "U2":
            u = np.asarray(self.matrix, dtype=complex)
            if u.shape != (2, 2):
                raise ValueError("U2 payload must be 2x2")
            if np.max(np.abs(u @ u.conj().T - np.eye(2))) > 1e-10:
                raise ValueError("U2 payload is not unitary")
            return u
        if self.kind == "RPARAM":
            ax = np.asarray(self.axis, dtype=float)
            ax = ax / math.sqrt(float(ax @ ax))
            ns = (ax[0] * _PAULI["x"] + ax[1] * _PAULI["y"]
                  + ax[2] * _PAULI["z"])
            return (math.cos(self.theta / 2.0) * np.eye(2)
                    - 1j * math.sin(self.theta / 2.0) * ns)
        raise ValueError(f"{self.kind} is not a single-qubit gate")


def _apply_single(state: np.ndarray, u: np.ndarray, target: int,
                  num_qubits: int) -> np.ndarray:
    t = state.reshape([2] * num_qubits)
    t = np.moveaxis(t, target, 0)
    t = np.tensordot(u, t, axes=([1], [0]))
    t = np.moveaxis(t, 0, target)
    return t.reshape(-1)


def _apply_cnot(state: np.ndarray, control: int, target: int,
                num_qubits: int) -> np.ndarray:
    t = state.reshape([2] * num_qubits).copy()
    ctrl_one = [slice(None)] * num_qubits
    ctrl_one[control] = 1
    block = t[tuple(ctrl_one)]
    tgt = target if target < control else target - 1
    t[tuple(ctrl_one)] = np.flip(block, axis=tgt)
    return t.reshape(-1)


def apply_gate_sequence(gates, num_qubits: int) -> np.ndarray:
    """Apply gates left to right to |0...0> and return the statevector."""
    state = np.zeros(2 ** num_qubits, dtype=complex)
    state[0] = 1.0
    for g in gates:
        for t in g.targets:
            if not 0 <= t < num_qubits:
                raise ValueError(f"gate target {t} out of range")
        if g.kind == "CNOT":
            control, target = g.targets
            state = _apply_cnot(state, control, target, num_qubits)
        else:
            (target,) = g.targets
            state = _apply_single(state, g.single_qubit_matrix(), target,
                                  num_qubits)
    return state


def to_json_dict(rho: DensityMatrix) -> dict:
    m = np.asarray(rho.matrix)
    return {
        "dims": list(rho.dims),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def save_state(rho: DensityMatrix, path) -> None:
    with open(path, "w") as f:
        json.dump(to_json_dict(rho), f, indent=1)
        f.write("\n")


def load_state(path, tol: float = 1e-6) -> DensityMatrix:
    """Load the JSON density-matrix format and validate it.

    Raises ValueError naming the defect if the matrix fails Hermiticity,
    trace or positivity checks at `tol`.
    """
    with open(path) as f:
        data = json.load(f)
    try:
        m, n = (int(x) for x in data["dims"])
        re = np.array(data["re"], dtype=float)
        im = np.array(data["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state file: {exc}") from exc
    if re.shape != (m * n, m * n) or im.shape != re.shape:
        raise ValueError(
            f"matrix blocks {re.shape}/{im.shape} do not match dims ({m},{n})"
        )
    rho = DensityMatrix((m, n), re + 1j * im)
    report = rho.validity(tol)
    if not report.valid:
        raise ValueError(f"not a density matrix: {report.describe()}")
    return rho
