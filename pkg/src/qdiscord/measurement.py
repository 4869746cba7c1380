"""Parameterized von Neumann measurements on subsystem B.

A measurement basis is the pair of rank-1 projectors obtained by
conjugating |0><0|, |1><1| with V = r I + i (y . sigma), where
(r, y1, y2, y3) is a point on the unit 3-sphere.  Optimizer-facing
coordinates are three unconstrained hyperspherical angles; the sphere
constraint holds by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import entropy_of_spectrum, kron
from .states import DensityMatrix, VectorizedState, devectorize

PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class VonNeumannMeasurement:
    """Unit 4-vector (r, y) defining the measurement basis on B."""

    r: float
    y: tuple[float, float, float]

    def __post_init__(self):
        norm = self.r ** 2 + sum(c * c for c in self.y)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"(r, y) has squared norm {norm}, expected 1")

    def unitary(self) -> np.ndarray:
        v = self.r * np.eye(2, dtype=complex)
        for c, s in zip(self.y, PAULIS):
            v = v + 1j * c * s
        return v

    def bloch_direction(self) -> np.ndarray:
        """Bloch vector of the first projector: the image of z under
        conjugation by the measurement unitary."""
        v = self.unitary()
        m = v @ PAULIS[2] @ v.conj().T
        return np.array([0.5 * np.trace(s @ m).real for s in PAULIS])


def from_angles(phi) -> VonNeumannMeasurement:
    """Hyperspherical map from three unconstrained angles onto the sphere."""
    p1, p2, p3 = (float(x) for x in phi)
    r = math.cos(p1)
    s1 = math.sin(p1)
    y1 = s1 * math.cos(p2)
    y2 = s1 * math.sin(p2) * math.cos(p3)
    y3 = s1 * math.sin(p2) * math.sin(p3)
    return VonNeumannMeasurement(r, (y1, y2, y3))


def hyperspherical_angles(meas: VonNeumannMeasurement) -> np.ndarray:
    """Inverse of from_angles (one representative of the fiber)."""
    r = max(min(meas.r, 1.0), -1.0)
    y1, y2, y3 = meas.y
    p1 = math.acos(r)
    s1 = math.sin(p1)
    if s1 < 1e-14:
        return np.array([p1, 0.0, 0.0])
    p2 = math.acos(max(min(y1 / s1, 1.0), -1.0))
    s2 = math.sin(p2)
    if s1 * s2 < 1e-14:
        return np.array([p1, p2, 0.0])
    p3 = math.atan2(y3 / (s1 * s2), y2 / (s1 * s2))
    return np.array([p1, p2, p3])


def from_bloch(direction) -> VonNeumannMeasurement:
    """Measurement whose first projector has the given Bloch direction."""
    d = np.asarray(direction, dtype=float)
    d = d / math.sqrt(float(d @ d))
    theta = math.acos(max(min(d[2], 1.0), -1.0))
    phi = math.atan2(d[1], d[0])
    half = theta / 2.0
    return VonNeumannMeasurement(
        math.cos(half),
        (math.sin(half) * math.sin(phi), -math.sin(half) * math.cos(phi), 0.0),
    )


@dataclass(frozen=True)
class ProjectorPair:
    pi0: np.ndarray
    pi1: np.ndarray


def projectors(meas: VonNeumannMeasurement) -> ProjectorPair:
    v = meas.unitary()
    cols = [v[:, 0], v[:, 1]]
    return ProjectorPair(
        np.outer(cols[0], cols[0].conj()),
        np.outer(cols[1], cols[1].conj()),
    )


@dataclass(frozen=True)
class MeasurementEnsemble:
    """Outcome probabilities and post-measurement states.

    Outcomes with probability below PROB_FLOOR carry rho_j = None and
    are excluded from entropy sums.
    """

    outcomes: tuple


def apply_measurement(rho: DensityMatrix, pair: ProjectorPair) -> MeasurementEnsemble:
    m, n = rho.dims
    if n != 2:
        raise ValueError("measurement acts on a 2-dimensional subsystem B")
    outcomes = []
    im = np.eye(m)
    for pi in (pair.pi0, pair.pi1):
        full = kron(im, pi)
        projected = full @ rho.matrix @ full
        p = float(np.trace(projected).real)
        if p < PROB_FLOOR:
            outcomes.append((max(p, 0.0), None))
        else:
            outcomes.append((p, DensityMatrix(rho.dims, projected / p)))
    return MeasurementEnsemble(tuple(outcomes))


def _eigvals_2x2(h: np.ndarray):
    """Closed-form eigenvalues of a Hermitian 2x2 matrix."""
    a = h[0, 0].real
    d = h[1, 1].real
    b = h[0, 1]
    disc = math.sqrt(max((a - d) ** 2 + 4.0 * abs(b) ** 2, 0.0))
    half = 0.5 * (a + d)
    return half - 0.5 * disc, half + 0.5 * disc


def _marginal_entropy(rho_a: np.ndarray) -> float:
    if rho_a.shape == (2, 2):
        return entropy_of_spectrum(_eigvals_2x2(rho_a))
    from .linalg import hermitian_eig

    return entropy_of_spectrum(hermitian_eig(rho_a).eigenvalues)


def conditional_entropy(rho: DensityMatrix,
                        meas: VonNeumannMeasurement) -> float:
    """sum_j p_j S(rho_j) for the two projective outcomes on B.

    The entropy is evaluated on the A-marginal of each outcome; after a
    rank-1 projection on B the outcome factorizes with a pure B part, so
    this equals the entropy of the full post-measurement state.
    """
    m, n = rho.dims
    if n != 2:
        raise ValueError("measurement acts on a 2-dimensional subsystem B")
    v = meas.unitary()
    r4 = np.asarray(rho.matrix).reshape(m, 2, m, 2)
    total = 0.0
    for j in range(2):
        ket = v[:, j]
        # A-marginal of (I x Pi_j) rho (I x Pi_j): sandwich the B indices.
        red = np.einsum("b,abcd,d->ac", ket.conj(), r4, ket)
        p = float(np.trace(red).real)
        if p < PROB_FLOOR:
            continue
        total += p * _marginal_entropy(red / p)
    return total


def conditional_entropy_fn(rho: DensityMatrix):
    """Precompiled conditional-entropy evaluator for a fixed state.

    The conditioned A-marginal is affine in the Bloch direction of the
    measured projector, so contracting the B indices against I and the
    three Paulis once makes each later evaluation a handful of 2x2
    operations.  Intended for grid sweeps; agrees with
    conditional_entropy to machine precision.
    """
    m, n = rho.dims
    if n != 2:
        raise ValueError("measurement acts on a 2-dimensional subsystem B")
    r4 = np.asarray(rho.matrix).reshape(m, 2, m, 2)
    t_id = np.einsum("abcb->ac", r4)
    t_pauli = [np.einsum("abcd,db->ac", r4, s) for s in PAULIS]

    if m != 2:
        def evaluate(meas: VonNeumannMeasurement) -> float:
            r, (y1, y2, y3) = meas.r, meas.y
            z = (2.0 * (-r * y2 + y1 * y3),
                 2.0 * (r * y1 + y2 * y3),
                 r * r + y3 * y3 - y1 * y1 - y2 * y2)
            zs = z[0] * t_pauli[0] + z[1] * t_pauli[1] + z[2] * t_pauli[2]
            total = 0.0
            for red in (0.5 * (t_id + zs), 0.5 * (t_id - zs)):
                p = float(np.trace(red).real)
                if p < PROB_FLOOR:
                    continue
                total += p * _marginal_entropy(red / p)
            return total

        return evaluate

    # Two-dimensional A: each contracted matrix is Hermitian, so carry
    # its real diagonal and one off-diagonal entry as plain scalars and
    # evaluate without any per-call array work.
    log2 = math.log2
    mats = (t_id,) + tuple(t_pauli)
    aa = tuple(float(t[0, 0].real) for t in mats)
    dd = tuple(float(t[1, 1].real) for t in mats)
    bb = tuple(complex(t[0, 1]) for t in mats)

    def evaluate(meas: VonNeumannMeasurement) -> float:
        r, (y1, y2, y3) = meas.r, meas.y
        z1 = 2.0 * (-r * y2 + y1 * y3)
        z2 = 2.0 * (r * y1 + y2 * y3)
        z3 = r * r + y3 * y3 - y1 * y1 - y2 * y2
        az = z1 * aa[1] + z2 * aa[2] + z3 * aa[3]
        dz = z1 * dd[1] + z2 * dd[2] + z3 * dd[3]
        bz = z1 * bb[1] + z2 * bb[2] + z3 * bb[3]
        total = 0.0
        for sign in (1.0, -1.0):
            a = 0.5 * (aa[0] + sign * az)
            d = 0.5 * (dd[0] + sign * dz)
            b = 0.5 * (bb[0] + sign * bz)
            p = a + d
            if p < PROB_FLOOR:
                continue
            disc = math.sqrt(max((a - d) ** 2
                                 + 4.0 * (b.real ** 2 + b.imag ** 2), 0.0))
            for lam in (0.5 * (p - disc), 0.5 * (p + disc)):
                if lam > 0.0:
                    total -= lam * log2(lam / p)
        return total

    return evaluate


def bell_conditional_entropy(omega, meas: VonNeumannMeasurement) -> float:
    """Fast path for states (1/4)(I + sum w_j s_j x s_j).

    Both outcomes are equiprobable and share the entropy of a qubit with
    Bloch length xi = |(w_1 z_1, w_2 z_2, w_3 z_3)|, where z is the
    measurement direction obtained by conjugation.
    """
    from .linalg import binary_entropy

    omega = np.asarray(omega, dtype=float)
    z = meas.bloch_direction()
    xi = math.sqrt(float(np.sum((omega * z) ** 2)))
    xi = min(xi, 1.0)
    return binary_entropy((1.0 + xi) / 2.0)


def apply_superop_vectorized(v: VectorizedState, pair: ProjectorPair):
    """Vectorized route: Pi rho Pi becomes (Pi x Pi^T) |rho>.

    Returns, per outcome, the probability weight and the image as a
    VectorizedState whose devectorization equals (I x Pi_j) rho (I x Pi_j).
    """
    m, n = v.dims
    if n != 2:
        raise ValueError("measurement acts on a 2-dimensional subsystem B")
    d = m * n
    if v.amplitudes.shape != (d * d,):
        raise ValueError("vectorized state length does not match dims")
    im = np.eye(m)
    results = []
    for pi in (pair.pi0, pair.pi1):
        full = kron(im, pi)
        superop = kron(full, full.T)
        image = superop @ v.amplitudes
        norm = math.sqrt(float(np.sum(np.abs(image) ** 2)))
        # Probability: trace of the devectorized (unnormalized) image.
        weight = float((image.reshape(d, d).trace() * v.normalization).real)
        if norm == 0.0:
            results.append((max(weight, 0.0),
                            VectorizedState(v.dims, image, 0.0)))
        else:
            results.append((weight,
                            VectorizedState(v.dims, image / norm,
                                            norm * v.normalization)))
    return results


def vectorized_conditional_entropy(v: VectorizedState,
                                   meas: VonNeumannMeasurement) -> float:
    """Conditional entropy computed entirely through the vectorized route."""
    total = 0.0
    for weight, image in apply_superop_vectorized(v, projectors(meas)):
        if weight < PROB_FLOOR:
            continue
        mat = devectorize(image) / weight
        red = np.trace(mat.reshape(v.dims[0], 2, v.dims[0], 2),
                       axis1=1, axis2=3)
        total += weight * _marginal_entropy(red)
    return total
