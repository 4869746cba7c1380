"""Dense complex linear algebra and entropy primitives.

Everything in this package works on small dense complex matrices
(nothing exceeds 16x16), stored row-major as numpy arrays.  All
entropies are in bits (base-2 logarithms).  The Hermitian eigensolver
is a cyclic complex Jacobi iteration, so results are deterministic and
carry no dependency on an external LAPACK build.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# Tolerances used throughout; see module docstrings for rationale.
HERMITICITY_TOL = 1e-9
JACOBI_OFFDIAG_TOL = 1e-12
EIG_CLAMP = 1e-10
PSD_TOL = 1e-8


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(rho: np.ndarray, keep: str, dims: tuple[int, int]) -> np.ndarray:
    """Trace out one subsystem of a bipartite operator on an m*n space.

    keep='A' returns the m x m reduction, keep='B' the n x n one.
    """
    m, n = dims
    rho = np.asarray(rho)
    if rho.shape != (m * n, m * n):
        raise ValueError(
            f"operator shape {rho.shape} does not match dims ({m},{n})"
        )
    r = rho.reshape(m, n, m, n)
    if keep == "A":
        return np.trace(r, axis1=1, axis2=3)
    if keep == "B":
        return np.trace(r, axis1=0, axis2=2)
    raise ValueError("keep must be 'A' or 'B'")


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum of a Hermitian matrix, eigenvalues ascending.

    eigenvectors holds orthonormal eigenvectors as columns, matching
    the eigenvalue order.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def frobenius_norm(a: np.ndarray) -> float:
    return math.sqrt(float(np.sum(np.abs(a) ** 2)))


def hermiticity_defect(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def hermitian_eig(h: np.ndarray, tol: float = JACOBI_OFFDIAG_TOL,
                  max_sweeps: int = 60) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    The input is symmetrized by (H + H^dag)/2 first; inputs that are
    non-Hermitian beyond HERMITICITY_TOL (relative to the largest entry)
    are rejected.  Iterates sweeps of complex plane rotations until the
    off-diagonal Frobenius norm drops below tol * ||H||.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError("matrix must be square")
    scale = float(np.max(np.abs(h))) if h.size else 0.0
    if hermiticity_defect(h) > HERMITICITY_TOL * max(scale, 1.0):
        raise ValueError("matrix is not Hermitian within tolerance")
    a = 0.5 * (h + h.conj().T)
    v = np.eye(n, dtype=complex)
    norm = frobenius_norm(a)
    if norm == 0.0:
        return EigenDecomposition(np.zeros(n), v)

    for _ in range(max_sweeps):
        offmat = a.copy()
        np.fill_diagonal(offmat, 0.0)
        off = frobenius_norm(offmat)
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol * norm / (n * n):
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # Phase out a[p,q], then a real rotation annihilates it.
                phase = cmath.exp(-1j * cmath.phase(apq))
                theta = 0.5 * math.atan2(2.0 * abs(apq), app - aqq)
                c = math.cos(theta)
                s = math.sin(theta)
                g = np.array([[c, -s], [phase * s, phase * c]], dtype=complex)
                a[[p, q], :] = g.conj().T @ a[[p, q], :]
                a[:, [p, q]] = a[:, [p, q]] @ g
                v[:, [p, q]] = v[:, [p, q]] @ g

    vals = np.diag(a).real.copy()
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order], v[:, order])


def entropy_of_spectrum(vals) -> float:
    """-sum lam log2 lam over a spectrum, with 0 log 0 = 0.

    Eigenvalues in (-PSD_TOL, 0) are clamped to zero (eigensolver
    round-off); anything below -PSD_TOL is a genuine PSD violation.
    """
    s = 0.0
    for lam in np.asarray(vals, dtype=float):
        if lam < -PSD_TOL:
            raise ValueError(f"negative eigenvalue {lam}: not positive semidefinite")
        if lam <= 0.0:
            continue
        s -= lam * math.log2(lam)
    return s


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -Tr(rho log2 rho) in bits."""
    return entropy_of_spectrum(hermitian_eig(rho).eigenvalues)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), clamped within 1e-12 of [0,1]."""
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise ValueError(f"binary entropy argument {x} outside [0,1]")
    x = min(max(x, 0.0), 1.0)
    s = 0.0
    if x > 0.0:
        s -= x * math.log2(x)
    if x < 1.0:
        s -= (1.0 - x) * math.log2(1.0 - x)
    return s


def shannon_entropy(p) -> float:
    """-sum p log2 p for a probability vector."""
    p = np.asarray(p, dtype=float)
    if abs(float(p.sum()) - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    if float(p.min()) < -1e-12:
        raise ValueError(f"negative probability {p.min()}")
    s = 0.0
    for x in p:
        if x > 0.0:
            s -= x * math.log2(x)
    return s


@dataclass(frozen=True)
class ValidityReport:
    """Defects of a candidate density matrix against a tolerance."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    tol: float

    @property
    def valid(self) -> bool:
        return (self.hermiticity_defect <= self.tol
                and self.trace_defect <= self.tol
                and self.min_eigenvalue >= -self.tol)

    def describe(self) -> str:
        return (f"hermiticity defect {self.hermiticity_defect:.3e}, "
                f"trace defect {self.trace_defect:.3e}, "
                f"min eigenvalue {self.min_eigenvalue:.3e} "
                f"(tol {self.tol:.1e})")


def is_density_matrix(m: np.ndarray, tol: float = 1e-9) -> ValidityReport:
    """Report Hermiticity, trace and positivity defects of a square matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise ValueError("density matrix candidate must be square")
    herm = hermiticity_defect(m)
    tr = abs(complex(np.trace(m)) - 1.0)
    sym = 0.5 * (m + m.conj().T)
    min_eig = float(hermitian_eig(sym).eigenvalues[0])
    return ValidityReport(herm, tr, min_eig, tol)
