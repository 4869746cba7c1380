"""Minimizers for the conditional-entropy cost over measurement angles.

Costs are pure functions of a 3-vector of unconstrained hyperspherical
angles.  Gradient descent uses either a finite-difference gradient of
the full cost or the closed-form gradient available on the Bell-diagonal
family; Nelder-Mead needs no gradient.  A brute-force sphere grid with
local refinement serves as the independent verification oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .measurement import from_angles, from_bloch

GRAD_CLAMP = 1e6
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "nelder_mead"
    eta: float = 0.05
    fd_step: float = 1e-6
    tol: float = 1e-8
    max_iter: int = 5000
    restarts: int = 8
    seed: int = 42

    def __post_init__(self):
        if self.eta <= 0 or self.fd_step <= 0 or self.tol <= 0:
            raise ValueError("eta, fd_step and tol must be positive")
        if self.max_iter < 1 or self.restarts < 1:
            raise ValueError("max_iter and restarts must be at least 1")
        if self.method not in ("gradient_descent", "nelder_mead",
                               "grid_then_polish"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class OptimizationResult:
    best_params: np.ndarray
    best_value: float
    iterations: int
    converged: bool
    trace: tuple = ()


def finite_diff_gradient(cost, theta, h: float):
    """Central differences, one coordinate at a time."""
    if h <= 0:
        raise ValueError("step must be positive")
    theta = np.asarray(theta, dtype=float)
    g = np.zeros_like(theta)
    for k in range(theta.size):
        e = np.zeros_like(theta)
        e[k] = h
        g[k] = (cost(theta + e) - cost(theta - e)) / (2.0 * h)
    return g


def _hyperspherical_jacobian(phi):
    """d(r, y1, y2, y3)/d(phi1, phi2, phi3) as a 4x3 matrix."""
    p1, p2, p3 = phi
    c1, s1 = math.cos(p1), math.sin(p1)
    c2, s2 = math.cos(p2), math.sin(p2)
    c3, s3 = math.cos(p3), math.sin(p3)
    return np.array([
        [-s1, 0.0, 0.0],
        [c1 * c2, -s1 * s2, 0.0],
        [c1 * s2 * c3, s1 * c2 * c3, -s1 * s2 * s3],
        [c1 * s2 * s3, s1 * c2 * s3, s1 * s2 * c3],
    ])


def _z_and_jacobian(phi):
    """Measurement direction z(phi) and dz/dphi via conjugation.

    z is read off V sigma_z V^dag; each derivative uses the product rule
    with dV built from the hyperspherical Jacobian.
    """
    from .measurement import PAULIS

    meas = from_angles(phi)
    v = meas.unitary()
    jac4 = _hyperspherical_jacobian(np.asarray(phi, dtype=float))
    sz = PAULIS[2]
    core = v @ sz @ v.conj().T
    z = np.array([0.5 * np.trace(s @ core).real for s in PAULIS])
    dz = np.zeros((3, 3))
    for k in range(3):
        dv = jac4[0, k] * np.eye(2, dtype=complex)
        for i in range(3):
            dv = dv + 1j * jac4[1 + i, k] * PAULIS[i]
        dcore = dv @ sz @ v.conj().T + v @ sz @ dv.conj().T
        dz[:, k] = [0.5 * np.trace(s @ dcore).real for s in PAULIS]
    return z, dz


def analytic_gradient_bell(omega, phi):
    """Gradient of h((1 + xi)/2) with xi = |omega * z(phi)|.

    Near xi = 1 the binary-entropy derivative diverges; components are
    clamped to +-GRAD_CLAMP, which the descent loop treats as a signal
    to switch to a line search.
    """
    omega = np.asarray(omega, dtype=float)
    z, dz = _z_and_jacobian(phi)
    wz = omega * z
    xi = math.sqrt(float(wz @ wz))
    if xi < 1e-12:
        return np.zeros(3)
    dxi = (omega ** 2 * z) @ dz / xi
    one_minus = max(1.0 - xi, 1e-300)
    dh = 0.5 * math.log2(one_minus / (1.0 + xi))
    return np.clip(dh * dxi, -GRAD_CLAMP, GRAD_CLAMP)


def _golden_section(fline, a: float, b: float, tol: float, max_iter: int = 200):
    """Golden-section minimization of a 1-D function on [a, b]."""
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = fline(x1), fline(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = fline(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = fline(x2)
        it += 1
    return (x1, f1) if f1 <= f2 else (x2, f2)


def gradient_descent(cost, grad, theta0, cfg: OptimizerConfig) -> OptimizationResult:
    """Fixed-step descent with backtracking.

    A proposed step that would increase the cost is rejected and the
    learning rate halved (up to 20 halvings), so the accepted-value
    sequence is non-increasing.  Saturated (clamped) gradients trigger a
    golden-section search along the descent direction instead of a raw
    step.
    """
    theta = np.asarray(theta0, dtype=float).copy()
    f = cost(theta)
    eta = cfg.eta
    halvings = 0
    trace = [(0, f)]
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        g = np.asarray(grad(theta), dtype=float)
        gnorm = math.sqrt(float(g @ g))
        if gnorm < cfg.tol:
            converged = True
            break
        if np.max(np.abs(g)) >= GRAD_CLAMP:
            direction = g / gnorm
            t, fv = _golden_section(
                lambda t: cost(theta - t * direction), 0.0, math.pi, cfg.tol)
            cand, fc = theta - t * direction, fv
        else:
            cand = theta - eta * g
            fc = cost(cand)
        if fc <= f + 1e-15:
            delta = f - fc
            theta, f = cand, fc
            trace.append((it, f))
            if delta < cfg.tol:
                converged = True
                break
        else:
            halvings += 1
            if halvings > 20:
                break
            eta /= 2.0
    return OptimizationResult(theta, f, it, converged, tuple(trace))


def nelder_mead(cost, theta0, cfg: OptimizerConfig) -> OptimizationResult:
    """Simplex search: reflection 1, expansion 2, contraction 1/2,
    shrink 1/2; converged when the simplex diameter falls below cfg.tol."""
    theta0 = np.asarray(theta0, dtype=float)
    n = theta0.size
    simplex = [theta0.copy()]
    for k in range(n):
        p = theta0.copy()
        p[k] += 0.5
        simplex.append(p)
    values = [cost(p) for p in simplex]
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        diameter = max(
            math.sqrt(float((p - simplex[0]) @ (p - simplex[0])))
            for p in simplex[1:]
        )
        if diameter < cfg.tol:
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst, f_worst = simplex[-1], values[-1]
        xr = centroid + (centroid - worst)
        fr = cost(xr)
        if fr < values[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = cost(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < f_worst:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid + 0.5 * (worst - centroid)
            fc = cost(xc)
            if fc < min(fr, f_worst):
                simplex[-1], values[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = cost(simplex[i])
    best = int(np.argmin(values))
    return OptimizationResult(simplex[best], values[best], it, converged)


_AXIS_DIRECTIONS = (
    (1.0, 0.0, 0.0), (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0), (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0), (0.0, 0.0, -1.0),
)


def multi_start(inner, cost, cfg: OptimizerConfig) -> OptimizationResult:
    """Best result over six axis-aligned starts plus seeded random ones.

    Ties resolve to the earliest start, so the outcome is deterministic
    for a fixed seed regardless of evaluation order.
    """
    from .measurement import hyperspherical_angles

    starts = [hyperspherical_angles(from_bloch(d)) for d in _AXIS_DIRECTIONS]
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.restarts):
        starts.append(rng.uniform(0.0, 2.0 * math.pi, size=3))
    best = None
    total_iter = 0
    for theta0 in starts:
        res = inner(cost, theta0, cfg)
        total_iter += res.iterations
        if best is None or res.best_value < best.best_value:
            best = res
    return replace(best, iterations=total_iter)


def grid_oracle(cost_of_measurement, resolution: int = 200):
    """Brute-force minimum of a measurement cost over the Bloch sphere.

    Evaluates cell centers of a resolution x resolution grid uniform in
    (cos theta, phi), then refines with three levels of 3x subdivision
    around the best cell.  Returns (min value, argmin measurement).
    """
    if resolution < 8:
        raise ValueError("oracle resolution must be at least 8")

    def eval_direction(u, phi):
        u = max(min(u, 1.0), -1.0)
        s = math.sqrt(max(1.0 - u * u, 0.0))
        meas = from_bloch((s * math.cos(phi), s * math.sin(phi), u))
        return cost_of_measurement(meas), meas

    best_val = math.inf
    best_meas = None
    best_cell = (0.0, 0.0)
    du = 2.0 / resolution
    dphi = 2.0 * math.pi / resolution
    for i in range(resolution):
        u = -1.0 + (i + 0.5) * du
        for j in range(resolution):
            phi = (j + 0.5) * dphi
            val, meas = eval_direction(u, phi)
            if val < best_val:
                best_val, best_meas, best_cell = val, meas, (u, phi)

    u0, phi0 = best_cell
    wu, wphi = du, dphi
    for _ in range(3):
        level_best = None
        for i in (-1, 0, 1):
            for j in (-1, 0, 1):
                uc, pc = u0 + i * wu / 3.0, phi0 + j * wphi / 3.0
                val, meas = eval_direction(uc, pc)
                if level_best is None or val < level_best[0]:
                    level_best = (val, meas, uc, pc)
        if level_best[0] < best_val:
            best_val, best_meas = level_best[0], level_best[1]
        u0, phi0 = level_best[2], level_best[3]
        wu /= 3.0
        wphi /= 3.0
    return best_val, best_meas
