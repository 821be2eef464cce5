"""Certified capacity-region outer bound for the centralized deployment.

The individual-rate caps come from the per-user phase-aligned gains. The
sum-rate cap needs the maximum of the total received power over all
unit-modulus phase vectors, a non-convex quadratic problem; it is lifted to
a unit-diagonal PSD matrix variable (dropping the rank-one constraint) and
solved by ADMM, with a rigorous dual certificate: any diagonal y with
diag(y) >= Q in the PSD order proves tr(WQ) <= sum(y) for every feasible W.
The certified dual value is what enters the bound, so the pentagon remains a
true outer bound regardless of solver accuracy.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel_model import (
    ChannelRealization,
    Deployment,
    ScenarioConfig,
    gain_upper_bound,
)
from .rate_geometry import Pentagon, RateRegion, pentagon_region

HERMITIAN_TOL = 1e-12

# Certify and check convergence every this many ADMM iterations.
_CERT_EVERY = 10


class SolverStatus(Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"


@dataclass(frozen=True)
class QuadraticForm:
    """Total received power as a quadratic in the stacked vector [phi; t].

    P1|h1(phi)|^2 + P2|h2(phi)|^2 =
        constant + 2 Re{v^H phi} + phi^H (P1 q1 q1^H + P2 q2 q2^H) phi
    with q_k the conjugated element-wise cascades and
    v = P1 h_bar_1 q1 + P2 h_bar_2 q2. ``matrix`` is the (M+1)x(M+1)
    Hermitian lift [[P1 q1 q1^H + P2 q2 q2^H, v], [v^H, 0]].
    """

    matrix: np.ndarray
    constant: float
    q1: np.ndarray
    q2: np.ndarray
    v: np.ndarray

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, constant: float = 0.0) -> "QuadraticForm":
        matrix = np.asarray(matrix, dtype=np.complex128)
        n = matrix.shape[0]
        empty = np.zeros(n - 1, dtype=np.complex128)
        return cls(matrix=matrix, constant=float(constant), q1=empty, q2=empty,
                   v=matrix[:-1, -1].copy())

    def evaluate(self, phi: np.ndarray) -> float:
        """Total received power at a unit-modulus phase vector."""
        quad = np.real(np.vdot(phi, self.matrix[:-1, :-1] @ phi))
        lin = 2.0 * np.real(np.vdot(self.v, phi))
        return float(self.constant + lin + quad)


@dataclass(frozen=True)
class SdpReport:
    """Outcome of one unit-diagonal SDP solve.

    primal_value is achieved by a feasible W; dual_value is a certified upper
    bound on the true optimum (dual-feasible diagonal), so
    primal_value <= optimum <= dual_value up to floating-point error.
    """

    primal_value: float
    dual_value: float
    gap: float
    iterations: int
    status: SolverStatus
    w_matrix: np.ndarray = field(repr=False)
    trace: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "primal_value": self.primal_value,
            "dual_value": self.dual_value,
            "gap": self.gap,
            "iterations": self.iterations,
            "status": self.status.value,
            "trace": [list(t) for t in self.trace],
        }


@dataclass(frozen=True)
class OuterBound:
    """Outer-bound pentagon and its three rate caps."""

    region: RateRegion
    r1_cap: float
    r2_cap: float
    r12_cap: float
    sdp: SdpReport


def build_quadratic_form(real: ChannelRealization,
                         cfg: ScenarioConfig) -> QuadraticForm:
    """Assemble the received-power quadratic for a centralized realization."""
    p1, p2 = cfg.p_max
    q1 = np.conj(real.g_cent * real.h_cent[0])
    q2 = np.conj(real.g_cent * real.h_cent[1])
    v = p1 * real.h_bar[0] * q1 + p2 * real.h_bar[1] * q2
    m = real.m_total
    matrix = np.zeros((m + 1, m + 1), dtype=np.complex128)
    matrix[:m, :m] = p1 * np.outer(q1, q1.conj()) + p2 * np.outer(q2, q2.conj())
    matrix[:m, m] = v
    matrix[m, :m] = v.conj()
    constant = float(p1 * abs(real.h_bar[0]) ** 2 + p2 * abs(real.h_bar[1]) ** 2)
    return QuadraticForm(matrix=matrix, constant=constant, q1=q1, q2=q2, v=v)


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2.0


def _psd_project(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(_hermitize(a))
    w = np.maximum(w, 0.0)
    return _hermitize((v * w) @ v.conj().T)


def _unit_diag_normalize(x: np.ndarray) -> np.ndarray:
    """Map a PSD matrix to a feasible point: unit diagonal, still PSD."""
    d = np.real(np.diag(x)).copy()
    dead = d <= 0.0
    d[dead] = 1.0
    s = 1.0 / np.sqrt(d)
    w = _hermitize(x * np.outer(s, s))
    if dead.any():
        # Rows with zero diagonal are zero rows of a PSD matrix.
        w[dead, :] = 0.0
        w[:, dead] = 0.0
    np.fill_diagonal(w, 1.0)
    return w


def _dual_certificate(q: np.ndarray, w_feas: np.ndarray) -> float:
    """Certified upper bound on max tr(WQ) over unit-diagonal PSD W.

    Starts from the complementary-slackness estimate y = Re diag(Q W) and
    shifts it uniformly until diag(y) - Q is PSD; then sum(y) is a valid
    bound for every feasible W.
    """
    y = np.real(np.diag(q @ w_feas))
    lift = float(np.linalg.eigvalsh(q - np.diag(y))[-1])
    return float(np.sum(y) + q.shape[0] * max(lift, 0.0))


def solve_diag_sdp(form: QuadraticForm, tol: float | None = None,
                   max_iter: int = 5000) -> SdpReport:
    """Maximize tr(WQ) subject to W PSD with unit diagonal.

    ADMM splits the PSD cone from the unit-diagonal affine set; each
    certificate check produces a primal-feasible value (diagonal-normalized
    iterate) and a dual-certified upper bound. Converged means the certified
    gap dropped below tol (default 1e-6 * (1 + ||Q||_F)).
    """
    q = np.asarray(form.matrix, dtype=np.complex128)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"matrix must be square, got shape {q.shape}")
    qnorm = float(np.linalg.norm(q))
    if float(np.max(np.abs(q - q.conj().T))) > HERMITIAN_TOL * (1.0 + qnorm):
        raise ValueError("matrix must be Hermitian")
    if tol is None:
        tol = 1e-6 * (1.0 + qnorm)
    n = q.shape[0]

    if qnorm == 0.0:
        return SdpReport(0.0, 0.0, 0.0, 0, SolverStatus.CONVERGED,
                         w_matrix=np.eye(n, dtype=np.complex128),
                         trace=((0, 0.0, 0.0, 0.0),))

    qs = _hermitize(q) / qnorm
    tol_s = tol / qnorm
    rho = 1.0
    z = np.eye(n, dtype=np.complex128)
    u = np.zeros_like(z)

    best_primal = -math.inf
    best_dual = math.inf
    best_w = np.eye(n, dtype=np.complex128)
    trace = []
    it = 0
    status = SolverStatus.MAX_ITER
    for it in range(1, max_iter + 1):
        x = _psd_project(z - u)
        z = _hermitize(x + u + qs / rho)
        np.fill_diagonal(z, 1.0)
        u = u + x - z
        if it % _CERT_EVERY == 0 or it == max_iter:
            w = _unit_diag_normalize(x)
            primal = float(np.real(np.trace(w @ qs)))
            dual = _dual_certificate(qs, w)
            if primal > best_primal:
                best_primal = primal
                best_w = w
            best_dual = min(best_dual, dual)
            gap = best_dual - best_primal
            trace.append((it, best_primal * qnorm, best_dual * qnorm, gap * qnorm))
            if gap <= tol_s:
                status = SolverStatus.CONVERGED
                break

    return SdpReport(
        primal_value=best_primal * qnorm,
        dual_value=best_dual * qnorm,
        gap=(best_dual - best_primal) * qnorm,
        iterations=it,
        status=status,
        w_matrix=best_w,
        trace=tuple(trace),
    )


def gaussian_randomization(form: QuadraticForm, w_matrix: np.ndarray,
                           n_samples: int, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    """Best unit-modulus phase vector sampled from the lifted solution.

    Draws w ~ CN(0, W), projects each entry to the unit circle, normalizes
    the phase reference, and keeps the best received-power value. Yields an
    achievable (lower-bound) witness, not part of the outer bound.
    """
    n = w_matrix.shape[0]
    evals, evecs = np.linalg.eigh(_hermitize(w_matrix))
    root = (evecs * np.sqrt(np.maximum(evals, 0.0))) @ evecs.conj().T
    best_phi = np.ones(n - 1, dtype=np.complex128)
    best_val = form.evaluate(best_phi)
    for _ in range(n_samples):
        raw = root @ (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        raw[np.abs(raw) == 0.0] = 1.0
        w = raw / np.abs(raw)
        phi = w[:-1] * np.conj(w[-1])     # reference phase so that t = 1
        val = form.evaluate(phi)
        if val > best_val:
            best_val = val
            best_phi = phi
    return best_phi, best_val


def outer_bound(real: ChannelRealization, cfg: ScenarioConfig,
                tol: float | None = None, max_iter: int = 5000) -> OuterBound:
    """Outer-bound pentagon for the centralized deployment.

    Individual caps use the aligned per-user gains. The sum cap uses the
    certified SDP bound on total received power, clamped by the always-valid
    pooled-gain cap (the lifted problem respects both per-user gain limits,
    so the clamp can only tighten a loose certificate).
    """
    form = build_quadratic_form(real, cfg)
    report = solve_diag_sdp(form, tol=tol, max_iter=max_iter)
    g1 = gain_upper_bound(real, Deployment.CENTRALIZED, 0)
    g2 = gain_upper_bound(real, Deployment.CENTRALIZED, 1)
    p1, p2 = cfg.p_max
    naive_power = p1 * g1 * g1 + p2 * g2 * g2
    s_bound = min(form.constant + report.dual_value, naive_power)
    r1_cap = math.log2(1.0 + p1 * g1 * g1 / cfg.noise_power)
    r2_cap = math.log2(1.0 + p2 * g2 * g2 / cfg.noise_power)
    r12_cap = math.log2(1.0 + s_bound / cfg.noise_power)
    region = pentagon_region(Pentagon(r1_cap, r2_cap, r12_cap))
    return OuterBound(region=region, r1_cap=r1_cap, r2_cap=r2_cap,
                      r12_cap=r12_cap, sdp=report)


def received_power(real: ChannelRealization, cfg: ScenarioConfig,
                   phi: np.ndarray) -> float:
    """Direct evaluation of P1|h1(phi)|^2 + P2|h2(phi)|^2."""
    e1 = real.h_bar[0] + np.sum(real.g_cent * phi * real.h_cent[0])
    e2 = real.h_bar[1] + np.sum(real.g_cent * phi * real.h_cent[1])
    return float(cfg.p_max[0] * abs(e1) ** 2 + cfg.p_max[1] * abs(e2) ** 2)
