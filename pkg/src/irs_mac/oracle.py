"""Brute-force phase-grid ground truth for tiny element counts.

Every reflection coefficient is swept over l0 uniformly spaced phases, every
resulting pentagon collected, and the hull of their union returned. The cost
is l0^M evaluations, so this refuses anything beyond its budget instead of
approximating; it exists to certify the closed-form region, the SDP bound,
and the rate-profile inner bound on small instances.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .channel_model import ChannelRealization, Deployment, ScenarioConfig
from .rate_geometry import RatePair, RateRegion, _dominant_hull

logger = logging.getLogger(__name__)

# Expand the phase grid in memory only up to this many tuples per chunk.
_CHUNK_LIMIT = 1 << 21

# Compress accumulated boundary points into a hull after this many.
_COMPRESS_AT = 1_000_000

_PROGRESS_EVERY = 1_000_000


@dataclass(frozen=True)
class GridSpec:
    """Phase grid: l0 points per element, with a hard evaluation budget."""

    l0: int = 256
    max_elements: int = 8
    budget: float = 1e8

    def __post_init__(self):
        if self.l0 < 2:
            raise ValueError(f"l0 must be >= 2, got {self.l0}")


class BudgetExceededError(RuntimeError):
    """Raised when the grid would exceed its configured evaluation budget."""


def _check_budget(grid: GridSpec, m: int) -> int:
    count = grid.l0 ** m
    if m > grid.max_elements or count > grid.budget:
        raise BudgetExceededError(
            f"{grid.l0}^{m} = {count:.3g} evaluations exceeds the grid budget "
            f"({grid.max_elements} elements / {grid.budget:.3g} evaluations)")
    return count


def _phase_values(l0: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(l0) / l0)


def _enumerate_sums(base: complex, coeffs: np.ndarray, l0: int):
    """Yield chunks of base + sum_m coeff_m phi_m over the full phase grid.

    The trailing elements are expanded in memory (at most _CHUNK_LIMIT tuples);
    leading elements are walked with an odometer.
    """
    phases = _phase_values(l0)
    m = coeffs.shape[0]
    if m == 0:
        yield np.array([base], dtype=np.complex128)
        return
    # How many trailing elements fit in one expanded chunk.
    tail = 1
    size = l0
    while tail < m and size * l0 <= _CHUNK_LIMIT:
        tail += 1
        size *= l0
    head = m - tail
    # Expanded sum over the tail elements (indexed head..m-1).
    chunk = np.array([0.0j])
    for j in range(head, m):
        chunk = (chunk[:, None] + phases[None, :] * coeffs[j]).reshape(-1)

    if head == 0:
        yield base + chunk
        return
    done = 0
    for idx in np.ndindex(*([l0] * head)):
        offset = base + sum(phases[i] * coeffs[j] for j, i in enumerate(idx))
        yield offset + chunk
        done += chunk.size
        if done % _PROGRESS_EVERY < chunk.size:
            logger.info("phase grid progress: %d tuples", done)


def _enumerate_joint(real: ChannelRealization, cfg: ScenarioConfig,
                     grid: GridSpec, deployment: Deployment):
    """Yield (E1, E2) chunks of both users' effective channels on the grid."""
    if deployment is Deployment.CENTRALIZED:
        a1 = real.g_cent * real.h_cent[0]
        a2 = real.g_cent * real.h_cent[1]
        # Both users share the same phase tuple: expand jointly.
        phases = _phase_values(grid.l0)
        m = a1.shape[0]
        if m == 0:
            yield (np.array([real.h_bar[0]]), np.array([real.h_bar[1]]))
            return
        tail = 1
        size = grid.l0
        while tail < m and size * grid.l0 <= _CHUNK_LIMIT:
            tail += 1
            size *= grid.l0
        head = m - tail
        c1 = np.array([0.0j])
        c2 = np.array([0.0j])
        for j in range(head, m):
            c1 = (c1[:, None] + phases[None, :] * a1[j]).reshape(-1)
            c2 = (c2[:, None] + phases[None, :] * a2[j]).reshape(-1)
        if head == 0:
            yield (real.h_bar[0] + c1, real.h_bar[1] + c2)
            return
        done = 0
        for idx in np.ndindex(*([grid.l0] * head)):
            o1 = real.h_bar[0] + sum(phases[i] * a1[j] for j, i in enumerate(idx))
            o2 = real.h_bar[1] + sum(phases[i] * a2[j] for j, i in enumerate(idx))
            yield (o1 + c1, o2 + c2)
            done += c1.size
            if done % _PROGRESS_EVERY < c1.size:
                logger.info("phase grid progress: %d tuples", done)
    else:
        # Each user's channel depends only on its own surface: enumerate the
        # two small grids and take their cartesian product chunk-wise.
        e1 = np.concatenate(list(_enumerate_sums(
            complex(real.h_bar[0]), real.g_dist[0] * real.h_dist[0], grid.l0)))
        e2 = np.concatenate(list(_enumerate_sums(
            complex(real.h_bar[1]), real.g_dist[1] * real.h_dist[1], grid.l0)))
        rows = max(1, _CHUNK_LIMIT // max(1, e2.size))
        for i in range(0, e1.size, rows):
            block = e1[i:i + rows]
            yield (np.repeat(block, e2.size), np.tile(e2, block.size))


def _pentagon_corner_points(e1: np.ndarray, e2: np.ndarray,
                            cfg: ScenarioConfig) -> np.ndarray:
    """SIC corner points of the pentagons induced by effective channels."""
    s1 = cfg.p_max[0] * np.abs(e1) ** 2 / cfg.noise_power
    s2 = cfg.p_max[1] * np.abs(e2) ** 2 / cfg.noise_power
    r1 = np.log2(1.0 + s1)
    r2 = np.log2(1.0 + s2)
    rs = np.log2(1.0 + s1 + s2)
    r1e = np.minimum(r1, rs)
    r2e = np.minimum(r2, rs)
    pts = np.empty((2 * e1.size, 2))
    pts[:e1.size, 0] = r1e
    pts[:e1.size, 1] = rs - r1e
    pts[e1.size:, 0] = rs - r2e
    pts[e1.size:, 1] = r2e
    # Guard against -0.0 / tiny negative from rounding.
    np.maximum(pts, 0.0, out=pts)
    return pts


def _pareto_prune(pts: np.ndarray) -> np.ndarray:
    """Drop points dominated in both coordinates (keeps every hull vertex)."""
    idx = np.lexsort((pts[:, 1], pts[:, 0]))
    srt = pts[idx]
    suffix_max = np.maximum.accumulate(srt[::-1, 1])[::-1]
    return srt[srt[:, 1] >= suffix_max]


def oracle_region(real: ChannelRealization, cfg: ScenarioConfig,
                  grid: GridSpec, deployment: Deployment) -> RateRegion:
    """Hull of the union of all pentagons over the full phase grid."""
    m = real.m_total if deployment is Deployment.CENTRALIZED else sum(real.m_split)
    _check_budget(grid, m)
    survivors: list[np.ndarray] = []
    pending = 0
    for e1, e2 in _enumerate_joint(real, cfg, grid, deployment):
        survivors.append(_pareto_prune(_pentagon_corner_points(e1, e2, cfg)))
        pending += survivors[-1].shape[0]
        if pending > _COMPRESS_AT:
            survivors = [_pareto_prune(np.concatenate(survivors))]
            pending = survivors[0].shape[0]
    merged = _pareto_prune(np.concatenate(survivors))
    chain = _dominant_hull(map(tuple, merged))
    return RateRegion(chain)


def oracle_max_received_power(real: ChannelRealization, cfg: ScenarioConfig,
                              grid: GridSpec) -> float:
    """Grid maximum of the total received signal power P1|h1|^2 + P2|h2|^2
    for the centralized deployment."""
    _check_budget(grid, real.m_total)
    best = -np.inf
    for e1, e2 in _enumerate_joint(real, cfg, grid, Deployment.CENTRALIZED):
        val = cfg.p_max[0] * np.abs(e1) ** 2 + cfg.p_max[1] * np.abs(e2) ** 2
        best = max(best, float(val.max()))
    return best
