import cmath
import math

import numpy as np
import pytest

from irs_mac.channel_model import (
    Deployment,
    ReflectionConfig,
    effective_channel,
    generate_realization,
)
from irs_mac.distributed_capacity import (
    distributed_capacity_region,
    optimal_distributed_phases,
)
from irs_mac.oracle import GridSpec, oracle_region
from irs_mac.rate_geometry import contains, hausdorff_distance, pentagon_region, mac_pentagon
from conftest import manual_realization, scenario

LOG2_3 = math.log2(3.0)


class TestOptimalPhases:
    def test_rotates_cascade_onto_direct_link(self):
        real = manual_realization([1.0, 0.0],
                                  [[cmath.exp(1j * math.pi / 2)], [1.0]],
                                  [[1.0], [1.0]],
                                  [[1, 1], [1, 1]], [1, 1])
        phases = optimal_distributed_phases(real)
        assert phases.phases[0][0] == pytest.approx(cmath.exp(-1j * math.pi / 2))

    def test_zero_direct_link_convention(self):
        real = manual_realization([0.0, 0.0], [[1.0], [1.0]], [[1.0], [1.0]],
                                  [[1, 1], [1, 1]], [1, 1])
        phases = optimal_distributed_phases(real)
        assert phases.phases[0][0] == pytest.approx(1.0)

    def test_zero_cascade_element_gets_phase_one(self):
        real = manual_realization([1 + 1j, 0.0], [[0.0, 1.0], []],
                                  [[1.0, 1.0], []],
                                  [[1, 1], [1, 1]], [1, 1])
        phases = optimal_distributed_phases(real)
        assert phases.phases[0][0] == 1.0

    def test_alignment_reaches_gain_bound(self, rng):
        for _ in range(1000):
            m1, m2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            real = manual_realization(
                rng.standard_normal(2) + 1j * rng.standard_normal(2),
                [rng.standard_normal(m1) + 1j * rng.standard_normal(m1),
                 rng.standard_normal(m2) + 1j * rng.standard_normal(m2)],
                [rng.standard_normal(m1) + 1j * rng.standard_normal(m1),
                 rng.standard_normal(m2) + 1j * rng.standard_normal(m2)],
                np.zeros((2, m1 + m2)), np.zeros(m1 + m2))
            sol = distributed_capacity_region(real, scenario(m_total=m1 + m2)
                                              .replace(m_split=(m1, m2)))
            phases = sol.phases
            for k in (0, 1):
                assert abs(effective_channel(real, phases, k)) == \
                    pytest.approx(sol.gains[k], rel=1e-12)


class TestCapacityRegion:
    def test_unit_snr_pentagon(self):
        real = manual_realization([1.0, 1.0], [[], []], [[], []],
                                  np.zeros((2, 0)), np.zeros(0))
        cfg = scenario(m_total=0).replace(m_split=(0, 0), noise_power=1.0)
        sol = distributed_capacity_region(real, cfg)
        assert [(v.r1, v.r2) for v in sol.region.vertices] == pytest.approx(
            [(0.0, 1.0), (LOG2_3 - 1.0, 1.0), (1.0, LOG2_3 - 1.0), (1.0, 0.0)])

    def test_no_elements_reduces_to_direct_mac(self):
        cfg = scenario(m_total=0, seed=4).replace(m_split=(0, 0))
        real = generate_realization(cfg)
        sol = distributed_capacity_region(real, cfg)
        direct = pentagon_region(mac_pentagon(
            abs(real.h_bar[0]), abs(real.h_bar[1]),
            cfg.p_max[0], cfg.p_max[1], cfg.noise_power))
        assert hausdorff_distance(sol.region, direct) < 1e-12

    def test_every_fixed_reflection_region_inside(self, rng):
        cfg = scenario(m_total=4, seed=6)
        real = generate_realization(cfg)
        sol = distributed_capacity_region(real, cfg)
        for _ in range(1000):
            refl = ReflectionConfig.distributed(
                np.exp(2j * np.pi * rng.random(2)),
                np.exp(2j * np.pi * rng.random(2)))
            gains = [abs(effective_channel(real, refl, k)) for k in (0, 1)]
            fixed = pentagon_region(mac_pentagon(
                gains[0], gains[1], cfg.p_max[0], cfg.p_max[1], cfg.noise_power))
            assert contains(sol.region, fixed, tol=1e-9)

    def test_invariant_under_common_link_rotation(self):
        cfg = scenario(m_total=4, seed=8)
        real = generate_realization(cfg)
        before = distributed_capacity_region(real, cfg)
        rotated = manual_realization(
            real.h_bar,
            (real.h_dist[0] * cmath.exp(1j * 0.73), real.h_dist[1]),
            real.g_dist, real.h_cent, real.g_cent)
        after = distributed_capacity_region(rotated, cfg)
        assert before.gains == pytest.approx(after.gains, rel=1e-14)

    def test_matches_oracle_at_two_elements(self):
        cfg = scenario(m_total=2, seed=12)
        real = generate_realization(cfg)
        sol = distributed_capacity_region(real, cfg)
        orc = oracle_region(real, cfg, GridSpec(l0=256), Deployment.DISTRIBUTED)
        assert hausdorff_distance(sol.region, orc) < 1e-3
        assert contains(sol.region, orc, tol=1e-9)
