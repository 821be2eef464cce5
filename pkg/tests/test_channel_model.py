import math

import numpy as np
import pytest

from irs_mac.channel_model import (
    Deployment,
    ReflectionConfig,
    ScenarioConfig,
    _cscg,
    aligned_phases,
    derived_seeds,
    effective_channel,
    gain_upper_bound,
    generate_batch,
    generate_realization,
    load_scenario_config,
    path_loss,
    satisfies_twin_equalities,
    scenario_to_file_text,
    twin_channels,
)
from conftest import manual_realization, scenario


class TestPathLoss:
    def test_unit_distance(self):
        assert path_loss(1.0, 1e-3, 3.0) == pytest.approx(1e-3)

    def test_reference_geometry(self):
        assert path_loss(500.0, 1e-3, 3.0) == pytest.approx(8e-12)

    def test_zero_exponent(self):
        assert path_loss(2.0, 1.0, 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("d", [0.0, -1.0])
    def test_nonpositive_distance_rejected(self, d):
        with pytest.raises(ValueError):
            path_loss(d, 1e-3, 3.0)


class TestGenerateRealization:
    def test_deterministic_given_seed(self):
        cfg = scenario(m_total=4, seed=7)
        a = generate_realization(cfg)
        b = generate_realization(cfg)
        assert a.to_json_dict() == b.to_json_dict()

    def test_different_seeds_differ(self):
        a = generate_realization(scenario(m_total=4, seed=1))
        b = generate_realization(scenario(m_total=4, seed=2))
        assert not np.array_equal(a.g_cent, b.g_cent)

    def test_direct_links_disabled_forces_zero(self):
        real = generate_realization(scenario(m_total=2, direct_links_enabled=False))
        assert real.h_bar[0] == 0.0 and real.h_bar[1] == 0.0

    def test_twin_equalities_hold(self):
        real = generate_realization(scenario(m_total=6, seed=3))
        assert satisfies_twin_equalities(real)

    def test_non_twin_mode_draws_independent_links(self):
        real = generate_realization(scenario(m_total=6, seed=3, twin_mode=False))
        assert not satisfies_twin_equalities(real)

    def test_centralized_draw_unaffected_by_twin_flag(self):
        a = generate_realization(scenario(m_total=4, seed=5, twin_mode=True))
        b = generate_realization(scenario(m_total=4, seed=5, twin_mode=False))
        assert np.array_equal(a.g_cent, b.g_cent)
        assert np.array_equal(a.h_cent, b.h_cent)

    def test_link_variance_monte_carlo(self):
        # One link at d = 500 m under the default path loss model.
        var = path_loss(500.0, 1e-3, 3.0)
        draws = _cscg(np.random.default_rng(0), 100_000, var)
        mean_sq = float(np.mean(np.abs(draws) ** 2))
        assert mean_sq == pytest.approx(8e-12, rel=0.03)

    def test_vector_lengths_match_config(self):
        cfg = scenario(m_total=5, seed=0).replace(m_split=(2, 3))
        real = generate_realization(cfg)
        assert real.m_total == 5
        assert real.m_split == (2, 3)

    def test_invalid_split_rejected(self):
        with pytest.raises(ValueError):
            generate_realization(ScenarioConfig(m_total=4, m_split=(1, 2)))

    def test_batch_is_deterministic_and_diverse(self):
        cfg = scenario(m_total=2, seed=9)
        batch1 = generate_batch(cfg, 3)
        batch2 = generate_batch(cfg, 3)
        for a, b in zip(batch1, batch2):
            assert a.to_json_dict() == b.to_json_dict()
        assert not np.array_equal(batch1[0].g_cent, batch1[1].g_cent)
        assert len(set(derived_seeds(9, 4))) == 4


class TestTwinChannels:
    def test_shared_coefficient_layout(self, rng):
        h_dist = (np.array([1.0 + 0j]), np.array([1j]))
        g_dist = (np.array([2.0 + 0j]), np.array([3.0 + 0j]))
        g_cent, h_cent = twin_channels(h_dist, g_dist, (1e-3, 1e-3), rng)
        assert np.array_equal(g_cent, np.array([1.0 + 0j, 1j]))
        assert h_cent[0, 0] == 2.0 + 0j
        assert h_cent[1, 1] == 3.0 + 0j
        # cross entries drawn, not copied
        assert h_cent[0, 1] != 0.0 and h_cent[1, 0] != 0.0

    def test_twin_output_passes_audit(self, rng):
        h_dist = (rng.standard_normal(3) + 1j * rng.standard_normal(3),
                  rng.standard_normal(2) + 1j * rng.standard_normal(2))
        g_dist = (rng.standard_normal(3) + 1j * rng.standard_normal(3),
                  rng.standard_normal(2) + 1j * rng.standard_normal(2))
        g_cent, h_cent = twin_channels(h_dist, g_dist, (1.0, 1.0), rng)
        real = manual_realization([0, 0], h_dist, g_dist, h_cent, g_cent)
        assert satisfies_twin_equalities(real)

    def test_distributed_gains_preserved_through_twin(self, rng):
        h_dist = (rng.standard_normal(2) + 1j * rng.standard_normal(2),
                  rng.standard_normal(2) + 1j * rng.standard_normal(2))
        g_dist = (rng.standard_normal(2) + 1j * rng.standard_normal(2),
                  rng.standard_normal(2) + 1j * rng.standard_normal(2))
        g_cent, h_cent = twin_channels(h_dist, g_dist, (1.0, 1.0), rng)
        real = manual_realization([0, 0], h_dist, g_dist, h_cent, g_cent)
        for k in (0, 1):
            direct = abs(0 + np.sum(np.abs(g_dist[k] * h_dist[k])))
            assert gain_upper_bound(real, Deployment.DISTRIBUTED, k) == pytest.approx(direct)

    def test_length_mismatch_rejected(self, rng):
        with pytest.raises(ValueError):
            twin_channels((np.ones(2, complex), np.ones(1, complex)),
                          (np.ones(1, complex), np.ones(1, complex)), (1.0, 1.0), rng)


class TestEffectiveChannel:
    def test_coherent_sum(self):
        real = manual_realization([0, 0], [[1, 1], [1]], [[1, 1], [1]],
                                  [[1, 1, 1], [1, 1, 1]], [1, 1, 1])
        refl = ReflectionConfig.distributed(np.ones(2), np.ones(1))
        assert effective_channel(real, refl, 0) == pytest.approx(2.0)

    def test_phase_cancellation(self):
        real = manual_realization([0, 0], [[1, 1], [1]], [[1, 1j], [1]],
                                  [[1, 1], [1, 1]], [1, 1])
        refl = ReflectionConfig.distributed(np.array([1.0, -1j]), np.ones(1))
        assert effective_channel(real, refl, 0) == pytest.approx(2.0)

    def test_alignment_achieves_gain_bound(self, rng):
        for _ in range(50):
            cfg = scenario(m_total=4, seed=int(rng.integers(1 << 30)))
            real = generate_realization(cfg)
            refl = aligned_phases(real, Deployment.CENTRALIZED, user=0)
            got = abs(effective_channel(real, refl, 0))
            want = gain_upper_bound(real, Deployment.CENTRALIZED, 0)
            assert got == pytest.approx(want, rel=1e-12)

    def test_bad_user_index(self):
        real = generate_realization(scenario())
        refl = aligned_phases(real, Deployment.DISTRIBUTED)
        with pytest.raises(IndexError):
            effective_channel(real, refl, 2)

    def test_gain_bound_over_random_reflections(self, rng):
        real = generate_realization(scenario(m_total=4, seed=11))
        for dep in Deployment:
            for _ in range(500):
                if dep is Deployment.CENTRALIZED:
                    refl = ReflectionConfig.centralized(
                        np.exp(2j * np.pi * rng.random(4)))
                else:
                    refl = ReflectionConfig.distributed(
                        np.exp(2j * np.pi * rng.random(2)),
                        np.exp(2j * np.pi * rng.random(2)))
                for k in (0, 1):
                    assert abs(effective_channel(real, refl, k)) <= \
                        gain_upper_bound(real, dep, k) * (1 + 1e-12)


class TestReflectionConfig:
    def test_rejects_non_unit_modulus(self):
        with pytest.raises(ValueError):
            ReflectionConfig.centralized(np.array([1.0, 0.5]))

    def test_requires_two_vectors_for_distributed(self):
        with pytest.raises(ValueError):
            ReflectionConfig(Deployment.DISTRIBUTED, (np.ones(2, complex),))


class TestSerialization:
    def test_json_round_trip(self):
        real = generate_realization(scenario(m_total=4, seed=2))
        dict_ = real.to_json_dict()
        back = type(real).from_json_dict(dict_)
        assert np.array_equal(back.h_bar, real.h_bar)
        assert np.array_equal(back.h_cent, real.h_cent)
        assert np.array_equal(back.g_cent, real.g_cent)
        for k in (0, 1):
            assert np.array_equal(back.h_dist[k], real.h_dist[k])
            assert np.array_equal(back.g_dist[k], real.g_dist[k])


class TestScenarioFile:
    def test_units_parsed_at_boundary(self, tmp_path):
        path = tmp_path / "scenario.cfg"
        path.write_text(
            "# comment line\n"
            "m_total = 4\n"
            "m_split = 2, 2\n"
            "p_max = 30dBm, 20dBm\n"
            "noise_power = -90dBm\n"
            "pathloss_ref = -30dB\n"
            "rng_seed = 42\n")
        cfg = load_scenario_config(path)
        assert cfg.m_total == 4
        assert cfg.p_max == pytest.approx((1.0, 0.1))
        assert cfg.noise_power == pytest.approx(1e-12)
        assert cfg.pathloss_ref == pytest.approx(1e-3)
        assert cfg.rng_seed == 42
        # untouched keys keep the defaults
        assert cfg.ap_position == (0.0, 0.0, 1.0)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("m_totall = 4\n")
        with pytest.raises(ValueError):
            load_scenario_config(path)

    def test_round_trip(self, tmp_path):
        cfg = scenario(m_total=6, seed=5).replace(direct_links_enabled=False)
        path = tmp_path / "rt.cfg"
        path.write_text(scenario_to_file_text(cfg))
        assert load_scenario_config(path) == cfg

    def test_positions_parse(self, tmp_path):
        path = tmp_path / "pos.cfg"
        path.write_text("user_positions = 1, 2, 3 ; 4, 5, 6\n")
        cfg = load_scenario_config(path)
        assert cfg.user_positions == ((1.0, 2.0, 3.0), (4.0, 5.0, 6.0))
