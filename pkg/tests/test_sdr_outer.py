import math

import numpy as np
import pytest

from irs_mac.channel_model import Deployment, aligned_phases, effective_channel, gain_upper_bound
from irs_mac.channel_model import generate_realization
from irs_mac.oracle import GridSpec, oracle_max_received_power
from irs_mac.rate_geometry import mac_pentagon, pentagon_region, hausdorff_distance
from irs_mac.sdr_outer import (
    QuadraticForm,
    SolverStatus,
    build_quadratic_form,
    gaussian_randomization,
    outer_bound,
    received_power,
    solve_diag_sdp,
)
from conftest import manual_realization, scenario


def random_unit_phases(rng, m):
    return np.exp(2j * np.pi * rng.random(m))


class TestBuildQuadraticForm:
    def test_single_element_unit_channels(self):
        real = manual_realization([0, 0], [[1], []], [[1], []],
                                  [[1], [1]], [1])
        cfg = scenario(m_total=1).replace(m_split=(1, 0), noise_power=1.0)
        form = build_quadratic_form(real, cfg)
        assert np.allclose(form.matrix, np.array([[2.0, 0.0], [0.0, 0.0]]))
        assert form.constant == 0.0

    def test_zero_direct_links_zero_linear_term(self):
        cfg = scenario(m_total=3, seed=2, direct_links_enabled=False).replace(m_split=(1, 2))
        real = generate_realization(cfg)
        form = build_quadratic_form(real, cfg)
        assert np.all(form.v == 0.0)

    def test_matrix_is_hermitian_with_zero_last_diagonal(self):
        cfg = scenario(m_total=4, seed=3)
        real = generate_realization(cfg)
        form = build_quadratic_form(real, cfg)
        assert np.allclose(form.matrix, form.matrix.conj().T, atol=1e-15)
        assert form.matrix[-1, -1] == 0.0

    def test_quadratic_identity_against_direct_evaluation(self, rng):
        for trial in range(20):
            cfg = scenario(m_total=3, seed=trial)
            real = generate_realization(cfg)
            form = build_quadratic_form(real, cfg)
            for _ in range(100):
                phi = random_unit_phases(rng, 3)
                direct = received_power(real, cfg, phi)
                assert form.evaluate(phi) == pytest.approx(direct, rel=1e-9)


class TestSolveDiagSdp:
    def test_zero_matrix(self):
        report = solve_diag_sdp(QuadraticForm.from_matrix(np.zeros((3, 3))))
        assert report.primal_value == 0.0
        assert report.dual_value == 0.0
        assert report.gap == 0.0
        assert report.status is SolverStatus.CONVERGED

    def test_diagonal_matrices_solved_exactly(self, rng):
        for _ in range(20):
            d = rng.standard_normal(4)
            d[-1] = 0.0
            form = QuadraticForm.from_matrix(np.diag(d))
            report = solve_diag_sdp(form)
            assert report.status is SolverStatus.CONVERGED
            assert report.primal_value == pytest.approx(float(d.sum()), abs=1e-9)
            assert report.gap <= 1e-9 * (1 + abs(report.primal_value))

    def test_non_hermitian_rejected(self):
        bad = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError):
            solve_diag_sdp(QuadraticForm.from_matrix(bad))

    def test_certificate_invariants_on_random_instances(self, rng):
        for trial in range(25):
            n = int(rng.integers(2, 7))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            q = (a + a.conj().T) / 2
            report = solve_diag_sdp(QuadraticForm.from_matrix(q))
            assert report.dual_value >= report.primal_value - 1e-9 * (1 + abs(report.primal_value))
            assert report.gap >= -1e-9
            assert report.status is SolverStatus.CONVERGED
            assert report.gap <= 1e-6 * (1.0 + np.linalg.norm(q))
            # primal witness is feasible
            w = report.w_matrix
            assert np.allclose(np.diag(w).real, 1.0, atol=1e-9)
            assert np.linalg.eigvalsh(w)[0] >= -1e-9

    def test_dual_dominates_grid_maximum(self):
        cfg = scenario(m_total=2, seed=5)
        real = generate_realization(cfg)
        form = build_quadratic_form(real, cfg)
        report = solve_diag_sdp(form)
        grid_max = oracle_max_received_power(real, cfg, GridSpec(l0=256))
        bound = form.constant + report.dual_value
        assert bound >= grid_max - 1e-9 * (1 + abs(bound))

    def test_max_iter_status(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        q = (a + a.conj().T) / 2
        report = solve_diag_sdp(QuadraticForm.from_matrix(q), tol=1e-14, max_iter=20)
        assert report.status is SolverStatus.MAX_ITER
        assert report.iterations == 20

    def test_report_serializes(self):
        report = solve_diag_sdp(QuadraticForm.from_matrix(np.diag([1.0, 0.0])))
        d = report.to_json_dict()
        assert d["status"] == "converged"
        assert isinstance(d["trace"], list)


class TestOuterBound:
    def test_no_elements_reduces_to_direct_mac(self):
        cfg = scenario(m_total=0, seed=4).replace(m_split=(0, 0))
        real = generate_realization(cfg)
        ob = outer_bound(real, cfg)
        direct = pentagon_region(mac_pentagon(
            abs(real.h_bar[0]), abs(real.h_bar[1]),
            cfg.p_max[0], cfg.p_max[1], cfg.noise_power))
        assert hausdorff_distance(ob.region, direct) < 1e-12

    def test_single_user_cap_achieved_by_alignment(self):
        cfg = scenario(m_total=4, seed=9)
        real = generate_realization(cfg)
        ob = outer_bound(real, cfg)
        refl = aligned_phases(real, Deployment.CENTRALIZED, user=0)
        gain = abs(effective_channel(real, refl, 0))
        achieved = math.log2(1 + cfg.p_max[0] * gain * gain / cfg.noise_power)
        assert achieved == pytest.approx(ob.r1_cap, rel=1e-12)

    def test_sum_cap_respects_pooled_gain_cap(self):
        for seed in range(20):
            cfg = scenario(m_total=4, seed=seed)
            real = generate_realization(cfg)
            ob = outer_bound(real, cfg)
            g1 = gain_upper_bound(real, Deployment.CENTRALIZED, 0)
            g2 = gain_upper_bound(real, Deployment.CENTRALIZED, 1)
            naive = math.log2(1 + (cfg.p_max[0] * g1 ** 2 + cfg.p_max[1] * g2 ** 2)
                              / cfg.noise_power)
            assert ob.r12_cap <= naive + 1e-12

    def test_dual_dominates_random_phase_objectives(self, rng):
        cfg = scenario(m_total=4, seed=13)
        real = generate_realization(cfg)
        ob = outer_bound(real, cfg)
        form = build_quadratic_form(real, cfg)
        bound = form.constant + ob.sdp.dual_value
        for _ in range(1000):
            phi = random_unit_phases(rng, 4)
            assert received_power(real, cfg, phi) <= bound * (1 + 1e-9)

    def test_region_is_cap_pentagon(self):
        cfg = scenario(m_total=2, seed=1)
        real = generate_realization(cfg)
        ob = outer_bound(real, cfg)
        from irs_mac.rate_geometry import Pentagon
        rebuilt = pentagon_region(Pentagon(ob.r1_cap, ob.r2_cap, ob.r12_cap))
        assert hausdorff_distance(ob.region, rebuilt) == 0.0


class TestGaussianRandomization:
    def test_returns_feasible_achievable_witness(self, rng):
        cfg = scenario(m_total=3, seed=21).replace(m_split=(1, 2))
        real = generate_realization(cfg)
        form = build_quadratic_form(real, cfg)
        report = solve_diag_sdp(form)
        phi, value = gaussian_randomization(form, report.w_matrix, 50, rng)
        assert np.allclose(np.abs(phi), 1.0, atol=1e-12)
        assert value == pytest.approx(received_power(real, cfg, phi), rel=1e-12)
        assert value <= form.constant + report.dual_value + 1e-9 * (1 + abs(value))
