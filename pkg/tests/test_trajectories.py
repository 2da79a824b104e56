import numpy as np
import pytest

from geophase.errors import DomainError
from geophase.measurement import Strength
from geophase.protocol import ProtocolSpec, run_protocol_analytic
from geophase.trajectories import (McConfig, mc_interference, readout_histogram,
                                   sample_trajectory, z_scores,
                                   interference_terms, _philox_uniforms,
                                   _substream)


class TestSubstreams:
    @pytest.mark.parametrize("seed", [0, 1, 42, 2 ** 64 - 1])
    def test_vectorized_philox_matches_numpy_bitwise(self, seed):
        ids = np.array([0, 1, 7, 12345, 2 ** 31, 2 ** 62])
        mine = _philox_uniforms(seed, ids, 11)
        for row, sid in enumerate(ids):
            ref = _substream(seed, int(sid)).random(11)
            assert np.array_equal(mine[row], ref)

    def test_draw_count_partial_block(self):
        for n_draws in (1, 3, 4, 5, 8, 9):
            mine = _philox_uniforms(9, np.array([3]), n_draws)[0]
            ref = _substream(9, 3).random(n_draws)
            assert np.array_equal(mine, ref)


def analytic_amplitude(spec):
    res, _ = run_protocol_analytic(spec)
    return res.contrast * np.exp(1j * res.phase)


class TestSampleTrajectory:
    def test_no_measurement_is_noise_only(self):
        spec = ProtocolSpec(theta=1.1, strength=Strength(1.0))
        initial = run_protocol_analytic(spec)[1].steps[0].bloch_before.as_array()
        for sid in range(5):
            s = sample_trajectory(spec, sid, seed=42)
            assert abs(s.interference_term - 1.0) < 1e-12
            vec = s.final_state.vec
            assert abs(abs(vec[2]) ** 2 - 0.5) < 1e-12

    def test_north_pole_phase_zero_every_sample(self):
        spec = ProtocolSpec(theta=0.0, strength=Strength(0.5))
        for sid in range(10):
            s = sample_trajectory(spec, sid, seed=1)
            assert abs(np.angle(s.interference_term)) < 1e-12
            assert abs(s.interference_term - 1.0) < 1e-12

    def test_fields_and_invariants(self):
        spec = ProtocolSpec(theta=1.3, strength=Strength(0.4))
        s = sample_trajectory(spec, 17, seed=9)
        assert s.readouts.shape == (6,)
        assert 0.0 < s.probability_weight <= 1.0
        assert abs(s.interference_term) <= 1.0 + 1e-12
        assert abs(s.final_state.norm - 1.0) < 1e-12

    def test_projective_records_click_indicators(self):
        spec = ProtocolSpec(theta=2.5, strength=Strength(0.0))
        s = sample_trajectory(spec, 3, seed=4)
        assert set(np.unique(s.readouts)) <= {0.0, 1.0}

    def test_pure_function_of_seed_and_id(self):
        spec = ProtocolSpec(theta=1.3, strength=Strength(0.4))
        a = sample_trajectory(spec, 29, seed=9)
        b = sample_trajectory(spec, 29, seed=9)
        assert a.interference_term == b.interference_term
        assert np.array_equal(a.readouts, b.readouts)
        c = sample_trajectory(spec, 30, seed=9)
        assert not np.array_equal(a.readouts, c.readouts)


class TestMcInterference:
    def test_matches_single_sample_path(self):
        # same substream, same math; block-shaped matmuls may round the last
        # bit differently, so equality is at float precision, not bitwise
        spec = ProtocolSpec(theta=1.3, strength=Strength(0.4))
        terms = interference_terms(spec, McConfig(n_samples=50, seed=3))
        for sid in (0, 13, 49):
            single = sample_trajectory(spec, sid, 3).interference_term
            assert abs(terms[sid] - single) < 1e-12

    def test_north_pole_zero_spread(self):
        est = mc_interference(ProtocolSpec(theta=0.0, strength=Strength(0.5)),
                              McConfig(n_samples=500, seed=0))
        assert abs(est.mean - 1.0) < 1e-12
        assert est.stderr_re < 1e-13 and est.stderr_im < 1e-13
        z = z_scores(est, 1.0 + 0.0j)
        assert z == (0.0, 0.0)

    def test_oracle_equivalence_moderate(self):
        spec = ProtocolSpec(theta=2 * np.pi / 5, strength=Strength(0.6))
        est = mc_interference(spec, McConfig(n_samples=40000, seed=42))
        z_re, z_im = z_scores(est, analytic_amplitude(spec))
        assert z_re <= 3.0 and z_im <= 3.0

    def test_projective_hexagon(self):
        spec = ProtocolSpec(theta=np.pi / 2, strength=Strength(0.0))
        est = mc_interference(spec, McConfig(n_samples=20000, seed=7))
        z_re, z_im = z_scores(est, analytic_amplitude(spec))
        assert z_re <= 3.0 and z_im <= 3.0
        assert abs(abs(est.phase) - np.pi) < 0.05

    def test_worker_count_invariance(self):
        spec = ProtocolSpec(theta=1.2, strength=Strength(0.5))
        cfg = McConfig(n_samples=9000, seed=5)
        est1 = mc_interference(spec, cfg, workers=1)
        est2 = mc_interference(spec, cfg, workers=2)
        est4 = mc_interference(spec, cfg, workers=4)
        assert est1 == est2 == est4

    def test_clt_scaling(self):
        spec = ProtocolSpec(theta=1.0, strength=Strength(0.5))
        e1 = mc_interference(spec, McConfig(n_samples=4000, seed=11))
        e2 = mc_interference(spec, McConfig(n_samples=16000, seed=11))
        for s1, s2 in ((e1.stderr_re, e2.stderr_re), (e1.stderr_im, e2.stderr_im)):
            assert abs(s2 / s1 - 0.5) < 0.2 * 0.5

    def test_insufficient_flag(self):
        est = mc_interference(ProtocolSpec(theta=1.0, strength=Strength(0.5)),
                              McConfig(n_samples=50, seed=1))
        assert est.insufficient
        assert est.n_samples == 50

    def test_every_sample_enters_the_mean(self):
        spec = ProtocolSpec(theta=1.3, strength=Strength(0.4))
        cfg = McConfig(n_samples=400, seed=2)
        terms = interference_terms(spec, cfg)
        est = mc_interference(spec, cfg)
        assert est.n_samples == 400
        assert est.mean == complex(np.mean(terms))

    def test_config_validation(self):
        with pytest.raises(DomainError):
            McConfig(n_samples=0, seed=1)
        with pytest.raises(DomainError):
            McConfig(n_samples=10, seed=-1)


class TestReadoutHistogram:
    def test_reference_only_state_single_cloud(self):
        # theta = 0: the monitored level is empty, only the centered cloud
        spec = ProtocolSpec(theta=0.0, strength=Strength(0.5))
        h = readout_histogram(spec, McConfig(n_samples=8000, seed=3))
        assert h.p_f == 0.0
        assert h.p_value > 1e-3
        assert abs(np.mean(h.readouts)) < 4.0 / np.sqrt(8000)

    def test_equatorial_mixture_weight(self):
        spec = ProtocolSpec(theta=np.pi / 2, strength=Strength(0.5))
        h = readout_histogram(spec, McConfig(n_samples=20000, seed=5))
        # weight of the displaced cloud = population antipodal to the first
        # rotated axis: (1-w) * sin^2(pi/6)
        assert abs(h.p_f - 0.125) < 1e-12
        assert h.p_value > 1e-3
        frac = np.mean(h.readouts > h.separation / 2.0)
        from scipy.special import ndtr
        expect = h.p_f * ndtr(h.separation / 2.0) + (1 - h.p_f) * (
            1.0 - ndtr(h.separation / 2.0))
        assert abs(frac - expect) < 4.0 * np.sqrt(expect * (1 - expect) / 20000)

    def test_weak_limit_clouds_overlap(self):
        spec = ProtocolSpec(theta=np.pi / 2, strength=Strength(0.999))
        h = readout_histogram(spec, McConfig(n_samples=4000, seed=9))
        assert h.separation < 0.1
        assert h.p_value > 1e-3

    def test_counts_conserved(self):
        spec = ProtocolSpec(theta=1.0, strength=Strength(0.4))
        h = readout_histogram(spec, McConfig(n_samples=5000, seed=13))
        assert int(h.counts.sum()) == 5000
        assert abs(h.expected.sum() - 5000) < 1e-6

    def test_projective_rejected(self):
        with pytest.raises(DomainError):
            readout_histogram(ProtocolSpec(theta=1.0, strength=Strength(0.0)),
                              McConfig(n_samples=100, seed=1))
