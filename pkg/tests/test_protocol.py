import numpy as np
import pytest

from geophase.errors import DomainError
from geophase.measurement import Strength, kraus_null
from geophase.protocol import (CONTRAST_FLOOR, ProtocolSpec,
                               initial_state, measure_along,
                               run_protocol_analytic, run_protocol_projective,
                               _amplitudes_for_thetas)
from geophase.qutrit import (E, MeasurementAxis, Operator3, QutritState,
                             axis_state, rotation_to_axis)


def amplitude(result):
    return result.contrast * np.exp(1j * result.phase)


def circ_diff(a, b):
    return abs(np.angle(np.exp(1j * (a - b))))


class TestSpec:
    def test_default_schedule_wraps_to_minus_2pi(self):
        spec = ProtocolSpec(theta=1.0, strength=Strength(0.5))
        sched = np.asarray(spec.phi_schedule)
        assert len(sched) == 6
        assert np.all(np.diff(sched) < 0)
        assert abs(sched[-1] + 2 * np.pi) < 1e-15

    def test_custom_schedule_length_checked(self):
        with pytest.raises(DomainError):
            ProtocolSpec(theta=1.0, strength=Strength(0.5), n_meas=6,
                         phi_schedule=(-1.0, -2.0))

    def test_reference_weight_bounds(self):
        with pytest.raises(DomainError):
            ProtocolSpec(theta=1.0, strength=Strength(0.5), reference_weight=0.0)


class TestMeasureAlong:
    def test_state_on_axis_unchanged(self):
        st = QutritState(np.array([0, 1, 0], dtype=complex))
        for m in [0.0, 0.3, 1.0]:
            out = measure_along(st, MeasurementAxis(0.0, 0.0), Strength(m))
            assert np.allclose(out.vec, st.vec, atol=1e-15)

    def test_antipodal_state_attenuated(self):
        st = QutritState(np.array([1, 0, 0], dtype=complex))
        out = measure_along(st, MeasurementAxis(0.0, 0.0), Strength(0.3))
        assert np.allclose(out.vec, 0.3 * st.vec, atol=1e-15)

    def test_projective_overlap(self):
        # |<n'|n>|^2 = (1 + cos gamma)/2 with gamma the axis angle
        st = axis_state(MeasurementAxis(np.pi / 2, 0.0))
        out = measure_along(st, MeasurementAxis(np.pi / 2, -np.pi / 3),
                            Strength(0.0))
        assert abs(out.norm - np.cos(np.pi / 6)) < 1e-12

    def test_g_amplitude_exactly_unchanged(self):
        rng = np.random.default_rng(2)
        st = QutritState(np.array([0.2 - 0.5j, 0.1 + 0.4j, 0.6 + 0.3j]))
        for _ in range(25):
            ax = MeasurementAxis(float(np.arccos(rng.uniform(-1, 1))),
                                 float(rng.uniform(-7, 7)))
            st = measure_along(st, ax, Strength(float(rng.uniform(0.05, 1))))
        assert st.a_g == 0.6 + 0.3j

    def test_gauge_invariance_of_conjugated_kraus(self):
        # e^{i alpha} R gives the same conjugated operator
        rng = np.random.default_rng(9)
        for _ in range(20):
            ax = MeasurementAxis(float(np.arccos(rng.uniform(-1, 1))),
                                 float(rng.uniform(-7, 7)))
            s = Strength(float(rng.uniform(0, 1)))
            r = rotation_to_axis(ax)
            phased = Operator3(np.exp(1j * rng.uniform(0, 2 * np.pi)) * r.mat)
            k_plain = r.dagger() @ kraus_null(s) @ r
            k_phased = phased.dagger() @ kraus_null(s) @ phased
            assert np.max(np.abs(k_plain.mat - k_phased.mat)) < 1e-12


class TestAnalyticProtocol:
    def test_north_pole_trivial(self):
        for m in [0.0, 0.4, 1.0]:
            res, _ = run_protocol_analytic(
                ProtocolSpec(theta=0.0, strength=Strength(m)))
            assert abs(res.contrast - 1.0) < 1e-12
            assert circ_diff(res.phase, 0.0) < 1e-12

    def test_no_measurement_trivial(self):
        res, _ = run_protocol_analytic(
            ProtocolSpec(theta=1.234, strength=Strength(1.0)))
        assert abs(res.contrast - 1.0) < 1e-12
        assert circ_diff(res.phase, 0.0) < 1e-12

    def test_equatorial_hexagon(self):
        res, _ = run_protocol_analytic(
            ProtocolSpec(theta=np.pi / 2, strength=Strength(0.0)))
        assert abs(res.contrast - 27 / 64) < 1e-12
        assert circ_diff(res.phase, np.pi) < 1e-10

    def test_south_pole_fixed_point(self):
        for m in [0.0, 0.3, 0.8]:
            res, _ = run_protocol_analytic(
                ProtocolSpec(theta=np.pi, strength=Strength(m)))
            assert abs(res.contrast - 1.0) < 1e-12
            assert circ_diff(res.phase, 0.0) < 1e-12

    def test_reference_amplitude_immune(self):
        for w in [0.25, 0.5, 0.8]:
            spec = ProtocolSpec(theta=1.1, strength=Strength(0.4),
                                reference_weight=w)
            state = initial_state(spec.theta, w)
            for ax in spec.axes:
                state = measure_along(state, ax, spec.strength)
            assert abs(state.a_g - np.sqrt(w)) < 1e-14

    def test_contrast_bound(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            w = float(rng.uniform(0.05, 0.95))
            spec = ProtocolSpec(theta=float(rng.uniform(0, np.pi)),
                                strength=Strength(float(rng.uniform(0, 1))),
                                reference_weight=w)
            res, _ = run_protocol_analytic(spec)
            assert res.contrast <= 2 * np.sqrt(w * (1 - w)) + 1e-12

    def test_schedule_reversal_negates_phase(self):
        base = ProtocolSpec(theta=1.0, strength=Strength(0.35))
        reverse = ProtocolSpec(
            theta=1.0, strength=Strength(0.35),
            phi_schedule=tuple(-p for p in base.phi_schedule))
        r1, _ = run_protocol_analytic(base)
        r2, _ = run_protocol_analytic(reverse)
        assert abs(r1.contrast - r2.contrast) < 1e-12
        assert circ_diff(r1.phase, -r2.phase) < 1e-12

    def test_gauge_invariance_of_full_run(self):
        # dressing every measurement rotation with a random phase leaves the
        # interference amplitude untouched
        rng = np.random.default_rng(21)
        spec = ProtocolSpec(theta=0.9, strength=Strength(0.45))
        reference, _ = run_protocol_analytic(spec)
        state = initial_state(spec.theta, spec.reference_weight)
        for ax in spec.axes:
            r = rotation_to_axis(ax)
            phased = Operator3(np.exp(1j * rng.uniform(0, 2 * np.pi)) * r.mat)
            k = phased.dagger() @ kraus_null(spec.strength) @ phased
            state = k.apply(state)
        close = rotation_to_axis(spec.closing_axis)
        amp = 2 * np.sqrt(spec.reference_weight) * (close.mat @ state.vec)[E]
        assert abs(amp - amplitude(reference)) < 1e-12

    def test_monotone_dephasing_above_the_dip(self):
        # Strengthening the measurement (decreasing m) dephases monotonically
        # down to the contrast dip near the transition; below the dip the
        # dragged state recovers contrast, so the monotone range is m >= 0.4
        # at theta = pi/4 (c(pi/4, 0.02) = 0.636 > c(pi/4, 0.35) = 0.62).
        ms = np.linspace(1.0, 0.4, 25)
        cs = [run_protocol_analytic(
            ProtocolSpec(theta=np.pi / 4, strength=Strength(float(m))))[0].contrast
            for m in ms]
        assert np.all(np.diff(cs) < 1e-12)

    def test_dephasing_non_monotone_below_the_dip(self):
        # counterexample pinning the restriction above
        c_projective = run_protocol_analytic(
            ProtocolSpec(theta=np.pi / 4, strength=Strength(0.0)))[0].contrast
        c_dip = run_protocol_analytic(
            ProtocolSpec(theta=np.pi / 4, strength=Strength(0.35)))[0].contrast
        assert c_projective > c_dip + 0.01

    def test_batch_matches_single_runs(self):
        thetas = np.linspace(0.0, np.pi, 17)
        amps = _amplitudes_for_thetas(thetas, Strength(0.6))
        for th, a in zip(thetas, amps):
            res, _ = run_protocol_analytic(
                ProtocolSpec(theta=float(th), strength=Strength(0.6)))
            assert abs(a - amplitude(res)) < 1e-13


class TestPathRecord:
    def test_shape_and_factors(self):
        spec = ProtocolSpec(theta=np.pi / 2, strength=Strength(0.0))
        _, rec = run_protocol_analytic(spec)
        assert len(rec) == 6
        for step in rec.steps:
            assert 0.0 < step.amplitude_factor <= 1.0
            assert abs(step.amplitude_factor - np.cos(np.pi / 6)) < 1e-12
        assert rec.loop_vertices().shape == (7, 3)

    def test_projective_path_visits_axes(self):
        spec = ProtocolSpec(theta=1.2, strength=Strength(0.0))
        _, rec = run_protocol_analytic(spec)
        for step, phi in zip(rec.steps, spec.phi_schedule):
            expect = np.array([np.sin(1.2) * np.cos(-phi),
                               np.sin(1.2) * np.sin(-phi), np.cos(1.2)])
            assert np.max(np.abs(step.bloch_after.as_array() - expect)) < 1e-12

    def test_weak_limit_path_stays_home(self):
        spec = ProtocolSpec(theta=1.2, strength=Strength(1.0))
        _, rec = run_protocol_analytic(spec)
        start = rec.steps[0].bloch_before.as_array()
        for step in rec.steps:
            assert np.max(np.abs(step.bloch_after.as_array() - start)) < 1e-12
            assert step.amplitude_factor == 1.0


class TestProjectiveProtocol:
    def test_requires_m_zero(self):
        with pytest.raises(DomainError):
            run_protocol_projective(ProtocolSpec(theta=1.0, strength=Strength(0.5)))

    def test_equatorial_hexagon(self):
        res, _ = run_protocol_projective(
            ProtocolSpec(theta=np.pi / 2, strength=Strength(0.0)))
        assert abs(res.contrast - 27 / 64) < 1e-12
        assert circ_diff(res.phase, np.pi) < 1e-10

    def test_annihilation_flags_zero_contrast(self):
        # two antipodal equatorial projections wipe out the qubit component
        spec = ProtocolSpec(theta=np.pi / 2, strength=Strength(0.0), n_meas=2,
                            phi_schedule=(-np.pi, -2 * np.pi))
        res, _ = run_protocol_projective(spec)
        assert res.contrast < CONTRAST_FLOOR
        assert not res.phase_defined

    def test_north_pole_any_n(self):
        for n in [1, 4, 13]:
            res, _ = run_protocol_projective(
                ProtocolSpec(theta=0.0, strength=Strength(0.0), n_meas=n))
            assert abs(res.contrast - 1.0) < 1e-12
            assert circ_diff(res.phase, 0.0) < 1e-12
