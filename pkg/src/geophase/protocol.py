"""The wrapping measurement sequence and its closed-form evaluation.

One run at polar angle theta: prepare

    |phi_i> = sqrt(w) |g> + sqrt(1-w) |theta, phi=0>,

apply N null-outcome measurements along axes (theta, phi_k) with the
azimuth stepping down to -2*pi (default phi_k = -2*pi*k/N), then close the
loop with the rotation that maps the axis (theta, -2*pi) onto |e> and read
out the interference between the untouched reference amplitude on |g> and
the phase-carrying amplitude on |e>:

    c * exp(i*chi) = 2 * sqrt(w) * <e| R_close |phi_final>.

Each null-outcome measurement is the conjugated attenuation
R^dag diag(m,1,1) R: it damps the component antipodal to the measurement
axis by m and never touches |g>, so the reference amplitude stays
sqrt(w) through the whole product and the contrast is bounded by
2*sqrt(w*(1-w)).  The m = 0 limit is the exact projector onto the
{axis, g} subspace, which is why a single code path serves both the
partial and the projective protocol.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .measurement import Strength, kraus_null
from .qutrit import (E, F, G, BlochVector, MeasurementAxis, Operator3,
                     QutritState, _bloch_batch, _rotation_matrices, axis_state,
                     bloch_of, rotation_to_axis)

#: Contrast below which the interference phase is flagged undefined.
CONTRAST_FLOOR = 1e-9

#: Azimuth of the closing rotation: one full wrap below the initial meridian.
CLOSING_PHI = -2.0 * np.pi


def default_schedule(n_meas: int) -> tuple[float, ...]:
    """Uniform decreasing azimuths -2*pi*k/N for k = 1..N."""
    return tuple(-2.0 * np.pi * k / n_meas for k in range(1, n_meas + 1))


@dataclass(frozen=True)
class ProtocolSpec:
    """Full description of one run.

    ``phi_schedule`` defaults to the uniform wrap; custom schedules are
    accepted (finite values, length n_meas).  ``reference_weight`` is the
    initial population of the reference level |g>.
    """

    theta: float
    strength: Strength
    n_meas: int = 6
    phi_schedule: tuple[float, ...] | None = None
    reference_weight: float = 0.5

    def __post_init__(self):
        if not np.isfinite(self.theta) or not (0.0 <= self.theta <= np.pi):
            raise DomainError(f"theta={self.theta!r} outside [0, pi]")
        if self.n_meas < 1:
            raise DomainError(f"n_meas={self.n_meas!r} must be positive")
        if not (0.0 < self.reference_weight < 1.0):
            raise DomainError(
                f"reference_weight={self.reference_weight!r} outside (0, 1)")
        if self.phi_schedule is None:
            object.__setattr__(self, "phi_schedule", default_schedule(self.n_meas))
        else:
            sched = tuple(float(p) for p in self.phi_schedule)
            if len(sched) != self.n_meas:
                raise DomainError(
                    f"schedule length {len(sched)} != n_meas {self.n_meas}")
            if not all(np.isfinite(p) for p in sched):
                raise DomainError("phi_schedule must be finite")
            object.__setattr__(self, "phi_schedule", sched)

    @property
    def axes(self) -> tuple[MeasurementAxis, ...]:
        return tuple(MeasurementAxis(self.theta, p) for p in self.phi_schedule)

    @property
    def closing_axis(self) -> MeasurementAxis:
        return MeasurementAxis(self.theta, CLOSING_PHI)


@dataclass(frozen=True)
class InterferenceResult:
    """Contrast and phase of the reference interference.

    ``phase`` is reported in (-pi, pi]; it is meaningful only when
    ``phase_defined`` (contrast above CONTRAST_FLOOR).  ``stderr`` is the
    standard error of the contrast for Monte Carlo estimates, None for
    analytic results.
    """

    contrast: float
    phase: float
    method: str
    stderr: float | None = None
    phase_defined: bool = True

    @classmethod
    def from_amplitude(cls, amplitude: complex, method: str,
                       stderr: float | None = None) -> "InterferenceResult":
        contrast = abs(amplitude)
        return cls(contrast=float(contrast),
                   phase=float(np.angle(amplitude)),
                   method=method,
                   stderr=stderr,
                   phase_defined=bool(contrast > CONTRAST_FLOOR))


@dataclass(frozen=True)
class PathStep:
    """One measurement: axis, Bloch vectors before/after, and the factor by
    which the {e,f} amplitude was attenuated (1 means no backaction)."""

    axis: MeasurementAxis
    bloch_before: BlochVector
    bloch_after: BlochVector
    amplitude_factor: float


@dataclass(frozen=True)
class PathRecord:
    """Per-step log of the normalized {e,f} trajectory."""

    steps: tuple[PathStep, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)

    def loop_vertices(self) -> np.ndarray:
        """Bloch vertices of the closed loop: the initial point followed by
        the post-measurement points.  The closing arc returns to the first
        vertex (the closing axis sits on the initial meridian)."""
        pts = [self.steps[0].bloch_before.as_array()]
        pts += [s.bloch_after.as_array() for s in self.steps]
        return np.array(pts)


def initial_state(theta: float, reference_weight: float) -> QutritState:
    """sqrt(w)|g> + sqrt(1-w)|theta, phi=0>."""
    vec = np.sqrt(1.0 - reference_weight) * axis_state(
        MeasurementAxis(theta, 0.0)).vec.copy()
    vec[G] = np.sqrt(reference_weight)
    return QutritState(vec, normalized=True)


def conjugated_null_kraus(axis: MeasurementAxis, s: Strength) -> Operator3:
    """R^dag diag(m,1,1) R for the rotation R onto ``axis``.

    Damps the component antipodal to the axis by m; identity on |g>.
    Independent of any phase redefinition of R.
    """
    r = rotation_to_axis(axis)
    return r.dagger() @ kraus_null(s) @ r


def measure_along(state: QutritState, axis: MeasurementAxis,
                  s: Strength) -> QutritState:
    """Apply one null-outcome measurement along ``axis`` (unnormalized output).

    The g amplitude is exactly unchanged.
    """
    return conjugated_null_kraus(axis, s).apply(state)


def _closing_amplitude(state: QutritState, spec: ProtocolSpec) -> complex:
    r_close = rotation_to_axis(spec.closing_axis)
    return 2.0 * np.sqrt(spec.reference_weight) * complex(
        (r_close.mat @ state.vec)[E])


def run_protocol_analytic(spec: ProtocolSpec) -> tuple[InterferenceResult, PathRecord]:
    """Evaluate one run by the closed-form null-outcome product.

    Returns the interference result and the recorded Bloch trajectory.
    A contrast below CONTRAST_FLOOR flags the phase undefined rather than
    raising.  When a projective step annihilates the {e,f} component
    (orthogonal consecutive axes), the trajectory freezes at its last
    defined point and the zero contrast carries the flag.
    """
    state = initial_state(spec.theta, spec.reference_weight)
    bloch = bloch_of(state)
    steps = []
    for axis in spec.axes:
        before = bloch
        ef_before = state.ef_norm
        state = measure_along(state, axis, spec.strength)
        ef_after = state.ef_norm
        # the conjugated Kraus is a contraction; clip float dust above 1
        factor = min(ef_after / ef_before, 1.0) if ef_before > 0.0 else 0.0
        if ef_after > 1e-15:
            bloch = bloch_of(state)
        steps.append(PathStep(axis=axis, bloch_before=before,
                              bloch_after=bloch, amplitude_factor=float(factor)))
    result = InterferenceResult.from_amplitude(
        _closing_amplitude(state, spec), method="analytic")
    return result, PathRecord(tuple(steps))


def run_protocol_projective(spec: ProtocolSpec) -> tuple[InterferenceResult, PathRecord]:
    """The m = 0 protocol with exact projectors.

    Kept as a named entry point because the outcome-resolved Gaussian model
    excludes m = 0; algebraically diag(0,1,1) is already the projector, so
    this shares the analytic product.
    """
    if not spec.strength.is_projective:
        raise DomainError(
            f"projective protocol requires m = 0, got m={spec.strength.m!r}")
    return run_protocol_analytic(spec)


def _amplitudes_for_thetas(thetas: np.ndarray, strength: Strength,
                           n_meas: int = 6,
                           reference_weight: float = 0.5,
                           phi_schedule: tuple[float, ...] | None = None) -> np.ndarray:
    """Closed-form interference amplitudes for a batch of polar angles.

    Vectorized over theta at fixed strength/schedule; used by curve and map
    sweeps.  Matches run_protocol_analytic node for node.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 1:
        raise DomainError("thetas must be one-dimensional")
    if np.any(thetas < 0.0) or np.any(thetas > np.pi):
        raise DomainError("thetas outside [0, pi]")
    schedule = phi_schedule if phi_schedule is not None else default_schedule(n_meas)
    if len(schedule) != n_meas:
        raise DomainError(f"schedule length {len(schedule)} != n_meas {n_meas}")
    w = reference_weight
    half = 0.5 * thetas
    states = np.zeros((thetas.size, 3), dtype=complex)
    states[:, F] = np.sqrt(1.0 - w) * np.sin(half)
    states[:, E] = np.sqrt(1.0 - w) * np.cos(half)
    states[:, G] = np.sqrt(w)
    m = strength.m
    for phi in schedule:
        rot = _rotation_matrices(thetas, phi)
        states = np.einsum("nij,nj->ni", rot, states)
        states[:, F] *= m
        states = np.einsum("nji,nj->ni", rot.conj(), states)
    close = _rotation_matrices(thetas, CLOSING_PHI)
    return 2.0 * np.sqrt(w) * np.einsum("nj,nj->n", close[:, E, :], states)


def _bloch_paths_for_thetas(thetas: np.ndarray, strength: Strength,
                            n_meas: int = 6,
                            reference_weight: float = 0.5,
                            phi_schedule: tuple[float, ...] | None = None) -> np.ndarray:
    """Batched loop vertices, shape (n_theta, n_meas + 1, 3).

    Row k holds the initial Bloch point followed by the n_meas
    post-measurement points, as in PathRecord.loop_vertices().
    """
    thetas = np.asarray(thetas, dtype=float)
    schedule = phi_schedule if phi_schedule is not None else default_schedule(n_meas)
    w = reference_weight
    half = 0.5 * thetas
    states = np.zeros((thetas.size, 3), dtype=complex)
    states[:, F] = np.sqrt(1.0 - w) * np.sin(half)
    states[:, E] = np.sqrt(1.0 - w) * np.cos(half)
    states[:, G] = np.sqrt(w)
    vertices = np.empty((thetas.size, len(schedule) + 1, 3), dtype=float)
    vertices[:, 0, :] = _bloch_batch(states)
    m = strength.m
    for k, phi in enumerate(schedule):
        rot = _rotation_matrices(thetas, phi)
        states = np.einsum("nij,nj->ni", rot, states)
        states[:, F] *= m
        states = np.einsum("nji,nj->ni", rot.conj(), states)
        vertices[:, k + 1, :] = _bloch_batch(states)
    return vertices
