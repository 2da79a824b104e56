"""Gaussian-readout measurement model for the f-selective probe.

A single probe resolves ``|f>`` against the degenerate pair {``|e>``,
``|g>``} and is fully characterized by one number, the null-outcome
attenuation ``m`` of the f amplitude:

    m = exp(-gamma*tau) = exp(-(r0/sigma)^2 / 4),

where ``gamma*tau`` is the integrated dephasing between f and the other
levels and ``r0/sigma`` the cloud separation of the readout in units of
the per-cloud width.  ``m = 0`` is a projective measurement, ``m = 1``
no measurement.

The readout coordinate is reduced to one dimension along the line joining
the cloud centers (the physics depends only on the Gaussian overlap; the
two-dimensional quadrature-plane picture is equivalent).  In these units
the amplitude profiles are

    Psi(r)  = (2*pi)**-0.25 * exp(-r**2 / 4)          for |e>, |g>,
    Psit(r) = (2*pi)**-0.25 * exp(-(r - r0)**2 / 4)   for |f>,

so |Psi|^2 and |Psit|^2 are proper unit-variance densities and the
separation r0 = sqrt(-8 ln m) realizes the overlap contract
``integral Psi Psit dr = m``.  The Kraus amplitudes are real: there is no
informational phase backaction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, QuadratureError
from .qutrit import F, Operator3, QutritState

# Readout coordinates are plain floats in units of the per-cloud standard
# deviation of |Psi|^2.
ReadoutSample = float

DEFAULT_QUADRATURE_NODES = 64
_GAUSS_NORM = (2.0 * np.pi) ** -0.25


@dataclass(frozen=True)
class Strength:
    """Measurement strength as the per-probe null-outcome attenuation m in [0, 1]."""

    m: float

    def __post_init__(self):
        if not np.isfinite(self.m) or not (0.0 <= self.m <= 1.0):
            raise DomainError(f"strength m={self.m!r} outside [0, 1]")

    @classmethod
    def from_gamma_tau(cls, gamma_tau: float) -> "Strength":
        if not gamma_tau >= 0.0:
            raise DomainError(f"gamma*tau={gamma_tau!r} must be >= 0")
        return cls(float(np.exp(-gamma_tau)))

    @classmethod
    def from_r0_sigma(cls, r0_over_sigma: float) -> "Strength":
        if not r0_over_sigma >= 0.0:
            raise DomainError(f"r0/sigma={r0_over_sigma!r} must be >= 0")
        return cls(float(np.exp(-0.25 * r0_over_sigma ** 2)))

    @property
    def gamma_tau(self) -> float:
        if self.m == 0.0:
            return np.inf
        return float(-np.log(self.m))

    @property
    def r0_over_sigma(self) -> float:
        """Cloud separation in units of the amplitude-profile sigma convention
        exp(-r^2 / (2 sigma^2)), i.e. m = exp(-(r0/sigma)^2/4)."""
        return float(2.0 * np.sqrt(self.gamma_tau))

    @property
    def is_projective(self) -> bool:
        return self.m == 0.0


def cloud_separation(s: Strength) -> float:
    """Readout cloud separation r0 in this module's unit-variance units."""
    return float(np.sqrt(8.0 * s.gamma_tau))


def kraus_null(s: Strength) -> Operator3:
    """Effective null-outcome operator diag(m, 1, 1): attenuate f, keep e and g."""
    return Operator3(np.diag([s.m, 1.0, 1.0]).astype(complex))


def gauss_amplitudes(s: Strength, r):
    """Amplitude pair (Psit(r), Psi(r)) of the readout Kraus operator.

    Vectorized over r.  Requires m > 0 (a projective probe has no
    finite-separation Gaussian model; use kraus_null).
    """
    if s.is_projective:
        raise DomainError("readout Kraus undefined at m = 0; use kraus_null")
    r = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r)):
        raise DomainError("readout sample must be finite")
    r0 = cloud_separation(s)
    psit = _GAUSS_NORM * np.exp(-0.25 * (r - r0) ** 2)
    psi = _GAUSS_NORM * np.exp(-0.25 * r ** 2)
    return psit, psi


def kraus_readout(s: Strength, r: ReadoutSample) -> Operator3:
    """Outcome-resolved Kraus operator diag(Psit(r), Psi(r), Psi(r))."""
    psit, psi = gauss_amplitudes(s, float(r))
    return Operator3(np.diag([psit, psi, psi]).astype(complex))


@lru_cache(maxsize=8)
def readout_quadrature(n_nodes: int = DEFAULT_QUADRATURE_NODES):
    """Nodes and weights with sum(w_i * f(r_i)) ~ integral f(r) dr.

    Gauss-Hermite rescaled to the unit-variance clouds used here; exact for
    f = (Gaussian of variance 1 centered anywhere reachable) x polynomial.
    Node counts above ~256 underflow the raw Hermite weights.
    """
    if not (2 <= n_nodes <= 256):
        raise DomainError(f"n_nodes={n_nodes!r} outside [2, 256]")
    x, w = np.polynomial.hermite.hermgauss(n_nodes)
    r = np.sqrt(2.0) * x
    wt = np.sqrt(2.0) * w * np.exp(x ** 2)
    r.setflags(write=False)
    wt.setflags(write=False)
    return r, wt


def completeness_residual(s: Strength, n_nodes: int = DEFAULT_QUADRATURE_NODES) -> float:
    """Max entrywise residual of integral M(r)^dag M(r) dr against the identity."""
    r, wt = readout_quadrature(n_nodes)
    psit, psi = gauss_amplitudes(s, r)
    ff = float(np.sum(wt * psit ** 2))
    ee = float(np.sum(wt * psi ** 2))
    return max(abs(ff - 1.0), abs(ee - 1.0))


def effective_kraus_from_integral(s: Strength,
                                  n_nodes: int = DEFAULT_QUADRATURE_NODES,
                                  residual_tol: float = 1e-8) -> Operator3:
    """Numerically evaluate integral Psi*(r) M(r) dr.

    This is the reference-amplitude-weighted readout average; it must
    reproduce kraus_null(s), which is what callers verify.  The e/g entries
    have the exactly known value 1, so they double as an internal
    convergence check: a QuadratureError (with the residual) is raised if
    they miss it by more than ``residual_tol``.
    """
    r, wt = readout_quadrature(n_nodes)
    psit, psi = gauss_amplitudes(s, r)
    ff = float(np.sum(wt * psi * psit))
    ee = float(np.sum(wt * psi * psi))
    residual = abs(ee - 1.0)
    if residual > residual_tol:
        raise QuadratureError(
            f"readout quadrature with {n_nodes} nodes did not converge", residual)
    return Operator3(np.diag([ff, ee, ee]).astype(complex))


@dataclass(frozen=True)
class ReadoutDistribution:
    """Two-component Gaussian mixture of the readout coordinate.

    ``p_f`` weights the displaced cloud at ``separation``; both clouds have
    unit variance.
    """

    p_f: float
    separation: float

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        norm = 1.0 / np.sqrt(2.0 * np.pi)
        return (self.p_f * norm * np.exp(-0.5 * (r - self.separation) ** 2)
                + (1.0 - self.p_f) * norm * np.exp(-0.5 * r ** 2))

    def cdf(self, r):
        from scipy.special import ndtr
        r = np.asarray(r, dtype=float)
        return self.p_f * ndtr(r - self.separation) + (1.0 - self.p_f) * ndtr(r)

    def mean(self) -> float:
        return self.p_f * self.separation


def readout_pdf(state: QutritState, s: Strength) -> ReadoutDistribution:
    """Probability distribution of a single readout on ``state``.

    ``state`` must be normalized: the mixture weight of the displaced cloud
    is the f population |a_f|^2.
    """
    if abs(state.norm - 1.0) > 1e-10:
        raise DomainError("readout_pdf requires a normalized state")
    if s.is_projective:
        raise DomainError("readout pdf undefined at m = 0")
    return ReadoutDistribution(p_f=float(abs(state.vec[F]) ** 2),
                               separation=cloud_separation(s))
