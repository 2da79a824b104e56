"""Born-rule Monte Carlo over full readout sequences.

This is the stochastic oracle for the closed-form null-outcome product:
every trajectory draws its readouts from the exact outcome distribution,
applies the outcome-resolved backaction, and contributes the interference
term of its *normalized* final state.  Because the squared norm of the
unnormalized state is the joint outcome density, the plain sample mean of

    <psi_hat | R_close^dag A R_close | psi_hat>,   A = 2 |g><e|,

estimates the ensemble interference integral without selecting any
trajectory; postselection-free averaging is what makes the comparison
against the analytic product meaningful.

Randomness is counter-based: sample ``i`` of a run with seed ``s`` reads
its uniforms from the dedicated Philox substream ``key=s, counter=i<<64``,
one uniform per measurement, mapped through the component-wise inverse CDF
of the readout mixture.  A trajectory is therefore a pure function of
``(seed, sample_id, spec)``: results are bit-identical for any worker
count, block partition, or evaluation order, and the reduction runs over
the per-sample terms in sample order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import DomainError
from .measurement import cloud_separation, gauss_amplitudes
from .protocol import (CONTRAST_FLOOR, InterferenceResult, ProtocolSpec,
                       initial_state, rotation_to_axis)
from .qutrit import E, F, G, QutritState

#: Samples per reduction block; fixed so that the block layout (and thus the
#: bit pattern of the result) never depends on the worker count.
BLOCK_SIZE = 4096

#: Minimum sample count below which estimates are flagged insufficient.
MIN_SAMPLES = 100


@dataclass(frozen=True)
class McConfig:
    """Size and seeding of a Monte Carlo run.

    Stream policy: per-sample Philox substreams keyed by the run seed with
    the sample id in the high counter word (see the module docstring).
    """

    n_samples: int
    seed: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise DomainError(f"n_samples={self.n_samples!r} must be >= 1")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise DomainError("seed must fit in 64 bits")


@dataclass(frozen=True)
class TrajectorySample:
    """One simulated readout sequence.

    ``readouts`` holds the readout coordinates (for a projective run, the
    click indicators).  ``final_state`` is the normalized state after the
    last measurement, before the closing contraction.
    ``probability_weight`` is the joint outcome density (or probability, if
    projective) accumulated along the sequence.
    """

    readouts: np.ndarray
    final_state: QutritState
    probability_weight: float
    interference_term: complex


def _substream(seed: int, sample_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed,
                                                counter=sample_id << 64))


# --- vectorized Philox4x64-10 ------------------------------------------------
# Per-sample Generator construction costs ~25 us; across 1e5 samples that
# dominates a run.  The block cipher itself is a pure function of
# (key, counter), so evaluating it with array arithmetic over all sample ids
# reproduces each substream bit for bit (asserted in the test suite) at a
# fraction of the cost.  numpy's bit generator pre-increments the counter
# before producing a block, hence the b + 1 below.

_PHILOX_M0 = np.uint64(0xD2E7470EE14C6C93)
_PHILOX_M1 = np.uint64(0xCA5A826395121157)
_PHILOX_W0 = 0x9E3779B97F4A7C15
_PHILOX_W1 = 0xBB67AE8584CAA73B
_MASK32 = np.uint64(0xFFFFFFFF)
_MASK64 = (1 << 64) - 1
_SH32 = np.uint64(32)
_SH11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


def _philox_round_keys(seed: int):
    k0, k1 = seed & _MASK64, (seed >> 64) & _MASK64
    keys = []
    for r in range(10):
        if r > 0:
            k0 = (k0 + _PHILOX_W0) & _MASK64
            k1 = (k1 + _PHILOX_W1) & _MASK64
        keys.append((np.uint64(k0), np.uint64(k1)))
    return keys


def _mulhilo64(a: np.uint64, b: np.ndarray):
    a0, a1 = a & _MASK32, a >> _SH32
    b0, b1 = b & _MASK32, b >> _SH32
    low = a0 * b0
    c1 = a1 * b0
    c2 = a0 * b1
    t = (low >> _SH32) + (c1 & _MASK32) + (c2 & _MASK32)
    lo = (low & _MASK32) | ((t & _MASK32) << _SH32)
    hi = a1 * b1 + (c1 >> _SH32) + (c2 >> _SH32) + (t >> _SH32)
    return hi, lo


def _philox_uniforms(seed: int, ids: np.ndarray, n_draws: int) -> np.ndarray:
    """uniforms[i, j]: the j-th double of the substream of sample ids[i]."""
    ids = np.asarray(ids, dtype=np.uint64)
    keys = _philox_round_keys(seed)
    n_blocks = -(-n_draws // 4)
    words = np.empty((ids.size, 4 * n_blocks), dtype=np.uint64)
    for b in range(n_blocks):
        x0 = np.full(ids.size, b + 1, dtype=np.uint64)
        x1 = ids.copy()
        x2 = np.zeros(ids.size, dtype=np.uint64)
        x3 = np.zeros(ids.size, dtype=np.uint64)
        for k0, k1 in keys:
            hi0, lo0 = _mulhilo64(_PHILOX_M0, x0)
            hi1, lo1 = _mulhilo64(_PHILOX_M1, x2)
            x0, x1, x2, x3 = hi1 ^ x1 ^ k0, lo1, hi0 ^ x3 ^ k1, lo0
        words[:, 4 * b] = x0
        words[:, 4 * b + 1] = x1
        words[:, 4 * b + 2] = x2
        words[:, 4 * b + 3] = x3
    return (words[:, :n_draws] >> _SH11) * _INV53


def _mixture_readouts(u: np.ndarray, p_f: np.ndarray, r0: float) -> np.ndarray:
    """Inverse-CDF draw from the readout mixture, one uniform per draw.

    The uniform selects the cloud by its weight and its remainder is pushed
    through that cloud's Gaussian quantile, which samples the exact mixture
    with a single draw.
    """
    null_w = 1.0 - p_f
    click = u >= null_w
    scale = np.where(click, np.maximum(p_f, 1e-300),
                     np.maximum(null_w, 1e-300))
    v = np.where(click, u - null_w, u) / scale
    v = np.clip(v, 1e-300, 1.0 - 1e-16)
    return ndtri(v) + np.where(click, r0, 0.0)


def _block_terms(spec: ProtocolSpec, seed: int, start: int, stop: int):
    """Interference terms (and the trailing state/weights) for samples
    [start, stop).  Pure function of its arguments."""
    n = stop - start
    n_meas = spec.n_meas
    uniforms = _philox_uniforms(seed, np.arange(start, stop), n_meas)

    states = np.tile(initial_state(spec.theta, spec.reference_weight).vec,
                     (n, 1))
    weights = np.ones(n)
    readouts = np.empty((n, n_meas))
    projective = spec.strength.is_projective
    r0 = 0.0 if projective else cloud_separation(spec.strength)

    for k, axis in enumerate(spec.axes):
        rot = rotation_to_axis(axis).mat
        states = states @ rot.T
        p_f = np.clip(np.abs(states[:, F]) ** 2, 0.0, 1.0)
        u = uniforms[:, k]
        if projective:
            click = u >= 1.0 - p_f
            readouts[:, k] = click
            states[:, F] *= click
            states[:, E] *= ~click
            states[:, G] *= ~click
        else:
            r = _mixture_readouts(u, p_f, r0)
            readouts[:, k] = r
            psit, psi = gauss_amplitudes(spec.strength, r)
            states[:, F] *= psit
            states[:, E] *= psi
            states[:, G] *= psi
        norm_sq = np.sum(np.abs(states) ** 2, axis=1)
        weights *= norm_sq
        states /= np.sqrt(norm_sq)[:, None]
        states = states @ rot.conj()

    close = rotation_to_axis(spec.closing_axis).mat
    terms = 2.0 * np.conj(states[:, G]) * (states @ close.T)[:, E]
    return terms, states, weights, readouts


def sample_trajectory(spec: ProtocolSpec, sample_id: int,
                      seed: int) -> TrajectorySample:
    """Simulate the single trajectory addressed by (seed, sample_id)."""
    terms, states, weights, readouts = _block_terms(
        spec, seed, sample_id, sample_id + 1)
    return TrajectorySample(readouts=readouts[0],
                            final_state=QutritState(states[0], normalized=True),
                            probability_weight=float(weights[0]),
                            interference_term=complex(terms[0]))


@dataclass(frozen=True)
class McEstimate:
    """Sample mean of the interference terms with componentwise errors."""

    mean: complex
    stderr_re: float
    stderr_im: float
    n_samples: int
    insufficient: bool

    @property
    def contrast(self) -> float:
        return abs(self.mean)

    @property
    def phase(self) -> float:
        return float(np.angle(self.mean))

    @property
    def contrast_stderr(self) -> float:
        c = self.contrast
        if c == 0.0:
            return float(np.hypot(self.stderr_re, self.stderr_im))
        return float(np.hypot(self.mean.real * self.stderr_re,
                              self.mean.imag * self.stderr_im) / c)

    @property
    def phase_stderr(self) -> float:
        c = self.contrast
        if c == 0.0:
            return float(np.pi)
        return float(np.hypot(self.mean.imag * self.stderr_re,
                              self.mean.real * self.stderr_im) / c ** 2)

    def to_interference_result(self) -> InterferenceResult:
        return InterferenceResult(contrast=self.contrast, phase=self.phase,
                                  method="monte-carlo",
                                  stderr=self.contrast_stderr,
                                  phase_defined=self.contrast > CONTRAST_FLOOR)


def _blocks(n_samples: int):
    return [(s, min(s + BLOCK_SIZE, n_samples))
            for s in range(0, n_samples, BLOCK_SIZE)]


def _block_worker(args):
    spec, seed, start, stop = args
    return _block_terms(spec, seed, start, stop)[0]


# Worker pools are reused across calls: fork startup costs more than a
# typical block, and repeated estimator calls (parameter grids) would pay
# it per call otherwise.  concurrent.futures joins them at interpreter exit.
_pools: dict[int, ProcessPoolExecutor] = {}


def _pool(workers: int) -> ProcessPoolExecutor:
    pool = _pools.get(workers)
    if pool is None:
        pool = ProcessPoolExecutor(max_workers=workers)
        _pools[workers] = pool
    return pool


def interference_terms(spec: ProtocolSpec, cfg: McConfig,
                       workers: int = 1) -> np.ndarray:
    """Per-sample interference terms in sample order."""
    jobs = [(spec, cfg.seed, a, b) for a, b in _blocks(cfg.n_samples)]
    if workers > 1 and len(jobs) > 1:
        parts = list(_pool(workers).map(_block_worker, jobs))
    else:
        parts = [_block_worker(job) for job in jobs]
    return np.concatenate(parts)


def mc_interference(spec: ProtocolSpec, cfg: McConfig,
                    workers: int = 1) -> McEstimate:
    """Estimate the ensemble interference c*exp(i*chi) by Born sampling.

    Every sampled trajectory enters the mean; nothing is discarded.  The
    componentwise standard errors are the usual sqrt(var/n).
    """
    terms = interference_terms(spec, cfg, workers=workers)
    n = terms.size
    mean = complex(np.mean(terms))
    if n > 1:
        stderr_re = float(np.std(terms.real, ddof=1) / np.sqrt(n))
        stderr_im = float(np.std(terms.imag, ddof=1) / np.sqrt(n))
    else:
        stderr_re = stderr_im = np.inf
    return McEstimate(mean=mean, stderr_re=stderr_re, stderr_im=stderr_im,
                      n_samples=n, insufficient=n < MIN_SAMPLES)


#: Absolute stderr floor in z-score comparisons.  Components with no
#: statistical spread (e.g. the imaginary part of a real-amplitude
#: protocol) still differ from the reference by float rounding of the
#: reductions; differences below this floor count as exact agreement.
Z_SCORE_FLOOR = 1e-12


def z_scores(estimate: McEstimate, reference: complex) -> tuple[float, float]:
    """Componentwise |MC - reference| / stderr.

    Deltas below Z_SCORE_FLOOR are rounding noise of the two float paths and
    score exactly 0; otherwise the stderr is floored at the same level so
    zero-variance components compare at float precision rather than dividing
    dust by an even smaller spread.
    """

    def one(delta: float, stderr: float) -> float:
        if abs(delta) <= Z_SCORE_FLOOR:
            return 0.0
        return abs(delta) / max(stderr, Z_SCORE_FLOOR)

    return (one(estimate.mean.real - reference.real, estimate.stderr_re),
            one(estimate.mean.imag - reference.imag, estimate.stderr_im))


@dataclass(frozen=True)
class ReadoutHistogram:
    """First-measurement readout histogram against its exact mixture law.

    ``edges`` are the (post-merge) bin edges; the first and last bins absorb
    the open tails.  ``p_value`` is the chi-square goodness-of-fit
    probability of the observed counts.
    """

    edges: np.ndarray
    counts: np.ndarray
    expected: np.ndarray
    chi2: float
    p_value: float
    n_samples: int
    readouts: np.ndarray
    p_f: float
    separation: float


def readout_histogram(spec: ProtocolSpec, cfg: McConfig,
                      n_bins: int = 40) -> ReadoutHistogram:
    """Histogram the first readout of every sample and test it against the
    two-cloud mixture predicted for the initial state."""
    from scipy.stats import chi2 as chi2_dist

    if spec.strength.is_projective:
        raise DomainError("readout histogram needs the Gaussian model (m > 0)")
    rot = rotation_to_axis(spec.axes[0]).mat
    rotated = rot @ initial_state(spec.theta, spec.reference_weight).vec
    p_f = float(np.clip(abs(rotated[F]) ** 2, 0.0, 1.0))
    r0 = cloud_separation(spec.strength)

    u = _philox_uniforms(cfg.seed, np.arange(cfg.n_samples), 1)[:, 0]
    r = _mixture_readouts(u, np.full(cfg.n_samples, p_f), r0)

    from scipy.special import ndtr
    edges = np.linspace(-6.0, r0 + 6.0, n_bins + 1)
    prob = np.empty(n_bins)
    cdf = p_f * ndtr(edges - r0) + (1.0 - p_f) * ndtr(edges)
    prob[:] = np.diff(cdf)
    prob[0] += cdf[0]
    prob[-1] += 1.0 - cdf[-1]
    counts = np.bincount(np.searchsorted(edges[1:-1], r),
                         minlength=n_bins).astype(float)

    # Merge bins until every expected count supports the chi-square form.
    min_expected = 5.0
    m_edges = [edges[0]]
    m_prob, m_counts = [], []
    acc_p = acc_c = 0.0
    for k in range(n_bins):
        acc_p += prob[k]
        acc_c += counts[k]
        if acc_p * cfg.n_samples >= min_expected:
            m_edges.append(edges[k + 1])
            m_prob.append(acc_p)
            m_counts.append(acc_c)
            acc_p = acc_c = 0.0
    if acc_p > 0 or acc_c > 0:
        if m_prob:
            m_prob[-1] += acc_p
            m_counts[-1] += acc_c
            m_edges[-1] = edges[-1]
        else:
            m_prob, m_counts = [acc_p], [acc_c]
            m_edges.append(edges[-1])

    expected = np.asarray(m_prob) * cfg.n_samples
    counts = np.asarray(m_counts)
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    dof = max(len(counts) - 1, 1)
    p_value = float(chi2_dist.sf(chi2, dof))
    return ReadoutHistogram(edges=np.asarray(m_edges), counts=counts,
                            expected=expected, chi2=chi2, p_value=p_value,
                            n_samples=cfg.n_samples, readouts=r, p_f=p_f,
                            separation=r0)
