"""Active-noise-control simulation.

Models the classic feed-forward loop: a reference sensor picks up the noise
source, the disturbance reaches the listener through a *primary* acoustic
path, and an adaptive FIR controller drives a cancelling speaker whose output
reaches the listener through a *secondary* path. The controller adapts on the
residual using LMS, NLMS, or filtered-x LMS (FXLMS), and performance is
reported as attenuation in dB per analysis window.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels
from .errors import ValidationError
from .signals import ATTENUATION_CAP_DB, FirPath, SampleBuffer, convolve_path

ALGORITHMS = ("LMS", "NLMS", "FXLMS")

#: Per-algorithm default adaptation step sizes.
DEFAULT_STEP_SIZE = {"LMS": 1e-3, "FXLMS": 1e-3, "NLMS": 0.1}

#: Attenuation analysis window, in seconds.
ATTENUATION_WINDOW_S = 0.25

#: A window is declared divergent when its residual power exceeds the
#: disturbance power by this factor.
DIVERGENCE_POWER_RATIO = 10.0

#: Regularizer added to the reference-history norm in the NLMS step.
NLMS_EPS = 1e-8


class _ExactMarker:
    """Singleton marker: use the true secondary path as its own estimate."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EXACT"


EXACT = _ExactMarker()


@dataclass(frozen=True)
class AncConfig:
    """Adaptive-controller parameters.

    ``step_size=None`` selects the per-algorithm default. ``rng_seed`` is
    carried for reproducibility of seeded stimuli; the simulation itself is
    deterministic.
    """

    algorithm: str
    duration_samples: int
    rng_seed: int
    filter_length: int = 128
    step_size: Union[float, None] = None
    leak_factor: float = 0.0
    secondary_estimate: Union[FirPath, _ExactMarker] = EXACT

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(
                f"algorithm must be one of {'/'.join(ALGORITHMS)}, got {self.algorithm!r}")
        if int(self.duration_samples) < 1:
            raise ValidationError("duration_samples must be >= 1")
        if int(self.filter_length) < 1:
            raise ValidationError("filter_length must be >= 1")
        if int(self.filter_length) > int(self.duration_samples):
            raise ValidationError("filter_length must not exceed duration_samples")
        if int(self.rng_seed) < 0:
            raise ValidationError("rng_seed must be an unsigned integer")
        mu = self.resolved_step_size()
        if not np.isfinite(mu) or mu < 0:
            raise ValidationError("step_size must be finite and >= 0")
        if not 0.0 <= float(self.leak_factor) < 1.0:
            raise ValidationError("leak_factor must lie in [0, 1)")
        if not isinstance(self.secondary_estimate, (_ExactMarker, FirPath)):
            raise ValidationError("secondary_estimate must be a FirPath or EXACT")

    def resolved_step_size(self) -> float:
        if self.step_size is None:
            return DEFAULT_STEP_SIZE[self.algorithm]
        return float(self.step_size)


@dataclass(frozen=True)
class AncResult:
    """Full simulation outcome.

    ``residual`` and ``anti_noise`` are truncated at the detection point when
    the loop diverges; they never contain non-finite samples.
    ``attenuation_trace_db`` holds one capped attenuation figure per analysis
    window, and ``steady_state_attenuation_db`` is the final window's value.
    """

    residual: SampleBuffer
    anti_noise: SampleBuffer
    attenuation_trace_db: np.ndarray
    steady_state_attenuation_db: float
    diverged: bool


def _window_attenuation_db(dist_power: float, resid_power: float) -> float:
    # Power-ratio form of signals.attenuation_db, tolerant of silent windows.
    if dist_power <= 0.0:
        return 0.0
    if resid_power <= 0.0:
        return ATTENUATION_CAP_DB
    return min(10.0 * np.log10(dist_power / resid_power), ATTENUATION_CAP_DB)


def anc_run(cfg: AncConfig, noise: SampleBuffer, primary: FirPath,
            secondary: FirPath) -> AncResult:
    """Run the adaptive cancellation loop over the whole noise buffer.

    Per sample n: disturbance ``d[n] = (primary * noise)[n]``; controller
    output ``y[n] = w . noise_hist``; residual ``e[n] = d[n] -
    (secondary * y)[n]``. Weights follow the selected algorithm: LMS/NLMS
    adapt on the raw reference, FXLMS on the reference filtered by the
    secondary-path estimate; NLMS additionally normalizes the step by the
    reference-history power.

    Divergence - a window whose residual power exceeds
    ``DIVERGENCE_POWER_RATIO`` times the disturbance power, or any non-finite
    sample - stops the run: the result has ``diverged=True`` and all traces
    truncated at the detection point.
    """
    n = len(noise)
    if n != int(cfg.duration_samples):
        raise ValidationError(
            f"noise length {n} does not match duration_samples {cfg.duration_samples}")

    x = noise.samples
    d = convolve_path(primary, noise).samples
    if cfg.algorithm == "FXLMS":
        estimate = secondary if isinstance(cfg.secondary_estimate, _ExactMarker) \
            else cfg.secondary_estimate
        xf = convolve_path(estimate, noise).samples
    else:
        xf = x
    normalized = cfg.algorithm == "NLMS"

    mu = cfg.resolved_step_size()
    leak = float(cfg.leak_factor)
    L = int(cfg.filter_length)
    w = np.zeros(L)
    y = np.zeros(n)
    e = np.zeros(n)

    fs = noise.sample_rate_hz
    window = max(1, int(round(ATTENUATION_WINDOW_S * fs)))

    trace = []
    diverged = False
    end = n  # detection point; n when the run completes
    with np.errstate(all="ignore"):
        for start in range(0, n, window):
            stop = min(start + window, n)
            _kernels.adapt_chunk(x, xf, d, secondary.taps, w, y, e,
                                 start, stop, mu, leak, normalized, NLMS_EPS)
            chunk_ok = np.isfinite(e[start:stop]).all() and np.isfinite(y[start:stop]).all()
            if not chunk_ok:
                bad = start + int(np.argmin(
                    np.isfinite(e[start:stop]) & np.isfinite(y[start:stop])))
                diverged = True
                end = bad
                break
            dist_power = float(np.mean(d[start:stop] ** 2))
            resid_power = float(np.mean(e[start:stop] ** 2))
            trace.append(_window_attenuation_db(dist_power, resid_power))
            if resid_power > DIVERGENCE_POWER_RATIO * dist_power:
                diverged = True
                end = stop
                break

    steady = trace[-1] if trace else 0.0
    return AncResult(
        residual=SampleBuffer(e[:end], fs),
        anti_noise=SampleBuffer(y[:end], fs),
        attenuation_trace_db=np.asarray(trace, dtype=np.float64),
        steady_state_attenuation_db=float(steady),
        diverged=diverged,
    )
