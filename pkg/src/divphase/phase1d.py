"""Hilbert-transform phase analysis of one-dimensional signals.

Instantaneous phase is the angle of the analytic signal ``f + iHf``; the
phase difference between two signals is the absolute circular difference
of their phases, and its time average is the 1D Divergence Phase Index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InvalidInputError
from .spectra import apply_multiplier, frequency_grid, hilbert_multiplier

__all__ = [
    "Signal1D",
    "ChannelSet",
    "PairwiseDPIMatrix",
    "hilbert",
    "instantaneous_phase",
    "phase_difference",
    "mean_phase_difference",
    "bandpass",
    "pairwise_dpi_matrix",
    "surrogate_recording",
    "wrap_difference",
    "abs_circular_difference",
    "principal_angle",
    "bounded_mean",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Signal1D:
    """Uniformly sampled real time series."""

    samples: np.ndarray
    sample_rate_hz: float = 1.0

    def __post_init__(self):
        x = np.array(self.samples, dtype=float)
        if x.ndim != 1:
            raise InvalidInputError(f"signal must be one-dimensional, got shape {x.shape}")
        if x.size < 2:
            raise InvalidInputError("signal needs at least 2 samples")
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("signal contains non-finite samples")
        rate = float(self.sample_rate_hz)
        if not (np.isfinite(rate) and rate > 0):
            raise InvalidInputError(f"sample rate must be positive, got {self.sample_rate_hz}")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate_hz", rate)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def with_samples(self, samples) -> "Signal1D":
        return Signal1D(samples, self.sample_rate_hz)


@dataclass(frozen=True)
class ChannelSet:
    """Simultaneously recorded channels sharing length and sample rate."""

    channels: tuple[Signal1D, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        channels = tuple(self.channels)
        labels = tuple(self.labels) or tuple(f"ch{i}" for i in range(len(channels)))
        if len(labels) != len(channels):
            raise InvalidInputError(f"{len(labels)} labels for {len(channels)} channels")
        if len(set(labels)) != len(labels):
            raise InvalidInputError("channel labels must be unique")
        if channels:
            n, rate = len(channels[0]), channels[0].sample_rate_hz
            for lab, ch in zip(labels, channels):
                if len(ch) != n or ch.sample_rate_hz != rate:
                    raise InvalidInputError(
                        f"channel {lab!r} differs in length or sample rate from {labels[0]!r}"
                    )
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_array(cls, data, sample_rate_hz: float, labels=()) -> "ChannelSet":
        """Build from a ``(n_channels, n_samples)`` array."""
        data = np.asarray(data, dtype=float)
        if data.ndim != 2:
            raise InvalidInputError(f"expected (channels, samples) array, got shape {data.shape}")
        return cls(tuple(Signal1D(row, sample_rate_hz) for row in data), tuple(labels))

    def __len__(self) -> int:
        return len(self.channels)

    @property
    def sample_rate_hz(self) -> float:
        return self.channels[0].sample_rate_hz

    @property
    def n_samples(self) -> int:
        return len(self.channels[0])

    def window(self, start: int, stop: int) -> "ChannelSet":
        """Restrict every channel to samples ``[start, stop)``."""
        if not 0 <= start < stop <= self.n_samples:
            raise InvalidInputError(
                f"window [{start}, {stop}) outside recording of {self.n_samples} samples"
            )
        return ChannelSet(
            tuple(ch.with_samples(ch.samples[start:stop]) for ch in self.channels), self.labels
        )


@dataclass(frozen=True)
class PairwiseDPIMatrix:
    values: np.ndarray
    labels: tuple[str, ...]


def _check_pair(f: Signal1D, g: Signal1D) -> None:
    if len(f) != len(g):
        raise InvalidInputError(f"signal lengths differ: {len(f)} vs {len(g)}")
    if f.sample_rate_hz != g.sample_rate_hz:
        raise InvalidInputError(
            f"sample rates differ: {f.sample_rate_hz} vs {g.sample_rate_hz}"
        )


def wrap_difference(a, b) -> np.ndarray:
    """Signed difference ``a - b`` of principal angles, wrapped to (-pi, pi].

    Exactly antisymmetric: ``wrap_difference(a, b) == -wrap_difference(b, a)``
    except where the result is pi.
    """
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    d = np.where(d > np.pi, d - TWO_PI, d)
    return np.where(d <= -np.pi, d + TWO_PI, d)


def abs_circular_difference(a, b) -> np.ndarray:
    """``|wrap(a - b)|`` for principal angles, in [0, pi]; exactly symmetric."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    return np.where(d > np.pi, TWO_PI - d, d)


def principal_angle(y, x) -> np.ndarray:
    """Four-quadrant angle of ``(x, y)`` in (-pi, pi]; 0 where both vanish."""
    phi = np.arctan2(y, x)
    # arctan2(-0.0, x<0) returns -pi
    return np.where(phi == -np.pi, np.pi, phi)


def bounded_mean(values) -> float:
    """Mean clamped to ``[min, max]`` of ``values``; pairwise summation can overshoot by an ulp."""
    v = np.asarray(values, dtype=float)
    return float(np.clip(np.mean(v), v.min(), v.max()))


def hilbert(f: Signal1D) -> Signal1D:
    """Hilbert transform via the ``-i sign(xi)`` multiplier."""
    if np.all(f.samples == f.samples[0]):
        return f.with_samples(np.zeros(len(f)))
    m = hilbert_multiplier(frequency_grid(len(f)))
    return f.with_samples(apply_multiplier(f.samples, m))


def instantaneous_phase(f: Signal1D) -> np.ndarray:
    """Angle of the analytic signal ``f + i Hf`` at each sample, in (-pi, pi]."""
    return principal_angle(hilbert(f).samples, f.samples)


def phase_difference(f: Signal1D, g: Signal1D) -> np.ndarray:
    """Absolute instantaneous phase difference, wrapped to [0, pi]."""
    _check_pair(f, g)
    return abs_circular_difference(instantaneous_phase(f), instantaneous_phase(g))


def mean_phase_difference(f: Signal1D, g: Signal1D) -> float:
    return bounded_mean(phase_difference(f, g))


def bandpass(f: Signal1D, lo_hz: float, hi_hz: float) -> Signal1D:
    """Ideal zero-phase FFT bandpass keeping ``lo_hz <= |freq| <= hi_hz``."""
    nyquist = f.sample_rate_hz / 2
    if not (0 <= lo_hz < hi_hz <= nyquist):
        raise InvalidInputError(
            f"band [{lo_hz}, {hi_hz}] Hz invalid for sample rate {f.sample_rate_hz} Hz"
        )
    freq_hz = np.abs(np.fft.fftfreq(len(f), d=1.0 / f.sample_rate_hz))
    keep = (freq_hz >= lo_hz) & (freq_hz <= hi_hz)
    return f.with_samples(apply_multiplier(f.samples, keep.astype(complex)))


def pairwise_dpi_matrix(cs: ChannelSet, lo_hz: float, hi_hz: float) -> PairwiseDPIMatrix:
    """Mean phase difference of every channel pair after bandpass filtering."""
    if len(cs) < 2:
        raise InvalidInputError(f"need at least 2 channels, got {len(cs)}")
    phases = [instantaneous_phase(bandpass(ch, lo_hz, hi_hz)) for ch in cs.channels]
    n = len(cs)
    values = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        values[i, j] = values[j, i] = bounded_mean(abs_circular_difference(phases[i], phases[j]))
    return PairwiseDPIMatrix(values=values, labels=cs.labels)


def surrogate_recording(
    n_channels: int = 9,
    sample_rate_hz: float = 200.0,
    baseline_s: float = 10.0,
    seizure_s: float = 10.0,
    locked=None,
    osc_hz: float = 2.0,
    noise: float = 0.2,
    seed=None,
) -> ChannelSet:
    """Synthetic stand-in for an interictal-to-ictal recording.

    The baseline segment is independent white noise on every channel. In
    the seizure segment the channels listed in ``locked`` (all by default)
    share one oscillator at ``osc_hz`` with a slowly drifting common phase,
    plus independent noise of relative amplitude ``noise``; the others stay
    independent noise.
    """
    rng = np.random.default_rng(seed)
    n_base = int(round(baseline_s * sample_rate_hz))
    n_sz = int(round(seizure_s * sample_rate_hz))
    locked = range(n_channels) if locked is None else locked
    base = rng.standard_normal((n_channels, n_base))
    t = np.arange(n_sz) / sample_rate_hz
    drift = np.cumsum(rng.standard_normal(n_sz)) * (0.5 / np.sqrt(sample_rate_hz))
    common = np.sin(TWO_PI * osc_hz * t + rng.uniform(0, TWO_PI) + drift)
    sz = rng.standard_normal((n_channels, n_sz))
    for c in locked:
        sz[c] = common + noise * sz[c]
    labels = tuple(f"ch{i}" for i in range(n_channels))
    return ChannelSet.from_array(np.hstack([base, sz]), sample_rate_hz, labels)
