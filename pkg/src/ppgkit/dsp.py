"""Second-order Butterworth lowpass design, IIR filtering, anti-aliased
resampling, and rectangular-window segmentation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ppgkit import _kernels


class CutoffOutOfRange(ValueError):
    pass


class InputTooShort(ValueError):
    pass


class UpsamplingRequested(ValueError):
    pass


@dataclass(frozen=True)
class BiquadCoeffs:
    """Normalized biquad (a0 = 1). Poles must lie inside the unit circle."""
    b0: float
    b1: float
    b2: float
    a1: float
    a2: float
    fs_hz: float
    fc_hz: float

    def poles(self) -> np.ndarray:
        return np.roots([1.0, self.a1, self.a2])

    def response(self, f_hz) -> np.ndarray:
        """Complex frequency response H(e^{j2*pi*f/fs}) from the coefficients."""
        w = 2.0 * np.pi * np.asarray(f_hz, dtype=np.float64) / self.fs_hz
        z1 = np.exp(-1j * w)
        z2 = z1 * z1
        return (self.b0 + self.b1 * z1 + self.b2 * z2) / (1.0 + self.a1 * z1 + self.a2 * z2)

    def magnitude(self, f_hz) -> np.ndarray:
        return np.abs(self.response(f_hz))


def design_butterworth_lp2(fc_hz: float, fs_hz: float) -> BiquadCoeffs:
    """Bilinear-transform 2nd-order Butterworth lowpass with prewarping.

    The prewarped design hits exactly -3.0103 dB at fc and unit DC gain.
    """
    if fs_hz <= 0:
        raise CutoffOutOfRange("fs must be positive")
    if not 0 < fc_hz < fs_hz / 2:
        raise CutoffOutOfRange(
            f"cutoff {fc_hz} Hz must lie in (0, {fs_hz / 2}) for fs {fs_hz} Hz")

    k = math.tan(math.pi * fc_hz / fs_hz)
    norm = 1.0 + math.sqrt(2.0) * k + k * k
    b0 = k * k / norm
    coeffs = BiquadCoeffs(
        b0=b0, b1=2.0 * b0, b2=b0,
        a1=2.0 * (k * k - 1.0) / norm,
        a2=(1.0 - math.sqrt(2.0) * k + k * k) / norm,
        fs_hz=fs_hz, fc_hz=fc_hz)
    if np.any(np.abs(coeffs.poles()) >= 1.0):
        raise CutoffOutOfRange(f"unstable design for fc={fc_hz}, fs={fs_hz}")
    return coeffs


def filter_forward(x, c: BiquadCoeffs) -> np.ndarray:
    """Causal direct-form II transposed pass with zero initial state."""
    x = np.asarray(x, dtype=np.float64)
    if len(x) == 0:
        return x.copy()
    return _kernels.biquad_df2t(x, c.b0, c.b1, c.b2, c.a1, c.a2)


def filter_zero_phase(x, c: BiquadCoeffs) -> np.ndarray:
    """Forward pass, reverse, forward pass, reverse: squared magnitude, zero phase.

    No edge padding; transients at both ends are accepted (8 s windows at
    >= 5 Hz make them negligible).
    """
    x = np.asarray(x, dtype=np.float64)
    if len(x) < 4:
        raise InputTooShort(f"zero-phase filtering needs >= 4 samples, got {len(x)}")
    y = filter_forward(x, c)
    y = filter_forward(y[::-1], c)
    return y[::-1]


@dataclass(frozen=True)
class ResampleConfig:
    target_fs_hz: float
    antialias_cutoff_ratio: float = 0.45
    antialias: bool = True

    def __post_init__(self):
        if self.target_fs_hz <= 0:
            raise ValueError("target_fs_hz must be positive")
        if not 0 < self.antialias_cutoff_ratio <= 0.5:
            raise ValueError("antialias_cutoff_ratio must be in (0, 0.5]")


def resample(x, fs_hz: float, cfg: ResampleConfig) -> np.ndarray:
    """Downsample onto the uniform grid t_k = k / target_fs.

    Zero-phase anti-alias filtering at cutoff_ratio * target_fs, then linear
    interpolation. Output length = floor((len(x)-1) * target/fs) + 1. The
    filter is skipped when there is nothing to protect (target == fs, or the
    cutoff would reach the source Nyquist).
    """
    x = np.asarray(x, dtype=np.float64)
    target = cfg.target_fs_hz
    if target > fs_hz:
        raise UpsamplingRequested(f"target {target} Hz exceeds source {fs_hz} Hz")
    if len(x) == 0:
        return x.copy()

    fc = cfg.antialias_cutoff_ratio * target
    if cfg.antialias and target < fs_hz and fc < 0.5 * fs_hz and len(x) >= 4:
        x = filter_zero_phase(x, design_butterworth_lp2(fc, fs_hz))

    out_len = math.floor((len(x) - 1) * target / fs_hz) + 1
    t_out = np.arange(out_len, dtype=np.float64) / target
    t_src = np.arange(len(x), dtype=np.float64) / fs_hz
    return np.interp(t_out, t_src, x)


@dataclass
class Segment:
    """One fixed-duration window of a single channel."""
    samples: np.ndarray
    fs_hz: float
    window_s: float
    start_s: float
    subject_id: str | None = None
    activity_label: str | None = None
    truth_bpm: float | None = None

    def __post_init__(self):
        expected = int(round(self.window_s * self.fs_hz))
        if len(self.samples) != expected:
            raise ValueError(
                f"segment holds {len(self.samples)} samples, "
                f"expected round({self.window_s} * {self.fs_hz}) = {expected}")
        if self.truth_bpm is not None and not 25.0 <= self.truth_bpm <= 250.0:
            raise ValueError(f"truth_bpm {self.truth_bpm} outside [25, 250]")

    @property
    def end_s(self) -> float:
        return self.start_s + self.window_s


def segment(x, fs_hz: float, window_s: float = 8.0, step_s: float = 1.0, *,
            subject_id: str | None = None,
            activity_label: str | None = None) -> list[Segment]:
    """Rectangular windows at starts 0, step_s, 2*step_s, ... while one fits."""
    if window_s <= 0 or step_s <= 0:
        raise ValueError("window_s and step_s must be positive")
    x = np.asarray(x, dtype=np.float64)
    w = int(round(window_s * fs_hz))
    s = int(round(step_s * fs_hz))
    if len(x) < w or w == 0 or s == 0:
        return []
    count = (len(x) - w) // s + 1
    return [Segment(samples=x[i * s:i * s + w].copy(), fs_hz=fs_hz,
                    window_s=window_s, start_s=i * step_s,
                    subject_id=subject_id, activity_label=activity_label)
            for i in range(count)]
