"""Reference excitation synthesis and FFT band features.

The reference wave is a comb of sinusoids whose frequencies sit exactly on
FFT bins, so no window is applied and each band reads one tone's magnitude.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .errors import ConfigError, ShapeError


def default_tone_freqs(n_tones=16, f_lo=200.0, f_hi=15000.0, sample_rate=44100.0, frame_len=4096):
    """Log-spaced tones in [f_lo, f_hi], each snapped to the nearest FFT bin frequency."""
    df = sample_rate / frame_len
    raw = np.geomspace(f_lo, f_hi, n_tones)
    return tuple(float(k * df) for k in np.rint(raw / df).astype(int))


@dataclass(frozen=True)
class SignalConfig:
    sample_rate: float = 44100.0
    frame_len: int = 4096
    tone_freqs: tuple = field(default_factory=default_tone_freqs)
    tone_amp: Union[float, tuple] = 1.0

    def __post_init__(self):
        object.__setattr__(self, "tone_freqs", tuple(float(f) for f in self.tone_freqs))
        if not np.isscalar(self.tone_amp):
            object.__setattr__(self, "tone_amp", tuple(float(a) for a in self.tone_amp))
        self.validate()

    def validate(self):
        n = self.frame_len
        if not isinstance(n, (int, np.integer)) or n < 2 or n & (n - 1):
            raise ConfigError(f"frame_len must be a power of two, got {n!r}")
        if self.sample_rate <= 0:
            raise ConfigError("sample_rate must be positive")
        f = np.asarray(self.tone_freqs)
        if f.size == 0:
            raise ConfigError("tone_freqs must be non-empty")
        if np.any(f <= 0) or np.any(f >= self.sample_rate / 2):
            raise ConfigError("tone_freqs must lie in (0, sample_rate/2)")
        if np.any(np.diff(f) <= 0):
            raise ConfigError("tone_freqs must be strictly increasing")
        amps = self.amplitudes
        if amps.shape != f.shape or np.any(amps < 0):
            raise ConfigError("tone_amp must be a non-negative scalar or one value per tone")

    @property
    def n_bands(self):
        return len(self.tone_freqs)

    @property
    def amplitudes(self):
        return np.broadcast_to(np.asarray(self.tone_amp, dtype=float), (len(self.tone_freqs),)).copy()

    def tone_bins(self):
        """Index of the FFT bin nearest each tone."""
        df = self.sample_rate / self.frame_len
        return np.rint(np.asarray(self.tone_freqs) / df).astype(int)


@dataclass(frozen=True)
class SpectrumFeatures:
    bands: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bands, dtype=float)
        if b.ndim != 1:
            raise ShapeError("bands must be a 1-D vector")
        if np.any(b < 0):
            raise ValueError("band magnitudes must be non-negative")
        b.setflags(write=False)
        object.__setattr__(self, "bands", b)

    def __len__(self):
        return self.bands.size

    def __eq__(self, other):
        return isinstance(other, SpectrumFeatures) and np.array_equal(self.bands, other.bands)

    __hash__ = None


def synth_reference(cfg: SignalConfig) -> np.ndarray:
    """Sum of sinusoids at ``cfg.tone_freqs``; one frame of ``cfg.frame_len`` samples."""
    cfg.validate()
    n = np.arange(cfg.frame_len)
    phase = 2.0 * np.pi * np.outer(cfg.tone_freqs, n) / cfg.sample_rate
    return cfg.amplitudes @ np.sin(phase)


def fft_magnitude(samples: Sequence[float], frame_len: int = None) -> np.ndarray:
    """One-sided magnitude spectrum (``frame_len // 2 + 1`` bins, unnormalised)."""
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1:
        raise ShapeError("expected a 1-D frame")
    if frame_len is not None and x.size != frame_len:
        raise ShapeError(f"frame has {x.size} samples, expected {frame_len}")
    if x.size < 2 or x.size & (x.size - 1):
        raise ShapeError(f"frame length {x.size} is not a power of two")
    return np.abs(np.fft.rfft(x))


def spectrum_energy(spectrum: np.ndarray, frame_len: int) -> float:
    """Time-domain energy implied by a one-sided magnitude spectrum (Parseval)."""
    s = np.asarray(spectrum, dtype=float)
    if s.size != frame_len // 2 + 1:
        raise ShapeError("spectrum length does not match frame_len")
    p = s**2
    return float((p[0] + p[-1] + 2.0 * p[1:-1].sum()) / frame_len)


def band_features(spectrum: np.ndarray, cfg: SignalConfig) -> SpectrumFeatures:
    s = np.asarray(spectrum, dtype=float)
    if s.shape != (cfg.frame_len // 2 + 1,):
        raise ShapeError(f"spectrum has shape {s.shape}, expected ({cfg.frame_len // 2 + 1},)")
    return SpectrumFeatures(s[cfg.tone_bins()])


@lru_cache(maxsize=32)
def reference_features(cfg: SignalConfig) -> SpectrumFeatures:
    """Band features of the unmodulated reference frame (cached per config)."""
    return band_features(fft_magnitude(synth_reference(cfg), cfg.frame_len), cfg)
