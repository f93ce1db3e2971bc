"""Deterministic surrogate of the acoustic skin finger.

Chain: indentation depth -> contact force (load-cell ground truth) and
channel area ratio -> per-band attenuation of the reference spectrum ->
subsection gain -> additive band noise.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .spectrum import SignalConfig, SpectrumFeatures, reference_features

MIN_AREA_RATIO = 0.05
SUBSECTION_GAIN_SPREAD = 0.03
_GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


@dataclass(frozen=True)
class SkinGeometry:
    channel_diameter: float = 3.0
    cover_thickness: float = 1.0
    calibrated_length: float = 14.0
    n_subsections: int = 7
    subsection_gap: float = 2.0

    def __post_init__(self):
        dims = (self.channel_diameter, self.cover_thickness, self.calibrated_length, self.subsection_gap)
        if min(dims) <= 0 or self.n_subsections < 1:
            raise ConfigError("skin dimensions must be positive")
        if not np.isclose(self.n_subsections * self.subsection_gap, self.calibrated_length):
            raise ConfigError("n_subsections * subsection_gap must equal calibrated_length")


@dataclass(frozen=True)
class ContactModel:
    c1: float = 1.2  # N/mm
    c2: float = 0.7  # N/mm^2
    max_force: float = 10.0

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 < 0 or self.max_force <= 0:
            raise ConfigError("contact model needs c1 > 0, c2 >= 0, max_force > 0")


@dataclass(frozen=True)
class AttenuationModel:
    alpha0: float = 0.8
    alpha1: float = 1.6
    noise_sigma: float = 0.005
    rng_seed: int = 0

    def __post_init__(self):
        if self.alpha0 < 0 or self.alpha1 < 0:
            raise ConfigError("attenuation coefficients must be non-negative")
        if not 0 <= self.noise_sigma < 1:
            raise ConfigError("noise_sigma must lie in [0, 1)")


@dataclass(frozen=True)
class SkinSim:
    """Bundle of simulator parameters, passed around as one value."""

    signal: SignalConfig = field(default_factory=SignalConfig)
    geometry: SkinGeometry = field(default_factory=SkinGeometry)
    contact: ContactModel = field(default_factory=ContactModel)
    attenuation: AttenuationModel = field(default_factory=AttenuationModel)

    def sense(self, subsection, depth, seed=None):
        return sense(subsection, depth, self.geometry, self.contact, self.attenuation, self.signal, seed=seed)


@dataclass(frozen=True)
class ContactState:
    subsection: int
    depth: float
    force: float
    area_ratio: float

    def __post_init__(self):
        if self.depth < 0:
            raise DomainError("depth must be non-negative")
        if not 0 < self.area_ratio <= 1:
            raise DomainError("area_ratio must lie in (0, 1]")
        if self.depth == 0 and (self.force != 0 or self.area_ratio != 1):
            raise DomainError("zero depth implies zero force and an open channel")


def _check_depth(depth):
    if not np.all(np.asarray(depth) >= 0):
        raise DomainError(f"depth must be non-negative, got {depth!r}")


def contact_force(depth, cm: ContactModel = ContactModel()):
    """Force (N) read by the load cell at indentation ``depth`` (mm)."""
    _check_depth(depth)
    return cm.c1 * depth + cm.c2 * depth * depth


def depth_for_force(force, cm: ContactModel = ContactModel()):
    """Inverse of :func:`contact_force` on ``force >= 0``."""
    if np.any(np.asarray(force) < 0):
        raise DomainError("force must be non-negative")
    if cm.c2 == 0:
        return force / cm.c1
    # stable root of c2 d^2 + c1 d - f = 0
    return 2.0 * force / (cm.c1 + np.sqrt(cm.c1 * cm.c1 + 4.0 * cm.c2 * force))


def channel_constriction(depth, geo: SkinGeometry = SkinGeometry()):
    _check_depth(depth)
    return np.maximum(MIN_AREA_RATIO, 1.0 - depth / (geo.cover_thickness + geo.channel_diameter))


def band_attenuation(area_ratio, n_bands, am: AttenuationModel):
    """Multiplicative transmission per band for a channel at ``area_ratio``."""
    i = np.arange(n_bands)
    rate = am.alpha0 + am.alpha1 * i / max(n_bands - 1, 1)
    return np.exp(-rate * (1.0 - area_ratio))


def transmit(ref_features, area_ratio, am: AttenuationModel, rng=None) -> SpectrumFeatures:
    """Attenuate reference bands through a constricted channel and add band noise.

    Noise std is ``noise_sigma`` times the *reference* magnitude of each band.
    ``rng`` defaults to a generator seeded from ``am.rng_seed``.
    """
    if not 0 < area_ratio <= 1:
        raise DomainError(f"area_ratio must lie in (0, 1], got {area_ratio!r}")
    ref = np.asarray(getattr(ref_features, "bands", ref_features), dtype=float)
    out = ref * band_attenuation(area_ratio, ref.size, am)
    if am.noise_sigma > 0:
        if rng is None:
            rng = np.random.default_rng(am.rng_seed)
        out = out + rng.normal(0.0, 1.0, ref.size) * am.noise_sigma * ref
    return SpectrumFeatures(np.maximum(out, 0.0))


def subsection_gain(subsection, n_bands, n_subsections=7):
    """Fixed per-band gain (within +/-3%) distinguishing press locations."""
    if not 0 <= subsection < n_subsections:
        raise IndexError(f"subsection {subsection} outside 0..{n_subsections - 1}")
    k = subsection * n_bands + np.arange(n_bands) + 1
    return 1.0 + SUBSECTION_GAIN_SPREAD * np.cos(_GOLDEN_ANGLE * k)


def sense(subsection, depth, geo=SkinGeometry(), cm=ContactModel(), am=AttenuationModel(),
          cfg=SignalConfig(), seed=None):
    """Sense one press: returns ``(features, true_force)``.

    The gain is applied before the noise so that noise std stays tied to the
    reference magnitude of each band.
    """
    if not isinstance(subsection, (int, np.integer)) or not 0 <= subsection < geo.n_subsections:
        raise IndexError(f"subsection {subsection!r} outside 0..{geo.n_subsections - 1}")
    _check_depth(depth)
    ref = reference_features(cfg).bands
    gained = ref * subsection_gain(subsection, ref.size, geo.n_subsections)
    rng = np.random.default_rng(am.rng_seed if seed is None else seed)
    quiet = AttenuationModel(am.alpha0, am.alpha1, 0.0, am.rng_seed)
    bands = transmit(gained, float(channel_constriction(depth, geo)), quiet).bands
    if am.noise_sigma > 0:
        bands = np.maximum(bands + rng.normal(0.0, 1.0, ref.size) * am.noise_sigma * ref, 0.0)
    return SpectrumFeatures(bands), float(contact_force(depth, cm))
