"""Calibration samples, datasets and the press-sweep protocol."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DatasetError, ProtocolError
from ..skin import SkinSim, contact_force
from ..spectrum import SpectrumFeatures

MAX_SWEEP_STEPS = 100


@dataclass(frozen=True)
class CalibrationSample:
    subsection: int
    depth: float
    force: float
    features: SpectrumFeatures

    def __post_init__(self):
        if self.force < 0:
            raise DatasetError("force label must be non-negative")


@dataclass
class CalibrationDataset:
    """Column-oriented store of calibration samples.

    ``features`` is an ``(N, B)`` array; the other columns have length N.
    """

    subsection: np.ndarray
    depth: np.ndarray
    force: np.ndarray
    features: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.subsection = np.asarray(self.subsection, dtype=int).ravel()
        self.depth = np.asarray(self.depth, dtype=float).ravel()
        self.force = np.asarray(self.force, dtype=float).ravel()
        self.features = np.atleast_2d(np.asarray(self.features, dtype=float))
        n = self.force.size
        if n == 0:
            raise DatasetError("dataset is empty")
        if not (self.subsection.size == self.depth.size == n == self.features.shape[0]):
            raise DatasetError("dataset columns have mismatched lengths")
        if np.any(self.force < 0):
            raise DatasetError("force labels must be non-negative")

    @classmethod
    def from_samples(cls, samples, provenance=None):
        samples = list(samples)
        if not samples:
            raise DatasetError("dataset is empty")
        widths = {len(s.features) for s in samples}
        if len(widths) != 1:
            raise DatasetError("feature vectors have different lengths")
        return cls(
            [s.subsection for s in samples],
            [s.depth for s in samples],
            [s.force for s in samples],
            np.vstack([s.features.bands for s in samples]),
            dict(provenance or {}),
        )

    def __len__(self):
        return self.force.size

    def __getitem__(self, i):
        return CalibrationSample(int(self.subsection[i]), float(self.depth[i]),
                                 float(self.force[i]), SpectrumFeatures(self.features[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def n_bands(self):
        return self.features.shape[1]

    def subset(self, idx):
        idx = np.asarray(idx, dtype=int)
        return CalibrationDataset(self.subsection[idx], self.depth[idx], self.force[idx],
                                  self.features[idx], dict(self.provenance))


@dataclass(frozen=True)
class SweepProtocol:
    depth_step: float = 0.5
    force_stop: float = 10.0
    repeats: int = 20
    depth_jitter: float = 0.02  # mm, std of peg positioning error about each nominal level

    def __post_init__(self):
        if self.depth_step <= 0 or self.force_stop <= 0 or self.repeats < 1:
            raise ConfigError("sweep needs depth_step > 0, force_stop > 0, repeats >= 1")
        if self.depth_jitter < 0:
            raise ConfigError("depth_jitter must be non-negative")


def sweep_depths(protocol: SweepProtocol, contact=None):
    """Depth levels visited at each subsection, ending at the first one at or past the force stop."""
    contact = contact if contact is not None else SkinSim().contact
    depths = []
    for k in range(MAX_SWEEP_STEPS + 1):
        d = k * protocol.depth_step
        depths.append(d)
        if contact_force(d, contact) >= protocol.force_stop:
            return depths
    raise ProtocolError(
        f"force never reached {protocol.force_stop} N within {MAX_SWEEP_STEPS} steps of {protocol.depth_step} mm")


def sample_seed(seed, subsection, level, repeat):
    return np.random.SeedSequence([int(seed), int(subsection), int(level), int(repeat)])


def generate_dataset(protocol: SweepProtocol = SweepProtocol(), sim: SkinSim = SkinSim(), seed=0):
    """Run the press sweep over every subsection of the calibrated strip."""
    depths = sweep_depths(protocol, sim.contact)
    samples = []
    for s in range(sim.geometry.n_subsections):
        for level, d in enumerate(depths):
            for r in range(protocol.repeats):
                rng = np.random.default_rng(sample_seed(seed, s, level, r))
                actual = d
                if d > 0 and protocol.depth_jitter > 0:
                    actual = max(0.0, d + protocol.depth_jitter * rng.normal())
                feats, force = sim.sense(s, actual, seed=rng)
                samples.append(CalibrationSample(s, actual, force, feats))
    provenance = {"depth_step": protocol.depth_step, "force_stop": protocol.force_stop,
                  "repeats": protocol.repeats, "depth_jitter": protocol.depth_jitter, "seed": int(seed)}
    return CalibrationDataset.from_samples(samples, provenance)
