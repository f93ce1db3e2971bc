"""Simulated pick-and-drop trials, phase segmentation, MAE and slip checks."""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConfigError, EvaluationError, SafetyAbort, SegmentationError, TrialFailure,
                     TrialTimeout)
from .grip import (WITHIN, ControllerConfig, ControllerState, GripSizing, controller_step,
                   deadband_status, required_grip_force, G)
from .skin import SkinSim, contact_force, depth_for_force

log = logging.getLogger(__name__)

APPROACH, GRIP, TRANSPORT, RELEASE = "approach", "grip", "transport", "release"
PHASES = (APPROACH, GRIP, TRANSPORT, RELEASE)
CONTACT_THRESHOLD = 0.05  # N
MAX_GRIP_TICKS = 500
RELEASE_TICKS = 3


@dataclass(frozen=True)
class StrawberrySample:
    id: int
    weight: float             # N
    peduncle_diameter: float  # mm

    def __post_init__(self):
        if self.weight <= 0 or self.peduncle_diameter <= 0:
            raise ConfigError("strawberry weight and peduncle diameter must be positive")

    @property
    def mass(self):
        return self.weight / G


STRAWBERRIES = (
    StrawberrySample(1, 0.084, 1.24),
    StrawberrySample(2, 0.111, 1.38),
    StrawberrySample(3, 0.155, 1.88),
    StrawberrySample(4, 0.176, 1.90),
    StrawberrySample(5, 0.181, 2.29),
)


@dataclass(frozen=True)
class TrialConfig:
    tick: float = 0.02                # s
    initial_width: float = 20.0       # mm
    compliance: float = 0.07          # mm indentation per mm of width closed past contact
    transport_duration: float = 4.0   # s
    swing_amp: float = 0.15           # N
    swing_freq: float = 1.5           # Hz

    def __post_init__(self):
        if self.tick <= 0:
            raise ConfigError("tick must be positive")
        if not 0 < self.compliance <= 0.5:
            raise ConfigError("compliance must lie in (0, 0.5]")
        if self.swing_amp < 0 or self.transport_duration <= 0:
            raise ConfigError("swing_amp must be >= 0 and transport_duration > 0")

    @property
    def transport_ticks(self):
        return int(round(self.transport_duration / self.tick))


@dataclass(frozen=True)
class TickRecord:
    t: float
    phase: str
    f_m: float
    f_true: float
    g_t: float

    def to_dict(self):
        return {"t": self.t, "phase": self.phase, "f_m": self.f_m, "f_true": self.f_true, "g_t": self.g_t}


@dataclass
class TrialLog:
    records: list = field(default_factory=list)
    sample_id: int = 0
    seed: int = 0
    subsection: int = 0

    def __len__(self):
        return len(self.records)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])


def trial_seed(seed, sample_id, trial):
    return int(np.random.SeedSequence([int(seed), int(sample_id), int(trial)]).generate_state(1)[0])


def run_trial(sample: StrawberrySample, model, cfg: TrialConfig = TrialConfig(),
              ctrl: ControllerConfig = ControllerConfig(), sim: SkinSim = SkinSim(), seed=0):
    """Simulate one grip -> transport -> release sequence.

    Each tick senses the skin, predicts ``f_m`` with ``model``, logs, then
    steps the controller. The swing disturbance loads the skin, so it shows
    up in the sensed indentation as well as in ``f_true``.

    Raises :class:`SafetyAbort` or :class:`TrialTimeout` with the partial log attached.
    """
    rng = np.random.default_rng(seed)
    subsection = int(rng.integers(sim.geometry.n_subsections))
    trial_log = TrialLog(sample_id=sample.id, seed=int(seed), subsection=subsection)
    state = ControllerState(g_t=min(cfg.initial_width, ctrl.g_max))
    phase = APPROACH
    transport_start = None
    k = 0

    def sense_force(f_true):
        depth = float(depth_for_force(f_true, sim.contact)) if f_true > 0 else 0.0
        feats, _ = sim.sense(subsection, depth, seed=rng)
        return float(model.predict(feats.bands[None, :])[0])

    while True:
        t = k * cfg.tick
        depth = cfg.compliance * max(0.0, sample.peduncle_diameter - state.g_t)
        f_true = float(contact_force(depth, sim.contact))
        if phase == TRANSPORT and f_true > 0:
            swing = cfg.swing_amp * np.sin(2 * np.pi * cfg.swing_freq * (t - transport_start))
            f_true = max(0.0, f_true + swing)
        f_m = sense_force(f_true)
        if phase == APPROACH and f_true > 0:
            phase = GRIP
        if phase in (APPROACH, GRIP) and deadband_status(f_m, ctrl) == WITHIN and f_true > 0:
            phase, transport_start = TRANSPORT, t
        trial_log.records.append(TickRecord(t, phase, f_m, f_true, state.g_t))

        if f_true > sim.contact.max_force:
            raise SafetyAbort(f"true force {f_true:.3f} N exceeds {sim.contact.max_force} N",
                              force=f_true, log=trial_log)
        try:
            state = controller_step(state, f_m, ctrl)
        except SafetyAbort as exc:
            exc.log = trial_log
            raise
        k += 1
        if phase in (APPROACH, GRIP) and k > MAX_GRIP_TICKS:
            raise TrialTimeout(f"grip did not settle within {MAX_GRIP_TICKS} ticks", log=trial_log)
        if phase == TRANSPORT and k * cfg.tick - transport_start >= cfg.transport_duration - 1e-9:
            break

    # release: fingers open fully, contact is lost
    state = ControllerState(g_t=ctrl.g_max)
    for _ in range(RELEASE_TICKS):
        t = k * cfg.tick
        trial_log.records.append(TickRecord(t, RELEASE, sense_force(0.0), 0.0, state.g_t))
        k += 1
    return trial_log


def segment_phases(trial_log):
    """Tick indices ``(S1, S2, S3)``: first contact, first transport tick, first release tick."""
    recs = trial_log.records
    s1 = next((i for i, r in enumerate(recs) if r.f_true > CONTACT_THRESHOLD), None)
    s2 = next((i for i, r in enumerate(recs) if r.phase == TRANSPORT), None)
    s3 = next((i for i, r in enumerate(recs) if r.phase == RELEASE), None)
    missing = [n for n, v in (("contact", s1), ("transport", s2), ("release", s3)) if v is None]
    if missing:
        raise SegmentationError(f"log is missing phase(s): {', '.join(missing)}")
    return s1, s2, s3


def trial_mae(trial_log, f_d=2.0):
    """Mean |f_m - f_d| over the hold window [S2, S3)."""
    _, s2, s3 = segment_phases(trial_log)
    window = np.array([r.f_m for r in trial_log.records[s2:s3]])
    if window.size == 0:
        raise EvaluationError("hold window is empty")
    return float(np.mean(np.abs(window - f_d)))


def slip_check(trial_log, sample, mu=0.5, S=2.0, a_max=1.0):
    """Hold-window ticks where two-finger grip ``2 f_m`` is below the required force."""
    _, s2, s3 = segment_phases(trial_log)
    need = required_grip_force(GripSizing(m=sample.mass, a=a_max, mu=mu, S=S))
    return [i for i in range(s2, s3) if 2.0 * trial_log.records[i].f_m < need]


@dataclass
class CampaignReport:
    sample_ids: list
    mae: np.ndarray                 # (n_samples, trials); nan where the trial failed
    slip_events: list               # per trial: (sample_id, trial, n_events)
    failures: list                  # (sample_id, trial, reason, message)
    f_d: float = 2.0
    seed: int = 0

    @property
    def sample_average(self):
        return np.array([row[np.isfinite(row)].mean() if np.isfinite(row).any() else np.nan for row in self.mae])

    @property
    def max_average(self):
        avg = self.sample_average
        return float(avg[np.isfinite(avg)].max()) if np.isfinite(avg).any() else float("nan")

    @property
    def max_single(self):
        return float(self.mae[np.isfinite(self.mae)].max()) if np.isfinite(self.mae).any() else float("nan")

    @property
    def total_slips(self):
        return int(sum(n for *_, n in self.slip_events))

    @property
    def n_aborts(self):
        return sum(1 for f in self.failures if f[2] == SafetyAbort.reason)

    def to_dict(self):
        def num(v):
            return None if not np.isfinite(v) else float(v)
        return {
            "format_version": 1,
            "f_d": self.f_d,
            "seed": self.seed,
            "samples": list(self.sample_ids),
            "mae_matrix": [[num(v) for v in row] for row in self.mae],
            "sample_average_mae": [num(v) for v in self.sample_average],
            "max_average_mae": num(self.max_average),
            "max_trial_mae": num(self.max_single),
            "slip_events": [{"sample": s, "trial": t, "events": n} for s, t, n in self.slip_events],
            "failures": [{"sample": s, "trial": t, "reason": r, "message": m} for s, t, r, m in self.failures],
        }

    def format(self):
        n_trials = self.mae.shape[1]
        head = f"{'sample':>6} " + " ".join(f"{'trial ' + str(j + 1):>8}" for j in range(n_trials)) + f" {'avg MAE':>8}"
        lines = [head]
        for sid, row, avg in zip(self.sample_ids, self.mae, self.sample_average):
            cells = " ".join(f"{v:>8.3f}" if np.isfinite(v) else f"{'fail':>8}" for v in row)
            lines.append(f"{sid:>6} {cells} {avg:>8.3f}")
        lines.append(f"max average MAE {self.max_average:.3f} N, max trial MAE {self.max_single:.3f} N, "
                     f"slip events {self.total_slips}, failures {len(self.failures)}")
        return "\n".join(lines)


def run_campaign(samples, model, trials_per_sample=5, cfg=TrialConfig(), ctrl=ControllerConfig(),
                 sim=SkinSim(), seed=0, on_trial=None):
    """Run every sample ``trials_per_sample`` times; failed trials are recorded, not raised.

    ``on_trial(sample_id, trial_index, log)`` is called after each completed trial.
    """
    samples = list(samples)
    if not samples:
        raise ConfigError("campaign needs at least one sample")
    mae = np.full((len(samples), trials_per_sample), np.nan)
    slips, failures = [], []
    for i, sample in enumerate(samples):
        for j in range(trials_per_sample):
            try:
                tl = run_trial(sample, model, cfg, ctrl, sim, seed=trial_seed(seed, sample.id, j))
            except TrialFailure as exc:
                log.warning("sample %s trial %d failed: %s", sample.id, j + 1, exc)
                failures.append((sample.id, j + 1, exc.reason, str(exc)))
                continue
            mae[i, j] = trial_mae(tl, ctrl.f_d)
            slips.append((sample.id, j + 1, len(slip_check(tl, sample))))
            if on_trial is not None:
                on_trial(sample.id, j + 1, tl)
    return CampaignReport([s.id for s in samples], mae, slips, failures, ctrl.f_d, int(seed))
