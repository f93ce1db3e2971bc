import numpy as np
import pytest

from astskin.errors import SafetyAbort, SegmentationError, EvaluationError, TrialTimeout
from astskin.grip import ControllerConfig
from astskin.skin import AttenuationModel, SkinSim
from astskin.trials import (APPROACH, GRIP, RELEASE, STRAWBERRIES, TRANSPORT, StrawberrySample, TickRecord,
                            TrialConfig, TrialLog, run_campaign, run_trial, segment_phases, slip_check,
                            trial_mae)

QUIET_SIM = SkinSim(attenuation=AttenuationModel(noise_sigma=0.0))
STILL = TrialConfig(swing_amp=0.0)


def synthetic_log(phases, f_m=None, f_true=None, tick=0.02):
    n = len(phases)
    f_m = np.full(n, 2.0) if f_m is None else f_m
    f_true = np.ones(n) if f_true is None else f_true
    return TrialLog([TickRecord(i * tick, p, float(a), float(b), 0.0)
                     for i, (p, a, b) in enumerate(zip(phases, f_m, f_true))])


class TestFixture:

    def test_table(self):
        rows = [(s.id, s.weight, s.peduncle_diameter) for s in STRAWBERRIES]
        assert rows == [(1, 0.084, 1.24), (2, 0.111, 1.38), (3, 0.155, 1.88), (4, 0.176, 1.90), (5, 0.181, 2.29)]
        assert np.mean([s.weight for s in STRAWBERRIES]) == pytest.approx(0.141, abs=1e-3)
        assert np.mean([s.peduncle_diameter for s in STRAWBERRIES]) == pytest.approx(1.73, abs=1e-2)


@pytest.fixture(scope="module")
def log3(gp_model):
    return run_trial(STRAWBERRIES[2], gp_model, seed=7)


class TestRunTrial:

    def test_grip_ends_in_deadband(self, log3):
        _, s2, _ = segment_phases(log3)
        assert 1.9 <= log3.records[s2].f_m <= 2.1
        assert log3.records[s2 - 1].phase == GRIP

    def test_phase_order_and_time(self, log3):
        order = {APPROACH: 0, GRIP: 1, TRANSPORT: 2, RELEASE: 3}
        ranks = [order[r.phase] for r in log3.records]
        assert ranks == sorted(ranks)
        assert np.all(np.diff(log3.column("t")) > 0)

    def test_release(self, log3):
        last = log3.records[-1]
        assert last.f_true == 0.0 and last.g_t == ControllerConfig().g_max
        _, _, s3 = segment_phases(log3)
        assert log3.records[s3].f_true == 0.0

    def test_width_steps(self, log3):
        _, _, s3 = segment_phases(log3)
        steps = np.diff(log3.column("g_t")[:s3])
        assert set(np.abs(steps)) <= {0.0, 1.0}

    def test_no_contact_no_force(self, log3):
        for r in log3.records:
            if r.g_t >= STRAWBERRIES[2].peduncle_diameter:
                assert r.f_true == 0.0

    def test_force_limit(self, log3):
        assert log3.column("f_true").max() <= 10.0

    def test_transport_length(self, log3):
        _, s2, s3 = segment_phases(log3)
        assert s3 - s2 == TrialConfig().transport_ticks

    def test_still_quiet_is_constant(self, gp_model):
        tl = run_trial(STRAWBERRIES[0], gp_model, STILL, sim=QUIET_SIM, seed=1)
        _, s2, s3 = segment_phases(tl)
        f = tl.column("f_m")[s2:s3]
        assert np.ptp(f) <= 1e-6
        assert trial_mae(tl) <= ControllerConfig().epsilon

    @pytest.mark.parametrize("sample", STRAWBERRIES)
    def test_still_quiet_mae_within_deadband(self, gp_model, sample):
        tl = run_trial(sample, gp_model, STILL, sim=QUIET_SIM, seed=sample.id)
        assert trial_mae(tl) <= ControllerConfig().epsilon

    def test_deterministic(self, gp_model):
        a = run_trial(STRAWBERRIES[1], gp_model, seed=3)
        b = run_trial(STRAWBERRIES[1], gp_model, seed=3)
        assert a.records == b.records

    def test_timeout(self, gp_model):
        # stiff skin: widths reachable in 1 mm steps straddle the deadband (1.0 N / 2.2 N)
        with pytest.raises(TrialTimeout) as info:
            run_trial(STRAWBERRIES[0], gp_model, TrialConfig(compliance=0.5), ControllerConfig(), QUIET_SIM, seed=0)
        assert len(info.value.log) > 500

    def test_abort(self, gp_model):
        ctrl = ControllerConfig(f_d=9.0, epsilon=0.1, f_abort=9.2, sigma_h=1.0)
        with pytest.raises(SafetyAbort) as info:
            run_trial(STRAWBERRIES[0], gp_model, TrialConfig(compliance=0.5), ctrl, QUIET_SIM, seed=0)
        assert info.value.log is not None


class TestSegmentation:

    def test_known_boundaries(self):
        phases = [APPROACH] * 3 + [GRIP] * 4 + [TRANSPORT] * 5 + [RELEASE] * 2
        f_true = [0, 0, 0, 0.01, 0.3, 1, 1.5, 2, 2, 2, 2, 2, 0, 0]
        assert segment_phases(synthetic_log(phases, f_true=f_true)) == (4, 7, 12)

    def test_immediate_contact(self):
        log = synthetic_log([GRIP, TRANSPORT, RELEASE])
        assert segment_phases(log)[0] == 0

    def test_missing_phase(self):
        with pytest.raises(SegmentationError):
            segment_phases(synthetic_log([GRIP, TRANSPORT]))

    def test_real_trial_order(self, gp_model):
        s1, s2, s3 = segment_phases(run_trial(STRAWBERRIES[4], gp_model, seed=2))
        assert s1 < s2 < s3


class TestMAE:

    def test_constant(self):
        assert trial_mae(synthetic_log([GRIP] + [TRANSPORT] * 10 + [RELEASE])) == 0.0

    def test_sinusoid(self):
        n = 10000
        t = np.arange(n) / n * 5  # five whole periods
        f = 2 + 0.3 * np.sin(2 * np.pi * t)
        log = synthetic_log([TRANSPORT] * n + [RELEASE], f_m=np.append(f, 0.0))
        assert trial_mae(log) == pytest.approx(0.3 * 2 / np.pi, abs=1e-4)
        assert trial_mae(log) == pytest.approx(0.1910, abs=1e-4)

    def test_table_sample_two_average(self):
        assert np.mean([0.082, 0.684, 0.560, 0.047, 0.182]) == pytest.approx(0.311, abs=1e-9)

    def test_empty_window(self):
        log = synthetic_log([GRIP, TRANSPORT, RELEASE])
        log.records[1] = TickRecord(log.records[1].t, RELEASE, 2.0, 1.0, 0.0)
        with pytest.raises((EvaluationError, SegmentationError)):
            trial_mae(log)


class TestSlip:

    def test_sample_five_holds(self):
        s = STRAWBERRIES[4]
        assert s.mass == pytest.approx(0.01845, abs=1e-5)
        need = s.mass * (9.81 + 1.0) * 2 / 0.5
        assert need == pytest.approx(0.798, abs=1e-3)
        assert slip_check(synthetic_log([GRIP] + [TRANSPORT] * 5 + [RELEASE]), s) == []

    def test_zero_force_slips(self):
        log = synthetic_log([GRIP] + [TRANSPORT] * 3 + [RELEASE], f_m=np.array([2, 2, 0, 2, 0.0]))
        assert slip_check(log, StrawberrySample(9, 0.01, 1.0)) == [2]


class TestCampaign:

    def test_single(self, gp_model):
        rep = run_campaign([STRAWBERRIES[0]], gp_model, trials_per_sample=1, seed=1)
        assert rep.mae.shape == (1, 1)
        assert rep.to_dict()["mae_matrix"][0][0] == pytest.approx(rep.mae[0, 0])

    def test_failures_recorded(self, gp_model):
        ctrl = ControllerConfig(f_d=9.0, epsilon=0.1, f_abort=9.2)
        rep = run_campaign(STRAWBERRIES[:2], gp_model, 2, TrialConfig(compliance=0.5), ctrl, QUIET_SIM, seed=0)
        assert rep.n_aborts == 4 and np.isnan(rep.mae).all()

    def test_deterministic(self, gp_model):
        a = run_campaign(STRAWBERRIES[:2], gp_model, 2, seed=5).to_dict()
        b = run_campaign(STRAWBERRIES[:2], gp_model, 2, seed=5).to_dict()
        assert a == b
