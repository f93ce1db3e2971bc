import numpy as np
import pytest

from astskin.calib import ModelSpec, generate_dataset, split_dataset, train_model
from astskin.skin import AttenuationModel, SkinSim


@pytest.fixture(scope="session")
def default_dataset():
    return generate_dataset(seed=0)


@pytest.fixture(scope="session")
def default_split(default_dataset):
    return split_dataset(default_dataset, 0.9, seed=0)


@pytest.fixture(scope="session")
def gp_model(default_split):
    train, _ = default_split
    return train_model(train, ModelSpec("gp-exponential"), seed=0)


@pytest.fixture(scope="session")
def quiet_sim():
    return SkinSim(attenuation=AttenuationModel(noise_sigma=0.0))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, name, detail = RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {name}: {detail}")
