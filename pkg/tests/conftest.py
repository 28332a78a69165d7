from pathlib import Path

import numpy as np
import pytest
from scipy.stats import unitary_group

from cvpulse.device import load_device_config

ROOT = Path(__file__).resolve().parents[1]
EXAMPLE_CONFIG = ROOT / "configs" / "ibmq_toronto_example.json"


@pytest.fixture(scope="session")
def config_path():
    return EXAMPLE_CONFIG


@pytest.fixture(scope="session")
def device():
    return load_device_config(EXAMPLE_CONFIG)


def random_unitary(d, seed):
    return unitary_group.rvs(d, random_state=np.random.default_rng(seed))


def random_local(seed):
    rng = np.random.default_rng(seed)
    return np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
