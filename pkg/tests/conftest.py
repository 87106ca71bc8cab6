import sys

import numpy as np
import pytest

from bcdisp.model import ChannelConfig, example_config


@pytest.fixture
def example_cfg():
    return example_config()


@pytest.fixture
def gauss_cfg():
    return ChannelConfig(5.0, 0.3, 0.6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
