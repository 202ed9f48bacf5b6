import os
import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

SEED = int(os.environ.get("QUATGEO_SEED", "271828"))

settings.register_profile(
    "quatgeo", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("quatgeo")


@pytest.fixture
def rng(request):
    """Per-test random source; reseed everything with QUATGEO_SEED."""
    return random.Random(f"{SEED}:{request.node.nodeid}")


def pytest_report_header(config):
    return f"QUATGEO_SEED={SEED}"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        status = "PASS" if mod.RESULTS[n] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status} - {mod.DESCRIPTIONS[n]}")
