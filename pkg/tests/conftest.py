import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ppdm.geometry import Configuration, RigidMotion, random_rotation

settings.register_profile("ppdm", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ppdm")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_config(rng, m=3, k=6, n=5):
    N = rng.normal(size=(k, m))
    N /= np.linalg.norm(N, axis=1, keepdims=True)
    return Configuration(N, rng.uniform(0.5, 3.0, k), rng.normal(size=(n, m)))


def random_motion(rng, m, reflect=None):
    return RigidMotion(random_rotation(rng, m, reflect), rng.normal(size=m))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
