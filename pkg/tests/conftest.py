from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from ncsphere.theta_spheres import ThetaConfig, build_instanton, build_theta_spheres

settings.register_profile("ci", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

THETAS = [Fraction(0), Fraction(1, 4), Fraction(1, 3)]


@pytest.fixture(params=THETAS, ids=lambda t: f"theta={t}")
def cfg(request):
    return ThetaConfig(request.param)


@pytest.fixture(scope="session")
def cfg13():
    return ThetaConfig(Fraction(1, 3))


@pytest.fixture(scope="session")
def spheres13(cfg13):
    return build_theta_spheres(cfg13)


@pytest.fixture(scope="session")
def instanton13(cfg13):
    return build_instanton(cfg13)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_record(request):
    """record(n, ok, note) stores one line for the end-of-run acceptance summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(n: int, ok: bool, note: str) -> None:
        lines[n] = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {note}"
        print(lines[n])

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
