import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sarfocus.echo import auto_grid, simulate_raw, squinted_target
from sarfocus.params import DESK, DESK_APERTURE, PointTarget, Scene

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# wrapped centroid 471 Hz in ambiguity band -6
SQUINT_FDC = -6 * DESK.PRF + 471.0


@pytest.fixture(scope="session")
def desk():
    return DESK


@pytest.fixture(scope="session")
def broadside_scene():
    return Scene((PointTarget(1.0, DESK.R_ref, 0.0),), DESK_APERTURE)


@pytest.fixture(scope="session")
def broadside_raw(broadside_scene):
    grid = auto_grid(broadside_scene, DESK)
    return simulate_raw(broadside_scene, DESK, grid)


@pytest.fixture(scope="session")
def squint_scene():
    return Scene((squinted_target(DESK, DESK.R_ref, SQUINT_FDC),), DESK_APERTURE)


@pytest.fixture(scope="session")
def squint_raw(squint_scene):
    return simulate_raw(squint_scene, DESK, auto_grid(squint_scene, DESK))


@pytest.fixture(scope="session")
def five_target_scene():
    offsets = [(0.0, 0.0), (-300.0, -0.1), (300.0, 0.1), (-600.0, 0.05), (500.0, -0.05)]
    targets = tuple(PointTarget(1.0, DESK.R_ref + dr, e, e) for dr, e in offsets)
    return Scene(targets, DESK_APERTURE)


@pytest.fixture(scope="session")
def five_target_raw(five_target_scene):
    return simulate_raw(five_target_scene, DESK, auto_grid(five_target_scene, DESK))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
