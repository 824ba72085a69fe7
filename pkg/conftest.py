import os

import numpy as np
import pytest

import unified_logger
from data_loader import Dataset, find_fixture
from ssd import SsdParams, sample

# (alpha, theta) grid used by the formula-consistency checks.
ALPHAS = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
THETAS = (0.2, 1.0, 2.7713, 5.0)
PARAM_GRID = [(a, t) for a in ALPHAS for t in THETAS]


@pytest.fixture(scope="session", autouse=True)
def session_logs(tmp_path_factory):
    """Log directory for module- and session-scoped fixtures that fit models."""
    patch = pytest.MonkeyPatch()
    patch.setenv("SSDLAB_LOG_DIR", str(tmp_path_factory.mktemp("session") / "Logs"))
    patch.setattr(unified_logger, "_logger_instance", None)
    yield
    patch.undo()


@pytest.fixture(autouse=True)
def isolated_logs(tmp_path, monkeypatch):
    """Send every log file of a test into its own temporary directory."""
    monkeypatch.setenv("SSDLAB_LOG_DIR", str(tmp_path / "Logs"))
    monkeypatch.setattr(unified_logger, "_logger_instance", None)
    yield tmp_path / "Logs"


@pytest.fixture
def unit_params():
    return SsdParams(1.0, 1.0)


@pytest.fixture
def small_dataset():
    return Dataset.from_values([1.0, 2.0, 3.0], "small")


@pytest.fixture(scope="session")
def simulated_50():
    """Fixed 50-point sample from SSD(2, 1)."""
    return sample(50, SsdParams(2.0, 1.0), seed=20240601)


@pytest.fixture
def write_text(tmp_path):
    def _write(name, content):
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return str(path)
    return _write


def require_fixture(file_name):
    """Path of a public dataset, or skip the test with a visible reason."""
    path = find_fixture(file_name)
    if path is None:
        pytest.skip(f"dataset fixture {file_name} not found in "
                    f"{os.environ.get('SSDLAB_FIXTURES', 'fixtures')}; see fixtures/README.md")
    return path


def geometric_grid(lo, hi, points=200):
    return np.geomspace(lo, hi, points)
