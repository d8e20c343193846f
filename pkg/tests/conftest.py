import pytest

from favard_l1.config import DEFAULT_CONFIG_PATH, load_config


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long parameter sweeps")


@pytest.fixture(autouse=True)
def default_config():
    """Every test starts and ends on the packaged configuration."""
    load_config(DEFAULT_CONFIG_PATH)
    yield
    load_config(DEFAULT_CONFIG_PATH)


@pytest.fixture
def write_config(tmp_path):
    """Write a YAML configuration file and return its path."""
    def _write(text, name="config.yaml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write
