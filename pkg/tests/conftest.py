import pytest
from hypothesis import HealthCheck, settings

from fflab.field import make_field

settings.register_profile(
    "fflab",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fflab")


@pytest.fixture(autouse=True)
def isolated_results_dir(tmp_path, monkeypatch):
    """Keep every test's report cache inside its own tmp directory."""
    monkeypatch.setenv("FFLAB_RESULTS_DIR", str(tmp_path / "fflab-results"))


@pytest.fixture(scope="session")
def f3():
    return make_field(3)


@pytest.fixture(scope="session")
def f5():
    return make_field(5)


@pytest.fixture(scope="session")
def f7():
    return make_field(7)


@pytest.fixture(scope="session")
def f9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def f11():
    return make_field(11)
