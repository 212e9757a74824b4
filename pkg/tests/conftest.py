import pytest

from vivochan import load_default_database


@pytest.fixture(scope="session")
def db():
    return load_default_database()


@pytest.fixture(autouse=True)
def _no_env_db(monkeypatch):
    monkeypatch.delenv("VIVOCHAN_TISSUE_DB", raising=False)
