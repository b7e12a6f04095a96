import pytest

from kahlerid import Workspace, get_model


@pytest.fixture(scope="session")
def ws():
    """Workspace factory with session-wide caching (assembly is the slow part)."""
    cache = {}

    def get(name: str, mode: str = "exact") -> Workspace:
        key = (name, mode)
        if key not in cache:
            cache[key] = Workspace(get_model(name), mode=mode)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def geom(ws):
    def get(name: str):
        return ws(name).geom

    return get
