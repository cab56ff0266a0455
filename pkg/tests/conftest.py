import pytest

from linepaint.presets import desk_scene


@pytest.fixture(scope="session")
def desk():
    return desk_scene(1)
