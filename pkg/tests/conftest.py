import pathlib

import pytest

from blochtk.presets import preset

REPO = pathlib.Path(__file__).resolve().parents[1]
CONFIGS = REPO / "configs"


@pytest.fixture(scope="session")
def two_level():
    return preset("two_level")


@pytest.fixture(scope="session")
def lam():
    return preset("lambda")


@pytest.fixture(scope="session")
def twelve_sigma():
    return preset("twelve_sigma_plus")


@pytest.fixture(scope="session")
def twelve_pi():
    return preset("twelve_pi")


@pytest.fixture(scope="session")
def configs_dir():
    return CONFIGS
