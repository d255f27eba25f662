import pytest

from passgain.geometry import SystemConfig, derive_constants


@pytest.fixture(scope="session")
def cfg():
    """Default 28 GHz scenario with the lossless waveguide."""
    return SystemConfig(alpha_wg_db_per_m=0.0)


@pytest.fixture(scope="session")
def consts(cfg):
    return derive_constants(cfg)
