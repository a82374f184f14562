import numpy as np
import pytest

from tpro.config import RunConfig
from tpro.hybrid import (
    HybridGeometry,
    SqdParams,
    feedback_parameters,
    isolated_feedback,
)
from tpro.materials import DrudeModel


@pytest.fixture(scope="session")
def default_sqd() -> SqdParams:
    return SqdParams()


@pytest.fixture(scope="session")
def default_drude() -> DrudeModel:
    return DrudeModel()


@pytest.fixture(scope="session")
def default_geometry() -> HybridGeometry:
    return HybridGeometry()


@pytest.fixture(scope="session")
def hybrid_feedback(default_geometry, default_sqd):
    return feedback_parameters(
        default_geometry, default_sqd, default_sqd.two_photon_carrier_radps
    )


@pytest.fixture(scope="session")
def isolated_fb(default_sqd):
    return isolated_feedback(default_sqd)


@pytest.fixture(scope="session")
def default_config() -> RunConfig:
    return RunConfig.defaults()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)
