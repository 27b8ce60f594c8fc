import sys
from pathlib import Path

import pytest
import yaml
from loguru import logger

from suzukicartier.config.loader import load_config
from suzukicartier.core.params import make_params
from suzukicartier.core.structured import MatrixPath, build_cartier_matrix, enumerate_basis


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop sinks bound to streams a test has replaced."""
    yield
    logger.remove()
    logger.add(lambda message: sys.stderr.write(message), level="WARNING")


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Curves, bases and matrices
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@pytest.fixture(scope="session")
def p1():
    return make_params(1)


@pytest.fixture(scope="session")
def p2():
    return make_params(2)


@pytest.fixture(scope="session")
def basis1(p1):
    return enumerate_basis(p1)


@pytest.fixture(scope="session")
def basis2(p2):
    return enumerate_basis(p2)


@pytest.fixture(scope="session")
def matrix1(p1, basis1):
    """Table-driven Cartier matrix of S_1."""
    return build_cartier_matrix(p1, basis1)


@pytest.fixture(scope="session")
def matrix2(p2, basis2):
    """Table-driven Cartier matrix of S_2."""
    return build_cartier_matrix(p2, basis2)


@pytest.fixture(scope="session")
def oracle1(p1, basis1):
    return build_cartier_matrix(p1, basis1, path=MatrixPath.ORACLE)


@pytest.fixture(scope="session")
def oracle2(p2, basis2):
    return build_cartier_matrix(p2, basis2, path=MatrixPath.ORACLE)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Configuration
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@pytest.fixture
def valid_config_dict():
    """Return a valid configuration dictionary."""
    return {
        "logging": {
            "level": "debug",
            "rotation": "50mb"
        },
        "compute": {
            "parallelism": 2,
            "enumerate_cap": 1000,
            "max_matrix_m": 3,
            "oracle_max_m": 1,
            "point_bits_limit": 20
        }
    }


@pytest.fixture
def valid_config_file(tmp_path: Path, valid_config_dict):
    """Create a temporary valid configuration file."""
    config_file = tmp_path / "config.yaml"
    with config_file.open('w') as f:
        yaml.safe_dump(valid_config_dict, f)
    return config_file


@pytest.fixture
def invalid_yaml_file(tmp_path: Path):
    """Create a temporary file with invalid YAML syntax."""
    config_file = tmp_path / "invalid.yaml"
    config_file.write_text("""
    compute:
        parallelism: 2
        enumerate_cap: [1, 2,
    """)
    return config_file


@pytest.fixture
def fixture_config():
    """Configuration shipped with the test suite."""
    config_path = Path(__file__).parent / "fixtures" / "compute_config.yaml"
    return load_config(str(config_path))
