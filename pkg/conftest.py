import sys
from pathlib import Path

import pytest

# Ensure the fem-engine service source is on sys.path early
service_root = Path(__file__).parent / "services" / "fem-engine"
if (service_root / "randfem").exists() and str(service_root) not in sys.path:
    sys.path.insert(0, str(service_root))

from randfem.engine.mesh.structured import build_structured_mesh  # noqa: E402
from randfem.engine.solver.realization import RealizationContext  # noqa: E402
from randfem.engine.utils import config as config_module  # noqa: E402
from randfem.engine.utils.logger import setup_logging  # noqa: E402


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch, tmp_path):
    """Fresh settings per test, with the reference cache under tmp_path."""
    monkeypatch.setenv("RANDFEM_EXPERIMENT_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("RANDFEM_THREADS", "2")
    config_module.reset_settings()
    setup_logging(level="WARNING", format_type="console")
    yield
    config_module.reset_settings()


@pytest.fixture(scope="session")
def mesh_n1():
    return build_structured_mesh(1)


@pytest.fixture(scope="session")
def mesh_n2():
    return build_structured_mesh(2)


@pytest.fixture(scope="session")
def mesh_n3():
    return build_structured_mesh(3)


@pytest.fixture(scope="session")
def context_n3(mesh_n3):
    return RealizationContext.build(mesh_n3)
