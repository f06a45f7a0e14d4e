import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parents[1]
CATALOG = ROOT / "catalog.json"
GRAPHS = ROOT / "graphs"

settings.register_profile(
    "duval", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "duval"))


@pytest.fixture(scope="session")
def records():
    from duval.catalog import load_catalog

    return {r.id: r for r in load_catalog(CATALOG)}


@pytest.fixture(scope="session")
def full_run(records):
    from duval.catalog import run_all

    return run_all(list(records.values()))
