import os
import sys
import tempfile

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# catalogs computed during the run are cached in a throwaway directory
os.environ.setdefault("LRMESA_CACHE_DIR", tempfile.mkdtemp(prefix="lrmesa-cache-"))


@pytest.fixture(scope="session")
def cat3():
    from lrmesa.tree import extremal_rays

    return extremal_rays(3)


@pytest.fixture(scope="session")
def labels3(cat3):
    from lrmesa.tree import label_r3

    return label_r3(cat3)


def pytest_terminal_summary(terminalreporter):
    from _acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, msg = RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
