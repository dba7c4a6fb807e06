import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ctm import ExplorationPlan, explore  # noqa: E402
from ctm._backend import get_kernel  # noqa: E402


def available_kernels():
    names = ["python"]
    try:
        get_kernel("cython")
        names.append("cython")
    except ImportError:
        pass
    return names


@pytest.fixture(scope="session")
def full_tables():
    """Exact full tables for k = 1, 2, 3 with the default cutoffs."""
    return {k: explore(ExplorationPlan.build(k)) for k in (1, 2, 3)}


@pytest.fixture(scope="session")
def table2(full_tables):
    return full_tables[2]


@pytest.fixture(scope="session")
def table2_no_symmetry():
    return explore(ExplorationPlan.build(2, use_blank_symmetry=False))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
