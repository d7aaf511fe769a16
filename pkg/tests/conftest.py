import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from wordmaps.corpus import data_path, ingest, load_manifest  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus100():
    """Every shipped group of order <= 100, loaded once so cached histograms are shared."""
    return ingest(data_path(), max_order=100)


@pytest.fixture(scope="session")
def manifest():
    return {g["name"]: g for g in load_manifest(data_path())["groups"]}


_ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


@pytest.fixture(scope="session")
def acceptance():
    """Record ``(criterion, passed, detail)``; one line per criterion is printed at the end."""
    def record(key: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE.setdefault(key, []).append((bool(passed), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split("-")[1])):
        parts = _ACCEPTANCE[key]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"{key}: {status} | " + "; ".join(d for _, d in parts))
