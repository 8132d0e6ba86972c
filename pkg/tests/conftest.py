import json
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from faultq.gridmodel import AlarmSnapshot, bundled_path, bundled_topology

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def topo():
    return bundled_topology()


def case(name: str) -> AlarmSnapshot:
    return AlarmSnapshot.from_dict(json.loads(bundled_path(f"cases/{name}.json").read_text()))


def case_doc(name: str) -> dict:
    return json.loads(bundled_path(f"cases/{name}.json").read_text())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
