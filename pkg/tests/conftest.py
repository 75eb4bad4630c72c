import json
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS))


def load_fixture(name: str):
    return json.loads((TESTS / "data" / name).read_text())


@pytest.fixture(scope="session")
def fixture_data():
    return load_fixture
