from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fuchsq.construct import ConstructionInput, construct_group  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def golden_input() -> ConstructionInput:
    return ConstructionInput.make([0, 2], 3, v0=-2, x1=-1, t_init=1)


@pytest.fixture(scope="session")
def golden():
    return construct_group(golden_input())


@pytest.fixture(scope="session")
def golden_path() -> Path:
    return FIXTURES / "golden_blueprint.json"


@pytest.fixture
def rng():
    return random.Random(20240611)
