import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tamperest import fixtures
from tamperest.attacks import AttackModel


@pytest.fixture(scope="session")
def estimation_plant():
    return fixtures.plant("estimation")


@pytest.fixture(scope="session")
def estimation_costs():
    return fixtures.costs("estimation")


@pytest.fixture(scope="session")
def diagnosable_plant():
    return fixtures.plant("diagnosable")


@pytest.fixture(scope="session")
def diagnosable_costs():
    return fixtures.costs("diagnosable")


@pytest.fixture(scope="session")
def defeatable_plant():
    return fixtures.plant("defeatable")


@pytest.fixture(scope="session")
def defeatable_costs():
    return fixtures.costs("defeatable")


@pytest.fixture(scope="session")
def confusable_plant():
    return fixtures.plant("confusable")


@pytest.fixture(scope="session")
def empty_model():
    return AttackModel.empty()
