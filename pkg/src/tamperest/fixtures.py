"""Bundled example corpus.

Four plants ship with the package:

* ``estimation`` -- five-state nondeterministic plant (with the matching
  cost table ``estimation``) used by the least-cost estimation examples;
* ``diagnosable`` -- plant whose fault survives bounded tampering
  (cost table ``diagnosable``);
* ``defeatable`` -- plant whose diagnosis a budget-two attacker defeats
  forever (cost table ``defeatable``);
* ``confusable`` -- classical toy with two observation-equivalent branches,
  one faulty (pair it with the ``empty`` cost table).

The transition tables of the first three are reconstructions: they were
built to exhibit specific published behaviours, and the test suite pins
those behaviours, not the tables themselves.
"""

from __future__ import annotations

from importlib import resources

from .attacks import AttackModel, load_model
from .automata import PlantNfa, load_plant

PLANTS = ("estimation", "diagnosable", "defeatable", "confusable")
COST_TABLES = ("estimation", "diagnosable", "defeatable", "empty")


def plant_path(name: str):
    """Filesystem path of a bundled plant description."""
    if name not in PLANTS:
        raise KeyError(f"unknown plant fixture {name!r}; available: {PLANTS}")
    return resources.files(__package__) / "fixtures" / f"{name}_plant.json"


def costs_path(name: str):
    """Filesystem path of a bundled cost table."""
    if name not in COST_TABLES:
        raise KeyError(f"unknown cost table fixture {name!r}; available: {COST_TABLES}")
    return resources.files(__package__) / "fixtures" / f"{name}_costs.json"


def plant(name: str) -> PlantNfa:
    return load_plant(plant_path(name))


def costs(name: str) -> AttackModel:
    return load_model(costs_path(name))
