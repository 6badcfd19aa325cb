"""State estimation and fault diagnosis for partially observed automata
whose sensor readings may be corrupted by a cost-bounded attacker.

The package answers three questions about a plant, an attack capability
table, and an attacker budget:

* which plant states explain a received observation, and at what minimum
  recovery cost (`estimate_least_cost`);
* whether every fault is still detectable after finitely many observations
  despite any attack within the budget (`verify_diagnosability`);
* the smallest budget with which an attacker can keep the diagnoser
  confused forever (`minimum_defeating_budget`).
"""

from .attacks import (
    AttackModel,
    CostedSequence,
    Del,
    Ins,
    Plain,
    Sub,
    enumerate_matching,
    enumerate_tampered,
    label_cost,
    load_model,
    model_from_dict,
    model_to_dict,
    project_original,
    project_received,
    total_cost,
)
from .automata import (
    ObserverDfa,
    PlantNfa,
    build_observer,
    dead_reachable_state,
    load_plant,
    plant_from_dict,
    plant_to_dict,
    unobservable_cycle,
)
from .cmin import (
    CminResult,
    CostPair,
    analyze_minimum_budget,
    build_corrupted_automaton,
    build_costed_twin_verifier,
    find_free_confusion_states,
    minimum_defeating_budget,
    pareto_update,
)
from .diagnoser import (
    CostedPlant,
    DeletionMarker,
    DiagnosisResult,
    TwinVerifier,
    build_costed_plant,
    build_twin_verifier,
    find_confused_cycle,
    verify_diagnosability,
)
from .errors import (
    ConfigurationError,
    OracleBudgetError,
    PreconditionError,
    TamperestError,
    ValidationError,
)
from .estimator import (
    Estimate,
    ProductAutomaton,
    build_product,
    ending_estimates,
    estimate_least_cost,
    estimate_via_product,
    reduce_product,
)
from .matching import (
    CostedMatchingDfa,
    MatchingAutomaton,
    build_costed_matching_dfa,
    build_matching_automaton,
)
from . import fixtures

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
