"""Seeded random plants and attack models for the property suites."""

from __future__ import annotations

import random

from tamperest.attacks import AttackModel
from tamperest.automata import PlantNfa

OBS = ("a", "b", "c")
UO = "u"
FAULT = "f"


def random_plant(
    rng: random.Random,
    max_states: int = 5,
    allow_unobservable_cycles: bool = True,
    ensure_live: bool = False,
    with_fault: bool = False,
) -> PlantNfa:
    n = rng.randint(2, max_states)
    states = range(n)
    transitions = set()
    for state in states:
        for symbol in OBS:
            for _ in range(rng.choice((0, 0, 1, 1, 2))):
                transitions.add((state, symbol, rng.randrange(n)))
    unobservable = {UO}
    for state in states:
        if rng.random() < 0.4:
            if allow_unobservable_cycles:
                transitions.add((state, UO, rng.randrange(n)))
            elif state + 1 < n:
                # forward-only silent edges keep the silent subgraph acyclic
                transitions.add((state, UO, rng.randrange(state + 1, n)))
    faults = set()
    if with_fault:
        unobservable.add(FAULT)
        faults.add(FAULT)
        for state in states:
            if rng.random() < 0.5 and state + 1 < n:
                transitions.add((state, FAULT, rng.randrange(state + 1, n)))
    if ensure_live:
        with_out = {src for (src, _e, _d) in transitions}
        for state in states:
            if state not in with_out:
                transitions.add((state, rng.choice(OBS), state))
    k = rng.randint(1, max(1, n // 2))
    initial = frozenset(rng.sample(range(n), k)) if rng.random() < 0.5 else frozenset({0})
    return PlantNfa(
        states=frozenset(states),
        observable=frozenset(OBS),
        unobservable=frozenset(unobservable),
        faults=frozenset(faults),
        transitions=frozenset(transitions),
        initial=initial,
    )


def random_attack_model(
    rng: random.Random,
    max_cost: int = 3,
    p_del: float = 0.3,
    p_ins: float = 0.3,
    p_sub: float = 0.25,
) -> AttackModel:
    deletions = {s: rng.randint(1, max_cost) for s in OBS if rng.random() < p_del}
    insertions = {s: rng.randint(1, max_cost) for s in OBS if rng.random() < p_ins}
    substitutions = {}
    for original in OBS:
        for observed in OBS:
            if original != observed and rng.random() < p_sub:
                substitutions[(original, observed)] = rng.randint(1, max_cost)
    return AttackModel(deletions, insertions, substitutions)


def random_observation(rng: random.Random, max_len: int = 3) -> tuple:
    return tuple(rng.choice(OBS) for _ in range(rng.randint(0, max_len)))
