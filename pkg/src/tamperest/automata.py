"""Nondeterministic finite automata under partial observation.

A plant is an NFA whose alphabet is split into observable and unobservable
events; a subset of the unobservable events may be designated as faults.
This module provides the transition algebra (``step``), the natural
projection onto observable events, the reachability operator ``reach`` that
accounts for unobservable moves, the observer (subset construction), and the
two structural checks (liveness, absence of unobservable cycles) that the
diagnosability analyses rely on.

All objects are immutable after construction; every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .errors import ValidationError

State = Hashable
Symbol = str

#: Rendering of the empty symbol; never a legal event name.
EPSILON_DISPLAY = "ε"


def sort_key(value):
    """Total order for possibly mixed int/str identifiers."""
    return (value.__class__.__name__, value)


def check_symbol_name(name) -> str:
    if not isinstance(name, str) or not name:
        raise ValidationError(f"event names must be non-empty strings, got {name!r}")
    if name == EPSILON_DISPLAY:
        raise ValidationError(f"{EPSILON_DISPLAY!r} is reserved for the empty symbol")
    return name


@dataclass(frozen=True)
class PlantNfa:
    """NFA with an observable/unobservable alphabet split and fault events.

    Transitions form a partial relation: absence of an entry means the move
    is undefined (there is no implicit sink state).
    """

    states: frozenset
    observable: frozenset
    unobservable: frozenset
    faults: frozenset
    transitions: frozenset
    initial: frozenset
    _succ: dict = field(init=False, repr=False, compare=False, hash=False)
    _uo_out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for name in self.observable | self.unobservable:
            check_symbol_name(name)
        if self.observable & self.unobservable:
            overlap = sorted(self.observable & self.unobservable)
            raise ValidationError(f"events marked both observable and unobservable: {overlap}")
        if not self.faults <= self.unobservable:
            raise ValidationError("fault events must be unobservable")
        if not self.initial:
            raise ValidationError("at least one initial state is required")
        if not self.initial <= self.states:
            raise ValidationError("initial states must be plant states")
        alphabet = self.observable | self.unobservable
        succ: dict = {}
        uo_out: dict = {}
        for triple in self.transitions:
            src, event, dst = triple
            if src not in self.states or dst not in self.states:
                raise ValidationError(f"transition {triple!r} references an unknown state")
            if event not in alphabet:
                raise ValidationError(f"transition {triple!r} uses an undeclared event")
            succ.setdefault((src, event), set()).add(dst)
            if event in self.unobservable:
                uo_out.setdefault(src, set()).add(dst)
        object.__setattr__(self, "_succ", {k: frozenset(v) for k, v in succ.items()})
        object.__setattr__(self, "_uo_out", {k: frozenset(v) for k, v in uo_out.items()})

    # -- basic queries ----------------------------------------------------

    @property
    def alphabet(self) -> frozenset:
        return self.observable | self.unobservable

    def successors(self, state, event) -> frozenset:
        """One-step successors of `state` under `event` (possibly empty)."""
        return self._succ.get((state, event), frozenset())

    def events_at(self, state) -> frozenset:
        return frozenset(e for (s, e) in self._succ if s == state)

    def _check_states(self, states: Iterable) -> frozenset:
        out = frozenset(states)
        unknown = out - self.states
        if unknown:
            raise ValidationError(f"unknown states: {sorted(unknown, key=sort_key)}")
        return out

    def _check_events(self, seq: Sequence[Symbol], allowed: frozenset, what: str):
        for event in seq:
            if event not in allowed:
                raise ValidationError(f"{event!r} is not {what}")

    # -- transition algebra -----------------------------------------------

    def step(self, states: Iterable, sequence: Sequence[Symbol]) -> frozenset:
        """Exact runs: states reachable from `states` by the event sequence.

        No unobservable closure is applied; the sequence must be executed
        literally, one transition per event.
        """
        current = self._check_states(states)
        self._check_events(sequence, self.alphabet, "a plant event")
        for event in sequence:
            current = frozenset(
                dst for src in current for dst in self.successors(src, event)
            )
            if not current:
                return current
        return current

    def project(self, sequence: Sequence[Symbol]) -> tuple:
        """Natural projection: erase unobservable events, keep order."""
        self._check_events(sequence, self.alphabet, "a plant event")
        return tuple(e for e in sequence if e in self.observable)

    def unobservable_closure(self, states: Iterable) -> frozenset:
        """States reachable via any number of unobservable moves."""
        closed = set(self._check_states(states))
        frontier = list(closed)
        while frontier:
            src = frontier.pop()
            for dst in self._uo_out.get(src, ()):
                if dst not in closed:
                    closed.add(dst)
                    frontier.append(dst)
        return frozenset(closed)

    def reach(self, states: Iterable, observation: Sequence[Symbol]) -> frozenset:
        """All states consistent with observing `observation` from `states`.

        Inserts unobservable closure before, between and after the observed
        symbols.  May return the empty set (observation infeasible); callers
        decide whether that is an error.
        """
        self._check_events(observation, self.observable, "an observable event")
        current = self.unobservable_closure(states)
        for symbol in observation:
            moved = frozenset(
                dst for src in current for dst in self.successors(src, symbol)
            )
            if not moved:
                return frozenset()
            current = self.unobservable_closure(moved)
        return current

    # -- structural checks --------------------------------------------------

    def reachable_states(self) -> frozenset:
        adjacency: dict = {}
        for (src, _event), targets in self._succ.items():
            adjacency.setdefault(src, set()).update(targets)
        seen = set(self.initial)
        frontier = list(seen)
        while frontier:
            state = frontier.pop()
            for target in adjacency.get(state, ()):
                if target not in seen:
                    seen.add(target)
                    frontier.append(target)
        return frozenset(seen)


def unobservable_cycle(plant: PlantNfa) -> Optional[list]:
    """One cycle of unobservable transitions, or None if the subgraph is acyclic.

    The witness is a list of transitions ``(src, event, dst)`` that starts
    and ends at the same state.
    """
    edges: dict = {}
    for (src, event, dst) in plant.transitions:
        if event in plant.unobservable:
            edges.setdefault(src, []).append((event, dst))
    for outs in edges.values():
        outs.sort(key=lambda pair: (sort_key(pair[0]), sort_key(pair[1])))

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {state: WHITE for state in plant.states}
    parent_edge: dict = {}
    for root in sorted(plant.states, key=sort_key):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(edges.get(root, ())))]
        color[root] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for event, dst in it:
                if color[dst] == GRAY:
                    # back edge: walk parents from `node` up to `dst`
                    cycle = [(node, event, dst)]
                    cur = node
                    while cur != dst:
                        src, ev = parent_edge[cur]
                        cycle.append((src, ev, cur))
                        cur = src
                    cycle.reverse()
                    return cycle
                if color[dst] == WHITE:
                    color[dst] = GRAY
                    parent_edge[dst] = (node, event)
                    stack.append((dst, iter(edges.get(dst, ()))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None


def dead_reachable_state(plant: PlantNfa) -> Optional[State]:
    """A reachable state with no outgoing transition, or None if live."""
    outgoing = {src for (src, _e, _d) in plant.transitions}
    for state in sorted(plant.reachable_states(), key=sort_key):
        if state not in outgoing:
            return state
    return None


@dataclass(frozen=True, eq=False)
class ObserverDfa:
    """Deterministic observer over subsets of plant states.

    Only the accessible part is kept; every state is a non-empty frozenset
    of plant states, and the transition map is partial.
    """

    plant: PlantNfa
    initial: frozenset
    states: frozenset
    transitions: Mapping

    def step(self, subset: frozenset, symbol: Symbol) -> Optional[frozenset]:
        return self.transitions.get((subset, symbol))

    def run(self, observation: Sequence[Symbol]) -> Optional[frozenset]:
        """Observer state after `observation`, or None if undefined."""
        current = self.initial
        for symbol in observation:
            current = self.step(current, symbol)
            if current is None:
                return None
        return current


def build_observer(plant: PlantNfa) -> ObserverDfa:
    """Subset construction over the observable alphabet via ``reach``."""
    initial = plant.reach(plant.initial, ())
    states = {initial}
    transitions = {}
    queue = deque([initial])
    while queue:
        subset = queue.popleft()
        for symbol in sorted(plant.observable):
            target = plant.reach(subset, (symbol,))
            if not target:
                continue
            transitions[(subset, symbol)] = target
            if target not in states:
                states.add(target)
                queue.append(target)
    return ObserverDfa(
        plant=plant,
        initial=initial,
        states=frozenset(states),
        transitions=transitions,
    )


# -- JSON interchange -------------------------------------------------------

_PLANT_KEYS = {"states", "observable", "unobservable", "faults", "initial", "transitions"}


def plant_from_dict(data: dict) -> PlantNfa:
    if not isinstance(data, dict):
        raise ValidationError("plant description must be a JSON object")
    missing = _PLANT_KEYS - data.keys()
    if missing:
        raise ValidationError(f"plant description is missing keys: {sorted(missing)}")
    for key in ("states", "observable", "unobservable", "faults", "initial", "transitions"):
        if not isinstance(data[key], list):
            raise ValidationError(f"plant key {key!r} must be a list")
    transitions = []
    for entry in data["transitions"]:
        if not isinstance(entry, dict) or {"from", "event", "to"} - entry.keys():
            raise ValidationError(f"bad transition entry: {entry!r}")
        transitions.append((entry["from"], entry["event"], entry["to"]))
    return PlantNfa(
        states=frozenset(data["states"]),
        observable=frozenset(data["observable"]),
        unobservable=frozenset(data["unobservable"]),
        faults=frozenset(data["faults"]),
        transitions=frozenset(transitions),
        initial=frozenset(data["initial"]),
    )


def plant_to_dict(plant: PlantNfa) -> dict:
    return {
        "states": sorted(plant.states, key=sort_key),
        "observable": sorted(plant.observable),
        "unobservable": sorted(plant.unobservable),
        "faults": sorted(plant.faults),
        "initial": sorted(plant.initial, key=sort_key),
        "transitions": [
            {"from": src, "event": event, "to": dst}
            for (src, event, dst) in sorted(
                plant.transitions, key=lambda t: (sort_key(t[0]), t[1], sort_key(t[2]))
            )
        ],
    }


def load_plant(path) -> PlantNfa:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    return plant_from_dict(data)
