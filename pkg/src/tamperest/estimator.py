"""Least-cost state estimation under a cost-bounded attacker.

The estimate for a received observation is the set of plant states
consistent with *some* explanation of that observation whose recovery cost
stays within the attacker budget, each state annotated with the cheapest
such cost.

Two routes produce it:

* an explicit product of the plant with the costed matching DFA
  (`build_product`), reduced by cost dominance (`reduce_product`) and read
  off at the final stage (`ending_estimates`);
* a stage-by-stage sweep (`estimate_least_cost`) that relaxes per-(state,
  stage) costs directly and never materialises the product.  Results are
  identical; the sweep is the production path.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .attacks import (
    AttackModel,
    Del,
    Ins,
    Label,
    Plain,
    Sub,
    check_budget,
    label_cost,
    label_sort_key,
    project_original,
)
from .automata import PlantNfa, sort_key
from .errors import ConfigurationError, ValidationError
from .matching import CostedMatchingDfa, build_costed_matching_dfa


@dataclass(frozen=True, eq=False)
class ProductAutomaton:
    """Synchronisation of the plant with a costed matching DFA.

    States are ``(plant_state, stage, cost)`` triples; the transition
    relation is nondeterministic in the plant component.
    """

    plant: PlantNfa
    dfa: CostedMatchingDfa
    states: frozenset
    initial: frozenset
    transitions: frozenset  # (src, label, dst) triples

    @property
    def final_stage(self) -> int:
        return self.dfa.final_stage

    @property
    def bound(self) -> int:
        return self.dfa.bound

    def successors(self, state: tuple, label: Label) -> frozenset:
        return frozenset(dst for (src, l, dst) in self.transitions if src == state and l == label)


def _plant_move(plant: PlantNfa, state, label: Label) -> frozenset:
    """Plant states compatible with one matching label from `state`.

    The plant executes the hypothesised *original* symbol: nothing for an
    insertion, the deleted/substituted/untouched symbol otherwise.
    """
    return plant.reach((state,), project_original((label,)))


def build_product(plant: PlantNfa, dfa: CostedMatchingDfa) -> ProductAutomaton:
    """Accessible synchronous product; plant components are closure-saturated.

    The initial plant components take the unobservable closure of the plant's
    initial states so that the zero-observation estimate coincides with
    ``reach(X0, e)`` for the empty observation.
    """
    dfa.model.validate_against(plant)
    for symbol in dfa.received:
        if symbol not in plant.observable:
            raise ConfigurationError(
                f"received symbol {symbol!r} is not observable in the plant"
            )
    initial = frozenset(
        (state, 0, 0) for state in plant.unobservable_closure(plant.initial)
    )
    states = set(initial)
    transitions = set()
    queue = deque(sorted(initial, key=lambda s: sort_key(s[0])))
    label_pool = dfa.labels()
    while queue:
        src = queue.popleft()
        plant_state, stage, cost = src
        for label in label_pool:
            nxt = dfa.step((stage, cost), label)
            if nxt is None:
                continue
            for target in sorted(_plant_move(plant, plant_state, label), key=sort_key):
                dst = (target, nxt[0], nxt[1])
                transitions.add((src, label, dst))
                if dst not in states:
                    states.add(dst)
                    queue.append(dst)
    size_cap = len(plant.states) * (dfa.final_stage + 1) * (dfa.bound + 1)
    assert len(states) <= size_cap, "product grew beyond |X|*(m+1)*(B+1) states"
    return ProductAutomaton(
        plant=plant,
        dfa=dfa,
        states=frozenset(states),
        initial=initial,
        transitions=frozenset(transitions),
    )


def reduce_product(product: ProductAutomaton) -> ProductAutomaton:
    """Keep only the cheapest copy of each (plant state, stage); re-take the accessible part."""
    cheapest: dict = {}
    for (state, stage, cost) in product.states:
        key = (state, stage)
        if cost < cheapest.get(key, cost + 1):
            cheapest[key] = cost
    kept = {
        (state, stage, cost)
        for (state, stage, cost) in product.states
        if cheapest[(state, stage)] == cost
    }
    edges = {
        (src, label, dst)
        for (src, label, dst) in product.transitions
        if src in kept and dst in kept
    }
    outgoing: dict = {}
    for (src, label, dst) in edges:
        outgoing.setdefault(src, []).append((label, dst))
    initial = frozenset(s for s in product.initial if s in kept)
    reachable = set(initial)
    queue = deque(initial)
    while queue:
        src = queue.popleft()
        for _label, dst in outgoing.get(src, ()):
            if dst not in reachable:
                reachable.add(dst)
                queue.append(dst)
    return ProductAutomaton(
        plant=product.plant,
        dfa=product.dfa,
        states=frozenset(reachable),
        initial=initial,
        transitions=frozenset(
            (src, label, dst)
            for (src, label, dst) in edges
            if src in reachable and dst in reachable
        ),
    )


@dataclass(frozen=True)
class Estimate:
    """Least-cost state estimate for one received observation.

    `pairs` maps each plant state to the cheapest recovery cost within the
    budget.  `over_budget` lists states reachable only by explanations whose
    cost exceeds the budget (their exact cost is unknown beyond that).
    """

    received: tuple
    budget: int
    pairs: Mapping
    over_budget: frozenset
    witnesses: Optional[Mapping] = field(default=None, compare=False)

    def states(self) -> frozenset:
        return frozenset(self.pairs)

    def cost(self, state) -> Optional[int]:
        return self.pairs.get(state)

    def sorted_pairs(self) -> list:
        return sorted(self.pairs.items(), key=lambda item: (item[1], sort_key(item[0])))


def ending_estimates(product: ProductAutomaton, budget: int) -> Estimate:
    """Per-state minimum costs at the final stage of a (reduced) product.

    Saturated entries (cost equal to the bound, i.e. beyond the budget) are
    reported separately in ``over_budget``.
    """
    if product.bound != budget + 1:
        raise ValidationError(
            f"product was built with bound {product.bound}, expected budget+1={budget + 1}"
        )
    final = product.final_stage
    best: dict = {}
    for (state, stage, cost) in product.states:
        if stage != final:
            continue
        if cost < best.get(state, cost + 1):
            best[state] = cost
    pairs = {state: cost for state, cost in best.items() if cost <= budget}
    over = frozenset(state for state, cost in best.items() if cost > budget)
    return Estimate(
        received=product.dfa.received,
        budget=budget,
        pairs=pairs,
        over_budget=over,
    )


def estimate_via_product(
    plant: PlantNfa, model: AttackModel, received: Sequence[str], budget: int
) -> Estimate:
    """Reference pipeline: matching DFA -> product -> reduction -> estimate."""
    dfa = build_costed_matching_dfa(received, model, budget + 1, alphabet=plant.observable)
    return ending_estimates(reduce_product(build_product(plant, dfa)), budget)


def estimate_least_cost(
    plant: PlantNfa,
    model: AttackModel,
    received: Sequence[str],
    budget: int,
    witness: bool = False,
) -> Estimate:
    """Least-cost estimate by a direct stage sweep.

    Keeps one saturating cost per (plant state, stage): advancing labels move
    to the next stage, deletion labels are relaxed to a fixed point within a
    stage (each deletion costs at least one unit, so the relaxation
    terminates).  With `witness` set, one cheapest label sequence per
    estimated state is reconstructed.
    """
    check_budget(budget)
    model.validate_against(plant)
    received = tuple(received)
    for symbol in received:
        if symbol not in plant.observable:
            raise ValidationError(f"received symbol {symbol!r} is not observable")
    bound = budget + 1

    # parents[(stage, state)] = (label, prev_state, prev_stage); only for witness mode
    parents: dict = {}

    def relax_deletions(dist: dict, stage: int) -> dict:
        if not model.deletions:
            return dist
        heap = [(cost, sort_key(state), state) for state, cost in dist.items()]
        heapq.heapify(heap)
        while heap:
            cost, _k, state = heapq.heappop(heap)
            if cost > dist.get(state, bound):
                continue
            for symbol, del_cost in sorted(model.deletions.items()):
                new_cost = min(cost + del_cost, bound)
                for target in sorted(plant.reach((state,), (symbol,)), key=sort_key):
                    if new_cost < dist.get(target, bound + 1):
                        dist[target] = new_cost
                        if witness:
                            parents[(stage, target)] = (Del(symbol), state, stage)
                        heapq.heappush(heap, (new_cost, sort_key(target), target))
        return dist

    dist = {state: 0 for state in plant.unobservable_closure(plant.initial)}
    dist = relax_deletions(dist, 0)
    for stage, symbol in enumerate(received):
        labels = [Plain(symbol)]
        if symbol in model.insertions:
            labels.append(Ins(symbol))
        labels.extend(
            Sub(original, observed)
            for (original, observed) in sorted(model.substitutions)
            if observed == symbol
        )
        labels.sort(key=label_sort_key)
        nxt: dict = {}
        for label in labels:
            delta = label_cost(label, model)
            for state, cost in sorted(dist.items(), key=lambda kv: (kv[1], sort_key(kv[0]))):
                new_cost = min(cost + delta, bound)
                for target in sorted(_plant_move(plant, state, label), key=sort_key):
                    if new_cost < nxt.get(target, bound + 1):
                        nxt[target] = new_cost
                        if witness:
                            parents[(stage + 1, target)] = (label, state, stage)
        dist = relax_deletions(nxt, stage + 1)

    pairs = {state: cost for state, cost in dist.items() if cost <= budget}
    over = frozenset(state for state, cost in dist.items() if cost > budget)
    witnesses = None
    if witness:
        witnesses = {
            state: _reconstruct(parents, state, len(received)) for state in pairs
        }
    return Estimate(
        received=received,
        budget=budget,
        pairs=pairs,
        over_budget=over,
        witnesses=witnesses,
    )


def _reconstruct(parents: dict, state, stage: int) -> tuple:
    labels = []
    while (stage, state) in parents:
        label, state, stage = parents[(stage, state)]
        labels.append(label)
    labels.reverse()
    return tuple(labels)
