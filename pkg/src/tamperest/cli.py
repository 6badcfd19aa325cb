"""Command-line front end.

Subcommands: ``observer``, ``estimate``, ``diagnose``, ``cmin``,
``export-dot``.  Exit codes: 0 success, 2 input/validation error,
3 structural-precondition violation (dead state or unobservable cycle in
the attack-augmented plant).

Output is canonical: identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dot
from .attacks import AttackModel, label_to_dict, load_model, render_labels
from .automata import build_observer, load_plant, sort_key
from .cmin import analyze_minimum_budget
from .diagnoser import DeletionMarker, verify_diagnosability
from .errors import ConfigurationError, PreconditionError, ValidationError
from .estimator import estimate_least_cost

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3


def _emit(payload: dict):
    sys.stdout.write(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n")


def _fail(code: int, message: str, **details) -> int:
    body = {"error": message}
    body.update(details)
    sys.stderr.write(json.dumps(body, ensure_ascii=False, sort_keys=True) + "\n")
    return code


def _load_inputs(args):
    plant = load_plant(args.plant)
    model = AttackModel.empty() if getattr(args, "attacks", None) is None else load_model(args.attacks)
    model.validate_against(plant)
    faults = None
    if getattr(args, "faults", None):
        faults = frozenset(args.faults)
        unknown = faults - plant.unobservable
        if unknown:
            raise ValidationError(
                f"fault events must be unobservable plant events, got {sorted(unknown)}"
            )
    return plant, model, faults


def _parse_observation(text: str) -> tuple:
    return tuple(text.split())


def _write_dot(path, text: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _cmd_observer(args) -> int:
    plant, _model, _faults = _load_inputs(args)
    observer = build_observer(plant)
    if args.format == "dot":
        sys.stdout.write(dot.observer_to_dot(observer))
        return EXIT_OK

    def label(subset):
        return sorted(subset, key=sort_key)

    entries = sorted(
        observer.transitions.items(),
        key=lambda kv: (str(label(kv[0][0])), kv[0][1]),
    )
    if args.format == "text":
        sys.stdout.write("initial: {%s}\n" % ",".join(str(s) for s in label(observer.initial)))
        for (subset, symbol), target in entries:
            sys.stdout.write(
                "{%s} --%s--> {%s}\n"
                % (
                    ",".join(str(s) for s in label(subset)),
                    symbol,
                    ",".join(str(s) for s in label(target)),
                )
            )
        return EXIT_OK
    _emit(
        {
            "initial": label(observer.initial),
            "states": sorted((label(s) for s in observer.states), key=str),
            "transitions": [
                {"from": label(subset), "event": symbol, "to": label(target)}
                for (subset, symbol), target in entries
            ],
        }
    )
    return EXIT_OK


def _cmd_estimate(args) -> int:
    plant, model, _faults = _load_inputs(args)
    observation = _parse_observation(args.obs)
    estimate = estimate_least_cost(
        plant, model, observation, args.budget, witness=args.witness
    )
    entries = []
    for state, cost in estimate.sorted_pairs():
        entry = {"state": state, "cost": cost}
        if args.witness:
            labels = estimate.witnesses[state]
            entry["witness"] = [label_to_dict(l) for l in labels]
            entry["explanation"] = render_labels(labels)
        entries.append(entry)
    payload = {
        "received": list(observation),
        "budget": args.budget,
        "estimates": entries,
        "over_budget": [{"state": s} for s in sorted(estimate.over_budget, key=sort_key)],
    }
    _emit(payload)
    if args.dot:
        from .estimator import build_product, reduce_product
        from .matching import build_costed_matching_dfa

        dfa = build_costed_matching_dfa(
            observation, model, args.budget + 1, alphabet=plant.observable
        )
        product = reduce_product(build_product(plant, dfa))
        _write_dot(args.dot, dot.product_to_dot(product))
    return EXIT_OK


def _render_event(event) -> str:
    return str(event) if isinstance(event, DeletionMarker) else event


def _cmd_diagnose(args) -> int:
    plant, model, faults = _load_inputs(args)
    result = verify_diagnosability(
        plant, model, faults=faults, budget=args.budget, want_witness=args.witness
    )
    payload = {"budget": args.budget, "diagnosable": result.diagnosable}
    if args.witness and result.witness is not None:
        cycle_left, cycle_right = [], []
        for (_src, event, side, _dst) in result.witness.cycle:
            if "L" in side:
                cycle_left.append(_render_event(event))
            if "R" in side:
                cycle_right.append(_render_event(event))
        payload["witness"] = {
            "left_run": [_render_event(e) for e in result.witness.left_run],
            "right_run": [_render_event(e) for e in result.witness.right_run],
            "cycle": {"left": cycle_left, "right": cycle_right},
        }
    _emit(payload)
    if args.dot:
        _write_dot(args.dot, dot.twin_verifier_to_dot(result.verifier))
    return EXIT_OK


def _cmd_cmin(args) -> int:
    plant, model, faults = _load_inputs(args)
    result = analyze_minimum_budget(plant, model, faults=faults)
    if result.value is None:
        payload = {"cmin": None, "reason": "no cost-free confusion cycle"}
    else:
        payload = {"cmin": result.value}
    _emit(payload)
    if args.dot:
        _write_dot(args.dot, dot.costed_twin_verifier_to_dot(result.verifier))
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    plant, _model, _faults = _load_inputs(args)
    if args.target == "observer":
        sys.stdout.write(dot.observer_to_dot(build_observer(plant)))
    else:
        sys.stdout.write(dot.plant_to_dot(plant))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tamperest",
        description=(
            "State estimation and fault-diagnosis analysis for partially "
            "observed automata whose sensor readings a cost-bounded attacker "
            "may delete, insert, or substitute."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, attacks=False, faults=False):
        p.add_argument("--plant", required=True, help="plant description (JSON)")
        if attacks:
            p.add_argument(
                "--attacks", help="attack cost table (JSON); omit for the empty model"
            )
        if faults:
            p.add_argument(
                "--faults",
                nargs="+",
                help="fault events (default: the plant's own fault set)",
            )

    p = sub.add_parser("observer", help="build the observer of a plant")
    common(p)
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.set_defaults(func=_cmd_observer)

    p = sub.add_parser("estimate", help="least-cost state estimate for an observation")
    common(p, attacks=True)
    p.add_argument("--obs", required=True, help="received observation, symbols separated by spaces")
    p.add_argument("--budget", type=int, required=True, help="attacker budget")
    p.add_argument("--witness", action="store_true", help="include one cheapest explanation per state")
    p.add_argument("--dot", help="write the reduced product automaton to this DOT file")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("diagnose", help="check tamper-tolerant diagnosability at a budget")
    common(p, attacks=True, faults=True)
    p.add_argument("--budget", type=int, required=True, help="attacker budget")
    p.add_argument("--witness", action="store_true", help="include a counterexample run pair")
    p.add_argument("--dot", help="write the verifier to this DOT file")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("cmin", help="minimum attack budget that defeats diagnosis forever")
    common(p, attacks=True, faults=True)
    p.add_argument("--dot", help="write the costed twin verifier to this DOT file")
    p.set_defaults(func=_cmd_cmin)

    p = sub.add_parser("export-dot", help="export a plant or its observer as DOT")
    common(p)
    p.add_argument("--target", choices=("plant", "observer"), default="plant")
    p.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        return _fail(
            EXIT_INPUT,
            f"malformed JSON: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        )
    except FileNotFoundError as exc:
        return _fail(EXIT_INPUT, f"file not found: {exc.filename}")
    except (ValidationError, ConfigurationError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    except PreconditionError as exc:
        witness = exc.witness
        if isinstance(witness, list):  # cycle: one entry per step
            witness = [repr(w) for w in witness]
        else:
            witness = repr(witness)
        return _fail(EXIT_PRECONDITION, str(exc), kind=exc.kind, witness=witness)


if __name__ == "__main__":
    raise SystemExit(main())
