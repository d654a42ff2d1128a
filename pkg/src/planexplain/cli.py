"""Command-line entry points mirroring the HTTP surface plus the stage-one
problem pipeline."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .domain import canonical_json
from .engine import Engine, EngineConfig
from .fixtures import ENGINE_CONFIG, EXAMPLE_INPUT
from .planning import generate_planner_input, plans_to_json, reference_plan, validate
from .pomdp import build, export_prism
from .prompting import MockBackend


def _load_engine(args) -> Engine:
    config = EngineConfig.load(args.config)
    return Engine(config, ledger_path=args.ledger)


def _add_engine_args(parser):
    parser.add_argument("--config", default=str(ENGINE_CONFIG), help="engine config file")
    parser.add_argument("--ledger", default=None, help="feedback event log (JSONL)")


def cmd_serve(args):
    import uvicorn

    from .api import create_app

    app = create_app(_load_engine(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")


def cmd_solve(args):
    engine = _load_engine(args)
    snapshot = engine.policy(args.profile, verify=args.verify)
    print(canonical_json(snapshot.to_dict()))


def cmd_explain(args):
    engine = _load_engine(args)
    obs = [int(x) for x in args.observation.split(",")] if args.observation else None
    record = engine.explain(args.profile, obs, args.plan_id)
    print(canonical_json(record.to_dict()))


def cmd_feedback(args):
    engine = _load_engine(args)
    event = engine.feedback(args.explanation_id, args.verdict)
    print(canonical_json({"status": "ok", "sequence": event.sequence}))


def cmd_scenario(args):
    engine = _load_engine(args)
    with open(args.script, encoding="utf-8") as fh:
        script = json.load(fh)
    timeline = engine.run_scenario(script)
    print(canonical_json({"timeline": timeline}))


def cmd_export_prism(args):
    engine = _load_engine(args)
    estimate = lambda p, q: float(engine.ledger.estimate(args.profile, p, q))  # noqa: E731
    spec = build(engine.model, engine.catalog, estimate, engine.params, args.profile)
    text = export_prism(spec)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen_problem(args):
    problem = Path(args.h1).read_text(encoding="utf-8")
    example = Path(args.example).read_text(encoding="utf-8")
    instructions = Path(args.instructions).read_text(encoding="utf-8")
    if args.backend == "mock":
        # Deterministic stand-in: echo the canned example-format answer.
        from .prompting import CannedBackend

        backend = CannedBackend(text=Path(args.canned or EXAMPLE_INPUT).read_text(encoding="utf-8"))
    else:
        from .prompting import HttpBackend

        backend = HttpBackend(endpoint=args.endpoint, model=args.model)
    result = generate_planner_input(problem, example, instructions, backend)
    print(canonical_json({"report": result.report.to_dict(), "raw": result.raw_text}))


def cmd_validate(args):
    raw = Path(args.input).read_text(encoding="utf-8")
    report = validate(raw)
    print(canonical_json(report.to_dict()))
    if not (report.parsable and report.processable and report.feasible):
        sys.exit(1)


def cmd_plan(args):
    from .domain import planner_input_from_dict

    with open(args.input, encoding="utf-8") as fh:
        problem = planner_input_from_dict(json.load(fh))
    plans = reference_plan(problem)
    text = plans_to_json(plans)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="planexplain")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP API")
    _add_engine_args(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("solve", help="synthesize and print a profile's policy")
    _add_engine_args(p)
    p.add_argument("--profile", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="cross-check with the slow solver")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("explain", help="generate one explanation")
    _add_engine_args(p)
    p.add_argument("--profile", type=int, required=True)
    p.add_argument("--observation", default=None, help="comma-separated predicted levels")
    p.add_argument("--plan-id", default=None)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("feedback", help="record accept/reject feedback")
    _add_engine_args(p)
    p.add_argument("--explanation-id", required=True)
    p.add_argument("--verdict", choices=["accepted", "rejected"], required=True)
    p.set_defaults(func=cmd_feedback)

    p = sub.add_parser("scenario", help="replay a trigger script")
    _add_engine_args(p)
    p.add_argument("--script", required=True)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("export-prism", help="export a profile's POMDP as PRISM text")
    _add_engine_args(p)
    p.add_argument("--profile", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export_prism)

    p = sub.add_parser("gen-problem", help="natural-language problem to planner input")
    p.add_argument("--h1", required=True, help="problem description file")
    p.add_argument("--example", required=True, help="one-shot planner input example")
    p.add_argument("--instructions", required=True, help="generation instructions file")
    p.add_argument("--backend", choices=["mock", "http"], default="mock")
    p.add_argument("--canned", default=None, help="mock backend: file to return verbatim")
    p.add_argument("--endpoint", default=None)
    p.add_argument("--model", default=None)
    p.set_defaults(func=cmd_gen_problem)

    p = sub.add_parser("validate", help="check a generated planner input file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plan", help="run the reference planner")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plan)

    args = parser.parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
