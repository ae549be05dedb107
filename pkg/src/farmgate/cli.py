"""Command-line interface.

Subcommands::

    farmgate sim run --scenario <file> --seed <n> [--rate <multiplier>]
    farmgate convert --from <fmt> --to <fmt> [--ontology <file>] < in > out
    farmgate syn <word-or-sentence> [--lexicon <file>]
    farmgate reason --input <records-file> --rules <f> --fuzzy <f> --bayes <f>
    farmgate gateway --config <file>

Every command exits 0 on success; failures print one machine-parseable
``error <kind>: <detail>`` line on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
import threading

from farmgate.gateway.config import load_config
from farmgate.gateway.pipeline import Gateway
from farmgate.interop import FORMATS, decode, encode
from farmgate.lexicon import identify_synonyms, load_lexicon
from farmgate.model import CanonicalRecord, FarmgateError
from farmgate.ontology import bundled_data_path, load_ontology
from farmgate.reasoning import ReasoningEngine, load_bayes, load_fuzzy, load_rules
from farmgate.simulate import load_scenario, run_scenario

logger = logging.getLogger(__name__)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except FarmgateError as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="farmgate", description=__doc__.splitlines()[0])
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser("sim", help="perception-layer simulator")
    sim_commands = sim.add_subparsers(dest="sim_command", required=True)
    sim_run = sim_commands.add_parser("run", help="replay a scenario, printing raw readings")
    sim_run.add_argument("--scenario", required=True)
    sim_run.add_argument("--seed", type=int, default=0)
    sim_run.add_argument("--rate", type=float, default=None,
                         help="wall-clock pacing multiplier (default: replay instantly)")
    sim_run.set_defaults(handler=cmd_sim_run)

    convert = commands.add_parser("convert", help="translate one payload between formats")
    convert.add_argument("--from", dest="source_format", required=True, choices=FORMATS)
    convert.add_argument("--to", dest="target_format", required=True, choices=FORMATS)
    convert.add_argument("--ontology", default=None, help="defaults to the bundled ontology")
    convert.set_defaults(handler=cmd_convert)

    syn = commands.add_parser("syn", help="synonym matrix for a word or sentence")
    syn.add_argument("text")
    syn.add_argument("--lexicon", default=None, help="defaults to the bundled lexicon")
    syn.set_defaults(handler=cmd_syn)

    reason = commands.add_parser("reason", help="run the reasoners over canonical records")
    reason.add_argument("--input", required=True, help="file of canonical wire lines")
    reason.add_argument("--rules", required=True)
    reason.add_argument("--fuzzy", required=True)
    reason.add_argument("--bayes", required=True)
    reason.set_defaults(handler=cmd_reason)

    gateway = commands.add_parser("gateway", help="run the full gateway service")
    gateway.add_argument("--config", required=True)
    gateway.set_defaults(handler=cmd_gateway)

    return parser


def cmd_sim_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)

    def sink(reading) -> None:
        print(json.dumps({
            "sensor_id": reading.sensor_id.render(),
            "voltage": reading.voltage,
            "adc_counts": reading.adc_counts,
            "timestamp": reading.timestamp,
        }))

    summary = run_scenario(scenario, sink, seed=args.seed, rate=args.rate)
    print(f"emitted={summary.emitted} dropped={summary.dropped}", file=sys.stderr)
    return 0


def cmd_convert(args: argparse.Namespace) -> int:
    ontology = load_ontology(args.ontology) if args.ontology else load_ontology(
        bundled_data_path("ontology.json")
    )
    payload = sys.stdin.buffer.read()
    record = decode(payload, args.source_format, ontology)
    sys.stdout.buffer.write(encode(record, args.target_format))
    sys.stdout.buffer.write(b"\n")
    return 0


def cmd_syn(args: argparse.Namespace) -> int:
    lexicon = load_lexicon(args.lexicon) if args.lexicon else load_lexicon(
        bundled_data_path("lexicon.json")
    )
    matrix = identify_synonyms(args.text, lexicon)
    for row in matrix.as_dict_rows():
        print(json.dumps(row))
    return 0


def cmd_reason(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8") as fh:
        records = [CanonicalRecord.from_wire(line) for line in fh if line.strip()]
    values: dict[str, float] = {}
    for record in records:  # later lines win: latest reading per quantity
        values[record.quantity] = record.value
    engine = ReasoningEngine(
        rules=load_rules(args.rules, _quantities_in(args.rules)),
        fuzzy_variables=load_fuzzy(args.fuzzy),
        bayes_net=load_bayes(args.bayes),
    )
    result = engine.evaluate(values)
    for recommendation in result.recommendations:
        print(json.dumps(recommendation.to_dict()))
    return 0


def _quantities_in(rules_path: str) -> set[str]:
    # The reason command has no ontology flag; accept the rule file's own quantities.
    with open(rules_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return {str(rule.get("quantity", "")) for rule in doc.get("rules", [])}


def cmd_gateway(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    gateway = Gateway(config).start()
    host, port = gateway.api_address
    logger.info("gateway ready on http://%s:%d (Ctrl-C to stop)", host, port)
    stop = threading.Event()

    def on_signal(_signum, _frame) -> None:
        stop.set()

    signal.signal(signal.SIGINT, on_signal)
    signal.signal(signal.SIGTERM, on_signal)
    try:
        while not stop.is_set():
            stop.wait(0.2)
    finally:
        gateway.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
