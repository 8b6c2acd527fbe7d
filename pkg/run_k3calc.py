"""
k3calc Command Line
===================
Main orchestration script for the curve-configuration and double-cover calculus.

Usage:
    python run_k3calc.py list
    python run_k3calc.py run "example2_8(1,9)" --json --dot output/
    python run_k3calc.py run lemma4_1 --mutation drop_blow_up
    python run_k3calc.py verify-paper
    python run_k3calc.py resolve "C_{40,19}"
    python run_k3calc.py fibers enumerate --euler 12 --max-rank 8
    python run_k3calc.py fibers prepare I9
    python run_k3calc.py cover --scenario lemma4_1
    python run_k3calc.py cover --input config.json --branch F1,F2 --annotate M=non_split

Arguments:
    --config: path to config.yaml (default: K3CALC_CONFIG or config/config.yaml)

Exit code is 0 iff every expectation of the command passes.
"""

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from k3calc import birational, double_cover
from k3calc.birational import BirationalTrace
from k3calc.codec import emit, parse_json
from k3calc.cyclic_sing import resolve
from k3calc.double_cover import BranchData, canonical_resolution
from k3calc.fibration import enumerate_configurations, enumerate_pairs, prepare_fiber
from k3calc.scenarios import MUTATIONS, build_registry, list_scenarios, run_scenario, verify_all
from utils.helpers import (
    add_run_metadata,
    config_section,
    format_table,
    load_config,
    parse_assignments,
    parse_id_list,
    trace_enabled,
)
from utils.logger import create_run_log_file, setup_logger
from utils.output_engine import ReportWriter

logger = logging.getLogger('k3calc.cli')


class K3CalcPipeline:
    """
    Command orchestrator: owns the config, the audit loggers and the output writer.
    """

    def __init__(self, config_path: Optional[str] = None, output_dir: Optional[str] = None):
        """
        Initialize the pipeline.

        Parameters
        ----------
        config_path : str, optional
            Path to configuration file
        output_dir : str, optional
            Overrides runtime.output_dir
        """
        self.config = load_config(config_path)
        self.writer = ReportWriter(self.config, output_dir)
        self.trace_enabled = trace_enabled()

        logging_config = config_section(self.config, 'logging', default={}) or {}
        birational.audit.configure(logging_config)
        double_cover.audit.configure(logging_config)

        logger.info("=" * 80)
        logger.info("k3calc")
        logger.info("=" * 80)
        logger.info(f"Step traces: {'on' if self.trace_enabled else 'off'}")

    def _banner(self, title: str):
        logger.info("")
        logger.info("=" * 80)
        logger.info(title)
        logger.info("=" * 80)

    def run(self, name: str, as_json: bool = False, dot_dir: Optional[str] = None,
            mutation: Optional[str] = None) -> bool:
        """
        Run one scenario and write its artifacts.

        Returns
        -------
        bool
            True iff every expectation passed
        """
        self._banner(f"SCENARIO {name}" + (f" - MUTATION {mutation}" if mutation else ""))
        trace = BirationalTrace() if self.trace_enabled else None
        registry = build_registry(self.config)
        report = run_scenario(name, mutation=mutation, registry=registry, trace=trace)

        for result in report.results:
            status = "ok  " if result.passed else "FAIL"
            logger.info(f"  {status} {result.name}: expected {result.expected!r}, got {result.actual!r}")
        if report.error:
            logger.error(f"  error: {report.error}")
        for note in report.notes:
            logger.info(f"  note: {note}")

        file_name = _file_name(name if mutation is None else f"{name}.{mutation}")
        self.writer.write_report(file_name, report.to_dict())
        for role in ('downstairs', 'upstairs'):
            if role in report.artifacts:
                self.writer.write_config(file_name, report.artifacts[role], role=role)
        if dot_dir:
            dot_writer = ReportWriter(self.config, dot_dir)
            for role, config in report.artifacts.items():
                dot_writer.write_config(file_name, config, role=role, fmt='dot')
        if trace is not None and len(trace):
            self.writer.write_trace(file_name, trace)
        if as_json:
            print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return report.passed

    def verify_paper(self) -> bool:
        """Run every registered scenario and write the summary table."""
        self._banner("VERIFY ALL SCENARIOS")
        reports, summary = verify_all(self.config)
        logger.info("\n" + format_table(summary))
        self.writer.write_summary(add_run_metadata(summary, datetime.now()))

        failed = [r.name for r in reports if not r.passed]
        if failed:
            logger.error(f"{len(failed)} scenario(s) failed: {failed}")
        else:
            logger.info(f"All {len(reports)} scenarios passed")
        return not failed

    def resolve(self, label: str) -> bool:
        print(json.dumps(resolve(label), indent=2, sort_keys=True))
        return True

    def fibers_enumerate(self, euler: Optional[int], max_rank: Optional[int]) -> bool:
        euler = euler if euler is not None else config_section(self.config, 'enumeration', 'euler_total', default=12)
        max_rank = max_rank if max_rank is not None else config_section(self.config, 'enumeration', 'max_rank', default=8)
        configurations = sorted(enumerate_configurations(euler, max_rank))
        pairs = enumerate_pairs(config_section(self.config, 'enumeration', 'max_pair_total', default=10))
        logger.info(f"{len(configurations)} fiber configurations, {len(pairs)} ramification pairs")
        print(json.dumps({
            'euler': euler,
            'max_rank': max_rank,
            'configurations': [list(c) for c in configurations],
            'pairs': [list(p) for p in pairs],
        }, indent=2, sort_keys=True))
        return True

    def fibers_prepare(self, label: str) -> bool:
        config, count = prepare_fiber(label)
        logger.info(f"Prepared {label} with {count} blow-ups")
        print(emit(config, 'json'), end='')
        return True

    def cover(self, scenario: Optional[str] = None, input_path: Optional[str] = None,
              branch: Optional[str] = None, fibers: Optional[List[str]] = None,
              cases: Optional[List[str]] = None, annotations: Optional[List[str]] = None) -> bool:
        """
        Canonical resolution of a scenario's branch data or of a config file.

        fibers are 'name=id1,id2', cases 'name=delta(9)', annotations 'id=split'.
        """
        self._banner("CANONICAL RESOLUTION")
        if scenario:
            registry = build_registry(self.config)
            if scenario not in registry:
                raise ValueError(f"Unknown scenario: {scenario}")
            plan = registry[scenario].builder(None)
            branch_data, fiber_cases, name = plan.branch, plan.cases, scenario
        elif input_path:
            config = parse_json(Path(input_path).read_text(encoding='utf-8'))
            fiber_map = {k: parse_id_list(v) for k, v in parse_assignments(fibers).items()}
            branch_data = BranchData.from_ids(config, parse_id_list(branch), fiber_map, parse_assignments(annotations))
            fiber_cases, name = parse_assignments(cases), Path(input_path).stem
        else:
            raise ValueError("cover needs --scenario or --input")

        report = canonical_resolution(branch_data, fiber_cases, strict=False)
        for violation in report.violations:
            logger.warning(f"  violation: {violation}")
        file_name = _file_name(name)
        if report.upstairs is not None:
            self.writer.write_config(file_name, report.upstairs, role='upstairs')
        self.writer.write_report(f"{file_name}.cover", report.to_dict())
        document = {'report': report.to_dict()}
        if report.upstairs is not None:
            document['upstairs'] = json.loads(emit(report.upstairs, 'json'))
        print(json.dumps(document, indent=2, sort_keys=True))
        return report.k3

    def list(self) -> bool:
        for name, description in list_scenarios(self.config):
            print(f"{name}\t{description}")
        return True


def _file_name(name: str) -> str:
    """Scenario names carry parentheses and commas; keep file names plain."""
    return name.replace('(', '_').replace(')', '').replace(',', '_')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Exact calculus for curve configurations and K3 double covers')
    parser.add_argument('--config', default=None, help='Path to config.yaml')
    parser.add_argument('--output-dir', default=None, help='Override runtime.output_dir')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='Run one scenario')
    run.add_argument('scenario')
    run.add_argument('--json', action='store_true', help='Print the report as JSON')
    run.add_argument('--dot', default=None, metavar='DIR', help='Also write DOT files into DIR')
    run.add_argument('--mutation', choices=sorted(MUTATIONS), default=None)

    commands.add_parser('verify-paper', help='Run every scenario')
    commands.add_parser('list', help='List scenarios')

    res = commands.add_parser('resolve', help='Resolution data of a cyclic quotient point C_{q,q1}')
    res.add_argument('label')

    fibers = commands.add_parser('fibers', help='Fiber tables')
    fiber_commands = fibers.add_subparsers(dest='fibers_command', required=True)
    enum = fiber_commands.add_parser('enumerate')
    enum.add_argument('--euler', type=int, default=None)
    enum.add_argument('--max-rank', type=int, default=None)
    prep = fiber_commands.add_parser('prepare')
    prep.add_argument('label')

    cover = commands.add_parser('cover', help='Canonical resolution of a double cover')
    cover.add_argument('--scenario', default=None)
    cover.add_argument('--input', default=None, help='Config JSON produced by emit')
    cover.add_argument('--branch', default=None, help='Comma-separated branch curve ids')
    cover.add_argument('--fiber', action='append', default=[], help='name=id1,id2,...')
    cover.add_argument('--case', action='append', default=[], help='fiber=delta(9)')
    cover.add_argument('--annotate', action='append', default=[], help='curve=split|non_split')
    return parser


def _setup_logging(config_path: Optional[str]):
    try:
        config = load_config(config_path)
    except FileNotFoundError:
        config = {}
    level = config_section(config, 'logging', 'level', default='INFO')
    log_file = None
    if config_section(config, 'logging', 'log_to_file', default=False):
        log_file = create_run_log_file(config_section(config, 'runtime', 'log_dir', default='logs'))
    formats = config_section(config, 'logging', 'format', default={})
    for name in ('k3calc', 'utils'):
        setup_logger(name, level=level, log_file=log_file, stream=sys.stderr, formats=formats)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Returns
    -------
    int
        0 iff the command succeeded and every expectation passed
    """
    args = build_parser().parse_args(argv)
    _setup_logging(args.config)
    start_time = datetime.now()

    try:
        pipeline = K3CalcPipeline(args.config, args.output_dir)
        if args.command == 'run':
            success = pipeline.run(args.scenario, args.json, args.dot, args.mutation)
        elif args.command == 'verify-paper':
            success = pipeline.verify_paper()
        elif args.command == 'list':
            success = pipeline.list()
        elif args.command == 'resolve':
            success = pipeline.resolve(args.label)
        elif args.command == 'fibers':
            if args.fibers_command == 'enumerate':
                success = pipeline.fibers_enumerate(args.euler, args.max_rank)
            else:
                success = pipeline.fibers_prepare(args.label)
        else:
            success = pipeline.cover(args.scenario, args.input, args.branch, args.fiber, args.case, args.annotate)
    except (ValueError, FileNotFoundError) as e:
        logger.error("=" * 80)
        logger.error(f"COMMAND FAILED: {e}")
        logger.error("=" * 80)
        return 1

    duration = datetime.now() - start_time
    logger.info(f"{args.command} {'succeeded' if success else 'FAILED'} in {duration}")
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())
