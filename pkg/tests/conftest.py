"""Shared fixtures for the k3calc test suite."""

from typing import List

import pytest
import yaml

from k3calc.dualgraph import Config, ConfigBuilder, InvariantLedger
from k3calc.scenarios import build_registry, verify_all


def tree_config(arms: List[int]) -> Config:
    """
    (-2)-curves: a center with arms of the given lengths.

    [a] gives A_{a+1}; [1, 1, m] gives D_{m+3}; [1, 2, 2/3/4] gives E6/E7/E8.
    """
    builder = ConfigBuilder(InvariantLedger.rational(0))
    builder.add_curve('R0', -2)
    index = 0
    for length in arms:
        previous = 'R0'
        for _ in range(length):
            index += 1
            curve_id = f"R{index}"
            builder.add_curve(curve_id, -2)
            builder.meet(previous, curve_id)
            previous = curve_id
    return builder.build()


def ade_config(kind: str) -> Config:
    """Reference configuration for 'A<n>', 'D<n>' (n >= 4) or 'E6'..'E8'."""
    family, size = kind[0], int(kind[1:])
    if family == 'A':
        return tree_config([size - 1])
    if family == 'D':
        return tree_config([1, 1, size - 3])
    if family == 'E':
        return tree_config([1, 2, size - 4])
    raise ValueError(f"Unknown ADE kind {kind}")


@pytest.fixture
def rational_ledger():
    return InvariantLedger.rational(0)


@pytest.fixture
def two_lines():
    """Two lines of the plane meeting transversally at q."""
    builder = ConfigBuilder(InvariantLedger.rational(9))
    builder.add_curve('L1', 1).add_curve('L2', 1)
    builder.meet('L1', 'L2', point_id='q')
    return builder.build()


@pytest.fixture(scope='session')
def registry():
    return build_registry()


@pytest.fixture(scope='session')
def verified():
    """verify_all() once per session: (reports by name, summary table)."""
    reports, summary = verify_all()
    return {r.name: r for r in reports}, summary


@pytest.fixture
def config_file(tmp_path):
    """Config file with file logging off and artifacts under tmp_path."""
    document = {
        'runtime': {'output_dir': str(tmp_path / 'output'), 'log_dir': str(tmp_path / 'logs')},
        'logging': {
            'level': 'WARNING',
            'log_to_file': False,
            'cover_logging': {'log_split_decisions': False},
        },
        'enumeration': {'euler_total': 12, 'max_rank': 8, 'max_pair_total': 10},
        'outputs': {'summary_csv': 'verify_summary.csv'},
    }
    path = tmp_path / 'config.yaml'
    path.write_text(yaml.safe_dump(document), encoding='utf-8')
    return path
