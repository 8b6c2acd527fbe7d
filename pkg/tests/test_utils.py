import logging
from datetime import datetime
from pathlib import Path

import pandas as pd
import pytest

from k3calc.cyclic_sing import chain_config
from utils.helpers import (
    add_run_metadata,
    config_section,
    format_table,
    load_config,
    parse_assignments,
    parse_id_list,
    trace_enabled,
)
from utils.logger import CoverLogger, create_run_log_file, setup_logger
from utils.output_engine import ReportWriter


def test_config_section():
    config = {'logging': {'level': 'DEBUG'}, 'outputs': None}
    assert config_section(config, 'logging', 'level') == 'DEBUG'
    assert config_section(config, 'logging', 'missing', default=3) == 3
    assert config_section(config, 'outputs', 'summary_csv', default='x.csv') == 'x.csv'
    assert config_section(None, 'anything', default={}) == {}


def test_load_config(config_file, tmp_path):
    assert config_section(load_config(str(config_file)), 'enumeration', 'max_rank') == 8
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / 'absent.yaml'))


def test_default_config_file_loads(monkeypatch):
    monkeypatch.chdir(Path(__file__).resolve().parents[1])
    monkeypatch.delenv('K3CALC_CONFIG', raising=False)
    config = load_config()
    assert 'scenarios' in config


def test_trace_flag(monkeypatch):
    monkeypatch.setenv('K3CALC_TRACE', 'yes')
    assert trace_enabled()
    monkeypatch.setenv('K3CALC_TRACE', '0')
    assert not trace_enabled()


def test_parse_helpers():
    assert parse_id_list(' F.D1, F.D2 ,,') == ['F.D1', 'F.D2']
    assert parse_id_list(None) == []
    assert parse_assignments(['F1=delta(9)', 'M = split']) == {'F1': 'delta(9)', 'M': 'split'}
    with pytest.raises(ValueError):
        parse_assignments(['F1'])


def test_summary_helpers():
    df = pd.DataFrame({'scenario': ['a'], 'failed': [0]})
    stamped = add_run_metadata(df, datetime(2026, 1, 2, 3, 4, 5))
    assert stamped['run_ts'].iloc[0] == '2026-01-02T03:04:05'
    assert 'run_ts' not in df.columns
    assert format_table(pd.DataFrame()) == '(no rows)'


def test_report_writer(tmp_path):
    writer = ReportWriter({'outputs': {'upstairs_suffix': 'up'}}, str(tmp_path))
    json_path = writer.write_config('demo', chain_config([2, 2]), role='upstairs')
    dot_path = writer.write_config('demo', chain_config([2, 2]), fmt='dot')
    assert json_path.name == 'demo.up.json'
    assert dot_path.name == 'demo.downstairs.dot'
    assert writer.write_summary(pd.DataFrame()) is None
    assert writer.written == [json_path, dot_path]


def test_setup_logger_writes_file(tmp_path):
    log_file = tmp_path / 'logs' / 'run.log'
    log = setup_logger('k3calc.test_utils', level='DEBUG', log_file=str(log_file))
    log.debug('hello')
    for handler in log.handlers:
        handler.flush()
    assert 'hello' in log_file.read_text()
    assert create_run_log_file(str(tmp_path)).endswith('.log')


def test_setup_logger_uses_configured_formats(tmp_path):
    log_file = tmp_path / 'run.log'
    formats = {'file': 'RUN %(levelname)s %(message)s', 'file_level': 'WARNING', 'file_mode': 'w'}
    log = setup_logger('k3calc.test_formats', level='DEBUG', log_file=str(log_file), formats=formats)
    log.info('quiet')
    log.warning('loud')
    for handler in log.handlers:
        handler.flush()
    assert log_file.read_text().splitlines() == ['RUN WARNING loud']
    assert len(setup_logger('k3calc.test_formats').handlers) == 1
    with pytest.raises(ValueError):
        setup_logger('k3calc.test_formats', level='CHATTY')


def test_run_log_file_name():
    started = datetime(2026, 3, 4, 5, 6, 7)
    assert create_run_log_file('logs', started) == str(Path('logs') / 'k3calc_run_20260304_050607.log')


def test_cover_logger_flags(caplog):
    audit = CoverLogger(logging.getLogger('k3calc.test_audit'))
    audit.configure({'cover_logging': {'log_violations': False}})
    with caplog.at_level(logging.DEBUG, logger='k3calc.test_audit'):
        audit.log_violation('hidden')
        audit.log_k3_check(24, True)
    assert 'hidden' not in caplog.text
    assert 'K3 check PASS' in caplog.text
