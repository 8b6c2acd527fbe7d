"""
Logging Configuration for k3calc
================================
Provides audit trail logging for:
- Blow-ups, blow-downs and chain contractions
- Branch validation violations
- Split / non-split pullback decisions
- K3 certificates of canonical resolutions
"""

import logging
import sys
from pathlib import Path
from datetime import datetime
from typing import Dict, List, Optional


DEFAULT_FORMATS = {
    'console': '%(asctime)s %(levelname)-7s %(message)s',
    'console_datefmt': '%H:%M:%S',
    'file': '%(asctime)s %(levelname)-7s %(name)s.%(funcName)s:%(lineno)d %(message)s',
    'file_datefmt': '%Y-%m-%d %H:%M:%S',
    'file_level': 'DEBUG',
    'file_mode': 'a',
}


def _level(name: str) -> int:
    value = logging.getLevelName(str(name).upper())
    if not isinstance(value, int):
        raise ValueError(f"Unknown log level: {name}")
    return value


def setup_logger(name: str = __name__, level: str = 'INFO', log_file: Optional[str] = None,
                 stream=None, formats: Optional[Dict] = None) -> logging.Logger:
    """
    Attach a console handler and, if log_file is given, a file handler.

    Parameters
    ----------
    name : str
        Logger name ('k3calc', 'utils', ...)
    level : str
        Level of the logger and its console handler
    log_file : str, optional
        Run log path; parent directories are created
    stream : file object, optional
        Console stream (default sys.stdout; the CLI passes sys.stderr)
    formats : dict, optional
        The logging.format config block; keys missing from it fall back to
        DEFAULT_FORMATS

    Returns
    -------
    logging.Logger
        The configured logger, with any earlier handlers replaced
    """
    settings = {**DEFAULT_FORMATS, **(formats or {})}
    logger = logging.getLogger(name)
    logger.setLevel(_level(level))
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler(stream or sys.stdout)
    console.setLevel(_level(level))
    console.setFormatter(logging.Formatter(settings['console'], settings['console_datefmt']))
    logger.addHandler(console)

    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        run_log = logging.FileHandler(path, mode=settings['file_mode'], encoding='utf-8')
        run_log.setLevel(_level(settings['file_level']))
        run_log.setFormatter(logging.Formatter(settings['file'], settings['file_datefmt']))
        logger.addHandler(run_log)
        logger.debug(f"{name} run log: {path}")

    return logger


class BirationalLogger:
    """
    Specialized logger for the blow-up / blow-down audit trail.
    """

    def __init__(self, logger: logging.Logger, config: Dict = None):
        self.logger = logger
        self.config = (config or {}).get('birational_logging', {})

    def configure(self, config: Dict):
        """Replace the flag block from a logging config section."""
        self.config = config.get('birational_logging', {})

    def log_blow_up(self, point_id: str, new_curve_id: str, multiplicity: int, k_squared: int):
        """Log a single blow-up step."""
        if self.config.get('log_blow_up', True):
            self.logger.debug(
                f"Blow-up at {point_id}: exceptional {new_curve_id} "
                f"(mult {multiplicity}), K^2 now {k_squared}"
            )

    def log_blow_down(self, curve_id: str, merged_point: str, k_squared: int):
        """Log a single blow-down step."""
        if self.config.get('log_blow_down', True):
            self.logger.debug(
                f"Blow-down of {curve_id} into point {merged_point}, K^2 now {k_squared}"
            )

    def log_contraction(self, chain: List[str], weights: List[int], label: str):
        """Log the result of a chain contraction."""
        if self.config.get('log_contraction', True):
            self.logger.info(
                f"Contracted chain of {len(chain)} curves to weights {weights}: {label}"
            )


class CoverLogger:
    """
    Specialized logger for double-cover construction.
    """

    def __init__(self, logger: logging.Logger, config: Dict = None):
        self.logger = logger
        self.config = (config or {}).get('cover_logging', {})

    def configure(self, config: Dict):
        """Replace the flag block from a logging config section."""
        self.config = config.get('cover_logging', {})

    def log_violation(self, violation: str):
        """Log a branch-data violation."""
        if self.config.get('log_violations', True):
            self.logger.warning(f"Branch violation: {violation}")

    def log_split_decision(self, curve_id: str, role: str, source: str):
        """Log how a non-branch curve is pulled back."""
        if self.config.get('log_split_decisions', True):
            self.logger.debug(f"Curve {curve_id}: pulled back as {role} ({source})")

    def log_k3_check(self, euler_upstairs: int, passed: bool):
        """Log the K3 certificate outcome."""
        if self.config.get('log_k3_check', True):
            status = "PASS" if passed else "FAIL"
            self.logger.info(f"K3 check {status}: e(X) = {euler_upstairs}")


def create_run_log_file(base_dir: str = 'logs', started: Optional[datetime] = None) -> str:
    """Path of the run log for a command started at `started` (default: now)."""
    stamp = (started or datetime.now()).strftime('%Y%m%d_%H%M%S')
    return str(Path(base_dir) / f"k3calc_run_{stamp}.log")
