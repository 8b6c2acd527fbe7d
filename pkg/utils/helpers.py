"""
Helper Functions for k3calc
===========================
Contains reusable functions for:
- Config file discovery and loading (K3CALC_CONFIG override)
- Environment flags (K3CALC_TRACE) read through python-dotenv
- Comma-separated id lists from the command line
- Summary DataFrame utilities
"""

import logging
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd
import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = 'config/config.yaml'
_TRUE_VALUES = ('1', 'true', 'yes', 'on')


# ============================================================================
# Configuration
# ============================================================================

def resolve_config_path(config_path: Optional[str] = None) -> Path:
    """
    Pick the config file: explicit argument, then K3CALC_CONFIG, then the default.

    Parameters
    ----------
    config_path : str, optional
        Path given on the command line

    Returns
    -------
    Path
        Config file path (not checked for existence)
    """
    load_dotenv()
    if config_path:
        return Path(config_path)
    return Path(os.getenv('K3CALC_CONFIG', DEFAULT_CONFIG_PATH))


def load_config(config_path: Optional[str] = None) -> Dict:
    """
    Load configuration from YAML file.

    Returns
    -------
    dict
        Configuration dictionary (empty sections are returned as {})
    """
    config_file = resolve_config_path(config_path)
    if not config_file.exists():
        raise FileNotFoundError(f"Config file not found: {config_file}")

    with open(config_file, 'r') as f:
        config = yaml.safe_load(f) or {}

    logger.debug(f"Config loaded from {config_file}: sections {sorted(config)}")
    return config


def config_section(config: Optional[Dict], *keys: str, default: Any = None) -> Any:
    """Nested lookup that tolerates missing sections."""
    node: Any = config or {}
    for key in keys:
        if not isinstance(node, dict) or key not in node:
            return default
        node = node[key]
    return node


def trace_enabled() -> bool:
    """True when K3CALC_TRACE is set to a true value (environment or .env)."""
    load_dotenv()
    return os.getenv('K3CALC_TRACE', '0').strip().lower() in _TRUE_VALUES


# ============================================================================
# Command-line Values
# ============================================================================

def parse_id_list(text: Optional[str]) -> List[str]:
    """
    Split a comma-separated id list, dropping blanks.

    Parameters
    ----------
    text : str
        e.g. 'F.D1, F.D2'

    Returns
    -------
    List[str]
        Stripped ids in input order
    """
    if not text:
        return []
    return [part.strip() for part in text.split(',') if part.strip()]


def parse_assignments(items: Optional[List[str]]) -> Dict[str, str]:
    """Turn ['F1=delta(9)', 'M=non_split'] into a dict."""
    result = {}
    for item in items or []:
        if '=' not in item:
            raise ValueError(f"Expected name=value, got {item!r}")
        name, value = item.split('=', 1)
        result[name.strip()] = value.strip()
    return result


# ============================================================================
# DataFrame Utilities
# ============================================================================

def add_run_metadata(df: pd.DataFrame, run_ts: Optional[datetime] = None) -> pd.DataFrame:
    """
    Add a run timestamp column to a summary DataFrame.

    Parameters
    ----------
    df : pd.DataFrame
        Summary table
    run_ts : datetime, optional
        Run timestamp (defaults to current UTC time)

    Returns
    -------
    pd.DataFrame
        DataFrame with run_ts added
    """
    if run_ts is None:
        run_ts = datetime.now(timezone.utc)
    df = df.copy()
    df['run_ts'] = run_ts.isoformat()
    return df


def format_table(df: pd.DataFrame) -> str:
    if df.empty:
        return '(no rows)'
    return df.to_string(index=False)
