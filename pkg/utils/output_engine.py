"""
Output Engine
=============
Writes k3calc artifacts into the configured output directory.

Features:
- Config artifacts as JSON or DOT (through k3calc.codec)
- Birational step traces as JSON
- Scenario reports as JSON
- verify-paper summary table as CSV through pandas
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from k3calc.birational import BirationalTrace
from k3calc.codec import emit, trace_to_json
from k3calc.dualgraph import Config
from utils.helpers import config_section

logger = logging.getLogger(__name__)


class ReportWriter:
    """
    Manages the artifact files of one run.
    """

    def __init__(self, config: Optional[Dict] = None, output_dir: Optional[str] = None):
        """
        Initialize the writer.

        Parameters
        ----------
        config : dict, optional
            Configuration dictionary (runtime.output_dir, outputs.*)
        output_dir : str, optional
            Overrides runtime.output_dir
        """
        self.config = config or {}
        self.output_dir = Path(output_dir or config_section(self.config, 'runtime', 'output_dir', default='output'))
        self.outputs = config_section(self.config, 'outputs', default={}) or {}
        self.written: List[Path] = []

        logger.debug(f"ReportWriter initialized for {self.output_dir}")

    def _path(self, file_name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / file_name

    def _write(self, file_name: str, text: str) -> Path:
        path = self._path(file_name)
        path.write_text(text, encoding='utf-8')
        self.written.append(path)
        logger.info(f"Wrote {path}")
        return path

    def write_config(self, name: str, config: Config, role: str = 'downstairs', fmt: str = 'json') -> Path:
        """
        Write one configuration as <name>.<role>.<fmt>.

        Parameters
        ----------
        name : str
            Scenario or command name
        config : Config
            Configuration to serialize
        role : str
            'downstairs' or 'upstairs' (suffixes come from outputs.*_suffix)
        fmt : str
            'json' or 'dot'

        Returns
        -------
        Path
            Written file
        """
        suffix = self.outputs.get(f"{role}_suffix", role)
        return self._write(f"{name}.{suffix}.{fmt}", emit(config, fmt))

    def write_trace(self, name: str, trace: BirationalTrace) -> Path:
        suffix = self.outputs.get('trace_suffix', 'trace')
        return self._write(f"{name}.{suffix}.json", trace_to_json(trace))

    def write_report(self, name: str, report: Dict) -> Path:
        return self._write(f"{name}.report.json", json.dumps(report, indent=2, sort_keys=True) + '\n')

    def write_summary(self, summary: pd.DataFrame) -> Optional[Path]:
        """
        Write the verify-paper summary table as CSV.

        Returns
        -------
        Path or None
            Written file, None when the table is empty
        """
        if summary.empty:
            logger.warning("Summary table is empty, nothing to write")
            return None
        path = self._path(self.outputs.get('summary_csv', 'verify_summary.csv'))
        summary.to_csv(path, index=False)
        self.written.append(path)
        logger.info(f"Wrote {len(summary)} summary rows to {path}")
        return path
