#!/usr/bin/env python3
"""
Report Generator
Renders measure reports and experiment results as JSON or CSV
"""

import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from .config import CSV_FLOAT_FORMAT
from .errors import ValidationError

logger = logging.getLogger(__name__)

FORMATS = ('json', 'csv')


@dataclass
class Report:
    """Full structured document plus the flat rows used for CSV"""

    document: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)

    @classmethod
    def from_payload(cls, payload) -> 'Report':
        """Accept a Report, anything with to_dict()/to_rows(), or a plain dict"""
        if isinstance(payload, Report):
            return payload
        if hasattr(payload, 'to_dict'):
            rows = payload.to_rows() if hasattr(payload, 'to_rows') else [payload.to_dict()]
            return cls(payload.to_dict(), rows)
        if isinstance(payload, dict):
            scalars = {k: v for k, v in payload.items() if not isinstance(v, (list, tuple, dict, np.ndarray))}
            return cls(payload, [scalars])
        raise TypeError(f"cannot build a report from {type(payload).__name__}")


def _to_builtin(value):
    """Recursively convert numpy scalars/arrays and tuples into JSON-native types"""
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_builtin(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    return value


class ReportGenerator:
    """Turns reports into deterministic text (sorted JSON keys, fixed CSV columns)"""

    def render(self, payload, fmt: str = 'json') -> str:
        """
        Render a payload

        Args:
            payload: Report, InfoReport, ExperimentResult or plain dict
            fmt: 'json' or 'csv'

        Returns:
            The rendered text, newline-terminated
        """
        if fmt not in FORMATS:
            raise ValidationError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
        report = Report.from_payload(payload)

        if fmt == 'json':
            return json.dumps(_to_builtin(report.document), indent=2, sort_keys=True) + '\n'

        rows = [_to_builtin(row) for row in report.rows]
        columns = list(dict.fromkeys(key for row in rows for key in row))
        frame = pd.DataFrame(rows, columns=columns)
        # '%.17g' is locale-independent and always uses '.' as decimal point
        return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')

    def generate_file(self, payload, filename: Union[str, Path], fmt: str = 'json') -> bool:
        """Write the rendered payload to ``filename``; returns False on I/O failure"""
        try:
            text = self.render(payload, fmt)
            Path(filename).write_text(text, encoding='utf-8')
            logger.info(f"Successfully generated {filename} ({fmt})")
            return True
        except OSError as e:
            logger.error(f"Failed to write report {filename}: {e}")
            return False


def save_report(report, path: Optional[Union[str, Path]], fmt: str = 'json') -> bool:
    """Write ``report`` to ``path``, or to standard output when ``path`` is None"""
    generator = ReportGenerator()
    if path is None:
        sys.stdout.write(generator.render(report, fmt))
        sys.stdout.flush()
        return True
    return generator.generate_file(report, path, fmt)
