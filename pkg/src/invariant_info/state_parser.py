#!/usr/bin/env python3
"""
Density Matrix JSON Parser
Reads and writes the {dim, re, im} state document used by the CLI

Schema::

    {
      "dim": 2,
      "re": [[0.5, 0.0], [0.0, 0.5]],   # d x d, row-major
      "im": [[0.0, 0.0], [0.0, 0.0]]    # d x d, row-major
    }

Bases and POVMs are exported with the same re/im encoding per vector/matrix.
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from .errors import SchemaError, ValidationError
from .measurement import MubSet, Povm, ProjectiveMeasurement
from .state import DensityMatrix

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ('dim', 're', 'im')


def _real_rows(value, field: str, dim: int) -> List[List[float]]:
    if not isinstance(value, list) or len(value) != dim:
        found = len(value) if isinstance(value, list) else type(value).__name__
        raise SchemaError(field, f"expected {dim} rows, got {found}")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            raise SchemaError(f"{field}[{i}]", f"expected a row of {dim} numbers")
        values = []
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise SchemaError(f"{field}[{i}][{j}]", f"expected a finite number, got {entry!r}")
            try:
                value = float(entry)
            except OverflowError:
                value = math.inf
            if not math.isfinite(value):
                raise SchemaError(f"{field}[{i}][{j}]", "expected a finite number, got an out-of-range value")
            values.append(value)
        rows.append(values)
    return rows


def _complex_to_document(m: np.ndarray) -> Dict[str, List]:
    return {'re': np.real(m).tolist(), 'im': np.imag(m).tolist()}


class DensityMatrixParser:
    """Parser for density-matrix JSON documents"""

    def parse_document(self, document: Dict) -> DensityMatrix:
        """
        Build a validated DensityMatrix from a decoded JSON object

        Args:
            document: Mapping with ``dim``, ``re`` and ``im``

        Returns:
            DensityMatrix

        Raises:
            SchemaError: missing field or shape mismatch (names the field)
            ValidationError: the matrix violates a density-matrix invariant
        """
        return DensityMatrix(self.parse_matrix(document))

    def parse_matrix(self, document: Dict) -> np.ndarray:
        """Schema checks only; returns the raw complex matrix without state validation"""
        if not isinstance(document, dict):
            raise SchemaError('<root>', f"expected a JSON object, got {type(document).__name__}")
        for name in REQUIRED_FIELDS:
            if name not in document:
                raise SchemaError(name, "missing required field")
        unknown = sorted(set(document) - set(REQUIRED_FIELDS))
        if unknown:
            raise SchemaError(unknown[0], "unexpected field")

        dim = document['dim']
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise SchemaError('dim', f"expected a positive integer, got {dim!r}")

        re = _real_rows(document['re'], 're', dim)
        im = _real_rows(document['im'], 'im', dim)
        return np.array(re) + 1j * np.array(im)

    def read_document(self, file_path: Union[str, Path]) -> Dict:
        """Decode the JSON file without interpreting it"""
        file_path = Path(file_path)
        if not file_path.exists():
            logger.error(f"State file not found: {file_path}")
            raise FileNotFoundError(f"state file not found: {file_path}")

        logger.info(f"Parsing density matrix file: {file_path}")
        try:
            return json.loads(file_path.read_text(encoding='utf-8'))
        except UnicodeDecodeError as e:
            raise SchemaError('<root>', f"not UTF-8 text (invalid byte at offset {e.start})") from e
        except OSError as e:
            logger.error(f"Cannot read state file {file_path}: {e.strerror}")
            raise SchemaError('<root>', f"cannot read {file_path}: {e.strerror}") from e
        except json.JSONDecodeError as e:
            raise SchemaError('<root>', f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
        except ValueError as e:
            raise SchemaError('<root>', f"unreadable JSON: {e}") from e

    def parse_file(self, file_path: Union[str, Path]) -> DensityMatrix:
        """
        Load a density matrix from a JSON file

        Raises:
            FileNotFoundError: the file does not exist
            SchemaError: the file cannot be read, is not UTF-8 JSON or violates the schema
            ValidationError: the matrix is not a valid state
        """
        rho = self.parse_document(self.read_document(file_path))
        logger.debug(f"Loaded {rho.dim}x{rho.dim} density matrix from {Path(file_path).name}")
        return rho


def load_density(path: Union[str, Path]) -> DensityMatrix:
    """Convenience wrapper around ``DensityMatrixParser().parse_file``"""
    return DensityMatrixParser().parse_file(path)


def density_to_document(rho: DensityMatrix) -> Dict:
    return {'dim': rho.dim, **_complex_to_document(rho.matrix)}


def save_density(rho: DensityMatrix, path: Union[str, Path]) -> bool:
    """Write ``rho`` in the state schema; floats keep full round-trip precision"""
    try:
        Path(path).write_text(json.dumps(density_to_document(rho), indent=2) + '\n', encoding='utf-8')
        logger.info(f"Saved density matrix to {path}")
        return True
    except OSError as e:
        logger.error(f"Failed to save density matrix: {e}")
        return False


def measurement_to_document(m: ProjectiveMeasurement) -> Dict:
    return {
        'label': m.label,
        'dim': m.dim,
        'outcomes': [
            {'label': label, **_complex_to_document(vector)}
            for label, vector in zip(m.outcome_labels, m.vectors())
        ],
    }


def mubs_to_document(mubs: MubSet) -> Dict:
    return {'dim': mubs.dim, 'bases': [measurement_to_document(b) for b in mubs]}


def povm_to_document(povm: Povm) -> Dict:
    return {
        'dim': povm.dim,
        'elements': [
            {'label': label, **_complex_to_document(element)}
            for label, element in zip(povm.labels, povm.elements)
        ],
    }


def check_dim(rho: DensityMatrix, expected: Union[int, None]) -> DensityMatrix:
    """Reject a state whose dimension disagrees with an explicit --dim"""
    if expected is not None and rho.dim != expected:
        raise ValidationError(f"dimension mismatch: file has dim {rho.dim}, --dim is {expected}")
    return rho
