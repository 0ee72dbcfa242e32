"""
Berlab Storage

File formats: kernel space and operator spec files (JSON with complex
numbers as [re, im] pairs), shell CSV export and report JSON.
"""

import csv
import json
import logging
import os
from typing import Any, List, Sequence

import numpy as np
from pydantic import BaseModel

from src.core.berezin import ShellPoint
from src.core.kernel_space import (KernelSpace, build_bergman, build_fock, build_from_gram,
                                   build_szego, orthonormal_space)
from src.core.operator import Operator
from src.errors import SpecFileError

logger = logging.getLogger(__name__)

SHELL_COLUMNS = ('label_re', 'label_im', 'symbol_re', 'symbol_im', 'image_norm_sq')

_POINT_BUILDERS = {
    'szego': build_szego,
    'bergman': build_bergman,
    'fock': build_fock,
}


def _read_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise SpecFileError(f"cannot read {path}: {e}") from e


def _complex(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise SpecFileError(f"{where}: expected a number or an [re, im] pair, got {value!r}")


def _complex_matrix(rows: Any, where: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SpecFileError(f"{where}: expected a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SpecFileError(f"{where}: rows have different lengths")
    return np.array([[_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)]
                     for i, row in enumerate(rows)], dtype=complex)


def _pairs(values: np.ndarray) -> List:
    if values.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in values]
    return [_pairs(row) for row in values]


def parse_space(spec: Any, where: str = 'space') -> KernelSpace:
    """
    Build a kernel space from a parsed spec document.

    Accepted kinds: szego, bergman and fock (with "points"), gram (with
    "gram" and optional "points" as labels) and orthonormal (with "dim").
    """
    if not isinstance(spec, dict) or 'kind' not in spec:
        raise SpecFileError(f"{where}: expected an object with a 'kind' field")
    kind = spec['kind']
    if kind in _POINT_BUILDERS:
        points = spec.get('points')
        if not isinstance(points, list):
            raise SpecFileError(f"{where}: kind {kind} needs a 'points' list")
        return _POINT_BUILDERS[kind]([_complex(p, f"{where}.points") for p in points])
    if kind == 'gram':
        gram = _complex_matrix(spec.get('gram'), f"{where}.gram")
        labels = spec.get('points')
        if labels is not None:
            labels = [_complex(p, f"{where}.points") for p in labels]
        return build_from_gram(gram, labels)
    if kind == 'orthonormal':
        dim = spec.get('dim')
        if not isinstance(dim, int):
            raise SpecFileError(f"{where}: kind orthonormal needs an integer 'dim'")
        return orthonormal_space(dim)
    raise SpecFileError(f"{where}: unknown kind {kind!r}")


def parse_operator(spec: Any, where: str = 'operator') -> Operator:
    """Operator from {"entries": rows}, optionally with "dim", or a bare list of rows."""
    rows = spec.get('entries') if isinstance(spec, dict) else spec
    entries = _complex_matrix(rows, where)
    if isinstance(spec, dict) and spec.get('dim') is not None:
        dim = spec['dim']
        if isinstance(dim, bool) or not isinstance(dim, int) or entries.shape != (dim, dim):
            raise SpecFileError(f"{where}: dim {dim!r} does not match entries of shape {entries.shape}")
    return Operator(entries)


def load_space(path: str) -> KernelSpace:
    space = parse_space(_read_json(path), where=path)
    logger.info(f"Loaded {space.kind} space from {path}: n={space.dim}, m={space.size}")
    return space


def load_operator(path: str) -> Operator:
    operator = parse_operator(_read_json(path), where=path)
    logger.info(f"Loaded operator from {path}: dim={operator.dim}")
    return operator


def space_spec(space: KernelSpace) -> dict:
    """Spec document that rebuilds ``space`` through the gram kind."""
    gram = space.gram if space.gram is not None else space.induced_gram()
    return {
        'kind': 'gram',
        'points': _pairs(np.asarray(space.points, dtype=complex)),
        'gram': _pairs(np.asarray(gram)),
    }


def _write_text(path: str, text: str):
    """Write text, creating parent directories; OS failures become SpecFileError."""
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    except OSError as e:
        raise SpecFileError(f"cannot write {path}: {e}") from e


def operator_spec(operator: Operator) -> dict:
    return {'entries': _pairs(operator.entries)}


def write_json(path: str, document: Any):
    _write_text(path, json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + '\n')


def report_json(report: BaseModel) -> str:
    """Canonical JSON for a report: sorted keys, 2-space indent, trailing newline."""
    document = report.model_dump(mode='json')
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def write_report(path: str, report: BaseModel):
    _write_text(path, report_json(report))
    logger.info(f"Wrote report to {path}")


def write_shell_csv(path: str, shell: Sequence[ShellPoint]):
    """Export shell points with columns label_re, label_im, symbol_re, symbol_im, image_norm_sq."""
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(SHELL_COLUMNS)
            for point in shell:
                writer.writerow([repr(point.label.real), repr(point.label.imag),
                                 repr(point.symbol.real), repr(point.symbol.imag),
                                 repr(point.image_norm_sq)])
    except OSError as e:
        raise SpecFileError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(shell)} shell points to {path}")


def read_shell_csv(path: str) -> List[ShellPoint]:
    try:
        with open(path, 'r', encoding='utf-8', newline='') as f:
            rows = list(csv.DictReader(f))
    except OSError as e:
        raise SpecFileError(f"cannot read {path}: {e}") from e
    try:
        return [ShellPoint(complex(float(r['label_re']), float(r['label_im'])),
                           complex(float(r['symbol_re']), float(r['symbol_im'])),
                           float(r['image_norm_sq'])) for r in rows]
    except (KeyError, ValueError) as e:
        raise SpecFileError(f"{path}: malformed shell row: {e}") from e


def write_failure_specs(directory: str, report) -> List[str]:
    """
    Write space and operator spec files for every failure of a suite report,
    ready for ``berlab eval``. Returns the written paths.
    """
    written = []
    for failure in report.failures:
        origin = failure.provenance
        if not origin.operator:
            continue
        stem = os.path.join(directory, f"{failure.bound_id}-trial{failure.trial}")
        gram = origin.gram
        if gram is None:
            kernels = np.array([[complex(*z) for z in row] for row in origin.kernels])
            gram = _pairs(kernels.conj().T @ kernels)
        write_json(f"{stem}-space.json", {'kind': 'gram', 'points': origin.labels, 'gram': gram})
        write_json(f"{stem}-op.json", {'entries': origin.operator})
        written.extend([f"{stem}-space.json", f"{stem}-op.json"])
        if origin.second_operator is not None:
            write_json(f"{stem}-second.json", {'entries': origin.second_operator})
            written.append(f"{stem}-second.json")
    logger.info(f"Wrote {len(written)} failure spec files to {directory}")
    return written
