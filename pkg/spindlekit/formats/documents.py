"""
Input documents (JSON, CSV, YAML) and the versioned JSON report document.

JSON input is an object:

    {"dim": 2, "points": [[0, 0], [2, 0]], "labels": ["a", "b"],
     "shape": {"centers": [[0, 0], [1, 0]], "radius": 1.0},
     "queries": [[0.5, 0.0]]}

CSV input carries points only, one per row under an ``x1,...,xn`` header.
"""

import csv
import io
import json
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import yaml

from ..errors import InputError
from ..geometry.core import PointSet, Tolerance


logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FORMATS = ('json', 'csv', 'yaml')

_HEADER = re.compile(r'^x(\d+)$')


@dataclass(frozen=True, eq=False)
class ShapeSpec:
    """Generators and common radius of an arc-bounded region."""
    centers: np.ndarray
    radius: float


@dataclass(frozen=True, eq=False)
class InputDocument:
    dim: int
    point_set: Optional[PointSet]
    shape: Optional[ShapeSpec] = None
    queries: Tuple[np.ndarray, ...] = ()
    source: str = '<stream>'

    @property
    def labels(self) -> Optional[Tuple[str, ...]]:
        return None if self.point_set is None else self.point_set.labels

    @property
    def duplicates(self) -> int:
        return 0 if self.point_set is None else self.point_set.duplicates_merged


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"expected a number, got {type(value).__name__} {value!r}", path=path)
    x = float(value)
    if not math.isfinite(x):
        raise InputError("coordinates must be finite", path=path)
    return x


def _coordinates(rows: Any, path: str, dim: Optional[int]) -> Tuple[List[List[float]], int]:
    if not isinstance(rows, list):
        raise InputError("expected a list of points", path=path)
    out: List[List[float]] = []
    for i, row in enumerate(rows):
        where = f"{path}[{i}]"
        if not isinstance(row, list):
            raise InputError("a point must be a list of coordinates", path=where)
        coords = [_number(v, f"{where}[{j}]") for j, v in enumerate(row)]
        if dim is None:
            dim = len(coords)
        if len(coords) != dim:
            raise InputError(f"expected {dim} coordinates, got {len(coords)}", path=where)
        out.append(coords)
    if dim is not None and dim < 2:
        raise InputError(f"points need at least 2 coordinates, got {dim}", path=path)
    return out, dim


def _from_object(data: Any, source: str) -> InputDocument:
    if not isinstance(data, dict):
        raise InputError("document must be an object", path=".")
    unknown = set(data) - {'dim', 'points', 'labels', 'shape', 'queries'}
    if unknown:
        logger.warning("ignoring unknown field(s): %s", ', '.join(sorted(unknown)))

    dim = data.get('dim')
    if dim is not None and (isinstance(dim, bool) or not isinstance(dim, int) or dim < 2):
        raise InputError(f"dim must be an integer >= 2, got {dim!r}", path=".dim")

    point_set = None
    if 'points' in data:
        rows, dim = _coordinates(data['points'], ".points", dim)
        if not rows:
            raise InputError("point list is empty", path=".points")
        labels = data.get('labels')
        if labels is not None and not isinstance(labels, list):
            raise InputError("labels must be a list", path=".labels")
        point_set = PointSet.from_points(rows, labels=labels)

    shape = None
    if 'shape' in data:
        shape = _shape(data['shape'], dim)
        dim = shape.centers.shape[1]
    if point_set is None and shape is None:
        raise InputError("document needs 'points' or 'shape'", path=".")

    queries: Tuple[np.ndarray, ...] = ()
    if 'queries' in data:
        rows, _ = _coordinates(data['queries'], ".queries", dim)
        queries = tuple(np.array(q) for q in rows)
    return InputDocument(dim, point_set, shape, queries, source)


def _shape(raw: Any, dim: Optional[int]) -> ShapeSpec:
    if not isinstance(raw, dict):
        raise InputError("shape must be an object", path=".shape")
    if 'centers' not in raw or 'radius' not in raw:
        raise InputError("shape needs 'centers' and 'radius'", path=".shape")
    rows, _ = _coordinates(raw['centers'], ".shape.centers", dim)
    if not rows:
        raise InputError("center list is empty", path=".shape.centers")
    radius = _number(raw['radius'], ".shape.radius")
    if not radius > 0:
        raise InputError(f"radius must be positive, got {radius}", path=".shape.radius")
    return ShapeSpec(np.array(rows), radius)


def _parse_json(text: str, source: str) -> InputDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e.msg}", line=e.lineno, column=e.colno) from None
    return _from_object(data, source)


def _parse_yaml(text: str, source: str) -> InputDocument:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        line = mark.line + 1 if mark is not None else None
        column = mark.column + 1 if mark is not None else None
        raise InputError(f"malformed YAML: {getattr(e, 'problem', e)}", line=line, column=column) from None
    return _from_object(data, source)


def _parse_csv(text: str, source: str) -> InputDocument:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise InputError("CSV input is empty", line=1, column=1)
    names = [h.strip() for h in header]
    expected = [f"x{j + 1}" for j in range(len(names))]
    if names != expected or len(names) < 2:
        raise InputError(f"CSV header must be {','.join(expected) if len(names) >= 2 else 'x1,x2,...'}",
                         line=1, column=1)

    rows: List[List[float]] = []
    for i, record in enumerate(reader):
        if not record or all(not cell.strip() for cell in record):
            continue
        where = f".points[{len(rows)}]"
        if len(record) != len(names):
            raise InputError(f"expected {len(names)} values, got {len(record)}", path=where,
                             line=i + 2, column=1)
        row = []
        for j, cell in enumerate(record):
            try:
                x = float(cell)
            except ValueError:
                raise InputError(f"not a number: {cell.strip()!r}", path=f"{where}[{j}]",
                                 line=i + 2, column=j + 1) from None
            if not math.isfinite(x):
                raise InputError("coordinates must be finite", path=f"{where}[{j}]", line=i + 2,
                                 column=j + 1)
            row.append(x)
        rows.append(row)
    if not rows:
        raise InputError("point list is empty", path=".points")
    return InputDocument(len(names), PointSet.from_points(rows), source=source)


def _sniff(text: str) -> str:
    stripped = text.lstrip()
    if stripped.startswith('{') or stripped.startswith('['):
        return 'json'
    first = stripped.splitlines()[0] if stripped else ''
    if first and all(_HEADER.match(h.strip()) for h in first.split(',')):
        return 'csv'
    return 'yaml'


def _format_for(path: Path) -> Optional[str]:
    suffix = path.suffix.lower()
    if suffix == '.csv':
        return 'csv'
    if suffix in ('.yaml', '.yml'):
        return 'yaml'
    if suffix == '.json':
        return 'json'
    return None


def parse_input(source: Union[str, Path, TextIO], fmt: Optional[str] = None) -> InputDocument:
    """Parse and validate a point-set or shape document.

    ``source`` is a path or an open text stream; the format comes from ``fmt``, then the
    file suffix, then the content.
    """
    if fmt is not None and fmt not in FORMATS:
        raise InputError(f"unknown input format '{fmt}'")
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        name = str(path)
        fmt = fmt or _format_for(path)
    else:
        text = source.read()
        name = getattr(source, 'name', '<stream>')
    fmt = fmt or _sniff(text)

    parser = {'json': _parse_json, 'csv': _parse_csv, 'yaml': _parse_yaml}[fmt]
    doc = parser(text, name)
    if doc.point_set is not None:
        logger.info("read %d point(s) in dimension %d from %s", len(doc.point_set), doc.dim, name)
    return doc


def to_plain(value: Any) -> Any:
    """JSON-ready copy: numpy to Python, enums to values, non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return x if math.isfinite(x) else None
    return value


def tolerance_block(tol: Tolerance) -> Dict[str, float]:
    return {'abs_eps': tol.abs_eps, 'rel_scale': tol.rel_scale, 'band': tol.band,
            'ang_eps': tol.ang_eps}


def build_report(command: str, seed: int, tol: Optional[Tolerance] = None,
                 doc: Optional[InputDocument] = None, reports: Sequence[Any] = (),
                 bundles: Sequence[Any] = (), results: Optional[Dict[str, Any]] = None,
                 timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    """Assemble the report document.

    Property reports and certificate bundles are given as objects with ``to_dict``; each
    bundle's residual rows move to the top-level ``residuals`` tables. ``timings`` is the
    only run-dependent block and is left out unless given.
    """
    bundle_dicts, tables = [], []
    for i, bundle in enumerate(bundles):
        entry = bundle.to_dict()
        tables.append({'bundle': i, 'property': entry['property'], 'rows': entry.pop('residuals')})
        bundle_dicts.append(entry)

    out: Dict[str, Any] = {
        'schema_version': SCHEMA_VERSION,
        'tool_version': _tool_version(),
        'command': command,
        'seed': seed,
        'tolerance': tolerance_block(tol) if tol is not None else None,
    }
    if doc is not None:
        out['input'] = {
            'source': doc.source,
            'dim': doc.dim,
            'points': 0 if doc.point_set is None else len(doc.point_set),
            'duplicates_merged': doc.duplicates,
        }
    out['reports'] = [r.to_dict() for r in reports]
    out['bundles'] = bundle_dicts
    out['residuals'] = tables
    if results:
        out['results'] = results
    if timings is not None:
        out['timings'] = timings
    return to_plain(out)


def _tool_version() -> str:
    from .. import __version__
    return __version__


def _float_text(x: float) -> str:
    text = '%.17g' % x
    # keep floats distinguishable from integers on the way back in
    if not any(c in text for c in '.en'):
        text += '.0'
    return text


def _encode(value: Any, depth: int) -> str:
    if isinstance(value, float):
        return _float_text(value)
    pad = '  ' * (depth + 1)
    close = '  ' * depth
    if isinstance(value, dict):
        if not value:
            return '{}'
        items = [f'{pad}{json.dumps(k)}: {_encode(v, depth + 1)}' for k, v in value.items()]
        return '{\n' + ',\n'.join(items) + '\n' + close + '}'
    if isinstance(value, list):
        if not value:
            return '[]'
        items = [pad + _encode(v, depth + 1) for v in value]
        return '[\n' + ',\n'.join(items) + '\n' + close + ']'
    return json.dumps(value)


def serialize_report(report: Dict[str, Any]) -> str:
    """Stable JSON text, two-space indented; floats carry 17 significant digits.

    Layout matches ``json.dumps(..., indent=2)``. Seventeen digits round-trip every double.
    """
    return _encode(to_plain(report), 0) + '\n'


def parse_report(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed report: {e.msg}", line=e.lineno, column=e.colno) from None
    if not isinstance(data, dict) or data.get('schema_version') != SCHEMA_VERSION:
        raise InputError(f"unsupported report schema (expected version {SCHEMA_VERSION})",
                         path=".schema_version")
    return data
