"""Published categorization-decision datasets and the JSON record format.

Each record file holds one JSON object::

    {"name": "...", "face_type": "narrow", "p_g": 0.17, "p_a_given_g": 0.41,
     "p_b": 0.83, "p_a_given_b": 0.63, "p_t": 0.59, "p_a": 0.69}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from nqdecision.errors import DatasetNotFoundError, DatasetParseError, ValidationError
from nqdecision.fit import ExperimentRecord
from nqdecision.model import OBSERVABLES

# (P(G), P(A|G), P(B), P(A|B), P_t, P(A)) exactly as published, two decimals.
_TABLE = {
    "busemeyer2009": {
        "wide": (0.84, 0.35, 0.16, 0.52, 0.37, 0.39),
        "narrow": (0.17, 0.41, 0.83, 0.63, 0.59, 0.69),
    },
    "wang-exp1": {
        "wide": (0.78, 0.39, 0.22, 0.52, 0.42, 0.42),
        "narrow": (0.21, 0.41, 0.79, 0.58, 0.54, 0.59),
    },
    "wang-exp2": {
        "wide": (0.78, 0.33, 0.22, 0.53, 0.37, 0.37),
        "narrow": (0.24, 0.37, 0.76, 0.61, 0.55, 0.60),
    },
    "wang-exp3a": {
        "wide": (0.77, 0.34, 0.23, 0.58, 0.40, 0.39),
        "narrow": (0.24, 0.33, 0.76, 0.66, 0.58, 0.62),
    },
    "wang-exp3b": {
        "wide": (0.77, 0.23, 0.23, 0.69, 0.34, 0.33),
        "narrow": (0.25, 0.26, 0.75, 0.75, 0.63, 0.64),
    },
    "average": {
        "wide": (0.79, 0.33, 0.21, 0.57, 0.38, 0.38),
        "narrow": (0.22, 0.36, 0.78, 0.65, 0.58, 0.63),
    },
}

# Recorded for provenance only; no computation uses them.
_METADATA = {
    "busemeyer2009": {
        "source": "Busemeyer et al. 2009",
        "cd_sample_size": 51 * 26,
        "d_sample_size": 17 * 26,
    },
    "wang-exp1": {"source": "Wang and Busemeyer 2016, experiment 1", "sample_size": 721},
    "wang-exp2": {"source": "Wang and Busemeyer 2016, experiment 2 (C-D condition)"},
    "wang-exp3a": {"source": "Wang and Busemeyer 2016, experiment 3(a), lower reward"},
    "wang-exp3b": {"source": "Wang and Busemeyer 2016, experiment 3(b), higher reward"},
    "average": {"source": "average over the five experiments"},
}

DATASET_ORDER = tuple(_TABLE)


def catalog() -> dict[str, ExperimentRecord]:
    """All embedded records keyed by ``<dataset>-<face type>``."""
    out = {}
    for base, rows in _TABLE.items():
        for face in ("narrow", "wide"):
            name = f"{base}-{face}"
            out[name] = ExperimentRecord(name, face, rows[face], dict(_METADATA[base]))
    return out


def narrow_records() -> list[ExperimentRecord]:
    cat = catalog()
    return [cat[f"{base}-narrow"] for base in DATASET_ORDER]


def record_from_mapping(obj: object, *, where: str = "<record>") -> ExperimentRecord:
    if not isinstance(obj, dict):
        raise DatasetParseError(f"{where}: expected a JSON object, got {type(obj).__name__}")
    missing = [key for key in ("name", "face_type", *OBSERVABLES) if key not in obj]
    if missing:
        raise DatasetParseError(f"{where}: missing field(s) {', '.join(missing)}")
    values = []
    for key in OBSERVABLES:
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DatasetParseError(f"{where}: field {key!r} must be a number, got {value!r}")
        value = float(value)
        if not (math.isfinite(value) and 0.0 <= value <= 1.0):
            raise ValidationError(f"{where}: field {key!r} = {value!r} is outside [0, 1]")
        values.append(value)
    face = obj["face_type"]
    if face not in ("narrow", "wide"):
        raise ValidationError(f"{where}: field 'face_type' must be 'narrow' or 'wide', got {face!r}")
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DatasetParseError(f"{where}: field 'metadata' must be an object")
    return ExperimentRecord(str(obj["name"]), face, tuple(values), metadata)


def load_dataset(source: str | Path) -> ExperimentRecord:
    """Resolve a catalog name or read a JSON record file."""
    cat = catalog()
    key = str(source)
    if key in cat:
        return cat[key]
    path = Path(source)
    if not path.is_file():
        raise DatasetNotFoundError(f"unknown dataset {key!r} (not a catalog name or a file)")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetParseError(f"{path}: cannot read file: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return record_from_mapping(obj, where=str(path))


def dump_record(record: ExperimentRecord, path: str | Path) -> None:
    Path(path).write_text(json.dumps(record.as_dict(), indent=2) + "\n", encoding="utf-8")
