"""JSON matrix-set files: the single input/output format of the CLI.

A file holds either explicit matrices or an instance spec, never both::

    {"format": 1, "n": 2,
     "matrices": [
       {"name": "A", "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [2.0, 0.0]]}
     ],
     "tolerances": {"rank_rel": 1e-13}}

    {"format": 1,
     "instance_spec": {"kind": "triangulable-conjugated", "n": 5, "k": 3, "seed": 7}}

``entries`` lists the n*n matrix entries in row-major order, each as an
``[re, im]`` pair. ``tolerances`` may override any subset of ``rank_rel``,
``eig_cluster_rel`` and ``residual_rel``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InputError
from .oracle import InstanceKind, InstanceSpec, make_instance

__all__ = [
    "MatrixSet",
    "load_matrix_set",
    "save_matrix_set",
    "matrix_to_entries",
    "vector_to_entries",
    "complex_to_pair",
]

FORMAT_VERSION = 1
TOLERANCE_KEYS = ("rank_rel", "eig_cluster_rel", "residual_rel")


@dataclass(eq=False)
class MatrixSet:
    """Parsed matrix-set file with any generated matrices materialized."""

    n: int
    names: list[str]
    matrices: list[np.ndarray]
    tolerance_overrides: dict = field(default_factory=dict)
    instance_spec: InstanceSpec | None = None


def complex_to_pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def vector_to_entries(v) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(v).reshape(-1)]


def matrix_to_entries(a) -> list[list[float]]:
    """Row-major [re, im] pairs, the file representation of a matrix."""
    return vector_to_entries(np.asarray(a).reshape(-1))


def _require(condition, message):
    if not condition:
        raise InputError(message)


def _parse_entry(pair, where):
    _require(
        isinstance(pair, list) and len(pair) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair),
        f"{where}: each entry must be an [re, im] pair of numbers",
    )
    return complex(pair[0], pair[1])


def _parse_matrix(obj, n, index):
    where = f"matrices[{index}]"
    _require(isinstance(obj, dict), f"{where}: expected an object")
    name = obj.get("name")
    _require(isinstance(name, str) and name, f"{where}: missing or empty 'name'")
    entries = obj.get("entries")
    _require(isinstance(entries, list), f"{where}: missing 'entries' array")
    _require(
        len(entries) == n * n,
        f"{where} ('{name}'): expected {n * n} entries for a {n}x{n} matrix, got {len(entries)}",
    )
    flat = [_parse_entry(pair, f"{where} ('{name}')") for pair in entries]
    return name, np.array(flat, dtype=complex).reshape(n, n)


def _parse_tolerances(obj):
    if obj is None:
        return {}
    _require(isinstance(obj, dict), "tolerances: expected an object")
    unknown = set(obj) - set(TOLERANCE_KEYS)
    _require(not unknown, f"tolerances: unknown keys {sorted(unknown)}")
    overrides = {}
    for key, value in obj.items():
        _require(
            isinstance(value, (int, float)) and not isinstance(value, bool),
            f"tolerances.{key}: expected a number",
        )
        overrides[key] = float(value)
    return overrides


def _parse_instance_spec(obj):
    _require(isinstance(obj, dict), "instance_spec: expected an object")
    missing = {"kind", "n", "k", "seed"} - set(obj)
    _require(not missing, f"instance_spec: missing fields {sorted(missing)}")
    kind = obj["kind"]
    try:
        kind = InstanceKind(kind)
    except ValueError:
        choices = ", ".join(sorted(m.value for m in InstanceKind))
        raise InputError(f"instance_spec.kind: unknown kind {kind!r} (choices: {choices})")
    for key in ("n", "k", "seed"):
        _require(isinstance(obj[key], int) and not isinstance(obj[key], bool),
                 f"instance_spec.{key}: expected an integer")
    return InstanceSpec(n=obj["n"], k=obj["k"], kind=kind, seed=obj["seed"])


def load_matrix_set(path) -> MatrixSet:
    """Parse and validate a matrix-set file; instance specs are materialized."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    _require(isinstance(data, dict), f"{path}: top level must be an object")
    _require(data.get("format") == FORMAT_VERSION,
             f"{path}: missing or unsupported 'format' (expected {FORMAT_VERSION})")

    has_matrices = "matrices" in data
    has_spec = "instance_spec" in data
    _require(has_matrices != has_spec,
             f"{path}: exactly one of 'matrices' or 'instance_spec' must be present")
    overrides = _parse_tolerances(data.get("tolerances"))

    if has_spec:
        spec = _parse_instance_spec(data["instance_spec"])
        _require(data.get("n") in (None, spec.n),
                 f"{path}: top-level 'n' contradicts instance_spec.n")
        matrices = make_instance(spec)
        names = [f"A{i + 1}" for i in range(spec.k)]
        return MatrixSet(spec.n, names, matrices, overrides, spec)

    n = data.get("n")
    _require(isinstance(n, int) and not isinstance(n, bool) and n >= 1,
             f"{path}: 'n' must be a positive integer")
    raw = data["matrices"]
    _require(isinstance(raw, list) and raw, f"{path}: 'matrices' must be a non-empty array")
    names, matrices = [], []
    for i, obj in enumerate(raw):
        name, m = _parse_matrix(obj, n, i)
        _require(name not in names, f"matrices[{i}]: duplicate name '{name}'")
        names.append(name)
        matrices.append(m)
    return MatrixSet(n, names, matrices, overrides)


def save_matrix_set(path, names, matrices) -> None:
    """Write matrices to a format-1 file; floats round-trip exactly."""
    matrices = [np.asarray(m, dtype=complex) for m in matrices]
    if not matrices:
        raise InputError("cannot save an empty matrix set")
    n = matrices[0].shape[0]
    payload = {
        "format": FORMAT_VERSION,
        "n": n,
        "matrices": [
            {"name": name, "entries": matrix_to_entries(m)}
            for name, m in zip(names, matrices)
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=1)
        handle.write("\n")
