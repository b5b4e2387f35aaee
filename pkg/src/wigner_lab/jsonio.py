"""JSON serialization for states and matrices.

Complex numbers are ``[re, im]`` pairs.  Floats round-trip losslessly
(shortest decimal form that recovers the exact double, never more than 17
significant digits).  All file I/O is UTF-8.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import SquareUnitary, StateVector


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _from_pair(item) -> complex:
    re, im = item
    return complex(float(re), float(im))


def state_to_dict(v: StateVector) -> dict:
    return {
        "num_qubits": v.num_qubits,
        "amplitudes": [_pair(a) for a in v.amplitudes],
    }


def state_from_dict(data: dict) -> StateVector:
    state = StateVector([_from_pair(a) for a in data["amplitudes"]])
    n = data.get("num_qubits")
    if n is not None and int(n) != state.num_qubits:
        raise ValueError(f"num_qubits {n} does not match {len(data['amplitudes'])} amplitudes")
    return state


def vector_from_dict(data: dict) -> np.ndarray:
    """Raw complex vector, no normalization check (for synthesis inputs)."""
    return np.array([_from_pair(a) for a in data["amplitudes"]], dtype=np.complex128)


def matrix_to_dict(u: SquareUnitary) -> dict:
    return {
        "dim": u.dim,
        "entries": [[_pair(z) for z in row] for row in u.matrix],
    }


def matrix_from_dict(data: dict) -> SquareUnitary:
    entries = [[_from_pair(z) for z in row] for row in data["entries"]]
    u = SquareUnitary(entries)
    dim = data.get("dim")
    if dim is not None and int(dim) != u.dim:
        raise ValueError(f"dim {dim} does not match a {u.dim}x{u.dim} entry grid")
    return u


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def save_state(path: str | Path, v: StateVector) -> None:
    Path(path).write_text(dumps(state_to_dict(v)), encoding="utf-8")


def load_state(path: str | Path) -> StateVector:
    return state_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def save_matrix(path: str | Path, u: SquareUnitary) -> None:
    Path(path).write_text(dumps(matrix_to_dict(u)), encoding="utf-8")


def load_matrix(path: str | Path) -> SquareUnitary:
    return matrix_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
