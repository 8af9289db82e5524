"""JSON file formats shared by the library and the CLI.

Complex numbers are stored as ``[re, im]`` pairs. Grids are indexed
``grid[m1][m2]`` (doubled) or ``grid[a1][a2]`` (Wigner).

    operator       {"d": int, "matrix": [[[re, im], ...], ...]}
    state vector   {"d": int, "vector": [[re, im], ...]}
    doubled grid   {"d": int, "grid": 2d x 2d}
    stencil        doubled grid + {"label": str, "projected": 2d x 2d (optional)}
    wigner grid    {"d": int, "grid": d x d}
    function map   {"d": int, "source": str, "target": str, "matrix": d^2 x d^2}
"""

from __future__ import annotations

import json

import numpy as np

from .qudit_algebra import DomainError, check_dimension
from .stencil_kit import Stencil
from .transport import FunctionMap


class FormatError(ValueError):
    """A JSON document does not follow the expected schema."""


def encode_complex_array(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def decode_complex_array(data, shape=None) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"malformed complex array: {exc}") from None
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise FormatError("complex entries must be [re, im] pairs")
    out = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None and out.shape != tuple(shape):
        raise FormatError(f"expected array of shape {tuple(shape)}, got {out.shape}")
    if not np.all(np.isfinite(out)):
        raise FormatError("array has non-finite entries")
    return out


def _dimension(doc: dict) -> int:
    if not isinstance(doc, dict) or "d" not in doc:
        raise FormatError("document must be an object with a 'd' field")
    try:
        return check_dimension(doc["d"])
    except DomainError as exc:
        raise FormatError(str(exc)) from None


def operator_to_json(O: np.ndarray) -> dict:
    O = np.asarray(O)
    return {"d": int(O.shape[0]), "matrix": encode_complex_array(O)}


def operator_from_json(doc: dict) -> np.ndarray:
    """Operator document, or a pure state vector turned into its normalised projector."""
    d = _dimension(doc)
    if "matrix" in doc:
        return decode_complex_array(doc["matrix"], (d, d))
    if "vector" in doc:
        psi = decode_complex_array(doc["vector"], (d,))
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise FormatError("state vector has zero norm")
        psi = psi / norm
        return np.outer(psi, psi.conj())
    raise FormatError("operator document needs a 'matrix' or 'vector' field")


def doubled_to_json(f: np.ndarray) -> dict:
    f = np.asarray(f)
    return {"d": int(f.shape[0] // 2), "grid": encode_complex_array(f)}


def doubled_from_json(doc: dict) -> np.ndarray:
    d = _dimension(doc)
    return decode_complex_array(doc.get("grid"), (2 * d, 2 * d))


def stencil_to_json(M: Stencil, include_projected: bool = True) -> dict:
    doc = doubled_to_json(M.raw)
    doc["label"] = M.label
    if include_projected:
        doc["projected"] = encode_complex_array(M.projected)
    return doc


def stencil_from_json(doc: dict) -> Stencil:
    raw = doubled_from_json(doc)
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise FormatError("stencil label must be a string")
    # the projection is always recomputed; a stored copy is informational only
    return Stencil(raw, label=label)


def wigner_to_json(W: np.ndarray) -> dict:
    W = np.asarray(W)
    return {"d": int(W.shape[0]), "grid": encode_complex_array(W)}


def wigner_from_json(doc: dict) -> np.ndarray:
    d = _dimension(doc)
    return decode_complex_array(doc.get("grid"), (d, d))


def function_map_to_json(E: FunctionMap) -> dict:
    return {"d": E.d, "source": E.source, "target": E.target,
            "matrix": encode_complex_array(E.matrix)}


def function_map_from_json(doc: dict) -> FunctionMap:
    d = _dimension(doc)
    matrix = decode_complex_array(doc.get("matrix"), (d * d, d * d))
    return FunctionMap(matrix, source=doc.get("source", ""), target=doc.get("target", ""))


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def save_json(doc: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
