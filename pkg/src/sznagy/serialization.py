"""JSON encodings for channels, unitaries and tomography records.

Every matrix is stored as a flat row-major list of ``[re, im]`` pairs next
to its dimension. Python's float repr is shortest-round-trip, so values
survive a write/read cycle bit for bit.
"""

import json
from pathlib import Path

import numpy as np

from .channels import ChiMatrix, KrausSet, Superoperator
from .config import DEFAULT_TOLERANCES as TOL
from .dilation import DilationUnitary
from .errors import ValidationError
from .tomography import TomographyRecord


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in m.reshape(-1)]


def decode_matrix(data, dim):
    try:
        arr = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed complex array: {exc}") from None
    if arr.size != dim * dim:
        raise ValidationError(f"expected {dim * dim} entries for a {dim}x{dim} matrix, got {arr.size}")
    return arr.reshape(dim, dim)


def kraus_to_json(kraus):
    return {"kind": "kraus", "dim": kraus.dim, "kraus": [encode_matrix(a) for a in kraus.operators]}


def kraus_from_json(obj, tolerance=TOL.completeness_experimental):
    if obj.get("kind", "kraus") != "kraus" or "kraus" not in obj:
        raise ValidationError("not a Kraus channel document")
    dim = int(obj["dim"])
    return KrausSet(tuple(decode_matrix(a, dim) for a in obj["kraus"]), tolerance=tolerance)


def chi_to_json(chi):
    return {"kind": "chi", "dim": 16, "matrix": encode_matrix(chi.matrix)}


def superop_to_json(s):
    return {"kind": "superoperator", "dim": 16, "matrix": encode_matrix(s.matrix)}


def unitary_to_json(u):
    return {"kind": "unitary", "dim": u.matrix.shape[0], "kraus_index": u.kraus_index,
            "matrix": encode_matrix(u.matrix)}


def matrix_document_from_json(obj):
    """Decode a ``chi``, ``superoperator`` or ``unitary`` document."""
    kind = obj.get("kind")
    dim = int(obj.get("dim", 0))
    if kind == "chi":
        return ChiMatrix(decode_matrix(obj["matrix"], dim))
    if kind == "superoperator":
        return Superoperator(decode_matrix(obj["matrix"], dim))
    if kind == "unitary":
        return DilationUnitary(decode_matrix(obj["matrix"], dim), int(obj.get("kraus_index", 0)))
    if kind == "kraus" or "kraus" in obj:
        return kraus_from_json(obj)
    raise ValidationError(f"unknown document kind {kind!r}")


def record_to_json(rec):
    dim = rec.inputs[0].shape[0] if rec.inputs else 4
    return {
        "kind": "tomography-record",
        "dim": dim,
        "inputs": [encode_matrix(r) for r in rec.inputs],
        "outputs": [encode_matrix(o) for o in rec.outputs],
        "noise_sigma": rec.noise_sigma,
        "seed": rec.seed,
    }


def record_from_json(obj):
    dim = int(obj.get("dim", 4))
    return TomographyRecord(
        [decode_matrix(r, dim) for r in obj["inputs"]],
        [decode_matrix(o, dim) for o in obj["outputs"]],
        obj.get("noise_sigma"),
        obj.get("seed"),
    )


def dump_json(obj, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
