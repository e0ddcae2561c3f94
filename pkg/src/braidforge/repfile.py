"""JSON file format for representations and matrix bundles.

Complex entries are written as ``[re, im]`` pairs using Python's shortest
round-trip float repr, so writing what was read reproduces the file byte for
byte.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import InvalidInputError, ParseError
from .reps import PureBraidAntiRep, SemidirectRep

__all__ = ["SCHEMA_VERSION", "dumps", "loads", "read", "write", "MatrixBundle"]

SCHEMA_VERSION = "1"
KINDS = ("semidirect", "pure_anti", "matrices")


class MatrixBundle(dict):
    """Named matrices plus free-form metadata (kind ``matrices``)."""

    def __init__(self, mats=None, metadata=None):
        super().__init__(mats or {})
        self.metadata = dict(metadata or {})


def _enc(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _dec(obj: Any, name: str) -> np.ndarray:
    try:
        rows = [[complex(float(re), float(im)) for re, im in row] for row in obj]
    except (TypeError, ValueError):
        raise ParseError(f"{name}: expected a list of rows of [re, im] pairs") from None
    if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
        raise ParseError(f"{name}: matrix rows are empty or ragged")
    return np.array(rows, dtype=complex)


def _to_obj(x, metadata: dict | None) -> dict:
    meta = dict(metadata or {})
    if isinstance(x, SemidirectRep):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "semidirect",
            "n": x.n,
            "N": x.N,
            "g": [_enc(m) for m in x.g],
            "s": {str(i): _enc(m) for i, m in sorted(x.s.items())},
            "H": None if x.H is None else _enc(x.H),
            "k": x.action_exponent,
            "x_power": x.x_power,
            "anti": x.anti,
            "metadata": meta,
        }
    if isinstance(x, PureBraidAntiRep):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "pure_anti",
            "n": x.n,
            "N": x.N,
            "M": {f"{i},{j}": _enc(m) for (i, j), m in sorted(x.M.items())},
            "anti": x.anti,
            "metadata": meta,
        }
    if isinstance(x, MatrixBundle):
        meta = {**x.metadata, **meta}
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "matrices",
            "matrices": {k: _enc(m) for k, m in sorted(x.items())},
            "metadata": meta,
        }
    raise InvalidInputError(f"cannot serialise {type(x).__name__}")


def dumps(x, metadata: dict | None = None) -> str:
    return json.dumps(_to_obj(x, metadata), indent=1, sort_keys=True) + "\n"


def _need(obj: dict, key: str):
    if key not in obj:
        raise ParseError(f"missing field {key!r}")
    return obj[key]


def _int(obj: dict, key: str, default=None) -> int:
    v = obj.get(key, default) if default is not None else _need(obj, key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ParseError(f"field {key!r} must be an integer")
    return v


def loads(text: str):
    """Parse a file's text; returns ``(object, metadata)``.

    Structural problems raise :class:`ParseError`; well-formed data that
    violates a representation invariant raises :class:`InvalidInputError`.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    version = _need(obj, "schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}")
    kind = _need(obj, "kind")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}, got {kind!r}")
    meta = obj.get("metadata") or {}
    if not isinstance(meta, dict):
        raise ParseError("metadata must be an object")
    if kind == "matrices":
        mats = _need(obj, "matrices")
        if not isinstance(mats, dict):
            raise ParseError("matrices must be an object")
        return MatrixBundle({k: _dec(v, k) for k, v in mats.items()}, meta), meta
    n, N = _int(obj, "n"), _int(obj, "N")
    anti = obj.get("anti", kind == "pure_anti")
    if not isinstance(anti, bool):
        raise ParseError("anti must be a boolean")
    if kind == "semidirect":
        g = _need(obj, "g")
        s = obj.get("s") or {}
        if not isinstance(g, list) or not isinstance(s, dict):
            raise ParseError("g must be a list and s an object")
        try:
            s_mats = {int(i): _dec(m, f"s[{i}]") for i, m in s.items()}
        except ValueError:
            raise ParseError("s keys must be integers") from None
        H = obj.get("H")
        rep = SemidirectRep(
            n, N, tuple(_dec(m, f"g[{j}]") for j, m in enumerate(g, start=1)), s_mats,
            action_exponent=_int(obj, "k", 1), x_power=_int(obj, "x_power", 1),
            H=None if H is None else _dec(H, "H"), anti=anti,
        )
        return rep, meta
    M = _need(obj, "M")
    if not isinstance(M, dict):
        raise ParseError("M must be an object")
    mats = {}
    for key, m in M.items():
        try:
            i, j = (int(t) for t in key.split(","))
        except ValueError:
            raise ParseError(f"M key {key!r} is not of the form 'i,j'") from None
        mats[(i, j)] = _dec(m, f"M[{key}]")
    return PureBraidAntiRep(n, N, mats, anti=anti), meta


def read(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads(text)


def write(path, x, metadata: dict | None = None) -> None:
    Path(path).write_text(dumps(x, metadata))
