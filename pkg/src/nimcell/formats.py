"""On-disk formats: game and rule JSON, PBM/CSV grids, report JSON.

All writers are byte-deterministic: fixed key order, sorted move lists, no
timestamps or comments, newline-terminated.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Union

import numpy as np

from .cellular import CARule
from .errors import NimcellError
from .games import InvariantGame, ModularGame, validate_invariant, validate_modular
from .reductions import GadgetSpec

PBM_LINE = 70


class InputError(NimcellError):
    """A file could not be parsed into a valid object."""


def game_to_json(game: Union[InvariantGame, ModularGame]) -> str:
    if isinstance(game, InvariantGame):
        moves = sorted(list(m) for m in game.moves)
        doc = {"kind": "invariant", "d": game.d, "moves": moves}
    else:
        sets = [sorted(list(m) for m in s) for s in game.move_sets]
        doc = {"kind": "modular", "k": game.k, "move_sets": sets}
    return json.dumps(doc) + "\n"


def game_from_json(text: str) -> Union[InvariantGame, ModularGame]:
    try:
        doc = json.loads(text)
        kind = doc["kind"]
        if kind == "invariant":
            game = InvariantGame(int(doc["d"]), tuple(tuple(m) for m in doc["moves"]))
            validate_invariant(game)
        elif kind == "modular":
            sets = doc["move_sets"]
            for s in sets:
                for m in s:
                    if len(m) != 2:
                        raise InputError(f"modular move {m} must have two components")
            game = ModularGame(int(doc["k"]), tuple(tuple(tuple(m) for m in s) for s in sets))
            validate_modular(game)
        else:
            raise InputError(f"unknown game kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad game file: {exc}") from exc
    return game


def rule_to_json(rule: CARule) -> str:
    return json.dumps({"n": rule.n, "table": list(rule.table)}) + "\n"


def rule_from_json(text: str) -> CARule:
    try:
        doc = json.loads(text)
        return CARule(int(doc["n"]), tuple(doc["table"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad rule file: {exc}") from exc


def gadget_to_json(spec: GadgetSpec) -> str:
    return json.dumps({"k": spec.k, "l": spec.l, "N": spec.N, "base_k": spec.base_k, "d": spec.d}) + "\n"


def write_pbm(bits: np.ndarray) -> bytes:
    """Plain PBM of a (x, y) grid; image row 0 is the largest y, so y grows upwards."""
    bits = np.asarray(bits, dtype=bool)
    width, height = bits.shape
    lines = ["P1", f"{width} {height}"]
    for y in range(height - 1, -1, -1):
        row = "".join("1" if b else "0" for b in bits[:, y])
        lines.extend(row[i:i + PBM_LINE] for i in range(0, len(row), PBM_LINE))
    return ("\n".join(lines) + "\n").encode("ascii")


def read_pbm(data: bytes) -> np.ndarray:
    """Inverse of write_pbm; accepts any plain (P1) PBM."""
    text = data.decode("ascii")
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if not tokens or tokens[0] != "P1":
        raise InputError("not a plain PBM file")
    width, height = int(tokens[1]), int(tokens[2])
    digits = "".join(tokens[3:])
    if len(digits) != width * height:
        raise InputError(f"expected {width * height} pixels, found {len(digits)}")
    img = np.array([c == "1" for c in digits], dtype=bool).reshape(height, width)
    return img[::-1].T.copy()


def write_csv(positions) -> bytes:
    lines = [",".join(str(c) for c in p) for p in sorted(positions)]
    return "".join(line + "\n" for line in lines).encode("ascii")


def _plain(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def report_to_json(report) -> str:
    doc = _plain(report)
    doc["all_match"] = bool(report.all_match)
    return json.dumps(doc, indent=2) + "\n"


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
