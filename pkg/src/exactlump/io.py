"""JSON system/scheme/network files, report envelopes and control CSV files.

System file layout::

    {"n": 3, "r": 3, "p": 3,
     "A": [[...], ...], "B": [[...], ...], "C": [[...], ...],
     "labels": ["X1", ...],        # optional
     "k_comment": "k = 1",         # optional
     "A_dual": [[...], ...]}       # optional, written for lumped systems

Floats are written with Python's shortest round-trip repr, so a file
re-parses to bit-identical matrices. When ``A_dual`` is present, the
observability of the system is judged from the pair ``(A_dual, C.T)`` instead
of ``(A.T, C.T)``; lumped systems store ``C.T = M C_orig.T`` and
``A_dual = M A.T M+`` this way.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Any

import numpy as np

from .compartmental import Reaction, ReactionNetwork
from .errors import InvalidInputError
from .linalg import RankResult
from .lti import AnalysisReport, LtiSystem
from .simulation import ControlSignal


def _reject_constant(name):
    raise InvalidInputError(f"non-finite number {name} is not allowed")


def _load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInputError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    except InvalidInputError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None


def _int_field(obj: dict, key: str, where: str) -> int:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InvalidInputError(f"{where}: field '{key}' must be a positive integer, got {v!r}")
    return v


def _matrix_field(obj: dict, key: str, shape: tuple[int, int], where: str) -> np.ndarray:
    rows = obj.get(key)
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise InvalidInputError(f"{where}: field '{key}' must be a list of {shape[0]} rows")
    out = np.empty(shape)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise InvalidInputError(f"{where}: field '{key}' row {i} must have {shape[1]} entries")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidInputError(f"{where}: field '{key}'[{i}][{j}] is not a finite number: {v!r}")
            out[i, j] = v
    return out


@dataclass(frozen=True)
class SystemFile:
    system: LtiSystem
    a_dual: np.ndarray | None = None
    k_comment: str | None = None


def parse_system(obj: Any, where: str = "system") -> SystemFile:
    if not isinstance(obj, dict):
        raise InvalidInputError(f"{where}: top level must be a JSON object")
    n = _int_field(obj, "n", where)
    r = _int_field(obj, "r", where)
    p = _int_field(obj, "p", where)
    a = _matrix_field(obj, "A", (n, n), where)
    b = _matrix_field(obj, "B", (n, r), where)
    c = _matrix_field(obj, "C", (p, n), where)
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels) or len(labels) != n:
            raise InvalidInputError(f"{where}: field 'labels' must be a list of {n} strings")
    k_comment = obj.get("k_comment")
    if k_comment is not None and not isinstance(k_comment, str):
        raise InvalidInputError(f"{where}: field 'k_comment' must be a string")
    a_dual = _matrix_field(obj, "A_dual", (n, n), where) if "A_dual" in obj else None
    return SystemFile(LtiSystem(a, b, c, labels), a_dual, k_comment)


def load_system(path: str | Path) -> SystemFile:
    return parse_system(_load_json(path), str(path))


def _fmt_row(row) -> str:
    return "[" + ", ".join(json.dumps(float(v)) for v in row) + "]"


def _fmt_matrix(m, indent: str = "  ") -> str:
    inner = (",\n" + indent * 2).join(_fmt_row(r) for r in np.asarray(m))
    return "[\n" + indent * 2 + inner + "\n" + indent + "]"


def dumps_system(sys: LtiSystem, a_dual=None, k_comment: str | None = None) -> str:
    parts = [f'"n": {sys.n}', f'"r": {sys.r}', f'"p": {sys.p}',
             f'"A": {_fmt_matrix(sys.a)}', f'"B": {_fmt_matrix(sys.b)}', f'"C": {_fmt_matrix(sys.c)}']
    if sys.labels is not None:
        parts.append(f'"labels": {json.dumps(list(sys.labels))}')
    if k_comment is not None:
        parts.append(f'"k_comment": {json.dumps(k_comment)}')
    if a_dual is not None:
        parts.append(f'"A_dual": {_fmt_matrix(a_dual)}')
    return "{\n  " + ",\n  ".join(parts) + "\n}\n"


def write_system(path: str | Path, sys: LtiSystem, a_dual=None, k_comment: str | None = None) -> None:
    Path(path).write_text(dumps_system(sys, a_dual, k_comment))


def load_m(path: str | Path) -> np.ndarray:
    """Lumping matrix file: ``{"M": [[...], ...]}`` or a bare nested list."""
    obj = _load_json(path)
    rows = obj.get("M") if isinstance(obj, dict) else obj
    if not isinstance(rows, list) or not rows or not isinstance(rows[0], list):
        raise InvalidInputError(f"{path}: expected field 'M' holding a list of rows")
    return _matrix_field({"M": rows}, "M", (len(rows), len(rows[0])), str(path))


def network_to_dict(net: ReactionNetwork) -> dict:
    return {
        "species": list(net.species),
        "reactions": [{"from": r.source, "to": r.target, "rate": r.rate} for r in net.reactions],
    }


def network_from_dict(obj: Any, where: str = "network") -> ReactionNetwork:
    if not isinstance(obj, dict) or not isinstance(obj.get("species"), list):
        raise InvalidInputError(f"{where}: expected an object with a 'species' list")
    reactions = []
    for i, r in enumerate(obj.get("reactions", [])):
        try:
            reactions.append(Reaction(int(r["from"]), int(r["to"]), float(r["rate"])))
        except (KeyError, TypeError, ValueError):
            raise InvalidInputError(f"{where}: reaction {i} needs integer 'from'/'to' and numeric 'rate'") from None
    return ReactionNetwork(tuple(obj["species"]), tuple(reactions))


def rank_evidence(report: AnalysisReport) -> dict:
    rr: RankResult = report.rank_result
    return {
        "verdict": report.verdict,
        "rank": rr.rank,
        "state_dim": report.state_dim,
        "test_matrix_dims": list(report.test_matrix_dims),
        "singular_values": list(rr.singular_values),
        "tolerance_used": rr.tolerance_used,
    }


def make_report(command: str, inputs: dict, results: dict, tolerances: dict) -> dict:
    return {"command": command, "inputs": inputs, "results": results, "tolerances": tolerances}


def write_control_csv(fh: IO[str], u: ControlSignal) -> None:
    """Rows ``t,u1..ur``; the last row marks the horizon end and repeats the final value."""
    if u.times is None:
        raise InvalidInputError("constant controls have no time grid to write")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t"] + [f"u{i + 1}" for i in range(u.r)])
    vals = np.vstack([u.values, u.values[-1:]])
    for t, v in zip(u.times, vals):
        w.writerow([f"{t:.17g}"] + [f"{x:.17g}" for x in v])


def load_control_csv(path: str | Path) -> ControlSignal:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInputError(f"{path}: cannot read file ({exc.strerror})") from None
    if len(rows) < 3 or not rows[0] or rows[0][0] != "t":
        raise InvalidInputError(f"{path}: expected header 't,u1,...' and at least two data rows")
    try:
        data = np.array([[float(x) for x in row] for row in rows[1:]])
    except ValueError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(rows[0]):
        raise InvalidInputError(f"{path}: ragged rows")
    return ControlSignal(data[:, 0], data[:-1, 1:])
