"""Structured run reports with JSON and CSV serialization."""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

SCHEMA = 1


def to_jsonable(x):
    """Numbers, arrays and containers mapped to plain JSON values.

    Complex numbers become ``{"re": .., "im": ..}``; non-finite floats
    become the strings ``"inf"``, ``"-inf"``, ``"nan"``.
    """
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(x.real)), "im": to_jsonable(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if x is None or isinstance(x, str):
        return x
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class Assertion:
    name: str
    passed: bool
    lhs: float
    rhs: float
    tol: float

    def as_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "lhs": self.lhs, "rhs": self.rhs, "tol": self.tol}


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    assertions: list[Assertion] = field(default_factory=list)

    def check(self, name: str, lhs: float, rhs: float, tol: float = 0.0, relation: str = "<=") -> bool:
        """Record ``lhs <relation> rhs`` up to ``tol``; relation is ``<=``, ``>=`` or ``==``."""
        lhs, rhs, tol = float(lhs), float(rhs), float(tol)
        if relation == "<=":
            ok = lhs <= rhs + tol
        elif relation == ">=":
            ok = lhs >= rhs - tol
        elif relation == "==":
            ok = abs(lhs - rhs) <= tol
        else:
            raise ValueError(f"unknown relation {relation!r}")
        self.assertions.append(Assertion(name, bool(ok), lhs, rhs, tol))
        return ok

    def flag(self, name: str, ok: bool) -> bool:
        self.assertions.append(Assertion(name, bool(ok), float(bool(ok)), 1.0, 0.0))
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": to_jsonable(self.inputs),
            "outputs": to_jsonable(self.outputs),
            "assertions": [to_jsonable(a.as_dict()) for a in self.assertions],
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Outputs only, flattened to ``key,value`` rows with dotted keys."""
        rows = ["key,value"]
        for key, value in flatten(to_jsonable(self.outputs)):
            rows.append(f"{_csv_cell(key)},{_csv_cell(value)}")
        return "\n".join(rows) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")


def flatten(obj, prefix=""):
    if isinstance(obj, dict):
        if set(obj) == {"re", "im"}:
            yield prefix, f"{obj['re']!r}{'+' if _nonneg(obj['im']) else ''}{obj['im']!r}j"
            return
        for k in sorted(obj):
            yield from flatten(obj[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from flatten(v, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, obj


def _nonneg(v):
    return not isinstance(v, str) and v >= 0


def _csv_cell(v) -> str:
    s = "" if v is None else (repr(v) if isinstance(v, float) else str(v))
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
