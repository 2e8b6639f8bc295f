"""Form specifications and canonical reports.

A form specification is a JSON document::

    {"k": 2, "bulk_integral": 0.0,
     "circles": [{"id": "Z1", "R": 1.0, "orientation": 1,
                  "A": {"order": 2, "coeffs": [{"constant": 1.0, "cos": [[1, 0.5]], "sin": []}]}}]}

``coeffs[j]`` is the coefficient of y^j in the collar density.  Reports are
written with a fixed key order and every float printed with 17 significant
digits, so parsing and re-emitting a report reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
import re
from typing import Any

from .bk_forms import BkSurfaceForm, CollarPiece
from .errors import BkFormsError, SpecValidationError
from .series_ring import CircleFunction, CollarSeries, RealPolynomial

_CIRCLE_KEYS = {"id", "R", "orientation", "A"}
_FORM_KEYS = {"k", "circles", "bulk_integral", "descriptor"}


def _line_of(text: str, pattern: str) -> int | None:
    m = re.search(pattern, text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _circle_error(text: str, cid: str, exc: Exception) -> SpecValidationError:
    line = _line_of(text, r'"id"\s*:\s*' + re.escape(json.dumps(cid)))
    where = f"line {line}: " if line else ""
    return SpecValidationError(f"{where}circle {cid!r}: {exc}")


def form_from_dict(data: dict, text: str = "") -> BkSurfaceForm:
    if not isinstance(data, dict):
        raise SpecValidationError("form specification must be a JSON object")
    unknown = set(data) - _FORM_KEYS
    if unknown:
        raise SpecValidationError(f"unknown fields: {sorted(unknown)}")
    try:
        k = data["k"]
    except KeyError:
        raise SpecValidationError("missing field 'k'") from None
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise SpecValidationError(f"'k' must be an integer >= 1, got {k!r}")
    collars = []
    for idx, entry in enumerate(data.get("circles", [])):
        cid = str(entry.get("id", f"#{idx}")) if isinstance(entry, dict) else f"#{idx}"
        try:
            if not isinstance(entry, dict):
                raise ValueError("circle entry must be an object")
            unknown = set(entry) - _CIRCLE_KEYS
            if unknown:
                raise ValueError(f"unknown fields: {sorted(unknown)}")
            A = CollarSeries.from_dict(entry["A"])
            piece = CollarPiece(cid, float(entry.get("R", 1.0)), k, A, int(entry.get("orientation", 1)))
            piece.check_order()
        except (BkFormsError, ValueError, KeyError, TypeError) as exc:
            if isinstance(exc, KeyError):
                exc = ValueError(f"missing field {exc.args[0]!r}")
            raise _circle_error(text, cid, exc) from exc
        collars.append(piece)
    try:
        return BkSurfaceForm(k, tuple(collars), float(data.get("bulk_integral", 0.0)), str(data.get("descriptor", "")))
    except ValueError as exc:
        raise SpecValidationError(str(exc)) from exc


def loads_form(text: str) -> BkSurfaceForm:
    """Parse and validate a form specification.

    Raises:
        SpecValidationError: malformed JSON or invalid content, with line context.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecValidationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return form_from_dict(data, text)


def form_to_dict(f: BkSurfaceForm) -> dict:
    out: dict[str, Any] = {"k": f.k, "bulk_integral": float(f.bulk_integral)}
    if f.descriptor:
        out["descriptor"] = f.descriptor
    out["circles"] = [
        {"id": c.circle_id, "R": float(c.R), "orientation": c.orientation, "A": c.A.to_dict()}
        for c in f.collars
    ]
    return out


def dumps_form(f: BkSurfaceForm) -> str:
    return dumps(form_to_dict(f))


def circle_function_to_dict(c: CircleFunction) -> dict:
    return c.to_dict()


def polynomial_to_list(P: RealPolynomial) -> list[float]:
    return [float(c) for c in P.coefficients]


# ----------------------------------------------------------------------
# canonical JSON
# ----------------------------------------------------------------------


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return json.dumps(str(x))
    s = "%.17g" % x
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _emit(obj, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _emit(value, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
        elif all(not isinstance(v, (dict, list, tuple)) for v in obj):
            parts: list[str] = []
            for v in obj:
                _emit(v, indent, level + 1, parts)
                parts.append(", ")
            out.append("[" + "".join(parts[:-1]) + "]")
        else:
            out.append("[\n")
            for i, value in enumerate(obj):
                out.append(pad)
                _emit(value, indent, level + 1, out)
                out.append(",\n" if i < len(obj) - 1 else "\n")
            out.append(end + "]")
    elif hasattr(obj, "item"):  # numpy scalar
        _emit(obj.item(), indent, level, out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Canonical JSON: insertion key order, 17 significant digits, trailing newline."""
    out: list[str] = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str):
    return json.loads(text)


def render_text(report: dict) -> str:
    """Plain-text rendering of a report (one ``key: value`` line per leaf)."""
    lines: list[str] = []
    if "summary" in report:
        lines.extend(report["summary"])
        lines.append("")

    def walk(prefix: str, obj) -> None:
        if isinstance(obj, dict):
            for key, value in obj.items():
                if prefix == "" and key == "summary":
                    continue
                walk(f"{prefix}.{key}" if prefix else key, value)
        elif isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
            for i, value in enumerate(obj):
                walk(f"{prefix}[{i}]", value)
        else:
            lines.append(f"{prefix}: {dumps(obj).strip()}")

    walk("", report)
    return "\n".join(lines) + "\n"
