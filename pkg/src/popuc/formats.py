"""JSON and CSV I/O.

Parameter files look like ``{"alphas": [[re, im], ...], "b": [re, im]}``;
several arrays can be bundled as ``{"cases": [{...}, {...}]}``. Numbers are
written with 17 significant digits, which round-trips every double.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import numpy as np

from popuc.cmv import ParameterArray
from popuc.engine import SpectralDecomposition
from popuc.errors import DomainError, InputError
from popuc.tolerances import DEFAULT


def _pair(value: Any, where: str) -> complex:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise InputError(f"{where}: expected [re, im], got {value!r}")
    return complex(float(value[0]), float(value[1]))


def parameters_from_dict(obj: Any, eps_unit: float = DEFAULT.eps_unit) -> ParameterArray:
    if not isinstance(obj, dict):
        raise InputError(f"expected an object with 'alphas' and 'b', got {type(obj).__name__}")
    missing = {"alphas", "b"} - obj.keys()
    if missing:
        raise InputError(f"missing key(s): {', '.join(sorted(missing))}")
    if not isinstance(obj["alphas"], list):
        raise InputError("'alphas' must be a list of [re, im] pairs")
    alphas = [_pair(a, f"alpha[{j}]") for j, a in enumerate(obj["alphas"])]
    b = _pair(obj["b"], "b")
    for j, a in enumerate(alphas):
        if not abs(a) < 1.0:
            raise DomainError(f"alpha[{j}] outside open unit disk: |alpha[{j}]| = {abs(a)!r}")
    if abs(abs(b) - 1.0) > eps_unit:
        raise DomainError(f"b not on the unit circle: |b| = {abs(b)!r}")
    return ParameterArray(alphas, b, eps_unit)


def parse_text(text: str, eps_unit: float = DEFAULT.eps_unit):
    """Parse one array, or a list of arrays if the document has ``"cases"``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if isinstance(obj, dict) and "cases" in obj:
        if not isinstance(obj["cases"], list):
            raise InputError("'cases' must be a list")
        out = []
        for i, case in enumerate(obj["cases"]):
            try:
                out.append(parameters_from_dict(case, eps_unit))
            except (InputError, DomainError) as exc:
                raise type(exc)(f"cases[{i}]: {exc}") from exc
        return out
    return parameters_from_dict(obj, eps_unit)


def parse_input(path: str | Path, eps_unit: float = DEFAULT.eps_unit):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_text(text, eps_unit)


def _num(x: float) -> str:
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"cannot serialise {x!r}")
    s = format(x, ".17g")
    # keep it a JSON float literal
    return s if any(c in s for c in ".eEn") else s + ".0"


def _cpair(z: complex) -> str:
    return f"[{_num(z.real)}, {_num(z.imag)}]"


def _one(p: ParameterArray) -> str:
    alphas = ", ".join(_cpair(a) for a in p.alphas)
    return f'{{"alphas": [{alphas}], "b": {_cpair(p.b)}}}'


def emit_json(p) -> str:
    """Serialise one array or a list of arrays (as ``"cases"``)."""
    if isinstance(p, ParameterArray):
        return _one(p) + "\n"
    return '{"cases": [\n  ' + ",\n  ".join(_one(q) for q in p) + "\n]}\n"


def parameters_to_dict(p: ParameterArray) -> dict:
    return {"alphas": [[a.real, a.imag] for a in p.alphas], "b": [p.b.real, p.b.imag]}


def complex_to_json(a) -> Any:
    """Nested lists of ``[re, im]`` pairs for a complex scalar or array."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        z = complex(arr)
        return [z.real, z.imag]
    return [complex_to_json(x) for x in arr]


ZERO_COLUMNS = ("index", "angle_radians", "re", "im", "residual")


def zeros_csv(specs: SpectralDecomposition | list[SpectralDecomposition]) -> str:
    """Zero table; several decompositions get an extra leading ``case`` column."""
    multi = isinstance(specs, list)
    specs = specs if multi else [specs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow((("case",) if multi else ()) + ZERO_COLUMNS)
    for i, spec in enumerate(specs):
        for j, (t, r) in enumerate(zip(spec.angles, spec.residuals)):
            z = np.exp(1j * t)
            row = [j, repr(float(t)), repr(float(z.real)), repr(float(z.imag)), repr(float(r))]
            w.writerow(([i] if multi else []) + row)
    return buf.getvalue()


def zeros_dict(spec: SpectralDecomposition) -> dict:
    return {
        "method": spec.method,
        "angles": [float(t) for t in spec.angles],
        "eigenvalues": complex_to_json(spec.eigenvalues),
        "residuals": [float(r) for r in spec.residuals],
        "min_gap": spec.min_gap(),
        "diagnostics": list(spec.diagnostics),
    }


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"
