"""JSON input/output with doubles rendered at 17 significant digits.

The stdlib encoder prints shortest round-trip representations; the problem
and report schemas here instead pin every float to ``%.17g`` so identical
runs produce byte-identical files and every double round-trips exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import CoerciveError
from .forms import BilinearForm, FormConstants, LinearForm
from .solver import VariationalProblem
from .spaces import HilbertSpace, make_space

__all__ = ["dumps", "problem_from_dict", "space_from_dict", "load_input"]


def _render(obj) -> str:
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            raise ValueError(f"cannot serialize non-finite value {x}")
        s = format(x, ".17g")
        if "." not in s and "e" not in s and "E" not in s:
            s += ".0"
        return s
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render(x) for x in obj) + "]"
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_render(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Serialize nested dict/list/scalar data; floats get 17 significant digits."""
    return _render(obj) + "\n"


def space_from_dict(data: dict) -> HilbertSpace:
    if "gram" not in data:
        raise CoerciveError("input is missing the 'gram' field")
    return make_space(np.asarray(data["gram"], dtype=float))


def problem_from_dict(data: dict) -> VariationalProblem:
    """Decode ``{"gram": [[...]], "a": [[...]], "f": [...], "alpha"?, "C"?}``."""
    space = space_from_dict(data)
    for key in ("a", "f"):
        if key not in data:
            raise CoerciveError(f"input is missing the {key!r} field")
    constants = None
    if data.get("alpha") is not None or data.get("C") is not None:
        if data.get("alpha") is None or data.get("C") is None:
            raise CoerciveError("supply both 'alpha' and 'C' or neither")
        constants = FormConstants(
            continuity_C=float(data["C"]), coercivity_alpha=float(data["alpha"])
        )
    return VariationalProblem(
        space=space,
        a=BilinearForm(np.asarray(data["a"], dtype=float)),
        f=LinearForm(np.asarray(data["f"], dtype=float)),
        constants=constants,
    )


def load_input(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CoerciveError(f"malformed JSON input: {exc}") from exc
    if not isinstance(data, dict):
        raise CoerciveError("input JSON must be an object")
    return data
