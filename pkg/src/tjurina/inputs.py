"""CurveInput documents: validation and conversion to a :class:`Curve`.

A document is a JSON object with exactly one of

* ``"poly"``: a polynomial in ``x, y``, usually written as a product of
  factors; the factor order fixes the branch order;
* ``"branches"``: a list of ``{"coords": [...]}`` with ``n`` polynomials in
  ``t`` per branch, optionally with ``"equations"`` (``n - 1`` polynomials
  cutting out a space curve, variables ``x, y, z`` or ``x1 .. xn``).

Options may sit at top level or under ``"options"``: ``trunc``,
``box_slack``, ``verify`` and ``order`` (1-based branch indices).
"""

import json
from dataclasses import dataclass

from .construct import curve_from_branches, curve_from_polynomial
from .construct import DEFAULT_TRUNC
from .errors import InputError
from .parser import parse_factors, parse_polynomial, parse_series

__all__ = ["CurveOptions", "build_curve", "load_document", "parse_order", "read_input"]

_OPTION_KEYS = {"trunc", "box_slack", "verify", "order"}


@dataclass
class CurveOptions:
    trunc: int = None
    box_slack: int = 0
    verify: bool = False
    order: tuple = None  # 0-based permutation


def variables_for(n):
    if n == 2:
        return ("x", "y")
    if n == 3:
        return ("x", "y", "z")
    return tuple(f"x{k}" for k in range(1, n + 1))


def parse_order(value, r=None):
    """``"2,1,3"`` or ``[2, 1, 3]`` (1-based) to a 0-based tuple."""
    if isinstance(value, str):
        try:
            items = [int(s) for s in value.split(",") if s.strip()]
        except ValueError:
            raise InputError(f"branch order must be comma-separated integers, got {value!r}")
    else:
        try:
            items = [int(s) for s in value]
        except (TypeError, ValueError):
            raise InputError("branch order must be a list of integers")
    order = tuple(i - 1 for i in items)
    if sorted(order) != list(range(len(order))):
        raise InputError(f"branch order {items} is not a permutation of 1..{len(order)}")
    if r is not None and len(order) != r:
        raise InputError(f"branch order has {len(order)} entries but the curve has {r} branches")
    return order


def _nonneg_int(v, name):
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise InputError(f"option {name!r} must be a nonnegative integer")
    return v


def read_options(doc):
    raw = {}
    if "options" in doc:
        if not isinstance(doc["options"], dict):
            raise InputError("'options' must be an object")
        raw.update(doc["options"])
    raw.update({k: v for k, v in doc.items() if k in _OPTION_KEYS})
    unknown = set(raw) - _OPTION_KEYS
    if unknown:
        raise InputError(f"unknown option(s): {', '.join(sorted(unknown))}")
    opts = CurveOptions()
    if raw.get("trunc") is not None:
        opts.trunc = _nonneg_int(raw["trunc"], "trunc")
    if raw.get("box_slack") is not None:
        opts.box_slack = _nonneg_int(raw["box_slack"], "box_slack")
    if "verify" in raw:
        if not isinstance(raw["verify"], bool):
            raise InputError("option 'verify' must be true or false")
        opts.verify = raw["verify"]
    if raw.get("order") is not None:
        opts.order = parse_order(raw["order"])
    return opts


def load_document(doc):
    """Validate a CurveInput mapping; returns ``(doc, options)``."""
    if not isinstance(doc, dict):
        raise InputError("the input must be a JSON object")
    has_poly = "poly" in doc
    has_br = "branches" in doc
    if has_poly == has_br:
        raise InputError("exactly one of 'poly' and 'branches' must be given")
    allowed = {"poly", "branches", "equations", "options"} | _OPTION_KEYS
    extra = set(doc) - allowed
    if extra:
        raise InputError(f"unknown field(s): {', '.join(sorted(extra))}")
    if has_poly:
        if not isinstance(doc["poly"], str):
            raise InputError("'poly' must be a string")
        if "equations" in doc:
            raise InputError("'equations' only applies to parametric input")
    else:
        brs = doc["branches"]
        if not isinstance(brs, list) or not brs:
            raise InputError("'branches' must be a nonempty list")
        for k, b in enumerate(brs):
            if not isinstance(b, dict) or set(b) != {"coords"}:
                raise InputError(f"branch {k + 1} must be an object with a 'coords' list")
            cs = b["coords"]
            if not isinstance(cs, list) or len(cs) < 2 or not all(isinstance(s, str) for s in cs):
                raise InputError(f"branch {k + 1}: 'coords' must list at least two expressions")
        eqs = doc.get("equations")
        if eqs is not None and (
            not isinstance(eqs, list) or not all(isinstance(s, str) for s in eqs)
        ):
            raise InputError("'equations' must be a list of strings")
    return doc, read_options(doc)


def read_input(path):
    """Read and validate a CurveInput file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except UnicodeDecodeError:
        raise InputError(f"{path} is not valid UTF-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}")
    return load_document(doc)


def _with_field(exc, where):
    """Prefix a parse error with the field it came from."""
    exc.args = (f"{where}: {exc.args[0]}",) + exc.args[1:]
    return exc


def build_curve(doc, trunc=None):
    """Curve described by a validated document."""
    if "poly" in doc:
        try:
            f, factors = parse_factors(doc["poly"])
        except InputError as exc:
            raise _with_field(exc, "poly")
        return curve_from_polynomial(f, factors, trunc if trunc is not None else DEFAULT_TRUNC)
    coords_list = []
    for k, b in enumerate(doc["branches"]):
        coords = []
        for j, s in enumerate(b["coords"]):
            try:
                coords.append(parse_series(s))
            except InputError as exc:
                raise _with_field(exc, f"branch {k + 1}, coordinate {j + 1}")
        coords_list.append(coords)
    n = len(coords_list[0])
    equations = None
    if doc.get("equations") is not None:
        equations = []
        for k, s in enumerate(doc["equations"]):
            try:
                equations.append(parse_polynomial(s, variables_for(n)))
            except InputError as exc:
                raise _with_field(exc, f"equation {k + 1}")
        if len(equations) != n - 1:
            raise InputError(f"a curve in {n}-space needs {n - 1} equations, got {len(equations)}")
    curve = curve_from_branches(coords_list, equations)
    if trunc is not None:
        curve = curve.with_trunc(trunc)
    return curve
