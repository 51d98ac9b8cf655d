"""Canonical JSON for groups, complexes, chain maps and move scripts.

Output is byte-stable: keys are sorted, differential entries follow the
generator order, and ring elements use the ascending monomial text form.
All loaders raise :class:`FormatError` on malformed input.
"""
from __future__ import annotations

import json
from typing import Any

from .chain import BasedComplex, ChainMap, Generator
from .group_algebra import GroupSpec, RingMatrix, format_ring_element, parse_ring_element
from .moves import BaseChange, Collapse, Expand, MoveScript, Slide

__all__ = [
    "FormatError",
    "dumps",
    "loads",
    "group_to_json",
    "group_from_json",
    "complex_to_json",
    "complex_from_json",
    "map_to_json",
    "map_from_json",
    "move_to_json",
    "move_from_json",
    "script_to_json",
    "script_from_json",
]


class FormatError(ValueError):
    """Input that does not describe a valid object of the expected kind."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _need(obj, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    if key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    return obj[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{where}: expected an integer, got {x!r}")
    return x


def _str(x, where: str) -> str:
    if not isinstance(x, str):
        raise FormatError(f"{where}: expected a string, got {x!r}")
    return x


def _ring(text, group: GroupSpec, where: str):
    try:
        return parse_ring_element(_str(text, where), group)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from exc


# --- groups -----------------------------------------------------------------


def group_to_json(g: GroupSpec) -> dict:
    return g.to_json()


def group_from_json(obj) -> GroupSpec:
    try:
        return GroupSpec.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"group: {exc}") from exc


# --- complexes --------------------------------------------------------------


def _entries_json(m: RingMatrix, rows, cols) -> list[dict]:
    rpos = {r: i for i, r in enumerate(rows)}
    cpos = {c: i for i, c in enumerate(cols)}
    out = []
    for (r, c), v in sorted(m.entries.items(), key=lambda kv: (rpos[kv[0][0]], cpos[kv[0][1]])):
        out.append({"from": r, "to": c, "coeff": format_ring_element(v)})
    return out


def complex_to_json(c: BasedComplex, include_group: bool = True) -> dict:
    gens = []
    for g in c.generators:
        item = {"label": g.label, "degree": g.degree}
        if g.filtration is not None:
            item["filtration"] = g.filtration
        gens.append(item)
    out = {"generators": gens, "d": _entries_json(c.d, c.labels, c.labels)}
    if include_group:
        out["group"] = group_to_json(c.group)
    return out


def complex_from_json(obj, group: GroupSpec | None = None) -> BasedComplex:
    if group is None or "group" in (obj if isinstance(obj, dict) else {}):
        group = group_from_json(_need(obj, "group", "complex"))
    raw_gens = _need(obj, "generators", "complex")
    if not isinstance(raw_gens, list):
        raise FormatError("complex: 'generators' must be a list")
    gens = []
    for i, item in enumerate(raw_gens):
        where = f"generator {i}"
        label = _str(_need(item, "label", where), where + " label")
        degree = _int(_need(item, "degree", where), where + " degree")
        filt = item.get("filtration")
        if filt is not None:
            filt = _int(filt, where + " filtration")
        gens.append(Generator(label, degree, filt))
    labels = {g.label for g in gens}
    if len(labels) != len(gens):
        raise FormatError("complex: duplicate generator labels")
    ents = {}
    raw_d = obj.get("d", [])
    if not isinstance(raw_d, list):
        raise FormatError("complex: 'd' must be a list")
    for i, e in enumerate(raw_d):
        where = f"d entry {i}"
        x = _str(_need(e, "from", where), where)
        y = _str(_need(e, "to", where), where)
        for lab in (x, y):
            if lab not in labels:
                raise FormatError(f"{where}: unknown generator {lab!r}")
        if (x, y) in ents:
            raise FormatError(f"{where}: duplicate entry ({x}, {y})")
        v = _ring(_need(e, "coeff", where), group, where)
        if v:
            ents[(x, y)] = v
    return BasedComplex(group, gens, ents)


# --- chain maps ------------------------------------------------------------


def map_to_json(f: ChainMap) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "f": _entries_json(f.f, f.source.labels, f.target.labels),
    }


def map_from_json(obj) -> ChainMap:
    src = complex_from_json(_need(obj, "source", "chain map"))
    tgt = complex_from_json(_need(obj, "target", "chain map"))
    if src.group != tgt.group:
        raise FormatError("chain map: source and target live over different groups")
    ents = {}
    raw = _need(obj, "f", "chain map")
    if not isinstance(raw, list):
        raise FormatError("chain map: 'f' must be a list")
    for i, e in enumerate(raw):
        where = f"map entry {i}"
        x = _str(_need(e, "from", where), where)
        y = _str(_need(e, "to", where), where)
        if x not in src:
            raise FormatError(f"{where}: unknown source generator {x!r}")
        if y not in tgt:
            raise FormatError(f"{where}: unknown target generator {y!r}")
        v = _ring(_need(e, "coeff", where), src.group, where)
        if v:
            ents[(x, y)] = v
    return ChainMap(src, tgt, RingMatrix(src.group, src.labels, tgt.labels, ents))


# --- moves and scripts -----------------------------------------------------------


def move_to_json(m) -> dict:
    if isinstance(m, Slide):
        return {"op": "slide", "target": m.target, "source": m.source, "c": format_ring_element(m.c)}
    if isinstance(m, Expand):
        out = {"op": "expand", "a": m.a, "b": m.b, "degree": m.degree}
        if m.filtration is not None:
            out["filtration"] = m.filtration
        return out
    if isinstance(m, Collapse):
        return {"op": "collapse", "a": m.a, "b": m.b}
    if isinstance(m, BaseChange):
        return {"op": "base_change", "label": m.label, "u": format_ring_element(m.u.element)}
    raise TypeError(f"not a move: {m!r}")


def move_from_json(obj, group: GroupSpec, index: int = 0):
    where = f"move {index}"
    op = _need(obj, "op", where)
    if op == "slide":
        return Slide(
            _str(_need(obj, "target", where), where),
            _str(_need(obj, "source", where), where),
            _ring(_need(obj, "c", where), group, where),
        )
    if op == "expand":
        filt = obj.get("filtration")
        return Expand(
            _str(_need(obj, "a", where), where),
            _str(_need(obj, "b", where), where),
            _int(_need(obj, "degree", where), where),
            None if filt is None else _int(filt, where),
        )
    if op == "collapse":
        return Collapse(_str(_need(obj, "a", where), where), _str(_need(obj, "b", where), where))
    if op == "base_change":
        u = _ring(_need(obj, "u", where), group, where).as_trivial_unit()
        if u is None:
            raise FormatError(f"{where}: base change needs a trivial unit ±g")
        return BaseChange(_str(_need(obj, "label", where), where), u)
    raise FormatError(f"{where}: unknown op {op!r}")


def script_to_json(s: MoveScript) -> dict:
    return {"initial": complex_to_json(s.initial), "moves": [move_to_json(m) for m in s.moves]}


def script_from_json(obj) -> MoveScript:
    initial = complex_from_json(_need(obj, "initial", "script"))
    raw = _need(obj, "moves", "script")
    if not isinstance(raw, list):
        raise FormatError("script: 'moves' must be a list")
    return MoveScript(initial, tuple(move_from_json(m, initial.group, i) for i, m in enumerate(raw)))

