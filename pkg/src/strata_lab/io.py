"""JSON formats for morphisms, point lists and reports."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseError, ShapeError
from .field import Field
from .morphism import SheafMorphism, make_morphism
from .parsing import parse_poly


def morphism_to_json(phi: SheafMorphism) -> dict:
    return {
        "field": phi.field.to_json(),
        "source": list(phi.source.twists),
        "target": list(phi.target.twists),
        "entries": [[phi.entry(i, j).to_str() for j in range(phi.shape[1])]
                    for i in range(phi.shape[0])],
    }


def morphism_from_json(data, field: Field | None = None) -> SheafMorphism:
    """Parse the morphism format.  ``field``, if given, must match the file."""
    if not isinstance(data, dict):
        raise ParseError("morphism must be a JSON object")
    missing = {"field", "source", "target", "entries"} - set(data)
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    file_field = Field.from_json(data["field"])
    if field is not None:
        field.check_same(file_field)
    try:
        source = [int(t) for t in data["source"]]
        target = [int(t) for t in data["target"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"twists must be integer lists: {exc}") from None
    rows = data["entries"]
    if not isinstance(rows, list) or len(rows) != len(target) or any(
        not isinstance(r, list) or len(r) != len(source) for r in rows
    ):
        raise ShapeError(f"entries must form a {len(target)}x{len(source)} list of lists")
    entries = [[parse_poly(str(cell), file_field) for cell in row] for row in rows]
    return make_morphism(file_field, source, target, entries)


def dumps_morphism(phi: SheafMorphism) -> str:
    return json.dumps(morphism_to_json(phi))


def loads_morphism(text: str, field: Field | None = None) -> SheafMorphism:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return morphism_from_json(data, field)


def read_morphism(path, field: Field | None = None) -> SheafMorphism:
    return loads_morphism(Path(path).read_text(encoding="utf-8"), field)


def write_morphism(phi: SheafMorphism, path) -> None:
    Path(path).write_text(dumps_morphism(phi) + "\n", encoding="utf-8")


def points_from_json(data, field: Field):
    """A list of coordinate triples (strings or numbers) -> list of PointP2."""
    from .geometry import PointP2

    if not isinstance(data, list):
        raise ParseError("points must be a JSON list")
    out = []
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 3:
            raise ParseError(f"a point needs three coordinates, got {item!r}")
        coords = []
        for c in item:
            poly = parse_poly(str(c), field)
            if poly.degree != 0:
                raise ParseError(f"coordinate {c!r} is not a constant")
            coords.append(poly.coeffs[0])
        out.append(PointP2.make(field, coords))
    return out


def read_points(path, field: Field):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return points_from_json(data, field)
