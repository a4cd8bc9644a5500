"""JSON complex documents: parsing, validation and canonical serialization.

A document looks like::

    {
      "format": 1,
      "name": "cone_circle",
      "formal_dim": 2,
      "simplexes": [["a", "b", "v"], ...],
      "filtration": {"mode": "vertex", "values": {"v": 0}},
      "coordinates": {"a": ["1", "1/2"], ...},
      "perversities": {"top": "t"},
      "working_triangulation": {"points": {"A": ["0", "0"]}, "simplexes": [["A", "B", "C"]]},
      "cover": {"U": [["v"]], "V": [["a"], ["b"]]}
    }

Only ``formal_dim`` and ``simplexes`` are required.  Coordinates are exact
rationals written ``"p/q"`` or ``"p"``; without them vertices are placed on
the moment curve.  Simplex-mode filtrations list ``[[vertices], value]`` pairs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .errors import ParseError, ValidationError
from .filtered_complex import FilteredComplex, build_complex

FORMAT_VERSION = 1
_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


@dataclass
class ComplexDocument:
    formal_dim: int
    simplexes: List[List[str]]
    filtration_mode: str = "vertex"
    filtration: Any = None
    coordinates: Optional[Dict[str, Tuple[Fraction, ...]]] = None
    perversities: Dict[str, str] = field(default_factory=dict)
    working: Optional[Tuple[Dict[str, Tuple[Fraction, ...]], List[List[str]]]] = None
    cover: Optional[Dict[str, List[List[str]]]] = None
    name: str = ""
    format: int = FORMAT_VERSION

    def complex(self) -> FilteredComplex:
        filt = self.filtration
        if self.filtration_mode == "simplex" and filt is not None:
            filt = {tuple(s): v for s, v in filt}
        return build_complex(self.simplexes, filt, self.formal_dim, self.filtration_mode, self.coordinates)

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"format": self.format, "formal_dim": self.formal_dim}
        if self.name:
            out["name"] = self.name
        out["simplexes"] = [list(s) for s in self.simplexes]
        if self.filtration is not None:
            if self.filtration_mode == "simplex":
                values = [[list(s), v] for s, v in self.filtration]
            else:
                values = dict(sorted(self.filtration.items()))
            out["filtration"] = {"mode": self.filtration_mode, "values": values}
        if self.coordinates is not None:
            out["coordinates"] = {v: [str(x) for x in p] for v, p in sorted(self.coordinates.items())}
        if self.perversities:
            out["perversities"] = dict(sorted(self.perversities.items()))
        if self.working is not None:
            pts, simp = self.working
            out["working_triangulation"] = {
                "points": {v: [str(x) for x in p] for v, p in sorted(pts.items())},
                "simplexes": [list(s) for s in simp],
            }
        if self.cover is not None:
            out["cover"] = {k: [list(s) for s in v] for k, v in sorted(self.cover.items())}
        return out


def dumps(doc: ComplexDocument) -> str:
    """Canonical serialization (sorted keys, fixed indentation, trailing newline)."""
    return json.dumps(doc.to_json(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def _position(text: str, needle: str) -> Tuple[int, int]:
    i = text.find(needle)
    if i < 0:
        return 0, 0
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


def _rational(s: Any, text: str) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        line, col = _position(text, json.dumps(s))
        raise ParseError(f"coordinate {s!r} is not a rational string", line, col)
    m = _RATIONAL.match(s)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        line, col = _position(text, json.dumps(s))
        raise ParseError(f"malformed rational {s!r}", line, col)
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def _point(p: Any, text: str) -> Tuple[Fraction, ...]:
    if not isinstance(p, list) or not p:
        raise ParseError(f"coordinates must be a nonempty list, got {p!r}", *_position(text, json.dumps(p)))
    return tuple(_rational(x, text) for x in p)


def _simplex_list(raw: Any, what: str) -> List[List[str]]:
    if not isinstance(raw, list) or not all(isinstance(s, list) for s in raw):
        raise ValidationError(f"{what} must be a list of vertex lists")
    return [[str(v) for v in s] for s in raw]


def loads(text: str) -> ComplexDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("a document is a JSON object", 1, 1)
    version = data.get("format", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported format version {version!r}")
    if "formal_dim" not in data or "simplexes" not in data:
        raise ValidationError("documents need 'formal_dim' and 'simplexes'")
    formal_dim = data["formal_dim"]
    if not isinstance(formal_dim, int) or isinstance(formal_dim, bool):
        raise ValidationError("formal_dim must be an integer")
    simplexes = _simplex_list(data["simplexes"], "simplexes")
    mode, values = "vertex", None
    if "filtration" in data:
        f = data["filtration"]
        if not isinstance(f, dict):
            raise ValidationError("filtration must be an object with 'mode' and 'values'")
        mode = f.get("mode", "vertex")
        values = f.get("values")
        if mode == "vertex":
            if not isinstance(values, dict):
                raise ValidationError("vertex filtrations map vertex ids to values")
            values = {str(k): _int(v) for k, v in values.items()}
        elif mode == "simplex":
            if not isinstance(values, list):
                raise ValidationError("simplex filtrations list [simplex, value] pairs")
            values = [([str(v) for v in s], _int(x)) for s, x in values]
        else:
            raise ValidationError(f"unknown filtration mode {mode!r}")
    coords = None
    if "coordinates" in data:
        coords = {str(k): _point(p, text) for k, p in data["coordinates"].items()}
    working = None
    if "working_triangulation" in data:
        w = data["working_triangulation"]
        pts = {str(k): _point(p, text) for k, p in w.get("points", {}).items()}
        working = (pts, _simplex_list(w.get("simplexes", []), "working simplexes"))
    cover = None
    if "cover" in data:
        cover = {k: _simplex_list(v, f"cover {k}") for k, v in data["cover"].items()}
    doc = ComplexDocument(
        formal_dim=formal_dim,
        simplexes=simplexes,
        filtration_mode=mode,
        filtration=values,
        coordinates=coords,
        perversities={str(k): str(v) for k, v in data.get("perversities", {}).items()},
        working=working,
        cover=cover,
        name=str(data.get("name", "")),
        format=version,
    )
    return doc


def _int(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"filtration values are integers, got {v!r}")
    return v


def load(path) -> ComplexDocument:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(doc: ComplexDocument, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
