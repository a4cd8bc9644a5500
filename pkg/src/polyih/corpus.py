"""Bundled desk-scale complexes, written as JSON documents under ``corpus/``."""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from .document import ComplexDocument, dumps, load
from .filtered_complex import FilteredComplex, cone_complex

CORPUS_DIR = Path(__file__).with_name("corpus")

RP2_TRIANGLES = [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
    (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4),
]


def _doc_from_complex(X: FilteredComplex, name: str, **extra) -> ComplexDocument:
    tops = [list(s) for s in X.simplexes if not any(len(t) == len(s) + 1 and set(s) <= set(t) for t in X.simplexes)]
    filt = [[list(s), X.filtration[s]] for s in X.simplexes if X.filtration[s] != X.formal_dim]
    return ComplexDocument(
        formal_dim=X.formal_dim,
        simplexes=tops,
        filtration_mode="simplex",
        filtration=[(s, v) for s, v in filt] or None,
        coordinates={v: X.coords[v] for v in X.vertices},
        name=name,
        **extra,
    )


def cycle(names: List[str]) -> List[List[str]]:
    return [[names[i], names[(i + 1) % len(names)]] for i in range(len(names))]


def simplex2() -> ComplexDocument:
    return ComplexDocument(2, [["a", "b", "c"]], name="simplex2")


def circle() -> ComplexDocument:
    return ComplexDocument(1, cycle(["a", "b", "c"]), name="circle")


def two_circles() -> ComplexDocument:
    return ComplexDocument(1, cycle(["a0", "a1", "a2"]) + cycle(["b0", "b1", "b2"]), name="two_circles")


def rp2() -> ComplexDocument:
    return ComplexDocument(2, [[str(v) for v in t] for t in RP2_TRIANGLES], name="rp2")


def torus7() -> ComplexDocument:
    tris = []
    for i in range(7):
        tris.append([str(i), str((i + 1) % 7), str((i + 3) % 7)])
        tris.append([str(i), str((i + 2) % 7), str((i + 3) % 7)])
    return ComplexDocument(2, tris, name="torus7")


def pinched_torus() -> ComplexDocument:
    """A cylinder whose two boundary circles are coned to one point v."""
    tris = []
    for i in range(3):
        j = (i + 1) % 3
        tris += [[f"a{i}", f"a{j}", f"b{i}"], [f"a{j}", f"b{i}", f"b{j}"]]
        tris += [["v", f"a{i}", f"a{j}"], ["v", f"b{i}", f"b{j}"]]
    return ComplexDocument(
        2, tris, "vertex", {"v": 0}, name="pinched_torus",
        perversities={"zero": "0", "top": "t"},
        cover={"U": [["v"]], "V": [[f"a{i}"] for i in range(3)] + [[f"b{i}"] for i in range(3)]},
    )


def suspension_points() -> ComplexDocument:
    """Suspension of two copies of S^0 (four arcs through two cone points)."""
    edges = [[apex, x] for apex in ("n", "s") for x in ("a0", "a1", "b0", "b1")]
    return ComplexDocument(1, edges, "vertex", {"n": 0, "s": 0}, name="suspension_points")


def suspension_two_circles() -> ComplexDocument:
    tris = []
    for apex in ("n", "s"):
        for c in ("a", "b"):
            for i in range(3):
                tris.append([apex, f"{c}{i}", f"{c}{(i + 1) % 3}"])
    return ComplexDocument(2, tris, "vertex", {"n": 0, "s": 0}, name="suspension_two_circles")


def motivating_example() -> ComplexDocument:
    """Cone over a 3-cycle in the plane with the apex at the barycentre of the
    outer triangle, plus that triangle as a working triangulation."""
    q = lambda *xs: tuple(Fraction(x) for x in xs)
    return ComplexDocument(
        2,
        [["v", "a", "b"], ["v", "b", "c"], ["v", "c", "a"]],
        "vertex",
        {"v": 0},
        coordinates={"a": q(0, 0), "b": q(3, 0), "c": q(0, 3), "v": q(1, 1)},
        perversities={"top": "t"},
        working=({"A": q(0, 0), "B": q(3, 0), "C": q(0, 3)}, [["A", "B", "C"]]),
        name="motivating_example",
    )


def cone_of(doc: ComplexDocument, name: str, times: int = 1) -> ComplexDocument:
    X = doc.complex()
    for _ in range(times):
        X = cone_complex(X)
    return _doc_from_complex(X, name)


def build_all() -> Dict[str, ComplexDocument]:
    base = {
        "simplex2": simplex2(),
        "circle": circle(),
        "two_circles": two_circles(),
        "rp2": rp2(),
    }
    docs = dict(base)
    for name, d in base.items():
        docs[f"cone_{name}"] = cone_of(d, f"cone_{name}")
        docs[f"double_cone_{name}"] = cone_of(d, f"double_cone_{name}", 2)
    docs["pinched_torus"] = pinched_torus()
    docs["suspension_points"] = suspension_points()
    docs["suspension_two_circles"] = suspension_two_circles()
    docs["torus7"] = torus7()
    docs["cone_torus7"] = cone_of(torus7(), "cone_torus7")
    docs["motivating_example"] = motivating_example()
    return docs


def write_corpus(directory: Optional[os.PathLike] = None) -> List[Path]:
    directory = Path(directory or CORPUS_DIR)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, doc in sorted(build_all().items()):
        path = directory / f"{name}.json"
        path.write_text(dumps(doc), encoding="utf-8")
        out.append(path)
    return out


def load_corpus(directory: Optional[os.PathLike] = None) -> Dict[str, ComplexDocument]:
    directory = Path(directory or CORPUS_DIR)
    return {p.stem: load(p) for p in sorted(directory.glob("*.json"))}


if __name__ == "__main__":
    for p in write_corpus():
        print(p)
