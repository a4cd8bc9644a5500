"""Preimages of strata under linear simplexes, simplicial envelopes and allowability."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import NotInRealization
from .exact_geometry import (
    GeoSimplex,
    Point,
    affine_dim,
    barycentre,
    combo,
    intersection_weights,
    point,
    triangulate,
)
from .extended import NEG_INF, ExtInt, ext_sub
from .filtered_complex import FilteredComplex, Perversity, Simplex, dual_perversity, faces

Ids = Tuple[int, ...]


@dataclass
class Piece:
    """The polytope Δ ∩ σ⁻¹(closed cell) in domain barycentric coordinates."""

    cell: Simplex
    vertices: List[Tuple[Fraction, ...]]
    open_met: bool
    dim: ExtInt
    support: frozenset

    @property
    def skeleton_dim(self) -> ExtInt:
        return len(self.support) - 1 if self.vertices else NEG_INF


class Realization:
    """Geometric realization of a filtered complex with an interned point table.

    Each registered point remembers its open carrier cell and its positive
    barycentric weights there.
    """

    def __init__(self, X: FilteredComplex):
        self.X = X
        self.points: List[Point] = []
        self.index: Dict[Point, int] = {}
        self.carriers: List[Tuple[Simplex, Tuple[Fraction, ...]]] = []
        self.geo: Dict[Simplex, GeoSimplex] = {s: GeoSimplex(tuple(X.coords[v] for v in s)) for s in X.simplexes}
        cellset = set(X.simplexes)
        self.maximal = [
            s for s in X.simplexes
            if not any(len(t) == len(s) + 1 and set(s) <= set(t) for t in cellset)
        ]
        self.vertex_ids = {}
        for v in X.vertices:
            self.vertex_ids[v] = self._register(X.coords[v], ((v,), (Fraction(1),)))
        self._profiles: Dict[Ids, List[Piece]] = {}
        self._dims: Dict[Ids, Dict[str, Tuple[ExtInt, ExtInt]]] = {}
        self._singular_cells = {
            s: X.stratum_of(s) for s in X.simplexes if not X.stratum_of(s).regular
        }

    # -- points

    def _register(self, x: Point, carrier) -> int:
        pid = self.index.get(x)
        if pid is not None:
            return pid
        pid = len(self.points)
        self.points.append(x)
        self.index[x] = pid
        self.carriers.append(carrier)
        return pid

    def locate(self, x: Point) -> Tuple[Simplex, Tuple[Fraction, ...]]:
        """Open carrier of ``x`` and its barycentric weights there."""
        for cell in self.maximal:
            lam = self.geo[cell].bary(x)
            if lam is not None and all(v >= 0 for v in lam):
                keep = [(v, l) for v, l in zip(cell, lam) if l > 0]
                return tuple(v for v, _ in keep), tuple(l for _, l in keep)
        raise NotInRealization(f"point {[str(c) for c in x]} is outside the realization")

    def add_point(self, x: Sequence) -> int:
        x = point(x)
        pid = self.index.get(x)
        if pid is not None:
            return pid
        return self._register(x, self.locate(x))

    def weights(self, pid: int) -> Dict[str, Fraction]:
        cell, lam = self.carriers[pid]
        return dict(zip(cell, lam))

    def common_cell(self, ids: Iterable[int]) -> Optional[Simplex]:
        """The smallest closed cell containing all the points, if one exists."""
        verts = set()
        for i in ids:
            verts.update(self.carriers[i][0])
        s = self.X.canon(verts)
        return s if s in self.X.filtration else None

    def combine(self, ids: Sequence[int], w: Sequence[Fraction]) -> int:
        """Register the point sum(w_i p_i) with its carrier computed exactly."""
        x = combo(w, [self.points[i] for i in ids])
        pid = self.index.get(x)
        if pid is not None:
            return pid
        cell = self.common_cell(ids)
        if cell is None:
            return self._register(x, self.locate(x))
        acc: Dict[str, Fraction] = {}
        for i, wi in zip(ids, w):
            if wi:
                for v, l in zip(*self.carriers[i]):
                    acc[v] = acc.get(v, Fraction(0)) + wi * l
        car = self.X.canon(v for v, l in acc.items() if l > 0)
        return self._register(x, (car, tuple(acc[v] for v in car)))

    def simplex(self, ids: Sequence[int]) -> "LinearSimplex":
        return LinearSimplex(self, tuple(ids))

    # -- preimages

    def pieces(self, ids: Ids) -> List[Piece]:
        """Nonempty pieces of σ⁻¹(closed singular cell), one per singular cell met."""
        got = self._profiles.get(ids)
        if got is None:
            cell = self.common_cell(ids)
            got = self._pieces_single(ids, cell) if cell is not None else self._pieces_general(ids)
            self._profiles[ids] = got
        return got

    def _pieces_single(self, ids: Ids, U: Simplex) -> List[Piece]:
        n = len(ids)
        supp = [frozenset(self.carriers[i][0]) for i in ids]
        out = []
        for f in faces(U):
            if f not in self._singular_cells:
                continue
            fs = frozenset(f)
            D = [i for i in range(n) if supp[i] <= fs]
            if not D:
                continue
            met = frozenset().union(*(supp[i] for i in D)) == fs
            verts = [tuple(Fraction(int(i == j)) for j in range(n)) for i in D]
            out.append(Piece(f, verts, met, len(D) - 1, frozenset(D)))
        return out

    def _pieces_general(self, ids: Ids) -> List[Piece]:
        img = GeoSimplex(tuple(self.points[i] for i in ids))
        out = []
        for c in self._singular_cells:
            sols = intersection_weights((img, self.geo[c]))
            if not sols:
                continue
            verts = list(dict.fromkeys(w[0] for w in sols))
            met = all(any(w[1][j] for w in sols) for j in range(len(c)))
            supp = frozenset(i for v in verts for i, x in enumerate(v) if x)
            out.append(Piece(c, verts, met, affine_dim(verts), supp))
        return out

    def meets_cell(self, ids: Ids, c: Simplex) -> bool:
        """Whether the simplex meets the closed cell ``c``."""
        cell = self.common_cell(ids)
        if cell is not None:
            # σ lies in the closed cell, where the preimage of a closed face is
            # spanned by the vertices carried by that face
            cs = set(c)
            return any(set(self.carriers[i][0]) <= cs for i in ids)
        img = GeoSimplex(tuple(self.points[i] for i in ids))
        return bool(intersection_weights((img, self.geo[c])))

    def preimage_dims(self, ids: Ids) -> Dict[str, Tuple[ExtInt, ExtInt]]:
        """Per singular stratum met: (polyhedral dim, skeleton dim) of σ⁻¹S."""
        got = self._dims.get(ids)
        if got is not None:
            return got
        out: Dict[str, Tuple[ExtInt, ExtInt]] = {}
        for pc in self.pieces(ids):
            if not pc.open_met:
                continue
            sid = self._singular_cells[pc.cell].id
            d, k = out.get(sid, (NEG_INF, NEG_INF))
            out[sid] = (max(d, pc.dim), max(k, pc.skeleton_dim))
        self._dims[ids] = out
        return out

    def image_in_realization(self, ids: Ids) -> bool:
        if self.common_cell(ids) is not None:
            return True
        pts = [self.points[i] for i in ids]
        probes = [barycentre(pts)] + [barycentre([p, q]) for k, p in enumerate(pts) for q in pts[k + 1:]]
        try:
            for x in probes:
                self.locate(x)
        except NotInRealization:
            return False
        return True


@dataclass(frozen=True)
class LinearSimplex:
    real: Realization = field(repr=False, compare=False)
    ids: Ids

    def __post_init__(self):
        if not self.real.image_in_realization(self.ids):
            raise NotInRealization(f"simplex {self.ids} leaves the realization")

    @property
    def dim(self) -> int:
        return len(self.ids) - 1

    @property
    def points(self) -> List[Point]:
        return [self.real.points[i] for i in self.ids]

    def face(self, idx: Sequence[int]) -> "LinearSimplex":
        return LinearSimplex(self.real, tuple(self.ids[i] for i in idx))


def preimage_dim_polyhedral(sigma: LinearSimplex, stratum_id: str) -> ExtInt:
    return sigma.real.preimage_dims(sigma.ids).get(stratum_id, (NEG_INF, NEG_INF))[0]


def preimage_dim_skeleton(sigma: LinearSimplex, stratum_id: str) -> ExtInt:
    return sigma.real.preimage_dims(sigma.ids).get(stratum_id, (NEG_INF, NEG_INF))[1]


# ----------------------------------------------------------------- envelopes


@dataclass
class SimplicialEnvelope:
    stratum_id: str
    pieces: List[GeoSimplex]
    max_dim: ExtInt


def build_envelope(sigma: LinearSimplex, stratum_id: str) -> SimplicialEnvelope:
    real = sigma.real
    out: List[GeoSimplex] = []
    for pc in real.pieces(sigma.ids):
        if not pc.open_met or real._singular_cells[pc.cell].id != stratum_id:
            continue
        for s in triangulate(pc.vertices):
            out.append(GeoSimplex(s))
    return SimplicialEnvelope(stratum_id, out, max((s.dim for s in out), default=NEG_INF))


def envelopes(sigma: LinearSimplex) -> List[SimplicialEnvelope]:
    sids = sorted(sigma.real.preimage_dims(sigma.ids))
    return [build_envelope(sigma, sid) for sid in sids]


# --------------------------------------------------------------- allowability


class Allowability:
    """Allowability tests for one perversity, with the dual perversity precomputed."""

    def __init__(self, real: Realization, p: Perversity):
        self.real = real
        self.p = p
        self.dual = dual_perversity(p, real.X)
        self._cache: Dict[Tuple[Ids, str], bool] = {}

    def bound(self, ell: int, stratum_id: str) -> ExtInt:
        return ext_sub(ell - 2, self.dual(stratum_id))

    def allowable(self, ids: Ids, notion: str = "poly") -> bool:
        key = (ids, notion)
        got = self._cache.get(key)
        if got is None:
            ell = len(ids) - 1
            slot = 0 if notion == "poly" else 1
            got = all(
                dims[slot] <= self.bound(ell, sid)
                for sid, dims in self.real.preimage_dims(ids).items()
            )
            self._cache[key] = got
        return got

    def violations(self, ids: Ids, notion: str = "poly") -> List[Tuple[str, ExtInt, ExtInt]]:
        ell = len(ids) - 1
        slot = 0 if notion == "poly" else 1
        return [
            (sid, dims[slot], self.bound(ell, sid))
            for sid, dims in sorted(self.real.preimage_dims(ids).items())
            if not dims[slot] <= self.bound(ell, sid)
        ]


def is_allowable(sigma: LinearSimplex, p: Perversity, notion: str = "poly") -> bool:
    return Allowability(sigma.real, p).allowable(sigma.ids, notion)


def chain_boundary(chain: Mapping[Ids, int]) -> Dict[Ids, int]:
    out: Dict[Ids, int] = {}
    for s, c in chain.items():
        if len(s) < 2:
            continue
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            out[f] = out.get(f, 0) + (-1) ** i * c
    return {k: v for k, v in out.items() if v}


def is_intersection_chain(chain: Mapping[Ids, int], allow: Allowability, notion: str = "poly") -> bool:
    if not all(allow.allowable(s, notion) for s, c in chain.items() if c):
        return False
    return all(allow.allowable(s, notion) for s in chain_boundary(chain))
