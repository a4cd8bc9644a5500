"""Pseudo-barycentric systems, subdivided levels, the chain maps sd and T,
prism triangulations and bad faces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .allowability import Allowability, Ids, Realization, build_envelope, chain_boundary
from .errors import NotMinimal
from .exact_geometry import (
    GeoSimplex,
    affine_dim,
    convex_weights,
    local_frame,
    StandardSimplex,
    sample_pseudobarycentre,
    sgp_trivial,
    simplex_volume_local,
    sq_diameter,
    strong_general_position,
    to_local,
    triangulate,
)
from .extended import ext_sub

Chain = Dict[Tuple[int, ...], int]


def unit(n: int, i: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(int(i == j)) for j in range(n))


def proper_faces(key: Ids) -> List[Ids]:
    return [f for k in range(1, len(key)) for f in itertools.combinations(key, k)]


def flags(key: Ids) -> List[Tuple[Ids, ...]]:
    """Full flags key = f_0 > f_1 > ... > f_l (a vertex), top first."""
    if len(key) == 1:
        return [(key,)]
    out = []
    for i in range(len(key)):
        for rest in flags(key[:i] + key[i + 1:]):
            out.append((key,) + rest)
    return out


@dataclass
class Choice:
    point: int
    bary: Tuple[Fraction, ...]
    attempts: int = 0


class PseudoBarycentricSystem:
    """Memoized choice of one centre per simplex, faces before cofaces.

    ``kind="pseudo"`` samples pseudo-barycentres in strong general position with
    the envelopes; ``kind="barycentric"`` uses exact barycentres.
    """

    def __init__(self, real: Realization, seed=0, kind: str = "pseudo", max_attempts: int = 10000):
        self.real = real
        self.seed = seed
        self.kind = kind
        self.max_attempts = max_attempts
        self.choices: Dict[Ids, Choice] = {}
        self.key_of: Dict[int, Ids] = {}

    # -- construction

    def center(self, key: Sequence[int]) -> int:
        key = tuple(sorted(key))
        got = self.choices.get(key)
        if got is None:
            got = self._build(key)
            self.choices[key] = got
            self.key_of.setdefault(got.point, key)
        return got.point

    def _build(self, key: Ids) -> Choice:
        if len(key) == 1:
            return Choice(key[0], (Fraction(1),))
        for f in proper_faces(key):
            self.center(f)
        ell = len(key) - 1
        if self.kind == "barycentric":
            lam = tuple(Fraction(1, ell + 1) for _ in key)
            return Choice(self.real.combine(key, lam), lam)
        delta = self.domain(key)
        env = self.envelope_pieces(key)
        boundary = self.boundary_faces(key) if any(not sgp_trivial(T, delta) for T in env) else []
        forbidden = [T for T in env if T.dim < ell]
        ch = sample_pseudobarycentre(
            delta, boundary, env, forbidden, seed=self.seed, key=",".join(map(str, key)),
            max_attempts=self.max_attempts,
        )
        return Choice(self.real.combine(key, ch.bary), ch.bary, ch.attempts)

    # -- domain coordinates

    @staticmethod
    def domain(key: Ids) -> GeoSimplex:
        return StandardSimplex(len(key))

    def coords_in(self, face: Ids, key: Ids) -> Tuple[Fraction, ...]:
        """Domain coordinates in Δ_key of the centre of ``face``."""
        lam = self.choices[tuple(face)].bary
        pos = {v: i for i, v in enumerate(key)}
        out = [Fraction(0)] * len(key)
        for v, l in zip(face, lam):
            out[pos[v]] = l
        return tuple(out)

    def envelope_pieces(self, key: Ids) -> List[GeoSimplex]:
        sigma = self.real.simplex(key)
        out: List[GeoSimplex] = []
        for sid in sorted(self.real.preimage_dims(key)):
            out.extend(build_envelope(sigma, sid).pieces)
        return out

    def boundary_faces(self, key: Ids) -> List[GeoSimplex]:
        """All simplexes of the subdivided boundary, in domain coordinates of key."""
        seen = set()
        out = []
        for f in proper_faces(key):
            for fl in flags(f):
                for k in range(1, len(fl) + 1):
                    for sub in itertools.combinations(fl, k):
                        if sub in seen:
                            continue
                        seen.add(sub)
                        out.append(GeoSimplex(tuple(self.coords_in(g, key) for g in sub)))
        return out

    def cells(self, key: Sequence[int]) -> List[Ids]:
        """Top cells of the subdivision of key, as centre ids ordered top first."""
        key = tuple(sorted(key))
        self.center(key)
        return [tuple(self.choices[f].point for f in fl) for fl in flags(key)]

    def cell_flags(self, key: Sequence[int]) -> List[Tuple[Ids, ...]]:
        key = tuple(sorted(key))
        self.center(key)
        return flags(key)

    # -- post hoc validation

    def check(self, key: Sequence[int]) -> Dict[str, bool]:
        """Structural checks of the subdivision of one simplex.

        PB1 centre interior, PB2 faces reuse their own centres, PB3 top cells
        are cones on facet cells, PB4 squared cell diameters at most
        (2l/(2l+1))^2 times the domain's, PB5 centre in strong general position
        with every envelope piece and boundary face."""
        key = tuple(sorted(key))
        self.center(key)
        ell = len(key) - 1
        ch = self.choices[key]
        res = {"PB1": all(v > 0 for v in ch.bary) if ell > 0 else ch.point == key[0]}
        top = self.cell_flags(key)
        # PB2 / PB3: each top cell is the centre coned onto a top cell of a facet
        facet_cells = {}
        for i in range(len(key)):
            f = key[:i] + key[i + 1:]
            if f:
                facet_cells.update({fl: f for fl in flags(f)})
        res["PB2"] = all(self.choices[f].point == self.center(f) for f in proper_faces(key))
        res["PB3"] = ell == 0 or all(fl[0] == key and fl[1:] in facet_cells for fl in top)
        limit = Fraction(2 * ell, 2 * ell + 1) ** 2 * 2
        res["PB4"] = ell == 0 or all(
            sq_diameter([self.coords_in(g, key) for g in fl]) <= limit for fl in top
        )
        if self.kind == "pseudo" and ell > 0:
            env = self.envelope_pieces(key)
            u = self.coords_in(key, key)
            delta = self.domain(key)
            env = [T for T in env if not sgp_trivial(T, delta)]
            bfaces = self.boundary_faces(key) + [None] if env else []
            res["PB5"] = all(strong_general_position(u, T, B, delta) for T in env for B in bfaces)
        else:
            res["PB5"] = True
        return res

    def max_cell_ratio(self, key: Sequence[int]) -> Fraction:
        """Largest squared cell diameter over the squared domain diameter."""
        key = tuple(sorted(key))
        if len(key) == 1:
            return Fraction(0)
        return max(sq_diameter([self.coords_in(g, key) for g in fl]) for fl in self.cell_flags(key)) / 2


# --------------------------------------------------------------------- levels


@dataclass
class Level:
    """A triangulation of |X| by linear simplexes; tuples of point ids sorted ascending."""

    simplexes: Dict[int, List[Ids]]
    parent: Optional["Level"] = None

    @property
    def dim(self) -> int:
        return max(k for k, v in self.simplexes.items() if v)

    def all(self) -> List[Ids]:
        return [s for k in sorted(self.simplexes) for s in self.simplexes[k]]

    def count(self) -> Dict[int, int]:
        return {k: len(v) for k, v in sorted(self.simplexes.items())}


def _close(tops: Iterable[Ids]) -> Dict[int, List[Ids]]:
    allf = set()
    for s in tops:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            allf.update(itertools.combinations(s, k))
    out: Dict[int, List[Ids]] = {}
    for s in allf:
        out.setdefault(len(s) - 1, []).append(s)
    return {k: sorted(v) for k, v in sorted(out.items())}


def base_level(real: Realization, working: Optional[Tuple[Mapping, Sequence]] = None) -> Level:
    """Level 0: the complex's own triangulation, or a working triangulation
    ``(points by name, simplexes)`` of the same polyhedron."""
    X = real.X
    if working is None:
        tops = [tuple(real.vertex_ids[v] for v in s) for s in X.simplexes]
        return Level(_close(tops))
    pts, simplexes = working
    ids = {name: real.add_point(p) for name, p in pts.items()}
    tops = [tuple(ids[v] for v in s) for s in simplexes]
    for t in tops:
        real.simplex(t)
    return Level(_close(tops))


def refine(level: Level, system: PseudoBarycentricSystem) -> Level:
    """The subdivided level: one simplex per chain of faces."""
    tops = []
    for k in sorted(level.simplexes, reverse=True):
        for s in level.simplexes[k]:
            tops.extend(system.cells(s))
    return Level(_close(tops), level)


def build_levels(real: Realization, system: PseudoBarycentricSystem, depth: int, working=None) -> List[Level]:
    levels = [base_level(real, working)]
    for _ in range(depth):
        levels.append(refine(levels[-1], system))
    return levels


# ------------------------------------------------------------ chain operators


def add(a: Chain, b: Mapping, scale: int = 1) -> Chain:
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + scale * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def cone_chain(u: int, chain: Mapping) -> Chain:
    return {(u,) + s: c for s, c in chain.items() if c}


class ChainOperators:
    """sd and T on ordered linear chains, memoized per ordered simplex."""

    def __init__(self, system: PseudoBarycentricSystem):
        self.system = system
        self._sd: Dict[Ids, Chain] = {}
        self._T: Dict[Ids, Chain] = {}

    def sd_simplex(self, s: Ids) -> Chain:
        got = self._sd.get(s)
        if got is None:
            if len(s) == 1:
                got = {s: 1}
            else:
                u = self.system.center(s)
                got = cone_chain(u, self.sd(chain_boundary({s: 1})))
            self._sd[s] = got
        return got

    def sd(self, chain: Mapping) -> Chain:
        out: Chain = {}
        for s, c in chain.items():
            out = add(out, self.sd_simplex(s), c)
        return out

    def T_simplex(self, s: Ids) -> Chain:
        got = self._T.get(s)
        if got is None:
            u = self.system.center(s)
            inner = add({s: 1}, self.T(chain_boundary({s: 1})), -1)
            got = cone_chain(u, inner)
            self._T[s] = got
        return got

    def T(self, chain: Mapping) -> Chain:
        out: Chain = {}
        for s, c in chain.items():
            out = add(out, self.T_simplex(s), c)
        return out


def sd_chain(chain: Mapping, system: PseudoBarycentricSystem) -> Chain:
    return ChainOperators(system).sd(chain)


def homotopy_T(chain: Mapping, system: PseudoBarycentricSystem) -> Chain:
    return ChainOperators(system).T(chain)


def canonical(chain: Mapping) -> Chain:
    """Sort each simplex's vertices (with the permutation sign); drop degenerate ones."""
    out: Chain = {}
    for s, c in chain.items():
        if len(set(s)) < len(s):
            continue
        perm = sorted(range(len(s)), key=lambda i: s[i])
        inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
        key = tuple(s[i] for i in perm)
        out = add(out, {key: c * (-1) ** inv})
    return out


def homotopy_defect(chain: Mapping, ops: ChainOperators) -> Chain:
    """ξ − sd ξ − ∂Tξ − T∂ξ, which vanishes identically."""
    lhs = add(dict(chain), ops.sd(chain), -1)
    rhs = add(chain_boundary(ops.T(chain)), ops.T(chain_boundary(chain)))
    return add(lhs, rhs, -1)


# ----------------------------------------------------------------- prisms


PrismCell = Tuple[Tuple[int, int], ...]


class PrismTriangulation:
    """Recursive triangulation of Δ×[0,1]: (u,1) coned onto the boundary prisms and Δ×{0}."""

    def __init__(self, system: PseudoBarycentricSystem):
        self.system = system
        self._cells: Dict[Ids, List[PrismCell]] = {}

    def cells(self, key: Sequence[int]) -> List[PrismCell]:
        key = tuple(sorted(key))
        got = self._cells.get(key)
        if got is None:
            if len(key) == 1:
                got = [((key[0], 0), (key[0], 1))]
            else:
                apex = (self.system.center(key), 1)
                got = []
                for i in range(len(key)):
                    for c in self.cells(key[:i] + key[i + 1:]):
                        got.append((apex,) + c)
                got.append((apex,) + tuple((v, 0) for v in key))
            self._cells[key] = got
        return got

    def _domain_point(self, pid: int, key: Ids) -> Tuple[Fraction, ...]:
        face = self.system.key_of.get(pid, (pid,))
        return self.system.coords_in(face, key)

    def check(self, key: Sequence[int]) -> Dict[str, object]:
        """Structural checks of one prism.

        PB6 a vertex gives the single segment, PB7 facet prisms are faces,
        PB8 every cell has the top centre as apex, PB9 the projection of each
        cell is the simplex, one cell of the subdivision, or a full-dimensional
        union of such cells (PB9_literal drops the last option)."""
        key = tuple(sorted(key))
        cells = self.cells(key)
        ell = len(key) - 1
        res: Dict[str, object] = {}
        res["PB6"] = ell > 0 or cells == [((key[0], 0), (key[0], 1))]
        ok7 = True
        for i in range(len(key)):
            f = key[:i] + key[i + 1:]
            if not f:
                continue
            sub = {c[1:] for c in cells if c[1:] in set(self.cells(f))}
            ok7 &= sub == set(self.cells(f))
        res["PB7"] = ok7
        apex = (self.system.center(key), 1)
        res["PB8"] = ell == 0 or all(c[0] == apex for c in cells)
        literal, relaxed = self._projection(key, cells)
        res["PB9_literal"] = literal
        res["PB9"] = relaxed
        return res

    def _projection(self, key: Ids, cells: List[PrismCell]) -> Tuple[bool, bool]:
        ell = len(key) - 1
        if ell == 0:
            return True, True
        sub_cells = [frozenset(c) for c in self.system.cells(key)]
        delta_set = frozenset(key)
        frame = local_frame([unit(ell + 1, i) for i in range(ell + 1)])
        loc = lambda p: to_local(p, frame)
        cell_pts = [[self._domain_point(p, key) for p in c] for c in sub_cells]
        cell_vol = [simplex_volume_local([loc(p) for p in pts]) for pts in cell_pts]
        literal = relaxed = True
        for H in cells:
            proj = frozenset(p for p, _ in H)
            if proj == delta_set or proj in sub_cells:
                continue
            literal = False
            pts = [self._domain_point(p, key) for p in proj]
            if affine_dim(pts) != ell:
                relaxed = False
                continue
            vol = sum((simplex_volume_local([loc(p) for p in s]) for s in triangulate(pts)), Fraction(0))
            inside = sum(
                (v for cp, v in zip(cell_pts, cell_vol) if all(convex_weights(pts, p) is not None for p in cp)),
                Fraction(0),
            )
            relaxed &= inside == vol
        return literal, relaxed


def build_prism(key: Sequence[int], system: PseudoBarycentricSystem) -> PrismTriangulation:
    pr = PrismTriangulation(system)
    pr.cells(key)
    return pr


def prism_chain(sigma: Sequence) -> Chain:
    """Σ (−1)^j [a_0..a_j, b_j..b_m] over labels a_i = (v_i, 0), b_i = (v_i, 1)."""
    m = len(sigma) - 1
    out: Chain = {}
    for j in range(m + 1):
        s = tuple((v, 0) for v in sigma[: j + 1]) + tuple((v, 1) for v in sigma[j:])
        out = add(out, {s: (-1) ** j})
    return out


def prism_operator(chain: Mapping) -> Chain:
    out: Chain = {}
    for s, c in chain.items():
        out = add(out, prism_chain(s), c)
    return out


def level_inclusion(chain: Mapping, h: int) -> Chain:
    return {tuple((v, h) for v in s): c for s, c in chain.items()}


# --------------------------------------------------------------- bad faces


@dataclass
class BadFaceReport:
    cell: Ids
    face: Optional[Tuple[int, ...]]
    stratum: Optional[str] = None
    values: Optional[Tuple] = None
    complete: bool = True
    critical: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def face_points(self) -> Optional[frozenset]:
        if self.face is None:
            return None
        return frozenset(self.cell[i] for i in self.face)


def critical_faces(cell: Ids, allow: Allowability) -> List[Tuple[Tuple[int, ...], str, int]]:
    """Proper faces F (index tuples) with 0 <= dim(F ∩ σ⁻¹S) = dim Δ − Dp̄(S) − 2."""
    real = allow.real
    ell = len(cell) - 1
    out = []
    for k in range(1, ell + 1):
        for idx in itertools.combinations(range(ell + 1), k):
            dims = real.preimage_dims(tuple(cell[i] for i in idx))
            for sid, (d, _) in sorted(dims.items()):
                target = ext_sub(ell - 2, allow.dual(sid))
                if d >= 0 and d == target:
                    out.append((idx, sid, d))
                    break
    return out


def bad_face(cell: Ids, allow: Allowability) -> BadFaceReport:
    """The minimum critical face of a top cell ordered top first (centre of the
    largest face first); complete faces are the suffixes of that order."""
    crit = critical_faces(cell, allow)
    if not crit:
        return BadFaceReport(cell, None)
    sets = [frozenset(c[0]) for c in crit]
    minimum = [c for c, s in zip(crit, sets) if all(s <= t for t in sets)]
    if not minimum:
        raise NotMinimal(f"critical faces of {cell} have no minimum")
    idx, sid, d = minimum[0]
    ell = len(cell) - 1
    complete = tuple(idx) == tuple(range(ell + 1 - len(idx), ell + 1))
    return BadFaceReport(cell, idx, sid, (d, ext_sub(ell - 2, allow.dual(sid))), complete, [c[0] for c in crit])


def facet_indices(n: int) -> List[Tuple[int, ...]]:
    return [tuple(j for j in range(n) if j != i) for i in range(n)]


def check_bad_faces(key: Ids, system: PseudoBarycentricSystem, allow: Allowability) -> Dict[str, object]:
    """Minimum/completeness, codim-one criterion and shared-face equality for
    every top cell of the subdivision of an allowable simplex."""
    cells = system.cells(key)
    reports = {c: bad_face(c, allow) for c in cells}
    complete = all(r.complete for r in reports.values())
    codim1 = True
    witnesses = []
    for c, r in reports.items():
        for idx in facet_indices(len(c)):
            tau = tuple(c[i] for i in idx)
            bad = not allow.allowable(tau, "poly")
            contains = r.face is not None and set(r.face) <= set(idx)
            if bad != contains:
                codim1 = False
                witnesses.append((c, idx))
    shared = True
    by_face: Dict[frozenset, List[Ids]] = {}
    for c in cells:
        for idx in facet_indices(len(c)):
            by_face.setdefault(frozenset(c[i] for i in idx), []).append(c)
    for tau, cs in by_face.items():
        if len(cs) < 2:
            continue
        if allow.allowable(tuple(sorted(tau)), "poly"):
            continue
        pts = {reports[c].face_points for c in cs}
        if len(pts) != 1 or None in pts or not next(iter(pts)) <= tau:
            shared = False
    return {
        "cells": len(cells),
        "with_bad_face": sum(r.face is not None for r in reports.values()),
        "complete": complete,
        "codim1": codim1,
        "shared": shared,
        "witnesses": witnesses,
    }
