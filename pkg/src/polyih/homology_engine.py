"""Intersection chain complexes, their homology over Z and Z/p, and the
verification suites (cone formula, Mayer-Vietoris, functoriality, comparison
of the two allowability notions)."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Set, Tuple

import numpy as np

from .allowability import Allowability, Ids, Realization
from .errors import CoverNotOpen, InvariantViolation, NotStratified, ValidationError
from .extended import format_ext
from .filtered_complex import FilteredComplex, Perversity, cone_complex, dual_perversity
from .linalg import (
    column_basis_mod_p,
    integer_kernel_basis,
    invariant_factors,
    matrix_rank_mod_p,
    nullspace_mod_p,
    rank_mod_p,
    rref_mod_p,
    solve_mod_p,
)
from .subdivision import Level, PseudoBarycentricSystem

# Dense Z/p work multiplies int64 matrices; with p below 2**15 no dot product
# of realistic length can overflow.
FIELD_PRIME = 32003


# ------------------------------------------------------------------- rings


@dataclass(frozen=True)
class Ring:
    p: int = 0  # 0 means the integers

    @property
    def tag(self) -> str:
        return "Z" if self.p == 0 else f"Zp:{self.p}"

    @classmethod
    def parse(cls, s: str) -> "Ring":
        s = s.strip()
        if s == "Z":
            return cls(0)
        if s.startswith("Zp:"):
            try:
                p = int(s[3:])
            except ValueError:
                raise ValidationError(f"bad prime in ring {s!r}")
            if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise ValidationError(f"{p} is not prime")
            if p >= 2 ** 31:
                raise ValidationError("primes must be below 2**31")
            return cls(p)
        raise ValidationError(f"unknown ring {s!r}")


# ----------------------------------------------------------- presentations


@dataclass
class ChainComplexPresentation:
    """Intersection chains of one level as a finite free presentation.

    ``generators[k]`` lists the k-simplexes of the level; ``basis[k]`` spans
    the intersection chains {ξ : ξ and ∂ξ allowable} as sparse vectors over
    ``generators[k]``; ``boundary[k]`` holds the boundaries of those vectors
    as sparse columns over ``generators[k-1]``.

    Over Z the intersection chains form a saturated sublattice of the full
    chains (integer points of a rational subspace), and so do their cycles.
    Hence the torsion of H_k equals the torsion of the cokernel of
    ``boundary[k+1]`` in the full chain group, and no change of basis is needed.
    """

    ring: Ring
    generators: Dict[int, List[Ids]]
    allowable: Dict[int, List[bool]]
    basis: Dict[int, List[Dict[int, int]]]
    boundary: Dict[int, Dict[int, Dict[int, int]]]
    full_boundary: Dict[int, Dict[int, Dict[int, int]]]

    @property
    def top(self) -> int:
        return max(self.generators) if self.generators else -1

    def rank(self, k: int) -> int:
        return len(self.basis.get(k, []))


def simplicial_boundary(level_gens: Dict[int, List[Ids]]) -> Dict[int, Dict[int, Dict[int, int]]]:
    out: Dict[int, Dict[int, Dict[int, int]]] = {}
    for k, gens in level_gens.items():
        if k == 0:
            continue
        index = {s: i for i, s in enumerate(level_gens[k - 1])}
        cols = {}
        for j, s in enumerate(gens):
            col = {}
            for i in range(len(s)):
                col[index[s[:i] + s[i + 1:]]] = (-1) ** i
            cols[j] = col
        out[k] = cols
    return out


def _reduce(v: int, p: int) -> int:
    return v % p if p else v


def assemble_complex(
    real: Realization,
    level: Level,
    perversity: Perversity,
    notion: str = "poly",
    ring: Ring = Ring(),
    restrict: Optional[Set[Ids]] = None,
) -> ChainComplexPresentation:
    """Presentation of the intersection chains of ``level`` (optionally of the
    subcomplex ``restrict``)."""
    allow = Allowability(real, perversity)
    gens = {
        k: [s for s in v if restrict is None or s in restrict] for k, v in level.simplexes.items()
    }
    gens = {k: v for k, v in gens.items() if v}
    ok = {k: [allow.allowable(s, notion) for s in v] for k, v in gens.items()}
    full = simplicial_boundary(gens)
    p = ring.p
    basis: Dict[int, List[Dict[int, int]]] = {}
    for k, v in gens.items():
        allowed = [j for j, a in enumerate(ok[k]) if a]
        if k == 0:
            basis[k] = [{j: 1} for j in allowed]
            continue
        bad_rows = {i for i, a in enumerate(ok[k - 1]) if not a}
        free, constrained = [], []
        for j in allowed:
            if any(i in bad_rows for i in full[k][j]):
                constrained.append(j)
            else:
                free.append(j)
        vecs = [{j: 1} for j in free]
        if constrained:
            rows = sorted({i for j in constrained for i in full[k][j] if i in bad_rows})
            rix = {r: t for t, r in enumerate(rows)}
            q = [[0] * len(constrained) for _ in rows]
            for c, j in enumerate(constrained):
                for i, val in full[k][j].items():
                    if i in rix:
                        q[rix[i]][c] = val
            if p:
                ns = nullspace_mod_p(np.array(q, dtype=np.int64), p)
                kvecs = [[int(x) for x in ns[:, t]] for t in range(ns.shape[1])]
            else:
                kvecs = integer_kernel_basis(q, len(constrained))
            for kv in kvecs:
                vecs.append({constrained[c]: x for c, x in enumerate(kv) if x})
        basis[k] = vecs
    boundary: Dict[int, Dict[int, Dict[int, int]]] = {}
    for k in gens:
        if k == 0 or k - 1 not in gens:
            continue
        cols = {}
        for b, vec in enumerate(basis[k]):
            img: Dict[int, int] = {}
            for j, c in vec.items():
                for i, e in full[k][j].items():
                    img[i] = _reduce(img.get(i, 0) + c * e, p)
            cols[b] = {i: x for i, x in img.items() if x}
        boundary[k] = cols
    return ChainComplexPresentation(ring, gens, ok, basis, boundary, full)


def check_dd_zero(pres: ChainComplexPresentation) -> bool:
    """∂∂ = 0 on the full chains and on the boundaries of intersection chains."""
    full = pres.full_boundary
    for mats in (full, pres.boundary):
        for k in mats:
            if k - 1 not in full:
                continue
            for col in mats[k].values():
                acc: Dict[int, int] = {}
                for i, c in col.items():
                    for r, e in full[k - 1].get(i, {}).items():
                        acc[r] = _reduce(acc.get(r, 0) + c * e, pres.ring.p)
                if any(acc.values()):
                    return False
    return True


def check_boundaries_allowable(pres: ChainComplexPresentation) -> bool:
    """Every presented generator and its boundary are supported on allowable simplexes."""
    for k, vecs in pres.basis.items():
        if not all(pres.allowable[k][j] for v in vecs for j in v):
            return False
    for k, cols in pres.boundary.items():
        if not all(pres.allowable[k - 1][i] for col in cols.values() for i in col):
            return False
    return True


# --------------------------------------------------------------- homology


@dataclass
class HomologyResult:
    betti: List[int]
    torsion: List[List[int]]
    ring: str

    def as_dict(self) -> Dict[str, object]:
        return {"ring": self.ring, "betti": self.betti, "torsion": self.torsion}

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologyResult):
            return NotImplemented
        return _trim(self.betti) == _trim(other.betti) and _trim(self.torsion) == _trim(other.torsion)


def _trim(xs: List) -> List:
    xs = list(xs)
    while xs and not xs[-1]:
        xs.pop()
    return xs


def smith_homology(pres: ChainComplexPresentation, top: Optional[int] = None) -> HomologyResult:
    p = pres.ring.p
    top = pres.top if top is None else top
    ranks: Dict[int, int] = {}
    factors: Dict[int, List[int]] = {}
    for k, cols in pres.boundary.items():
        if p:
            ranks[k] = rank_mod_p(cols, p)
        else:
            f = invariant_factors(cols)
            ranks[k] = len(f)
            factors[k] = sorted(x for x in f if x > 1)
    betti, torsion = [], []
    for k in range(top + 1):
        dim = pres.rank(k)
        betti.append(dim - ranks.get(k, 0) - ranks.get(k + 1, 0))
        torsion.append(factors.get(k + 1, []) if not p else [])
    return HomologyResult(betti, torsion, pres.ring.tag)


# ------------------------------------------------------------ pipelines


class Pipeline:
    """Levels of one realization under one centre system, shared across perversities."""

    def __init__(self, real: Realization, kind: str = "pseudo", seed=0, working=None):
        self.real = real
        self.system = PseudoBarycentricSystem(real, seed=seed, kind=kind)
        self.working = working
        self.levels: List[Level] = []

    def level(self, r: int) -> Level:
        from .subdivision import base_level, refine

        if not self.levels:
            self.levels.append(base_level(self.real, self.working))
        while len(self.levels) <= r:
            self.levels.append(refine(self.levels[-1], self.system))
        return self.levels[r]


def compute_homology(
    real: Realization,
    perversity: Perversity,
    notion: str = "poly",
    ring: Ring = Ring(),
    level: int = 0,
    seed=0,
    working=None,
    pipeline: Optional[Pipeline] = None,
) -> HomologyResult:
    if pipeline is None:
        pipeline = Pipeline(real, "pseudo" if notion == "poly" else "barycentric", seed, working)
    pres = assemble_complex(real, pipeline.level(level), perversity, notion, ring)
    return smith_homology(pres, top=real.X.dim)


# ------------------------------------------------------------- cone formula


def cone_perversity(X: FilteredComplex, cX: FilteredComplex, p: Perversity, apex_value) -> Perversity:
    """Extend p to the cone: each cone stratum S x ]0,1[ keeps p(S); the apex gets ``apex_value``."""
    vals = {}
    for st in X.strata:
        rep = min(st.simplexes, key=len)
        vals[cX.stratum_of(rep).id] = p(st)
    apex = [st for st in cX.strata if st.dim == 0 and st.id not in vals]
    for st in apex:
        vals[st.id] = apex_value
    return Perversity(vals, "general", f"{p.name}+apex:{format_ext(apex_value)}")


def cone_prediction(hX: HomologyResult, dual_at_apex, top: int) -> HomologyResult:
    """H_k(cone) = H_k(X) for k <= D, 0 for 0 != k > D, the ring for 0 = k > D."""
    betti, torsion = [], []
    for k in range(top + 1):
        if k <= dual_at_apex:
            betti.append(hX.betti[k] if k < len(hX.betti) else 0)
            torsion.append(hX.torsion[k] if k < len(hX.torsion) else [])
        elif k == 0:
            betti.append(1)
            torsion.append([])
        else:
            betti.append(0)
            torsion.append([])
    return HomologyResult(betti, torsion, hX.ring)


def cone_formula_check(
    X: FilteredComplex,
    p: Perversity,
    dual_at_apex: int,
    notion: str = "poly",
    level: int = 0,
    ring: Ring = Ring(),
    seed=0,
    base: Optional[HomologyResult] = None,
    cone_pipeline: Optional[Pipeline] = None,
) -> Dict[str, object]:
    """Compare the cone's homology with the three-case formula.  ``base`` and
    ``cone_pipeline`` let callers reuse work across apex values."""
    t0 = time.perf_counter()
    if cone_pipeline is None:
        cone_pipeline = Pipeline(Realization(cone_complex(X)), "pseudo" if notion == "poly" else "barycentric", seed)
    cX = cone_pipeline.real.X
    apex_value = (X.formal_dim + 1) - 2 - dual_at_apex
    cp = cone_perversity(X, cX, p, apex_value)
    hX = base or compute_homology(Realization(X), p, notion, ring, level, seed)
    hC = compute_homology(cone_pipeline.real, cp, notion, ring, level, pipeline=cone_pipeline)
    expected = cone_prediction(hX, dual_at_apex, cX.dim)
    return {
        "check": "cone",
        "dual_at_apex": dual_at_apex,
        "apex_perversity": apex_value,
        "notion": notion,
        "level": level,
        "base": hX.as_dict(),
        "cone": hC.as_dict(),
        "expected": expected.as_dict(),
        "pass": hC == expected,
        "seconds": time.perf_counter() - t0,
    }


# ---------------------------------------------------------- Mayer-Vietoris


def open_star(X: FilteredComplex, cells) -> Set[Tuple[str, ...]]:
    cs = {X.canon(c) for c in cells}
    return {s for s in X.simplexes if any(set(f) <= set(s) for f in cs)}


def validate_cover(X: FilteredComplex, U, V) -> Tuple[Set, Set]:
    for name, cells in (("U", U), ("V", V)):
        if not cells:
            raise CoverNotOpen(f"{name} is empty")
        for c in cells:
            if X.canon(c) not in X.filtration:
                raise CoverNotOpen(f"{name} names {list(c)}, which is not a simplex")
    sU, sV = open_star(X, U), open_star(X, V)
    if sU | sV != set(X.simplexes):
        missing = sorted(set(X.simplexes) - sU - sV)
        raise CoverNotOpen(f"open stars miss {[list(m) for m in missing[:3]]}")
    if sU == set(X.simplexes) or sV == set(X.simplexes):
        raise CoverNotOpen("one open set is the whole space")
    return sU, sV


def cells_inside(real: Realization, level: Level, star: Set) -> Set[Ids]:
    """Level simplexes lying in the open star (they miss its closed complement)."""
    outside = [c for c in real.X.simplexes if c not in star]
    return {s for s in level.all() if not any(real.meets_cell(s, c) for c in outside)}


class FieldHomology:
    """Homology over Z/p of intersection chains of a subcomplex, in ambient
    coordinates indexed by the level's generator lists."""

    @classmethod
    def build(cls, pres, level: Level, top: int):
        self = cls.__new__(cls)
        self.p = p = pres.ring.p
        self.top = top
        index = {k: {s: i for i, s in enumerate(v)} for k, v in level.simplexes.items()}
        sizes = {k: len(v) for k, v in level.simplexes.items()}
        self.sizes = sizes
        self.B = {}
        for k in range(top + 2):
            gens = pres.generators.get(k, [])
            basis = pres.basis.get(k, [])
            mat = np.zeros((sizes.get(k, 0), len(basis)), dtype=np.int64)
            for b, vec in enumerate(basis):
                for j, x in vec.items():
                    mat[index[k][gens[j]], b] = x % p
            self.B[k] = mat
        self.d = {}
        for k in range(1, top + 2):
            m = np.zeros((sizes.get(k - 1, 0), sizes.get(k, 0)), dtype=np.int64)
            for j, s in enumerate(level.simplexes.get(k, [])):
                for i in range(len(s)):
                    m[index[k - 1][s[:i] + s[i + 1:]], j] = (-1) ** i % p
            self.d[k] = m
        self.H, self.Bd = {}, {}
        for k in range(top + 1):
            Bk = self.B[k]
            dk = self.boundary_of(k, Bk)
            cyc = mulmod(Bk, nullspace_mod_p(dk, p), p) if Bk.shape[1] else Bk
            bnd = self.boundary_of(k + 1, self.B.get(k + 1, np.zeros((sizes.get(k + 1, 0), 0), dtype=np.int64)))
            bnd = column_basis_mod_p(bnd, p) if bnd.size else bnd.reshape(sizes.get(k, 0), 0)
            both = np.hstack([bnd, cyc]) if cyc.size else bnd
            _, piv = rref_mod_p(both, p) if both.size else (None, [])
            nb = bnd.shape[1]
            self.Bd[k] = bnd
            self.H[k] = both[:, [c for c in piv if c >= nb]] if both.size else bnd[:, :0]
        return self

    def boundary_of(self, k: int, m: np.ndarray) -> np.ndarray:
        if k == 0:
            return np.zeros((0, m.shape[1]), dtype=np.int64)
        return mulmod(self.d[k], m, self.p) if m.size else np.zeros((self.sizes.get(k - 1, 0), m.shape[1]), dtype=np.int64)

    def dim(self, k: int) -> int:
        return self.H[k].shape[1] if k in self.H else 0

    def classify(self, k: int, cycles: np.ndarray) -> np.ndarray:
        """Coordinates, in the homology basis, of the classes of the given cycles."""
        nb = self.Bd[k].shape[1]
        both = np.hstack([self.Bd[k], self.H[k]])
        if cycles.shape[1] == 0:
            return np.zeros((self.dim(k), 0), dtype=np.int64)
        if both.shape[1] == 0:
            if np.any(cycles % self.p):
                raise InvariantViolation("a nonzero cycle in a zero chain group")
            return np.zeros((0, cycles.shape[1]), dtype=np.int64)
        x = solve_mod_p(both, cycles, self.p)
        if x is None:
            raise InvariantViolation("a chain that should be an intersection cycle is not")
        return x[nb:] % self.p


def mayer_vietoris_check(
    real: Realization,
    level: Level,
    perversity: Perversity,
    U,
    V,
    notion: str = "poly",
    p: int = FIELD_PRIME,
) -> Dict[str, object]:
    """Exactness of the long sequence of the cover {st U, st V}, by ranks, over Z/p."""
    t0 = time.perf_counter()
    X = real.X
    sU, sV = validate_cover(X, U, V)
    inU = cells_inside(real, level, sU)
    inV = cells_inside(real, level, sV)
    uncovered = [s for s in level.all() if s not in inU and s not in inV]
    ring = Ring(p)
    top = X.dim
    parts = {}
    for name, restrict in (("UV", inU & inV), ("U", inU), ("V", inV), ("X", None)):
        pres = assemble_complex(real, level, perversity, notion, ring, restrict)
        parts[name] = FieldHomology.build(pres, level, top)
    hUV, hU, hV, hX = parts["UV"], parts["U"], parts["V"], parts["X"]
    maps = {}
    for k in range(top + 1):
        a = np.vstack([hU.classify(k, hUV.H[k]), (-hV.classify(k, hUV.H[k])) % p])
        b = np.hstack([hX.classify(k, hU.H[k]), hX.classify(k, hV.H[k])])
        maps[("alpha", k)] = a % p
        maps[("beta", k)] = b % p
        maps[("delta", k)] = _connecting(hU, hV, hX, hUV, k, p)
    nodes = []
    seq = []
    for k in range(top, -1, -1):
        seq += [("UV", k), ("UVsum", k), ("X", k)]
    dims = {("UV", k): hUV.dim(k) for k in range(top + 1)}
    dims.update({("UVsum", k): hU.dim(k) + hV.dim(k) for k in range(top + 1)})
    dims.update({("X", k): hX.dim(k) for k in range(top + 1)})

    def incoming(node):
        kind, k = node
        if kind == "UV":
            return maps.get(("delta", k + 1))
        if kind == "UVsum":
            return maps[("alpha", k)]
        return maps[("beta", k)]

    def outgoing(node):
        kind, k = node
        if kind == "UV":
            return maps[("alpha", k)]
        if kind == "UVsum":
            return maps[("beta", k)]
        return maps[("delta", k)] if k > 0 else None

    exact = True
    for node in seq:
        fin, fout = incoming(node), outgoing(node)
        rin = _rank(fin, p)
        rout = _rank(fout, p)
        composite_zero = True
        if fin is not None and fout is not None and fin is not False and fout is not False and fin.size and fout.size:
            composite_zero = not np.any(mulmod(fout, fin, p))
        ok = fin is not False and fout is not False and composite_zero and rin + rout == dims[node]
        exact &= ok
        nodes.append({"node": f"{node[0]}_{node[1]}", "dim": dims[node], "rank_in": rin, "rank_out": rout, "exact": ok})
    return {
        "check": "mv",
        "notion": notion,
        "perversity": perversity.name,
        "uncovered_cells": len(uncovered),
        "betti": {n: [h.dim(k) for k in range(top + 1)] for n, h in parts.items()},
        "nodes": nodes,
        "pass": bool(exact),
        "seconds": time.perf_counter() - t0,
    }


def mulmod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if p < 2 ** 15:
        return (a % p) @ (b % p) % p
    return ((a.astype(object) % p) @ (b.astype(object) % p) % p).astype(np.int64)


def _rank(m, p: int) -> int:
    if m is None or m is False or m.size == 0:
        return 0
    return matrix_rank_mod_p(m, p)


def _connecting(hU, hV, hX, hUV, k: int, p: int):
    """δ: H_k(X) → H_(k-1)(U∩V) via z = a + b + ∂w; False if some class is not small."""
    if k == 0:
        return None
    Z = hX.H[k]
    if Z.shape[1] == 0:
        return np.zeros((hUV.dim(k - 1), 0), dtype=np.int64)
    BU, BV = hU.B[k], hV.B[k]
    W = hX.boundary_of(k + 1, hX.B[k + 1]) if k + 1 in hX.B else np.zeros((Z.shape[0], 0), dtype=np.int64)
    system = np.hstack([BU, BV, W])
    x = solve_mod_p(system, Z, p) if system.shape[1] else None
    if x is None:
        return False
    a = mulmod(BU, x[: BU.shape[1]], p)
    da = hU.boundary_of(k, a)
    return hUV.classify(k - 1, da)


# ------------------------------------------------------------ functoriality


@dataclass
class SimplicialMap:
    """A simplicial map given on vertices, between two realized complexes."""

    source: Realization
    target: Realization
    vertex_map: Dict[str, str]

    def validate(self) -> None:
        X, Y = self.source.X, self.target.X
        image_stratum: Dict[str, str] = {}
        for s in X.simplexes:
            t = Y.canon(self.vertex_map[v] for v in s)
            if t not in Y.filtration:
                raise NotStratified(f"{list(s)} maps onto {list(t)}, which is not a simplex")
            S, T = X.stratum_of(s), Y.stratum_of(t)
            if image_stratum.setdefault(S.id, T.id) != T.id:
                raise NotStratified(f"stratum {S.id} meets two target strata")
            if S.codim < T.codim:
                raise NotStratified(f"stratum {S.id} (codim {S.codim}) lands in {T.id} (codim {T.codim})")
        self._strata = image_stratum

    def stratum_image(self) -> Dict[str, str]:
        self.validate()
        return dict(self._strata)

    def map_point(self, pid: int) -> int:
        cell, lam = self.source.carriers[pid]
        ids = [self.target.vertex_ids[self.vertex_map[v]] for v in cell]
        merged: Dict[int, Fraction] = {}
        for i, l in zip(ids, lam):
            merged[i] = merged.get(i, Fraction(0)) + l
        keys = sorted(merged)
        return self.target.combine(keys, [merged[k] for k in keys])


def perversities_compatible(f: SimplicialMap, p: Perversity, q: Perversity) -> bool:
    """f*Dq <= Dp on every source stratum."""
    dp = dual_perversity(p, f.source.X)
    dq = dual_perversity(q, f.target.X)
    return all(dq(t) <= dp(s) for s, t in f.stratum_image().items())


def pushforward(f: SimplicialMap, chain: Mapping[Ids, int]) -> Dict[Ids, int]:
    f.validate()
    out: Dict[Ids, int] = {}
    for s, c in chain.items():
        t = tuple(f.map_point(i) for i in s)
        out[t] = out.get(t, 0) + c
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------- main comparison


def main_theorem_compare(
    real: Realization,
    perversity: Perversity,
    max_level: int = 2,
    ring: Ring = Ring(),
    seed=0,
    working=None,
    pipelines: Optional[Dict[str, Pipeline]] = None,
) -> Dict[str, object]:
    """Homology in both notions for levels 0..max_level, the first stable level
    of each (equal to the next level) and whether the stable values agree."""
    t0 = time.perf_counter()
    max_level = min(max_level, 3)
    out: Dict[str, object] = {"check": "compare", "perversity": perversity.name, "notions": {}}
    stable = {}
    for notion, kind in (("poly", "pseudo"), ("gm", "barycentric")):
        pipe = (pipelines or {}).get(notion) or Pipeline(real, kind, seed, working)
        results = []
        for r in range(max_level + 1):
            results.append(compute_homology(real, perversity, notion, ring, r, pipeline=pipe))
        first = next((r for r in range(max_level) if results[r] == results[r + 1]), None)
        stable[notion] = results[first] if first is not None else None
        out["notions"][notion] = {
            "levels": [h.as_dict() for h in results],
            "stable_level": first,
        }
    if stable["poly"] is None or stable["gm"] is None:
        out["status"] = "no-stabilization"
        out["pass"] = False
    else:
        out["status"] = "stable"
        out["agree_betti"] = _trim(stable["poly"].betti) == _trim(stable["gm"].betti)
        out["agree_torsion"] = _trim(stable["poly"].torsion) == _trim(stable["gm"].torsion)
        out["pass"] = out["agree_betti"] and out["agree_torsion"]
    out["seconds"] = time.perf_counter() - t0
    return out


def notion_gap(real: Realization, level: Level, perversity: Perversity) -> List[Ids]:
    """Simplexes allowable in the polyhedral notion but not in the skeleton notion."""
    allow = Allowability(real, perversity)
    return [s for s in level.all() if allow.allowable(s, "poly") and not allow.allowable(s, "gm")]
