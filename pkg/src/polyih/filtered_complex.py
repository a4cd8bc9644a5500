"""Finite filtered simplicial complexes, their strata and perversities."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import EmptyRegularPart, NonClosedFiltration, UnknownStratum, ValidationError
from .extended import ExtInt, ext_sub, format_ext, parse_ext

Simplex = Tuple[str, ...]
Point = Tuple[Fraction, ...]

MAX_AMBIENT = 8


def faces(s: Sequence, include_empty: bool = False) -> Iterable[tuple]:
    """All nonempty faces of ``s`` (including ``s`` itself), preserving order."""
    lo = 0 if include_empty else 1
    for k in range(lo, len(s) + 1):
        yield from itertools.combinations(s, k)


def boundary_faces(s: Sequence) -> List[Tuple[int, tuple]]:
    """Codimension-one faces with their incidence signs."""
    return [((-1) ** i, tuple(s[:i]) + tuple(s[i + 1:])) for i in range(len(s))]


def moment_curve(n_vertices: int, dim: int) -> List[Point]:
    """Points on the moment curve in R^(2*dim+1); any such set is in general position."""
    m = max(1, min(2 * dim + 1, MAX_AMBIENT))
    return [tuple(Fraction(t) ** e for e in range(1, m + 1)) for t in range(1, n_vertices + 1)]


@dataclass(frozen=True)
class Stratum:
    id: str
    dim: int
    codim: int
    simplexes: frozenset
    regular: bool


@dataclass(eq=False)
class FilteredComplex:
    vertices: Tuple[str, ...]
    simplexes: Tuple[Simplex, ...]
    filtration: Dict[Simplex, int]
    formal_dim: int
    coords: Dict[str, Point] = field(default_factory=dict)
    _strata: Optional[List[Stratum]] = field(default=None, repr=False)
    _stratum_of: Optional[Dict[Simplex, Stratum]] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return max(len(s) for s in self.simplexes) - 1

    @property
    def ambient_dim(self) -> int:
        return len(next(iter(self.coords.values())))

    def canon(self, s: Iterable[str]) -> Simplex:
        order = self._order
        return tuple(sorted(set(s), key=order.__getitem__))

    def __post_init__(self):
        self._order: Dict[str, int] = {v: i for i, v in enumerate(self.vertices)}

    def __contains__(self, s) -> bool:
        return self.canon(s) in self.filtration

    def of_dim(self, k: int) -> List[Simplex]:
        return [s for s in self.simplexes if len(s) == k + 1]

    @property
    def strata(self) -> List[Stratum]:
        if self._strata is None:
            self._strata = compute_strata(self)
            self._stratum_of = {s: st for st in self._strata for s in st.simplexes}
        return self._strata

    def stratum_of(self, s: Iterable[str]) -> Stratum:
        self.strata
        return self._stratum_of[self.canon(s)]

    def singular_strata(self) -> List[Stratum]:
        return [s for s in self.strata if not s.regular]

    def stratum_by_id(self, sid: str) -> Stratum:
        for st in self.strata:
            if st.id == sid:
                return st
        raise UnknownStratum(f"no stratum with id {sid!r}")

    def is_unfiltered(self) -> bool:
        return all(st.regular for st in self.strata)


def _vertex_sort_key(v: str):
    return (0, int(v), v) if v.isdigit() else (1, 0, v)


def build_complex(
    simplexes: Iterable[Iterable[str]],
    filtration: Union[Mapping, None],
    formal_dim: int,
    mode: str = "simplex",
    coords: Optional[Mapping[str, Sequence]] = None,
    vertices: Optional[Sequence[str]] = None,
) -> FilteredComplex:
    """Build and validate a filtered complex.

    ``mode`` is ``"simplex"`` (keys are simplexes) or ``"vertex"`` (keys are
    vertex ids and a simplex gets the maximum over its vertices).  Faces with
    no explicit value in simplex mode get the minimum value of their listed
    cofaces.  A missing filtration means every simplex sits at ``formal_dim``.
    """
    raw = [tuple(str(v) for v in s) for s in simplexes]
    for s in raw:
        if len(set(s)) != len(s):
            raise ValidationError(f"simplex {list(s)} repeats a vertex")
    vset = set(itertools.chain.from_iterable(raw))
    if vertices is not None:
        vlist = [str(v) for v in vertices]
        if len(set(vlist)) != len(vlist):
            raise ValidationError("vertex ids are not distinct")
        vset |= set(vlist)
    order_list = sorted(vset, key=_vertex_sort_key)
    order = {v: i for i, v in enumerate(order_list)}
    canon = lambda s: tuple(sorted(set(s), key=order.__getitem__))

    all_s = set()
    for s in raw:
        for f in faces(canon(s)):
            all_s.add(f)
    for v in order_list:
        all_s.add((v,))
    if formal_dim < 0:
        raise ValidationError("formal dimension must be nonnegative")
    top = max(len(s) for s in all_s) - 1
    if formal_dim < top:
        raise ValidationError(
            f"formal dimension {formal_dim} is below the geometric dimension {top}"
        )

    filt: Dict[Simplex, int] = {}
    if filtration is None:
        filt = {s: formal_dim for s in all_s}
    elif mode == "vertex":
        vals = {str(k): int(v) for k, v in filtration.items()}
        for v in vals:
            if v not in order:
                raise ValidationError(f"filtration names unknown vertex {v!r}")
        for s in all_s:
            filt[s] = max(vals.get(v, formal_dim) for v in s)
    elif mode == "simplex":
        given = {}
        for k, v in filtration.items():
            key = canon((k,) if isinstance(k, str) else k)
            if key not in all_s:
                raise ValidationError(f"filtration names unknown simplex {list(key)}")
            given[key] = int(v)
        for s in sorted(all_s, key=len, reverse=True):
            if s in given:
                filt[s] = given[s]
            else:
                cof = [filt[c] for c in all_s if len(c) == len(s) + 1 and set(s) <= set(c)]
                filt[s] = min(cof) if cof else formal_dim
    else:
        raise ValidationError(f"unknown filtration mode {mode!r}")

    for s, v in filt.items():
        if not 0 <= v <= formal_dim:
            raise ValidationError(f"filtration value {v} of {list(s)} outside [0, {formal_dim}]")
    for s, v in filt.items():
        for f in faces(s):
            if filt[f] > v:
                raise NonClosedFiltration(
                    f"X_{v} contains {list(s)} but not its face {list(f)}"
                )
    if all(v < formal_dim for v in filt.values()):
        raise EmptyRegularPart(f"no simplex has filtration value {formal_dim}")

    if coords is None:
        pts = moment_curve(len(order_list), max(top, 1))
        cmap = {v: p for v, p in zip(order_list, pts)}
    else:
        cmap = {str(k): tuple(Fraction(x) for x in p) for k, p in coords.items()}
        missing = [v for v in order_list if v not in cmap]
        if missing:
            raise ValidationError(f"no coordinates for vertices {missing}")
        dims = {len(p) for p in cmap.values()}
        if len(dims) != 1:
            raise ValidationError("coordinates have mixed ambient dimensions")
        if dims.pop() > MAX_AMBIENT:
            raise ValidationError(f"ambient dimension above {MAX_AMBIENT}")
        cmap = {v: cmap[v] for v in order_list}
        _check_embedding(all_s, cmap)

    ordered = tuple(sorted(all_s, key=lambda s: (len(s), [order[v] for v in s])))
    return FilteredComplex(tuple(order_list), ordered, filt, formal_dim, cmap)


def _check_embedding(simplexes, cmap) -> None:
    from .exact_geometry import affine_dim

    for s in simplexes:
        if len(s) > 1 and affine_dim([cmap[v] for v in s]) != len(s) - 1:
            raise ValidationError(f"coordinates of {list(s)} are affinely dependent")


def compute_strata(X: FilteredComplex) -> List[Stratum]:
    """Connected components of each X_i minus X_(i-1), via face/coface chains."""
    parent: Dict[Simplex, Simplex] = {s: s for s in X.simplexes}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for s in X.simplexes:
        if len(s) < 2:
            continue
        for _, f in boundary_faces(s):
            if X.filtration[f] == X.filtration[s]:
                a, b = find(f), find(s)
                if a != b:
                    parent[a] = b
    groups: Dict[Simplex, List[Simplex]] = {}
    for s in X.simplexes:
        groups.setdefault(find(s), []).append(s)
    order = X._order
    strata = []
    for members in groups.values():
        i = X.filtration[members[0]]
        rep = min(members, key=lambda s: (len(s), [order[v] for v in s]))
        sid = f"S{i}[{','.join(rep)}]"
        strata.append(Stratum(sid, i, X.formal_dim - i, frozenset(members), i == X.formal_dim))
    strata.sort(key=lambda st: (st.dim, st.id))
    return strata


# ---------------------------------------------------------------- perversity

PRESETS = {
    "0": lambda k: 0,
    "m": lambda k: (k - 2) // 2,
    "t": lambda k: k - 2,
    "n": lambda k: (k - 2) - (k - 2) // 2,
}
_ALIASES = {"0̄": "0", "m̄": "m", "t̄": "t", "n̄": "n", "zero": "0", "top": "t"}


@dataclass(frozen=True)
class Perversity:
    values: Mapping[str, ExtInt]
    tag: str = "general"
    name: str = ""

    def __call__(self, stratum: Union[Stratum, str]) -> ExtInt:
        sid = stratum.id if isinstance(stratum, Stratum) else stratum
        return self.values.get(sid, 0)

    def describe(self) -> Dict[str, str]:
        return {k: format_ext(v) for k, v in sorted(self.values.items())}


def codimensional(X: FilteredComplex, by_codim: Mapping[int, ExtInt], tag="codimensional", name="") -> Perversity:
    vals = {}
    for st in X.singular_strata():
        vals[st.id] = by_codim.get(st.codim, 0)
    for st in X.strata:
        if st.regular:
            vals[st.id] = 0
    p = Perversity(vals, tag, name)
    if tag == "gm":
        check_gm(by_codim)
    return p


def check_gm(by_codim: Mapping[int, ExtInt]) -> None:
    if 2 in by_codim and by_codim[2] != 0:
        raise ValidationError("a GM perversity has p(2) = 0")
    ks = sorted(k for k in by_codim if k >= 2)
    for a, b in zip(ks, ks[1:]):
        if b == a + 1 and not by_codim[a] <= by_codim[b] <= by_codim[a] + 1:
            raise ValidationError("a GM perversity grows by 0 or 1 per codimension")


def preset(X: FilteredComplex, name: str) -> Perversity:
    key = _ALIASES.get(name, name)
    if key not in PRESETS:
        raise ValidationError(f"unknown perversity preset {name!r}")
    f = PRESETS[key]
    by_codim = {st.codim: f(st.codim) for st in X.singular_strata()}
    tag = "gm" if all(k >= 2 for k in by_codim) else "codimensional"
    return codimensional(X, by_codim, tag=tag, name=key)


_STRATUM_ITEM = re.compile(r"S\[([^\]]*)\]\s*=\s*([^,;\s]+)")


def parse_perversity(X: FilteredComplex, spec: str) -> Perversity:
    """Parse a preset name, ``c2:0,c3:1``, ``k:<value>`` or ``S[v]=1,S[a,b]=-inf``."""
    try:
        return _parse_perversity(X, spec.strip())
    except ValueError as exc:
        raise ValidationError(f"bad perversity value in {spec!r}: {exc}") from None


def _parse_perversity(X: FilteredComplex, spec: str) -> Perversity:
    key = _ALIASES.get(spec, spec)
    if key in PRESETS:
        return preset(X, key)
    if spec.startswith("S["):
        vals = {st.id: 0 for st in X.strata}
        pos = 0
        for m in _STRATUM_ITEM.finditer(spec):
            if spec[pos:m.start()].strip(" ,;"):
                raise ValidationError(f"cannot parse perversity near {spec[pos:m.start()]!r}")
            pos = m.end()
            verts = [v.strip() for v in m.group(1).split(",") if v.strip()]
            if not verts or any(v not in X.vertices for v in verts):
                raise UnknownStratum(f"no simplex {verts} in the complex")
            s = X.canon(verts)
            if s not in X.filtration:
                raise UnknownStratum(f"no simplex {verts} in the complex")
            st = X.stratum_of(s)
            if st.regular:
                raise UnknownStratum(f"{verts} lies in a regular stratum")
            vals[st.id] = parse_ext(m.group(2))
        if spec[pos:].strip(" ,;"):
            raise ValidationError(f"cannot parse perversity near {spec[pos:]!r}")
        return Perversity(vals, "general", spec)
    if spec.startswith("c") or spec.startswith("k:"):
        if spec.startswith("k:"):
            v = parse_ext(spec[2:])
            return codimensional(X, {st.codim: v for st in X.singular_strata()}, name=spec)
        by_codim = {}
        for item in spec.split(","):
            m = re.fullmatch(r"\s*c(\d+)\s*:\s*(\S+)\s*", item)
            if not m:
                raise ValidationError(f"cannot parse codimensional item {item!r}")
            by_codim[int(m.group(1))] = parse_ext(m.group(2))
        return codimensional(X, by_codim, name=spec)
    raise ValidationError(f"unrecognized perversity {spec!r}")


def top_perversity(X: FilteredComplex) -> Perversity:
    return preset(X, "t")


def dual_perversity(p: Perversity, X: FilteredComplex) -> Perversity:
    vals = {}
    for st in X.strata:
        vals[st.id] = 0 if st.regular else ext_sub(st.codim - 2, p(st))
    return Perversity(vals, "general", f"D({p.name})" if p.name else "")


# ------------------------------------------------------------- constructions


def _fresh(X: FilteredComplex, base: str) -> str:
    name, k = base, 0
    while name in X.vertices:
        k += 1
        name = f"{base}{k}"
    return name


def cone_complex(X: FilteredComplex, apex: str = "v") -> FilteredComplex:
    """Simplicial open cone with the conical filtration; the apex sits at the origin."""
    apex = _fresh(X, apex)
    simplexes = list(X.simplexes) + [(apex,) + s for s in X.simplexes] + [(apex,)]
    filt = {s: X.filtration[s] + 1 for s in X.simplexes}
    filt.update({(apex,) + s: X.filtration[s] + 1 for s in X.simplexes})
    filt[(apex,)] = 0
    m = X.ambient_dim
    coords = {v: tuple(p) + (Fraction(1),) for v, p in X.coords.items()}
    coords[apex] = tuple(Fraction(0) for _ in range(m + 1))
    if m + 1 > MAX_AMBIENT:
        coords = None
    return build_complex(simplexes, filt, X.formal_dim + 1, coords=coords)


def product_with_interval(X: FilteredComplex) -> Tuple[FilteredComplex, Dict[str, str]]:
    """X x [0,1] with the staircase triangulation; returns it with the projection on vertices."""
    def lift(s):
        out = []
        for j in range(len(s)):
            out.append(tuple(f"{v}@0" for v in s[: j + 1]) + tuple(f"{v}@1" for v in s[j:]))
        return out

    simplexes, filt = [], {}
    for s in X.simplexes:
        for t in lift(s):
            simplexes.append(t)
    cx = build_complex(simplexes, None, X.formal_dim + 1, coords=_product_coords(X))
    proj = {f"{v}@{h}": v for v in X.vertices for h in (0, 1)}
    for t in cx.simplexes:
        base = X.canon(proj[w] for w in t)
        filt[t] = X.filtration[base] + 1
    cx = build_complex(cx.simplexes, filt, X.formal_dim + 1, coords=cx.coords)
    return cx, proj


def _product_coords(X: FilteredComplex):
    m = X.ambient_dim
    if m + 1 > MAX_AMBIENT:
        return None
    out = {}
    for v, p in X.coords.items():
        out[f"{v}@0"] = tuple(p) + (Fraction(0),)
        out[f"{v}@1"] = tuple(p) + (Fraction(1),)
    return out


def disjoint_union(X: FilteredComplex, Y: FilteredComplex, tags=("x", "y")) -> FilteredComplex:
    simplexes, filt = [], {}
    for tag, Z in zip(tags, (X, Y)):
        for s in Z.simplexes:
            t = tuple(f"{tag}{v}" for v in s)
            simplexes.append(t)
            filt[t] = Z.filtration[s]
    return build_complex(simplexes, filt, max(X.formal_dim, Y.formal_dim))
