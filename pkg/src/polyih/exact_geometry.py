"""Exact rational geometry: affine hulls, simplex intersections, general position,
strong general position and pseudo-barycentre sampling."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import SamplingExhausted, ValidationError
from .extended import NEG_INF, ExtInt
from .linalg import nullspace, rank, rref, solve

Point = Tuple[Fraction, ...]


def point(coords: Iterable) -> Point:
    return tuple(Fraction(c) for c in coords)


def sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def combo(weights: Sequence, pts: Sequence[Point]) -> Point:
    """The point sum(w_i p_i)."""
    m = len(pts[0])
    out = [Fraction(0)] * m
    for w, p in zip(weights, pts):
        if w:
            for j in range(m):
                out[j] += w * p[j]
    return tuple(out)


def sqnorm(v: Sequence) -> Fraction:
    return sum((x * x for x in v), Fraction(0))


def sqdist(p: Point, q: Point) -> Fraction:
    return sqnorm(sub(p, q))


def barycentre(pts: Sequence[Point]) -> Point:
    n = len(pts)
    return combo([Fraction(1, n)] * n, pts)


def sq_diameter(pts: Sequence[Point]) -> Fraction:
    """Squared diameter of the convex hull (the longest pairwise distance)."""
    best = Fraction(0)
    for p, q in itertools.combinations(pts, 2):
        best = max(best, sqdist(p, q))
    return best


def affine_dim(pts: Sequence[Point]) -> ExtInt:
    pts = list(pts)
    if not pts:
        return NEG_INF
    if len(pts) == 1:
        return 0
    return rank([sub(p, pts[0]) for p in pts[1:]])


# ------------------------------------------------------------ vertex enumeration


def basic_solutions(a: Sequence[Sequence], b: Sequence) -> List[Tuple[Fraction, ...]]:
    """Vertices of ``{z >= 0 : a z = b}`` by enumerating column bases."""
    n = len(a[0])
    red, piv = rref([list(row) + [rhs] for row, rhs in zip(a, b)])
    if piv and piv[-1] == n:
        return []
    r = len(piv)
    if r == 0:
        return [tuple(Fraction(0) for _ in range(n))]
    mat = [row[:n] for row in red]
    rhs = [row[n] for row in red]
    found = set()
    out = []
    for cols in itertools.combinations(range(n), r):
        sq = [[row[c] for c in cols] for row in mat]
        x = _solve_square(sq, rhs)
        if x is None or any(v < 0 for v in x):
            continue
        z = [Fraction(0)] * n
        for c, v in zip(cols, x):
            z[c] = v
        z = tuple(z)
        if z not in found:
            found.add(z)
            out.append(z)
    return out


def _solve_square(m: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    n = len(m)
    aug = [row[:] + [v] for row, v in zip(m, rhs)]
    for c in range(n):
        pr = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pr is None:
            return None
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = 1 / aug[c][c]
        rowc = [x * inv for x in aug[c]]
        aug[c] = rowc
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], rowc)]
    return [aug[i][n] for i in range(n)]


def convex_weights(pts: Sequence[Point], x: Point) -> Optional[Tuple[Fraction, ...]]:
    """Some convex weights expressing ``x`` over ``pts``, or None when x is outside the hull."""
    m = len(x)
    a = [[p[j] for p in pts] for j in range(m)] + [[Fraction(1)] * len(pts)]
    sols = basic_solutions(a, list(x) + [Fraction(1)])
    return sols[0] if sols else None


# ------------------------------------------------------------------ simplexes


@dataclass(eq=False)
class GeoSimplex:
    vertices: Tuple[Point, ...]
    _solver: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        self.vertices = tuple(point(v) for v in self.vertices)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient(self) -> int:
        return len(self.vertices[0])

    def is_nondegenerate(self) -> bool:
        return affine_dim(self.vertices) == self.dim

    def validate(self) -> "GeoSimplex":
        if not self.is_nondegenerate():
            raise ValidationError("simplex vertices are affinely dependent")
        return self

    def bary(self, x: Point) -> Optional[Tuple[Fraction, ...]]:
        """Barycentric coordinates of ``x`` (None if off the affine hull)."""
        if self._solver is None:
            a = [[p[j] for p in self.vertices] for j in range(self.ambient)]
            a.append([Fraction(1)] * len(self.vertices))
            rows = _independent_rows(a)
            sq = [a[i] for i in rows]
            inv = _inverse(sq) if len(rows) == len(self.vertices) else None
            self._solver = (a, rows, inv)
        a, rows, inv = self._solver
        if inv is None:
            raise ValidationError("barycentric coordinates need a nondegenerate simplex")
        rhs = list(x) + [Fraction(1)]
        sub_rhs = [rhs[i] for i in rows]
        lam = tuple(sum((inv[i][j] * sub_rhs[j] for j in range(len(rows))), Fraction(0)) for i in range(len(rows)))
        for i, row in enumerate(a):
            if sum((c * l for c, l in zip(row, lam)), Fraction(0)) != rhs[i]:
                return None
        return lam

    def contains(self, x: Point) -> bool:
        lam = self.bary(x)
        return lam is not None and all(v >= 0 for v in lam)

    def interior_contains(self, x: Point) -> bool:
        lam = self.bary(x)
        return lam is not None and all(v > 0 for v in lam)

    def barycentre(self) -> Point:
        return barycentre(self.vertices)


class StandardSimplex(GeoSimplex):
    """The simplex spanned by the unit vectors of R^n; points are their own
    barycentric coordinates."""

    def __init__(self, n: int):
        super().__init__(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    def bary(self, x: Point) -> Optional[Tuple[Fraction, ...]]:
        x = tuple(x)
        return x if sum(x) == 1 else None


def _independent_rows(a: List[List[Fraction]]) -> List[int]:
    t = [list(col) for col in zip(*a)]
    _, piv = rref(t)
    return piv


def _inverse(m: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug)
    return [row[n:] for row in red]


def cone(u: Point, V: Optional[GeoSimplex]) -> GeoSimplex:
    """The join u*V; the cone on the empty simplex is the point u."""
    if V is None or not V.vertices:
        return GeoSimplex((u,))
    return GeoSimplex((u,) + V.vertices)


# ------------------------------------------------------------------ polytopes


@dataclass(eq=False)
class Polytope:
    """Intersection of finitely many simplexes, with lazily enumerated vertices."""

    constraints: Tuple[GeoSimplex, ...] = ()
    _vertices: Optional[List[Point]] = None
    _weights: Optional[List[tuple]] = None

    @classmethod
    def from_vertices(cls, pts: Sequence[Point]) -> "Polytope":
        return cls((), list(dict.fromkeys(point(p) for p in pts)), None)

    @property
    def vertices(self) -> List[Point]:
        if self._vertices is None:
            self._enumerate()
        return self._vertices

    @property
    def weights(self) -> List[tuple]:
        if self._weights is None:
            self._enumerate()
        return self._weights

    def _enumerate(self) -> None:
        sols = intersection_weights(self.constraints)
        self._weights = sols
        first = self.constraints[0].vertices
        self._vertices = list(dict.fromkeys(combo(w[0], first) for w in sols))

    @property
    def dim(self) -> ExtInt:
        return affine_dim(self.vertices)

    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, x: Point) -> bool:
        if self.constraints:
            return all(s.contains(x) for s in self.constraints)
        return convex_weights(self.vertices, x) is not None


def intersection_weights(simplexes: Sequence[GeoSimplex]) -> List[tuple]:
    """Vertices of the intersection, each given as one weight vector per simplex."""
    sizes = [len(s.vertices) for s in simplexes]
    n = sum(sizes)
    m = simplexes[0].ambient
    offsets = list(itertools.accumulate([0] + sizes))
    rows, rhs = [], []
    for k, s in enumerate(simplexes):
        row = [Fraction(0)] * n
        for i in range(sizes[k]):
            row[offsets[k] + i] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
    for k in range(1, len(simplexes)):
        for j in range(m):
            row = [Fraction(0)] * n
            for i, p in enumerate(simplexes[0].vertices):
                row[i] = p[j]
            for i, p in enumerate(simplexes[k].vertices):
                row[offsets[k] + i] = -p[j]
            rows.append(row)
            rhs.append(Fraction(0))
    sols = basic_solutions(rows, rhs)
    return [tuple(z[offsets[k]:offsets[k + 1]] for k in range(len(simplexes))) for z in sols]


def simplex_intersection(P: GeoSimplex, Q: GeoSimplex) -> Polytope:
    return Polytope((P, Q))


def interiors_meet(T: GeoSimplex, C: GeoSimplex) -> bool:
    """Whether some point has strictly positive weights in both simplexes.

    The average of all intersection vertices has weight support equal to the
    union of the vertex supports, so strict feasibility reduces to a support test.
    """
    sols = intersection_weights((T, C))
    if not sols:
        return False
    st = [any(w[0][i] for w in sols) for i in range(len(T.vertices))]
    sc = [any(w[1][i] for w in sols) for i in range(len(C.vertices))]
    return all(st) and all(sc)


def general_position(P: GeoSimplex, Q: GeoSimplex, delta: GeoSimplex) -> bool:
    d = simplex_intersection(P, Q).dim
    return d <= P.dim + Q.dim - delta.dim


def affine_general_position(P: GeoSimplex, Q: GeoSimplex, delta: GeoSimplex) -> bool:
    """Whether the affine hulls of P and Q (assumed to meet) span the hull of delta."""
    return affine_dim(list(P.vertices) + list(Q.vertices)) == delta.dim


def in_boundary(pts: Sequence[Point], delta: GeoSimplex) -> bool:
    """Whether the convex hull of ``pts`` lies in the boundary of ``delta``."""
    if not pts:
        return True
    lam = delta.bary(barycentre(list(pts)))
    return lam is not None and any(v == 0 for v in lam)


def strong_general_position(
    u: Point, T: GeoSimplex, V: Optional[GeoSimplex], delta: GeoSimplex
) -> bool:
    """Either T meets the cone u*V inside the boundary of delta, or their
    interiors meet with intersection dimension dim T + dim V + 1 - dim delta."""
    dim_v = -1 if V is None or not V.vertices else V.dim
    if sgp_trivial(T, delta):
        return True
    C = cone(u, V)
    sols = intersection_weights((T, C))
    if not sols:
        return True
    pts = list(dict.fromkeys(combo(w[0], T.vertices) for w in sols))
    if in_boundary(pts, delta):
        return True
    st = all(any(w[0][i] for w in sols) for i in range(len(T.vertices)))
    sc = all(any(w[1][i] for w in sols) for i in range(len(C.vertices)))
    if not (st and sc):
        return False
    return affine_dim(pts) == T.dim + dim_v + 1 - delta.dim


def sgp_trivial(T: GeoSimplex, delta: GeoSimplex) -> bool:
    """Whether strong general position holds for every admissible u and V:
    T inside a facet of delta (the intersection stays in the boundary), or
    T = delta (then T ∩ u*V = u*V has the expected dimension)."""
    lams = [delta.bary(p) for p in T.vertices]
    if any(l is None for l in lams):
        return False
    if any(all(l[i] == 0 for l in lams) for i in range(len(delta.vertices))):
        return True
    return (
        len(T.vertices) == len(delta.vertices)
        and all(sorted(l) == [0] * (len(l) - 1) + [1] for l in lams)
        and len({tuple(l) for l in lams}) == len(lams)
    )


# --------------------------------------------------------------- triangulation


def local_frame(pts: Sequence[Point]):
    """Origin and a direction basis of the affine hull of ``pts``."""
    o = pts[0]
    diffs = [sub(p, o) for p in pts[1:]]
    if not diffs:
        return o, []
    t = [list(col) for col in zip(*diffs)]
    _, piv = rref(t)
    return o, [diffs[i] for i in piv]


def to_local(x: Point, frame) -> Tuple[Fraction, ...]:
    o, basis = frame
    if not basis:
        return ()
    a = [[b[j] for b in basis] for j in range(len(o))]
    sol = solve(a, list(sub(x, o)))
    if sol is None:
        raise ValidationError("point is off the affine hull")
    return tuple(sol)


def triangulate(pts: Sequence[Point]) -> List[Tuple[Point, ...]]:
    """Pulling triangulation of conv(pts), pulling lexicographically minimal vertices."""
    pts = list(dict.fromkeys(point(p) for p in pts))
    if not pts:
        return []
    frame = local_frame(pts)
    loc = {p: to_local(p, frame) for p in pts}
    return [tuple(s) for s in _pull(pts, loc, len(frame[1]))]


def _pull(pts, loc, d):
    if d <= 0:
        return [[min(pts)]]
    if len(pts) == d + 1:
        return [sorted(pts)]
    verts = _hull_vertices(pts, loc, d)
    v = min(verts)
    out = []
    for facet in _facets(verts, loc, d):
        if v in facet:
            continue
        fl = local_frame(facet)
        floc = {p: to_local(p, fl) for p in facet}
        for s in _pull(facet, floc, d - 1):
            out.append([v] + list(s))
    return out


def _hull_vertices(pts, loc, d):
    out = []
    for p in pts:
        others = [q for q in pts if q != p]
        if convex_weights([loc[q] for q in others], loc[p]) is None if others else True:
            out.append(p)
    return out


def _facets(pts, loc, d):
    seen = []
    for sub_ in itertools.combinations(pts, d):
        if affine_dim([loc[p] for p in sub_]) != d - 1:
            continue
        base = loc[sub_[0]]
        diffs = [sub(loc[p], base) for p in sub_[1:]]
        normal = nullspace(diffs, d)[0] if diffs else [Fraction(1)]
        side = [sum((a * b for a, b in zip(normal, sub(loc[p], base))), Fraction(0)) for p in pts]
        if all(s >= 0 for s in side) or all(s <= 0 for s in side):
            facet = frozenset(p for p, s in zip(pts, side) if s == 0)
            if facet not in seen:
                seen.append(facet)
    return [sorted(f) for f in seen]


def simplex_volume_local(vs: Sequence[Tuple[Fraction, ...]]) -> Fraction:
    """Unnormalized |det| volume of a full-dimensional simplex in local coordinates."""
    from .linalg import determinant

    if len(vs) == 1:
        return Fraction(1)
    return abs(determinant([sub(v, vs[0]) for v in vs[1:]]))


# ----------------------------------------------------------------- sampling


@dataclass(frozen=True)
class PseudoBarycentreChoice:
    point: Point
    bary: Tuple[Fraction, ...]
    parent: GeoSimplex
    seed: str
    attempts: int


def ball_radius(ell: int) -> Fraction:
    return Fraction(ell, (ell + 1) * (2 * ell + 1))


def sample_pseudobarycentre(
    delta: GeoSimplex,
    boundary_faces: Sequence[GeoSimplex] = (),
    envelopes: Sequence[GeoSimplex] = (),
    forbidden: Sequence = (),
    seed=0,
    key: str = "",
    max_attempts: int = 10000,
) -> PseudoBarycentreChoice:
    """Rejection-sample a point of int(delta) near its barycentre that is in strong
    general position with every envelope simplex and boundary face, and avoids
    every forbidden set."""
    ell = delta.dim
    if ell < 1:
        raise ValidationError("pseudo-barycentres are sampled in simplexes of dimension >= 1")
    rng = random.Random(f"{seed}:{key}")
    b = delta.barycentre()
    limit = ball_radius(ell) ** 2 * sq_diameter(delta.vertices)
    faces_ = list(boundary_faces) + [None]
    envelopes = [T for T in envelopes if not sgp_trivial(T, delta)]
    k = 8
    for attempt in range(1, max_attempts + 1):
        if attempt % 1000 == 0:
            k += 1
        den = 2 ** k
        n = max(1, den // (4 * (ell + 1)))
        lam = [Fraction(1, ell + 1) + Fraction(rng.randint(-n, n), den) for _ in range(ell)]
        lam.append(1 - sum(lam))
        if any(v <= 0 for v in lam):
            continue
        u = combo(lam, delta.vertices)
        if not sqdist(u, b) < limit:
            continue
        if any(f.contains(u) for f in forbidden):
            continue
        if all(strong_general_position(u, T, B, delta) for T in envelopes for B in faces_):
            return PseudoBarycentreChoice(u, tuple(lam), delta, f"{seed}:{key}", attempt)
    raise SamplingExhausted(f"no admissible point after {max_attempts} attempts")


def perturbations(u: Point, delta: GeoSimplex, radius_sq: Fraction, count: int, rng: random.Random) -> List[Point]:
    """Points of int(delta) strictly within sqrt(radius_sq) of u (in delta's affine hull)."""
    lam = delta.bary(u)
    ell = delta.dim
    out = []
    while len(out) < count:
        d = [Fraction(rng.randint(-1000, 1000), 1000) for _ in range(ell)]
        d.append(-sum(d))
        step = sqnorm(combo(d, delta.vertices))
        if step == 0:
            continue
        # shrink by powers of two until inside the ball and the simplex
        scale = Fraction(1)
        while step * scale * scale >= radius_sq:
            scale /= 2
        w = [l + scale * x for l, x in zip(lam, d)]
        if all(v > 0 for v in w):
            out.append(combo(w, delta.vertices))
    return out


def stability_witness(
    u: Point,
    pairs: Sequence[Tuple[GeoSimplex, Optional[GeoSimplex]]],
    delta: GeoSimplex,
    seed=0,
    count: int = 50,
    max_halvings: int = 40,
) -> Optional[Fraction]:
    """A radius r such that ``count`` sampled perturbations within r keep every
    pair in strong general position; returns r**2, or None if none was found."""
    rng = random.Random(f"stability:{seed}")
    r_sq = sq_diameter(delta.vertices) / Fraction(2 ** 20)
    for _ in range(max_halvings):
        pts = perturbations(u, delta, r_sq, count, rng)
        if all(strong_general_position(w, T, V, delta) for w in pts for T, V in pairs):
            return r_sq
        r_sq /= 4
    return None
