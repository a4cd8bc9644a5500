"""Check suites over the bundled corpus, shared by the CLI and the tests.

Each suite returns a list of records (plain dicts with a ``pass`` flag); the
last record summarizes the suite.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Callable, Dict, List

from .allowability import Allowability, Realization, chain_boundary
from .corpus import load_corpus
from .document import ComplexDocument
from .exact_geometry import (
    GeoSimplex,
    affine_dim,
    affine_general_position,
    general_position,
    interiors_meet,
    sample_pseudobarycentre,
    simplex_intersection,
    stability_witness,
)
from .errors import SamplingExhausted
from .filtered_complex import cone_complex, parse_perversity
from .homology_engine import (
    Pipeline,
    Ring,
    compute_homology,
    cone_formula_check,
    main_theorem_compare,
    mayer_vietoris_check,
    notion_gap,
)
from .subdivision import (
    ChainOperators,
    add,
    build_prism,
    check_bad_faces,
    homotopy_defect,
    level_inclusion,
    prism_operator,
)

Record = Dict[str, object]
NOTIONS = {"poly": "pseudo", "gm": "barycentric"}
DUALS_AT_APEX = (-2, -1, 0, 1)


def _summary(suite: str, records: List[Record], **extra) -> Record:
    failed = [r.get("item") for r in records if not r["pass"]]
    out = {"suite": suite, "item": "summary", "checked": len(records), "failed": failed, "pass": not failed}
    out.update(extra)
    return out


def _corpus(corpus) -> Dict[str, ComplexDocument]:
    if corpus is None or isinstance(corpus, (str, bytes)) or hasattr(corpus, "__fspath__"):
        return load_corpus(corpus)
    return dict(corpus)


# ------------------------------------------------------------------ cone


def cone_suite(corpus=None, seed=0, level: int = 1) -> List[Record]:
    """The cone formula for every corpus cone over every base perversity and
    every apex value with dual perversity -2..1, in both notions."""
    docs = _corpus(corpus)
    records = []
    pairs = []
    for name in sorted(docs):
        if name.startswith("double_cone_") and "cone_" + name[len("double_cone_"):] in docs:
            pairs.append((name, "cone_" + name[len("double_cone_"):]))
        elif name.startswith("cone_") and name[len("cone_"):] in docs:
            pairs.append((name, name[len("cone_"):]))
    for cone_name, name in pairs:
        X = docs[name].complex()
        presets = ["0", "t"] if X.singular_strata() else ["0"]
        for notion, kind in NOTIONS.items():
            real = Realization(X)
            base_pipe = Pipeline(real, kind, seed)
            cone_pipe = Pipeline(Realization(cone_complex(X)), kind, seed)
            for spec in presets:
                p = parse_perversity(X, spec)
                hX = compute_homology(real, p, notion, Ring(), level, pipeline=base_pipe)
                for D in DUALS_AT_APEX:
                    t0 = time.perf_counter()
                    rec = cone_formula_check(
                        X, p, D, notion, level, Ring(), seed, base=hX, cone_pipeline=cone_pipe
                    )
                    rec["seconds"] = time.perf_counter() - t0
                    rec.update(suite="cone", item=f"{cone_name}/{spec}/D={D}/{notion}")
                    records.append(rec)
    return records + [_summary("cone", records)]


# --------------------------------------------------------- Mayer-Vietoris


def default_cover(X) -> Dict[str, List[List[str]]]:
    """U: the star of the first singular vertex (or the first vertex); V: the
    stars of all other vertices."""
    sing = sorted(next(iter(s.simplexes))[0] for s in X.singular_strata() if s.dim == 0)
    first = sing[0] if sing else X.vertices[0]
    return {"U": [[first]], "V": [[v] for v in X.vertices if v != first]}


MV_INSTANCES = ("pinched_torus", "cone_circle", "cone_two_circles", "suspension_points", "suspension_two_circles", "rp2")
MV_PERVERSITIES = ("0", "t", "k:1")


def mv_suite(corpus=None, seed=0, level: int = 1, instances=MV_INSTANCES, perversities=MV_PERVERSITIES) -> List[Record]:
    docs = _corpus(corpus)
    records = []
    t0 = time.perf_counter()
    for name in instances:
        doc = docs[name]
        X = doc.complex()
        cover = doc.cover or default_cover(X)
        for notion, kind in NOTIONS.items():
            pipe = Pipeline(Realization(X), kind, seed, doc.working)
            lv = pipe.level(level)
            for spec in perversities:
                p = parse_perversity(X, spec)
                rec = mayer_vietoris_check(pipe.real, lv, p, cover["U"], cover["V"], notion)
                rec.update(suite="mv", item=f"{name}/{spec}/{notion}")
                records.append(rec)
    return records + [_summary("mv", records, seconds=time.perf_counter() - t0)]


# ------------------------------------------------------------ subdivision


SUBDIVISION_INSTANCES = ("simplex2", "circle", "cone_circle", "cone_two_circles", "pinched_torus", "motivating_example", "cone_simplex2")
SUBDIVISION_PERVERSITIES = ("0", "m", "t", "k:1")


def _random_chain(rng: random.Random, simplexes, terms: int) -> Dict[tuple, int]:
    chain: Dict[tuple, int] = {}
    for _ in range(terms):
        s = list(rng.choice(simplexes))
        rng.shuffle(s)
        chain = add(chain, {tuple(s): rng.choice([-3, -2, -1, 1, 2, 3])})
    return chain


def subdivision_suite(
    corpus=None,
    seed=0,
    chains: int = 240,
    instances=SUBDIVISION_INSTANCES,
    perversities=SUBDIVISION_PERVERSITIES,
    depth: int = 2,
) -> List[Record]:
    """Homotopy identity on random chains, PB1-PB5 for every built centre,
    prism properties, allowability of sd and T cells, and bad-face structure."""
    docs = _corpus(corpus)
    rng = random.Random(f"subdivision:{seed}")
    records: List[Record] = []
    per_instance = -(-chains // len(instances))
    for name in instances:
        doc = docs[name]
        X = doc.complex()
        pipe = Pipeline(Realization(X), "pseudo", seed, doc.working)
        levels = [pipe.level(r) for r in range(depth + 1 if X.dim <= 2 else depth)]
        system = pipe.system
        ops = ChainOperators(system)
        base = levels[0].all()

        # id - sd = dT + Td on random chains drawn from the first two levels
        pool = base + (levels[1].all() if len(levels) > 1 else [])
        nonzero = []
        for i in range(per_instance):
            xi = _random_chain(rng, pool, rng.randint(1, 4))
            if homotopy_defect(xi, ops):
                nonzero.append(sorted(xi.items()))
        records.append({"suite": "subdivision", "item": f"{name}/homotopy", "chains": per_instance,
                        "nonzero_defects": nonzero[:3], "pass": not nonzero})

        # PB1-PB5 for every centre built so far
        bad_pb: List[object] = []
        built = pb4_failures = 0
        for key in sorted(system.choices):
            if len(key) < 2:
                continue
            res = system.check(key)
            built += 1
            pb4_failures += not res["PB4"]
            if not all(res.values()):
                bad_pb.append([list(key), sorted(k for k, v in res.items() if not v)])
        records.append({"suite": "subdivision", "item": f"{name}/centres", "systems": built,
                        "pb4_failures": pb4_failures, "failures": bad_pb[:5], "pass": not bad_pb})

        # prisms over the base simplexes, and the prism boundary identity
        prism_fail, literal_pb9 = [], 0
        for key in base:
            res = build_prism(key, system).check(key)
            literal_pb9 += not res.pop("PB9_literal")
            if not all(res.values()):
                prism_fail.append([list(key), sorted(k for k, v in res.items() if not v)])
        for _ in range(10):
            xi = _random_chain(rng, base, rng.randint(1, 3))
            lhs = chain_boundary(prism_operator(xi))
            rhs = add(add(level_inclusion(xi, 1), level_inclusion(xi, 0), -1), prism_operator(chain_boundary(xi)), -1)
            if add(lhs, rhs, -1):
                prism_fail.append(["telescoping", sorted(xi.items())])
        records.append({"suite": "subdivision", "item": f"{name}/prisms", "prisms": len(base),
                        "literal_projection_failures": literal_pb9, "failures": prism_fail[:5],
                        "pass": not prism_fail})

        # allowability of sd and T cells, bad faces, per perversity
        for spec in perversities:
            allow = Allowability(pipe.real, parse_perversity(X, spec))
            cells_bad, bf_bad = [], []
            checked = with_bad = 0
            for key in pool:
                if not allow.allowable(key, "poly"):
                    continue
                checked += 1
                for s in list(ops.sd({key: 1})) + list(ops.T({key: 1})):
                    if not allow.allowable(s, "poly"):
                        cells_bad.append([list(key), list(s)])
                if len(key) > 1:
                    rep = check_bad_faces(key, system, allow)
                    with_bad += rep["with_bad_face"]
                    if not (rep["complete"] and rep["codim1"] and rep["shared"]):
                        bf_bad.append([list(key), rep["complete"], rep["codim1"], rep["shared"]])
            records.append({"suite": "subdivision", "item": f"{name}/{spec}/allowability", "simplexes": checked,
                            "failures": cells_bad[:5], "pass": not cells_bad})
            records.append({"suite": "subdivision", "item": f"{name}/{spec}/bad_faces", "simplexes": checked,
                            "cells_with_bad_face": with_bad,
                            "failures": bf_bad[:5], "pass": not bf_bad})
    return records + [_summary("subdivision", records)]


# ------------------------------------------------------------ comparison


COMPARE_PERVERSITIES = ("0", "m", "t", "k:1")


def compare_suite(corpus=None, seed=0, perversities=COMPARE_PERVERSITIES, names=None) -> List[Record]:
    """Stabilized homology in both notions over the corpus, plus the
    barycentre example where the notions differ at level 0."""
    docs = _corpus(corpus)
    records: List[Record] = []
    for name in sorted(names or docs):
        doc = docs[name]
        X = doc.complex()
        max_level = 2 if X.dim <= 2 else 1
        real = Realization(X)
        pipes = {n: Pipeline(real, k, seed, doc.working) for n, k in NOTIONS.items()}
        for spec in perversities:
            rec = main_theorem_compare(real, parse_perversity(X, spec), max_level, Ring(), seed, doc.working, pipes)
            rec.update(suite="compare", item=f"{name}/{spec}", max_level=max_level)
            records.append(rec)
    if "motivating_example" in docs and (names is None or "motivating_example" in names):
        doc = docs["motivating_example"]
        X = doc.complex()
        real = Realization(X)
        pipe = Pipeline(real, "pseudo", seed, doc.working)
        p = parse_perversity(X, "t")
        gap = notion_gap(real, pipe.level(0), p)
        stable = next(r for r in records if r["item"] == "motivating_example/t")
        records.append({
            "suite": "compare",
            "item": "motivating_example/gap",
            "gap_simplexes": [[str(x) for x in real.points[i]] for s in gap for i in s if len(s) == 3],
            "homology_agrees": stable["pass"],
            "pass": bool(gap) and stable["pass"],
        })
    return records + [_summary("compare", records)]


# --------------------------------------------------------------- geometry


def _random_simplex_vertices(rng: random.Random, ell: int):
    while True:
        pts = [tuple(Fraction(rng.randint(-6, 6)) for _ in range(ell)) for _ in range(ell + 1)]
        if affine_dim(pts) == ell:
            return pts


def _random_point(rng: random.Random, vertices, zero=None):
    w = [Fraction(rng.randint(1, 6)) for _ in vertices]
    if zero is not None:
        w[zero] = Fraction(0)
    total = sum(w)
    return tuple(sum((wi / total * v[j] for wi, v in zip(w, vertices)), Fraction(0)) for j in range(len(vertices[0])))


def _random_face(rng: random.Random, vertices, k: int, zero=None) -> GeoSimplex:
    while True:
        S = GeoSimplex(tuple(_random_point(rng, vertices, zero) for _ in range(k + 1)))
        if S.is_nondegenerate():
            return S


def _random_instance(rng: random.Random):
    ell = rng.choice([1, 2, 2, 3])
    dv = _random_simplex_vertices(rng, ell)
    delta = GeoSimplex(tuple(dv))
    tdim = rng.randint(0, ell - 1) if ell > 1 else 0
    T = _random_face(rng, dv, tdim)
    facet = rng.randrange(ell + 1)
    vdim = rng.randint(0, ell - 1)
    V = _random_face(rng, dv, vdim, facet)
    return delta, T, V


def geometry_suite(seed=0, instances: int = 120, perturbation_count: int = 50, equivalence: int = 100) -> List[Record]:
    """Sampler success rate, stability witnesses and the three-way general
    position equivalence on random instances."""
    rng = random.Random(f"geometry:{seed}")
    records: List[Record] = []
    accepted = 0
    no_witness = []
    attempts = []
    for i in range(instances):
        delta, T, V = _random_instance(rng)
        forbidden = [T] if T.dim < delta.dim else []
        try:
            ch = sample_pseudobarycentre(delta, [V], [T], forbidden, seed=seed, key=f"g{i}")
        except SamplingExhausted:
            continue
        accepted += 1
        attempts.append(ch.attempts)
        r_sq = stability_witness(ch.point, [(T, V), (T, None)], delta, seed=f"{seed}:{i}", count=perturbation_count)
        if r_sq is None:
            no_witness.append(i)
    rate = Fraction(accepted, instances)
    records.append({"suite": "geometry", "item": "genericity", "instances": instances, "accepted": accepted,
                    "rate": str(rate), "max_attempts_used": max(attempts, default=0),
                    "pass": instances >= 100 and rate >= Fraction(99, 100)})
    records.append({"suite": "geometry", "item": "stability", "accepted": accepted, "perturbations": perturbation_count,
                    "missing_witness": no_witness, "pass": not no_witness})

    mismatches, meeting, tried, generic = [], 0, 0, 0
    while meeting < equivalence and tried < 50 * equivalence:
        tried += 1
        ell = rng.choice([1, 2, 3])
        dv = _random_simplex_vertices(rng, ell)
        delta = GeoSimplex(tuple(dv))
        P = _random_face(rng, dv, rng.randint(0, ell))
        if rng.random() < 0.3:
            # Q inside the hull of P: a typical non-generic configuration
            Q = _random_face(rng, list(P.vertices), rng.randint(0, P.dim))
        else:
            Q = _random_face(rng, dv, rng.randint(0, ell))
        if not interiors_meet(P, Q):
            continue
        meeting += 1
        i_ = affine_general_position(P, Q, delta)
        ii = general_position(P, Q, delta)
        iii = simplex_intersection(P, Q).dim == P.dim + Q.dim - delta.dim
        generic += iii
        if not (i_ == ii == iii):
            mismatches.append([meeting, i_, ii, iii])
    records.append({"suite": "geometry", "item": "general_position_equivalence", "instances": meeting,
                    "generic": generic, "mismatches": mismatches[:5], "pass": meeting >= equivalence and not mismatches})
    return records + [_summary("geometry", records)]


SUITES: Dict[str, Callable[..., List[Record]]] = {
    "cone": cone_suite,
    "mv": mv_suite,
    "subdivision": subdivision_suite,
    "compare": compare_suite,
    "geometry": lambda corpus=None, seed=0: geometry_suite(seed),
}
