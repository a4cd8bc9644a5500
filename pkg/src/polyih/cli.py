"""Command line: ``polyih compute``, ``polyih check`` and ``polyih corpus``.

Reports are JSON lines.  The first record describes the run, the following
records carry results, and the last one is the overall verdict.  Wall-clock
timings are dropped unless ``--timings`` is given, so reports are
byte-identical for identical inputs and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from . import __version__
from .allowability import Realization
from .corpus import CORPUS_DIR, load_corpus, write_corpus
from .document import load
from .errors import ParseError, PolyIHError, ValidationError
from .filtered_complex import parse_perversity
from .homology_engine import Ring, compute_homology
from .suites import SUITES

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_VALIDATION = 0, 1, 2, 3
TIMING_KEYS = {"seconds"}


def _digest(paths: Iterable[Path]) -> str:
    h = hashlib.sha256()
    for p in sorted(paths):
        h.update(p.name.encode())
        h.update(b"\0")
        h.update(p.read_bytes())
    return h.hexdigest()


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


class Reporter:
    def __init__(self, path: Optional[str], timings: bool, stream=None):
        self.lines: List[str] = []
        self.path = path
        self.timings = timings
        self.stream = stream or sys.stdout

    def emit(self, record: Dict) -> None:
        if not self.timings:
            record = _strip_timings(record)
        line = json.dumps(record, sort_keys=True, default=str, ensure_ascii=False)
        self.lines.append(line)
        print(line, file=self.stream)

    def close(self) -> None:
        if self.path:
            Path(self.path).write_text("".join(l + "\n" for l in self.lines), encoding="utf-8")


def cmd_compute(args, rep: Reporter) -> int:
    path = Path(args.complex)
    doc = load(path)
    X = doc.complex()
    spec = doc.perversities.get(args.perversity, args.perversity)
    p = parse_perversity(X, spec)
    ring = Ring.parse(args.ring)
    rep.emit({
        "record": "run", "command": "compute", "version": __version__, "inputs_digest": _digest([path]),
        "complex": doc.name or path.stem, "perversity": spec, "notion": args.notion,
        "ring": ring.tag, "level": args.level, "seed": args.seed,
    })
    t0 = time.perf_counter()
    h = compute_homology(Realization(X), p, args.notion, ring, args.level, args.seed, doc.working)
    for k in range(X.dim + 1):
        rep.emit({
            "record": "degree", "k": k,
            "betti": h.betti[k] if k < len(h.betti) else 0,
            "torsion": h.torsion[k] if k < len(h.torsion) else [],
        })
    rep.emit({"record": "result", "pass": True, "seconds": time.perf_counter() - t0})
    return EXIT_OK


def cmd_check(args, rep: Reporter) -> int:
    directory = Path(args.corpus) if args.corpus else CORPUS_DIR
    files = sorted(directory.glob("*.json"))
    if not files:
        raise ValidationError(f"no corpus documents in {directory}")
    corpus = load_corpus(directory)
    rep.emit({
        "record": "run", "command": "check", "suite": args.suite, "version": __version__,
        "inputs_digest": _digest(files), "seed": args.seed,
    })
    t0 = time.perf_counter()
    records = SUITES[args.suite](corpus, args.seed)
    for r in records[:-1]:
        rep.emit(dict(r, record="check"))
    summary = records[-1]
    rep.emit(dict(summary, record="result", seconds=time.perf_counter() - t0))
    return EXIT_OK if summary["pass"] else EXIT_FAIL


def cmd_corpus(args, rep: Reporter) -> int:
    paths = write_corpus(args.out)
    rep.emit({"record": "result", "command": "corpus", "written": [p.name for p in paths], "pass": True})
    return EXIT_OK


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seeds are unsigned 64-bit integers")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyih", description="Intersection homology of filtered simplicial complexes.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--report", help="also write the JSON-lines report to this file")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    c = sub.add_parser("compute", help="intersection homology of one complex document")
    c.add_argument("--complex", required=True)
    c.add_argument("--perversity", default="t", help="preset (0, m, t, n), c2:0,c3:1, k:<v>, S[v]=1, or a name from the document")
    c.add_argument("--notion", choices=("poly", "gm"), default="poly")
    c.add_argument("--ring", default="Z", help="Z or Zp:<prime>")
    c.add_argument("--level", type=int, choices=range(4), default=0)
    common(c)
    c.set_defaults(func=cmd_compute)

    k = sub.add_parser("check", help="run a check suite over a corpus")
    k.add_argument("suite", choices=sorted(SUITES))
    k.add_argument("--corpus", help="directory of complex documents (default: the bundled corpus)")
    common(k)
    k.set_defaults(func=cmd_check)

    w = sub.add_parser("corpus", help="write the bundled corpus documents")
    w.add_argument("--out", required=True)
    common(w)
    w.set_defaults(func=cmd_corpus)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    rep = Reporter(args.report, args.timings)
    try:
        code = args.func(args, rep)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, UnicodeDecodeError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error [{exc.invariant}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PolyIHError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rep.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
