import json

import pytest

from polyih.cli import EXIT_FAIL, EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, main
from polyih.corpus import CORPUS_DIR


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_compute_prints_a_betti_table(capsys):
    code = main(["compute", "--complex", str(CORPUS_DIR / "pinched_torus.json"), "--perversity", "t", "--notion", "gm", "--level", "1"])
    assert code == EXIT_OK
    recs = records(capsys.readouterr().out)
    assert recs[0]["record"] == "run" and recs[0]["perversity"] == "t"
    assert [r["betti"] for r in recs if r["record"] == "degree"] == [1, 0, 1]
    assert recs[-1] == {"record": "result", "pass": True}


def test_compute_reports_torsion(capsys):
    assert main(["compute", "--complex", str(CORPUS_DIR / "rp2.json"), "--perversity", "0"]) == EXIT_OK
    degrees = [r for r in records(capsys.readouterr().out) if r["record"] == "degree"]
    assert [r["torsion"] for r in degrees] == [[], [2], []]


def test_named_perversity_from_the_document(capsys):
    assert main(["compute", "--complex", str(CORPUS_DIR / "pinched_torus.json"), "--perversity", "top"]) == EXIT_OK
    assert records(capsys.readouterr().out)[0]["perversity"] == "t"


def test_malformed_rational_exits_with_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "formal_dim": 1,\n "simplexes": [["a", "b"]],\n "coordinates": {"a": ["3/0"], "b": ["1"]}\n}\n')
    assert main(["compute", "--complex", str(bad)]) == EXIT_PARSE
    assert "line 4, column 24" in capsys.readouterr().err


def test_missing_file_exits_with_parse_error(tmp_path):
    assert main(["compute", "--complex", str(tmp_path / "nope.json")]) == EXIT_PARSE


def test_unknown_stratum_exits_with_validation_error(capsys):
    code = main(["compute", "--complex", str(CORPUS_DIR / "pinched_torus.json"), "--perversity", "S[zz]=1"])
    assert code == EXIT_VALIDATION
    assert "validation error [" in capsys.readouterr().err


def test_bad_ring_exits_with_validation_error():
    assert main(["compute", "--complex", str(CORPUS_DIR / "circle.json"), "--ring", "Zp:4"]) == EXIT_VALIDATION


def test_unknown_suite_is_a_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["check", "nosuch"])
    assert err.value.code == 2


def test_reports_are_deterministic(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.jsonl"
        args = ["compute", "--complex", str(CORPUS_DIR / "cone_two_circles.json"), "--level", "1", "--seed", "9", "--report", str(path)]
        assert main(args) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b"seconds" not in outs[0]


def test_timings_are_opt_in(capsys):
    main(["compute", "--complex", str(CORPUS_DIR / "circle.json"), "--timings"])
    assert "seconds" in records(capsys.readouterr().out)[-1]


def test_corpus_round_trip_and_check(tmp_path, capsys):
    assert main(["corpus", "--out", str(tmp_path)]) == EXIT_OK
    written = sorted(p.name for p in tmp_path.glob("*.json"))
    assert written == sorted(p.name for p in CORPUS_DIR.glob("*.json"))
    for p in tmp_path.glob("*.json"):
        assert p.read_bytes() == (CORPUS_DIR / p.name).read_bytes()
    capsys.readouterr()
    assert main(["check", "mv", "--corpus", str(tmp_path)]) == EXIT_OK
    recs = records(capsys.readouterr().out)
    assert recs[0]["record"] == "run" and len(recs[0]["inputs_digest"]) == 64
    assert recs[-1]["record"] == "result" and recs[-1]["pass"]
    assert all(r["pass"] for r in recs if r["record"] == "check")


def test_empty_corpus_directory_is_rejected(tmp_path):
    assert main(["check", "mv", "--corpus", str(tmp_path)]) == EXIT_VALIDATION


def test_failing_suite_exits_one(tmp_path, monkeypatch, capsys):
    import polyih.cli as cli

    monkeypatch.setitem(cli.SUITES, "mv", lambda corpus, seed: [{"item": "summary", "pass": False}])
    assert main(["check", "mv"]) == EXIT_FAIL
