import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polyih.corpus import build_all
from polyih.document import ComplexDocument, dumps, loads
from polyih.errors import ParseError, ValidationError
from polyih.extended import ext_sub, format_ext, parse_ext, to_json


def test_extended_integers():
    assert parse_ext("+inf") == math.inf and parse_ext("-∞") == -math.inf
    assert parse_ext(" 3 ") == 3
    assert ext_sub(0, math.inf) == -math.inf
    assert ext_sub(1, -math.inf) == math.inf
    assert ext_sub(5, 2) == 3 and isinstance(ext_sub(5, 2), int)
    with pytest.raises(ValueError):
        ext_sub(math.inf, math.inf)
    with pytest.raises(ValueError):
        parse_ext("x")
    assert format_ext(-math.inf) == "-inf" and to_json(4) == 4 and to_json(math.inf) == "+inf"


@pytest.mark.parametrize("name", sorted(build_all()))
def test_corpus_documents_round_trip(corpus, name):
    doc = corpus[name]
    text = dumps(doc)
    assert dumps(loads(text)) == text
    assert text == dumps(build_all()[name])
    doc.complex()


def test_malformed_rational_reports_position():
    text = '{\n "formal_dim": 1,\n "simplexes": [["a", "b"]],\n "coordinates": {"a": ["3/0"], "b": ["1"]}\n}\n'
    with pytest.raises(ParseError) as err:
        loads(text)
    assert (err.value.line, err.value.column) == (4, 24)


def test_invalid_json_reports_position():
    with pytest.raises(ParseError) as err:
        loads('{"formal_dim": 1,\n  "simplexes": [}')
    assert err.value.line == 2


def test_missing_fields_are_validation_errors():
    with pytest.raises(ValidationError):
        loads('{"formal_dim": 1}')
    with pytest.raises(ValidationError):
        loads('{"formal_dim": 1, "simplexes": [["a"]], "format": 7}')
    with pytest.raises(ValidationError):
        loads('{"formal_dim": 1, "simplexes": [["a","b"]], "filtration": {"mode": "vertex", "values": {"a": 0.5}}}')


def test_simplex_mode_filtration_parses():
    doc = loads(json.dumps({
        "formal_dim": 1,
        "simplexes": [["v", "a"], ["v", "b"]],
        "filtration": {"mode": "simplex", "values": [[["v"], 0]]},
    }))
    X = doc.complex()
    assert X.filtration[("v",)] == 0 and X.filtration[("a", "v")] == 1


rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(rationals, rationals), min_size=3, max_size=3, unique=True))
def test_coordinates_round_trip_exactly(pts):
    a, b, c = pts
    if (b[0] - a[0]) * (c[1] - a[1]) == (b[1] - a[1]) * (c[0] - a[0]):
        return
    doc = ComplexDocument(2, [["a", "b", "c"]], coordinates={"a": a, "b": b, "c": c})
    back = loads(dumps(doc))
    assert back.coordinates == {"a": a, "b": b, "c": c}
    assert all(isinstance(x, Fraction) for p in back.coordinates.values() for x in p)
    assert dumps(back) == dumps(doc)
