import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import operators
from wgshift import Annulus, FiniteSet, NullSequence, WgsOperator, adjoint_decompose, identity
from wgshift.io import (
    DocumentParseError,
    ValidationError,
    load_alphabet,
    load_operator,
    load_sum_manifest,
    load_vector,
    save_alphabet,
    save_decomposition,
    save_operator,
    save_vector,
)

FIXTURES = Path(__file__).parent / "fixtures"


def test_load_swap_document():
    op = load_operator('{"schema_version":"1","n":2,"phi":[1,0],"weights":[[0,1],[2,0]]}')
    assert op == WgsOperator([1, 0], [1j, 2])


def test_save_identity():
    assert save_operator(identity(1)) == '{"schema_version":"1","n":1,"phi":[0],"weights":[[1,0]]}'


def test_zero_weights_are_written():
    doc = json.loads(save_operator(WgsOperator([0, 0], [0, 1.5])))
    assert doc["weights"] == [[0, 0], [1.5, 0]]


def test_key_order():
    assert list(json.loads(save_operator(identity(2)))) == ["schema_version", "n", "phi", "weights"]


@pytest.mark.parametrize(
    "doc, message",
    [
        ('{"n":2,"phi":[2,0],"weights":[[1,0],[1,0]]}', r"phi\[0\]=2 out of range \[0,2\)"),
        ('{"n":2,"phi":[0,0],"weights":[[1,0],[1]]}', r"weights\[1\] must be a \[re, im\] pair"),
        ('{"n":2,"phi":[0,0],"weights":[[1,0,0],[1,0]]}', r"weights\[0\] must be a \[re, im\] pair"),
        ('{"n":2,"phi":[0],"weights":[[1,0],[1,0]]}', r"phi has 1 entries"),
        ('{"n":2,"phi":[0,0],"weights":[[1,0]]}', r"weights has 1 entries"),
        ('{"n":0,"phi":[],"weights":[]}', r"positive integer"),
        ('{"n":1,"phi":[true],"weights":[[1,0]]}', r"phi\[0\]=True is not an integer"),
        ('{"n":1,"phi":[0],"weights":[["1",0]]}', r"must be a number"),
        ('{"n":1,"phi":[0],"weights":[[NaN,0]]}', r"not finite"),
        ('{"n":1,"phi":[0]}', r"missing field 'weights'"),
        ('{"schema_version":"2","n":1,"phi":[0],"weights":[[1,0]]}', r"schema_version"),
        ("[1, 2]", r"JSON object"),
    ],
)
def test_validation_errors(doc, message):
    with pytest.raises(ValidationError, match=message):
        load_operator(doc)


def test_parse_error_reports_byte_offset():
    with pytest.raises(DocumentParseError) as info:
        load_operator('{"n": 1, "phi": [0,], "weights": []}')
    assert info.value.offset == '{"n": 1, "phi": [0,], "weights": []}'.index("]")
    # offsets count bytes, not characters
    with pytest.raises(DocumentParseError) as info:
        load_operator('{"é": 1 "n"}')
    assert info.value.offset == len('{"é": 1 '.encode())


def test_fixture_documents_are_canonical():
    for path in FIXTURES.glob("*.json"):
        text = path.read_text().strip()
        if json.loads(text).get("phi") is None:
            continue
        assert save_operator(load_operator(text)) == text, path.name


@settings(max_examples=300)
@given(operators(max_n=10))
def test_round_trip_is_bit_exact(op):
    text = save_operator(op)
    back = load_operator(text)
    assert np.array_equal(back.phi, op.phi)
    assert back.weights.tobytes() == op.weights.tobytes()
    assert save_operator(back) == text


@given(st.floats(allow_nan=False, allow_infinity=False), st.floats(allow_nan=False, allow_infinity=False))
def test_weight_round_trip_extremes(re, im):
    op = WgsOperator([0], [complex(re, im)])
    assert load_operator(save_operator(op)).weights.tobytes() == op.weights.tobytes()


def test_vector_documents():
    x = np.array([1 + 2j, -0.5])
    assert np.array_equal(load_vector(save_vector(x)), x)
    assert np.array_equal(load_vector("[[1,0],[0,1]]"), [1, 1j])
    with pytest.raises(ValidationError):
        load_vector('{"n":3,"coords":[[1,0]]}')
    with pytest.raises(ValidationError):
        load_vector("[[1,0]]", n=2)


@pytest.mark.parametrize(
    "alphabet",
    [FiniteSet([1j, -1j]), Annulus(0.25), NullSequence(), NullSequence("geometric", 0.5, 0.25)],
)
def test_alphabet_round_trip(alphabet):
    assert load_alphabet(save_alphabet(alphabet)) == alphabet


def test_alphabet_documents():
    assert load_alphabet('{"kind":"finite","elements":[[1,0],[-1,0]]}') == FiniteSet([1, -1])
    assert load_alphabet('{"kind":"annulus","delta":0.5}') == Annulus(0.5)
    assert load_alphabet('{"kind":"null_sequence","rule":"reciprocal"}') == NullSequence()
    for bad in ('{"kind":"finite","elements":[[0,0]]}', '{"kind":"annulus","delta":-1}', '{"kind":"disk"}', "{}"):
        with pytest.raises(ValidationError):
            load_alphabet(bad)


def test_decomposition_manifest_round_trip(tmp_path):
    op = WgsOperator([0, 0, 2, 2], [1, 2j, 0, 3])
    res = adjoint_decompose(op)
    manifest_path = save_decomposition(res, tmp_path / "adj")
    n, terms, manifest = load_sum_manifest(manifest_path)
    assert n == 4 and tuple(terms) == res.terms
    assert manifest["term_count"] == 2 and manifest["anchor"] == 0
    assert manifest["fiber_counts"] == [2, 0, 1, 0]


def test_inline_manifest():
    n, terms, _ = load_sum_manifest(FIXTURES / "sum-01.json")
    assert n == 3 and len(terms) == 2


def test_manifest_errors(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"n": 2, "terms": [{"n": 3, "phi": [0,0,0], "weights": [[1,0],[1,0],[1,0]]}]}')
    with pytest.raises(ValidationError, match="dimension 3"):
        load_sum_manifest(p)
    p.write_text('{"n": 2, "terms": ["missing.json"]}')
    with pytest.raises(OSError):
        load_sum_manifest(p)
    p.write_text('{"terms": 5}')
    with pytest.raises(ValidationError):
        load_sum_manifest(p)
