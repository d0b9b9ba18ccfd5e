import itertools

import pytest

from helpers import load_fixture
from sullivan.dga import FreeDga
from sullivan.iso import check_isomorphism, recheck_witness
from sullivan.pipeline import InputError, comparison_degree, decide_rhe, minimal_model_of_space, model_run
from sullivan.qcore import QMatrix
from sullivan.simplicial import FiniteSimplicialSet, SimplexRef, boundary_of_simplex, standard_simplex

CORPUS = ["s2", "s3", "s4", "delta3", "s2_wedge_s4", "cp2_9"]


def verify_evidence(v):
    """Re-check the evidence of a verdict from its serialized form."""
    MX, MY = FreeDga.from_json(v.models["X"]), FreeDga.from_json(v.models["Y"])
    ev = v.evidence
    if v.answer == "Equivalent":
        blocks = {int(p): QMatrix.from_rows(rows, cols=MX.dimension(int(p))) for p, rows in ev["blocks"].items()}
        return check_isomorphism(MX, MY, blocks)
    if v.answer == "NotEquivalent" and "witness" in ev:
        return recheck_witness(MX, MY, ev["witness"])
    return v.answer == "Unknown"


def test_sphere_models():
    M = minimal_model_of_space(boundary_of_simplex(3), 4, assert_simply_connected=True).model
    assert M.to_json()["generators"] == [
        {"name": "v2_0", "degree": 2, "d": "0"},
        {"name": "v3_1", "degree": 3, "d": "1*v2_0^2"},
    ]
    M = minimal_model_of_space(boundary_of_simplex(4), 4, assert_simply_connected=True).model
    assert M.to_json()["generators"] == [{"name": "v3_0", "degree": 3, "d": "0"}]
    M = minimal_model_of_space(standard_simplex(5), 5, assert_simply_connected=True).model
    assert M.ngens == 0


def test_every_stage_is_audited():
    run = model_run(boundary_of_simplex(3), 4, assert_simply_connected=True)
    assert [a.stage for a in run.audits] == [2, 3, 4]
    assert all(a.passed for a in run.audits)


def test_assertion_flag_required():
    with pytest.raises(InputError, match="assert-simply-connected"):
        minimal_model_of_space(boundary_of_simplex(3), 4)


def test_circle_rejected():
    with pytest.raises(InputError, match="H\\^1"):
        minimal_model_of_space(boundary_of_simplex(2), 2, assert_simply_connected=True)


def test_invalid_set_rejected():
    X = FiniteSimplicialSet([["a", "b"], ["e"]], {"e": [SimplexRef((), "a")]})
    with pytest.raises(InputError, match="invalid"):
        minimal_model_of_space(X, 2, assert_simply_connected=True)


def test_comparison_degree():
    assert comparison_degree(boundary_of_simplex(3), boundary_of_simplex(4)) == 3
    assert comparison_degree(standard_simplex(1)) == 2
    with pytest.raises(InputError):
        decide_rhe(boundary_of_simplex(3), boundary_of_simplex(4), d=2, assert_simply_connected=True)


def test_same_sphere_equivalent():
    v = decide_rhe(boundary_of_simplex(3), boundary_of_simplex(3), assert_simply_connected=True)
    assert v.answer == "Equivalent" and v.d == 2
    assert verify_evidence(v)


def test_two_and_three_sphere_differ():
    v = decide_rhe(boundary_of_simplex(3), boundary_of_simplex(4), assert_simply_connected=True)
    assert v.answer == "NotEquivalent"
    assert v.evidence["witness"] == {"invariant": "generator_count", "degree": 2, "source": 1, "target": 0}
    assert verify_evidence(v)


def test_cp2_and_wedge_differ():
    v = decide_rhe(load_fixture("cp2_9"), load_fixture("s2_wedge_s4"), assert_simply_connected=True)
    assert v.answer == "NotEquivalent" and v.d == 4
    assert v.evidence["witness"]["invariant"] == "generator_count"
    assert v.evidence["witness"]["degree"] == 3
    assert verify_evidence(v)


def test_larger_degree_allowed():
    v = decide_rhe(boundary_of_simplex(3), boundary_of_simplex(3), d=6, assert_simply_connected=True)
    assert v.answer == "Equivalent" and v.d == 6


@pytest.mark.parametrize("name", CORPUS)
def test_reflexive_on_corpus(name):
    X = load_fixture(name)
    v = decide_rhe(X, X, assert_simply_connected=True)
    assert v.answer == "Equivalent"
    assert verify_evidence(v)


def test_symmetric_on_corpus():
    spaces = {n: load_fixture(n) for n in CORPUS}
    for a, b in itertools.combinations(CORPUS, 2):
        ab = decide_rhe(spaces[a], spaces[b], assert_simply_connected=True)
        ba = decide_rhe(spaces[b], spaces[a], assert_simply_connected=True)
        assert ab.answer == ba.answer != "Unknown"
        assert verify_evidence(ab) and verify_evidence(ba)
