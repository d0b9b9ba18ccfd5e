from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sullivan.dga import DgaError, DgaMorphism, FreeDga, format_element, parse_element

S2 = FreeDga([("x", 2), ("y", 3)], {"y": "x^2"})
MIXED = FreeDga([("a", 2), ("b", 2), ("u", 3), ("v", 3), ("w", 4)],
                {"u": "a^2", "v": "a*b", "w": "a*v + -1*b*u"})


def elements(A, degree):
    basis = A.monomial_basis(degree)
    return st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=2),
                    min_size=len(basis), max_size=len(basis)).map(lambda v: A.from_vector(v, degree))


def test_mixed_differential_squares_to_zero():
    # d w = a v - b u is closed: d(a v - b u) = a*a*b - b*a^2 = 0
    assert MIXED.diff(MIXED.d_gen[4]) == {}


def test_d_squared_nonzero_rejected():
    with pytest.raises(DgaError):
        FreeDga([("a", 2), ("u", 3), ("w", 5)], {"u": "a^2", "w": "a*u"})


def test_wrong_degree_rejected():
    with pytest.raises(DgaError):
        FreeDga([("x", 2), ("y", 3)], {"y": "x"})


def test_sign_of_odd_generators():
    A = FreeDga([("u", 3), ("v", 3)])
    u, v = A.gen("u"), A.gen("v")
    assert A.mul(u, v) == A.scale(A.mul(v, u), -1)
    assert A.mul(u, u) == {}


@pytest.mark.parametrize("degree", range(0, 13))
def test_basis_dimension_matches_generating_function(degree):
    # Poincare series of MIXED: (1 + t^3)^2 / ((1 - t^2)^2 (1 - t^4))
    t = sympy.symbols("t")
    series = sympy.series((1 + t ** 3) ** 2 / ((1 - t ** 2) ** 2 * (1 - t ** 4)), t, 0, 14).removeO()
    assert MIXED.dimension(degree) == series.coeff(t, degree)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_leibniz_and_commutativity(data):
    p = data.draw(st.integers(2, 6))
    q = data.draw(st.integers(2, 6))
    a = data.draw(elements(MIXED, p))
    b = data.draw(elements(MIXED, q))
    A = MIXED
    assert A.mul(a, b) == A.scale(A.mul(b, a), (-1) ** (p * q))
    lhs = A.diff(A.mul(a, b))
    rhs = A.add(A.mul(A.diff(a), b), A.mul(a, A.diff(b)), (-1) ** p)
    assert lhs == rhs
    assert A.diff(A.diff(a)) == {}


def test_cohomology_of_sphere_model():
    # Lambda(x2, y3; dy = x^2) has the cohomology of S^2
    dims = [S2.cohomology(m)[0] for m in range(10)]
    assert dims == [1, 0, 1, 0, 0, 0, 0, 0, 0, 0]


def test_format_and_parse_round_trip():
    el = MIXED.add(MIXED.mul(MIXED.gen("a"), MIXED.gen("v")), MIXED.scale(MIXED.mul(MIXED.gen("b"), MIXED.gen("u")), Fraction(-3, 2)))
    text = format_element(el, MIXED)
    assert parse_element(text, MIXED) == el
    assert format_element({}, MIXED) == "0"


def test_parse_respects_factor_order():
    A = FreeDga([("u", 3), ("v", 3)])
    assert parse_element("v*u", A) == A.scale(parse_element("u*v", A), -1)
    assert parse_element("u*v - 2*u*v", A) == A.scale(A.mul(A.gen("u"), A.gen("v")), -1)


def test_json_round_trip():
    data = MIXED.to_json()
    B = FreeDga.from_json(data)
    assert B.to_json() == data
    assert [g["name"] for g in data["generators"]] == ["a", "b", "u", "v", "w"]


def test_minimality():
    assert S2.is_minimal()
    assert not FreeDga([("b", 3), ("a", 4)], {"b": "a"}).is_minimal()
    assert not FreeDga([("t", 1)]).is_minimal()


def test_extend_pads_existing_elements():
    B = S2.extend([("w", 4, {})])
    assert B.d_gen[1] == {(2, 0, 0): 1}
    assert B.generator_counts() == {2: 1, 3: 1, 4: 1}
    assert MIXED.max_generator_degree() == 4


def test_morphism_between_models():
    T = FreeDga([("x", 2), ("y", 3)], {"y": "2*x^2"})
    phi = DgaMorphism(S2, T, [T.gen("x"), T.scale(T.gen("y"), Fraction(1, 2))])
    assert phi.violations() == []
    bad = DgaMorphism(S2, T, [T.gen("x"), T.gen("y")])
    assert bad.violations() == ["m d != d m on y"]
    assert phi(S2.mul(S2.gen("x"), S2.gen("y"))) == {(1, 1): Fraction(1, 2)}
