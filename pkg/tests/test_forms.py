from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sullivan.forms import (
    PolyForm,
    bary_dt,
    bary_t,
    de_rham,
    degeneracy_op,
    dupont_h,
    dupont_h_injection,
    dupont_h_vertex,
    dupont_projector,
    face_op,
    injections,
    integrate,
    integrate_top,
    whitney,
    whitney_map,
)

F = Fraction


def mono(exps, dts=(), c=1, n=2):
    return PolyForm.monomial(n, exps, dts, c)


@st.composite
def forms(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(0, n))
    out = PolyForm.zero(n)
    for _ in range(draw(st.integers(1, 3))):
        exps = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
        dts = draw(st.permutations(range(1, n + 1)))[:k]
        c = draw(st.fractions(min_value=-3, max_value=3, max_denominator=2))
        out = out + PolyForm.monomial(n, exps, dts, c)
    return out


# -- reference values on Delta[2] for eta = t1^2 dt2 ---------------------------------

ETA = mono((2, 0), (2,))


def test_example_h_vertex_1():
    expected = mono((0, 1), c=F(-1, 3)) + mono((1, 1), c=F(-1, 3)) + mono((2, 1), c=F(-1, 3))
    assert dupont_h_vertex(ETA, 1) == expected


def test_example_h_edge_vanishes():
    assert dupont_h_injection(ETA, (1, 2)).is_zero()


def test_example_h_total():
    assert dupont_h(ETA) == mono((1, 1), c=F(-1, 3)) + mono((2, 1), c=F(-1, 3))


def test_example_h_of_d_eta():
    expected = mono((1, 0), (2,), F(2, 3)) + mono((1, 1), (1,), F(2, 3)) + mono((2, 0), (2,), F(-2, 3))
    assert dupont_h(ETA.diff()) == expected


def test_example_projector():
    expected = (mono((1, 0), (2,)) - mono((0, 1), (1,))).scale(F(1, 3))
    assert dupont_projector(ETA) == expected


def test_example_homotopy_identity():
    lhs = dupont_h(ETA).diff() + dupont_h(ETA.diff())
    assert lhs == dupont_projector(ETA) - ETA


# -- Whitney forms and integration ---------------------------------------------------


def test_whitney_edge():
    assert whitney((1, 2), 2) == mono((1, 0), (2,)) - mono((0, 1), (1,))


def test_whitney_degenerate_is_zero():
    assert whitney((1, 1), 2).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_whitney_integrates_to_delta(n):
    for p in range(n + 1):
        for f in injections(p, n):
            w = whitney(f, n)
            for g in injections(p, n):
                assert integrate(w, g) == (1 if f == g else 0)


def _sympy_integral(eta: PolyForm) -> sympy.Rational:
    # iterated integral over t_i >= 0, sum t_i <= 1, of the dt_1...dt_k coefficient
    k = eta.n
    ts = sympy.symbols(f"t1:{k + 1}")
    expr = 0
    for (exps, dts), c in eta.terms.items():
        if tuple(dts) == tuple(range(1, k + 1)):
            expr += sympy.Rational(c.numerator, c.denominator) * sympy.prod([t ** e for t, e in zip(ts, exps)])
    for i in reversed(range(k)):
        expr = sympy.integrate(expr, (ts[i], 0, 1 - sum(ts[:i])))
    return expr


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_integrate_top_matches_sympy(n, data):
    exps = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    c = data.draw(st.fractions(min_value=-5, max_value=5, max_denominator=4))
    eta = PolyForm.monomial(n, exps, tuple(range(1, n + 1)), c)
    assert integrate_top(eta) == _sympy_integral(eta)


def test_stokes_on_simplex():
    # int d(eta) over Delta[2] = sum_i (-1)^i int over the i-th face
    eta = mono((2, 1), (1,)) + mono((0, 3), (2,), F(1, 2))
    lhs = integrate(eta.diff(), (0, 1, 2))
    rhs = sum((-1) ** i * integrate(face_op(eta, i), (0, 1)) for i in range(3))
    assert lhs == rhs


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_de_rham_after_whitney_is_identity(n):
    for p in range(n + 1):
        cochain = {f: F(i + 1, 2) for i, f in enumerate(injections(p, n))}
        assert de_rham(whitney_map(cochain, n), p) == cochain


def test_barycentric_coordinates_sum_to_one():
    for n in range(1, 5):
        total = PolyForm.zero(n)
        dtotal = PolyForm.zero(n)
        for i in range(n + 1):
            total = total + bary_t(i, n)
            dtotal = dtotal + bary_dt(i, n)
        assert total == PolyForm.const(n, 1)
        assert dtotal.is_zero()


def test_wedge_is_graded_commutative():
    a, b = mono((0, 0), (1,)), mono((0, 0), (2,))
    assert a * b == -(b * a)
    assert (a * a).is_zero()


# -- properties ----------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(forms())
def test_d_squared_zero(eta):
    assert eta.diff().diff().is_zero()


@settings(max_examples=60, deadline=None)
@given(forms(3), st.data())
def test_leibniz(a, data):
    b = data.draw(forms(3).filter(lambda f: f.n == a.n))
    k = a.degree
    assert (a * b).diff() == a.diff() * b + (a * b.diff()).scale((-1) ** k)


@settings(max_examples=60, deadline=None)
@given(forms())
def test_homotopy_identity(eta):
    assert dupont_h(eta).diff() + dupont_h(eta.diff()) == dupont_projector(eta) - eta


@settings(max_examples=40, deadline=None)
@given(forms())
def test_side_conditions(eta):
    h, pi = dupont_h, dupont_projector
    assert h(h(eta)).is_zero()
    assert pi(h(eta)).is_zero()
    assert h(pi(eta)).is_zero()
    assert pi(pi(eta)) == pi(eta)


@settings(max_examples=40, deadline=None)
@given(forms())
def test_naturality_under_faces_and_degeneracies(eta):
    n = eta.n
    for i in range(n + 1):
        assert face_op(dupont_h(eta), i) == dupont_h(face_op(eta, i))
        assert face_op(dupont_projector(eta), i) == dupont_projector(face_op(eta, i))
    for j in range(n + 1):
        assert degeneracy_op(dupont_h(eta), j) == dupont_h(degeneracy_op(eta, j))


def test_mixed_ambient_rejected():
    with pytest.raises(ValueError):
        PolyForm.const(1, 1) + PolyForm.const(2, 1)
