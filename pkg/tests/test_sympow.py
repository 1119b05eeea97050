from fractions import Fraction
from math import factorial

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from chowring import (
    InputError,
    extract_system,
    i_pushforward,
    minimal_equation,
    normal_form,
    pbig_det,
    pbig_matrix,
    strong_stability_check,
    sympow_ring,
)
from chowring.linalg import rank
from chowring.sympow import i_pushforward_matrix

from oracles import extract_system_oracle, sympy_det


def test_rules_small_genus():
    assert sympow_ring(1).presentation.relation_strings() == [("z", "theta")]
    assert sympow_ring(2).presentation.relation_strings() == [("z^2", "-1/2*theta^2 + theta*z")]
    assert sympow_ring(2, "formal").presentation.relation_strings() == [("z^2", "-v1*z - v2")]


def test_minimal_equation_examples():
    R1 = sympow_ring(1)
    assert minimal_equation(R1) == R1.presentation.parse("z - theta")
    assert str(minimal_equation(R1)) == "-theta + z"
    R2 = sympow_ring(2)
    assert str(minimal_equation(R2)) == "1/2*theta^2 - theta*z + z^2"
    assert str(minimal_equation(sympow_ring(3, "formal"))) == "v1*z^2 + v2*z + v3 + z^3"
    assert not minimal_equation(R2).reduced


@pytest.mark.parametrize("mode", ["theta", "formal"])
@pytest.mark.parametrize("g", range(1, 9))
def test_minimal_equation_vanishes(g, mode):
    R = sympow_ring(g, mode)
    assert normal_form(minimal_equation(R)).is_zero()


def test_bad_arguments():
    with pytest.raises(InputError):
        sympow_ring(0)
    with pytest.raises(InputError):
        sympow_ring(2, "weird")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.lists(st.tuples(st.integers(0, 5), st.integers(0, 9)), max_size=5))
def test_normal_forms_have_small_z_degree(g, monos):
    R = sympow_ring(g)
    P = R.presentation
    x = P.element({(a, b): 1 for a, b in monos})
    assert all(m[-1] < g for m in x.terms)
    assert all(m[0] <= g for m in x.terms)


def test_i_pushforward_examples():
    R2 = sympow_ring(2)
    P = R2.presentation
    assert i_pushforward(R2, 1, [(1, 0)]) == P.element("z^2")
    # z^2 = theta*z - theta^2/2 and theta^3 = 0
    assert i_pushforward(R2, 1, [("theta", 0)]) == P.element("theta^2*z")
    R3 = sympow_ring(3)
    assert i_pushforward(R3, 3, [(1, 1)]) == R3.z ** 3
    with pytest.raises(InputError):
        i_pushforward(R2, 4, [(1, 0)])
    with pytest.raises(InputError):
        i_pushforward(R2, 0, [(1, 0)])


def test_i_pushforward_linear():
    R = sympow_ring(3)
    a = i_pushforward(R, 3, [("theta", 1), ("2*theta^2", 0)])
    b = i_pushforward(R, 3, [("theta", 1)]) + i_pushforward(R, 3, [("theta^2", 0)]) * 2
    assert a == b


@pytest.mark.parametrize("g", range(1, 6))
def test_i_pushforward_injective_below_middle(g):
    R = sympow_ring(g)
    for n in range(1, 2 * g):
        for p in range(0, n // 2 + 1):
            _, M = i_pushforward_matrix(R, n, p)
            assert rank(M) == M.cols, (g, n, p)


def test_stability_examples():
    r = strong_stability_check(2, 3, 1)
    assert r.verdict == "injective" and (r.domain_dim, r.codomain_dim, r.rank) == (2, 2, 2)
    assert strong_stability_check(3, 5, 1).verdict == "injective"
    with pytest.raises(InputError):
        strong_stability_check(2, 2, 1)
    with pytest.raises(InputError):
        strong_stability_check(2, 4, 1)


def test_extract_system_shapes():
    r = extract_system(4, 2)
    P = r.equations_a[0].ring
    assert r.k == 1
    assert r.equations_a == [P.element("a1*v2"), P.element("a1*v3")]
    assert r.expressions_y == {"y2": P.element("a1*v1")}
    r = extract_system(6, 3)
    P = r.equations_a[0].ring
    assert r.equations_a == [P.element(e) for e in
                             ("a1*v3 + a2*v2", "a1*v4 + a2*v3", "a1*v5 + a2*v4")]
    assert r.expressions_y == {"y3": P.element("a1*v2 + a2*v1")}
    assert r.trail == ["a1 = y1", "a2 = y2 - a1*v1"]
    assert r.shape_matches
    with pytest.raises(InputError, match="exceeds p"):
        extract_system(5, 1)
    with pytest.raises(InputError):
        extract_system(3, 3)


def _to_sympy(x):
    syms = {n: sp.Symbol(n) for n in x.ring.names}
    out = 0
    for m, c in x.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for n, e in zip(x.ring.names, m):
            term *= syms[n] ** e
        out += term
    return sp.expand(out)


def admissible_pairs(gmax):
    return [(g, p) for g in range(2, gmax + 1) for p in range(0, g)
            if 2 * g - 1 >= 2 * p + 1 and g - p - 1 <= p]


@pytest.mark.parametrize("g,p", admissible_pairs(7))
def test_extract_system_matches_sympy_oracle(g, p):
    rep = extract_system(g, p)
    k, coeffs = extract_system_oracle(g, p)
    assert k == rep.k
    for e in range(g):
        assert _to_sympy(rep.coefficients[e]) == coeffs[e], (g, p, e)
    assert rep.shape_matches, rep.mismatches


def test_pbig_examples():
    assert pbig_matrix(5, 2).tolist() == [[Fraction(1, 6), Fraction(-1, 2)], [Fraction(1, 24), Fraction(-1, 6)]]
    assert pbig_det(5, 2) == Fraction(-1, 144)
    assert pbig_matrix(3, 1, rows="head").tolist() == [[1]]
    assert pbig_det(3, 1, rows="head") == 1
    assert pbig_det(7, 3) != 0
    for bad in ((5, 1), (3, 2), (4, 3)):
        with pytest.raises(InputError):
            pbig_matrix(*bad)
    with pytest.raises(InputError):
        pbig_matrix(5, 2, rows="middle")


@pytest.mark.parametrize("rows", ["tail", "head"])
def test_pbig_nonzero_and_matches_oracle(rows):
    for g in range(2, 13):
        for p in range(g):
            if 2 * p + 1 >= g and g - p - 1 >= 1:
                k = g - p - 1
                first = p + 1 if rows == "tail" else p
                entries = [[sp.Rational((-1) ** (i - 1), factorial(first + j - i))
                            for i in range(1, k + 1)] for j in range(1, k + 1)]
                d = pbig_det(g, p, rows)
                assert d != 0
                assert d == sympy_det(entries)
