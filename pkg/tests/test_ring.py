from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from chowring import (
    GeneratorSpec,
    InputError,
    RingHom,
    RingPresentation,
    TruncationBlock,
    build_presentation,
    isomorphic_by_renaming,
    mult_operator_matrix,
    normal_form,
)
from chowring.linalg import determinant


def p3():
    return build_presentation({"truncation": 3, "generators": [{"name": "H", "codim": 1}]})


def theta_ring(g):
    """CH(J)[z]/(minimal equation) written out by hand for small g."""
    rules = {1: ("z", "theta"), 2: ("z^2", "theta*z - 1/2*theta^2"),
             3: ("z^3", "theta*z^2 - 1/2*theta^2*z + 1/6*theta^3")}
    return RingPresentation(
        [GeneratorSpec("theta", 1, kweight=2), GeneratorSpec("z", 1, kweight=2)],
        2 * g - 1, relations=[rules[g]], blocks=[TruncationBlock(("theta",), g)], label="t")


def test_projective_space_basis():
    P = p3()
    assert P.basis_dims() == (1, 1, 1, 1)
    assert (P.gen("H") ** 4).is_zero()
    assert P.element("H^2") * P.element("H") == P.element("H^3")


def test_generator_defaults():
    g = GeneratorSpec("x", 2)
    assert g.kweight == 4 and g.parity == "even"
    with pytest.raises(InputError):
        GeneratorSpec("x", 0)


def test_exterior_sign():
    E = RingPresentation([GeneratorSpec("e1", 1, 1, "odd"), GeneratorSpec("e2", 1, 1, "odd")], 2)
    e1, e2 = E.gen("e1"), E.gen("e2")
    assert e2 * e1 == -(e1 * e2)
    assert (e1 * e1).is_zero()
    assert E.element("e2*e1") == E.element("-e1*e2")


def test_sympow_theta_g2_rules():
    R = theta_ring(2)
    z, th = R.gen("z"), R.gen("theta")
    assert str(z ** 2) == "-1/2*theta^2 + theta*z"
    assert z ** 3 == R.element("1/2*theta^2*z")
    assert th * z ** 2 == R.element("theta^2*z")
    lm = mult_operator_matrix(R, z, 1)
    assert lm.matrix.tolist() == [[0, Fraction(-1, 2)], [1, 1]]
    assert determinant(lm.matrix) == Fraction(1, 2)


def test_invalid_rules():
    gens = [GeneratorSpec("a", 1), GeneratorSpec("b", 1)]
    with pytest.raises(InputError, match="non-homogeneous"):
        RingPresentation(gens, 3, relations=[("b^2", "a")])
    with pytest.raises(InputError, match="not triangular"):
        RingPresentation(gens, 3, relations=[("a^2", "a*b")])
    with pytest.raises(InputError, match="not triangular"):
        RingPresentation(gens, 3, relations=[("a*b", "a^2")])
    with pytest.raises(InputError, match="duplicate"):
        RingPresentation([GeneratorSpec("a", 1), GeneratorSpec("a", 1)], 2)
    with pytest.raises(InputError, match="truncation block"):
        RingPresentation(gens, 3, relations=[("b^2", "a^2")], blocks=[TruncationBlock(("b",), 1)])


def test_malformed_presentation_and_expressions():
    with pytest.raises(InputError):
        build_presentation({"generators": [{"name": "x"}]})
    P = p3()
    for bad in ("", "H^", "Q", "1/0*H", "H + + H", "H*"):
        with pytest.raises(InputError):
            P.element(bad)


def test_basis_out_of_range():
    with pytest.raises(InputError):
        p3().basis(4)


def test_ring_hom_and_matrix():
    P = p3()
    Q = build_presentation({"truncation": 6, "generators": [{"name": "x", "codim": 2}]})
    phi = RingHom(P, Q, {"H": "x"}, scale=2)
    assert phi(P.element("H^2")) == Q.element("x^2")
    with pytest.raises(InputError):
        RingHom(P, Q, {"H": "x^2"}, scale=2)


def test_isomorphic_by_renaming():
    R = theta_ring(2)
    S = R.renamed({"theta": "T", "z": "w"})
    assert isomorphic_by_renaming(R, S, {"theta": "T", "z": "w"})
    other = RingPresentation(
        [GeneratorSpec("T", 1), GeneratorSpec("w", 1)], 3,
        relations=[("w^2", "T*w")], blocks=[TruncationBlock(("T",), 2)])
    assert not isomorphic_by_renaming(R, other, {"theta": "T", "z": "w"})


def test_describe_round_trip():
    R = theta_ring(3)
    d = R.describe()
    R2 = build_presentation(d)
    assert R2.describe() == d
    assert isomorphic_by_renaming(R, R2, {})


# ---------------------------------------------------------------- properties

polys = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 5)),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    max_size=6,
)


def sympy_normal_form(g, terms):
    """Reduce with sympy: Groebner basis of (minimal equation, theta^{g+1}) plus degree truncation."""
    th, z = sp.symbols("theta z")
    alpha = sum(sp.Rational((-1) ** k, sp.factorial(k)) * th ** k * z ** (g - k) for k in range(g + 1))
    f = sum(sp.Rational(c.numerator, c.denominator) * th ** a * z ** b for (a, b), c in terms.items())
    G = sp.groebner([alpha, th ** (g + 1)], z, th, order="lex", domain="QQ")
    rem = sp.Poly(G.reduce(sp.expand(f))[1], th, z)
    out = {}
    for (a, b), c in rem.terms():
        if a + b <= 2 * g - 1:
            out[(a, b)] = Fraction(int(sp.numer(c)), int(sp.denom(c)))
    return out


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, 2, 3]), polys)
def test_normal_form_matches_groebner_oracle(g, terms):
    R = theta_ring(g)
    mine = R.element({m: c for m, c in terms.items()})
    assert mine.terms == {m: c for m, c in sympy_normal_form(g, terms).items() if c}


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), polys, polys, polys)
def test_ring_axioms(g, a, b, c):
    R = theta_ring(g)
    x, y, w = R.element(a), R.element(b), R.element(c)
    assert (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert x * y == y * x
    assert normal_form(normal_form(x)) == normal_form(x)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["e1", "e2", "e3", "e4"]), min_size=0, max_size=4),
       st.lists(st.sampled_from(["e1", "e2", "e3", "e4"]), min_size=0, max_size=4))
def test_graded_commutativity(u, v):
    E = RingPresentation([GeneratorSpec(f"e{i}", 1, 1, "odd") for i in range(1, 5)], 4)
    x = E.element("*".join(u) or "1")
    y = E.element("*".join(v) or "1")
    assert x * y == y * x * (-1) ** (len(u) * len(v))
