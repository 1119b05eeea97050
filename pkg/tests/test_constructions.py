from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowring import (
    BlowupData,
    BlowupRing,
    InputError,
    blowup_transfer_check,
    bundle_model,
    check_conj2,
    curve_model,
    isomorphic_by_renaming,
    linear_blowup,
    product_model,
    product_with_projective_space,
    projective_bundle,
    projective_model,
    projective_space,
    sympow_ring,
    theta_model,
)


def test_projective_space_and_point():
    assert projective_space(0).basis_dims() == (1,)
    assert projective_space(4).basis_dims() == (1,) * 5
    with pytest.raises(InputError):
        projective_space(-1)


def test_hirzebruch_bundle_intersections():
    P1 = projective_space(1, name="l")
    F = projective_bundle(P1, ["1", "l"], 1)
    l, xi = F.gen("l"), F.gen("xi")
    pt = F.element("l*xi")
    assert F.basis_dims() == (1, 2, 1)
    assert l * l == 0
    assert xi * xi == -pt
    assert (xi + l) ** 2 == pt


def test_bundle_rejects_bad_chern():
    P2 = projective_space(2)
    with pytest.raises(InputError):
        projective_bundle(P2, ["1", "H^2"], 1)
    with pytest.raises(InputError):
        projective_bundle(P2, ["2"], 1)
    with pytest.raises(InputError):
        projective_bundle(projective_space(3), ["1", "H", "H^2", "H^3"], 1)


def test_product_with_projective_space():
    Q = product_with_projective_space(projective_space(2), 1)
    assert Q.basis_dims() == (1, 2, 2, 1)
    assert (Q.gen("t") ** 2).is_zero()


def test_bundle_model_carries_cycle_class():
    m = bundle_model(curve_model(1), ["1", "pt + v1"], 1)
    P = m.presentation
    assert m.cycle_class is not None
    assert m.cycle_class(P.gen("v1")).is_zero()
    assert not m.cycle_class(P.gen("xi")).is_zero()
    rep = check_conj2(m, "pt + xi", 1)
    assert rep.verdict == "injective" and rep.domain_dim == 1


def test_product_model_and_projective_model():
    m = product_model(theta_model(2), 1)
    assert m.n == 3 and m.cycle_class.scale == 2
    assert projective_model(3).hom_basis(1) == []


def test_bundle_over_theta_is_sympow():
    for g in range(1, 4):
        base = theta_model(g)
        chern = ["1"] + [f"{Fraction((-1) ** k, factorial(k))}*theta^{k}" for k in range(1, g + 1)]
        B = projective_bundle(base.presentation, chern, g - 1)
        assert isomorphic_by_renaming(B, sympow_ring(g).presentation, {"xi": "z"})


# ---------------------------------------------------------------- blow-ups


def bl_point_p3():
    return linear_blowup(3, 0)


def test_blowup_point_p3_oracle_values():
    B = bl_point_p3()
    E = B.E
    h = B.Ering.gen("h")
    pt = B.X.element("H^3")
    assert E ** 2 == -B.jpush(h)
    assert E ** 3 == B.jpush(h ** 2)
    assert B.pushforward(E ** 3) == pt
    assert B.pushforward(E ** 2).is_zero()
    assert str(E ** 2) == "-j_*(h)"
    assert B.pullback("H") * E == 0


def test_blowup_transfer_point_p3():
    rep = blowup_transfer_check(bl_point_p3(), "H", Fraction(-1, 2), 1)
    assert rep.verdict == "injective"
    assert rep.details["matrix"] == [["2", "0"], ["0", "1"]]
    assert rep.details["hypothesis_conj1_on_X"] == "injective"


def test_blowup_transfer_errors():
    B = bl_point_p3()
    with pytest.raises(InputError):
        blowup_transfer_check(B, "H", 1, 1)
    with pytest.raises(InputError):
        blowup_transfer_check(B, "H", -1, 2)


@pytest.mark.parametrize("n,d", [(n, d) for n in range(2, 6) for d in range(0, n - 1)])
def test_blowup_top_self_intersection(n, d):
    """deg E^n = (-1)^{n-1} deg s_d(N), N = O(1)^{n-d} on P^d."""
    B = linear_blowup(n, d)
    top = B.pushforward(B.E ** n)
    assert top == B.X.element(f"H^{n}") * ((-1) ** (n - 1 + d) * comb(n - 1, d))


@pytest.mark.parametrize("n,d", [(n, d) for n in range(2, 6) for d in range(0, n - 1)])
def test_blowup_projection_class(n, d):
    """H - E is pulled back from P^{n-d-1}, so its (n-d)-th power vanishes."""
    B = linear_blowup(n, d)
    D = B.pullback("H") - B.E
    assert (D ** (n - d)).is_zero()
    assert not (D ** (n - d - 1)).is_zero()


def test_blowup_basis_dimensions():
    B = linear_blowup(4, 1)
    assert [len(B.basis(p)) for p in range(5)] == [1, 2, 3, 2, 1]


def test_malformed_blowup_data():
    X = projective_space(3)
    Y = projective_space(1, name="l")
    good = dict(pullback_iota={"H": "l"}, pushforward_iota={(0,): "H^2", (1,): "H^3"}, normal_chern=["2*l"])
    BlowupRing(BlowupData(X, Y, 1, **good))
    with pytest.raises(InputError, match="projection formula"):
        BlowupRing(BlowupData(X, Y, 1, pullback_iota={"H": "l"},
                              pushforward_iota={(0,): "H^2", (1,): "2*H^3"}, normal_chern=["2*l"]))
    with pytest.raises(InputError):
        BlowupRing(BlowupData(X, Y, 2, **good))
    with pytest.raises(InputError):
        BlowupRing(BlowupData(X, Y, 1, pullback_iota={"H": "l"}, pushforward_iota={(0,): "H^2"},
                              normal_chern=["2*l"]))
    with pytest.raises(InputError):
        linear_blowup(3, 2)


coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@settings(max_examples=30, deadline=None)
@given(st.lists(coeffs, min_size=3, max_size=3), st.lists(coeffs, min_size=3, max_size=3),
       st.lists(coeffs, min_size=3, max_size=3))
def test_blowup_ring_axioms(a, b, c):
    B = linear_blowup(4, 1)

    def elem(v):
        return B.compose(f"{v[0]}*H", [f"{v[1]}*l", f"{v[2]}"])

    x, y, w = elem(a), elem(b), elem(c)
    assert (x * y) * w == x * (y * w)
    assert x * y == y * x
    assert x * (y + w) == x * y + x * w
    # projection formula f_*(f^*u . v) = u . f_*v
    u = B.X.element("H")
    assert B.pushforward(B.pullback(u) * x) == u * B.pushforward(x)
