import pytest

from chowring import (
    InputError,
    curve_model,
    product_model,
    check_2imply1,
    check_conj1,
    check_conj2,
    check_hl_cohomology,
    check_hl_target,
    check_kunnemann,
    check_triangular_descent,
    cohomology_model,
    divisor_model,
    projective_model,
    sympow_ring,
    theta_model,
)
from chowring.lefschetz import IsoReport, LefschetzReport, s_slice

from oracles import lefschetz_rank


def test_conj1_examples():
    r = check_conj1(sympow_ring(2), "z", 1)
    assert (r.verdict, r.domain_dim, r.codomain_dim, r.rank, r.exponent) == ("injective", 2, 2, 2, 1)
    assert check_conj1(projective_model(3), "H", 1).verdict == "injective"
    r = check_conj1(divisor_model(4), "D0 + D1", 1)
    assert (r.domain_dim, r.codomain_dim, r.rank) == (2, 4, 2)
    assert r.passed


def test_conj1_default_divisor_and_errors():
    assert check_conj1(theta_model(3), None, 1).divisor == "theta"
    with pytest.raises(InputError, match="hypothesis violated"):
        check_conj1(theta_model(2), "theta", 2)
    with pytest.raises(InputError):
        check_conj1(theta_model(2), "theta^2", 1)
    with pytest.raises(InputError):
        check_conj1(divisor_model(2), "0", 1)


def test_conj1_reports_kernel():
    r = check_conj1(divisor_model(2), "D1", 0)
    assert r.verdict == "injective"
    m = product_model(curve_model(0), 1)
    r = check_conj1(m, "t", 0)
    assert r.verdict == "not-injective"
    assert r.kernel == ["1"]


def test_conj2_examples():
    r = check_conj2(theta_model(3), "theta", 1)
    assert r.domain_dim == 0 and r.verdict == "injective"
    r = check_conj2(divisor_model(3), "D0 + D1", 1)
    assert r.domain_dim == 1 and r.verdict == "injective"
    P = divisor_model(3).presentation
    assert P.element("D0 + D1") ** 2 * P.gen("D1") == P.element("D0^2*D1 + 2*D0*D1^2 + D1^3")
    with pytest.raises(InputError):
        check_conj2(sympow_ring(2), "z", 1)


def test_report_invariants():
    with pytest.raises(AssertionError):
        LefschetzReport("x", "m", 1, 1, "D", 2, 2, 1, "injective")
    with pytest.raises(AssertionError):
        IsoReport("x", "m", 1, 1, "D", 2, 3, 2, "iso")
    r = check_conj1(theta_model(2), "theta", 1)
    d = r.to_dict()
    assert "seconds" not in d and d["model_id"] == "theta:g=2"


@pytest.mark.parametrize("g,k", [(1, 0), (2, 1), (3, 2)])
def test_hl_examples(g, k):
    r = check_hl_cohomology(cohomology_model(g), k)
    assert r.verdict == "iso"
    assert (r.domain_dim, r.codomain_dim, r.rank) == lefschetz_rank(g, k)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_hl_all_degrees_match_oracle(g):
    for k in range(2 * g + 1):
        r = check_hl_cohomology(cohomology_model(g), k)
        assert (r.domain_dim, r.codomain_dim, r.rank) == lefschetz_rank(g, k)
        assert r.surjective


def test_hl_errors():
    with pytest.raises(InputError):
        check_hl_cohomology(cohomology_model(2), 5)
    with pytest.raises(InputError):
        check_hl_cohomology(theta_model(2), 1)


def test_hl_target():
    assert check_hl_target(divisor_model(3), "D0 + D1", 1).verdict == "iso"
    assert check_hl_target(divisor_model(3), "D1", 1).verdict == "not-iso"


def test_kunnemann_examples():
    for g, p, s in [(3, 1, 0), (3, 1, 1), (5, 2, 1)]:
        r = check_kunnemann(divisor_model(g), p, s)
        assert r.verdict == "iso" and r.domain_dim == 1
    with pytest.raises(InputError):
        check_kunnemann(divisor_model(3), 3, 0)
    m = divisor_model(5)
    assert s_slice(m, 2, 1) == [(1, 1)]


def test_descent_examples():
    for g, p in [(4, 1), (2, 1), (6, 2)]:
        r = check_triangular_descent(divisor_model(g), p)
        assert r.block_triangular and r.diagonal_blocks_match and r.verdict == "injective"
        assert r.passed and r.details["consistent"]
    r = check_triangular_descent(divisor_model(2), 1)
    assert r.exponent == 0 and r.rank == r.domain_dim == r.codomain_dim
    with pytest.raises(InputError):
        check_triangular_descent(divisor_model(2), 2)


def test_2imply1_single():
    res = check_2imply1(divisor_model(3), "D0 + D1", 1)
    assert res["premise"] and res["holds"]
    res = check_2imply1(divisor_model(3), "D1", 1)
    assert not res["premise"] and res["holds"]


def test_timing_recorded_and_deterministic():
    a = check_conj1(sympow_ring(3), "z", 2)
    b = check_conj1(sympow_ring(3), "z", 2)
    assert a.seconds >= 0
    assert a.to_dict() == b.to_dict()
