from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from padyn.errors import HypothesisViolated, IndistinguishableFromRootOfUnity, UnsupportedResidueOrder
from padyn.multiplier import (
    MultiplierInvariants,
    compute_invariants,
    delta,
    nu_factorial,
    nu_one_minus_lambda_pow,
    nu_product,
    nu_R,
    recover_t,
    residue_order,
    sigma,
    sphere_index,
)
from padyn.padic import INFINITE, Field, parse_element, vp_int

q = Fraction


def quartic(text: str = "1+pi"):
    return parse_element(text, Field.pure(3, 4))


SAMPLES = {
    "quartic": quartic(),
    "quartic_cubed": quartic("1+pi^3"),
    "quintic": parse_element("1+pi", Field.pure(5, 2)),
    "seven_in_Q5": Field.qp(5).element(7),
    "star": parse_element("1+pi+3", Field.cyclotomic(3, 2)),
    "tenth": parse_element("1+pi", Field.pure(3, 10)),
    "four_in_Q3": Field.qp(3).element(4),
}


def direct_sigma(inv: MultiplierInvariants, k: int) -> Fraction:
    m, p = inv.m, inv.p
    return q(sum(((k - 1) // (m * p**j) - (k - 1) // (m * p ** (j + 1))) * p**j for j in range(inv.s)))


# ---- invariants


def test_star_invariants():
    inv = compute_invariants(SAMPLES["star"])
    assert (inv.p, inv.m, inv.s, inv.t, inv.nu1m, inv.nuG) == (3, 1, 2, 0, q(1, 6), q(1))


def test_tenth_root_invariants():
    inv = compute_invariants(SAMPLES["tenth"])
    assert (inv.m, inv.s, inv.t, inv.nu1m, inv.nuG) == (1, 2, 2, q(1, 10), q(1, 10))


def test_quartic_invariants():
    inv = compute_invariants(SAMPLES["quartic"])
    assert (inv.m, inv.s, inv.t, inv.nu1m, inv.nuG) == (1, 1, 1, q(1, 4), q(1, 4))


def test_residue_order_four():
    inv = compute_invariants(SAMPLES["seven_in_Q5"])
    assert (inv.m, inv.s, inv.nu1m) == (4, 0, q(2))


@pytest.mark.parametrize("label", sorted(SAMPLES))
def test_sample_invariants_are_consistent(label):
    assert compute_invariants(SAMPLES[label]).violations() == []


def test_root_of_unity_guard():
    F = Field.cyclotomic(3, 1)
    with pytest.raises(IndistinguishableFromRootOfUnity):
        compute_invariants(parse_element("1+pi", F))


def test_multiplier_must_be_a_unit():
    with pytest.raises(HypothesisViolated):
        compute_invariants(Field.qp(3).element(3))


def test_unsupported_residue_order_is_impossible_over_prime_residue_field():
    # every residue order divides p - 1 for F_p; the error exists for larger residue fields
    assert issubclass(UnsupportedResidueOrder, HypothesisViolated)
    assert residue_order(2, 5) == 4
    assert residue_order(4, 5) == 2


def test_serialization_round_trip():
    inv = compute_invariants(SAMPLES["star"])
    assert MultiplierInvariants.from_dict(inv.to_dict()) == inv
    assert inv.to_dict()["nu_1m"] == "1/6"


def test_violations_catch_bad_tuples():
    assert MultiplierInvariants(3, 1, 1, 2, q(1, 4), q(1, 4)).violations()
    assert MultiplierInvariants(3, 3, 0, 0, q(1), q(1)).violations()
    assert MultiplierInvariants(3, 1, 2, 0, q(1, 7), q(1)).violations()


# ---- sphere radii and decompositions


def test_sphere_radii():
    assert nu_R(1, 3).value == q(1, 2)
    assert nu_R(2, 3).value == q(1, 6)
    assert nu_R(0, 3) == INFINITE


def test_sphere_index_windows():
    assert sphere_index(q(1, 4), 3) == 1
    assert sphere_index(q(1, 6), 3) == 2
    assert sphere_index(q(1, 10), 3) == 2
    assert sphere_index(q(1), 3) == 0
    with pytest.raises(HypothesisViolated):
        sphere_index(q(0), 3)


def test_recover_t_inverts_the_decomposition():
    for s in range(1, 4):
        for t in range(0, s + 1):
            for nuG in (q(1, 2), q(2, 3), q(3, 4), q(1)):
                scaled = 3**t * nuG if t else nuG
                if t and not q(1, 2) < scaled <= q(3, 2):
                    continue
                if not t and not nuG > q(1, 2):
                    continue
                assert recover_t((s - t) + 3**t * nuG, s, 3) == (t, nuG)


# ---- valuations of 1 - lambda^n


def test_ninth_power():
    inv = compute_invariants(SAMPLES["quartic"])
    assert nu_one_minus_lambda_pow(inv, 9) == q(7, 4)
    assert nu_one_minus_lambda_pow(inv, 2) == q(1, 4)


def test_non_multiple_of_m_is_unit():
    inv = compute_invariants(SAMPLES["seven_in_Q5"])
    assert nu_one_minus_lambda_pow(inv, 3) == 0
    inv2 = MultiplierInvariants(5, 2, 0, 0, q(1), q(1))
    assert all(nu_one_minus_lambda_pow(inv2, n) == 0 for n in (1, 3, 5, 7))


@pytest.mark.parametrize("label", sorted(SAMPLES))
def test_power_valuations_match_direct_powers(label):
    lam = SAMPLES[label]
    inv = compute_invariants(lam)
    x = lam.field.one()
    for n in range(1, 200):
        x = x * lam
        assert (1 - x).valuation().certified() == nu_one_minus_lambda_pow(inv, n), n


# ---- factorials, sigma, product


def test_factorial_valuation():
    assert nu_factorial(0, 3) == 0
    assert nu_factorial(9, 3) == 4
    for k in range(1, 6):
        assert nu_factorial(3**k, 3) == q(3**k - 1, 2)
    for n in range(1, 60):
        assert nu_factorial(n, 5) == vp_int(factorial(n), 5)


def test_delta_is_fractional_part():
    assert delta(5, 3) == q(1, 3)
    assert delta(4, 3) == 0


def test_sigma_fixtures():
    inv = compute_invariants(SAMPLES["quartic"])
    assert sigma(inv, 5) == 3
    star = compute_invariants(SAMPLES["star"])
    assert sigma(star, 10) == direct_sigma(star, 10)
    for k in (10, 19, 28):
        assert sigma(star, k) == 2 * (k - 1) * q(2, 3)


def test_sigma_needs_positive_s():
    with pytest.raises(HypothesisViolated):
        sigma(compute_invariants(SAMPLES["four_in_Q3"]), 4)


def test_product_fixtures():
    inv = compute_invariants(SAMPLES["quartic"])
    assert nu_product(inv, 2) == inv.nu1m
    assert nu_product(inv, 10) == q(19, 4)


@pytest.mark.parametrize("label", sorted(SAMPLES))
def test_closed_forms_match_summation(label):
    inv = compute_invariants(SAMPLES[label])
    total = q(0)
    for k in range(2, 501):
        total += nu_one_minus_lambda_pow(inv, k - 1)
        assert nu_product(inv, k) == total, k
        if inv.s >= 1:
            assert sigma(inv, k) == direct_sigma(inv, k), k


@st.composite
def invariant_tuples(draw):
    """Consistent invariant tuples over a small prime."""
    p = draw(st.sampled_from([3, 5, 7]))
    s = draw(st.integers(1, 3))
    t = draw(st.integers(0, s))
    if t == s:
        lo, hi = nu_R(s + 1, p).value, nu_R(s, p).value
        num = draw(st.integers(1, 50))
        a = lo + (hi - lo) * q(num, 50)
        g = a
    else:
        a = nu_R(s, p).value
        if t == 0:
            g = q(1, p - 1) + q(draw(st.integers(1, 40)), 10)
        else:
            x = q(1, p - 1) + q(draw(st.integers(1, 20)), 20)
            g = x / p**t
    m = draw(st.sampled_from([d for d in range(1, p) if (p - 1) % d == 0]))
    return MultiplierInvariants(p, m, s, t, a, g)


@settings(max_examples=150, deadline=None)
@given(invariant_tuples(), st.integers(2, 400))
def test_closed_forms_on_synthetic_invariants(inv, k):
    assert inv.violations() == []
    direct = sum((nu_one_minus_lambda_pow(inv, n) for n in range(1, k)), q(0))
    assert nu_product(inv, k) == direct
    assert sigma(inv, k) == direct_sigma(inv, k)
