from __future__ import annotations

import random
from fractions import Fraction

import pytest

from padyn.errors import CheckNotApplicable, HypothesisViolated, PrecisionExhausted
from padyn.linearization import (
    bijectivity_radius,
    conjugacy_with_retry,
    cubic_unit_conditions,
    divergence_indices,
    exact_law,
    general_bound_check,
    monotone_check,
    nu_rho,
    psi,
    quadratic_bk_exact_check,
    quadratic_radius,
    radius_report,
    rho_equals_psi,
    solve_conjugacy,
    tau_profile,
    tilde_r,
)
from padyn.multiplier import (
    MultiplierInvariants,
    compute_invariants,
    delta,
    nu_product,
    nu_R,
)
from padyn.padic import Field, Valuation, parse_element, vp_int
from padyn.series import PowerSeries, compose, disk_bijectivity, parse_series

q = Fraction
QUARTIC = Field.pure(3, 4)
QUINTIC = Field.pure(5, 2)


def solve(lam_text: str, F: Field, K: int, map_text: str = "lambda*x + x^2"):
    inv = compute_invariants(parse_element(lam_text, F))

    def make(N: int) -> PowerSeries:
        G = F.with_precision(N)
        return parse_series(map_text, G, K, {"lambda": parse_element(lam_text, G)})

    return conjugacy_with_retry(make, K, inv, F.e), inv, make(F.default_precision)


MULTIPLIERS = [
    ("1+pi", QUARTIC),
    ("1+pi^3", QUARTIC),
    ("1+pi", QUINTIC),
    ("1+pi+3", Field.cyclotomic(3, 2)),
    ("1+pi", Field.pure(3, 10)),
    ("4", Field.qp(3)),
    ("7", Field.qp(5)),
    ("1+pi", Field.pure(3, 6)),
    ("1+pi^2", Field.pure(3, 6)),
    ("1+pi", Field.pure(5, 4)),
]


def invariants(lam_text: str, F: Field) -> MultiplierInvariants:
    return compute_invariants(parse_element(lam_text, F))


# ---- the solver


def test_conjugacy_equation_holds():
    coeffs, inv, f = solve("1+pi", QUARTIC, 30)
    H = coeffs.as_series()
    lhs = compose(H, f)
    rhs = H * coeffs.lam
    assert lhs.equals(rhs)


def test_first_step():
    coeffs, inv, _ = solve("1+pi", QUARTIC, 5)
    assert coeffs.nu(1) == Valuation.of(0)
    assert coeffs.nu(2) == Valuation.of(-inv.nu1m)


def test_cancellation_fixture():
    F = Field.qp(3)
    lam = F.element(4)
    coeffs = solve_conjugacy(parse_series("lambda*x + x^2", F, 4, {"lambda": lam}), 4)
    assert [coeffs.nu(k).certified() for k in (2, 3, 4)] == [q(-1), q(-2), q(0)]
    combo = coeffs.b(2) + 3 * lam * lam * coeffs.b(3)
    assert combo.equals(F.from_rational(q(9, 20)))
    assert combo.valuation() == Valuation.of(2)


def test_truncation_one():
    coeffs = solve_conjugacy(parse_series("lambda*x + x^2", QUARTIC, 1, {"lambda": parse_element("1+pi", QUARTIC)}), 1)
    assert coeffs.K == 1 and coeffs.b(1).equals(QUARTIC.one())


def test_solver_rejects_maps_outside_the_group():
    lam = parse_element("1+pi", QUARTIC)
    with pytest.raises(HypothesisViolated):
        solve_conjugacy(parse_series("lambda*x + x^2/3", QUARTIC, 5, {"lambda": lam}), 5)
    with pytest.raises(HypothesisViolated):
        solve_conjugacy(parse_series("1 + lambda*x", QUARTIC, 5, {"lambda": lam}), 5)
    with pytest.raises(HypothesisViolated):
        solve_conjugacy(parse_series("3*x + x^2", QUARTIC, 5), 5)


def test_solver_needs_enough_terms():
    lam = parse_element("1+pi", QUARTIC)
    with pytest.raises(PrecisionExhausted):
        solve_conjugacy(parse_series("lambda*x + x^2", QUARTIC, 5, {"lambda": lam}), 8)


def test_exact_law_for_quadratic_family():
    for text, F in (("1+pi", QUARTIC), ("1+pi^3", QUARTIC), ("1+pi", QUINTIC)):
        coeffs, inv, f = solve(text, F, 200)
        assert quadratic_bk_exact_check(f, inv, 200, coeffs).passed
        for k in range(2, 201):
            assert coeffs.nu(k).certified() == exact_law(inv, k)


def test_quartic_exact_law_in_product_form():
    coeffs, inv, _ = solve("1+pi", QUARTIC, 200)
    for k in range(2, 201):
        assert coeffs.nu(k).certified() == -nu_product(inv, k) + (k - 1) // 3 * q(1, 4)


def test_exact_law_needs_cubic_unit_condition():
    coeffs, inv, f = solve("1+pi", QUINTIC, 10, "lambda*x + x^2 + x^3")
    assert not cubic_unit_conditions(f)
    with pytest.raises(CheckNotApplicable):
        quadratic_bk_exact_check(f, inv, 10, coeffs)


def test_exact_law_for_perturbed_quintic_map():
    coeffs, inv, f = solve("1+pi", QUINTIC, 100, "lambda*x + x^2 + 2*x^3")
    assert quadratic_bk_exact_check(f, inv, 100, coeffs).passed


def test_exact_law_hypotheses():
    with pytest.raises(HypothesisViolated):
        quadratic_radius(invariants("4", Field.qp(3)))


def test_general_bound_on_random_maps():
    rng = random.Random(7)
    for trial in range(50):
        text, F = MULTIPLIERS[trial % len(MULTIPLIERS)]
        degree = rng.randrange(2, 7)
        terms = " + ".join(
            f"{rng.choice([-1, 1]) * rng.randrange(1, 30)}*pi^{rng.randrange(F.e)}*x^{i}" for i in range(2, degree + 1)
        )
        coeffs, inv, _ = solve(text, F, 100, "lambda*x + " + terms)
        assert general_bound_check(coeffs, inv).passed, (text, terms)


def test_exact_zero_coefficients_are_lower_bounds():
    coeffs, inv, _ = solve("4", Field.qp(3), 9, "lambda*x + x^3")
    assert not coeffs.certified
    for k in (2, 4, 6, 8):
        assert not coeffs.nu(k).is_exact
        assert coeffs.b(k).is_zero()
    assert coeffs.nu(3).is_exact
    assert general_bound_check(coeffs, inv).passed


# ---- radius formulas


def test_tilde_r_fixtures():
    assert tilde_r(invariants("1+pi", QUARTIC)) == q(7, 12)
    assert tilde_r(invariants("4", Field.qp(3))) == q(3, 2)


def test_tilde_r_scales_inversely_with_m():
    base = MultiplierInvariants(5, 1, 1, 1, q(1, 8), q(1, 8))
    for m in (2, 4):
        scaled = MultiplierInvariants(5, m, 1, 1, q(1, 8), q(1, 8))
        assert tilde_r(scaled) == tilde_r(base) / m


def test_quadratic_radius_fixtures():
    inv = invariants("1+pi", QUARTIC)
    assert quadratic_radius(inv) == q(1, 2)
    assert psi(inv) == q(1, 6)
    with pytest.raises(HypothesisViolated):
        quadratic_radius(invariants("4", Field.qp(3)))


@pytest.mark.parametrize("text,F", [m for m in MULTIPLIERS if invariants(*m).m == 1 and invariants(*m).s >= 1])
def test_quadratic_radius_product_identity(text, F):
    inv = invariants(text, F)
    if not 0 < inv.nu1m < 1:
        pytest.skip("outside the quadratic family")
    p, s = inv.p, inv.s
    assert quadratic_radius(inv) == nu_R(s, p).value / p + s * q(p - 1, p) * inv.nu1m + psi(inv)


def test_psi_fixtures():
    assert psi(invariants("1+pi+3", Field.cyclotomic(3, 2))) == q(5, 18)
    for text, F in MULTIPLIERS:
        inv = invariants(text, F)
        if inv.m == 1 and inv.s >= 1 and inv.t == inv.s:
            assert psi(inv) == inv.nu1m - inv.nu1m / inv.p


def test_nu_rho_and_classification():
    assert nu_rho(invariants("1+pi", QUARTIC)) == q(1, 4)
    star = invariants("1+pi+3", Field.cyclotomic(3, 2))
    assert rho_equals_psi(star) and nu_rho(star) == psi(star)


@pytest.mark.parametrize("text,F", MULTIPLIERS)
def test_classification_agrees_with_maximum(text, F):
    inv = invariants(text, F)
    if inv.m != 1 or inv.s == 0:
        pytest.skip("classification concerns m = 1, s >= 1")
    assert rho_equals_psi(inv) == (psi(inv) >= inv.nu1m)


def test_radius_report_flags():
    rr = radius_report(invariants("1+pi", QUARTIC))
    assert (rr.nu_tilde_r, rr.nu_r_quadratic, rr.nu_psi, rr.nu_rho) == (q(7, 12), q(1, 2), q(1, 6), q(1, 4))
    rr = radius_report(invariants("7", Field.qp(5)))
    assert rr.nu_r_quadratic is None and rr.nu_psi is None
    assert rr.family_check["is_quadratic_family"] is False


# ---- coefficient profile on the exact radius


def test_divergence_witnesses():
    coeffs, inv, _ = solve("1+pi", QUARTIC, 200)
    tau = quadratic_radius(inv)
    assert divergence_indices(inv, 200) == [10, 28, 82]
    for k in (10, 28, 82):
        assert coeffs.nu(k).certified() + k * tau == tau + q(1, 2)
    assert coeffs.nu(10).certified() == q(-9, 2) + q(1, 2)
    profile = tau_profile(coeffs, inv)
    assert all(c.passed for c in profile.checks)
    assert coeffs.nu(2).certified() + 2 * tau - tau == tau - inv.nu1m > 0


def test_monotone_profile():
    coeffs, _, _ = solve("1+pi", QUARTIC, 100)
    assert monotone_check(coeffs).passed
    F = Field.qp(3)
    lam = F.element(4)
    bumpy = solve_conjugacy(parse_series("lambda*x + x^2", F, 4, {"lambda": lam}), 4)
    assert not monotone_check(bumpy).passed


def test_bijectivity_on_guaranteed_disk():
    for text, F in MULTIPLIERS[:5]:
        coeffs, inv, _ = solve(text, F, 120)
        nu_r = tilde_r(inv)
        H = coeffs.as_series()
        assert disk_bijectivity(H, nu_r).bijective
        for k in range(2, 121):
            assert coeffs.nu(k).certified() > -(k - 1) * nu_r


def test_exact_radius_is_the_bijectivity_radius_of_the_truncation():
    coeffs, inv, _ = solve("1+pi", QUARTIC, 82)
    assert bijectivity_radius(coeffs) <= quadratic_radius(inv)


# ---- the product bound against the guaranteed radius


def _first_form_rhs(inv: MultiplierInvariants, k: int) -> Fraction:
    m, p, s, t = inv.m, inv.p, inv.s, inv.t
    return (k - 1) * tilde_r(inv) - nu_R(s + 1, p).value / m - p**t * delta(k, m * p**s) * inv.nuG


@pytest.mark.parametrize("text,F", MULTIPLIERS)
def test_product_bound_first_form_when_one_full_block(text, F):
    inv = invariants(text, F)
    if inv.s == 0:
        pytest.skip("first form concerns s >= 1")
    block = inv.m * inv.p**inv.s
    for k in range(block + 1, 600):
        assert nu_product(inv, k) <= _first_form_rhs(inv, k), k


def test_product_bound_first_form_fails_before_first_full_block():
    # with no complete block of length m p^s the factorial estimate is unavailable
    inv = invariants("1+pi", QUARTIC)
    k = 2
    assert (k - 1) // (inv.m * inv.p**inv.s) == 0
    assert nu_product(inv, k) == q(1, 4)
    assert _first_form_rhs(inv, k) == q(1, 6)
    assert nu_product(inv, k) > _first_form_rhs(inv, k)


@pytest.mark.parametrize("text,F", MULTIPLIERS)
def test_product_bound_third_form(text, F):
    inv = invariants(text, F)
    if inv.m != 1 or inv.s == 0:
        pytest.skip("third form concerns m = 1, s >= 1")
    p, s = inv.p, inv.s
    for k in range(p**s + 1, 600):
        if (k - 1) % p**s:
            rhs = (k - 1) * tilde_r(inv) - nu_R(s + 1, p).value - delta(k, p) * inv.nu1m
            assert nu_product(inv, k) <= rhs, k


@pytest.mark.parametrize("text,F", MULTIPLIERS)
def test_product_bound_equality_case(text, F):
    inv = invariants(text, F)
    block = inv.m * inv.p**inv.s
    for k in range(2, 2000):
        qk, r = divmod(k - 1, block)
        if r == 0 and qk and inv.p ** vp_int(qk, inv.p) == qk:
            assert nu_product(inv, k) == (k - 1) * tilde_r(inv) - q(1, inv.p - 1), k


@pytest.mark.parametrize("text,F", MULTIPLIERS)
def test_product_bound_strict(text, F):
    inv = invariants(text, F)
    for k in range(2, 600):
        assert nu_product(inv, k) < (k - 1) * tilde_r(inv), k
