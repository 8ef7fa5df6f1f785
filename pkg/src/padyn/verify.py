"""The reference verification suite behind ``padyn verify``.

Each item computes a dictionary of observations and compares it with the
expected dictionary using exact equality.  Runtime limits are part of the
verdict.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .config import parse_config
from .dynamics import (
    boundary_contrast,
    boundary_free_check,
    is_minimally_ramified,
    periodic_spectrum_formula,
    periodic_spectrum_newton,
    polygon_levels,
    ramification_numbers,
)
from .errors import ConfigError
from .jobs import run_analyze, run_newton
from .linearization import (
    conjugacy_with_retry,
    exact_law,
    quadratic_radius,
    solve_conjugacy,
    tau_profile,
    tilde_r,
)
from .multiplier import (
    MultiplierInvariants,
    compute_invariants,
    nu_one_minus_lambda_pow,
    nu_product,
    sigma,
)
from .padic import Field, PadicElement, parse_element, vp_int
from .series import PowerSeries, parse_series

SEED = 20240611

QUARTIC_CONFIG = """
[field]
p = 3
kind = "eisenstein"
relation = "pi^4 = p"

[multiplier]
lambda = "1+pi"
"""


def sample_multipliers() -> dict[str, PadicElement]:
    """Multipliers used across the suite, keyed by a short label."""
    return {
        "1+3^(1/4)": parse_element("1+pi", Field.pure(3, 4)),
        "1+3^(3/4)": parse_element("1+pi^3", Field.pure(3, 4)),
        "1+5^(1/2)": parse_element("1+pi", Field.pure(5, 2)),
        "7 in Q_5": Field.qp(5).element(7),
    }


def extra_multipliers() -> dict[str, PadicElement]:
    return {
        "gamma+3": parse_element("1+pi+3", Field.cyclotomic(3, 2)),
        "1+3^(1/10)": parse_element("1+pi", Field.pure(3, 10)),
        "4 in Q_3": Field.qp(3).element(4),
    }


def quadratic_map(lam: PadicElement, K: int, extra: str = "") -> PowerSeries:
    return parse_series("lambda*x + x^2" + extra, lam.field, K, {"lambda": lam})


def solve_family(lam_text: str, F: Field, K: int, map_text: str = "lambda*x + x^2"):
    """Solve the conjugacy with the automatic precision schedule."""
    inv = compute_invariants(parse_element(lam_text, F))

    def make(N: int) -> PowerSeries:
        G = F.with_precision(N)
        return parse_series(map_text, G, K, {"lambda": parse_element(lam_text, G)})

    return conjugacy_with_retry(make, K, inv, F.e), inv


# --------------------------------------------------------------------------
# items


def item_1() -> dict:
    doc = run_analyze(parse_config(QUARTIC_CONFIG))
    consistent = True
    for lam in list(sample_multipliers().values()) + list(extra_multipliers().values()):
        inv = compute_invariants(lam)
        base = inv.m * inv.p**inv.s
        for k in range(2, 400):
            q, r = divmod(k - 1, base)
            if r == 0 and q > 0 and inv.p ** vp_int(q, inv.p) == q:
                consistent &= nu_product(inv, k) == (k - 1) * tilde_r(inv) - Fraction(1, inv.p - 1)
    return {
        "nu_tilde_r": doc.radii["nu_tilde_r"],
        "nu_r": doc.radii.get("nu_r"),
        "closed_forms_consistent": consistent,
    }


def item_2() -> dict:
    cfg = parse_config(QUARTIC_CONFIG)
    doc, levels = run_newton(cfg, nmax=2)
    top = levels[-1].polygon
    return {
        "vertices": [(i, v) for i, v in top.vertices],
        "segments": list(top.segments),
        "ramification": [i for _, i in doc.spectra["ramification"]],
    }


def item_3() -> dict:
    star = compute_invariants(parse_element("1+pi+3", Field.cyclotomic(3, 2)))
    tenth = compute_invariants(parse_element("1+pi", Field.pure(3, 10)))
    return {
        "star_mst": (star.m, star.s, star.t),
        "star_nu_gamma": star.nuG,
        "tenth_mst": (tenth.m, tenth.s, tenth.t),
    }


def item_4(K: int = 200) -> dict:
    out = {}
    for label, (text, F) in {
        "1+3^(1/4)": ("1+pi", Field.pure(3, 4)),
        "1+3^(3/4)": ("1+pi^3", Field.pure(3, 4)),
        "1+5^(1/2)": ("1+pi", Field.pure(5, 2)),
    }.items():
        start = time.perf_counter()
        coeffs, inv = solve_family(text, F, K)
        failures = sum(1 for k in range(2, K + 1) if coeffs.nu(k).certified() != exact_law(inv, k))
        out[label] = (failures, time.perf_counter() - start < 60)
    return out


def item_5() -> dict:
    coeffs, inv = solve_family("1+pi", Field.pure(3, 4), 82)
    tau = quadratic_radius(inv)
    return {k: coeffs.nu(k).certified() + k * tau - tau for k in (10, 28, 82)} | {
        "profile": all(c.passed for c in tau_profile(coeffs, inv).checks)
    }


def item_6() -> dict:
    F = Field.qp(3)
    lam = F.element(4)
    coeffs = solve_conjugacy(quadratic_map(lam, 4), 4)
    combo = coeffs.b(2) + 3 * lam * lam * coeffs.b(3)
    return {
        "nu_b": [coeffs.nu(k).certified() for k in (2, 3, 4)],
        "nu_combo": combo.valuation().certified(),
        "combo_is_9/20": combo.equals(F.from_rational(Fraction(9, 20))),
    }


def item_7(nmax: int = 1000) -> dict:
    out = {}
    for label, lam in sample_multipliers().items():
        inv = compute_invariants(lam)
        x = lam.field.one()
        mismatches = 0
        for n in range(1, nmax + 1):
            x = x * lam
            if (1 - x).valuation().certified() != nu_one_minus_lambda_pow(inv, n):
                mismatches += 1
        out[label] = mismatches
    return out


def item_8() -> dict:
    F4 = Field.pure(3, 4)
    lam = parse_element("1+pi", F4)
    b1 = boundary_free_check(quadratic_map(lam, 20), compute_invariants(lam), with_newton=True)
    F5 = Field.pure(5, 2)
    mu = parse_element("1+pi", F5)
    b2 = boundary_free_check(quadratic_map(mu, 40, " + 2*x^3"), compute_invariants(mu), with_newton=True)
    Q = parse_series("(1+x)^4 - 1", Field.qp(3), 40)
    c = boundary_contrast(Q, K=40, nmax=1)
    fixed = [nu for period, nu, _ in c.newton.entries if period == 1]
    return {
        "quartic": (b1.passed, b1.nu_r, b1.nu_rho),
        "quintic": (b2.passed, b2.nu_r, b2.nu_rho),
        "contrast_nu_r": c.nu_r,
        "contrast_fixed_level": fixed,
        "contrast_on_boundary": not c.passed,
    }


# ---- item 9: property battery


def _random_element(rng: random.Random, F: Field, vmin: int = 0) -> PadicElement:
    digits = [rng.randrange(F.p**6) for _ in range(F.e)]
    x = F.from_coeffs(digits)
    if vmin:
        x = x * F.uniformizer() ** vmin
    return x


def _ultrametric(rng: random.Random) -> bool:
    ok = True
    for F in (Field.pure(3, 4), Field.cyclotomic(3, 2), Field.qp(5)):
        for _ in range(100):
            x = _random_element(rng, F, rng.randrange(4))
            y = _random_element(rng, F, rng.randrange(4))
            vx, vy = x.valuation(), y.valuation()
            if not (vx.is_exact and vy.is_exact):
                continue
            vs = (x + y).valuation()
            ok &= vs.value >= min(vx.value, vy.value)
            if vx.value != vy.value:
                ok &= vs.is_exact and vs.value == min(vx.value, vy.value)
            ok &= (x * y).valuation().certified() == vx.value + vy.value
    return ok


def _sigma_direct(inv: MultiplierInvariants, k: int) -> Fraction:
    m, p = inv.m, inv.p
    return Fraction(sum(((k - 1) // (m * p**j) - (k - 1) // (m * p ** (j + 1))) * p**j for j in range(inv.s)))


def _closed_forms() -> bool:
    ok = True
    lams = list(sample_multipliers().values()) + list(extra_multipliers().values())
    for lam in lams:
        inv = compute_invariants(lam)
        total = Fraction(0)
        for k in range(2, 501):
            total += nu_one_minus_lambda_pow(inv, k - 1)
            ok &= total == nu_product(inv, k)
            if inv.s >= 1:
                ok &= sigma(inv, k) == _sigma_direct(inv, k)
    return ok


def _perturbation(rng: random.Random, F: Field) -> str:
    """Map text ``lambda x + a_2 x^2 + ... `` with ``|a_2| = |a_2^2 - a_3| = 1``."""
    p = F.p
    while True:
        a2 = rng.randrange(1, p**3)
        a3 = rng.randrange(p**3)
        if a2 % p and (a2 * a2 - a3) % p:
            break
    terms = [f"{a2}*x^2", f"{a3}*x^3"]
    for i in range(4, 4 + rng.randrange(3)):
        c = rng.randrange(p**3)
        j = rng.randrange(F.e)
        terms.append(f"{c}*pi^{j}*x^{i}")
    return "lambda*x + " + " + ".join(terms)


def _spectra_and_sen(rng: random.Random) -> tuple[bool, bool]:
    sen = True
    match = True
    F = Field.pure(3, 4)
    lam = parse_element("1+pi", F)
    inv = compute_invariants(lam)
    # the non-minimal cubic map has i_2 far beyond desk-scale truncations
    maps = [(_perturbation(rng, F), 2) for _ in range(4)] + [("lambda*x + x^2 + x^3", 1)]
    for text, nmax in maps:
        f = parse_series(text, F, 24, {"lambda": lam})
        levels = polygon_levels(f, nmax)
        sen &= ramification_numbers(f, nmax, levels=levels).sen_congruence()
        if is_minimally_ramified(f):
            newton = periodic_spectrum_newton(f, nmax, levels=levels)
            match &= newton.entries == periodic_spectrum_formula(inv, nmax).spectrum.entries
    Q = parse_series("(1+x)^4 - 1", Field.qp(3), 40)
    sen &= ramification_numbers(Q, 2).sen_congruence()
    return sen, match


def _perturbation_invariance(rng: random.Random, count: int = 20, K: int = 200) -> bool:
    F = Field.pure(3, 4)
    base, inv = solve_family("1+pi", F, K)
    reference = [base.nu(k).certified() for k in range(1, K + 1)]
    ok = True
    for _ in range(count):
        coeffs, _ = solve_family("1+pi", F, K, _perturbation(rng, F))
        ok &= [coeffs.nu(k).certified() for k in range(1, K + 1)] == reference
    return ok


def item_9() -> dict:
    rng = random.Random(SEED)
    sen, match = _spectra_and_sen(rng)
    return {
        "ultrametric": _ultrametric(rng),
        "closed_forms": _closed_forms(),
        "sen_congruence": sen,
        "formula_equals_newton": match,
        "perturbation_invariance": _perturbation_invariance(rng),
    }


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Item:
    number: int
    title: str
    run: Callable[[], dict]
    expected: Callable[[], dict]
    limit: float


@dataclass(frozen=True)
class ItemResult:
    number: int
    title: str
    passed: bool
    observed: dict
    expected: dict
    seconds: float
    limit: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number}. {self.title} ({self.seconds:.2f}s, limit {self.limit:.0f}s)"


def _q(text: str) -> Fraction:
    return Fraction(text)


ITEMS: list[Item] = [
    Item(1, "linearization radius of the quartic example", item_1,
         lambda: {"nu_tilde_r": "7/12", "nu_r": "1/2", "closed_forms_consistent": True}, 1.0),
    Item(2, "Newton polygon of the ninth iterate", item_2,
         lambda: {
             "vertices": [(1, _q("7/4")), (2, _q("3/2")), (5, _q("1")), (14, _q("0"))],
             "segments": [(_q("-1/4"), 1), (_q("-1/6"), 3), (_q("-1/9"), 9)],
             "ramification": [1, 4, 13],
         }, 30.0),
    Item(3, "multiplier invariants of the cyclotomic and degree-10 examples", item_3,
         lambda: {"star_mst": (1, 2, 0), "star_nu_gamma": Fraction(1), "tenth_mst": (1, 2, 2)}, 5.0),
    Item(4, "exact coefficient law for the quadratic family, k <= 200", item_4,
         lambda: {"1+3^(1/4)": (0, True), "1+3^(3/4)": (0, True), "1+5^(1/2)": (0, True)}, 180.0),
    Item(5, "divergence witnesses on the boundary sphere", item_5,
         lambda: {10: Fraction(1, 2), 28: Fraction(1, 2), 82: Fraction(1, 2), "profile": True}, 30.0),
    Item(6, "cancellation fixture lambda = 4 over Q_3", item_6,
         lambda: {"nu_b": [Fraction(-1), Fraction(-2), Fraction(0)], "nu_combo": Fraction(2), "combo_is_9/20": True}, 5.0),
    Item(7, "valuations of 1 - lambda^n against direct powers, n <= 1000", item_7,
         lambda: {label: 0 for label in sample_multipliers()}, 60.0),
    Item(8, "no periodic point on the boundary of the linearization disk", item_8,
         lambda: {
             "quartic": (True, Fraction(1, 2), Fraction(1, 4)),
             "quintic": (True, Fraction(13, 20), Fraction(1, 2)),
             "contrast_nu_r": Fraction(1, 2),
             "contrast_fixed_level": [Fraction(1, 2)],
             "contrast_on_boundary": True,
         }, 60.0),
    Item(9, "property battery", item_9,
         lambda: {
             "ultrametric": True,
             "closed_forms": True,
             "sen_congruence": True,
             "formula_equals_newton": True,
             "perturbation_invariance": True,
         }, 300.0),
]

SUITES = {"reference": ITEMS}


def run_item(item: Item) -> ItemResult:
    start = time.perf_counter()
    try:
        observed = item.run()
    except Exception as exc:  # a crash is a failed item, not a crashed suite
        observed = {"error": f"{type(exc).__name__}: {exc}"}
    seconds = time.perf_counter() - start
    expected = item.expected()
    passed = observed == expected and seconds < item.limit
    return ItemResult(item.number, item.title, passed, observed, expected, seconds, item.limit)


def run_suite(name: str = "reference", only: list[int] | None = None) -> list[ItemResult]:
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    return [run_item(it) for it in SUITES[name] if only is None or it.number in only]
