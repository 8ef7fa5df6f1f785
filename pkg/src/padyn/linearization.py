"""The conjugacy ``H o f = lambda H`` and the radius formulas built on it."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import ceil
from typing import Callable

from .errors import (
    CheckNotApplicable,
    HypothesisViolated,
    IndistinguishableFromRootOfUnity,
    PrecisionExhausted,
)
from .multiplier import MultiplierInvariants, nu_one_minus_lambda_pow, nu_product, nu_R
from .padic import PadicElement, Valuation, dot
from .series import PowerSeries

MAX_RETRIES = 3


@dataclass(frozen=True)
class ConjugacyCoefficients:
    """``b_1 .. b_K`` of the normalized conjugacy, with their valuations."""

    lam: PadicElement
    entries: tuple[tuple[int, PadicElement, Valuation], ...]

    @property
    def K(self) -> int:
        return self.entries[-1][0]

    def b(self, k: int) -> PadicElement:
        return self.entries[k - 1][1]

    def nu(self, k: int) -> Valuation:
        return self.entries[k - 1][2]

    @property
    def certified(self) -> bool:
        return all(v.is_exact for _, _, v in self.entries)

    def nu_table(self) -> dict[int, Fraction]:
        """Certified valuations by index (raises if one is not certified)."""
        return {k: v.certified() for k, _, v in self.entries}

    def as_series(self) -> PowerSeries:
        F = self.lam.field
        return PowerSeries(F, [F.zero()] + [b for _, b, _ in self.entries])


def _check_in_G(f: PowerSeries, lam: PadicElement):
    if not f.coeffs[0].is_zero():
        raise HypothesisViolated("map must fix 0")
    if not f.coeffs[1].equals(lam):
        raise HypothesisViolated("linear coefficient must equal lambda")
    if lam.valuation() != Valuation.of(0):
        raise HypothesisViolated("multiplier must satisfy |lambda| = 1")
    if not f.is_integral():
        raise HypothesisViolated("map coefficients must lie in O_p")


def solve_conjugacy(f: PowerSeries, K: int, lam: PadicElement | None = None) -> ConjugacyCoefficients:
    """Coefficients ``b_1 .. b_K`` of ``H`` with ``H o f = lambda H``, ``H'(0) = 1``.

    Uses ``b_k lambda (1 - lambda^(k-1)) = sum_{l<k} b_l [x^k] f^l`` with the
    powers of ``f`` built incrementally.  Runs at the precision of ``f``;
    a ``b_k`` with no certified digit keeps a lower-bound valuation.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    if f.K < K:
        raise PrecisionExhausted(f"map is only known up to x^{f.K}")
    lam = f.coeffs[1] if lam is None else lam
    _check_in_G(f, lam)
    F = f.field
    one = F.one()
    entries = [(1, one, Valuation.of(0))]
    if K == 1:
        return ConjugacyCoefficients(lam, tuple(entries))
    ftop = min(f._top(), K)
    fc = f.coeffs
    # powers[l][k] = [x^k] f^l, nonzero only for k >= l
    powers: list[list | None] = [None, [None] + list(fc[1 : K + 1])]
    bs = [None, one]
    lam_pow = lam
    for k in range(2, K + 1):
        # extend powers with f^(k-1) (f^1 is already present)
        if k - 1 >= 2:
            prev = powers[k - 2]
            new: list = [None] * (K + 1)
            for j in range(k - 1, K + 1):
                lo = max(1, j - K)
                hi = min(ftop, j - (k - 2))
                new[j] = dot((fc[i], prev[j - i]) for i in range(lo, hi + 1))
            powers.append(new)
        lam_pow = lam_pow * lam  # lambda^k
        denom = lam - lam_pow
        if not denom.valuation().is_exact:
            raise IndistinguishableFromRootOfUnity(f"1 - lambda^{k - 1} vanishes to working precision")
        S = dot((bs[l], powers[l][k]) for l in range(1, k))
        b = S / denom
        v = b.valuation()
        bs.append(b)
        entries.append((k, b, v))
    return ConjugacyCoefficients(lam, tuple(entries))


def starting_precision(inv: MultiplierInvariants, K: int, e: int) -> int:
    """Initial pi-digit budget for a solve up to ``K``."""
    return e * ceil(K * (inv.nu1m + inv.s + inv.nuG + 1)) + 64


def conjugacy_with_retry(
    make_map: Callable[[int], PowerSeries],
    K: int,
    inv: MultiplierInvariants,
    e: int,
    precision: int | None = None,
) -> ConjugacyCoefficients:
    """Solve at a starting precision, doubling it up to three times while some
    ``v(b_k)`` is uncertified.

    ``make_map(N)`` must rebuild the map with coefficients known to ``pi^N``.
    Coefficients that stay uncertified (typically exact zeros) are returned
    as lower bounds.
    """
    N = precision or starting_precision(inv, K, e)
    for attempt in range(MAX_RETRIES + 1):
        coeffs = solve_conjugacy(make_map(N), K)
        if coeffs.certified or attempt == MAX_RETRIES:
            return coeffs
        N *= 2
    raise AssertionError("unreachable")


# --------------------------------------------------------------------------
# radius formulas


def tilde_r(inv: MultiplierInvariants) -> Fraction:
    """Valuation of the guaranteed linearization radius ``r~(lambda)``."""
    p, s, t = inv.p, inv.s, inv.t
    total = (
        Fraction(1, p**s * (p - 1))
        + Fraction(s - t, p**s)
        + s * Fraction(p - 1, p) * inv.nu1m
        + inv.nuG / p ** (s - t)
    )
    return total / inv.m


def _require_quadratic_hypotheses(inv: MultiplierInvariants):
    if inv.p < 3:
        raise HypothesisViolated("the exact quadratic laws need p >= 3")
    if inv.m != 1:
        raise HypothesisViolated("the exact quadratic laws need m = 1")
    if not 0 < inv.nu1m < 1:
        raise HypothesisViolated("the exact quadratic laws need 1/p < |1 - lambda| < 1")


def quadratic_radius(inv: MultiplierInvariants) -> Fraction:
    """Valuation of the exact linearization radius of ``lambda x + x^2``."""
    _require_quadratic_hypotheses(inv)
    return tilde_r(inv) - inv.nu1m / inv.p


def psi(inv: MultiplierInvariants) -> Fraction:
    """Valuation of the radius of the sphere of period-``p^s`` points."""
    if inv.m != 1:
        raise HypothesisViolated("psi needs m = 1")
    p, s, t = inv.p, inv.s, inv.t
    return -inv.nu1m / p + Fraction(s - t, p**s) + inv.nuG / p ** (s - t)


def nu_rho(inv: MultiplierInvariants) -> Fraction:
    """Valuation of the largest punctured disk free of nonzero periodic points."""
    return max(inv.nu1m, psi(inv))


def rho_equals_psi(inv: MultiplierInvariants) -> bool:
    """Classification of when the closest periodic sphere is the period-``p^s`` one."""
    d = inv.s - inv.t
    return d >= 2 or (d == 1 and inv.nuG >= 2 * inv.nu1m)


def bijectivity_radius(coeffs: ConjugacyCoefficients) -> Fraction:
    """Smallest ``nu_r`` with ``v(b_k) >= -(k-1) nu_r`` for every computed ``k``.

    Uncertified entries contribute their lower bound, which can only enlarge
    the result.
    """
    best = Fraction(0)
    for k, _, v in coeffs.entries[1:]:
        if v.value is not None:
            best = max(best, -v.value / (k - 1))
    return best


@dataclass(frozen=True)
class RadiusReport:
    nu_tilde_r: Fraction
    nu_r_quadratic: Fraction | None
    nu_psi: Fraction | None
    nu_rho: Fraction | None
    family_check: dict = dc_field(default_factory=dict)


def radius_report(inv: MultiplierInvariants) -> RadiusReport:
    flags = {
        "is_quadratic_family": inv.m == 1,
        "hypothesis_1_over_p": 0 < inv.nu1m < 1,
        "p_ge_3": inv.p >= 3,
    }
    nu_r = quadratic_radius(inv) if all(flags.values()) else None
    nu_p = psi(inv) if inv.m == 1 else None
    rho = nu_rho(inv) if inv.m == 1 else None
    return RadiusReport(tilde_r(inv), nu_r, nu_p, rho, flags)


# --------------------------------------------------------------------------
# coefficient laws


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    first_failure: int | None = None
    checked: int = 0
    witness: str | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "first_failure": self.first_failure,
            "checked": self.checked,
            "witness": self.witness,
        }


def _is_unit(x: PadicElement) -> bool:
    v = x.valuation()
    if v.is_exact:
        return v.value == 0
    if v.value > 0:
        return False
    raise PrecisionExhausted("cannot decide whether a coefficient is a unit")


def cubic_unit_conditions(f: PowerSeries) -> bool:
    """``|a_2| = 1`` and ``|a_2^2 - a_3| = 1``."""
    if f.K < 3:
        raise HypothesisViolated("map must be known up to x^3")
    a2, a3 = f.coeffs[2], f.coeffs[3]
    return _is_unit(a2) and _is_unit(a2 * a2 - a3)


def exact_law(inv: MultiplierInvariants, k: int) -> Fraction:
    """Predicted ``v(b_k)`` for maps satisfying the cubic unit conditions."""
    return (k - 1) // inv.p * inv.nu1m - nu_product(inv, k)


def quadratic_bk_exact_check(
    f: PowerSeries,
    inv: MultiplierInvariants,
    K: int,
    coeffs: ConjugacyCoefficients | None = None,
) -> CheckResult:
    """Compare solved ``v(b_k)`` with the exact law for ``k = 2 .. K``."""
    _require_quadratic_hypotheses(inv)
    if not cubic_unit_conditions(f):
        raise CheckNotApplicable("map needs |a_2| = 1 and |a_2^2 - a_3| = 1")
    if coeffs is None:
        coeffs = solve_conjugacy(f, K)
    first = None
    for k in range(2, K + 1):
        if coeffs.nu(k).certified() != exact_law(inv, k):
            first = k
            break
    return CheckResult("exact_bk_law", first is None, first, K - 1)


def general_bound_check(coeffs: ConjugacyCoefficients, inv: MultiplierInvariants) -> CheckResult:
    """``v(b_k) >= -sum_{n<k} v(1 - lambda^n)`` for every computed ``k``."""
    first = None
    for k, _, v in coeffs.entries[1:]:
        bound = -nu_product(inv, k)
        if v.value is not None and v.value < bound:
            if not v.exact:
                raise PrecisionExhausted(f"v(b_{k}) is not certified against the bound")
            first = k
            break
    return CheckResult("general_bk_bound", first is None, first, coeffs.K - 1)


@dataclass(frozen=True)
class TauProfile:
    nu_tau: Fraction
    strict: CheckResult
    strengthened: CheckResult | None
    witnesses: CheckResult

    @property
    def checks(self) -> list[CheckResult]:
        return [c for c in (self.strict, self.strengthened, self.witnesses) if c is not None]


def divergence_indices(inv: MultiplierInvariants, K: int) -> list[int]:
    """``k = p^(s + a) + 1 <= K`` with ``a >= 1``."""
    out = []
    a = 1
    while inv.p ** (inv.s + a) + 1 <= K:
        out.append(inv.p ** (inv.s + a) + 1)
        a += 1
    return out


def tau_profile(coeffs: ConjugacyCoefficients, inv: MultiplierInvariants) -> TauProfile:
    """``|b_k| tau^k`` against ``tau`` on the sphere of the exact radius."""
    nt = quadratic_radius(inv)
    p, s = inv.p, inv.s
    values = {k: v.certified() + k * nt for k, _, v in coeffs.entries[1:]}
    first = next((k for k, x in values.items() if not x > nt), None)
    strict = CheckResult("tau_strict", first is None, first, len(values))
    strengthened = None
    if s >= 1:
        bound = nt + nu_R(s + 1, p).value
        first = next((k for k, x in values.items() if not x >= bound), None)
        strengthened = CheckResult("tau_sphere_bound", first is None, first, len(values))
    target = nt + Fraction(1, p - 1)
    idx = divergence_indices(inv, coeffs.K)
    first = next((k for k in idx if values[k] != target), None)
    witness = ",".join(str(k) for k in idx)
    return TauProfile(nt, strict, strengthened, CheckResult("tau_equality", first is None, first, len(idx), witness))


def monotone_check(coeffs: ConjugacyCoefficients) -> CheckResult:
    """``v(b_k)`` strictly decreasing in ``k``."""
    first = None
    prev = None
    for k, _, v in coeffs.entries[1:]:
        x = v.certified()
        if prev is not None and not x < prev:
            first = k
            break
        prev = x
    return CheckResult("bk_strictly_decreasing", first is None, first, coeffs.K - 1)


def predicted_denominator_valuations(inv: MultiplierInvariants, K: int) -> dict[int, Fraction]:
    """``v(1 - lambda^n)`` for ``n < K`` (convenience for reports)."""
    return {n: nu_one_minus_lambda_pow(inv, n) for n in range(1, K)}
