"""Where the periodic points of a tangent-to-rotation germ live.

Everything is phrased through the Newton polygons of ``f^(p^n) - id`` and
the matching closed forms in terms of the multiplier invariants.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    HypothesisViolated,
    PrecisionExhausted,
    TruncationTooShort,
    UnsupportedDegree,
)
from .linearization import (
    CheckResult,
    bijectivity_radius,
    cubic_unit_conditions,
    nu_rho,
    psi,
    quadratic_radius,
    rho_equals_psi,
    solve_conjugacy,
)
from .multiplier import MultiplierInvariants
from .padic import Valuation
from .series import (
    NewtonPolygon,
    PowerSeries,
    evaluate_polynomial,
    iterate,
    lower_hull,
    newton_polygon,
    weierstrass_degree,
)

DEFAULT_MARGIN = 8
AUTO_RETRIES = 3


def _require_tangent(f: PowerSeries):
    if not f.coeffs[0].is_zero():
        raise HypothesisViolated("map must fix 0")
    v = (f.coeffs[1] - 1).valuation()
    if v.value is not None and v.exact and v.value <= 0:
        raise HypothesisViolated("needs |f'(0) - 1| < 1")


def auto_truncation(p: int, nmax: int, margin: int = DEFAULT_MARGIN) -> int:
    """``1 + (1 + p + ... + p^nmax) + margin``."""
    return 1 + sum(p**j for j in range(nmax + 1)) + margin


@dataclass(frozen=True)
class Level:
    n: int
    polygon: NewtonPolygon | None
    wideg: int | None

    @property
    def roots(self) -> dict[Fraction, int]:
        return {} if self.polygon is None else self.polygon.root_valuations()


def _level_polygon(g: PowerSeries) -> tuple[NewtonPolygon | None, int | None]:
    d = weierstrass_degree(g)
    if d is not None:
        return newton_polygon(g), d
    if g.degree is None:
        raise TruncationTooShort(f"no unit coefficient up to x^{g.K}")
    # exact polynomial with no unit coefficient: keep roots inside the unit disk
    pts, bounds = [], []
    for i in range(1, g.degree + 1):
        v = g.coeffs[i].valuation()
        (pts if v.exact else bounds).append((i, v.value))
    if not pts:
        return None, None
    hull = lower_hull(pts)
    kept = [hull[0]]
    for a, b in zip(hull, hull[1:]):
        if b[1] >= a[1]:
            break
        kept.append(b)
    poly = NewtonPolygon(tuple(kept))
    for i, bound in bounds:
        if kept[0][0] < i < kept[-1][0] and bound < poly.value_at(i):
            raise PrecisionExhausted(f"a_{i} is not certified above the polygon")
    return poly, None


def polygon_levels(f: PowerSeries, nmax: int, K: int | None = None) -> list[Level]:
    """Newton polygons of ``f^(p^n) - id`` for ``n = 0 .. nmax``.

    With ``K`` omitted the truncation is sized automatically and doubled on
    :class:`TruncationTooShort`.
    """
    _require_tangent(f)
    p = f.field.p
    auto = K is None
    K = auto_truncation(p, nmax) if auto else K
    for attempt in range(AUTO_RETRIES + 1 if auto else 1):
        try:
            return _levels_at(f, nmax, K)
        except TruncationTooShort:
            if not auto or attempt == AUTO_RETRIES:
                raise
            K *= 2
    raise AssertionError("unreachable")


def _levels_at(f: PowerSeries, nmax: int, K: int) -> list[Level]:
    if f.K < K:
        if f.degree is None:
            raise TruncationTooShort(f"map is only known up to x^{f.K}, need {K}")
        f = f.truncate(K)
    else:
        f = f.truncate(K)
    p = f.field.p
    ident = PowerSeries.variable(f.field, K)
    levels = []
    g = f
    for n in range(nmax + 1):
        if n:
            g = iterate(g, p)
        poly, d = _level_polygon(g - ident)
        levels.append(Level(n, poly, d))
    return levels


@dataclass(frozen=True)
class RamificationNumbers:
    entries: tuple[tuple[int, int], ...]
    p: int

    def sen_congruence(self) -> bool:
        """``i_n = i_(n-1) mod p^n`` for consecutive entries."""
        return all(
            (b - a) % self.p**n == 0 for (_, a), (n, b) in zip(self.entries, self.entries[1:])
        )

    def minimal(self) -> bool:
        """``i_n = 1 + p + ... + p^n`` for every entry."""
        return all(i == sum(self.p**j for j in range(n + 1)) for n, i in self.entries)


def ramification_numbers(f: PowerSeries, nmax: int, K: int | None = None, levels: list[Level] | None = None) -> RamificationNumbers:
    """``i_n = wideg(f^(p^n) - id) - 1`` for ``n = 0 .. nmax``."""
    if levels is None:
        levels = polygon_levels(f, nmax, K)
    entries = []
    for lv in levels:
        if lv.wideg is None:
            raise HypothesisViolated(f"f^(p^{lv.n}) - id has no unit coefficient; i_{lv.n} is undefined")
        entries.append((lv.n, lv.wideg - 1))
    return RamificationNumbers(tuple(entries), f.field.p)


def is_minimally_ramified(f: PowerSeries) -> bool:
    """``p >= 3``, ``|a_2| = 1`` and ``|a_2^2 - a_3| = 1``."""
    _require_tangent(f)
    if f.field.p < 3:
        return False
    return cubic_unit_conditions(f)


def _require_family(inv: MultiplierInvariants):
    if inv.m != 1:
        raise HypothesisViolated("needs m = 1")
    if not 0 < inv.nu1m < 1:
        raise HypothesisViolated("needs 1/p < |1 - lambda| < 1")


def kappa(inv: MultiplierInvariants, n: int) -> Fraction:
    """Slope of the segment that appears at level ``n >= 1``."""
    _require_family(inv)
    if n < 1:
        raise ValueError("n must be positive")
    p, s, t = inv.p, inv.s, inv.t
    if n >= s + 1:
        return Fraction(-1, p**n)
    if n == s:
        return -Fraction(s - t, p**s) - inv.nuG / p ** (s - t) + inv.nu1m / p
    return -Fraction(p - 1, p) * inv.nu1m


@dataclass(frozen=True)
class PeriodicSpectrum:
    """``(period, valuation, count)`` for the nonzero periodic points found per level."""

    entries: tuple[tuple[int, Fraction, int], ...]
    source: str
    note: str | None = None

    def valuations(self) -> set[Fraction]:
        return {nu for _, nu, _ in self.entries}


@dataclass(frozen=True)
class FormulaSpectrum:
    spectrum: PeriodicSpectrum
    nu_rho: Fraction
    rho_is_psi: bool


def periodic_spectrum_formula(inv: MultiplierInvariants, nmax: int) -> FormulaSpectrum:
    """Closed-form spectrum of a minimally ramified map with this multiplier."""
    _require_family(inv)
    p = inv.p
    entries = [(1, inv.nu1m, 1)]
    for n in range(1, nmax + 1):
        entries.append((p**n, -kappa(inv, n), p**n))
    return FormulaSpectrum(PeriodicSpectrum(tuple(entries), "formula"), nu_rho(inv), rho_equals_psi(inv))


def periodic_spectrum_newton(
    f: PowerSeries, nmax: int, K: int | None = None, levels: list[Level] | None = None
) -> PeriodicSpectrum:
    """Spectrum read off the polygons of ``f^(p^n) - id``.

    Roots new at level ``n`` are the multiset difference with level ``n - 1``.
    """
    if levels is None:
        levels = polygon_levels(f, nmax, K)
    p = f.field.p
    entries = []
    prev: Counter = Counter()
    for lv in levels:
        cur = Counter(lv.roots)
        new = cur - prev
        for nu in sorted(new, reverse=True):
            entries.append((p**lv.n, nu, new[nu]))
        prev = cur
    note = None
    try:
        minimal = is_minimally_ramified(f)
    except (HypothesisViolated, PrecisionExhausted):
        minimal = False
    if not minimal:
        note = "unverified cycle structure"
    return PeriodicSpectrum(tuple(entries), "newton", note)


def single_segment_check(levels: list[Level], p: int, inv: MultiplierInvariants | None = None) -> CheckResult:
    """Each level keeps the previous segments and appends one of length ``p^n``.

    With ``inv`` the new slope must also equal ``kappa(inv, n)``.
    """
    first = None
    for a, b in zip(levels, levels[1:]):
        n = b.n
        ok = a.polygon is not None and b.polygon is not None
        if ok:
            sa, sb = a.polygon.segments, b.polygon.segments
            ok = len(sb) == len(sa) + 1 and sb[:-1] == sa
            if ok:
                slope, length = sb[-1]
                ok = length == p**n
                if inv is not None:
                    ok = ok and slope == kappa(inv, n)
        if not ok:
            first = n
            break
    return CheckResult("single_segment_per_level", first is None, first, len(levels) - 1)


@dataclass(frozen=True)
class BoundaryReport:
    passed: bool
    nu_r: Fraction
    nu_rho: Fraction
    formula: PeriodicSpectrum | None
    newton: PeriodicSpectrum | None
    in_family: bool
    note: str | None = None


def boundary_free_check(
    f: PowerSeries, inv: MultiplierInvariants, nmax: int = 2, with_newton: bool = False
) -> BoundaryReport:
    """No periodic point on the boundary sphere of the linearization disk."""
    _require_family(inv)
    if inv.p < 3:
        raise HypothesisViolated("needs p >= 3")
    if not cubic_unit_conditions(f):
        raise HypothesisViolated("needs |a_2| = 1 and |a_2^2 - a_3| = 1")
    nr = quadratic_radius(inv)
    fs = periodic_spectrum_formula(inv, nmax)
    newton = periodic_spectrum_newton(f, nmax) if with_newton else None
    passed = nr > fs.nu_rho and nr not in fs.spectrum.valuations()
    if newton is not None:
        passed = passed and nr not in newton.valuations()
    return BoundaryReport(passed, nr, fs.nu_rho, fs.spectrum, newton, True)


def boundary_contrast(f: PowerSeries, K: int = 30, nmax: int = 1) -> BoundaryReport:
    """Informational run for maps outside the family.

    The radius is the bijectivity radius of the solved conjugacy; the
    spectrum comes from the polygons.  A polynomial map is extended to ``K``;
    a series is solved only as far as it is known.
    """
    if f.degree is not None:
        f = f.truncate(max(K, f.K))
    coeffs = solve_conjugacy(f, min(K, f.K))
    nr = bijectivity_radius(coeffs)
    newton = periodic_spectrum_newton(f, nmax)
    fixed = [nu for period, nu, _ in newton.entries if period == 1]
    rho = max(newton.valuations()) if newton.entries else Fraction(0)
    on_boundary = nr in newton.valuations()
    note = "periodic points on the boundary sphere" if on_boundary else None
    if fixed and nr == max(fixed):
        note = "fixed points on the boundary sphere"
    return BoundaryReport(not on_boundary, nr, rho, None, newton, False, note)


def critical_orbit(f: PowerSeries, kmax: int) -> list[Valuation]:
    """``v(f^k(c))`` for ``k = 0 .. kmax`` where ``c`` is the critical point of a quadratic."""
    if f.degree != 2:
        raise UnsupportedDegree("critical orbit needs an exact quadratic polynomial")
    a1, a2 = f.coeffs[1], f.coeffs[2]
    x = -a1 / (2 * a2)
    out = [x.valuation()]
    for _ in range(kmax):
        x = evaluate_polynomial(f, x)
        out.append(x.valuation())
    return out


__all__ = [
    "Level",
    "PeriodicSpectrum",
    "FormulaSpectrum",
    "RamificationNumbers",
    "BoundaryReport",
    "auto_truncation",
    "polygon_levels",
    "ramification_numbers",
    "is_minimally_ramified",
    "kappa",
    "periodic_spectrum_formula",
    "periodic_spectrum_newton",
    "single_segment_check",
    "boundary_free_check",
    "boundary_contrast",
    "critical_orbit",
    "nu_rho",
    "psi",
    "rho_equals_psi",
]
