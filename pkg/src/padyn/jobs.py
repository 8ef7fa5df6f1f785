"""Command runners: each turns a :class:`JobConfig` into a :class:`ReportDocument`."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .config import JobConfig
from .dynamics import (
    auto_truncation,
    boundary_contrast,
    boundary_free_check,
    is_minimally_ramified,
    periodic_spectrum_formula,
    periodic_spectrum_newton,
    polygon_levels,
    ramification_numbers,
    single_segment_check,
)
from .errors import HypothesisViolated, PadynError
from .linearization import (
    CheckResult,
    conjugacy_with_retry,
    cubic_unit_conditions,
    general_bound_check,
    monotone_check,
    quadratic_bk_exact_check,
    radius_report,
    tau_profile,
)
from .multiplier import MultiplierInvariants, compute_invariants
from .report import ReportDocument, approx_radius, rat


def _in_family(inv: MultiplierInvariants) -> bool:
    return inv.p >= 3 and inv.m == 1 and 0 < inv.nu1m < 1


def _map_in_family(cfg: JobConfig, F, lam) -> bool:
    f = cfg.build_map(F, lam, 3)
    try:
        return cubic_unit_conditions(f)
    except PadynError:
        return False


def _spectrum_rows(spec) -> list:
    return [[period, rat(nu), count] for period, nu, count in spec.entries]


def _setup(cfg: JobConfig):
    F = cfg.build_field()
    lam = cfg.build_lambda(F)
    inv = compute_invariants(lam)
    return F, lam, inv


def run_analyze(cfg: JobConfig, decimal: bool = False) -> ReportDocument:
    """Invariants, radii and the closed-form spectrum."""
    F, lam, inv = _setup(cfg)
    rr = radius_report(inv)
    quadratic = _in_family(inv) and _map_in_family(cfg, F, lam)
    radii = {"nu_tilde_r": rat(rr.nu_tilde_r)}
    if quadratic:
        radii["nu_r"] = rat(rr.nu_r_quadratic)
    if rr.nu_psi is not None:
        radii["nu_psi"] = rat(rr.nu_psi)
        radii["nu_rho"] = rat(rr.nu_rho)
    radii["family_check"] = dict(rr.family_check, map_cubic_units=quadratic)
    doc = ReportDocument("analyze", input=cfg.echo(), invariants=inv.to_dict(), radii=radii)
    if _in_family(inv):
        fs = periodic_spectrum_formula(inv, cfg.nmax)
        doc.spectra = {
            "formula": _spectrum_rows(fs.spectrum),
            "nu_rho": rat(fs.nu_rho),
            "rho_is_psi": fs.rho_is_psi,
        }
    doc.checks.append(CheckResult("root_of_unity_guard", True).to_dict())
    doc.checks.append(
        CheckResult("invariants_consistent", not inv.violations(), witness="; ".join(inv.violations()) or None).to_dict()
    )
    if decimal:
        doc.approximate = {
            k: approx_radius(inv.p, Fraction(v)) for k, v in radii.items() if isinstance(v, str)
        }
    return doc


def run_conjugacy(cfg: JobConfig, K: int | None = None, decimal: bool = False) -> ReportDocument:
    """``v(b_k)`` table and the coefficient laws that apply."""
    K = cfg.K if K is None else K
    F, lam, inv = _setup(cfg)

    def make_map(N: int):
        G = F.with_precision(N)
        return cfg.build_map(G, cfg.build_lambda(G), K)

    coeffs = conjugacy_with_retry(make_map, K, inv, F.e, cfg.precision)
    rr = radius_report(inv)
    table = [[k, str(v)] for k, _, v in coeffs.entries]
    radii = {"nu_tilde_r": rat(rr.nu_tilde_r)}
    checks = [general_bound_check(coeffs, inv)]
    f = cfg.build_map(F, lam, max(K, 3))
    if _in_family(inv) and K >= 2:
        try:
            checks.append(quadratic_bk_exact_check(f, inv, K, coeffs))
            tp = tau_profile(coeffs, inv)
            checks.extend(tp.checks)
            checks.append(monotone_check(coeffs))
            radii["nu_r"] = rat(tp.nu_tau)
        except HypothesisViolated as exc:
            checks.append(CheckResult("exact_bk_law", True, None, 0, f"not applicable: {exc}"))
    doc = ReportDocument(
        "conjugacy",
        input=dict(cfg.echo(), K=K),
        invariants=inv.to_dict(),
        radii=radii,
        coefficients={"nu_b": table},
        checks=[c.to_dict() for c in checks],
    )
    if decimal:
        doc.approximate = {k: approx_radius(inv.p, Fraction(v)) for k, v in radii.items()}
    return doc


def run_newton(cfg: JobConfig, nmax: int | None = None, decimal: bool = False):
    """Polygons per level, both spectra, ramification numbers and the boundary check.

    Returns ``(report, levels)`` so callers can render CSV and SVG.
    """
    nmax = cfg.nmax if nmax is None else nmax
    F = cfg.build_field()
    lam = cfg.build_lambda(F)
    K = auto_truncation(F.p, nmax)
    f = cfg.build_map(F, lam, K)
    levels = polygon_levels(f, nmax)
    newton = periodic_spectrum_newton(f, nmax, levels=levels)
    spectra: dict = {
        "polygons": [
            {
                "n": lv.n,
                "wideg": lv.wideg,
                "vertices": [] if lv.polygon is None else [[i, rat(v)] for i, v in lv.polygon.vertices],
                "segments": [] if lv.polygon is None else [[rat(s), n] for s, n in lv.polygon.segments],
            }
            for lv in levels
        ],
        "newton": _spectrum_rows(newton),
    }
    if newton.note:
        spectra["newton_note"] = newton.note
    checks = []
    try:
        ram = ramification_numbers(f, nmax, levels=levels)
        spectra["ramification"] = [[n, i] for n, i in ram.entries]
        checks.append(CheckResult("sen_congruence", ram.sen_congruence()))
        minimal = is_minimally_ramified(f)
        spectra["minimally_ramified"] = minimal
        checks.append(CheckResult("ramification_matches_criterion", ram.minimal() == minimal))
    except HypothesisViolated as exc:
        spectra["ramification"] = None
        spectra["ramification_note"] = str(exc)
        minimal = False
    doc = ReportDocument("newton", input=dict(cfg.echo(), nmax=nmax), spectra=spectra)
    try:
        inv = compute_invariants(lam)
        doc.invariants = inv.to_dict()
    except PadynError:
        inv = None
    if inv is not None and _in_family(inv) and minimal:
        fs = periodic_spectrum_formula(inv, nmax)
        spectra["formula"] = _spectrum_rows(fs.spectrum)
        checks.append(CheckResult("formula_equals_newton", fs.spectrum.entries == newton.entries))
        checks.append(single_segment_check(levels, F.p, inv))
        b = boundary_free_check(f, inv, nmax)
        doc.radii = {"nu_r": rat(b.nu_r), "nu_rho": rat(b.nu_rho)}
        checks.append(CheckResult("boundary_free", b.passed))
    elif inv is not None:
        try:
            b = boundary_contrast(f, nmax=nmax)
            doc.radii = {"nu_r_bijectivity": rat(b.nu_r), "nu_rho": rat(b.nu_rho)}
            spectra["boundary_note"] = b.note
        except PadynError as exc:
            spectra["boundary_note"] = f"no boundary report: {exc}"
    doc.checks = [c.to_dict() for c in checks]
    if decimal and doc.radii:
        doc.approximate = {k: approx_radius(F.p, Fraction(v)) for k, v in doc.radii.items()}
    return doc, levels


def _run_one(args) -> dict:
    command, cfg, decimal = args
    try:
        if command == "analyze":
            doc = run_analyze(cfg, decimal)
        elif command == "conjugacy":
            doc = run_conjugacy(cfg, decimal=decimal)
        else:
            doc, _ = run_newton(cfg, decimal=decimal)
        return doc.to_dict()
    except PadynError as exc:
        return {
            "command": command,
            "input": cfg.echo(),
            "error": {"type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code},
        }


def run_sweep(command: str, cfg: JobConfig, jobs: int = 1, decimal: bool = False) -> ReportDocument:
    """One job per multiplier in ``cfg.sweep``; results keep the sweep order."""
    tasks = [(command, cfg.with_lambda(text), decimal) for text in cfg.sweep]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    return ReportDocument(command, input=dict(cfg.echo(), sweep=list(cfg.sweep)), sweep=results)
