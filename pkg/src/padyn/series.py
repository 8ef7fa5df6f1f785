"""Truncated power series over a p-adic field.

A :class:`PowerSeries` stores ``a_0 .. a_K``.  When the series is known to
be a polynomial of degree ``<= K`` the ``degree`` attribute records it and
all coefficients above it are exact zeros; otherwise ``degree`` is ``None``
and nothing is known about the tail beyond ``K``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import expr
from .errors import (
    DivisionByUncertifiedZero,
    FieldMismatch,
    HypothesisViolated,
    OutsideConvergenceCertificate,
    PrecisionExhausted,
    TruncationTooShort,
)
from .padic import Field, PadicElement, Valuation, dot, _big_o, _has_big_o


class PowerSeries:
    __slots__ = ("field", "coeffs", "degree")

    def __init__(self, field: Field, coeffs: Sequence, degree: int | None = None, K: int | None = None):
        coeffs = [field.element(c) if not isinstance(c, PadicElement) else c for c in coeffs]
        for c in coeffs:
            field.check(c)
        if K is not None:
            if len(coeffs) > K + 1:
                if degree is not None and degree > K:
                    degree = None
                coeffs = coeffs[: K + 1]
            else:
                coeffs += [field.zero() for _ in range(K + 1 - len(coeffs))]
        if not coeffs:
            raise ValueError("a power series needs at least one coefficient")
        if len(coeffs) < 2:
            coeffs.append(field.zero())
        self.field = field
        self.coeffs = tuple(coeffs)
        if degree is not None and degree > self.K:
            degree = None
        self.degree = degree

    # ---- constructors

    @classmethod
    def variable(cls, field: Field, K: int) -> PowerSeries:
        return cls(field, [0, 1], degree=1, K=K)

    identity = variable

    @classmethod
    def constant(cls, field: Field, c, K: int) -> PowerSeries:
        return cls(field, [c], degree=0, K=K)

    @classmethod
    def linear(cls, field: Field, c, K: int) -> PowerSeries:
        return cls(field, [0, c], degree=1, K=K)

    # ---- basic structure

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_polynomial(self) -> bool:
        return self.degree is not None

    def __getitem__(self, i: int) -> PadicElement:
        return self.coeffs[i]

    def _top(self) -> int:
        return self.K if self.degree is None else self.degree

    def truncate(self, K: int) -> PowerSeries:
        """Change the truncation order.  Raising it requires a polynomial."""
        if K > self.K and self.degree is None:
            raise TruncationTooShort(f"series is only known up to x^{self.K}")
        return PowerSeries(self.field, list(self.coeffs), self.degree, K=K)

    def valuations(self) -> list[Valuation]:
        return [c.valuation() for c in self.coeffs]

    def is_integral(self) -> bool:
        """All known coefficients have valuation >= 0 (certified or bounded)."""
        for v in self.valuations():
            if v.value is not None and v.value < 0:
                if v.exact:
                    return False
                raise PrecisionExhausted("cannot certify integrality of a coefficient")
        return True

    def in_G(self, lam: PadicElement | None = None) -> bool:
        """Membership in lambda*x + x^2 O[[x]] with |lambda| = 1."""
        if not self.coeffs[0].is_zero():
            return False
        a1 = self.coeffs[1]
        if a1.valuation() != Valuation.of(0):
            return False
        if lam is not None and not a1.equals(lam):
            return False
        return self.is_integral()

    # ---- arithmetic

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            if other.field != self.field:
                raise FieldMismatch("series live in different fields")
            return other
        if isinstance(other, (int, Fraction, PadicElement)):
            return PowerSeries.constant(self.field, other, self.K)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        K = min(self.K, o.K)
        coeffs = [a + b for a, b in zip(self.coeffs[: K + 1], o.coeffs[: K + 1])]
        degree = None
        if self.degree is not None and o.degree is not None:
            degree = max(self.degree, o.degree)
        return PowerSeries(self.field, coeffs, degree)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(self.field, [-c for c in self.coeffs], self.degree)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicElement)):
            return PowerSeries(self.field, [c * other for c in self.coeffs], self.degree)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return _mul(self, o, min(self.K, o.K))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicElement)):
            return PowerSeries(self.field, [c / other for c in self.coeffs], self.degree)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = PowerSeries.constant(self.field, 1, self.K)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def equals(self, other: PowerSeries) -> bool:
        """Coefficientwise p-adic equality up to the shared truncation."""
        K = min(self.K, other.K)
        return all(a.equals(b) for a, b in zip(self.coeffs[: K + 1], other.coeffs[: K + 1]))

    def __repr__(self):
        terms = ", ".join(str(c.valuation()) for c in self.coeffs[:8])
        more = ", ..." if self.K >= 8 else ""
        return f"PowerSeries(K={self.K}, degree={self.degree}, valuations=[{terms}{more}])"

    def __call__(self, x: PadicElement) -> PadicElement:
        return evaluate(self, x)


def _mul(a: PowerSeries, b: PowerSeries, K: int) -> PowerSeries:
    F = a.field
    ta = min(a._top(), K)
    tb = min(b._top(), K)
    top = min(K, ta + tb)
    coeffs = []
    for k in range(top + 1):
        lo = max(0, k - tb)
        hi = min(ta, k)
        if lo > hi:
            coeffs.append(F.zero())
            continue
        coeffs.append(dot((a.coeffs[i], b.coeffs[k - i]) for i in range(lo, hi + 1)))
    degree = None
    if a.degree is not None and b.degree is not None and a.degree + b.degree <= K:
        degree = a.degree + b.degree
    return PowerSeries(F, coeffs, degree, K=K)


# --------------------------------------------------------------------------
# Composition and iteration


def compose(g: PowerSeries, f: PowerSeries) -> PowerSeries:
    """``g(f(x))`` truncated at ``min(g.K, f.K)``.

    ``f(0)`` is treated as an exact zero, so ``f^j`` starts at ``x^j``.
    """
    if g.field != f.field:
        raise FieldMismatch("series live in different fields")
    if not f.coeffs[0].is_zero():
        raise HypothesisViolated("inner series must have zero constant term")
    F = g.field
    K = min(g.K, f.K)
    gtop = min(g._top(), K)
    ftop = min(f._top(), K)
    # powers[j][k] = [x^k] f^j for j <= k; f^j starts at x^j.
    acc: list[list] = [[] for _ in range(K + 1)]
    acc[0].append((g.coeffs[0], F.one()))
    power = [F.zero() for _ in range(K + 1)]
    for k in range(1, ftop + 1):
        power[k] = f.coeffs[k]
    power_top = ftop
    for j in range(1, gtop + 1):
        gj = g.coeffs[j]
        for k in range(j, power_top + 1):
            acc[k].append((gj, power[k]))
        if j == gtop:
            break
        # power <- power * f, starting at x^(j+1)
        new_top = min(K, power_top + ftop)
        new = [F.zero() for _ in range(K + 1)]
        for k in range(j + 1, new_top + 1):
            lo = max(1, k - power_top)
            hi = min(ftop, k - j)
            if lo <= hi:
                new[k] = dot((f.coeffs[i], power[k - i]) for i in range(lo, hi + 1))
        power, power_top = new, new_top
    coeffs = [dot(terms) if terms else F.zero() for terms in acc]
    degree = None
    if g.degree is not None and f.degree is not None and g.degree * f.degree <= K:
        degree = g.degree * f.degree
    return PowerSeries(F, coeffs, degree, K=K)


def iterate(f: PowerSeries, n: int) -> PowerSeries:
    """The ``n``-fold composite ``f o f o ... o f`` (``n >= 1``), by repeated squaring."""
    if n < 1:
        raise ValueError("iterate needs n >= 1")
    result = None
    base = f
    while n:
        if n & 1:
            result = base if result is None else compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


# --------------------------------------------------------------------------
# Weierstrass degree and Newton polygons


def weierstrass_degree(g: PowerSeries) -> int | None:
    """Smallest index of a unit coefficient; ``None`` if none up to the truncation.

    Coefficients before it must be certified non-units.
    """
    top = g._top()
    for i in range(top + 1):
        v = g.coeffs[i].valuation()
        if v.exact:
            if v.value < 0:
                raise HypothesisViolated("Weierstrass degree needs coefficients in O_p")
            if v.value == 0:
                return i
        elif v.value <= 0:
            raise PrecisionExhausted(f"cannot decide whether a_{i} is a unit")
    return None


wideg = weierstrass_degree


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(i, v(a_i))``; vertices left to right."""

    vertices: tuple[tuple[int, Fraction], ...]

    @property
    def segments(self) -> tuple[tuple[Fraction, int], ...]:
        """``(slope, horizontal length)`` for each edge."""
        out = []
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v1 - v0, i1 - i0), i1 - i0))
        return tuple(out)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(s for s, _ in self.segments)

    @property
    def length(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0]

    def root_valuations(self) -> dict[Fraction, int]:
        """Valuation of roots -> multiplicity (a slope ``k`` gives roots of valuation ``-k``)."""
        out: dict[Fraction, int] = {}
        for slope, length in self.segments:
            out[-slope] = out.get(-slope, 0) + length
        return out

    def value_at(self, i) -> Fraction:
        vs = self.vertices
        for (i0, v0), (i1, v1) in zip(vs, vs[1:]):
            if i0 <= i <= i1:
                return v0 + Fraction(v1 - v0, i1 - i0) * (i - i0)
        if len(vs) == 1 and i == vs[0][0]:
            return vs[0][1]
        raise ValueError("index outside the polygon")


def lower_hull(points: Sequence[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    """Lower convex hull of points sorted by x, without collinear interior points."""
    hull: list[tuple[int, Fraction]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            cross = (x1 - x0) * (pt[1] - y0) - (y1 - y0) * (pt[0] - x0)
            if cross <= 0:
                hull.pop()
            else:
                break
        if hull and hull[-1][0] == pt[0]:
            continue
        hull.append(pt)
    return hull


def newton_polygon(g: PowerSeries, start: int = 1) -> NewtonPolygon:
    """Principal part of the Newton polygon: indices ``start .. wideg(g)``."""
    d = weierstrass_degree(g)
    if d is None:
        raise TruncationTooShort(f"no unit coefficient up to x^{g.K}")
    certified = []
    bounds = []
    for i in range(start, d + 1):
        v = g.coeffs[i].valuation()
        if v.exact:
            certified.append((i, v.value))
        else:
            bounds.append((i, v.value))
    if not certified:
        raise PrecisionExhausted("no certified coefficient")
    hull = lower_hull(certified)
    poly = NewtonPolygon(tuple(hull))
    for i, b in bounds:
        if hull[0][0] < i < hull[-1][0] and b < poly.value_at(i):
            raise PrecisionExhausted(f"coefficient a_{i} is not certified above the polygon")
        if i < hull[0][0]:
            raise PrecisionExhausted(f"coefficient a_{i} is not certified")
    return poly


# --------------------------------------------------------------------------
# Bijectivity on disks and evaluation


@dataclass(frozen=True)
class BijectivityReport:
    bijective: bool
    degree_on_closed_disk: int
    tail_certified: bool
    degree_exact: bool
    checked_up_to: int
    closed: bool
    first_violation: int | None = None


def disk_bijectivity(h: PowerSeries, nu_r, closed: bool = True, strict: bool = False) -> BijectivityReport:
    """Check ``|a_i| r^i <= r`` for all ``i`` with ``r = p^(-nu_r)``.

    In valuation form: ``v(a_i) >= -(i - 1) nu_r``.  The degree on the
    closed disk is the largest ``i`` where equality holds.  Coefficients
    beyond the truncation are covered only for polynomials, or for series
    in ``O_p[[x]]`` when ``nu_r >= 0``; otherwise ``tail_certified`` is false
    (and ``strict=True`` turns that into :class:`TruncationTooShort`).
    """
    nu_r = Fraction(nu_r)
    a1 = h.coeffs[1].valuation()
    if a1 != Valuation.of(0):
        raise HypothesisViolated("disk bijectivity needs |h'(0)| = 1")
    top = h._top()
    bijective = True
    first_violation = None
    degree = 1
    integral = True
    for i in range(2, top + 1):
        threshold = -(i - 1) * nu_r
        v = h.coeffs[i].valuation()
        if v.value is not None and v.value < 0:
            integral = False
        if v.exact:
            if v.value < threshold:
                bijective = False
                if first_violation is None:
                    first_violation = i
            elif v.value == threshold:
                degree = i
        elif v.value <= threshold:
            raise PrecisionExhausted(f"a_{i} is not certified against the radius bound")
    if h.degree is not None:
        tail, exact_degree = True, True
    elif integral and nu_r >= 0:
        tail = True
        exact_degree = nu_r > 0
    else:
        tail, exact_degree = False, False
    if strict and not tail:
        raise TruncationTooShort("tail beyond the truncation cannot be certified")
    return BijectivityReport(bijective, degree, tail, exact_degree, top, closed, first_violation)


def evaluate(g: PowerSeries, x: PadicElement) -> PadicElement:
    """Horner evaluation at ``x`` with ``v(x) > 0``.

    For a genuine (non-polynomial) series the omitted tail is bounded by
    ``v(tail) >= (K + 1) v(x)``, which needs integral coefficients.
    """
    v = x.valuation()
    if not v.is_exact or v.value <= 0:
        raise OutsideConvergenceCertificate("evaluation needs a certified v(x) > 0")
    top = g._top()
    acc = g.coeffs[top]
    for i in range(top - 1, -1, -1):
        acc = acc * x + g.coeffs[i]
    if g.degree is None:
        if not g.is_integral():
            raise OutsideConvergenceCertificate("tail bound needs coefficients in O_p")
        cap = g.field.e * (g.K + 1) * v.value
        if cap < acc.N:
            acc = acc.with_precision(int(cap))
    return acc


def evaluate_polynomial(g: PowerSeries, x: PadicElement) -> PadicElement:
    """Exact evaluation of a polynomial at any ``x``."""
    if g.degree is None:
        raise HypothesisViolated("exact evaluation needs a polynomial")
    acc = g.coeffs[g.degree]
    for i in range(g.degree - 1, -1, -1):
        acc = acc * x + g.coeffs[i]
    return acc


# --------------------------------------------------------------------------
# Parsing maps


def parse_series(
    text: str,
    field: Field,
    K: int,
    bindings: Mapping[str, PadicElement] | None = None,
    precision: int | None = None,
) -> PowerSeries:
    """Evaluate a map expression in the free variable ``x``.

    ``bindings`` typically supplies ``lambda``.  Coefficients are capped at
    the field's default precision (or ``precision``).
    """
    N = field.default_precision if precision is None else precision
    env: dict = {
        "p": Fraction(field.p),
        "pi": field.uniformizer(N),
        "x": PowerSeries.variable(field, K),
    }
    if bindings:
        for name, value in bindings.items():
            if isinstance(value, PadicElement):
                field.check(value)
            env[name] = value
    tree = expr.parse(text)
    try:
        value = expr.evaluate(tree, env, _big_o(field))
    except ZeroDivisionError as exc:
        raise DivisionByUncertifiedZero(str(exc)) from None
    if not isinstance(value, PowerSeries):
        value = PowerSeries.constant(field, value, K)
    if not _has_big_o(tree):
        coeffs = [c.with_precision(N) if c.N > N else c for c in value.coeffs]
        value = PowerSeries(field, coeffs, value.degree)
    return value
