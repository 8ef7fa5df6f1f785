"""Exact arithmetic in Q_p and totally ramified extensions Q_p(pi).

An extension is given by a monic Eisenstein polynomial E(pi) of degree e.
Elements are stored as ``p^-d * (c_0 + c_1 pi + ... + c_{e-1} pi^{e-1})``
with integer ``c_i`` and an absolute precision ``N`` counted in powers of
pi: the element is known modulo ``pi^N``.  Valuations are normalized so
that ``v(p) = 1``, hence ``v(pi) = 1/e``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from . import expr
from .errors import (
    ConfigError,
    DivisionByUncertifiedZero,
    FieldMismatch,
    ParseError,
    PrecisionExhausted,
)

DEFAULT_PRECISION = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(q: Fraction | int, p: int) -> int:
    q = Fraction(q)
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# --------------------------------------------------------------------------
# Valuations


@dataclass(frozen=True)
class Valuation:
    """Exact rational, infinite (``value is None``), or a lower bound."""

    value: Fraction | None
    exact: bool = True

    @classmethod
    def of(cls, q) -> Valuation:
        return cls(Fraction(q), True)

    @classmethod
    def at_least(cls, q) -> Valuation:
        return cls(Fraction(q), False)

    @property
    def kind(self) -> str:
        if self.value is None:
            return "inf"
        return "exact" if self.exact else "atleast"

    @property
    def is_exact(self) -> bool:
        return self.value is not None and self.exact

    def certified(self) -> Fraction:
        """The exact value, or :class:`PrecisionExhausted`."""
        if not self.is_exact:
            raise PrecisionExhausted(f"valuation not certified ({self})")
        return self.value

    def lower_bound(self) -> Fraction | None:
        return self.value

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        s = format_rational(self.value)
        return s if self.exact else ">=" + s

    @classmethod
    def parse(cls, text: str) -> Valuation:
        text = text.strip()
        if text == "inf":
            return INFINITE
        if text.startswith(">="):
            return cls.at_least(Fraction(text[2:]))
        return cls.of(Fraction(text))


INFINITE = Valuation(None, True)


def format_rational(q) -> str:
    """``"a/b"`` with an explicit denominator, ``"inf"`` for ``None``."""
    if q is None:
        return "inf"
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# Integer polynomials (used to read defining relations)


class _IntPoly:
    __slots__ = ("c",)

    def __init__(self, c):
        c = [Fraction(x) for x in c]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    @staticmethod
    def _lift(x):
        return x if isinstance(x, _IntPoly) else _IntPoly([x])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.c), len(other.c))
        a = self.c + [Fraction(0)] * (n - len(self.c))
        b = other.c + [Fraction(0)] * (n - len(other.c))
        return _IntPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return _IntPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.c or not other.c:
            return _IntPoly([])
        r = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                r[i + j] += a * b
        return _IntPoly(r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _IntPoly):
            if len(other.c) != 1:
                raise ConfigError("relation may only divide by constants")
            other = other.c[0]
        return _IntPoly([x / other for x in self.c])

    def __pow__(self, n: int):
        r = _IntPoly([1])
        for _ in range(n):
            r = r * self
        return r


def parse_relation(text: str, p: int) -> tuple[int, ...]:
    """Read ``"pi^4 = p"`` or ``"pi^2 + 3*pi + 3"`` as a monic polynomial.

    Returns the coefficients ``a_0 .. a_{e-1}`` (the leading 1 is implied).
    """
    if "=" in text:
        lhs, rhs = text.split("=", 1)
    else:
        lhs, rhs = text, "0"
    env = {"pi": _IntPoly([0, 1]), "p": Fraction(p)}
    try:
        poly = _IntPoly._lift(expr.evaluate(expr.parse(lhs), env)) - _IntPoly._lift(
            expr.evaluate(expr.parse(rhs), env)
        )
    except ParseError as exc:
        raise ConfigError(f"bad relation {text!r}: {exc}") from None
    c = poly.c
    if len(c) < 2:
        raise ConfigError(f"relation {text!r} has degree < 1 in pi")
    lead = c[-1]
    if lead not in (1, -1):
        raise ConfigError(f"relation {text!r} is not monic in pi")
    c = [x / lead for x in c[:-1]]
    if any(x.denominator != 1 for x in c):
        raise ConfigError(f"relation {text!r} has non-integral coefficients")
    return tuple(int(x) for x in c)


def cyclotomic_eisenstein(p: int, s: int) -> tuple[int, ...]:
    """Coefficients of Phi_{p^s}(1+x), without the leading 1."""
    if s < 1:
        raise ConfigError("cyclotomic preset needs s >= 1")
    step = p ** (s - 1)
    degree = step * (p - 1)
    coeffs = [0] * (degree + 1)
    for j in range(p):
        n = j * step
        for i in range(n + 1):
            coeffs[i] += math.comb(n, i)
    assert coeffs[-1] == 1
    return tuple(coeffs[:-1])


# --------------------------------------------------------------------------
# Fields


@dataclass(frozen=True)
class Field:
    """Q_p(pi) with pi a root of the monic Eisenstein polynomial
    ``pi^e + poly[e-1] pi^(e-1) + ... + poly[0]``.

    ``default_precision`` (in pi-digits) and ``label`` do not take part in
    equality: fields differing only there are the same field.
    """

    p: int
    poly: tuple[int, ...]
    default_precision: int = field(default=DEFAULT_PRECISION, compare=False)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        p, poly = self.p, self.poly
        if not is_prime(p):
            raise ConfigError(f"{p} is not prime")
        if len(poly) < 1:
            raise ConfigError("defining polynomial must have degree >= 1")
        if poly[0] % p != 0 or poly[0] % (p * p) == 0:
            raise ConfigError("not Eisenstein: constant term must have p-valuation exactly 1")
        if any(a % p for a in poly[1:]):
            raise ConfigError("not Eisenstein: coefficients must be divisible by p")
        if self.default_precision < 1:
            raise ConfigError("precision must be positive")

    # constructors

    @classmethod
    def qp(cls, p: int, precision: int = DEFAULT_PRECISION) -> Field:
        return cls(p, (-p,), precision, f"Q_{p}")

    @classmethod
    def pure(cls, p: int, e: int, precision: int | None = None) -> Field:
        """Q_p(pi) with pi^e = p."""
        if e < 1:
            raise ConfigError("degree must be >= 1")
        if precision is None:
            precision = DEFAULT_PRECISION * e
        label = f"Q_{p}" if e == 1 else f"Q_{p}(pi), pi^{e} = {p}"
        return cls(p, (-p,) + (0,) * (e - 1), precision, label)

    @classmethod
    def eisenstein(cls, p: int, coeffs, precision: int | None = None) -> Field:
        coeffs = tuple(int(a) for a in coeffs)
        if precision is None:
            precision = DEFAULT_PRECISION * max(1, len(coeffs))
        return cls(p, coeffs, precision, f"Q_{p}(pi), Eisenstein {coeffs}")

    @classmethod
    def cyclotomic(cls, p: int, s: int, precision: int | None = None) -> Field:
        """Q_p(zeta) with zeta a primitive p^s-th root of unity, pi = zeta - 1."""
        coeffs = cyclotomic_eisenstein(p, s)
        if precision is None:
            precision = DEFAULT_PRECISION * len(coeffs)
        return cls(p, coeffs, precision, f"Q_{p}(zeta_{p ** s}), pi = zeta - 1")

    def with_precision(self, precision: int) -> Field:
        return replace(self, default_precision=precision)

    # structure

    @property
    def e(self) -> int:
        return len(self.poly)

    @property
    def tail(self) -> tuple[int, ...]:
        """``pi^e = sum(tail[j] * pi^j)``."""
        return _tail(self.poly)

    def ppow(self, k: int) -> int:
        return _ppow(self.p, k)

    # element factories

    def _prec(self, precision):
        return self.default_precision if precision is None else precision

    def zero(self, precision: int | None = None) -> PadicElement:
        return PadicElement._make(self, [0] * self.e, 0, self._prec(precision))

    def one(self, precision: int | None = None) -> PadicElement:
        return self.from_rational(1, precision)

    def uniformizer(self, precision: int | None = None) -> PadicElement:
        if self.e == 1:
            return self.from_rational(self.p, precision)
        c = [0] * self.e
        c[1] = 1
        return PadicElement._make(self, c, 0, self._prec(precision))

    def from_rational(self, q, precision: int | None = None) -> PadicElement:
        N = self._prec(precision)
        q = Fraction(q)
        if q == 0:
            return self.zero(N)
        v = vp(q, self.p)
        unit = q / Fraction(self.p) ** v
        M = N + self.e * max(0, -v)
        mod = self.ppow(_ceil_div(max(M, 0), self.e) + 1)
        u = unit.numerator * pow(unit.denominator, -1, mod) % mod
        if v >= 0:
            return PadicElement._make(self, [u * self.ppow(v)] + [0] * (self.e - 1), 0, N)
        return PadicElement._make(self, [u] + [0] * (self.e - 1), -v, N)

    def from_coeffs(self, coeffs, precision: int | None = None, shift: int = 0) -> PadicElement:
        """``p^-shift * sum(coeffs[i] * pi^i)``."""
        c = [int(x) for x in coeffs]
        if len(c) > self.e:
            raise ValueError("too many coefficients")
        c += [0] * (self.e - len(c))
        return PadicElement._make(self, c, shift, self._prec(precision))

    def element(self, x, precision: int | None = None) -> PadicElement:
        if isinstance(x, PadicElement):
            self.check(x)
            return x
        if isinstance(x, str):
            return parse_element(x, self, precision=precision)
        return self.from_rational(x, precision)

    def check(self, x: PadicElement):
        if x.field is not self and x.field != self:
            raise FieldMismatch("elements live in different fields")

    def describe(self) -> str:
        return self.label or f"Q_{self.p}(pi), Eisenstein {self.poly}"


@lru_cache(maxsize=None)
def _tail(poly: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-a for a in poly)


@lru_cache(maxsize=4096)
def _ppow(p: int, k: int) -> int:
    return p ** k


# --------------------------------------------------------------------------
# Elements


def _normalize(F: Field, c: list[int], d: int, N: int):
    e, p = F.e, F.p
    M = N + e * d
    if M < 0:
        shift = _ceil_div(-M, e)
        scale = _ppow(p, shift)
        c = [x * scale for x in c]
        d += shift
        M += e * shift
    out = []
    for i, x in enumerate(c):
        k = _ceil_div(M - i, e)
        out.append(x % _ppow(p, k) if k > 0 else 0)
    while d > 0 and M >= e and all(x % p == 0 for x in out):
        out = [x // p for x in out]
        d -= 1
        M -= e
    return tuple(out), d


class PadicElement:
    """An element of a :class:`Field` known modulo ``pi^N``.

    Instances are immutable.  ``==`` compares representations (same digits
    and same precision); use :meth:`equals` for p-adic equality up to the
    common precision.
    """

    __slots__ = ("field", "c", "d", "N", "_w")

    def __init__(self, *args, **kwargs):
        raise TypeError("use Field factories or parse_element to build elements")

    @classmethod
    def _make(cls, F: Field, c, d: int, N: int) -> PadicElement:
        self = object.__new__(cls)
        self.field = F
        self.c, self.d = _normalize(F, list(c), d, N)
        self.N = N
        self._w = None
        return self

    # ---- precision bookkeeping

    @property
    def numerator_precision(self) -> int:
        return self.N + self.field.e * self.d

    def _wnum(self) -> int:
        """pi-adic valuation of the numerator, capped at its precision."""
        if self._w is None:
            F = self.field
            e, p = F.e, F.p
            M = self.numerator_precision
            w = M
            for i, x in enumerate(self.c):
                if x:
                    cand = e * vp_int(x, p) + i
                    if cand < w:
                        w = cand
            self._w = w
        return self._w

    def valuation(self) -> Valuation:
        w = self._wnum()
        e = self.field.e
        if w >= self.numerator_precision:
            return Valuation.at_least(Fraction(self.N, e))
        return Valuation.of(Fraction(w - e * self.d, e))

    @property
    def precision(self) -> int:
        return self.N

    def is_zero(self) -> bool:
        """True when no nonzero digit is known."""
        return self._wnum() >= self.numerator_precision

    def equals(self, other) -> bool:
        """p-adic equality to the smaller of the two precisions."""
        return (self - other).is_zero()

    def with_precision(self, N: int) -> PadicElement:
        """Forget digits beyond ``pi^N`` (``N`` may not exceed the current precision)."""
        if N > self.N:
            raise PrecisionExhausted(f"cannot raise precision from {self.N} to {N}")
        return PadicElement._make(self.field, self.c, self.d, N)

    def lift(self, field: Field) -> PadicElement:
        """Same digits, viewed in an equal field with a different default precision."""
        if field != self.field:
            raise FieldMismatch("lift needs an equal field")
        return PadicElement._make(field, self.c, self.d, self.N)

    def residue(self) -> int:
        """Image in the residue field F_p (requires v >= 0)."""
        v = self.valuation()
        if v.value is not None and v.value < 0 and v.exact:
            raise ValueError("residue of an element with negative valuation")
        if self.d > 0:
            if v.is_exact and v.value > 0:
                return 0
            raise PrecisionExhausted("residue not determined at this precision")
        if self.numerator_precision < 1:
            raise PrecisionExhausted("residue not determined at this precision")
        return self.c[0] % self.field.p

    # ---- arithmetic

    def _coerce(self, other):
        if isinstance(other, PadicElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("elements live in different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return None
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            if other == 0:
                return self
            o = self.field.from_rational(other, self.N)
        F = self.field
        d = max(self.d, o.d)
        if self.d == o.d:
            c = [a + b for a, b in zip(self.c, o.c)]
        else:
            sa = _ppow(F.p, d - self.d)
            sb = _ppow(F.p, d - o.d)
            c = [a * sa + b * sb for a, b in zip(self.c, o.c)]
        return PadicElement._make(F, c, d, min(self.N, o.N))

    __radd__ = __add__

    def __neg__(self):
        return PadicElement._make(self.field, [-a for a in self.c], self.d, self.N)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return self._scale(Fraction(other))
        F = self.field
        e = F.e
        a, b = self.c, o.c
        if e == 1:
            c = [a[0] * b[0]]
        else:
            r = [0] * (2 * e - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            r[i + j] += x * y
            tail = F.tail
            for k in range(2 * e - 2, e - 1, -1):
                rk = r[k]
                if rk:
                    base = k - e
                    for j, t in enumerate(tail):
                        if t:
                            r[base + j] += rk * t
            c = r[:e]
        M = min(self.numerator_precision + o._wnum(), o.numerator_precision + self._wnum())
        d = self.d + o.d
        return PadicElement._make(F, c, d, M - e * d)

    __rmul__ = __mul__

    def _scale(self, q: Fraction) -> PadicElement:
        F = self.field
        if q == 0:
            return F.zero(self.N)
        v = vp(q, F.p)
        unit = q / Fraction(F.p) ** v
        M = self.numerator_precision
        mod = _ppow(F.p, _ceil_div(max(M, 0), F.e) + 1)
        u = unit.numerator * pow(unit.denominator, -1, mod)
        c = [x * u for x in self.c]
        if v >= 0:
            s = _ppow(F.p, v)
            return PadicElement._make(F, [x * s for x in c], self.d, self.N + F.e * v)
        return PadicElement._make(F, c, self.d - v, self.N + F.e * v)

    def inverse(self) -> PadicElement:
        F = self.field
        e, p = F.e, F.p
        w = self._wnum()
        M = self.numerator_precision
        if w >= M:
            raise DivisionByUncertifiedZero(
                "cannot invert an element with no certified nonzero digit",
                suggested_precision=2 * max(self.N, 1),
            )
        N_res = M - 2 * w + e * self.d
        if e == 1:
            k = w
            unit = self.c[0] // _ppow(p, k)
            z_rat = None
        else:
            z_rat = _solve_inverse(F, self.c)
            k = max(vp_int(y.denominator, p) if y else 0 for y in z_rat)
            unit = None
        d_res = k - self.d
        M_res = N_res + e * d_res
        mod = _ppow(p, _ceil_div(max(M_res, 0), e) + 1)
        if e == 1:
            z = [pow(unit, -1, mod)]
        else:
            pk = Fraction(_ppow(p, k))
            z = []
            for y in z_rat:
                y = y * pk
                z.append(y.numerator * pow(y.denominator, -1, mod) % mod)
        if d_res < 0:
            s = _ppow(p, -d_res)
            z = [x * s for x in z]
            d_res = 0
        return PadicElement._make(F, z, d_res, N_res)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            if other == 0:
                raise DivisionByUncertifiedZero("division by exact zero")
            return self._scale(1 / Fraction(other))
        return self * o.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.inverse()._scale(Fraction(other))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            return self.field.one(self.N)
        return result

    # ---- comparison and printing

    def __eq__(self, other):
        if not isinstance(other, PadicElement):
            return NotImplemented
        return self.field == other.field and (self.c, self.d, self.N) == (other.c, other.d, other.N)

    def __hash__(self):
        return hash((self.field, self.c, self.d, self.N))

    def to_expr(self) -> str:
        """An expression that :func:`parse_element` maps back to this element."""
        terms = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            if i == 0:
                terms.append(str(x))
            elif i == 1:
                terms.append("pi" if x == 1 else f"{x}*pi")
            else:
                terms.append(f"pi^{i}" if x == 1 else f"{x}*pi^{i}")
        terms.append(f"O(pi^{self.numerator_precision})")
        body = " + ".join(terms)
        if self.d:
            return f"({body})/p^{self.d}"
        return body

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"PadicElement({self.to_expr()!r})"


def dot(pairs) -> PadicElement | None:
    """``sum(a * b for a, b in pairs)`` with a single normalization.

    Precision is tracked exactly as for repeated ``*`` and ``+``.  Returns
    ``None`` for an empty iterable.
    """
    F = None
    e = p = 0
    tail = ()
    acc: list[int] = []
    D = 0
    N_out = None
    for a, b in pairs:
        if F is None:
            F = a.field
            e, p = F.e, F.p
            tail = F.tail
            acc = [0] * (2 * e - 1)
        if a.field is not F and a.field != F or b.field is not F and b.field != F:
            raise FieldMismatch("elements live in different fields")
        d = a.d + b.d
        M = min(a.numerator_precision + b._wnum(), b.numerator_precision + a._wnum())
        N = M - e * d
        if N_out is None or N < N_out:
            N_out = N
        if d > D:
            s = _ppow(p, d - D)
            acc = [x * s for x in acc]
            D = d
        scale = _ppow(p, D - d) if d < D else 1
        ac, bc = a.c, b.c
        if e == 1:
            acc[0] += ac[0] * bc[0] * scale
            continue
        for i, x in enumerate(ac):
            if x:
                if scale != 1:
                    x *= scale
                for j, y in enumerate(bc):
                    if y:
                        acc[i + j] += x * y
    if F is None:
        return None
    if e > 1:
        for k in range(2 * e - 2, e - 1, -1):
            rk = acc[k]
            if rk:
                base = k - e
                for j, t in enumerate(tail):
                    if t:
                        acc[base + j] += rk * t
    return PadicElement._make(F, acc[:e], D, N_out)


def _solve_inverse(F: Field, c) -> list[Fraction]:
    """Rational coordinates of ``1/u`` where ``u = sum c_i pi^i`` (exact)."""
    e = F.e
    tail = F.tail
    cols = [list(c)]
    for _ in range(e - 1):
        prev = cols[-1]
        top = prev[-1]
        nxt = [0] + prev[:-1]
        if top:
            nxt = [x + top * t for x, t in zip(nxt, tail)]
        cols.append(nxt)
    # augmented matrix rows: A[i][j] = cols[j][i]
    rows = [[Fraction(cols[j][i]) for j in range(e)] + [Fraction(1 if i == 0 else 0)] for i in range(e)]
    for col in range(e):
        piv = next((r for r in range(col, e) if rows[r][col] != 0), None)
        if piv is None:
            raise DivisionByUncertifiedZero("singular multiplication matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(e):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][e] for i in range(e)]


# --------------------------------------------------------------------------
# Parsing


def _big_o(F: Field):
    def make(unit: str, exponent: int):
        N = exponent if unit == "pi" else exponent * F.e
        return F.zero(N)

    return make


def parse_element(
    text: str,
    field: Field,
    bindings: Mapping[str, PadicElement] | None = None,
    precision: int | None = None,
) -> PadicElement:
    """Evaluate an element expression in ``field``.

    ``pi`` is the uniformizer and ``p`` the prime; other names come from
    ``bindings``.  Without an explicit ``O(...)`` term the result is capped at
    the requested (default) precision.
    """
    N = field.default_precision if precision is None else precision
    env: dict = {"p": Fraction(field.p), "pi": field.uniformizer(N)}
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
    if not isinstance(value, PadicElement):
        return field.from_rational(value, N)
    if not _has_big_o(tree) and value.N > N:
        value = value.with_precision(N)
    return value


def _has_big_o(node) -> bool:
    if isinstance(node, expr.BigO):
        return True
    if isinstance(node, expr.BinOp):
        return _has_big_o(node.left) or _has_big_o(node.right)
    if isinstance(node, expr.Neg):
        return _has_big_o(node.operand)
    if isinstance(node, expr.Pow):
        return _has_big_o(node.base)
    return False


# functional aliases matching the operation names used elsewhere


def add(x: PadicElement, y: PadicElement) -> PadicElement:
    return x + y


def mul(x: PadicElement, y: PadicElement) -> PadicElement:
    return x * y


def invert(x: PadicElement) -> PadicElement:
    return x.inverse()


def power(x: PadicElement, n: int) -> PadicElement:
    if n < 0:
        raise ValueError("exponent must be non-negative")
    return x ** n


def valuation(x: PadicElement) -> Valuation:
    return x.valuation()
