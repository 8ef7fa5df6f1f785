"""Invariants of an indifferent multiplier and the valuations of ``1 - lambda^n``.

For ``|lambda| = 1`` with residue of order ``m`` the quantities

* ``nu1m = v(1 - lambda^m)``
* ``s``: the index of the sphere around 1 that holds ``lambda^m``
* ``t`` and ``nuG = v(gamma_0 - lambda^m)`` for the nearest ``p^s``-th root
  of unity ``gamma_0``

determine ``v(1 - lambda^n)`` for every ``n`` and hence every radius formula.
All results are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .errors import (
    HypothesisViolated,
    IndistinguishableFromRootOfUnity,
    PrecisionExhausted,
    UnsupportedResidueOrder,
)
from .padic import INFINITE, PadicElement, Valuation, format_rational, vp_int


@dataclass(frozen=True)
class MultiplierInvariants:
    p: int
    m: int
    s: int
    t: int
    nu1m: Fraction
    nuG: Fraction

    def __post_init__(self):
        object.__setattr__(self, "nu1m", Fraction(self.nu1m))
        object.__setattr__(self, "nuG", Fraction(self.nuG))

    def violations(self) -> list[str]:
        """Structural constraints that fail (empty when consistent)."""
        p, m, s, t, a, g = self.p, self.m, self.s, self.t, self.nu1m, self.nuG
        out = []
        if m < 1 or m % p == 0:
            out.append("m must be positive and prime to p")
        if not 0 <= t <= s:
            out.append("t must lie in [0, s]")
        if s == 0:
            if not a > Fraction(1, p - 1):
                out.append("s = 0 needs nu1m > 1/(p-1)")
        elif not nu_R(s, p).value >= a > nu_R(s + 1, p).value:
            out.append("nu1m is not in the window of sphere s")
        if g < a:
            out.append("nuG must be >= nu1m")
        if (g == a) != (t == s):
            out.append("nuG = nu1m exactly when t = s")
        if t < s and s >= 1 and a != nu_R(s, p).value:
            out.append("t < s forces lambda^m onto the sphere of radius R(s)")
        if t >= 1:
            x = p**t * g
            if not Fraction(1, p - 1) < x <= Fraction(p, p - 1):
                out.append("p^t nuG must lie in (1/(p-1), p/(p-1)]")
        elif t < s and not g > Fraction(1, p - 1):
            out.append("t = 0 < s needs nuG > 1/(p-1)")
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "s": self.s,
            "t": self.t,
            "nu_1m": format_rational(self.nu1m),
            "nu_gamma": format_rational(self.nuG),
        }

    @classmethod
    def from_dict(cls, d: dict) -> MultiplierInvariants:
        return cls(d["p"], d["m"], d["s"], d["t"], Fraction(d["nu_1m"]), Fraction(d["nu_gamma"]))


def nu_R(s: int, p: int) -> Valuation:
    """Valuation of the radius ``R(s)`` of the sphere of primitive ``p^s``-th roots of unity."""
    if s < 0:
        raise ValueError("s must be non-negative")
    if s == 0:
        return INFINITE
    return Valuation.of(Fraction(1, p ** (s - 1) * (p - 1)))


def residue_order(r: int, p: int) -> int:
    """Multiplicative order of ``r`` modulo ``p``."""
    r %= p
    if r == 0:
        raise HypothesisViolated("residue is zero; |lambda| < 1")
    k, x = 1, r
    while x != 1:
        x = x * r % p
        k += 1
    return k


def sphere_index(nu1m: Fraction, p: int) -> int:
    """The ``s`` with ``v(R(s)) >= nu1m > v(R(s+1))``, or 0 when ``nu1m > 1/(p-1)``."""
    if nu1m <= 0:
        raise HypothesisViolated("v(1 - lambda^m) must be positive")
    if nu1m > Fraction(1, p - 1):
        return 0
    s = 1
    while not nu1m > nu_R(s + 1, p).value:
        s += 1
    return s


def recover_t(D: Fraction, s: int, p: int) -> tuple[int, Fraction]:
    """Split ``D = (s - t) + p^t nuG`` using the windows on ``p^t nuG``."""
    lo, hi = Fraction(1, p - 1), Fraction(p, p - 1)
    for t in range(s, 0, -1):
        x = D - (s - t)
        if lo < x <= hi:
            return t, x / p**t
    g = D - s
    if g > lo:
        return 0, g
    raise HypothesisViolated(f"v(1 - lambda^(m p^s)) = {D} admits no decomposition")


def _certified(x: PadicElement, what: str) -> Fraction:
    v = x.valuation()
    if not v.is_exact:
        raise IndistinguishableFromRootOfUnity(f"{what} vanishes to working precision")
    return v.value


def compute_invariants(lam: PadicElement) -> MultiplierInvariants:
    """``(m, s, t, nu1m, nuG)`` of a multiplier with ``|lambda| = 1``.

    The root-of-unity guard requires ``lambda^(m p^j) != 1`` to working
    precision for ``j = 0 .. s + 1``.
    """
    F = lam.field
    p = F.p
    v = lam.valuation()
    if not v.is_exact:
        raise PrecisionExhausted("valuation of lambda is not certified")
    if v.value != 0:
        raise HypothesisViolated("multiplier must satisfy |lambda| = 1")
    m = residue_order(lam.residue(), p)
    if (p - 1) % m:
        raise UnsupportedResidueOrder(f"residue order {m} does not divide p - 1")
    mu = lam**m
    nu1m = _certified(1 - mu, "1 - lambda^m")
    s = sphere_index(nu1m, p)
    powers = [mu]
    for _ in range(s + 1):
        powers.append(powers[-1] ** p)
    for j, x in enumerate(powers):
        _certified(1 - x, f"1 - lambda^(m p^{j})")
    if s == 0:
        return MultiplierInvariants(p, m, 0, 0, nu1m, nu1m)
    D = (1 - powers[s]).valuation().value
    t, nuG = recover_t(D, s, p)
    if t == s:
        nuG = nu1m
    return MultiplierInvariants(p, m, s, t, nu1m, nuG)


def nu_one_minus_lambda_pow(inv: MultiplierInvariants, n: int) -> Fraction:
    """``v(1 - lambda^n)`` for ``n >= 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % inv.m:
        return Fraction(0)
    j = vp_int(n, inv.p)
    if j < inv.s:
        return inv.p**j * inv.nu1m
    return -inv.t + j + inv.p**inv.t * inv.nuG


def nu_factorial(n: int, p: int) -> Fraction:
    """``v(n!) = (n - S_n)/(p - 1)`` with ``S_n`` the base-``p`` digit sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    digits, x = 0, n
    while x:
        digits += x % p
        x //= p
    return Fraction(n - digits, p - 1)


def delta(k: int, z: int) -> Fraction:
    """Fractional part of ``(k - 1)/z``."""
    q = Fraction(k - 1, z)
    return q - floor(q)


def sigma(inv: MultiplierInvariants, k: int) -> Fraction:
    """Exponent of ``|1 - lambda^m|`` in ``prod_{n<k} |1 - lambda^n|`` (closed form, ``s >= 1``)."""
    p, m, s = inv.p, inv.m, inv.s
    if s < 1:
        raise HypothesisViolated("sigma is defined for s >= 1")
    total = s * Fraction(k - 1, m) * Fraction(p - 1, p) + delta(k, m * p**s) * p ** (s - 1) - delta(k, m)
    for j in range(1, s):
        total -= delta(k, m * p**j) * (p**j - p ** (j - 1))
    return total


def nu_product(inv: MultiplierInvariants, k: int) -> Fraction:
    """``sum_{n=1}^{k-1} v(1 - lambda^n)`` in closed form."""
    if k < 1:
        raise ValueError("k must be positive")
    p, m, s, t = inv.p, inv.m, inv.s, inv.t
    if s == 0:
        N = (k - 1) // m
        return nu_factorial(N, p) + N * inv.nu1m
    M = (k - 1) // (m * p**s)
    return nu_factorial(M, p) + (s - t) * M + sigma(inv, k) * inv.nu1m + p**t * M * inv.nuG
