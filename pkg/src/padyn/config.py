"""Job configuration: a TOML document describing a field, a multiplier and a map.

Example::

    [field]
    p = 3
    kind = "eisenstein"      # "trivial" | "eisenstein" | "cyclotomic"
    relation = "pi^4 = p"

    [precision]
    pi_digits = 256

    [multiplier]
    lambda = "1+pi"

    [map]
    series = "lambda*x + x^2"

    [job]
    command = "analyze"
    K = 50
    nmax = 2
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field as dc_field
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, PadynError
from .padic import Field, PadicElement, parse_element, parse_relation, vp_int
from .series import PowerSeries, parse_series

DEFAULT_MAP = "lambda*x + x^2"
COMMANDS = ("analyze", "conjugacy", "newton", "verify")
_CYCLO = re.compile(r"^\s*cyclotomic\s+(\d+)\s*$")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    kind: str = "trivial"
    degree: int | None = None
    relation: str | None = None
    coefficients: tuple[int, ...] | None = None
    order: int | None = None

    def build(self, precision: int | None = None) -> Field:
        p, kind = self.p, self.kind
        if kind == "trivial":
            F = Field.qp(p, precision or 64)
        elif kind == "eisenstein":
            if self.coefficients is not None:
                coeffs = self.coefficients
            elif self.relation is not None:
                coeffs = parse_relation(self.relation, p)
            elif self.degree is not None:
                coeffs = (-p,) + (0,) * (self.degree - 1)
            else:
                raise ConfigError("[field] eisenstein needs relation, coefficients or degree")
            F = Field.eisenstein(p, coeffs, precision)
            if self.relation is not None:
                F = Field(F.p, F.poly, F.default_precision, f"Q_{p}(pi), {self.relation}")
        elif kind == "cyclotomic":
            order = self.order
            if order is None and self.relation:
                m = _CYCLO.match(self.relation)
                if m:
                    order = int(m.group(1))
            if order is None:
                raise ConfigError("[field] cyclotomic needs order (a power of p)")
            s = vp_int(order, p)
            if order < p or p**s != order:
                raise ConfigError(f"[field] order {order} is not a positive power of {p}")
            F = Field.cyclotomic(p, s, precision)
        else:
            raise ConfigError(f"[field] unknown kind {kind!r}")
        if self.degree is not None and self.degree != F.e:
            raise ConfigError(f"[field] degree {self.degree} does not match the defining polynomial (degree {F.e})")
        return F

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"p": self.p, "kind": self.kind}
        for key in ("degree", "relation", "order"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.coefficients is not None:
            out["coefficients"] = list(self.coefficients)
        return out


@dataclass(frozen=True)
class JobConfig:
    field: FieldSpec
    lam: str
    map: str = DEFAULT_MAP
    precision: int | None = None
    command: str | None = None
    K: int = 50
    nmax: int = 2
    sweep: tuple[str, ...] = ()
    extra: dict = dc_field(default_factory=dict, compare=False)

    def build_field(self, precision: int | None = None) -> Field:
        return self.field.build(precision or self.precision)

    def build_lambda(self, F: Field, text: str | None = None) -> PadicElement:
        text = self.lam if text is None else text
        try:
            return parse_element(text, F)
        except PadynError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise type(exc)(f"[multiplier] lambda: {exc}") from None

    def build_map(self, F: Field, lam: PadicElement, K: int) -> PowerSeries:
        return parse_series(self.map, F, K, {"lambda": lam})

    def echo(self) -> dict:
        out = {"field": self.field.to_dict(), "lambda": self.lam, "map": self.map}
        if self.precision is not None:
            out["pi_digits"] = self.precision
        return out

    def with_lambda(self, text: str) -> JobConfig:
        return JobConfig(self.field, text, self.map, self.precision, self.command, self.K, self.nmax, ())


def _require(table: dict, key: str, section: str, kind: type | tuple):
    if key not in table:
        raise ConfigError(f"[{section}] missing required key {key!r}")
    value = table[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(f"[{section}] {key} has the wrong type ({type(value).__name__})")
    return value


def _optional(table: dict, key: str, section: str, kind: type | tuple, default=None):
    if key not in table:
        return default
    return _require(table, key, section, kind)


def _coefficient(x, p: int, section: str) -> int:
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, str):
        text = x.strip()
        sign = -1 if text.startswith("-") else 1
        digits = text.lstrip("+-")
        if digits and all(c.isdigit() and int(c) < p for c in digits):
            return sign * int(digits, p)
    raise ConfigError(f"[{section}] coefficient {x!r} is not an integer or base-{p} digit string")


def parse_config(text: str) -> JobConfig:
    """Parse and validate a configuration document."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None
    known = {"field", "precision", "multiplier", "map", "job"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    ft = doc.get("field")
    if not isinstance(ft, dict):
        raise ConfigError("missing [field] section")
    p = _require(ft, "p", "field", int)
    kind = _optional(ft, "kind", "field", str, "trivial")
    coeffs = _optional(ft, "coefficients", "field", list)
    spec = FieldSpec(
        p=p,
        kind=kind,
        degree=_optional(ft, "degree", "field", int),
        relation=_optional(ft, "relation", "field", str),
        coefficients=None if coeffs is None else tuple(_coefficient(c, p, "field") for c in coeffs),
        order=_optional(ft, "order", "field", int),
    )
    precision = _optional(doc.get("precision", {}), "pi_digits", "precision", int)
    if precision is not None and precision < 1:
        raise ConfigError("[precision] pi_digits must be positive")
    mt = doc.get("multiplier", {})
    lam = _optional(mt, "lambda", "multiplier", str)
    job = doc.get("job", {})
    command = _optional(job, "command", "job", str)
    if command is not None and command not in COMMANDS:
        raise ConfigError(f"[job] unknown command {command!r}")
    if lam is None and command != "verify":
        raise ConfigError("[multiplier] missing required key 'lambda'")
    series = _optional(doc.get("map", {}), "series", "map", str, DEFAULT_MAP)
    K = _optional(job, "K", "job", int, 50)
    nmax = _optional(job, "nmax", "job", int, 2)
    if K < 1:
        raise ConfigError("[job] K must be >= 1")
    if nmax < 0:
        raise ConfigError("[job] nmax must be >= 0")
    sweep = _optional(job, "sweep", "job", list, [])
    if not all(isinstance(s, str) for s in sweep):
        raise ConfigError("[job] sweep must be a list of lambda expressions")
    cfg = JobConfig(spec, lam or "", series, precision, command, K, nmax, tuple(sweep))
    # validate eagerly so that errors surface at load time
    cfg.build_field()
    return cfg


def load_config(path: str) -> JobConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
