"""Report documents and their JSON, CSV and SVG renderings.

Every rational in a report is a ``"numerator/denominator"`` string so that
nothing is rounded on the way out.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from .padic import format_rational
from .series import NewtonPolygon

TOOL_VERSION = "0.1.0"


@dataclass
class ReportDocument:
    command: str
    version: str = TOOL_VERSION
    input: dict = field(default_factory=dict)
    invariants: dict | None = None
    radii: dict | None = None
    coefficients: dict | None = None
    spectra: dict | None = None
    checks: list = field(default_factory=list)
    sweep: list | None = None
    approximate: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: v for k, v in d.items() if v is not None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> ReportDocument:
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        return cls.from_dict(json.loads(text))

    @property
    def passed(self) -> bool:
        """All checks in this document and its sweep members passed."""
        ok = all(c.get("pass") is not False for c in self.checks)
        for sub in self.sweep or []:
            ok = ok and all(c.get("pass") is not False for c in sub.get("checks", []))
        return ok


def rat(q) -> str:
    return format_rational(q)


def approx_radius(p: int, nu) -> str:
    """``p^(-nu)`` as an approximate decimal, for readability only."""
    return f"~{p ** -float(Fraction(nu)):.6g}"


# --------------------------------------------------------------------------
# CSV


def spectrum_csv(entries) -> str:
    """Rows ``period,nu,count``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["period", "nu", "count"])
    for period, nu, count in entries:
        w.writerow([period, rat(nu), count])
    return buf.getvalue()


def polygon_csv(vertices) -> str:
    """Rows ``index,nu``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "nu"])
    for i, nu in vertices:
        w.writerow([i, rat(nu)])
    return buf.getvalue()


def coefficients_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "nu_b"])
    for k, nu in rows:
        w.writerow([k, nu])
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


# --------------------------------------------------------------------------
# SVG


def polygon_svg(polygon: NewtonPolygon, points: list[tuple[int, Fraction]] | None = None, title: str = "") -> str:
    """Newton polygon with vertices, edges and slope labels."""
    verts = polygon.vertices
    xs = [i for i, _ in verts] + [i for i, _ in points or []]
    ys = [float(v) for _, v in verts] + [float(v) for _, v in points or []]
    xmax = max(xs) if xs else 1
    ymax = max(ys) if ys else 1
    ymax = ymax or 1
    W, H, pad = 640, 400, 50

    def sx(i) -> float:
        return pad + (W - 2 * pad) * (i / xmax if xmax else 0)

    def sy(v) -> float:
        return H - pad - (H - 2 * pad) * (float(v) / ymax)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{pad}" y1="{H - pad}" x2="{W - pad}" y2="{H - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{H - pad}" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{W / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>')
    for i, v in points or []:
        out.append(f'<circle cx="{sx(i):.1f}" cy="{sy(v):.1f}" r="2" fill="gray"/>')
    path = " ".join(f"{sx(i):.1f},{sy(v):.1f}" for i, v in verts)
    out.append(f'<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="2"/>')
    for (i0, v0), (i1, v1) in zip(verts, verts[1:]):
        slope = Fraction(v1 - v0, i1 - i0)
        mx, my = (sx(i0) + sx(i1)) / 2, (sy(v0) + sy(v1)) / 2
        out.append(f'<text x="{mx:.1f}" y="{my - 8:.1f}" font-size="12" fill="steelblue">slope {rat(slope)}</text>')
    for i, v in verts:
        out.append(f'<circle cx="{sx(i):.1f}" cy="{sy(v):.1f}" r="4" fill="crimson"/>')
        out.append(f'<text x="{sx(i):.1f}" y="{H - pad + 16}" text-anchor="middle" font-size="11">{i}</text>')
        out.append(f'<text x="{sx(i) + 6:.1f}" y="{sy(v) - 6:.1f}" font-size="11">({i}, {rat(v)})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def rational_pairs(pairs) -> list[list[Any]]:
    return [[a, rat(b)] for a, b in pairs]
