"""Static SVG pictures of apartments, sectors and link angles.

Every colour and label is computed from the building predicates; coordinates
are only converted to floats when placing shapes on the page.  Output is
deterministic: fixed float formatting and a fixed drawing order.
"""

from __future__ import annotations

from fractions import Fraction
from math import acos, cos, pi, sin, sqrt
from typing import Iterable, Sequence

from .building import apartment_membership, canon_coords, comparison_cosine
from .burau import NamedData

__all__ = ["FIGURES", "render", "render_apartment_pair", "render_sigma_f_sectors", "render_link_angles"]

FIGURES = ("apartment_pair", "sigma_f_sectors", "link_angles")

_SCALE = 40.0
_COLORS = {"f": "#3b6fd8", "k": "#d8453b", "both": "#8e44ad", "none": "#bbbbbb"}


def _xy(c: Sequence[int]) -> tuple:
    """Orthogonal projection of the sum-zero plane, unit edge length."""
    m = sum(c) / 3.0
    u = [x - m for x in c]
    x = (u[2] - u[0]) / sqrt(2)
    y = (2 * u[1] - u[0] - u[2]) / sqrt(6)
    k = sqrt(1.5) * _SCALE
    return x * k, -y * k


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _spread(c: Sequence[int]) -> int:
    return max(c) - min(c)


def _ball(center: Sequence[int], radius: int) -> list:
    """Canonical coordinates at combinatorial distance <= radius from center."""
    out = set()
    r = radius
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            d = (a, b, 0)
            if _spread(d) <= r:
                out.add(canon_coords([x + y for x, y in zip(center, d)]))
    return sorted(out)


def _neighbours(c: Sequence[int]) -> Iterable[tuple]:
    for i in range(3):
        for sgn in (1, -1):
            d = list(c)
            d[i] += sgn
            yield canon_coords(d)


class _Svg:
    def __init__(self, points: Iterable[tuple], margin: float = 60.0):
        pts = list(points) or [(0.0, 0.0)]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        self.x0 = min(xs) - margin
        self.y0 = min(ys) - margin
        self.w = max(xs) - min(xs) + 2 * margin
        self.h = max(ys) - min(ys) + 2 * margin
        self.items = []

    def line(self, p, q, color, width=1.0, extra=""):
        self.items.append(f'<line x1="{_fmt(p[0])}" y1="{_fmt(p[1])}" x2="{_fmt(q[0])}" y2="{_fmt(q[1])}" '
                          f'stroke="{color}" stroke-width="{_fmt(width)}"{extra}/>')

    def circle(self, p, r, color, title=None):
        body = f"<title>{title}</title>" if title else ""
        self.items.append(f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="{_fmt(r)}" fill="{color}">{body}</circle>'
                          if body else
                          f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="{_fmt(r)}" fill="{color}"/>')

    def polygon(self, pts, color, opacity=0.3):
        ps = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.items.append(f'<polygon points="{ps}" fill="{color}" fill-opacity="{opacity}" stroke="none"/>')

    def text(self, p, s, size=12, color="#000000"):
        self.items.append(f'<text x="{_fmt(p[0])}" y="{_fmt(p[1])}" font-size="{size}" '
                          f'font-family="sans-serif" text-anchor="middle" fill="{color}">{s}</text>')

    def render(self, title: str) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(self.x0)} {_fmt(self.y0)} '
                f'{_fmt(self.w)} {_fmt(self.h)}" width="{_fmt(self.w)}" height="{_fmt(self.h)}">')
        return "\n".join([head, f"<title>{title}</title>", *self.items, "</svg>"]) + "\n"


def _lattice(svg: _Svg, pts: list, color_of, label_of=None):
    inside = set(pts)
    for c in pts:
        for d in _neighbours(c):
            if d in inside and d > c:
                svg.line(_xy(c), _xy(d), "#dddddd", 0.8)
    for c in pts:
        svg.circle(_xy(c), 4.0, color_of(c), str(c))
        if label_of is not None:
            lab = label_of(c)
            if lab:
                x, y = _xy(c)
                svg.text((x, y - 9), lab, 11)


def render_apartment_pair(data: NamedData, pair=(1, 1), radius: int = 6) -> str:
    """The apartment Sigma_{g,h}: vertices coloured by membership in Sigma_f and Sigma_k."""
    F = data.frames[pair]
    Ff, Fk = data.frame("f"), data.frame("k")
    g = "f" if pair[0] > 0 else "f^-1"
    h = "k" if pair[1] > 0 else "k^-1"
    # centre on the midpoint region between g v and h v
    gc = apartment_membership(F, data.v.act(data.matrix(g)))
    pts = _ball(gc, radius)
    member = {}
    for c in pts:
        V = F.vertex(c)
        inf = apartment_membership(Ff, V) is not None
        ink = apartment_membership(Fk, V) is not None
        member[c] = "both" if inf and ink else ("f" if inf else ("k" if ink else "none"))
    svg = _Svg([_xy(c) for c in pts])
    _lattice(svg, pts, lambda c: _COLORS[member[c]])
    # rays through g^n v and h^n v at integer params, within the picture
    inside = set(pts)
    for sym, col in ((g, _COLORS["f"]), (h, _COLORS["k"])):
        ray = []
        for n in range(1, 4 * radius + 2):
            c = apartment_membership(F, data.v.act(data.matrix(sym) ** n))
            if c is None or c not in inside:
                break
            ray.append(c)
        for a, b in zip(ray, ray[1:]):
            svg.line(_xy(a), _xy(b), col, 2.5)
        if ray:
            x, y = _xy(ray[0])
            svg.text((x, y + 18), f"{sym} v", 11, col)
    return svg.render(f"apartment Sigma_({g},{h}), radius {radius}")


def render_sigma_f_sectors(data: NamedData, radius: int = 5) -> str:
    """Sigma_f with the sectors S, T and tip chambers G, C for f and f^-1."""
    Ff = data.frame("f")
    pts = _ball((0, 0, 0), radius)
    svg = _Svg([_xy(c) for c in pts])
    shade = {"f": _COLORS["f"], "f^-1": _COLORS["k"]}

    def color(c):
        for sym in ("f", "f^-1"):
            if data.T[sym].contains_coords(c):
                return shade[sym]
        for sym in ("f", "f^-1"):
            if data.S[sym].contains_coords(c):
                return "#7f9fdf" if sym == "f" else "#df8f8a"
        return _COLORS["none"]

    # chambers G_g and C_g from their computed vertex coordinates
    for sym in ("f", "f^-1"):
        for name, ch in (("G", data.G[sym]), ("C", data.C[sym])):
            cs = [apartment_membership(Ff, V) for V in ch.vertices()]
            if any(c is None for c in cs):
                continue
            if all(_spread(c) <= radius for c in cs):
                xy = [_xy(c) for c in cs]
                svg.polygon(xy, shade[sym], 0.45 if name == "C" else 0.25)
                cx = sum(p[0] for p in xy) / 3
                cy = sum(p[1] for p in xy) / 3
                svg.text((cx, cy + 4), f"{name}_{sym}", 9)
    _lattice(svg, pts, color, lambda c: "v" if c == (0, 0, 0) else "")
    return svg.render(f"Sigma_f sectors, radius {radius}")


def render_link_angles(data: NamedData, radius: int = 1) -> str:
    """Comparison angles at v between the germs toward g v, one panel per pair."""
    v = data.v
    pts = {"f": data.v_plus["f"], "f^-1": data.v_minus["f"], "k": data.v_plus["k"], "k^-1": data.v_minus["k"]}
    pairs = [("f", "k"), ("f", "k^-1"), ("f^-1", "k"), ("f^-1", "k^-1"), ("f", "f^-1")]
    svg = _Svg([(0, -80), (len(pairs) * 150 - 80, 80)], 40)
    for idx, (a, b) in enumerate(pairs):
        c = comparison_cosine(v, pts[a], pts[b])
        theta = acos(float(c))
        ox = idx * 150.0
        r = 55.0
        o = (ox, 0.0)
        p = (ox + r, 0.0)
        q = (ox + r * cos(theta), -r * sin(theta))
        svg.line(o, p, _COLORS["f"] if "f" in a else _COLORS["k"], 2)
        svg.line(o, q, _COLORS["k"] if "k" in b else _COLORS["f"], 2)
        svg.circle(o, 3.5, "#000000", "v")
        svg.text((p[0] + 4, p[1] + 16), f"{a} v", 10)
        svg.text((q[0], q[1] - 8 if q[1] < 0 else q[1] + 16), f"{b} v", 10)
        svg.text((ox, 60.0), f"cos = {c}", 11)
        svg.text((ox, 75.0), f"angle = {_angle_name(c)}", 11)
    return svg.render("comparison angles at v")


def _angle_name(c) -> str:
    names = {1: "0", 0: "pi/2", -1: "pi"}
    c = Fraction(c)
    if c in names:
        return names[c]
    if c == Fraction(-1, 2):
        return "2pi/3"
    if c == Fraction(1, 2):
        return "pi/3"
    return f"{acos(float(c)) / pi:.4f} pi"


def render(data: NamedData, figure: str, pair=(1, 1), radius: int = 6) -> str:
    if figure == "apartment_pair":
        return render_apartment_pair(data, pair, radius)
    if figure == "sigma_f_sectors":
        return render_sigma_f_sectors(data, radius)
    if figure == "link_angles":
        return render_link_angles(data, radius)
    raise ValueError(f"unknown figure {figure!r}")
