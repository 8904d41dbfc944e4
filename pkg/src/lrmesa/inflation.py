"""Inflation of a measure into a puzzle of size ``r + omega``.

The triangle is cut along the support.  The white pieces (unions of unit
triangles joined across zero-density edges) are translated so that across a
support edge with direction ``d`` and density ``x``

    t(left piece) - t(right piece) = x * rot(d, +120 degrees),

which is independent of the orientation chosen for the edge.  The piece
touching ``A_0 A_1`` is translated by ``alpha_0 * U``.  Every interior support
edge becomes a parallelogram and every branch point a convex polygon.  All
geometry is done with integer lattice coordinates.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import InconsistentTranslation, SigmaNotZero
from .lattice import DIRS, Edge, Point, edge_between, rotate
from .measure import ExitProfile, Measure, exit_profile, index_triple, require_valid
from .sigma import sigma

Vec = tuple[int, int]


class Tri(NamedTuple):
    """Unit triangle: ``up`` has vertices (a,b),(a+1,b),(a+1,b+1); down has (a,b),(a+1,b+1),(a,b+1)."""

    a: int
    b: int
    up: bool

    def vertices(self) -> tuple[Point, Point, Point]:
        a, b = self.a, self.b
        if self.up:
            return Point(a, b), Point(a + 1, b), Point(a + 1, b + 1)
        return Point(a, b), Point(a + 1, b + 1), Point(a, b + 1)

    def edges(self) -> list[Edge]:
        p, q, s = self.vertices()
        return [edge_between(p, q), edge_between(q, s), edge_between(s, p)]

    def shifted(self, t: Vec) -> "Tri":
        return Tri(self.a + t[0], self.b + t[1], self.up)

    def centroid3(self) -> Vec:
        """Three times the centroid."""
        return (3 * self.a + 2, 3 * self.b + 1) if self.up else (3 * self.a + 1, 3 * self.b + 2)


def triangles(r: int) -> list[Tri]:
    out = [Tri(a, b, True) for a in range(r) for b in range(a + 1)]
    out += [Tri(a, b, False) for a in range(r) for b in range(a)]
    return sorted(out)


@dataclass
class WhitePiece:
    triangles: list[Tri]
    translation: Vec

    def placed(self) -> list[Tri]:
        return [t.shifted(self.translation) for t in self.triangles]


@dataclass
class Parallelogram:
    edge: Edge
    density: int
    polygon: list[Vec]


@dataclass
class BranchPiece:
    point: Point
    polygon: list[Vec]


@dataclass
class Puzzle:
    r: int
    n: int
    whites: list[WhitePiece] = field(default_factory=list)
    parallelograms: list[Parallelogram] = field(default_factory=list)
    branches: list[BranchPiece] = field(default_factory=list)
    piece_of: dict[Tri, int] = field(default_factory=dict)
    outer: dict[Edge, Vec] = field(default_factory=dict)  # translation beyond each boundary edge

    @property
    def pieces(self) -> list:
        return [*self.whites, *self.parallelograms, *self.branches]

    def translation_of(self, tri: Tri) -> Vec:
        return self.whites[self.piece_of[tri]].translation


def _add(p: Sequence[int], q: Sequence[int], k: int = 1) -> Vec:
    return (p[0] + k * q[0], p[1] + k * q[1])


def _rot120(k: int) -> Vec:
    return DIRS[rotate(k, 2)]


def _jump(m: Measure, e: Edge) -> Vec:
    """``t(left) - t(right)`` across ``e``."""
    k = {"U": 0, "V": 2, "W": 4}[e.dir]
    return _add((0, 0), _rot120(k), m[e])


def _sides(e: Edge) -> tuple[Tri | None, Tri | None]:
    """``(left, right)`` unit triangles of ``e`` oriented from its origin."""
    a, b = e.a, e.b
    if e.dir == "U":
        return Tri(a, b, True), Tri(a, b - 1, False)
    if e.dir == "V":
        return Tri(a - 1, b, True), Tri(a, b, False)
    # W from (a, b) to (a-1, b-1)
    return Tri(a - 1, b - 1, True), Tri(a - 1, b - 1, False)


def inflate(m: Measure) -> Puzzle:
    require_valid(m)
    r = m.r
    frame = m.frame
    tris = triangles(r)
    tset = set(tris)
    # white pieces by union-find over zero-density edges
    parent = {t: t for t in tris}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    support_edges, boundary_edges = [], []
    for e in frame.interior_edges:
        left, right = _sides(e)
        if left in tset and right in tset:
            if m[e] == 0:
                parent[find(left)] = find(right)
            else:
                support_edges.append(e)
        else:
            boundary_edges.append(e)
    groups: dict[Tri, list[Tri]] = {}
    for t in tris:
        groups.setdefault(find(t), []).append(t)
    comps = sorted(groups.values())
    piece_of = {t: i for i, c in enumerate(comps) for t in c}

    # translations by BFS over the dual graph
    adj: dict[int, list[tuple[int, Vec]]] = {i: [] for i in range(len(comps))}
    for e in support_edges:
        left, right = _sides(e)
        i, j = piece_of[left], piece_of[right]
        jump = _jump(m, e)
        if i == j:
            raise InconsistentTranslation(f"support edge {e} has the same white piece on both sides")
        adj[i].append((j, (-jump[0], -jump[1])))
        adj[j].append((i, jump))
    # the region below A_0 A_1 is translated by alpha_0 * U
    e0 = Edge(0, 0, "U")
    start = piece_of[Tri(0, 0, True)]
    trans: dict[int, Vec] = {start: _add((m[frame.exit_edge("A", 0)], 0), _jump(m, e0))}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j, delta in adj[i]:
            t = _add(trans[i], delta)
            if j not in trans:
                trans[j] = t
                queue.append(j)
            elif trans[j] != t:
                raise InconsistentTranslation(f"pieces {i} and {j} get conflicting translations")
    puzzle = Puzzle(r, r + sum(m.exit_values("A")), piece_of=piece_of)
    puzzle.whites = [WhitePiece(c, trans[i]) for i, c in enumerate(comps)]

    for e in support_edges + boundary_edges:
        left, right = _sides(e)
        jump = _jump(m, e)
        if left in tset:
            tl = trans[piece_of[left]]
            tr = _add(tl, jump, -1)
        else:
            tr = trans[piece_of[right]]
            tl = _add(tr, jump)
        if e in boundary_edges:
            puzzle.outer[e] = tr if left in tset else tl
        if m[e]:
            p, q = e.endpoints()
            poly = [_add(p, tr), _add(q, tr), _add(q, tl), _add(p, tl)]
            puzzle.parallelograms.append(Parallelogram(e, m[e], poly))

    for p in frame.points:
        poly = _branch_polygon(m, p, piece_of, trans)
        if poly is not None:
            puzzle.branches.append(BranchPiece(p, poly))
    return puzzle


def _sector_triangle(p: Point, k: int) -> Tri:
    """Unit triangle between directions ``k`` and ``k + 1`` at ``p``."""
    q = p.step(k)
    s = p.step(k + 1)
    pts = sorted([p, q, s])
    a, b = pts[0]
    up = (Point(a + 1, b) in pts)
    return Tri(a, b, up)


def _branch_polygon(m: Measure, p: Point, piece_of, trans) -> list[Vec] | None:
    dens = m.at(p)
    if sum(1 for x in dens if x) < 3:
        return None
    start = next((k for k in range(6) if _sector_triangle(p, k) in piece_of), None)
    if start is None:
        return None
    t = trans[piece_of[_sector_triangle(p, start)]]
    pts = []
    for step in range(6):
        k = (start + step) % 6
        pts.append(_add(p, t))
        nxt = (k + 1) % 6
        t = _add(t, _rot120(nxt), dens[nxt])
    poly = []
    for v in pts:
        if not poly or poly[-1] != v:
            poly.append(v)
    if len(poly) > 1 and poly[0] == poly[-1]:
        poly.pop()
    if _area2(poly) <= 0:
        return None
    return poly


def _area2(poly: Sequence[Vec]) -> int:
    s = 0
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        s += x1 * y2 - x2 * y1
    return s


def _inside3(poly: Sequence[Vec], c3: Vec) -> bool:
    """Is the point ``c3 / 3`` strictly inside the counterclockwise convex polygon?"""
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        cross = (3 * x2 - 3 * x1) * (c3[1] - 3 * y1) - (3 * y2 - 3 * y1) * (c3[0] - 3 * x1)
        if cross <= 0:
            return False
    return True


def polygon_triangles(poly: Sequence[Vec]) -> list[Tri]:
    if _area2(poly) < 0:
        poly = list(reversed(poly))
    xs = [x for x, _ in poly]
    ys = [y for _, y in poly]
    out = []
    for a in range(min(xs) - 1, max(xs) + 1):
        for b in range(min(ys) - 1, max(ys) + 1):
            for up in (True, False):
                t = Tri(a, b, up)
                if _inside3(poly, t.centroid3()):
                    out.append(t)
    return out


def puzzle_triangles(p: Puzzle) -> Counter:
    c: Counter = Counter()
    for w in p.whites:
        c.update(w.placed())
    for q in p.parallelograms:
        c.update(polygon_triangles(q.polygon))
    for b in p.branches:
        c.update(polygon_triangles(b.polygon))
    return c


def check_tiling(p: Puzzle) -> bool:
    """Every unit triangle of the target triangle is covered exactly once."""
    return puzzle_triangles(p) == Counter(triangles(p.n))


def boundary_positions(p: Puzzle) -> tuple[list[int], list[int], list[int]]:
    """Where each boundary segment of the source triangle lands on the target sides.

    For side A the segment ``A_{l-1} A_l`` must land on ``[(i-1) U, i U]``; the
    value ``i`` is reported (or ``-1`` if the image is not on that side).
    Sides B and C are handled the same way.
    """
    r, n = p.r, p.n
    out: tuple[list[int], list[int], list[int]] = ([], [], [])
    for l in range(1, r + 1):
        end = _add((l, 0), p.outer[Edge(l - 1, 0, "U")])
        out[0].append(end[0] if end[1] == 0 else -1)
        end = _add((r, l), p.outer[Edge(r, l - 1, "V")])
        out[1].append(end[1] if end[0] == n else -1)
        end = _add((r - l, r - l), p.outer[Edge(r - l + 1, r - l + 1, "W")])
        out[2].append(n - end[0] if end[0] == end[1] else -1)
    return out


def check_boundary(m: Measure, p: Puzzle | None = None) -> bool:
    p = inflate(m) if p is None else p
    t = index_triple(exit_profile(m))
    got = boundary_positions(p)
    return tuple(tuple(x) for x in got) == (t.I, t.J, t.K)


def stretched_exits(witness: ExitProfile, mu: ExitProfile) -> ExitProfile:
    """Exit profile of the stretched witness in the triangle of size ``r + omega(mu)``."""
    if witness.r != mu.r:
        raise ValueError("profiles must have the same r")
    s = sigma(witness, mu)
    if s != 0:
        raise SigmaNotZero(f"sigma(witness, mu) = {s}")
    big = witness.r + mu.omega
    sides = []
    for w, a in zip(witness.sides(), mu.sides()):
        out = [0] * (big + 1)
        acc = 0
        for l in range(witness.r + 1):
            out[l + acc] += w[l]
            acc += a[l]
        sides.append(tuple(out))
    return ExitProfile(big, *sides)


# --- SVG ----------------------------------------------------------------------

PALETTE = {"white": "#ffffff", "dark": "#555555", "light": "#bbbbbb", "line": "#000000", "frame": "#888888"}
_S3 = 3 ** 0.5


def _xy(p: Sequence[float], scale: float, margin: float, height: float) -> tuple[float, float]:
    x = (p[0] - 0.5 * p[1]) * scale + margin
    y = height - (_S3 / 2 * p[1] * scale + margin)
    return x, y


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render_svg(obj: Measure | Puzzle, scale: float = 40.0, palette: dict | None = None,
               labels: bool = False) -> str:
    """Deterministic SVG drawing of a measure or of a puzzle."""
    pal = {**PALETTE, **(palette or {})}
    size = obj.r + 1.5 if isinstance(obj, Measure) else obj.n
    margin = scale * 1.5
    width = size * scale + 2 * margin
    height = _S3 / 2 * size * scale + 2 * margin
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]

    def pt(p):
        x, y = _xy(p, scale, margin, height)
        return f"{_fmt(x)},{_fmt(y)}"

    if isinstance(obj, Measure):
        r = obj.r
        out.append(f'<polygon points="{pt((0, 0))} {pt((r, 0))} {pt((r, r))}" fill="none" '
                   f'stroke="{pal["frame"]}" stroke-dasharray="4 3"/>')
        frame = obj.frame
        for e, x in sorted(obj.items()):
            p, q = e.endpoints()
            if frame.classify(e).kind == "exit":
                inside = p if frame.contains(p) else q
                far = q if inside == p else p
                q = (inside[0] + 1.5 * (far[0] - inside[0]), inside[1] + 1.5 * (far[1] - inside[1]))
                p = inside
            (x1, y1), (x2, y2) = _xy(p, scale, margin, height), _xy(q, scale, margin, height)
            out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                       f'stroke="{pal["line"]}" stroke-width="{_fmt(1.5 * x)}" stroke-linecap="round"/>')
            if labels and x > 1:
                mx = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
                x0, y0 = _xy(mx, scale, margin, height)
                out.append(f'<text x="{_fmt(x0)}" y="{_fmt(y0)}" font-size="10">{x}</text>')
    else:
        for w in obj.whites:
            for t in w.placed():
                pts = " ".join(pt(v) for v in t.vertices())
                out.append(f'<polygon points="{pts}" fill="{pal["white"]}" stroke="{pal["white"]}" stroke-width="0.5"/>')
        for q in obj.parallelograms:
            pts = " ".join(pt(v) for v in q.polygon)
            out.append(f'<polygon points="{pts}" fill="{pal["dark"]}" stroke="{pal["line"]}" stroke-width="0.5"/>')
        for b in obj.branches:
            pts = " ".join(pt(v) for v in b.polygon)
            out.append(f'<polygon points="{pts}" fill="{pal["light"]}" stroke="{pal["line"]}" stroke-width="0.5"/>')
        n = obj.n
        out.append(f'<polygon points="{pt((0, 0))} {pt((n, 0))} {pt((n, n))}" fill="none" '
                   f'stroke="{pal["line"]}" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
