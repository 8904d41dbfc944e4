"""Triangular lattice coordinates, small edges and the triangle frame.

A lattice point ``(a, b)`` stands for ``a*u + b*v`` where ``u + v + w = 0``.
In these coordinates ``U = (1, 0)``, ``V = (0, 1)`` and ``W = (-1, -1)``, and
the triangle of size ``r`` is ``{(a, b) : 0 <= b <= a <= r}`` with vertices
``0``, ``r*u`` and ``r*u + r*v``.

Directions are stored as indices into :data:`DIRS`, which lists the six unit
steps in counterclockwise order ``U, -W, V, -U, W, -V``.  Adding ``k`` to a
direction index rotates it by ``60*k`` degrees counterclockwise.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterator, NamedTuple

DIRS: tuple[tuple[int, int], ...] = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
DIR_NAMES = ("U", "-W", "V", "-U", "W", "-V")
DIR_INDEX = {name: k for k, name in enumerate(DIR_NAMES)}
VEC_INDEX = {vec: k for k, vec in enumerate(DIRS)}

U, NEG_W, V, NEG_U, W, NEG_V = range(6)
POSITIVE = ("U", "V", "W")


class Point(NamedTuple):
    a: int
    b: int

    def step(self, k: int, times: int = 1) -> "Point":
        da, db = DIRS[k % 6]
        return Point(self.a + times * da, self.b + times * db)


class Edge(NamedTuple):
    """Undirected small edge in canonical form: ``origin + dir`` is the other end."""

    a: int
    b: int
    dir: str

    @property
    def origin(self) -> Point:
        return Point(self.a, self.b)

    @property
    def end(self) -> Point:
        da, db = DIRS[DIR_INDEX[self.dir]]
        return Point(self.a + da, self.b + db)

    def endpoints(self) -> tuple[Point, Point]:
        return self.origin, self.end

    def other(self, p: Point) -> Point:
        o, e = self.endpoints()
        if p == o:
            return e
        if p == e:
            return o
        raise ValueError(f"{p} is not an endpoint of {self}")


class EdgeClass(NamedTuple):
    kind: str  # "interior", "exit", "forbidden", "outside"
    side: str | None = None  # "A", "B", "C"
    j: int | None = None


INTERIOR = EdgeClass("interior")
OUTSIDE = EdgeClass("outside")


def rotate(k: int, steps: int) -> int:
    return (k + steps) % 6


def edge_from(p: tuple[int, int], k: int) -> Edge:
    """Canonical edge leaving ``p`` in direction index ``k``."""
    k %= 6
    if k % 2 == 0:
        return Edge(p[0], p[1], DIR_NAMES[k])
    da, db = DIRS[k]
    return Edge(p[0] + da, p[1] + db, DIR_NAMES[(k + 3) % 6])


def edge_between(p: tuple[int, int], q: tuple[int, int]) -> Edge:
    k = VEC_INDEX.get((q[0] - p[0], q[1] - p[1]))
    if k is None:
        raise ValueError(f"{p} and {q} are not lattice neighbours")
    return edge_from(p, k)


def direction(p: tuple[int, int], q: tuple[int, int]) -> int:
    """Direction index of the step ``p -> q``."""
    return VEC_INDEX[(q[0] - p[0], q[1] - p[1])]


def neighbors(p: tuple[int, int]) -> list[Point]:
    """The six neighbours of ``p`` in counterclockwise order starting with ``p + U``."""
    return [Point(p[0] + da, p[1] + db) for da, db in DIRS]


class TriangleFrame:
    """The labelled triangle of size ``r``.

    ``A_j = (j, 0)``, ``B_j = (r, j)`` and ``C_j = (r - j, r - j)``; the exit
    points are ``X_j = A_j + W``, ``Y_j = B_j + U`` and ``Z_j = C_j + V``.
    """

    def __init__(self, r: int):
        if r < 1:
            raise ValueError("r must be positive")
        self.r = r

    def __repr__(self) -> str:
        return f"TriangleFrame(r={self.r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, TriangleFrame) and other.r == self.r

    def __hash__(self) -> int:
        return hash(("TriangleFrame", self.r))

    def A(self, j: int) -> Point:
        return Point(j, 0)

    def B(self, j: int) -> Point:
        return Point(self.r, j)

    def C(self, j: int) -> Point:
        return Point(self.r - j, self.r - j)

    def X(self, j: int) -> Point:
        return Point(j - 1, -1)

    def Y(self, j: int) -> Point:
        return Point(self.r + 1, j)

    def Z(self, j: int) -> Point:
        return Point(self.r - j, self.r - j + 1)

    def contains(self, p: tuple[int, int]) -> bool:
        return 0 <= p[1] <= p[0] <= self.r

    @cached_property
    def points(self) -> tuple[Point, ...]:
        """Lattice points of the triangle, sorted by decreasing ``a`` then ``b``."""
        r = self.r
        return tuple(Point(a, b) for a in range(r, -1, -1) for b in range(a, -1, -1))

    @cached_property
    def interior_edges(self) -> tuple[Edge, ...]:
        out = []
        for p in sorted(self.points):
            for name in POSITIVE:
                e = Edge(p.a, p.b, name)
                if self.contains(e.end):
                    out.append(e)
        return tuple(out)

    def exit_edge(self, side: str, j: int) -> Edge:
        if side == "A":
            return edge_from(self.A(j), W)
        if side == "B":
            return edge_from(self.B(j), U)
        if side == "C":
            return edge_from(self.C(j), V)
        raise ValueError(side)

    def forbidden_edge(self, side: str, j: int) -> Edge:
        if side == "A":
            return edge_from(self.A(j), NEG_V)
        if side == "B":
            return edge_from(self.B(j), NEG_W)
        if side == "C":
            return edge_from(self.C(j), NEG_U)
        raise ValueError(side)

    @cached_property
    def exit_edges(self) -> tuple[Edge, ...]:
        return tuple(self.exit_edge(s, j) for s in "ABC" for j in range(self.r + 1))

    @cached_property
    def forbidden_edges(self) -> tuple[Edge, ...]:
        return tuple(self.forbidden_edge(s, j) for s in "ABC" for j in range(self.r + 1))

    @cached_property
    def _classes(self) -> dict[Edge, EdgeClass]:
        table = {e: INTERIOR for e in self.interior_edges}
        for s in "ABC":
            for j in range(self.r + 1):
                table[self.exit_edge(s, j)] = EdgeClass("exit", s, j)
                table[self.forbidden_edge(s, j)] = EdgeClass("forbidden", s, j)
        return table

    def classify(self, e: Edge) -> EdgeClass:
        return self._classes.get(e, OUTSIDE)

    @cached_property
    def variable_edges(self) -> tuple[Edge, ...]:
        """Edges that may carry density: interior edges followed by exit edges."""
        return self.interior_edges + self.exit_edges

    def incident(self, p: tuple[int, int]) -> Iterator[tuple[int, Edge]]:
        """``(direction index, edge)`` for the six edges at ``p``."""
        for k in range(6):
            yield k, edge_from(p, k)


# --- symmetries -------------------------------------------------------------

def _rot120(r: int, p: tuple[int, int]) -> Point:
    return Point(r - p[1], p[0] - p[1])


def _mirror(r: int, p: tuple[int, int]) -> Point:
    return Point(p[0], p[0] - p[1])


SYMMETRIES = ("Rot120", "Rot240", "Mirror")


def symmetry_point(r: int, p: tuple[int, int], s: str) -> Point:
    if s == "Rot120":
        return _rot120(r, p)
    if s == "Rot240":
        return _rot120(r, _rot120(r, p))
    if s == "Mirror":
        return _mirror(r, p)
    if s == "Identity":
        return Point(*p)
    raise ValueError(f"unknown symmetry {s!r}")


def symmetry_apply(frame: TriangleFrame, e: Edge, s: str) -> Edge:
    """Image of ``e`` under an affine symmetry of the triangle.

    ``Rot120`` sends ``A_j -> B_j -> C_j -> A_j`` and maps exit edges to exit
    edges of the next side.  ``Mirror`` is the reflection ``(a, b) -> (a, a - b)``:
    it fixes side B as a set (``B_j <-> B_{r-j}``) and swaps sides A and C
    (``A_j <-> C_{r-j}``).  Because the exit directions are chiral, the
    reflection exchanges exit and forbidden edges: ``ExitA(j)`` becomes
    ``ForbiddenC(r-j)``, ``ExitB(j)`` becomes ``ForbiddenB(r-j)`` and so on.
    """
    p, q = e.endpoints()
    return edge_between(symmetry_point(frame.r, p, s), symmetry_point(frame.r, q, s))


ROT120_SIDE = {"A": "B", "B": "C", "C": "A"}
MIRROR_SIDE = {"A": "C", "B": "B", "C": "A"}


def symmetry_class(frame: TriangleFrame, c: EdgeClass, s: str) -> EdgeClass:
    """Expected classification of the image of an edge of class ``c``."""
    if c.kind in ("interior", "outside"):
        return c
    if s == "Rot120":
        return EdgeClass(c.kind, ROT120_SIDE[c.side], c.j)
    if s == "Rot240":
        return EdgeClass(c.kind, ROT120_SIDE[ROT120_SIDE[c.side]], c.j)
    if s == "Mirror":
        kind = "forbidden" if c.kind == "exit" else "exit"
        return EdgeClass(kind, MIRROR_SIDE[c.side], frame.r - c.j)
    raise ValueError(s)


_FRAMES: dict[int, TriangleFrame] = {}


def get_frame(r: int) -> TriangleFrame:
    """Shared frame instance (frames cache their edge tables)."""
    f = _FRAMES.get(r)
    if f is None:
        f = _FRAMES[r] = TriangleFrame(r)
    return f
