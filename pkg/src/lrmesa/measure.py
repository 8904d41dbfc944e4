"""Integer measures on the triangular lattice, exit profiles and index triples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import Inconsistent, InvalidMeasure, NegativeDensity
from .lattice import (
    DIR_NAMES,
    Edge,
    Point,
    TriangleFrame,
    U,
    V,
    W,
    edge_from,
    get_frame,
)

FORMAT = 1


class Measure:
    """Nonnegative integer densities on the small edges of a triangle frame.

    Only edges with nonzero density are stored.  Rays leaving the triangle are
    represented by their first (exit) edge.
    """

    __slots__ = ("r", "_d", "_key")

    def __init__(self, r: int, densities: Mapping[Edge, int] | Iterable[tuple[Edge, int]] = ()):
        self.r = r
        items = densities.items() if isinstance(densities, Mapping) else densities
        d = {}
        for e, x in items:
            if x:
                d[Edge(*e)] = d.get(Edge(*e), 0) + int(x)
        self._d = {e: x for e, x in d.items() if x}
        self._key = None

    @property
    def frame(self) -> TriangleFrame:
        return get_frame(self.r)

    @property
    def densities(self) -> dict[Edge, int]:
        return dict(self._d)

    def __getitem__(self, e: Edge) -> int:
        return self._d.get(e, 0)

    def get(self, e: Edge, default: int = 0) -> int:
        return self._d.get(e, default)

    def support(self) -> frozenset[Edge]:
        return frozenset(self._d)

    def items(self):
        return self._d.items()

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.r, tuple(sorted(self._d.items())))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Measure) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "Measure") -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        return f"Measure(r={self.r}, support={len(self._d)}, omega={sum(self.exit_values('A'))})"

    def __add__(self, other: "Measure") -> "Measure":
        return add(self, other)

    def __sub__(self, other: "Measure") -> "Measure":
        return subtract(self, other)

    def __rmul__(self, k: int) -> "Measure":
        return scale(self, k)

    def __le__(self, other: "Measure") -> bool:
        return leq(self, other)

    def at(self, p: tuple[int, int]) -> list[int]:
        """Densities of the six edges at ``p`` in direction-index order."""
        d = self._d
        return [d.get(edge_from(p, k), 0) for k in range(6)]

    def exit_values(self, side: str) -> list[int]:
        f = self.frame
        return [self._d.get(f.exit_edge(side, j), 0) for j in range(self.r + 1)]

    def is_zero(self) -> bool:
        return not self._d


def zero(r: int) -> Measure:
    return Measure(r)


# --- validation ---------------------------------------------------------------

@dataclass
class ValidationReport:
    balance: list[Point] = field(default_factory=list)
    forbidden: list[Edge] = field(default_factory=list)
    stray: list[Edge] = field(default_factory=list)
    negative: list[Edge] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.balance or self.forbidden or self.stray or self.negative)

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        if self.balance:
            parts.append(f"unbalanced at {self.balance}")
        if self.forbidden:
            parts.append(f"forbidden edges {self.forbidden}")
        if self.stray:
            parts.append(f"edges outside the frame {self.stray}")
        if self.negative:
            parts.append(f"negative densities {self.negative}")
        return "; ".join(parts)


def balanced_at(d: list[int]) -> bool:
    return d[U] - d[U + 3] == d[V] - d[(V + 3) % 6] == d[W] - d[(W + 3) % 6]


def validate(m: Measure) -> ValidationReport:
    """Check balance at every lattice point of the frame plus boundary rules."""
    f = m.frame
    rep = ValidationReport()
    for e, x in m.items():
        c = f.classify(e)
        if x < 0:
            rep.negative.append(e)
        if c.kind == "forbidden":
            rep.forbidden.append(e)
        elif c.kind == "outside":
            rep.stray.append(e)
    for p in f.points:
        if not balanced_at(m.at(p)):
            rep.balance.append(p)
    return rep


def require_valid(m: Measure) -> None:
    rep = validate(m)
    if not rep.ok:
        raise InvalidMeasure(rep.describe())


def has_branch_point(m: Measure) -> bool:
    return any(sum(1 for x in m.at(p) if x) >= 3 for p in m.frame.points)


def branch_points(m: Measure) -> list[Point]:
    return [p for p in m.frame.points if sum(1 for x in m.at(p) if x) >= 3]


# --- exit profiles ------------------------------------------------------------

@dataclass(frozen=True)
class ExitProfile:
    """Exit densities ``alpha, beta, gamma`` indexed ``0..r``."""

    r: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = tuple(int(x) for x in getattr(self, name))
            object.__setattr__(self, name, v)
            if len(v) != self.r + 1:
                raise Inconsistent(f"{name} must have r+1 = {self.r + 1} entries, got {len(v)}")
            if any(x < 0 for x in v):
                raise Inconsistent(f"{name} has a negative entry: {v}")
        w = sum(self.alpha)
        if sum(self.beta) != w or sum(self.gamma) != w:
            raise Inconsistent("exit densities on the three sides have different sums")
        trace = sum(l * (a + b + c) for l, (a, b, c) in enumerate(zip(self.alpha, self.beta, self.gamma)))
        if trace != self.r * w:
            raise Inconsistent(f"trace identity fails: {trace} != r*omega = {self.r * w}")

    @property
    def omega(self) -> int:
        return sum(self.alpha)

    def sides(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return self.alpha, self.beta, self.gamma

    def __add__(self, other: "ExitProfile") -> "ExitProfile":
        _same_r(self.r, other.r)
        return ExitProfile(self.r, *(tuple(x + y for x, y in zip(s, t)) for s, t in zip(self.sides(), other.sides())))

    def scaled(self, k: int) -> "ExitProfile":
        return ExitProfile(self.r, *(tuple(k * x for x in s) for s in self.sides()))

    def minus(self, other: "ExitProfile", p: int = 1) -> tuple[tuple[int, ...], ...]:
        """Entrywise ``self - p*other`` without validation (may be negative)."""
        _same_r(self.r, other.r)
        return tuple(tuple(x - p * y for x, y in zip(s, t)) for s, t in zip(self.sides(), other.sides()))

    def padded(self, r: int) -> "ExitProfile":
        """The same profile viewed in the triangle of size ``r >= self.r``.

        Side A gains leading zeros while sides B and C gain trailing zeros, so
        the trace identity holds at the new size and the order of the nonzero
        exits on every side is unchanged.
        """
        if r < self.r:
            raise ValueError("cannot shrink a profile")
        k = r - self.r
        z = (0,) * k
        return ExitProfile(r, z + self.alpha, self.beta + z, self.gamma + z)

    def nonzero(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(x for x in s if x) for s in self.sides())

    def to_dict(self) -> dict:
        return {"format": FORMAT, "r": self.r, "alpha": list(self.alpha),
                "beta": list(self.beta), "gamma": list(self.gamma)}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExitProfile":
        return cls(int(d["r"]), tuple(d["alpha"]), tuple(d["beta"]), tuple(d["gamma"]))


def zero_profile(r: int) -> ExitProfile:
    z = (0,) * (r + 1)
    return ExitProfile(r, z, z, z)


def _same_r(r1: int, r2: int) -> None:
    if r1 != r2:
        raise Inconsistent(f"triangle sizes differ: {r1} != {r2}")


def exit_profile(m: Measure) -> ExitProfile:
    require_valid(m)
    return ExitProfile(m.r, m.exit_values("A"), m.exit_values("B"), m.exit_values("C"))


def omega(m: Measure) -> int:
    return sum(m.exit_values("A"))


# --- index triples ------------------------------------------------------------

@dataclass(frozen=True)
class IndexTriple:
    """A Schubert problem ``(n, I, J, K)`` with three r-subsets of ``{1..n}``."""

    n: int
    I: tuple[int, ...]
    J: tuple[int, ...]
    K: tuple[int, ...]

    def __post_init__(self):
        r = len(self.I)
        for name in ("I", "J", "K"):
            v = tuple(int(x) for x in getattr(self, name))
            object.__setattr__(self, name, v)
            if len(v) != r:
                raise Inconsistent("I, J, K must have the same cardinality")
            if any(x >= y for x, y in zip(v, v[1:])):
                raise Inconsistent(f"{name} is not strictly increasing: {v}")
            if v and (v[0] < 1 or v[-1] > self.n):
                raise Inconsistent(f"{name} is not a subset of 1..{self.n}: {v}")
        if r < 1:
            raise Inconsistent("index sets must be nonempty")
        total = sum(i + j + k - 3 * l for l, (i, j, k) in enumerate(zip(self.I, self.J, self.K), start=1))
        if total != 2 * r * (self.n - r):
            raise Inconsistent(f"dimension identity fails: {total} != 2r(n-r) = {2 * r * (self.n - r)}")

    @property
    def r(self) -> int:
        return len(self.I)

    def sets(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return self.I, self.J, self.K

    def rotated(self) -> "IndexTriple":
        return IndexTriple(self.n, self.K, self.I, self.J)

    def to_dict(self) -> dict:
        return {"format": FORMAT, "n": self.n, "I": list(self.I), "J": list(self.J), "K": list(self.K)}

    @classmethod
    def from_dict(cls, d: Mapping) -> "IndexTriple":
        return cls(int(d["n"]), tuple(d["I"]), tuple(d["J"]), tuple(d["K"]))


def _indices(side: tuple[int, ...], r: int) -> tuple[int, ...]:
    out, acc = [], 0
    for l in range(1, r + 1):
        acc += side[l - 1]
        out.append(l + acc)
    return tuple(out)


def index_triple(p: ExitProfile) -> IndexTriple:
    """``n = r + omega`` and ``i_l = l + sum_{j<l} alpha_j``."""
    return IndexTriple(p.r + p.omega, *(_indices(s, p.r) for s in p.sides()))


def _gaps(idx: tuple[int, ...], n: int) -> tuple[int, ...]:
    prev = [0] + list(idx)
    out = [prev[l + 1] - prev[l] - 1 for l in range(len(idx))]
    out.append(n - idx[-1])
    return tuple(out)


def profile_from_index_triple(t: IndexTriple, r: int | None = None) -> ExitProfile:
    """Inverse of :func:`index_triple`."""
    if r is not None and r != t.r:
        raise Inconsistent(f"triple has r = {t.r}, expected {r}")
    sides = [_gaps(s, t.n) for s in t.sets()]
    for s in sides:
        if any(x < 0 for x in s):
            raise Inconsistent("index gaps are negative")
        if sum(s) != t.n - t.r:
            raise Inconsistent("gap totals disagree with n - r")
    return ExitProfile(t.r, *sides)


# --- cone arithmetic ----------------------------------------------------------

def add(m1: Measure, m2: Measure) -> Measure:
    _same_r(m1.r, m2.r)
    d = m1.densities
    for e, x in m2.items():
        d[e] = d.get(e, 0) + x
    return Measure(m1.r, d)


def scale(m: Measure, k: int) -> Measure:
    if k < 0:
        raise NegativeDensity("scale factor must be nonnegative")
    return Measure(m.r, {e: k * x for e, x in m.items()})


def leq(m1: Measure, m2: Measure) -> bool:
    _same_r(m1.r, m2.r)
    return all(x <= m2[e] for e, x in m1.items())


def subtract(m1: Measure, m2: Measure) -> Measure:
    if not leq(m2, m1):
        raise NegativeDensity("subtraction would produce a negative density")
    d = m1.densities
    for e, x in m2.items():
        d[e] -= x
    return Measure(m1.r, d)


def combination(terms: Iterable[tuple[int, Measure]], r: int) -> Measure:
    d: dict[Edge, int] = {}
    for k, m in terms:
        _same_r(r, m.r)
        for e, x in m.items():
            d[e] = d.get(e, 0) + k * x
    return Measure(r, d)


def homothety(m: Measure, q: int) -> Measure:
    """Scale the support by ``q``: every edge becomes ``q`` collinear unit edges."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    require_valid(m)
    big = get_frame(q * m.r)
    small = m.frame
    d: dict[Edge, int] = {}
    for e, x in m.items():
        c = small.classify(e)
        if c.kind == "exit":
            e2 = big.exit_edge(c.side, q * c.j)
            d[e2] = d.get(e2, 0) + x
            continue
        k = {"U": U, "V": V, "W": W}[e.dir]
        p = Point(q * e.a, q * e.b)
        for t in range(q):
            e2 = edge_from(p.step(k, t), k)
            d[e2] = d.get(e2, 0) + x
    return Measure(q * m.r, d)


def tripod(r: int, x: int, y: int, z: int, density: int = 1) -> Measure:
    """Weight-one tree measure with exits at ``A_x, B_y, C_z`` (``x + y + z = r``)."""
    if min(x, y, z) < 0 or x + y + z != r:
        raise Inconsistent(f"tripod exits must be nonnegative with x+y+z = r: {(x, y, z)}")
    f = get_frame(r)
    center = Point(r - z, y)
    d: dict[Edge, int] = {}
    for k, steps, side, j in ((W, y, "A", x), (U, z, "B", y), (V, x, "C", z)):
        for t in range(steps):
            d[edge_from(center.step(k, t), k)] = density
        d[f.exit_edge(side, j)] = density
    return Measure(r, d)


# --- JSON ---------------------------------------------------------------------

def measure_to_dict(m: Measure) -> dict:
    edges = [{"a": e.a, "b": e.b, "dir": e.dir, "d": x} for e, x in sorted(m.items())]
    return {"format": FORMAT, "r": m.r, "edges": edges}


def measure_from_dict(d: Mapping) -> Measure:
    r = int(d["r"])
    items = []
    for row in d["edges"]:
        name = row["dir"]
        if name not in ("U", "V", "W"):
            if name not in DIR_NAMES:
                raise InvalidMeasure(f"unknown direction {name!r}")
            e = edge_from((int(row["a"]), int(row["b"])), DIR_NAMES.index(name))
        else:
            e = Edge(int(row["a"]), int(row["b"]), name)
        items.append((e, int(row["d"])))
    return Measure(r, items)
