"""Descendance, root edges, extremal rays and tree decompositions.

Descendance is computed on directed small edges ``(P, Q)``.  A directed edge
``(A, B)`` is followed by ``(B, C)`` when both are in the support and either
``A, B, C`` are collinear and one of the two edges at ``B`` making 60 degrees
with ``BC`` has density zero, or the path turns by 60 degrees at ``B`` and the
straight continuation of ``AB`` beyond ``B`` has density zero.  The relation
on undirected edges is the image of this one.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable

import networkx as nx

from .errors import (
    CyclicDescendance,
    DecompositionStuck,
    NoRootInTriangle,
    NotATree,
    NotRigid,
    ResourceLimit,
)
from .lattice import Edge, Point, TriangleFrame, direction, edge_between, edge_from, get_frame, rotate
from .linalg import kernel, primitive, rref
from .lr import is_rigid
from .measure import (
    FORMAT,
    ExitProfile,
    Measure,
    exit_profile,
    has_branch_point,
    leq,
    measure_from_dict,
    measure_to_dict,
    subtract,
    scale,
)
from .sigma import sigma, sigma_self

Arc = tuple[Point, Point]


def _dir_edges(m: Measure) -> list[Arc]:
    out = []
    for e in sorted(m.support()):
        p, q = e.endpoints()
        out += [(p, q), (q, p)]
    return out


def successors(m: Measure, arc: Arc) -> list[Arc]:
    """Directed edges ``f`` with ``arc -> f`` in the descendance relation."""
    a, b = arc
    if not m.frame.contains(b):
        return []  # the far end of an exit ray
    k = direction(a, b)
    dens = m.at(b)
    out = []
    if dens[k] and dens[(k + 1) % 6] * dens[(k - 1) % 6] == 0:
        out.append((b, b.step(k)))
    if dens[k] == 0:
        for t in (1, -1):
            kk = (k + t) % 6
            if dens[kk]:
                out.append((b, b.step(kk)))
    return out


@dataclass
class DescendanceGraph:
    measure: Measure
    arcs: dict[Arc, list[Arc]]

    def edge_graph(self) -> nx.DiGraph:
        """The relation on undirected support edges."""
        g = nx.DiGraph()
        g.add_nodes_from(self.measure.support())
        for (p, q), succ in self.arcs.items():
            e = edge_between(p, q)
            for (s, t) in succ:
                f = edge_between(s, t)
                if f != e:
                    g.add_edge(e, f)
        return g

    def arc_graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.arcs)
        for a, succ in self.arcs.items():
            g.add_edges_from((a, b) for b in succ)
        return g


def descendance_graph(m: Measure) -> DescendanceGraph:
    return DescendanceGraph(m, {a: successors(m, a) for a in _dir_edges(m)})


def edge_classes(m: Measure) -> list[list[Edge]]:
    """All descendance classes (strongly connected components), sorted."""
    g = descendance_graph(m).edge_graph()
    return sorted(sorted(c) for c in nx.strongly_connected_components(g))


def root_edges(m: Measure) -> list[list[Edge]]:
    """Source classes of the descendance relation, each sorted, in lexicographic order."""
    g = descendance_graph(m).edge_graph()
    cond = nx.condensation(g)
    out = []
    f = m.frame
    for node in cond.nodes:
        if cond.in_degree(node) == 0:
            cls = sorted(cond.nodes[node]["members"])
            if not any(f.classify(e).kind == "interior" for e in cls):
                raise NoRootInTriangle(f"source class {cls} has no edge inside the triangle")
            out.append(cls)
    return sorted(out)


def descendants(m: Measure, e: Edge) -> set[Edge]:
    g = descendance_graph(m).edge_graph()
    return {e} | nx.descendants(g, e)


def count_paths(m: Measure, e: Edge, f: Edge) -> int:
    """Number of descendance paths from ``e`` (either orientation) to ``f``."""
    if m[e] == 0 or m[f] == 0:
        return 0
    dg = descendance_graph(m).arc_graph()
    p, q = e.endpoints()
    starts = [(p, q), (q, p)]
    s, t = f.endpoints()
    targets = {(s, t), (t, s)}
    reach = set(starts)
    for a in starts:
        reach |= nx.descendants(dg, a)
    back = set(x for x in targets if x in dg)
    for x in list(back):
        back |= nx.ancestors(dg, x)
    sub = dg.subgraph(reach & back)
    if not nx.is_directed_acyclic_graph(sub):
        raise CyclicDescendance(f"cycle on descendance paths from {e} to {f}")
    ways = {a: 0 for a in sub}
    for a in starts:
        if a in ways:
            ways[a] += 1
    for a in nx.topological_sort(sub):
        for b in sub.successors(a):
            ways[b] += ways[a]
    if e == f:
        return 1
    return sum(ways.get(x, 0) for x in targets)


def path_count_measure(m: Measure, e: Edge) -> dict[Edge, int]:
    """``f -> count_paths(m, e, f)`` for every support edge ``f``."""
    return {f: count_paths(m, e, f) for f in sorted(m.support())}


def local_support_degree(m: Measure) -> int:
    """Largest number of support edges meeting at a lattice point of the frame."""
    return max((sum(1 for x in m.at(p) if x) for p in m.frame.points), default=0)


# --- extreme rays -------------------------------------------------------------

def balance_matrix(frame: TriangleFrame, edges: Iterable[Edge] | None = None) -> tuple[list[list[int]], list[Edge]]:
    """Rows of the balance equations over the given variable edges."""
    cols = list(frame.variable_edges if edges is None else edges)
    index = {e: i for i, e in enumerate(cols)}
    rows = []
    for p in frame.points:
        for coeffs in ({0: 1, 3: -1, 2: -1, 5: 1}, {2: 1, 5: -1, 4: -1, 1: 1}):
            row = [0] * len(cols)
            for k, c in coeffs.items():
                i = index.get(edge_from(p, k))
                if i is not None:
                    row[i] += c
            if any(row):
                rows.append(row)
    return rows, cols


def _double_description(rows: list[list[int]], n: int, limit: int = 200000) -> list[list[int]]:
    """Extreme rays of ``{x >= 0 : A x = 0}`` (primitive integer vectors).

    Starts from a kernel basis in which the free coordinates form an identity
    block, so the nonnegativity of those coordinates holds from the start, and
    then adds the remaining nonnegativity constraints one at a time.  Adjacency
    of two rays is decided with the combinatorial zero-set test.
    """
    basis = kernel(rows, n)
    if not basis:
        return []
    pivots = set(rref(rows, n)[1]) if rows else set()
    free = [i for i in range(n) if i not in pivots]
    rays = [primitive(v) for v in basis]
    done = set(free)

    def zmask(v):
        z = 0
        for i in done:
            if v[i] == 0:
                z |= 1 << i
        return z

    zs = [zmask(v) for v in rays]
    for c in range(n):
        if c in done:
            continue
        pos = [i for i, v in enumerate(rays) if v[c] > 0]
        neg = [i for i, v in enumerate(rays) if v[c] < 0]
        zer = [i for i, v in enumerate(rays) if v[c] == 0]
        new = []
        for i in pos:
            for j in neg:
                z = zs[i] & zs[j]
                ok = True
                for k in range(len(rays)):
                    if k != i and k != j and zs[k] & z == z:
                        ok = False
                        break
                if ok:
                    a, b = rays[i], rays[j]
                    v = [a[t] * -b[c] + b[t] * a[c] for t in range(n)]
                    new.append(primitive(v))
        rays = [rays[i] for i in pos] + [rays[i] for i in zer] + new
        if len(rays) > limit:
            raise ResourceLimit(f"double description exceeded {limit} intermediate rays")
        done.add(c)
        zs = [zmask(v) for v in rays]
    uniq = sorted(set(tuple(v) for v in rays))
    return [list(v) for v in uniq]


@dataclass(frozen=True)
class CatalogEntry:
    measure: Measure
    rigid: bool
    sigma_self: int

    @property
    def profile(self) -> ExitProfile:
        return exit_profile(self.measure)

    @property
    def omega(self) -> int:
        return self.profile.omega

    def to_dict(self) -> dict:
        return {"measure": measure_to_dict(self.measure), "rigid": self.rigid, "sigma_self": self.sigma_self}

    @classmethod
    def from_dict(cls, d: dict) -> "CatalogEntry":
        return cls(measure_from_dict(d["measure"]), bool(d["rigid"]), int(d["sigma_self"]))


@dataclass
class Catalog:
    r: int
    entries: list[CatalogEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> CatalogEntry:
        return self.entries[i]

    def witnesses(self) -> list[tuple[int, CatalogEntry]]:
        """Rigid entries with ``sigma_self == -1``, usable as reduction witnesses."""
        return [(i, c) for i, c in enumerate(self.entries) if c.rigid and c.sigma_self == -1]

    def to_dict(self) -> dict:
        return {"format": FORMAT, "r": self.r, "entries": [c.to_dict() for c in self.entries]}

    @classmethod
    def from_dict(cls, d: dict) -> "Catalog":
        return cls(int(d["r"]), [CatalogEntry.from_dict(x) for x in d["entries"]])


MAX_CATALOG_R = 5
_ALGO = "dd-nullspace-1"


def _entry_key(m: Measure):
    p = exit_profile(m)
    return (p.omega, p.alpha, p.beta, p.gamma, m.key())


def compute_catalog(r: int, max_r: int = MAX_CATALOG_R) -> Catalog:
    if r > max_r:
        raise ResourceLimit(f"extremal_rays is limited to r <= {max_r}; got r = {r}")
    frame = get_frame(r)
    rows, cols = balance_matrix(frame)
    rays = _double_description(rows, len(cols))
    ms = []
    for v in rays:
        m = Measure(r, {e: x for e, x in zip(cols, v) if x})
        if has_branch_point(m):
            ms.append(m)
    ms.sort(key=_entry_key)
    entries = [CatalogEntry(m, is_rigid(exit_profile(m)), sigma_self(exit_profile(m))) for m in ms]
    return Catalog(r, entries)


def cache_path(r: int, directory: str | os.PathLike) -> Path:
    digest = hashlib.sha256(json.dumps({"r": r, "format": FORMAT, "algo": _ALGO}).encode()).hexdigest()[:16]
    return Path(directory) / f"catalog-r{r}-{digest}.json"


@lru_cache(maxsize=None)
def _memo_catalog(r: int, max_r: int) -> Catalog:
    directory = os.environ.get("LRMESA_CACHE_DIR")
    if directory:
        path = cache_path(r, directory)
        if path.exists():
            return Catalog.from_dict(json.loads(path.read_text()))
    cat = compute_catalog(r, max_r)
    if directory:
        path = cache_path(r, directory)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(cat.to_dict(), sort_keys=True))
    return cat


def extremal_rays(r: int, max_r: int = MAX_CATALOG_R) -> Catalog:
    """Catalog of the extreme rays of the measure cone with a branch point.

    Results are memoised in-process and, when ``LRMESA_CACHE_DIR`` is set, on
    disk under a content-addressed file name.
    """
    if r > max_r:
        raise ResourceLimit(f"extremal_rays is limited to r <= {max_r}; got r = {r}")
    return _memo_catalog(r, max_r)


# --- extremal decomposition ---------------------------------------------------

def support_generator(frame: TriangleFrame, edges: Iterable[Edge]) -> Measure | None:
    """The primitive balanced measure supported exactly on ``edges``, if unique."""
    cols = sorted(set(edges))
    rows, _ = balance_matrix(frame, cols)
    ker = kernel(rows, len(cols))
    if len(ker) != 1:
        return None
    v = primitive(ker[0])
    if all(x <= 0 for x in v):
        v = [-x for x in v]
    if any(x <= 0 for x in v):
        return None
    return Measure(frame.r, dict(zip(cols, v)))


def _summand_from_root(m: Measure, root: Edge) -> Measure | None:
    s = descendants(m, root)
    return support_generator(m.frame, s)


def extremal_decomposition(m: Measure, check_rigid: bool = True) -> list[tuple[int, Measure]]:
    """Write a rigid measure as ``sum p_k m_k`` with extremal tree summands.

    At each step the descendants of a root edge of the remaining measure span
    the support of an extremal summand ``m'``; it is removed with multiplicity
    ``p = -sigma(m', remaining)``.  The result is ordered so that
    ``sigma(m_j, m_i) > 0`` implies ``i <= j``.
    """
    if check_rigid and not is_rigid(exit_profile(m)):
        raise NotRigid("extremal_decomposition requires a rigid measure")
    remaining = m
    parts: list[tuple[int, Measure]] = []
    while not remaining.is_zero():
        chosen = None
        for cls in root_edges(remaining):
            inside = [e for e in cls if remaining.frame.classify(e).kind == "interior"]
            summand = _summand_from_root(remaining, min(inside))
            if summand is None:
                continue
            p = -sigma(summand, remaining)
            if p > 0 and leq(scale(summand, p), remaining):
                chosen = (p, summand)
                break
        if chosen is None:
            raise DecompositionStuck(f"no usable root class for remaining measure {remaining!r}")
        parts.append(chosen)
        remaining = subtract(remaining, scale(chosen[1], chosen[0]))
    merged: dict[Measure, int] = {}
    for p, s in parts:
        merged[s] = merged.get(s, 0) + p
    return order_by_precedence([(p, s) for s, p in merged.items()])


def order_by_precedence(parts: list[tuple[int, Measure]]) -> list[tuple[int, Measure]]:
    """Stable topological order for ``sigma(m_j, m_i) > 0 => i <= j``."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(parts)))
    for i, (_, mi) in enumerate(parts):
        for j, (_, mj) in enumerate(parts):
            if i != j and sigma(mj, mi) > 0:
                g.add_edge(i, j)
    order = list(nx.lexicographical_topological_sort(g))
    return [parts[i] for i in order]


# --- the delta cross-check ----------------------------------------------------

def _delta_vertex(nu: Measure, arc: Arc, kind: str) -> int:
    a, v = arc
    k = direction(a, v)
    x = v.step(rotate(k, -1)) if kind == "straight" else v.step(k)
    return nu[edge_between(v, x)]


def delta_terms(witness: Measure, nu: Measure, e0: Edge, max_vertices: int = 100000) -> list[tuple[Point, int]]:
    """``(image point, delta)`` for every vertex of the descendance tree from ``e0``.

    The tree is grown from both orientations of ``e0``; a vertex is the head
    of a directed edge whose image ends inside the triangle.
    """
    frame = witness.frame
    out: list[tuple[Point, int]] = []
    p, q = e0.endpoints()
    stack: list[tuple[Arc, frozenset]] = [((p, q), frozenset()), ((q, p), frozenset())]
    while stack:
        arc, path = stack.pop()
        a, v = arc
        if not frame.contains(v):
            continue
        if arc in path:
            raise CyclicDescendance(f"descendance cycle through {arc}")
        succ = successors(witness, arc)
        k = direction(a, v)
        straight = [s for s in succ if direction(*s) == k]
        turns = [s for s in succ if direction(*s) != k]
        if straight and not turns:
            kind = "straight"
        elif len(turns) == 2 and not straight:
            kind = "branch"
        else:
            raise NotATree(f"vertex at {v} reached along {arc} has successors {succ}")
        out.append((v, _delta_vertex(nu, arc, kind)))
        if len(out) > max_vertices:
            raise ResourceLimit("descendance tree too large")
        path2 = path | {arc}
        stack.extend((s, path2) for s in succ)
    return out


def delta_check(witness: Measure, nu: Measure, e0: Edge) -> tuple[int, int]:
    """``(sigma(witness, nu) + nu(e0), sum of delta)``; these must agree."""
    lhs = sigma(witness, nu) + nu[e0]
    rhs = sum(d for _, d in delta_terms(witness, nu, e0))
    return lhs, rhs


# --- labelling the r = 3 catalog ----------------------------------------------

R3_LABELS = ("mu1", "mu2", "mu3", "nu1", "nu2", "nu3", "rho1", "rho2", "rho3", "tau1", "tau2")


def r3_pattern() -> dict[tuple[str, str], int]:
    """Nonzero entries ``sigma(witness, target)`` among the eleven r = 3 extremals."""
    pat = {(x, x): -1 for x in R3_LABELS}
    for j in range(1, 4):
        nxt, prv = j % 3 + 1, (j - 2) % 3 + 1
        pat[(f"nu{j}", f"mu{j}")] = 1
        pat[(f"rho{j}", f"mu{j}")] = 1
        pat[("tau1", f"mu{j}")] = 1
        pat[(f"nu{j}", f"nu{nxt}")] = 1
        pat[(f"rho{j}", f"rho{prv}")] = 1
    pat[("tau1", "tau2")] = 1
    pat[("tau2", "tau1")] = 1
    return pat


def sigma_matrix(entries: list[Measure]) -> list[list[int]]:
    profs = [exit_profile(m) for m in entries]
    return [[sigma(a, b) for b in profs] for a in profs]


def label_r3(catalog: Catalog) -> dict[str, int] | None:
    """Assign the labels mu/nu/rho/tau to catalog indices so the Sigma matrix matches."""
    mat = sigma_matrix([c.measure for c in catalog])
    n = len(mat)
    if n != len(R3_LABELS):
        return None
    pat = r3_pattern()
    assign: dict[str, int] = {}
    used: set[int] = set()

    def consistent(lab: str, i: int) -> bool:
        for l2, j in assign.items():
            if mat[i][j] != pat.get((lab, l2), 0) or mat[j][i] != pat.get((l2, lab), 0):
                return False
        return mat[i][i] == pat[(lab, lab)]

    def rec(k: int) -> bool:
        if k == n:
            return True
        lab = R3_LABELS[k]
        for i in range(n):
            if i not in used and consistent(lab, i):
                assign[lab] = i
                used.add(i)
                if rec(k + 1):
                    return True
                del assign[lab]
                used.discard(i)
        return False

    return dict(assign) if rec(0) else None
