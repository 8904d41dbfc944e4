"""Littlewood-Richardson coefficients as counts of measures, plus a tableau oracle.

The measures with a prescribed exit profile are the integer points of a
polytope cut out by the balance equations.  They are enumerated by a depth
first search over interior edge densities with bound propagation on the
balance equations and on the redundant "row flux" equations (the total
density crossing any line parallel to a side equals the weight).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import Inconsistent
from .lattice import Edge, SYMMETRIES, TriangleFrame, edge_from, get_frame, symmetry_apply
from .measure import ExitProfile, IndexTriple, Measure, profile_from_index_triple


@dataclass
class EnumerationResult:
    profile: ExitProfile
    measures: list[Measure]

    @property
    def count(self) -> int:
        return len(self.measures)


# --- equation system ----------------------------------------------------------

class _System:
    """Balance and flux equations over the interior edges of one frame.

    Each equation is stored as ``(vars, coeffs, const_terms)`` where
    ``const_terms`` lists ``(coeff, exit_index)`` pairs for exit edges and the
    weight (exit index ``-1``); the right hand side is always zero.
    """

    def __init__(self, frame: TriangleFrame):
        self.frame = frame
        self.edges = frame.interior_edges
        self.index = {e: i for i, e in enumerate(self.edges)}
        self.exits = frame.exit_edges
        exit_index = {e: i for i, e in enumerate(self.exits)}
        eqs = []

        def term(p, k):
            e = edge_from(p, k)
            if e in self.index:
                return ("v", self.index[e])
            if e in exit_index:
                return ("x", exit_index[e])
            return None  # forbidden or outside: density zero

        for p in frame.points:
            t = [term(p, k) for k in range(6)]
            # d0 - d3 = d2 - d5 = d4 - d1
            for coeffs in ({0: 1, 3: -1, 2: -1, 5: 1}, {2: 1, 5: -1, 4: -1, 1: 1}):
                eqs.append(self._collect((t[k], c) for k, c in coeffs.items()))
        for fam in _flux_families(frame):
            items = [(("v", self.index[e]) if e in self.index else ("x", exit_index[e]), 1) for e in fam]
            items.append((("w", -1), -1))
            eqs.append(self._collect(items))
        self.equations = [q for q in eqs if q[0] or q[2]]
        self.var_eqs = [[] for _ in self.edges]
        for qi, (vs, _, _) in enumerate(self.equations):
            for v in vs:
                self.var_eqs[v].append(qi)

    @staticmethod
    def _collect(items):
        vs: dict[int, int] = {}
        cs: dict[int, int] = {}
        for t, c in items:
            if t is None:
                continue
            kind, i = t
            if kind == "v":
                vs[i] = vs.get(i, 0) + c
            else:
                cs[i] = cs.get(i, 0) + c
        vs = {k: c for k, c in vs.items() if c}
        cs = {k: c for k, c in cs.items() if c}
        return tuple(vs), tuple(vs.values()), tuple(cs.items())


def _crosses(frame: TriangleFrame, e: Edge, k: int) -> bool:
    """Does ``e`` (an exit edge standing for its whole ray) cross ``b = k + 1/2``?"""
    o, q = e.endpoints()
    if frame.classify(e).kind == "exit":
        p0, p1 = (o, q) if frame.contains(o) else (q, o)
        db = p1.b - p0.b
        return (db > 0 and p0.b <= k) or (db < 0 and p0.b >= k + 1)
    return {o.b, q.b} == {k, k + 1}


def _flux_families(frame: TriangleFrame) -> list[list[Edge]]:
    """Edges whose rays cross a line ``b = k + 1/2``, and the rotated families."""
    base = [[e for e in frame.variable_edges if _crosses(frame, e, k)] for k in range(frame.r)]
    out = list(base)
    for s in SYMMETRIES[:2]:
        out.extend([symmetry_apply(frame, e, s) for e in fam] for fam in base)
    return out


@lru_cache(maxsize=None)
def _system(r: int) -> _System:
    return _System(get_frame(r))


def _solve(p: ExitProfile, limit: int | None = None) -> list[list[int]]:
    sysm = _system(p.r)
    w = p.omega
    exit_vals = list(p.alpha) + list(p.beta) + list(p.gamma)
    # constant part of every equation
    eqs = []
    for vs, cs, consts in sysm.equations:
        const = sum(c * (w if i == -1 else exit_vals[i]) for i, c in consts)
        eqs.append((vs, cs, const))
        if not vs and const != 0:
            return []
    nv = len(sysm.edges)
    lo = [0] * nv
    hi = [w] * nv
    var_eqs = sysm.var_eqs
    sols: list[list[int]] = []

    def propagate(lo, hi, queue) -> bool:
        pending = set(queue)
        queue = list(pending)
        while queue:
            qi = queue.pop()
            pending.discard(qi)
            vs, cs, const = eqs[qi]
            # sum c_i x_i + const = 0
            smin = const
            smax = const
            for v, c in zip(vs, cs):
                if c > 0:
                    smin += c * lo[v]
                    smax += c * hi[v]
                else:
                    smin += c * hi[v]
                    smax += c * lo[v]
            if smin > 0 or smax < 0:
                return False
            if smin == smax:
                continue
            for v, c in zip(vs, cs):
                if c > 0:
                    rest_min = smin - c * lo[v]
                    rest_max = smax - c * hi[v]
                    # c*x = -rest, x in [ceil(-rest_max/c), floor(-rest_min/c)]
                    nlo = -((rest_max) // c)
                    nhi = (-rest_min) // c
                else:
                    a = -c
                    rest_min = smin - c * hi[v]
                    rest_max = smax - c * lo[v]
                    # a*x = rest, x in [ceil(rest_min/a), floor(rest_max/a)]
                    nlo = -((-rest_min) // a)
                    nhi = rest_max // a
                changed = False
                if nlo > lo[v]:
                    lo[v] = nlo
                    changed = True
                if nhi < hi[v]:
                    hi[v] = nhi
                    changed = True
                if lo[v] > hi[v]:
                    return False
                if changed:
                    for q2 in var_eqs[v]:
                        if q2 not in pending:
                            pending.add(q2)
                            queue.append(q2)
                    if qi not in pending:
                        pending.add(qi)
                        queue.append(qi)
        return True

    def dfs(lo, hi):
        if limit is not None and len(sols) >= limit:
            return
        best, size = -1, None
        for v in range(nv):
            s = hi[v] - lo[v]
            if s > 0 and (size is None or s < size):
                best, size = v, s
        if best < 0:
            sols.append(list(lo))
            return
        for val in range(lo[best], hi[best] + 1):
            l2, h2 = list(lo), list(hi)
            l2[best] = h2[best] = val
            if propagate(l2, h2, var_eqs[best]):
                dfs(l2, h2)

    if propagate(lo, hi, range(len(eqs))):
        dfs(lo, hi)
    return sols


def _to_measure(p: ExitProfile, sol: list[int]) -> Measure:
    sysm = _system(p.r)
    d = {e: x for e, x in zip(sysm.edges, sol) if x}
    vals = list(p.alpha) + list(p.beta) + list(p.gamma)
    for e, x in zip(sysm.exits, vals):
        if x:
            d[e] = x
    return Measure(p.r, d)


def enumerate_measures(p: ExitProfile, limit: int | None = None) -> EnumerationResult:
    """All measures with exit profile ``p`` (at most ``limit`` if given), sorted."""
    ms = sorted(_to_measure(p, s) for s in _solve(p, limit))
    return EnumerationResult(p, ms)


def count_measures(p: ExitProfile, limit: int | None = None) -> int:
    return len(_solve(p, limit))


def lr_coefficient(t: IndexTriple, r: int | None = None) -> int:
    return count_measures(profile_from_index_triple(t, r))


def is_rigid(p: ExitProfile) -> bool:
    return count_measures(p, limit=2) == 1


# --- tableau oracle -----------------------------------------------------------

def dim_partition(idx: tuple[int, ...]) -> tuple[int, ...]:
    """``lambda_t = i_{r+1-t} - (r+1-t)``."""
    r = len(idx)
    return tuple(idx[r - t] - (r + 1 - t) for t in range(1, r + 1))


def codim_partition(idx: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Complement of :func:`dim_partition` in the ``r x (n-r)`` box."""
    r = len(idx)
    return tuple(n - r + x - idx[x - 1] for x in range(1, r + 1))


def _strip(lam) -> tuple[int, ...]:
    return tuple(x for x in lam if x)


def lr_tableaux(nu, lam, mu) -> int:
    """Number of LR tableaux of shape ``nu / lam`` and content ``mu``."""
    nu, lam, mu = _strip(nu), _strip(lam), _strip(mu)
    if sum(nu) != sum(lam) + sum(mu):
        return 0
    lam = lam + (0,) * (len(nu) - len(lam))
    if len(lam) > len(nu) or any(l > v for l, v in zip(lam, nu)):
        return 0
    if not mu:
        return 1
    cells = [(i, j) for i in range(len(nu)) for j in range(nu[i] - 1, lam[i] - 1, -1)]
    k = len(mu)
    T: dict[tuple[int, int], int] = {}
    counts = [0] * (k + 1)
    total = 0

    def rec(c: int) -> None:
        nonlocal total
        if c == len(cells):
            total += 1
            return
        i, j = cells[c]
        hi = T.get((i, j + 1), k)
        above = T.get((i - 1, j), 0) if i > 0 and j >= lam[i - 1] else 0
        for v in range(above + 1, hi + 1):
            if counts[v] >= mu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            T[(i, j)] = v
            rec(c + 1)
            del T[(i, j)]
            counts[v] -= 1

    rec(0)
    return total


# Slot conventions for the oracle: which partition (dimension or codimension)
# each of I, J, K contributes to c^{K}_{I, J}.  Frozen after calibration.
CONVENTIONS = tuple((a, b, c) for a in ("dim", "codim") for b in ("dim", "codim") for c in ("dim", "codim"))
ORACLE_CONVENTION = ("codim", "codim", "dim")


def _partition(kind: str, idx, n) -> tuple[int, ...]:
    return dim_partition(idx) if kind == "dim" else codim_partition(idx, n)


def lr_oracle(t: IndexTriple, r: int | None = None, convention=ORACLE_CONVENTION) -> int:
    if r is not None and r != t.r:
        raise Inconsistent(f"triple has r = {t.r}, expected {r}")
    lam = _partition(convention[0], t.I, t.n)
    mu = _partition(convention[1], t.J, t.n)
    nu = _partition(convention[2], t.K, t.n)
    return lr_tableaux(nu, lam, mu)
