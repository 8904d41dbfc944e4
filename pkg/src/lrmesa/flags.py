"""Exact rational subspaces and flags, and explicit solutions of rigid problems.

Every subspace is stored in the coordinates of the original space ``Q^N``
as the reduced row echelon form of a spanning set, so equal subspaces have
identical representations.  A flag in an intermediate space ``X`` is a list
of nested subspaces of ``Q^N`` whose top member is ``X``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import AmbientMismatch, GenericityFailure, NotAFlag, NotRigid, RetryExhausted, UnsupportedWitness
from .linalg import det, kernel, rref
from .lr import count_measures
from .measure import IndexTriple, profile_from_index_triple
from .reduce import ReductionChain, ReductionStep, reduction_chain, tripod_witnesses
from .tree import MAX_CATALOG_R, extremal_rays


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, ambient: int, vectors: Sequence[Sequence]) -> "Subspace":
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise AmbientMismatch(f"vector of length {len(v)} in Q^{ambient}")
        red, _ = rref(vecs, ambient) if vecs else ([], [])
        return cls(ambient, tuple(tuple(row) for row in red))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls.span(ambient, [[int(i == j) for j in range(ambient)] for i in range(ambient)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_spaces(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        return sum_spaces(self, other) == other

    def annihilator(self) -> "Subspace":
        if not self.basis:
            return Subspace.whole(self.ambient)
        return Subspace.span(self.ambient, kernel([list(r) for r in self.basis], self.ambient))

    def contains(self, v: Sequence) -> bool:
        return Subspace.span(self.ambient, list(self.basis) + [list(v)]).dim == self.dim

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.basis]


def _check(s1: Subspace, s2: Subspace) -> None:
    if s1.ambient != s2.ambient:
        raise AmbientMismatch(f"ambient dimensions differ: {s1.ambient} != {s2.ambient}")


def sum_spaces(s1: Subspace, s2: Subspace) -> Subspace:
    _check(s1, s2)
    return Subspace.span(s1.ambient, list(s1.basis) + list(s2.basis))


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    _check(s1, s2)
    return sum_spaces(s1.annihilator(), s2.annihilator()).annihilator()


@dataclass(frozen=True)
class Flag:
    """Nested subspaces of dimensions ``1..n``; ``space(0)`` is the zero space."""

    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        for i, s in enumerate(self.spaces, start=1):
            if s.dim != i:
                raise NotAFlag(f"flag member {i} has dimension {s.dim}")
        for a, b in zip(self.spaces, self.spaces[1:]):
            if not a <= b:
                raise NotAFlag("flag members are not nested")

    @property
    def n(self) -> int:
        return len(self.spaces)

    @property
    def ambient(self) -> int:
        return self.spaces[0].ambient

    def space(self, i: int) -> Subspace:
        if i == 0:
            return Subspace.zero(self.ambient)
        return self.spaces[i - 1]

    @property
    def top(self) -> Subspace:
        return self.spaces[-1]

    @classmethod
    def from_columns(cls, matrix: Sequence[Sequence[int]]) -> "Flag":
        n = len(matrix)
        cols = [[matrix[i][j] for i in range(n)] for j in range(n)]
        return cls(tuple(Subspace.span(n, cols[:k]) for k in range(1, n + 1)))


@dataclass
class SchubertProblem:
    triple: IndexTriple
    flags: tuple[Flag, Flag, Flag]

    def __post_init__(self):
        for f in self.flags:
            if f.n != self.triple.n:
                raise AmbientMismatch(f"flag of length {f.n} for a problem with n = {self.triple.n}")


def default_bound(n: int) -> int:
    return max(10, n)


def random_flags(n: int, seed: int | None = None, bound: int | None = None, rng: random.Random | None = None,
                 retries: int = 20) -> tuple[Flag, Flag, Flag]:
    """Three flags spanned by prefixes of the columns of random integer matrices."""
    bound = default_bound(n) if bound is None else bound
    if bound < n:
        raise ValueError(f"bound must be at least n = {n}")
    rng = random.Random(seed) if rng is None else rng
    out = []
    for _ in range(3):
        for _attempt in range(retries):
            mat = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
            if det(mat) != 0:
                break
        else:
            raise RetryExhausted(f"no invertible {n}x{n} matrix after {retries} draws")
        out.append(Flag.from_columns(mat))
    return tuple(out)


def schubert_member(M: Subspace, flag: Flag, I: Sequence[int]) -> bool:
    """``dim(M & E_{i_x}) >= x`` for every ``x``."""
    if M.ambient != flag.ambient:
        raise AmbientMismatch("space and flag live in different ambient spaces")
    if M.dim != len(I):
        raise ValueError(f"M has dimension {M.dim}, expected {len(I)}")
    return all(intersect(M, flag.space(i)).dim >= x for x, i in enumerate(I, start=1))


def realize_reduction_space(step: ReductionStep, flags: tuple[Flag, Flag, Flag]) -> Subspace:
    """The space ``X`` containing every solution, for tripod and hexagon witnesses."""
    kind = step.witness_kind
    E, F, G = flags
    t = step.before
    idx = [0 if q == 0 else s[q - 1] for s, q in zip(t.sets(), (kind.x, kind.y, kind.z))] if kind.name != "Other" else None
    if kind.name == "Tripod":
        Ex, Fy, Gz = E.space(idx[0]), F.space(idx[1]), G.space(idx[2])
        X = Ex + Fy + Gz
    elif kind.name == "Hexagon":
        Ex, Fy, Gz = E.space(idx[0]), F.space(idx[1]), G.space(idx[2])
        X = (Ex & Fy) + (Fy & Gz) + (Gz & Ex)
    else:
        raise UnsupportedWitness(f"no explicit construction for witness {kind}")
    expected = t.n - step.p * step.witness.omega
    if X.dim != expected:
        raise GenericityFailure(f"dim X = {X.dim}, expected {expected}")
    return X


def induced_flag(flag: Flag, X: Subspace) -> tuple[Flag, list[int]]:
    """Distinct members of ``E_i & X``, plus the list of dimensions ``dim(E_i & X)``."""
    dims, spaces = [], []
    for i in range(1, flag.n + 1):
        s = intersect(flag.space(i), X)
        dims.append(s.dim)
        if s.dim and (not spaces or spaces[-1].dim < s.dim):
            spaces.append(s)
    if [s.dim for s in spaces] != list(range(1, X.dim + 1)):
        raise NotAFlag(f"intersections have dimensions {dims}, not a complete flag of X")
    return Flag(tuple(spaces)), dims


def tripod_dims(n: int, ix: int, p: int) -> list[int]:
    """Generic ``dim(E_i & X)`` for a weight-one reduction."""
    return [i if i <= ix else ix if i <= ix + p else i - p for i in range(1, n + 1)]


@dataclass
class StepRealization:
    step: ReductionStep
    dim_x: int
    induced_dims: tuple[list[int], list[int], list[int]]
    formula_ok: bool | None


@dataclass
class Solution:
    problem: SchubertProblem
    chain: ReductionChain
    M: Subspace
    realizations: list[StepRealization] = field(default_factory=list)
    membership: tuple[bool, bool, bool] = (False, False, False)

    @property
    def verified(self) -> bool:
        return all(self.membership) and all(s.formula_ok is not False for s in self.realizations)

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "problem": self.problem.triple.to_dict(),
            "chain": self.chain.to_dict(),
            "dims": [s.dim_x for s in self.realizations],
            "basis": self.M.to_strings(),
            "membership": list(self.membership),
            "verified": self.verified,
        }


def default_witnesses(r: int):
    if r <= MAX_CATALOG_R:
        return extremal_rays(r)
    return tripod_witnesses(r)


def solve_rigid(problem: SchubertProblem, catalog=None, check_rigid: bool = True) -> Solution:
    """Follow the reduction chain with explicit spaces down to ``n = r``."""
    t = problem.triple
    if check_rigid and count_measures(profile_from_index_triple(t), limit=2) != 1:
        raise NotRigid(f"the coefficient of {t} is not 1")
    chain = reduction_chain(t, default_witnesses(t.r) if catalog is None else catalog, verify="none")
    if not chain.is_trivial_terminal:
        raise UnsupportedWitness(f"chain stops at {chain.terminal} with n > r", partial=chain)
    flags = problem.flags
    realized = []
    for step in chain.steps:
        if step.witness_kind.name == "Other":
            raise UnsupportedWitness(f"step with witness {step.witness_kind} is not realizable", partial=chain)
        X = realize_reduction_space(step, flags)
        new, dims = [], []
        for f in flags:
            g, d = induced_flag(f, X)
            new.append(g)
            dims.append(d)
        ok = None
        kind = step.witness_kind
        if kind.name == "Tripod":
            ok = True
            for s, q, d in zip(step.before.sets(), (kind.x, kind.y, kind.z), dims):
                ix = 0 if q == 0 else s[q - 1]
                if d != tripod_dims(step.before.n, ix, step.p):
                    raise GenericityFailure(f"induced dimensions {d} differ from the generic formula")
        realized.append(StepRealization(step, X.dim, tuple(dims), ok))
        flags = tuple(new)
    M = flags[0].top
    E, F, G = problem.flags
    member = (schubert_member(M, E, t.I), schubert_member(M, F, t.J), schubert_member(M, G, t.K))
    return Solution(problem, chain, M, realized, member)


def solve_with_resampling(t: IndexTriple, seed: int = 0, retries: int = 20, bound: int | None = None,
                          catalog=None) -> Solution:
    """Draw flags from ``seed`` and resample them when a genericity check fails."""
    rng = random.Random(seed)
    last = None
    for _ in range(retries):
        flags = random_flags(t.n, bound=bound, rng=rng)
        try:
            return solve_rigid(SchubertProblem(t, flags), catalog)
        except GenericityFailure as exc:
            last = exc
    raise RetryExhausted(f"flags not generic after {retries} draws: {last}")
