"""Sigma-witnessed reductions of Schubert problems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import Inconsistent, NegativeProfile
from .lr import count_measures, enumerate_measures
from .measure import (
    ExitProfile,
    IndexTriple,
    Measure,
    exit_profile,
    index_triple,
    leq,
    profile_from_index_triple,
    scale,
    tripod,
)
from .sigma import sigma_from_indices
from .tree import Catalog


class WitnessKind(NamedTuple):
    name: str  # "Tripod", "Hexagon" or "Other"
    x: int | None = None
    y: int | None = None
    z: int | None = None

    def __str__(self) -> str:
        if self.name == "Other":
            return "Other"
        return f"{self.name}({self.x},{self.y},{self.z})"


OTHER = WitnessKind("Other")


def witness_kind(p: ExitProfile) -> WitnessKind:
    """Classify the two witnesses with an explicit intersection formula.

    ``Tripod(x, y, z)``: weight one, exits at ``A_x, B_y, C_z``.
    ``Hexagon(x, y, z)``: weight two, exits at ``A_0, A_x`` and so on with
    ``x, y, z >= 1`` (so ``x + y + z = 2r``).
    """
    pos = []
    if p.omega == 1:
        for s in p.sides():
            pos.append(s.index(1))
        return WitnessKind("Tripod", *pos)
    if p.omega == 2:
        for s in p.sides():
            if s[0] != 1:
                return OTHER
            rest = [l for l in range(1, p.r + 1) if s[l]]
            if len(rest) != 1 or s[rest[0]] != 1:
                return OTHER
            pos.append(rest[0])
        return WitnessKind("Hexagon", *pos)
    return OTHER


@dataclass(frozen=True)
class Witness:
    id: int
    profile: ExitProfile
    measure: Measure | None = None

    @property
    def omega(self) -> int:
        return self.profile.omega

    @property
    def kind(self) -> WitnessKind:
        return witness_kind(self.profile)

    def to_dict(self) -> dict:
        d = {"id": self.id, "kind": str(self.kind), "profile": self.profile.to_dict()}
        return d


@dataclass
class ReductionStep:
    witness: Witness
    p: int
    before: IndexTriple
    after: IndexTriple
    verified: bool | None = None  # None: above the verification cap

    @property
    def witness_kind(self) -> WitnessKind:
        return self.witness.kind

    def to_dict(self) -> dict:
        status = {True: "verified", False: "failed", None: "unverified"}[self.verified]
        return {
            "witness": self.witness.to_dict(),
            "p": self.p,
            "before": self.before.to_dict(),
            "after": self.after.to_dict(),
            "verification": status,
        }


@dataclass
class ReductionChain:
    start: IndexTriple
    steps: list[ReductionStep] = field(default_factory=list)
    terminal: IndexTriple | None = None

    def __post_init__(self):
        if self.terminal is None:
            self.terminal = self.start

    @property
    def is_trivial_terminal(self) -> bool:
        return self.terminal.n == self.terminal.r

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "start": self.start.to_dict(),
            "steps": [s.to_dict() for s in self.steps],
            "terminal": self.terminal.to_dict(),
            "terminal_trivial": self.is_trivial_terminal,
        }


def catalog_witnesses(catalog: Catalog) -> list[Witness]:
    return [Witness(i, c.profile, c.measure) for i, c in catalog.witnesses()]


def tripod_witnesses(r: int) -> list[Witness]:
    """All weight-one tree witnesses of size ``r`` (built directly, no cone computation)."""
    out = []
    for x in range(r + 1):
        for y in range(r + 1 - x):
            m = tripod(r, x, y, r - x - y)
            out.append(Witness(len(out), exit_profile(m), m))
    return out


def _as_witnesses(source) -> list[Witness]:
    if isinstance(source, Catalog):
        return catalog_witnesses(source)
    return list(source)


def find_reduction(t: IndexTriple, catalog) -> tuple[Witness, int] | None:
    """A witness with negative Sigma on ``t`` and ``p = -Sigma``.

    Preference: smallest weight, then most negative Sigma, then catalog order.
    ``catalog`` is a :class:`Catalog` or a list of :class:`Witness`.
    """
    best = None
    for w in _as_witnesses(catalog):
        if w.profile.r != t.r:
            raise Inconsistent(f"catalog has r = {w.profile.r}, triple has r = {t.r}")
        s = sigma_from_indices(w.profile, t)
        if s < 0:
            key = (w.omega, s, w.id)
            if best is None or key < best[0]:
                best = (key, w, -s)
    return None if best is None else (best[1], best[2])


def apply_reduction(t: IndexTriple, witness: ExitProfile | Witness, p: int) -> IndexTriple:
    """Index triple of ``profile(t) - p * witness``, of size ``n - p * omega``."""
    wp = witness.profile if isinstance(witness, Witness) else witness
    if p <= 0:
        raise Inconsistent("p must be positive")
    s = sigma_from_indices(wp, t)
    if s != -p:
        raise Inconsistent(f"sigma of the witness is {s}, not -p = {-p}")
    prof = profile_from_index_triple(t)
    diff = prof.minus(wp, p)
    if any(x < 0 for side in diff for x in side):
        raise NegativeProfile(f"profile minus {p} x witness has a negative entry: {diff}")
    return index_triple(ExitProfile(t.r, *diff))


def reduction_chain(
    t: IndexTriple,
    catalog,
    verify: str = "fast",
    max_r: int = 4,
    max_omega: int = 6,
) -> ReductionChain:
    """Greedy iteration of :func:`find_reduction` / :func:`apply_reduction`.

    ``verify``: ``"none"`` skips coefficient checks, ``"fast"`` checks steps
    with ``r <= max_r`` and weight ``<= max_omega``, ``"full"`` checks all.
    """
    ws = _as_witnesses(catalog)
    chain = ReductionChain(t)
    cur = t
    while True:
        found = find_reduction(cur, ws)
        if found is None:
            break
        w, p = found
        nxt = apply_reduction(cur, w, p)
        verified = None
        small = cur.r <= max_r and cur.n - cur.r <= max_omega
        if verify == "full" or (verify == "fast" and small):
            verified = count_measures(profile_from_index_triple(cur)) == count_measures(
                profile_from_index_triple(nxt)
            )
        chain.steps.append(ReductionStep(w, p, cur, nxt, verified))
        cur = nxt
    chain.terminal = cur
    return chain


def domination_holds(t: IndexTriple, witness: Measure, p: int) -> bool:
    """``p * witness <= m`` for every measure ``m`` with the profile of ``t``."""
    big = scale(witness, p)
    return all(leq(big, m) for m in enumerate_measures(profile_from_index_triple(t)).measures)


def tripod_formula(t: IndexTriple, x: int, y: int, z: int, p: int) -> IndexTriple:
    """The classical weight-one reduction written directly on indices."""
    def f(idx, q):
        return tuple(i if l <= q else i - p for l, i in enumerate(idx, start=1))
    return IndexTriple(t.n - p, f(t.I, x), f(t.J, y), f(t.K, z))


def hexagon_formula(t: IndexTriple, x: int, y: int, z: int, p: int) -> IndexTriple:
    """The weight-two reduction written directly on indices."""
    def f(idx, q):
        return tuple(i - p if l <= q else i - 2 * p for l, i in enumerate(idx, start=1))
    return IndexTriple(t.n - 2 * p, f(t.I, x), f(t.J, y), f(t.K, z))
