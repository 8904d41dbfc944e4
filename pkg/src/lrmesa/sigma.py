"""The Sigma pairing between exit profiles.

``sigma(witness, target)`` is

    sum_{l < l'} (alpha_l alpha'_l' + beta_l beta'_l' + gamma_l gamma'_l') - omega omega'

with the target unprimed.  It only depends on the order of the nonzero exits,
so profiles of different sizes are compared by padding with zeros.
"""

from __future__ import annotations

from typing import Sequence

from .errors import Inconsistent
from .measure import ExitProfile, IndexTriple, Measure, exit_profile


def _as_profile(x) -> ExitProfile:
    return exit_profile(x) if isinstance(x, Measure) else x


def _cross(target: Sequence[int], witness: Sequence[int]) -> int:
    # sum over l < l' of target[l] * witness[l'], via prefix sums of the target
    total, prefix = 0, 0
    n = max(len(target), len(witness))
    for l in range(n):
        w = witness[l] if l < len(witness) else 0
        total += prefix * w
        prefix += target[l] if l < len(target) else 0
    return total


def sigma(witness: ExitProfile | Measure, target: ExitProfile | Measure) -> int:
    """``Sigma_{witness}(target)``."""
    wp, tp = _as_profile(witness), _as_profile(target)
    s = sum(_cross(t, w) for t, w in zip(tp.sides(), wp.sides()))
    return s - wp.omega * tp.omega


def sigma_from_indices(witness: ExitProfile | Measure, t: IndexTriple) -> int:
    """``sum_l (alpha'_l i_l + beta'_l j_l + gamma'_l k_l) - omega' n``."""
    wp = _as_profile(witness)
    if wp.r != t.r:
        raise Inconsistent(f"witness has r = {wp.r} but the triple has r = {t.r}")
    s = 0
    for side, idx in zip(wp.sides(), t.sets()):
        s += sum(side[l] * idx[l - 1] for l in range(1, t.r + 1))
    return s - wp.omega * t.n


def sigma_self(p: ExitProfile | Measure) -> int:
    """``(omega^2 - sum of squared exits) / 2``."""
    p = _as_profile(p)
    sq = sum(x * x for s in p.sides() for x in s)
    twice = p.omega ** 2 - sq
    assert twice % 2 == 0
    return twice // 2


def exchange_rhs(p1: ExitProfile, p2: ExitProfile) -> int:
    """Right side of ``sigma(p1, p2) + sigma(p2, p1)``."""
    dot = sum(x * y for s, t in zip(p1.sides(), p2.sides()) for x, y in zip(s, t))
    return p1.omega * p2.omega - dot


def common_size(p1: ExitProfile, p2: ExitProfile) -> tuple[ExitProfile, ExitProfile]:
    """Embed two profiles into the same triangle (the larger one)."""
    r = max(p1.r, p2.r)
    return p1.padded(r), p2.padded(r)
