import itertools
import random
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _gen import random_profile, valid_triples
from lrmesa.errors import Inconsistent
from lrmesa.lattice import get_frame
from lrmesa.lr import (
    CONVENTIONS,
    ORACLE_CONVENTION,
    codim_partition,
    count_measures,
    dim_partition,
    enumerate_measures,
    is_rigid,
    lr_coefficient,
    lr_oracle,
    lr_tableaux,
)
from lrmesa.measure import (
    ExitProfile,
    IndexTriple,
    Measure,
    exit_profile,
    index_triple,
    profile_from_index_triple,
    tripod,
    validate,
    zero_profile,
)

TRIPOD_T = IndexTriple(4, (1, 3, 4), (1, 3, 4), (1, 3, 4))
TRIVIAL_T = IndexTriple(3, (1, 2, 3), (1, 2, 3), (1, 2, 3))
TAU_T = IndexTriple(6, (2, 4, 6), (2, 4, 6), (2, 4, 6))


def test_coefficient_examples():
    assert lr_coefficient(TRIPOD_T) == lr_oracle(TRIPOD_T) == 1
    assert lr_coefficient(TRIVIAL_T) == lr_oracle(TRIVIAL_T) == 1
    assert lr_coefficient(TAU_T) == lr_oracle(TAU_T) == 2
    assert lr_coefficient(TRIPOD_T, r=3) == 1
    with pytest.raises(Inconsistent):
        lr_coefficient(TRIPOD_T, r=2)


def test_enumeration_examples():
    p = exit_profile(tripod(3, 1, 1, 1))
    res = enumerate_measures(p)
    assert res.count == 1 and res.measures[0] == tripod(3, 1, 1, 1)
    assert enumerate_measures(zero_profile(3)).measures == [Measure(3)]
    assert is_rigid(p) and is_rigid(zero_profile(3))
    assert not is_rigid(profile_from_index_triple(TAU_T))
    assert count_measures(profile_from_index_triple(TAU_T), limit=1) == 1


def test_classical_tableau_value():
    assert lr_tableaux((3, 2, 1), (2, 1), (2, 1)) == 2
    assert lr_tableaux((2, 1), (2,), (1,)) == 1 and lr_tableaux((2, 1), (1,), (1,)) == 0
    assert lr_tableaux((2, 2), (2,), (1, 1)) == 0
    assert lr_tableaux((3,), (2,), (2,)) == 0


def _hooks(lam):
    lam = [x for x in lam if x]
    n = sum(lam)
    conj = [sum(1 for x in lam if x > j) for j in range(lam[0])] if lam else []
    h = 1
    for i, row in enumerate(lam):
        for j in range(row):
            h *= row - j + conj[j] - i - 1
    return factorial(n) // h


def _partitions(n, maxpart=None):
    maxpart = n if maxpart is None else maxpart
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


@pytest.mark.parametrize("lam,mu", [((1,), (1,)), ((2, 1), (1,)), ((2, 1), (2, 1)), ((3, 1), (2, 2)), ((2, 2, 1), (3, 1))])
def test_tableau_count_dimension_identity(lam, mu):
    # f^lam f^mu C(|nu|, |lam|) = sum_nu c^nu_{lam mu} f^nu (independent check via hook lengths)
    n = sum(lam) + sum(mu)
    lhs = _hooks(lam) * _hooks(mu) * comb(n, sum(lam))
    rhs = sum(lr_tableaux(nu, lam, mu) * _hooks(nu) for nu in _partitions(n))
    assert lhs == rhs


@given(st.integers(0, 4), st.integers(0, 5))
def test_pieri_rule(size, k):
    # c^nu_{lam,(k)} is 1 exactly for horizontal strips
    for lam in _partitions(size):
        for nu in _partitions(size + k):
            lamp = lam + (0,) * (len(nu) - len(lam))
            strip = len(lam) <= len(nu) and all(
                nu[i] >= lamp[i] and (i + 1 >= len(nu) or nu[i + 1] <= lamp[i]) for i in range(len(nu))
            )
            assert lr_tableaux(nu, lam, (k,) if k else ()) == int(strip)


def test_partitions_of_indices():
    assert dim_partition((1, 3, 4)) == (1, 1, 0)
    assert codim_partition((1, 3, 4), 4) == (1, 0, 0)
    assert dim_partition((1, 2, 3)) == codim_partition((4, 5, 6), 6) == (0, 0, 0)


def test_oracle_convention_is_the_unique_calibration():
    triples = [t for r in range(1, 4) for w in range(4) for t in valid_triples(r, r + w)]
    assert len(triples) == 666
    counts = [lr_coefficient(t) for t in triples]
    agreeing = [c for c in CONVENTIONS if all(lr_oracle(t, convention=c) == x for t, x in zip(triples, counts))]
    assert agreeing == [ORACLE_CONVENTION]


def _brute_count(p: ExitProfile) -> int:
    """All integer densities on interior edges up to omega, filtered by validation."""
    f = get_frame(p.r)
    exits = {f.exit_edge(s, j): x for s, side in zip("ABC", p.sides()) for j, x in enumerate(side) if x}
    edges = f.interior_edges
    n = 0
    for vals in itertools.product(range(p.omega + 1), repeat=len(edges)):
        d = dict(exits)
        d.update((e, x) for e, x in zip(edges, vals) if x)
        if validate(Measure(p.r, d)).ok:
            n += 1
    return n


@pytest.mark.parametrize("r,w", [(1, 0), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_enumeration_matches_brute_force(r, w):
    for t in valid_triples(r, r + w):
        p = profile_from_index_triple(t)
        assert count_measures(p) == _brute_count(p)


@given(st.integers(1, 3), st.integers(0, 4), st.integers(0, 2**32))
def test_enumerated_measures_are_valid_and_distinct(r, w, seed):
    p = random_profile(random.Random(seed), r, w)
    ms = enumerate_measures(p).measures
    assert len(set(ms)) == len(ms)
    for m in ms:
        assert validate(m).ok and exit_profile(m) == p
    assert len(enumerate_measures(p, limit=1).measures) == min(1, len(ms))


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2**32))
def test_coefficient_symmetric_in_the_three_sets(r, w, seed):
    t = index_triple(random_profile(random.Random(seed), r, w))
    c = lr_coefficient(t)
    for I, J, K in itertools.permutations(t.sets()):
        assert lr_coefficient(IndexTriple(t.n, I, J, K)) == c
