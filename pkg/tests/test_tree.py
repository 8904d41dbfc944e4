import itertools
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lrmesa.errors import NotRigid, ResourceLimit
from lrmesa.lattice import Edge, Point, get_frame
from lrmesa.linalg import rank
from lrmesa.measure import add, combination, exit_profile, scale, tripod, validate, zero
from lrmesa.sigma import sigma
from lrmesa.tree import (
    R3_LABELS,
    Catalog,
    _memo_catalog,
    balance_matrix,
    cache_path,
    count_paths,
    delta_check,
    descendance_graph,
    descendants,
    extremal_decomposition,
    extremal_rays,
    label_r3,
    path_count_measure,
    r3_pattern,
    root_edges,
    sigma_matrix,
    successors,
    support_generator,
)

T3 = tripod(3, 1, 1, 1)
CENTER = Point(2, 1)


def test_successors_on_tripod():
    # along the W ray away from the centre: straight continuation only
    assert successors(T3, (CENTER, Point(1, 0))) == [(Point(1, 0), Point(0, -1))]
    # arriving at the centre along the reversed U ray: the two other rays
    succ = successors(T3, (Point(3, 1), CENTER))
    assert sorted(succ) == sorted([(CENTER, Point(2, 2)), (CENTER, Point(1, 0))])
    assert descendance_graph(zero(3)).arcs == {}


def test_root_classes():
    assert root_edges(zero(3)) == []
    (cls,) = root_edges(T3)
    assert set(cls) == set(T3.support())
    assert root_edges(scale(T3, 2)) == root_edges(T3)
    assert descendants(T3, Edge(2, 1, "U")) == set(T3.support())


def test_count_paths_tripod():
    f = get_frame(3)
    root = Edge(2, 1, "U")
    for side in "ABC":
        assert count_paths(T3, root, f.exit_edge(side, 1)) == 1
    assert count_paths(T3, root, Edge(0, 0, "U")) == 0
    assert count_paths(T3, root, root) == 1


def test_path_counts_equal_density_with_multiplicity_two():
    hits = 0
    for e in extremal_rays(5):
        m = e.measure
        if not e.rigid or max(d for _, d in m.items()) < 2:
            continue
        root = min(root_edges(m)[0])
        counts = path_count_measure(m, root)
        for f, d in m.items():
            assert counts[f] == d
        hits += 1
    assert hits > 0


@pytest.mark.parametrize("r,size", [(1, 3), (2, 6), (3, 11), (4, 21)])
def test_catalog_sizes(r, size):
    assert len(extremal_rays(r)) == size


def test_r2_catalog_is_the_tripods():
    got = {e.measure for e in extremal_rays(2)}
    want = {tripod(2, x, y, 2 - x - y) for x in range(3) for y in range(3 - x)}
    assert got == want
    assert sum(1 for x in range(3) for y in range(3 - x) if sum(v > 0 for v in (x, y, 2 - x - y)) >= 2) == 3


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_catalog_entries_are_extreme_rays(r):
    frame = get_frame(r)
    for e in extremal_rays(r):
        m = e.measure
        assert validate(m).ok
        rows, cols = balance_matrix(frame, sorted(m.support()))
        # a ray of a pointed cone given by equalities and signs: the support has a one-dimensional solution space
        assert rank(rows, len(cols)) == len(cols) - 1
        assert support_generator(frame, m.support()) == m
        assert e.sigma_self == sigma(m, m)


def test_extremal_rays_limit():
    with pytest.raises(ResourceLimit):
        extremal_rays(6)


def test_catalog_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("LRMESA_CACHE_DIR", str(tmp_path))
    _memo_catalog.cache_clear()
    cat = extremal_rays(2)
    path = cache_path(2, tmp_path)
    assert path.exists() and path.name.startswith("catalog-r2-")
    again = Catalog.from_dict(json.loads(path.read_text()))
    assert [e.measure for e in again] == [e.measure for e in cat]
    _memo_catalog.cache_clear()
    assert [e.measure for e in extremal_rays(2)] == [e.measure for e in cat]
    _memo_catalog.cache_clear()


def test_labelling(cat3):
    lab = label_r3(cat3)
    assert lab is not None and set(lab) == set(R3_LABELS)
    mat = sigma_matrix([cat3[lab[x]].measure for x in R3_LABELS])
    pat = r3_pattern()
    for (i, a), (j, b) in itertools.product(enumerate(R3_LABELS), repeat=2):
        assert mat[i][j] == pat.get((a, b), 0)


def test_decomposition_examples(cat3, labels3):
    assert extremal_decomposition(T3) == [(1, T3)]
    mu1, mu2 = cat3[labels3["mu1"]].measure, cat3[labels3["mu2"]].measure
    assert sigma(mu1, mu2) == sigma(mu2, mu1) == 0
    m = add(scale(mu1, 2), mu2)
    assert sorted(extremal_decomposition(m)) == sorted([(2, mu1), (1, mu2)])
    tau = add(cat3[labels3["tau1"]].measure, cat3[labels3["tau2"]].measure)
    with pytest.raises(NotRigid):
        extremal_decomposition(tau)


@given(st.integers(0, 2**32))
def test_decomposition_reconstructs_rigid_combinations(seed):
    cat = extremal_rays(3)
    lab = label_r3(cat)
    rng = random.Random(seed)
    coeffs = {x: rng.choice([0, 0, 1, 2]) for x in R3_LABELS}
    # rigidity criterion: no full nu-cycle, rho-cycle or tau-pair
    for group in (("nu1", "nu2", "nu3"), ("rho1", "rho2", "rho3"), ("tau1", "tau2")):
        if all(coeffs[g] for g in group):
            coeffs[rng.choice(group)] = 0
    m = combination([(c, cat[lab[x]].measure) for x, c in coeffs.items() if c], 3)
    parts = extremal_decomposition(m)
    assert combination(parts, 3) == m
    members = {e.measure for e in cat}
    assert all(s in members for _, s in parts)
    expected = sorted((c, cat[lab[x]].measure) for x, c in coeffs.items() if c)
    assert sorted(parts) == expected
    for i, j in itertools.combinations(range(len(parts)), 2):
        # sigma(m_j, m_i) > 0 forces i <= j
        assert sigma(parts[i][1], parts[j][1]) <= 0


def test_delta_examples():
    root = Edge(2, 1, "U")
    assert delta_check(T3, T3, root) == (0, 0)
    assert delta_check(T3, zero(3), root) == (0, 0)
    two = exit_profile(scale(T3, 2))
    assert sigma(T3, scale(T3, 2)) == -2 and two.omega == 2
