import random
import xml.etree.ElementTree as ET
from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _gen import random_tripod_sum
from lrmesa.errors import SigmaNotZero
from lrmesa.inflation import (
    boundary_positions,
    check_boundary,
    check_tiling,
    inflate,
    polygon_triangles,
    puzzle_triangles,
    render_svg,
    stretched_exits,
    triangles,
)
from lrmesa.measure import ExitProfile, add, exit_profile, index_triple, tripod, zero, zero_profile
from lrmesa.sigma import sigma

GOLDEN = Path(__file__).parent / "golden"
SVG = "{http://www.w3.org/2000/svg}"
T3 = tripod(3, 1, 1, 1)


def _area(pz) -> int:
    return sum(puzzle_triangles(pz).values())


def test_zero_measure_single_piece():
    pz = inflate(zero(3))
    assert len(pz.whites) == 1 and pz.whites[0].translation == (0, 0)
    assert not pz.parallelograms and not pz.branches
    assert check_tiling(pz) and pz.n == 3


def test_tripod_puzzle():
    pz = inflate(T3)
    assert (len(pz.whites), len(pz.parallelograms), len(pz.branches)) == (3, 3, 1)
    assert len(pz.pieces) == 7
    assert pz.n == 4 and check_tiling(pz)
    assert all(len(polygon_triangles(q.polygon)) == 2 for q in pz.parallelograms)  # width one
    assert len(polygon_triangles(pz.branches[0].polygon)) == 1
    assert tuple(map(tuple, boundary_positions(pz))) == ((1, 3, 4),) * 3


def test_weight_three_example(cat3, labels3):
    for names in (("tau1", "tau2"), ("rho1", "rho2", "rho3")):
        m = zero(3)
        for x in names:
            m = add(m, cat3[labels3[x]].measure)
        pz = inflate(m)
        assert pz.n == 6 and check_tiling(pz) and check_boundary(m, pz)
        assert _area(pz) == 36


@given(st.integers(1, 4), st.integers(0, 4), st.integers(0, 2**32))
def test_tiling_and_boundary_on_tripod_sums(r, w, seed):
    m = random_tripod_sum(random.Random(seed), r, w)
    pz = inflate(m)
    assert puzzle_triangles(pz) == Counter(triangles(r + w))
    assert tuple(map(tuple, boundary_positions(pz))) == index_triple(exit_profile(m)).sets()


def test_stretched_exits_examples():
    w = exit_profile(tripod(4, 2, 1, 1))
    assert stretched_exits(w, zero_profile(4)) == w
    mu = exit_profile(tripod(4, 1, 2, 1))
    assert sigma(w, mu) == 0
    big = stretched_exits(w, mu)
    assert big.r == 5 and big.alpha.index(1) == 3
    with pytest.raises(SigmaNotZero):
        stretched_exits(exit_profile(T3), exit_profile(T3))


@given(st.integers(1, 5), st.integers(0, 2**32))
def test_stretched_exits_valid(r, seed):
    rng = random.Random(seed)
    for _ in range(30):
        w = exit_profile(random_tripod_sum(rng, r, rng.randint(1, 3)))
        mu = exit_profile(random_tripod_sum(rng, r, rng.randint(0, 4)))
        if sigma(w, mu) == 0:
            big = stretched_exits(w, mu)
            assert isinstance(big, ExitProfile) and big.r == r + mu.omega and big.omega == w.omega
            assert sorted(x for s in big.sides() for x in s if x) == sorted(x for s in w.sides() for x in s if x)


def test_svg_measure():
    svg = render_svg(T3)
    root = ET.fromstring(svg.encode())
    assert root.tag == SVG + "svg"
    assert len(root.findall(SVG + "line")) == 6
    assert svg == render_svg(T3)
    assert svg == (GOLDEN / "tripod_r3.svg").read_text()


def test_svg_puzzle():
    svg = render_svg(inflate(T3))
    root = ET.fromstring(svg.encode())
    polys = root.findall(SVG + "polygon")
    fills = Counter(p.get("fill") for p in polys)
    assert fills["#555555"] == 3 and fills["#bbbbbb"] == 1
    assert svg == (GOLDEN / "tripod_r3_puzzle.svg").read_text()
    custom = render_svg(inflate(T3), palette={"dark": "#123456"}, scale=10)
    assert "#123456" in custom and "#555555" not in custom
