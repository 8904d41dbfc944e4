import itertools
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from lrmesa.linalg import det, kernel, primitive, rank, rref

small = st.integers(-4, 4)


def _leibniz(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += (-1) ** inv * prod
    return total


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_leibniz(m):
    assert det(m) == _leibniz(m)


@given(st.integers(1, 5), st.integers(0, 5), st.data())
def test_kernel_and_rank(ncols, nrows, data):
    rows = [data.draw(st.lists(small, min_size=ncols, max_size=ncols)) for _ in range(nrows)]
    ker = kernel(rows, ncols)
    assert len(ker) == ncols - rank(rows, ncols)
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in rows)
    if ker:
        assert rank(ker, ncols) == len(ker)
    red, piv = rref(rows, ncols)
    assert rref(red, ncols) == (red, piv)


def test_primitive():
    assert primitive([Fraction(1, 2), Fraction(3, 4), 0]) == [2, 3, 0]
    assert primitive([4, -6]) == [2, -3]
