import numpy as np
import pytest

from splitting import gf2

TRIANGLE = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]


def test_rank_and_nullspace():
    assert gf2.rank(TRIANGLE) == 2
    assert gf2.nullspace(TRIANGLE).tolist() == [[1, 1, 1]]
    assert gf2.rank(np.zeros((0, 4), dtype=np.uint8)) == 0


def test_nullspace_of_an_empty_matrix_is_everything():
    assert gf2.nullspace(np.zeros((0, 3), dtype=np.uint8)).tolist() == np.eye(3, dtype=np.uint8).tolist()


def test_rref_reports_pivots():
    reduced, pivots = gf2.rref(TRIANGLE)
    assert pivots == [0, 1]
    assert reduced.tolist() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]


@pytest.mark.parametrize('b', [[1, 1, 0], [0, 1, 1], [0, 0, 0]])
def test_solve_consistent(b):
    x = gf2.solve(TRIANGLE, b)
    assert x is not None
    assert ((np.array(TRIANGLE) @ x) % 2).tolist() == b


def test_solve_inconsistent():
    assert gf2.solve(TRIANGLE, [1, 0, 0]) is None


def test_in_rowspace():
    assert gf2.in_rowspace([1, 0, 1], TRIANGLE)
    assert not gf2.in_rowspace([1, 0, 0], TRIANGLE)
    assert gf2.in_rowspace([0, 0], np.zeros((0, 2), dtype=np.uint8))
