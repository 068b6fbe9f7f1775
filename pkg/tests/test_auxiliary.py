import random
from pathlib import Path

import pytest

from cubelab import auxiliary as aux
from cubelab.errors import ValidationError
from cubelab.matrices import IntMatrix, is_highly_nonsingular, read_matrix

DATA = Path(__file__).parent / "data"


def test_shape_dimensions():
    sh = aux.AuxShape(3, 4, 4, 0)
    assert (sh.R, sh.S) == (13, 25)
    assert aux.AuxShape(0, 3, 2, 1).S == 4


@pytest.mark.parametrize("bad", [(0, 1, 2, 0), (1, 3, 1, 0), (1, 3, 3, 2), (-1, 3, 3, 0)])
def test_shape_rejects_out_of_range(bad):
    with pytest.raises(ValidationError):
        aux.AuxShape(*bad)


def test_build_matches_worked_example():
    shape = aux.AuxShape(3, 4, 4, 0)
    D = aux.build_auxiliary(shape, [8] * 4, [aux.EXAMPLE_BLOCK] * 4)
    assert D.D == read_matrix(DATA / "worked_13x25.txt")
    assert aux.check_auxiliary(D.D, shape) is None


def test_build_rejects_zero_lambda_and_singular_block():
    shape = aux.AuxShape(0, 3, 2, 0)
    good = aux.default_block(2, 2)
    with pytest.raises(ValidationError):
        aux.build_auxiliary(shape, [0], [good])
    with pytest.raises(ValidationError):
        aux.build_auxiliary(shape, [1], [IntMatrix.from_rows([[1, 2], [2, 4]])])


def test_check_reports_perturbed_entry():
    shape = aux.AuxShape(3, 4, 4, 0)
    D = aux.default_auxiliary(shape, lam=8).D
    rows = D.tolist()
    rows[0][5] = 1
    assert aux.check_auxiliary(IntMatrix.from_rows(rows), shape) is not None


def test_first_row_column_deletion_of_worked_example():
    D = read_matrix(DATA / "worked_13x25.txt")
    shape = aux.AuxShape(3, 4, 4, 0)
    rows, cols, claim = aux.deletion_pattern(shape, "D2")
    assert (rows, cols, claim) == ([0], [0], aux.AuxShape(3, 4, 3, 1))
    out = aux.aux_deletion(D, rows, cols, claim)
    assert out.D.shape == (12, 24)


@pytest.mark.parametrize("shape,pattern", [
    (aux.AuxShape(2, 3, 3, 0), "D1"),
    (aux.AuxShape(1, 3, 3, 0), "D2"),
    (aux.AuxShape(2, 3, 2, 0), "D3"),
    (aux.AuxShape(2, 4, 2, 0), "D4"),
    (aux.AuxShape(1, 3, 2, 1), "D5"),
    (aux.AuxShape(2, 4, 3, 0), "D6"),
])
def test_deletion_patterns_validate(shape, pattern, rng):
    D = aux.random_auxiliary(shape, rng)
    rows, cols, claim = aux.deletion_pattern(shape, pattern)
    out = aux.aux_deletion(D, rows, cols, claim)
    assert out.shape == claim


def test_pattern_rejects_inapplicable_shape():
    with pytest.raises(ValidationError):
        aux.deletion_pattern(aux.AuxShape(1, 3, 2, 0), "D2")


@pytest.mark.parametrize("n,r", [(1, 3), (1, 4), (2, 3)])
def test_random_adjuvant_validates(n, r, rng):
    adj = aux.random_adjuvant(n, r, rng)
    R = n * (r - 1)
    assert adj.matrix.shape == (R + 1, 2 * R + 2)
    assert aux.check_adjuvant(adj.matrix, n, r) is None


def test_constructive_and_bruteforce_validation_agree(rng):
    for _ in range(5):
        adj = aux.random_adjuvant(1, 3, rng)
        assert aux.adjuvant_bruteforce(adj.matrix, 1, 3)
    bad = IntMatrix.from_rows([[1, 1, 1, 1, 1, 1], [1, 2, 3, 4, 5, 6], [1, 4, 9, 16, 25, 36]])
    assert aux.check_adjuvant(bad, 1, 3) is not None
    assert not aux.adjuvant_bruteforce(bad, 1, 3)


@pytest.mark.parametrize("n,r", [(1, 3), (1, 4), (2, 3)])
def test_complify_doubles_type(n, r, rng):
    adj = aux.random_adjuvant(n, r, rng)
    R = n * (r - 1)
    once = aux.complify(adj)
    assert (once.n, once.r) == (2 * n, r)
    assert once.matrix.shape == (2 * R + 1, 4 * R + 2)
    assert aux.check_adjuvant(once.matrix, 2 * n, r) is None
    twice = aux.complify(once)
    assert aux.check_adjuvant(twice.matrix, 4 * n, r) is None


def test_adjuvant_from_hns_matrix(rng):
    for r in (2, 3):
        C = aux.random_hns(r, 2 * r, rng)
        adj, delta = aux.adjuvant_from_hns(C)
        assert (adj.n, adj.r) == (2, r)
        assert delta != 0


def test_reduction_annihilates_forms():
    A = IntMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 2]])
    B, H, lam = aux.eliminate_cone_variables(A, [0, 1, 0, 2])
    for n in [(1, 1), (2, 5), (7, 3)]:
        X = [sum(n[i] * A[i, j] for i in range(2)) for j in range(4)]
        assert all(sum(B[i, j] * X[j] for j in range(4)) == 0 for i in range(2))
    assert H == [sum(B[i, j] * h for j, h in enumerate([0, 1, 0, 2])) for i in range(2)]
    assert lam >= 1


def test_reduction_needs_highly_nonsingular():
    with pytest.raises(ValidationError):
        aux.eliminate_cone_variables(IntMatrix.from_rows([[1, 0, 1, 2], [0, 1, 1, 2]]))


def test_random_hns_is_hns():
    A = aux.random_hns(3, 6, random.Random(3))
    assert is_highly_nonsingular(A)


def test_leading_block_deletion_of_worked_example():
    D = read_matrix(DATA / "worked_13x25.txt")
    rows, cols, claim = aux.deletion_pattern(aux.AuxShape(3, 4, 4, 0), "D6")
    assert cols == [0, 1, 2, 3, 13, 14, 15]
    out = aux.aux_deletion(D, rows, cols, claim)
    assert out.shape == aux.AuxShape(2, 4, 3, 1) and out.D.shape == (9, 18)
