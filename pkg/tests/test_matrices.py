from fractions import Fraction

import pytest

from cubelab.errors import ValidationError
from cubelab.matrices import (
    IntMatrix,
    all_square_minors_nonsingular,
    determinant,
    first_singular_minor,
    flip_columns,
    format_matrix,
    hns_block_equivalence,
    inverse,
    is_highly_nonsingular,
    parse_inline,
    parse_matrix,
    rank,
    read_matrix,
    rotate180,
    write_matrix,
)


def test_determinant_small():
    assert determinant(IntMatrix.from_rows([[2, 1], [7, 4]])) == 1
    assert determinant(IntMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])) == 0
    assert determinant(IntMatrix.identity(5)) == 1


def test_determinant_rejects_rectangular():
    with pytest.raises(ValidationError):
        determinant(IntMatrix.from_rows([[1, 2, 3]]))


def test_inverse_roundtrip():
    M = IntMatrix.from_rows([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    Mi = inverse(M)
    for i in range(3):
        for j in range(3):
            s = sum(Fraction(M[i, k]) * Mi[k, j] for k in range(3))
            assert s == (1 if i == j else 0)


def test_inverse_of_singular_matrix_fails():
    with pytest.raises(ValidationError):
        inverse(IntMatrix.from_rows([[1, 2], [2, 4]]))


def test_worked_block_has_nonsingular_minors():
    M = IntMatrix.from_rows([[7, 5, 6, 3], [7, 1, 4, 8], [9, 4, 5, 7], [6, 3, 3, 8]])
    assert all_square_minors_nonsingular(M)
    assert first_singular_minor(M) is None


def test_zero_entry_is_a_singular_minor():
    M = IntMatrix.from_rows([[1, 0], [2, 3]])
    assert not all_square_minors_nonsingular(M)
    rows, cols = first_singular_minor(M)
    assert (tuple(rows), tuple(cols)) == ((0,), (1,))


def test_rank():
    assert rank(IntMatrix.from_rows([[1, 2], [2, 4], [0, 0]])) == 1
    assert rank(IntMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 2]])) == 2


def test_highly_nonsingular_example():
    A = IntMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 2]])
    assert is_highly_nonsingular(A)
    assert hns_block_equivalence(A) == (True, True)
    B = IntMatrix.from_rows([[1, 0, 1, 2], [0, 1, 1, 2]])
    assert not is_highly_nonsingular(B)
    assert hns_block_equivalence(B) == (False, False)


def test_flips_are_involutions():
    M = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert flip_columns(flip_columns(M)) == M
    assert rotate180(rotate180(M)) == M
    assert rotate180(M).row(0) == (6, 5, 4)


def test_text_format_roundtrip(tmp_path):
    M = IntMatrix.from_rows([[1, -2, 3], [0, 5, -6]])
    assert format_matrix(M).splitlines()[0] == "2 3"
    assert parse_matrix(format_matrix(M)) == M
    path = tmp_path / "m.txt"
    write_matrix(M, path)
    assert read_matrix(path) == M


def test_parse_inline():
    assert parse_inline("1,0;0,1") == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        parse_inline("1,0;1")


def test_parse_matrix_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 2\n")
