import itertools
import random
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cubelab import auxiliary as aux
from cubelab import circle, counting, cubes
from cubelab.matrices import (
    IntMatrix,
    all_square_minors_nonsingular,
    determinant,
    format_matrix,
    hns_block_equivalence,
    parse_matrix,
    rotate180,
)

small_ints = st.integers(-4, 4)


def int_matrices(min_rows=1, max_rows=3, min_cols=1, max_cols=4):
    return st.integers(min_rows, max_rows).flatmap(
        lambda r: st.integers(max(r, min_cols), max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(int_matrices())
def test_text_format_roundtrip(rows):
    M = IntMatrix.from_rows(rows)
    assert parse_matrix(format_matrix(M)) == M


@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_leibniz(rows):
    want = 0
    for perm in itertools.permutations(range(3)):
        sign = (-1) ** sum(1 for i in range(3) for j in range(i) if perm[j] > perm[i])
        want += sign * rows[0][perm[0]] * rows[1][perm[1]] * rows[2][perm[2]]
    assert determinant(IntMatrix.from_rows(rows)) == want


@given(int_matrices(1, 3, 1, 4))
def test_minor_condition_survives_rotation(rows):
    M = IntMatrix.from_rows(rows)
    assert all_square_minors_nonsingular(M) == all_square_minors_nonsingular(rotate180(M))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=2, max_size=2))
def test_block_criterion_equivalence(rows):
    lhs, rhs = hns_block_equivalence(IntMatrix.from_rows(rows))
    assert lhs == rhs


@settings(max_examples=15)
@given(st.integers(0, 2), st.integers(3, 4), st.integers(0, 10**6))
def test_random_auxiliary_matrices_validate(n, r, seed):
    rng = random.Random(seed)
    t = rng.randint(2, r)
    shape = aux.AuxShape(n, r, t, rng.randint(0, 1))
    D = aux.random_auxiliary(shape, rng)
    assert D.D.shape == (shape.R, shape.S)
    assert aux.check_auxiliary(D.D, shape) is None


@settings(max_examples=10)
@given(st.sampled_from([(1, 3), (1, 4), (2, 3)]), st.integers(0, 10**6))
def test_complification_preserves_class(nr, seed):
    n, r = nr
    adj = aux.random_adjuvant(n, r, random.Random(seed))
    out = aux.complify(adj)
    assert aux.check_adjuvant(out.matrix, 2 * n, r) is None


@given(st.integers(3, 3000))
def test_table_agrees_with_brute_force(n):
    assert cubes.rho_table(n).counts[n] == cubes.rho_brute(n)


@settings(max_examples=20)
@given(st.integers(50, 20000), st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)]))
def test_smooth_counts_are_dominated(N, eta):
    assert (cubes.rho_table(N, cubes.Smooth(eta)).counts <= cubes.rho_table(N).counts).all()


@given(st.integers(2, 300), st.integers(2, 300))
def test_smooth_set_membership(P, Z):
    Z = min(Z, P)
    S = cubes.smooth_set(P, Z)
    for k in range(1, P + 1):
        m, p, big = k, 2, 1
        while m > 1:
            while m % p == 0:
                m //= p
                big = p
            p += 1
        assert (k in S) == (big <= Z)


@settings(max_examples=25)
@given(st.lists(st.integers(-3, 3).filter(bool), min_size=2, max_size=3), st.integers(-30, 30),
       st.integers(1, 3), st.data())
def test_meet_in_middle_equals_direct(coeffs, h, P, data):
    split = data.draw(st.sets(st.integers(0, len(coeffs) - 1)))
    a = counting.count_system([coeffs], [h], P, signature=(1, -1), split=tuple(split)).count
    b = counting.count_system([coeffs], [h], P, signature=(1, -1), strategy="direct").count
    assert a == b


@settings(max_examples=20)
@given(st.integers(1, 5), st.integers(1, 9))
def test_partition_count_invariance(P, parts):
    D = aux.default_auxiliary(aux.AuxShape(0, 3, 2, 0))
    assert counting.count_I_omega(D, P, partitions=parts).count == counting.count_I_omega(D, P).count


@given(st.integers(1, 400), st.integers(0, 399))
def test_gauss_sum_periodic_and_conjugate(q, a):
    s = circle.gauss_sum(q, a)
    assert abs(circle.gauss_sum(q, a + q) - s) < 1e-8
    assert abs(circle.gauss_sum(q, -a) - s.conjugate()) < 1e-8
    assert abs(s) <= q + 1e-9


@given(st.fractions(min_value=0, max_value=Fraction(999, 1000), max_denominator=10**6), st.integers(2, 30),
       st.sampled_from(["wide", "narrow"]))
def test_arc_membership_oracle(alpha, P, family):
    dis = circle.ArcDissection(family, P)
    assert circle.arc_membership(alpha, dis) == circle.arc_membership_bruteforce(alpha, dis)


@given(st.floats(-50, 50, allow_nan=False), st.integers(1, 6))
def test_weyl_sum_symmetry(alpha, P):
    spec = circle.WeylSumSpec(P)
    f = circle.weyl_sum(spec, alpha)
    assert abs(circle.weyl_sum(spec, -alpha) - f.conjugate()) < 1e-8
    assert abs(circle.weyl_sum(spec, alpha + 1) - f) < 1e-7
    assert abs(f) <= P + 1e-9


@given(st.floats(-1e4, 1e4, allow_nan=False))
def test_unit_integral_bounded_and_symmetric(kappa):
    w = circle.w_unit(kappa)
    assert abs(w) <= 1 + 1e-12
    assert abs(circle.w_unit(-kappa) - np.conj(w)) < 1e-12
