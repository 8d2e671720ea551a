import random

import pytest
from hypothesis import given, strategies as st

from simplexor.codes import simplex_generator, weight2_matrix
from simplexor.gf2 import (
    BitMatrix,
    BitVector,
    DimensionMismatch,
    RankZero,
    TooLarge,
    format_matrix,
    hstack,
    is_right_invertible,
    min_weight_nonzero_rowspan,
    nullspace,
    parse_matrix,
    rank,
    solve_right,
    vstack,
)

SIMPLEX3_TEXT = "3 7\n1001101\n0101011\n0010111"


@st.composite
def bit_matrices(draw, max_rows=8, max_cols=16):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    bits = draw(st.lists(st.integers(0, (1 << cols) - 1), min_size=rows, max_size=rows))
    return BitMatrix(rows, cols, tuple(bits))


def test_bitvector_rejects_bits_beyond_length():
    with pytest.raises(DimensionMismatch):
        BitVector(3, 0b1000)


def test_bitvector_weight_and_xor():
    v = BitVector.from_bits([1, 0, 1, 1])
    w = BitVector.from_bits([0, 1, 1, 0])
    assert v.weight() == 3
    assert (v ^ w).to_01() == "1101"
    with pytest.raises(DimensionMismatch):
        v ^ BitVector(3, 0)


def test_bitmatrix_rejects_ragged_and_wide_rows():
    with pytest.raises(DimensionMismatch):
        BitMatrix.from_rows([[1, 0], [1]])
    with pytest.raises(DimensionMismatch):
        BitMatrix(1, 2, (0b100,))


def test_matrix_text_roundtrip_golden():
    m = parse_matrix(SIMPLEX3_TEXT)
    assert m == simplex_generator(3)
    assert format_matrix(m) == SIMPLEX3_TEXT


@given(bit_matrices())
def test_matrix_text_roundtrip(m):
    assert parse_matrix(format_matrix(m)) == m


def test_stacking():
    a = BitMatrix.identity(2)
    b = BitMatrix.zero(2, 2)
    assert hstack([a, b]).cols == 4
    assert vstack([a, b]).rows == 4
    assert hstack([a, b]).row(0).to_01() == "1000"


def test_rank_simplex3():
    assert rank(simplex_generator(3)) == 3


def test_rank_zero_matrix():
    assert rank(BitMatrix.zero(4, 9)) == 0


def test_rank_of_random_elementary_product():
    # row operations on the identity preserve rank
    rng = random.Random(20240)
    rows = [1 << i for i in range(5)]
    for _ in range(40):
        i, j = rng.sample(range(5), 2)
        rows[i] ^= rows[j]
    assert rank(BitMatrix(5, 5, tuple(rows))) == 5


@given(bit_matrices(max_rows=16, max_cols=32))
def test_rank_equals_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())


def test_right_invertible_identity_and_zero_row():
    assert is_right_invertible(BitMatrix.identity(3))
    assert not is_right_invertible(BitMatrix.from_rows([[1, 0], [0, 0]]))


def test_right_invertible_live_subgenerator():
    g = simplex_generator(3).delete_columns({0, 1, 3, 5})
    assert is_right_invertible(g)


@given(bit_matrices())
def test_right_invertible_iff_columns_of_transpose_span(m):
    assert is_right_invertible(m) == (rank(m.transpose()) == m.rows)


def test_solve_right_identity():
    t = BitVector.from_bits([1, 0, 1])
    assert solve_right(BitMatrix.identity(3), t) == t


def test_solve_right_recovers_message_from_live_columns():
    g = simplex_generator(3)
    rng = random.Random(7)
    live = [2, 4, 6]
    sub = g.select_columns(live)
    for _ in range(20):
        u = BitVector(3, rng.getrandbits(3))
        c = g.mul_vec(u)
        target = BitVector.from_bits([c.bit(j) for j in live])
        assert solve_right(sub, target) == u


def test_solve_right_no_solution_and_mismatch():
    zero = BitMatrix.zero(2, 3)
    assert solve_right(zero, BitVector.from_bits([1, 0, 0])) is None
    with pytest.raises(DimensionMismatch):
        solve_right(zero, BitVector.from_bits([1, 0]))


@given(bit_matrices(), st.integers(0, (1 << 8) - 1))
def test_solve_right_solutions_reproduce_target(m, ubits):
    u = BitVector(m.rows, ubits & ((1 << m.rows) - 1))
    target = m.mul_vec(u)
    got = solve_right(m, target)
    assert got is not None
    assert m.mul_vec(got) == target


def test_min_weight_simplex3():
    assert min_weight_nonzero_rowspan(simplex_generator(3)) == 4


def test_min_weight_single_row_all_ones():
    assert min_weight_nonzero_rowspan(BitMatrix(1, 9, ((1 << 9) - 1,))) == 9


def test_min_weight_weight2_matrix():
    assert min_weight_nonzero_rowspan(weight2_matrix(4)) == 3


def test_min_weight_guards():
    with pytest.raises(RankZero):
        min_weight_nonzero_rowspan(BitMatrix.zero(2, 4))
    with pytest.raises(TooLarge):
        min_weight_nonzero_rowspan(BitMatrix.identity(25))


@given(bit_matrices(max_rows=5, max_cols=10), st.randoms(use_true_random=False))
def test_min_weight_invariant_under_row_operations(m, rng):
    try:
        expected = min_weight_nonzero_rowspan(m)
    except RankZero:
        return
    # shuffles and row additions are invertible, so the row span is unchanged
    rows = list(m.row_bits)
    rng.shuffle(rows)
    for _ in range(6):
        i, j = rng.randrange(m.rows), rng.randrange(m.rows)
        if i != j:
            rows[i] ^= rows[j]
    assert min_weight_nonzero_rowspan(BitMatrix(m.rows, m.cols, tuple(rows))) == expected


@given(bit_matrices())
def test_nullspace_is_the_right_kernel(m):
    ns = nullspace(m)
    assert ns.rows == m.cols - rank(m)
    assert (m @ ns.transpose()).is_zero()
