import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from latgate.linalg import IntMatrix, LinalgError, RationalMatrix, integer_rank

MR = RationalMatrix([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]])
S_GATE = RationalMatrix([[Fraction(x, 2) for x in row] for row in [
    [1, -1, 1, 1], [1, 1, 1, -1], [1, -1, -1, -1], [1, 1, -1, 1]]])


def cofactor_det(m: RationalMatrix) -> Fraction:
    """Independent oracle: recursive cofactor expansion."""
    n = m.rows
    if n == 1:
        return m[0, 0]
    total = Fraction(0)
    for j in range(n):
        minor = RationalMatrix([
            [m[i, k] for k in range(n) if k != j] for i in range(1, n)
        ])
        total += (-1) ** j * m[0, j] * cofactor_det(minor)
    return total


def rand_int_matrix(rng, n, m=None, lo=-5, hi=5):
    m = m or n
    return [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]


# ---------------------------------------------------------------- product
def test_identity_product():
    i2 = RationalMatrix.identity(2)
    assert i2 @ i2 == i2


def test_mr_times_inverse_is_identity():
    assert (MR @ MR.inverse()).is_identity()


def test_gate_times_transpose_is_identity():
    assert (S_GATE @ S_GATE.transpose()).is_identity()


def test_product_dimension_mismatch():
    with pytest.raises(LinalgError):
        RationalMatrix.identity(2) @ RationalMatrix.identity(3)


# ---------------------------------------------------------------- inverse
def test_inverse_identity():
    assert RationalMatrix.identity(3).inverse() == RationalMatrix.identity(3)


def test_inverse_diagonal():
    m = RationalMatrix([[2, 0], [0, 2]])
    assert m.inverse() == RationalMatrix([[Fraction(1, 2), 0], [0, Fraction(1, 2)]])


def test_inverse_mr_entries():
    inv = MR.inverse()
    assert (MR @ inv).is_identity()
    assert {abs(x) for row in inv.entries for x in row} <= {0, Fraction(1, 2)}


def test_inverse_singular():
    with pytest.raises(LinalgError):
        RationalMatrix([[1, 2], [2, 4]]).inverse()


def test_inverse_roundtrip_random():
    rng = random.Random(1)
    done = 0
    while done < 100:
        m = RationalMatrix(rand_int_matrix(rng, rng.randint(2, 5)))
        if m.determinant() == 0:
            continue
        assert (m @ m.inverse()).is_identity()
        done += 1


# ---------------------------------------------------------------- determinant
def test_det_identity():
    assert RationalMatrix.identity(5).determinant() == 1


def test_det_mr():
    assert abs(MR.determinant()) == 4
    assert MR.determinant() == cofactor_det(MR)


def test_det_e8_root_basis():
    rows = [
        [2, -2, 0, 0, 0, 0, 0, 0], [0, 2, -2, 0, 0, 0, 0, 0],
        [0, 0, 2, -2, 0, 0, 0, 0], [0, 0, 0, 2, -2, 0, 0, 0],
        [0, 0, 0, 0, 2, -2, 0, 0], [0, 0, 0, 0, 0, 2, -2, 0],
        [0, 0, 0, 0, 0, 0, 2, -2], [1, 1, 1, 1, 1, -1, -1, -1],
    ]
    m = RationalMatrix(rows)
    det = m.determinant()
    assert abs(det) == 256
    # normalized Gram (divisor 4) has determinant 1: det(M)^2 / 4^8 = 1
    assert det * det == Fraction(4) ** 8


def test_det_against_cofactor_oracle_random():
    rng = random.Random(2)
    for _ in range(100):
        m = RationalMatrix(rand_int_matrix(rng, rng.randint(1, 4)))
        assert m.determinant() == cofactor_det(m)


def test_det_multiplicative_random():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(2, 4)
        a = RationalMatrix(rand_int_matrix(rng, n))
        b = RationalMatrix(rand_int_matrix(rng, n))
        assert (a @ b).determinant() == a.determinant() * b.determinant()


def test_det_non_square():
    with pytest.raises(LinalgError):
        RationalMatrix([[1, 2, 3], [4, 5, 6]]).determinant()


# ---------------------------------------------------------------- HNF
def test_hnf_identity():
    i4 = IntMatrix.identity(4)
    h, t = i4.hermite_normal_form()
    assert h == i4 and t == i4


def test_hnf_canonical_2x2():
    h, t = IntMatrix([[2, 0], [1, 1]]).hermite_normal_form()
    assert h == IntMatrix([[1, 1], [0, 2]])
    assert abs(t.determinant()) == 1


def test_hnf_2x2_is_reachable_by_unimodular_transform():
    # oracle: enumerate small unimodular transforms, check the canonical
    # form is among the reachable row-style echelon forms and is unique
    a = IntMatrix([[2, 0], [1, 1]])
    target = IntMatrix([[1, 1], [0, 2]])
    reachable = set()
    rng = range(-3, 4)
    for t11 in rng:
        for t12 in rng:
            for t21 in rng:
                for t22 in rng:
                    if t11 * t22 - t12 * t21 in (1, -1):
                        m = IntMatrix([[t11, t12], [t21, t22]]) @ a
                        e = m.entries
                        if e[1][0] == 0 and e[0][0] > 0 and e[1][1] > 0 and 0 <= e[0][1] < e[1][1]:
                            reachable.add(e)
    assert reachable == {target.entries}


def test_hnf_hamming_stack():
    from latgate.lattices import extended_hamming_code

    code = extended_hamming_code()
    rows = [list(r) for r in code.generator.entries]
    rows += [[2 if j == i else 0 for j in range(8)] for i in range(8)]
    h, t = IntMatrix(rows).hermite_normal_form()
    basis = [r for r in h.entries if any(r)]
    assert len(basis) == 8
    assert abs(IntMatrix(basis).determinant()) == 16  # 2^8 / 2^4


def test_hnf_properties_random():
    rng = random.Random(4)
    for _ in range(100):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        a = IntMatrix(rand_int_matrix(rng, n, m))
        h, t = a.hermite_normal_form()
        assert abs(t.determinant()) == 1
        assert t @ a == h
        # canonical shape: pivots positive, zeros below, reduced above
        piv_cols = []
        for row in h.entries:
            nz = next((j for j, x in enumerate(row) if x), None)
            if nz is None:
                continue
            assert row[nz] > 0
            piv_cols.append(nz)
        assert piv_cols == sorted(piv_cols)
        for r, col in enumerate(piv_cols):
            for above in range(r):
                assert 0 <= h[above, col] < h[r, col]
            for below in range(r + 1, h.rows):
                assert h[below, col] == 0


# ---------------------------------------------------------------- SNF
def test_snf_rank_trivial():
    s, rank = IntMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]]).smith_normal_form()
    assert rank == 2


def test_snf_eq14_amplitude_matrix():
    m = IntMatrix([[2, 1, -1, 1], [0, 0, 1, 0], [1, 0, 0, 0]])
    _, rank = m.smith_normal_form()
    assert rank == 3


def test_snf_eq15_amplitude_matrix():
    m = IntMatrix([
        [0, -2, 0, 0],
        [1, 1, 0, 0],
        [1, 0, 1, 0],
        [1, 0, 0, 1],
        [0, 0, 0, 0],
        [-1, -1, -2, 0],
    ])
    _, rank = m.smith_normal_form()
    assert rank == 4


def test_snf_properties_random():
    rng = random.Random(5)
    for _ in range(120):
        n, m = rng.randint(4, 6), rng.randint(4, 6)
        a = IntMatrix(rand_int_matrix(rng, n, m))
        s, rank = a.smith_normal_form()
        divisors = [s[i, i] for i in range(rank)]
        assert all(d > 0 for d in divisors)
        for d1, d2 in zip(divisors, divisors[1:]):
            assert d2 % d1 == 0
        assert rank == integer_rank(a.entries)
        for i in range(min(n, m)):
            for j in range(min(n, m)):
                if i != j:
                    assert s[i, j] == 0


# ---------------------------------------------------------------- integrality
def test_is_integral():
    assert RationalMatrix.identity(2).is_integral()
    assert not RationalMatrix.identity(2).scale(Fraction(1, 2)).is_integral()


def test_conjugated_gate_is_integral():
    u = MR @ S_GATE @ MR.inverse()
    assert u.is_integral()
    assert abs(u.determinant()) == 1


# ---------------------------------------------------------------- JSON
@given(st.lists(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=12),
                          min_size=1, max_size=4),
                min_size=1, max_size=4).filter(lambda rows: len({len(r) for r in rows}) == 1))
@settings(max_examples=60, deadline=None)
def test_matrix_json_roundtrip(rows):
    m = RationalMatrix(rows)
    obj = m.to_json()
    assert RationalMatrix.from_json(obj) == m
    # canonical denominator: LCM of entry denominators
    from math import lcm

    want = 1
    for row in m.entries:
        for x in row:
            want = lcm(want, x.denominator)
    assert obj["den"] == want


def test_json_negative_den_rejected():
    with pytest.raises(LinalgError):
        RationalMatrix.from_json({"rows": 1, "cols": 1, "den": 0, "num": [[1]]})


def test_int_matrix_json_roundtrip():
    m = IntMatrix([[1, -2], [3, 4]])
    assert IntMatrix.from_json(m.to_json()) == m
