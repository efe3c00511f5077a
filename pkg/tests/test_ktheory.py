from math import comb

import pytest

from stiefel_sections.ktheory import (
    KClass,
    TruncProjKGroup,
    adams_matrix,
    adams_on_monomial,
    matrix_to_json,
    poly_mul_trunc,
    poly_pow_trunc,
    restriction_matrix,
)


def test_poly_helpers():
    # (1 + u)^2 truncated below degree 2
    assert poly_mul_trunc([1, 1], [1, 1], 2) == [1, 2]
    assert poly_pow_trunc([1, 1], 3, 4) == [1, 3, 3, 1]
    assert poly_pow_trunc([0, 2, 1], 2, 4) == [0, 0, 4, 4]


def test_group_basis_and_validation():
    g = TruncProjKGroup(n=5, m=3)
    assert list(g.basis) == [3, 4]
    assert g.rank == 2
    with pytest.raises(ValueError):
        TruncProjKGroup(n=3, m=3)


def test_adams_psi2_closed_form():
    # psi^2(u^i) = sum_j C(i,j) 2^(i-j) u^(i+j), truncated below u^n
    for n in range(2, 12):
        for i in range(1, n):
            cls = adams_on_monomial(2, i, n)
            for exp, coeff in zip(cls.owner.basis, cls.coefficients):
                j = exp - i
                want = comb(i, j) * 2 ** (i - j) if 0 <= j <= i else 0
                assert coeff == want, (n, i, exp)


def test_adams_matrix_example():
    g = TruncProjKGroup(n=5, m=3)
    assert adams_matrix(2, g).to_lists() == [[8, 0], [12, 16]]


def test_adams_matrix_triangular_with_power_diagonal():
    g = TruncProjKGroup(n=9, m=2)
    for k in (2, 3, 5):
        mat = adams_matrix(k, g)
        for a, exp_a in enumerate(g.basis):
            assert mat.entries[a][a] == k ** exp_a
            for b in range(a + 1, mat.cols):
                assert mat.entries[a][b] == 0


def test_lambda_ring_law_small():
    g = TruncProjKGroup(n=10, m=4)
    for a in (2, 3):
        for b in (2, 5):
            assert adams_matrix(a, g) @ adams_matrix(b, g) == adams_matrix(a * b, g)


def test_restriction_commutes_with_adams():
    deep = TruncProjKGroup(n=8, m=6)
    shallow = TruncProjKGroup(n=8, m=5)
    rest = restriction_matrix(deep, shallow)
    for k in (2, 3):
        assert rest @ adams_matrix(k, deep) == adams_matrix(k, shallow) @ rest


def test_matrix_json_roundtrip():
    g = TruncProjKGroup(n=6, m=4)
    blob = matrix_to_json(g, adams_matrix(2, g))
    assert blob["n"] == 6 and blob["m"] == 4
    assert blob["entries"][0][0] == 2 ** 4


def test_kclass_validation():
    g = TruncProjKGroup(n=5, m=3)
    with pytest.raises(ValueError):
        KClass(owner=g, coefficients=(1,))
