import pytest

from stiefel_sections.cohomology import (
    JoinLineBasis,
    LineElement,
    SignedUnitMap,
    StiefelCohPresentation,
    derive_join_coefficients,
    intrinsic_join_pullback,
    join_line_basis,
    splitting_chase,
)


def test_presentation_generators():
    pres = StiefelCohPresentation(r=3, n=6)
    assert list(pres.generators) == [4, 5, 6]
    assert pres.bidegree(4) == (7, 4)


def test_line_basis_pairs():
    # V_2(A^5) * V_1(A^6): i in {4,5}, j = 6
    b = join_line_basis(2, 5, 1, 6, 10)
    assert b.pairs == ((4, 6),)
    b = join_line_basis(2, 5, 1, 6, 11)
    assert b.pairs == ((5, 6),)
    assert join_line_basis(2, 5, 1, 6, 8).rank == 0


def test_line_basis_multi_pair():
    b = join_line_basis(3, 6, 3, 8, 11)
    # i in {4,5,6}, j in {6,7,8}, i + j = 11
    assert b.pairs == ((4, 7), (5, 6))


def test_line_element_validation():
    b = join_line_basis(2, 5, 1, 6, 10)
    with pytest.raises(ValueError):
        LineElement(basis=b, coefficients=(1, 2))
    SignedUnitMap(values={10: LineElement(basis=b, coefficients=(1,))})
    with pytest.raises(ValueError):
        SignedUnitMap(values={10: LineElement(basis=b, coefficients=(3,))})


def test_pullback_full_support_units():
    elt = intrinsic_join_pullback(2, 5, 6, 10)
    assert all(abs(c) == 1 for c in elt.coefficients)
    assert elt.basis.rank == len(elt.coefficients)
    with pytest.raises(ValueError):
        intrinsic_join_pullback(2, 5, 7, 10)  # odd m unsupported


def test_pullback_range_check():
    # alpha_ell lives for n+m-r+1 <= ell <= n+m
    with pytest.raises(ValueError):
        intrinsic_join_pullback(2, 5, 6, 8)
    intrinsic_join_pullback(2, 5, 6, 11)


def test_derive_coefficients_all_units():
    jc = derive_join_coefficients(3, 6, 8)
    assert jc.all_units()
    # every live line is covered
    for ell in range(6 + 8 - 3 + 1, 6 + 8 + 1):
        pairs = join_line_basis(3, 6, 3, 8, ell).pairs
        assert pairs
        for i, j in pairs:
            assert jc.magnitudes[(ell, i, j)] == 1


def test_derive_coefficients_trace_rules():
    jc = derive_join_coefficients(3, 6, 8)
    rules = {s.rule for s in jc.trace}
    assert "base-case" in rules
    assert "generator-chase" in rules
    assert "inclusion-restriction" in rules
    assert "symmetric-diagram" in rules
    blob = jc.trace_json()
    assert all({"step", "rule", "citation"} <= set(d) for d in blob)


def test_splitting_chase_passes_in_regime():
    for r, n in ((2, 5), (3, 6), (4, 8)):
        m = r * n + 2 * (r - n) + (r * n) % 2  # smallest even m in regime
        rep = splitting_chase(r, n, m)
        assert rep.passed, (r, n, m, rep.failures)
        # rank-1 lines compose to a single symbolic unit
        for line in rep.lines:
            if line.source_rank == 1 and line.target_rank == 1:
                assert line.composite_coefficient == 1


def test_splitting_chase_rejects_short_m():
    with pytest.raises(ValueError):
        splitting_chase(3, 6, 4)
