import random

import pytest

from stiefel_sections.lattice import IntMatrix, NoSolution
from stiefel_sections.retract_solver import (
    Exists,
    Impossible,
    RetractProblem,
    UnknownLayout,
    build_system,
    closed_form_constraints,
    decide_retract,
    scaled_equivariance_equivalence,
    verdict_to_json,
    verify_certificate,
    verify_witness,
)


def test_problem_validation():
    with pytest.raises(ValueError):
        RetractProblem(n=5, s=2, t=3, ks=frozenset({2}))
    with pytest.raises(ValueError):
        RetractProblem(n=5, s=3, t=2, ks=frozenset({1}))


def test_layout_roundtrip():
    lay = UnknownLayout(n=9, s=7, t=6)
    for idx in range(lay.num_unknowns):
        p, j = lay.entry(idx)
        assert lay.index(p, j) == idx


def test_forced_entries_are_identity_block():
    p = RetractProblem(n=7, s=5, t=3, ks=frozenset({2}))
    v = decide_retract(p)
    assert isinstance(v, Impossible)


def test_two_step_shape_small_instances():
    # V-shape (n, n-2, n-4): no psi^2-equivariant retract
    for n in (5, 6, 7, 8, 13, 20):
        p = RetractProblem(n=n, s=n - 2, t=n - 4, ks=frozenset({2}))
        v = decide_retract(p)
        assert isinstance(v, Impossible)
        assert verify_certificate(p, v)


def test_one_step_shape_small_instances():
    for n in (4, 5, 9, 10, 26, 28):
        p = RetractProblem(n=n, s=n - 2, t=n - 3, ks=frozenset({2}))
        assert isinstance(decide_retract(p), Impossible)


def test_one_step_exceptional_class():
    # n = 3 (mod 24): the psi^2 system becomes solvable
    p = RetractProblem(n=27, s=25, t=24, ks=frozenset({2}))
    v = decide_retract(p)
    assert isinstance(v, Exists)
    assert verify_witness(p, v.witness)


def test_witness_tampering_detected():
    p = RetractProblem(n=27, s=25, t=24, ks=frozenset({2}))
    v = decide_retract(p)
    rows = v.witness.to_lists()
    rows[0][0] += 1
    assert not verify_witness(p, IntMatrix.from_rows(rows))


def test_certificate_tampering_detected():
    p = RetractProblem(n=9, s=7, t=6, ks=frozenset({2}))
    v = decide_retract(p)
    cert = v.certificate
    bad = Impossible(certificate=NoSolution(
        certificate=tuple(y + 1 for y in cert.certificate), modulus=cert.modulus))
    assert not verify_certificate(p, bad)


def test_closed_form_matches_solver():
    for n in (5, 7, 9, 11, 27, 41):
        cf = closed_form_constraints(n)
        # one-step shape (t = n-3): solvable iff c and d are both integers,
        # which pins n == 3 (mod 24)
        p = RetractProblem(n=n, s=n - 2, t=n - 3, ks=frozenset({2}))
        solvable = cf.c_integral and cf.d_integral
        assert solvable == cf.mod24_condition == isinstance(decide_retract(p), Exists)
        # two-step shape (t = n-4): a and d can never both be integers
        assert not (cf.c_integral and cf.a_integral and cf.d_integral)
        p2 = RetractProblem(n=n, s=n - 2, t=n - 4, ks=frozenset({2}))
        assert isinstance(decide_retract(p2), Impossible)


def test_scaled_equivariance_is_equivalent():
    # multiplying the commutator equations through by k changes nothing
    for n in (6, 9, 12):
        p = RetractProblem(n=n, s=n - 2, t=n - 3, ks=frozenset({2}))
        assert scaled_equivariance_equivalence(p, 2)


def test_permutation_invariance():
    rng = random.Random(11)
    p = RetractProblem(n=12, s=10, t=9, ks=frozenset({2}))
    base = decide_retract(p)
    from stiefel_sections.retract_solver import _reduced_system

    nfree = len(_reduced_system(p)[2])
    for _ in range(5):
        order = list(range(nfree))
        rng.shuffle(order)
        v = decide_retract(p, unknown_order=tuple(order))
        assert type(v) is type(base)


def test_verdict_json_shapes():
    p = RetractProblem(n=9, s=7, t=6, ks=frozenset({2}))
    blob = verdict_to_json(p, decide_retract(p))
    assert blob["verdict"] == "impossible"
    assert blob["problem"] == {"n": 9, "s": 7, "t": 6, "ks": [2]}
    assert blob["certificate"]["modulus"] > 1


def test_build_system_dimensions():
    p = RetractProblem(n=9, s=7, t=6, ks=frozenset({2}))
    mat, rhs, layout = build_system(p)
    assert mat.cols == layout.num_unknowns
    assert mat.rows == len(rhs)
