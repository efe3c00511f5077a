"""The nine acceptance criteria, each with a stated time budget.

Every test prints a `criterion N ... PASS` line with its elapsed time; run
with `pytest -s` (or read the captured output) to see them.
"""

import random
import time
from math import comb

from stiefel_sections.cohomology import (
    derive_join_coefficients,
    join_line_basis,
    splitting_chase,
)
from stiefel_sections.connectivity import replay_proof
from stiefel_sections.ktheory import (
    TruncProjKGroup,
    adams_matrix,
    adams_on_monomial,
    poly_pow_trunc,
)
from stiefel_sections.retract_solver import (
    Exists,
    Impossible,
    RetractProblem,
    closed_form_constraints,
    decide_retract,
    verify_certificate,
    verify_witness,
)
from stiefel_sections.verdict import (
    NECESSARY_ONLY,
    NO_SECTION,
    SECTION_EXISTS,
    FieldDescriptor,
    SectionQuery,
    decide_section,
    verify_verdict,
)

CHAR0 = FieldDescriptor()


class _budget:
    def __init__(self, num, label, seconds):
        self.num, self.label, self.seconds = num, label, seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            status = "PASS" if elapsed < self.seconds else "FAIL (over budget)"
            print(f"criterion {self.num} ({self.label}): {status} "
                  f"in {elapsed:.2f}s / budget {self.seconds}s")
            assert elapsed < self.seconds, (
                f"criterion {self.num} exceeded {self.seconds}s ({elapsed:.2f}s)")
        else:
            print(f"criterion {self.num} ({self.label}): FAIL after {elapsed:.2f}s")


def test_criterion_1_adams_formula_fidelity():
    with _budget(1, "Adams formula fidelity", 1):
        for n in range(2, 31):
            for i in range(1, n):
                # oracle: independent expansion of (mu^2 + 2 mu)^i below mu^n
                poly = poly_pow_trunc([0, 2, 1], i, n)
                cls = adams_on_monomial(2, i, n)
                for exp, coeff in zip(cls.owner.basis, cls.coefficients):
                    oracle = poly[exp] if exp < len(poly) else 0
                    assert coeff == oracle
                    j = exp - i
                    closed = comb(i, j) * 2 ** (i - j) if 0 <= j <= i else 0
                    assert coeff == closed


def test_criterion_2_lambda_ring_law():
    with _budget(2, "lambda-ring law", 5):
        for n in range(2, 21):
            for m in range(1, n):
                g = TruncProjKGroup(n=n, m=m)
                mats = {k: adams_matrix(k, g) for k in
                        (2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 16, 20, 25)}
                for a in (2, 3, 4, 5):
                    for b in (2, 3, 4, 5):
                        assert mats[a] @ mats[b] == mats[a * b]


def test_criterion_3_two_step_impossibility():
    with _budget(3, "two-step retract impossibility", 30):
        for n in range(5, 201):
            p = RetractProblem(n=n, s=n - 2, t=n - 4, ks=frozenset({2}))
            v = decide_retract(p)
            assert isinstance(v, Impossible), n
            assert verify_certificate(p, v), n


def test_criterion_4_one_step_dichotomy():
    with _budget(4, "one-step retract dichotomy", 30):
        for n in range(4, 201):
            p = RetractProblem(n=n, s=n - 2, t=n - 3, ks=frozenset({2}))
            v = decide_retract(p)
            if n % 24 != 3:
                assert isinstance(v, Impossible), n
                assert verify_certificate(p, v), n
            elif n in (27, 51, 75, 99):
                assert isinstance(v, Exists), n
                assert verify_witness(p, v.witness), n


def test_criterion_5_closed_form_cross_check():
    with _budget(5, "closed-form integrality cross-check", 30):
        for n in range(5, 201):
            cf = closed_form_constraints(n)
            assert cf.parity_condition == cf.c_integral == (n % 2 == 1)
            # two-step system: a and d can never both be integral
            assert not (cf.c_integral and cf.a_integral and cf.d_integral)
            two = decide_retract(
                RetractProblem(n=n, s=n - 2, t=n - 4, ks=frozenset({2})))
            assert isinstance(two, Impossible)
            # one-step system: solvable exactly on the c & d integrality locus
            one = decide_retract(
                RetractProblem(n=n, s=n - 2, t=n - 3, ks=frozenset({2})))
            solvable = cf.c_integral and cf.d_integral
            assert solvable == cf.mod24_condition == isinstance(one, Exists), n


def test_criterion_6_join_coefficients():
    with _budget(6, "join coefficients and splitting chase", 10):
        for r in range(2, 5):
            for n in range(r, 9):
                for m in range(r + (r % 2), 41, 2):
                    jc = derive_join_coefficients(r, n, m)
                    assert jc.all_units(), (r, n, m)
                    for ell in range(n + m - r + 1, n + m + 1):
                        for i, j in join_line_basis(r, n, r, m, ell).pairs:
                            assert jc.magnitudes[(ell, i, j)] == 1
                    if m >= r * n + 2 * (r - n):
                        rep = splitting_chase(r, n, m)
                        assert rep.passed, (r, n, m, rep.failures)


def test_criterion_7_connectivity_replay():
    with _budget(7, "connectivity replay", 1):
        for n in range(4, 21):
            for r in range(2, n - 1):
                tr = replay_proof("Prop5_7", r=r, n=n)
                assert tr.passed, (r, n, tr.first_failure)
                assert tr.conclusion.endswith(f"= {2 * (n - r) - 1}")
        assert not replay_proof("Thm8_1_case1", n=7).passed
        assert replay_proof("Thm8_1_case1", n=8).passed


def test_criterion_8_full_verdict_sweep():
    with _budget(8, "verdict sweep with replay", 60):
        verdicts = []
        for n in range(4, 51):
            for r in range(2, n - 1):
                for l in (2, n - r):
                    if l >= 2 and r + l <= n:
                        verdicts.append(decide_section(
                            SectionQuery(r=r, l=l, n=n, field=CHAR0)))
        assert verdicts
        assert all(v.status == NO_SECTION for v in verdicts)

        for n in range(4, 51):
            for r in range(2, n - 1):
                v = decide_section(SectionQuery(r=r, l=1, n=n, field=CHAR0))
                want = NECESSARY_ONLY if (n - r) % 24 == 1 else NO_SECTION
                assert v.status == want, (r, n, v.status)
                verdicts.append(v)

        for n in range(2, 51):
            s = decide_section(SectionQuery(r=n - 1, l=1, n=n, field=CHAR0))
            assert s.status == SECTION_EXISTS
            verdicts.append(s)
            if n % 2 == 0:
                s = decide_section(SectionQuery(r=1, l=1, n=n, field=CHAR0))
                assert s.status == SECTION_EXISTS
                verdicts.append(s)

        for v in verdicts:
            assert verify_verdict(v), v.query


def _sample_problem(rng):
    n = rng.randint(4, 40)
    s = rng.randint(max(1, n - 7), n - 1)
    t = rng.randint(max(1, s - 5), s)
    ks = frozenset(rng.sample((2, 3, 5), rng.randint(1, 2)))
    return RetractProblem(n=n, s=s, t=t, ks=ks)


def test_criterion_9_certificate_soundness_fuzz():
    seed = 20240824
    print(f"fuzz seed: {seed}")
    rng = random.Random(seed)
    with _budget(9, "certificate soundness fuzz", 60):
        from stiefel_sections.retract_solver import _reduced_system

        exists = impossible = 0
        for trial in range(1000):
            p = _sample_problem(rng)
            v = decide_retract(p)
            if isinstance(v, Exists):
                exists += 1
                assert verify_witness(p, v.witness), p
            else:
                impossible += 1
                assert verify_certificate(p, v), p
            if trial % 5 == 0:
                nfree = len(_reduced_system(p)[2])
                order = list(range(nfree))
                rng.shuffle(order)
                flipped = decide_retract(p, unknown_order=tuple(order))
                assert type(flipped) is type(v), p
        print(f"fuzz verdicts: {exists} exists / {impossible} impossible")
        assert exists and impossible
