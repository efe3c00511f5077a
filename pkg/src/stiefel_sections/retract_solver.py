"""Decides existence of Adams-equivariant retracts between truncated
projective K-groups.

A problem (n, s, t, ks) asks for a matrix phi from the K-group truncated at t
to the one truncated at s (t <= s, same ambient n) with phi composed with the
restriction equal to the identity and phi commuting with psi^k for each k in
ks.  The constraints are linear Diophantine; the answer ships either a witness
matrix or a modular infeasibility certificate, both independently checkable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .lattice import (
    IntMatrix,
    NoSolution,
    Solution,
    solve_diophantine,
    verify_no_solution,
)
from .ktheory import TruncProjKGroup, adams_matrix, restriction_matrix


@dataclass(frozen=True)
class RetractProblem:
    n: int
    s: int
    t: int
    ks: frozenset[int]

    def __post_init__(self):
        if not 1 <= self.t <= self.s <= self.n - 1:
            raise ValueError(f"need 1 <= t <= s <= n-1, got {self}")
        if any(k < 2 for k in self.ks):
            raise ValueError("Adams indices must be >= 2")
        object.__setattr__(self, "ks", frozenset(self.ks))

    @property
    def source_group(self) -> TruncProjKGroup:
        """Domain of phi: the deeper truncation (rank n - t)."""
        return TruncProjKGroup(n=self.n, m=self.t)

    @property
    def target_group(self) -> TruncProjKGroup:
        """Codomain of phi: the shallower truncation (rank n - s)."""
        return TruncProjKGroup(n=self.n, m=self.s)

    def to_json(self) -> dict:
        return {"n": self.n, "s": self.s, "t": self.t, "ks": sorted(self.ks)}


@dataclass(frozen=True)
class UnknownLayout:
    """Bijection between unknown vector slots and entries of phi.

    phi has rows indexed by exponents s..n-1 and columns by exponents t..n-1;
    slot (p, j) sits at index (p - s) * (n - t) + (j - t), row-major.
    """

    n: int
    s: int
    t: int

    @property
    def num_unknowns(self) -> int:
        return (self.n - self.s) * (self.n - self.t)

    def index(self, row_exp: int, col_exp: int) -> int:
        return (row_exp - self.s) * (self.n - self.t) + (col_exp - self.t)

    def entry(self, idx: int) -> tuple[int, int]:
        q, r = divmod(idx, self.n - self.t)
        return (q + self.s, r + self.t)


def build_system(p: RetractProblem) -> tuple[IntMatrix, tuple[int, ...], UnknownLayout]:
    """Linearize the retract and equivariance conditions over all entries of phi.

    Rows: first the (n-s)^2 equations phi . restriction = id, then for each k
    (ascending) the (n-s)(n-t) entries of phi.psi_t - psi_s.phi = 0.
    """
    layout = UnknownLayout(n=p.n, s=p.s, t=p.t)
    src, tgt = p.source_group, p.target_group
    exps_s = list(tgt.basis)
    exps_t = list(src.basis)
    rows: list[list[int]] = []
    rhs: list[int] = []

    # phi . restriction = identity: picks out the columns of phi at exponents >= s.
    for pe in exps_s:
        for qe in exps_s:
            row = [0] * layout.num_unknowns
            row[layout.index(pe, qe)] = 1
            rows.append(row)
            rhs.append(1 if pe == qe else 0)

    for k in sorted(p.ks):
        psi_t = adams_matrix(k, src)
        psi_s = adams_matrix(k, tgt)
        _append_commutator_rows(rows, rhs, layout, exps_s, exps_t, psi_t, psi_s)

    return IntMatrix.from_rows(rows), tuple(rhs), layout


def _append_commutator_rows(rows, rhs, layout, exps_s, exps_t, psi_t, psi_s) -> None:
    """Equations (phi . psi_t - psi_s . phi)[p][q] = 0, row-major in (p, q)."""
    for pi, pe in enumerate(exps_s):
        for qi, qe in enumerate(exps_t):
            row = [0] * layout.num_unknowns
            for ui, ue in enumerate(exps_t):
                row[layout.index(pe, ue)] += psi_t.entries[ui][qi]
            for vi, ve in enumerate(exps_s):
                row[layout.index(ve, qe)] -= psi_s.entries[pi][vi]
            rows.append(row)
            rhs.append(0)


def _reduced_system(
    p: RetractProblem, scaled_by: dict[int, int] | None = None
) -> tuple[list[list[int]], list[int], list[tuple[int, int]]]:
    """Commutator equations with the entries forced by phi.restriction = id
    (phi[j][j] = 1, other columns at exponents >= s zero) substituted out.

    Returns (rows, rhs, free_slots) where free_slots lists the (row_exp,
    col_exp) entries of phi still unknown, row-major.  scaled_by optionally
    multiplies the psi matrices of selected Adams indices (Lemma-7.1-style
    scaled equivariance).
    """
    src, tgt = p.source_group, p.target_group
    exps_s = list(tgt.basis)
    exps_t = list(src.basis)
    free_slots = [(pe, je) for pe in exps_s for je in exps_t if je < p.s]
    slot_index = {slot: i for i, slot in enumerate(free_slots)}

    rows: list[list[int]] = []
    rhs: list[int] = []
    for k in sorted(p.ks):
        scale = (scaled_by or {}).get(k, 1)
        psi_t = adams_matrix(k, src).scale(scale)
        psi_s = adams_matrix(k, tgt).scale(scale)
        for pi, pe in enumerate(exps_s):
            for qi, qe in enumerate(exps_t):
                row = [0] * len(free_slots)
                const = 0
                for ui, ue in enumerate(exps_t):
                    coeff = psi_t.entries[ui][qi]
                    if ue < p.s:
                        row[slot_index[(pe, ue)]] += coeff
                    else:
                        const += coeff * (1 if pe == ue else 0)
                for vi, ve in enumerate(exps_s):
                    coeff = psi_s.entries[pi][vi]
                    if qe < p.s:
                        row[slot_index[(ve, qe)]] -= coeff
                    else:
                        const -= coeff * (1 if ve == qe else 0)
                rows.append(row)
                rhs.append(-const)
    return _presolve(rows, rhs) + (free_slots,)


def _presolve(rows: list[list[int]], rhs: list[int]) -> tuple[list[list[int]], list[int]]:
    """Drop trivially satisfied equations and divide out each row's content.

    The psi matrices share large power-of-k factors, so this routinely shrinks
    entries by dozens of bits; the solution set is untouched and the presolve
    is deterministic, so certificates remain checkable by rebuilding."""
    out_rows: list[list[int]] = []
    out_rhs: list[int] = []
    for row, c in zip(rows, rhs):
        g = abs(c)
        for x in row:
            g = gcd(g, x)
            if g == 1:
                break
        if g == 0:
            continue  # 0 = 0
        if g > 1:
            row = [x // g for x in row]
            c //= g
        out_rows.append(row)
        out_rhs.append(c)
    return out_rows, out_rhs


@dataclass(frozen=True)
class Exists:
    witness: IntMatrix

    def to_json(self) -> dict:
        return {"verdict": "exists", "witness": self.witness.to_lists()}


@dataclass(frozen=True)
class Impossible:
    certificate: NoSolution

    def to_json(self) -> dict:
        return {
            "verdict": "impossible",
            "certificate": {
                "y": list(self.certificate.certificate),
                "modulus": self.certificate.modulus,
            },
        }


RetractVerdict = Exists | Impossible


def decide_retract(
    p: RetractProblem, unknown_order: tuple[int, ...] | None = None
) -> RetractVerdict:
    """Decide the problem, verifying witness or certificate before returning.

    unknown_order optionally permutes the free-slot columns before solving;
    the verdict must not depend on it.
    """
    rows, rhs, free_slots = _reduced_system(p)
    nfree = len(free_slots)
    if unknown_order is not None:
        if sorted(unknown_order) != list(range(nfree)):
            raise ValueError("unknown_order must be a permutation of the free slots")
        rows = [[row[j] for j in unknown_order] for row in rows]
        free_slots = [free_slots[j] for j in unknown_order]

    if not rows or nfree == 0:
        # No equations, or phi fully forced: check the residual directly.
        if any(c != 0 for c in rhs):
            raise AssertionError("forced entries violate a constant equation")
        answer: Solution | NoSolution = Solution(
            particular=(0,) * nfree, kernel_basis=()
        )
    else:
        answer = solve_diophantine(IntMatrix.from_rows(rows), rhs)

    if isinstance(answer, NoSolution):
        verdict: RetractVerdict = Impossible(certificate=answer)
        if unknown_order is None and not verify_certificate(p, verdict):
            raise AssertionError("infeasibility certificate failed verification")
        return verdict

    witness = _assemble_witness(p, free_slots, answer.particular)
    verdict = Exists(witness=witness)
    if not verify_witness(p, witness):
        raise AssertionError("witness failed verification")
    return verdict


def _assemble_witness(p, free_slots, values) -> IntMatrix:
    src, tgt = p.source_group, p.target_group
    phi = [[0] * src.rank for _ in range(tgt.rank)]
    for pe in tgt.basis:  # forced part: phi(u^j) = u^j for j >= s
        phi[pe - p.s][pe - p.t] = 1
    for (pe, je), val in zip(free_slots, values):
        phi[pe - p.s][je - p.t] = val
    return IntMatrix.from_rows(phi)


def verify_witness(p: RetractProblem, phi: IntMatrix) -> bool:
    """phi . restriction = id and phi . psi_t = psi_s . phi, by exact arithmetic."""
    src, tgt = p.source_group, p.target_group
    if phi.shape != (tgt.rank, src.rank):
        return False
    rho = restriction_matrix(source=tgt, target=src)
    if (phi @ rho).entries != IntMatrix.identity(tgt.rank).entries:
        return False
    for k in p.ks:
        if (phi @ adams_matrix(k, src)).entries != (adams_matrix(k, tgt) @ phi).entries:
            return False
    return True


def verify_certificate(p: RetractProblem, verdict: Impossible) -> bool:
    """Rebuild the reduced system deterministically and check the modular
    certificate without re-running the solver."""
    rows, rhs, _ = _reduced_system(p)
    if not rows:
        return False
    return verify_no_solution(IntMatrix.from_rows(rows), rhs, verdict.certificate)


@dataclass(frozen=True)
class ClosedFormConstraints:
    """The eliminated-system constants of the two-step retract problems
    (s = n-2), as exact rationals with integrality flags."""

    c: Fraction
    a: Fraction
    d: Fraction
    parity_condition: bool  # n odd, equivalently c integral
    mod24_condition: bool  # n == 3 (mod 24)

    @property
    def c_integral(self) -> bool:
        return self.c.denominator == 1

    @property
    def a_integral(self) -> bool:
        return self.a.denominator == 1

    @property
    def d_integral(self) -> bool:
        return self.d.denominator == 1


def closed_form_constraints(n: int) -> ClosedFormConstraints:
    if n < 5:
        raise ValueError(f"need n >= 5, got {n}")
    return ClosedFormConstraints(
        c=Fraction(n - 3, 2),
        a=Fraction(3 * n * n - 23 * n + 44, 24),
        d=Fraction(-3 * n * n + 13 * n - 12, 24),
        parity_condition=(n % 2 == 1),
        mod24_condition=(n % 24 == 3),
    )


def scaled_equivariance_equivalence(p: RetractProblem, k: int) -> bool:
    """True iff scaling the psi^k equivariance constraint by k leaves the
    solution set unchanged.  Compared via explicit solves, not assumed."""
    if k not in p.ks:
        p = RetractProblem(n=p.n, s=p.s, t=p.t, ks=p.ks | {k})
    single = RetractProblem(n=p.n, s=p.s, t=p.t, ks=frozenset({k}))
    rows1, rhs1, _ = _reduced_system(single)
    rows2, rhs2, _ = _reduced_system(single, scaled_by={k: k})
    return _same_solution_set(rows1, rhs1, rows2, rhs2)


def _same_solution_set(rows1, rhs1, rows2, rhs2) -> bool:
    if not rows1 or not rows1[0]:
        # No free unknowns: each system is satisfiable iff its constants vanish.
        return all(c == 0 for c in rhs1) == all(c == 0 for c in rhs2)
    a1 = IntMatrix.from_rows(rows1)
    a2 = IntMatrix.from_rows(rows2)
    ans1 = solve_diophantine(a1, rhs1)
    ans2 = solve_diophantine(a2, rhs2)
    if isinstance(ans1, NoSolution) or isinstance(ans2, NoSolution):
        return isinstance(ans1, NoSolution) and isinstance(ans2, NoSolution)
    zero1, zero2 = (0,) * a1.rows, (0,) * a2.rows
    if a2.apply(ans1.particular) != tuple(rhs2):
        return False
    if a1.apply(ans2.particular) != tuple(rhs1):
        return False
    if any(a2.apply(v) != zero2 for v in ans1.kernel_basis):
        return False
    if any(a1.apply(v) != zero1 for v in ans2.kernel_basis):
        return False
    return True


def verdict_to_json(p: RetractProblem, verdict: RetractVerdict) -> dict:
    return {"problem": p.to_json(), **verdict.to_json()}
