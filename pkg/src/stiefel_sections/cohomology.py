"""Symbolic bookkeeping on the (2l-1, l)-lines of the cohomology of Stiefel
varieties and their joins.

The cohomology of V_r(A^n) is free over the base coefficient ring on classes
alpha_i of bidegree (2i-1, i), i = n-r+1..n.  Via the Kunneth formula, each
(2l-1, l)-line of a join V_r(A^n)*V_s(A^m) is free on the symbols
beta_i (x) gamma_j [1] with i + j = l.  The intrinsic join pulls alpha_l back
to a sum of those symbols with coefficients that are units; only |a_{i,j}| = 1
is ever established, so signs are carried symbolically and never resolved to
a concrete +/-.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Pullback facts used as axioms by the derivation, tagged into every trace.
CITE_PROJ_PULLBACK = "p*(alpha) = alpha"  # projection fixes surviving generators
CITE_INCL_PULLBACK = "i*(alpha_l) = alpha_l for l < ambient, i*(alpha_ambient) = 0"
CITE_RANK_ONE = "free abelian of rank 1"
CITE_SECTION_RULES = "phi*(gamma_m) = gamma_m; phi*(gamma_i) = 0 when i < m"


@dataclass(frozen=True)
class StiefelCohPresentation:
    """Generators alpha_{n-r+1}..alpha_n, |alpha_i| = (2i-1, i).

    The squaring relations are recorded for documentation only: no line used
    here needs products, and the coefficient ring stays abstract.
    """

    r: int
    n: int

    def __post_init__(self):
        if not 1 <= self.r <= self.n:
            raise ValueError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")

    @property
    def generators(self) -> range:
        return range(self.n - self.r + 1, self.n + 1)

    @staticmethod
    def bidegree(i: int) -> tuple[int, int]:
        return (2 * i - 1, i)

    @property
    def relations(self) -> tuple[str, ...]:
        return tuple(
            f"alpha_{i}^2 = {{-1}} alpha_{2 * i - 1}"
            for i in self.generators
            if 2 * i - 1 <= self.n
        )


@dataclass(frozen=True)
class JoinLineBasis:
    """Basis of the (2l-1, l)-line of V_r(A^n)*V_s(A^m): pairs (i, j) with
    i in {n-r+1..n}, j in {m-s+1..m}, i + j = l, denoting beta_i(x)gamma_j[1]."""

    r: int
    n: int
    s: int
    m: int
    ell: int

    def __post_init__(self):
        if not (1 <= self.r <= self.n and 1 <= self.s <= self.m):
            raise ValueError(f"need 1 <= r <= n and 1 <= s <= m, got {self}")

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        lo_i, hi_i = self.n - self.r + 1, self.n
        lo_j, hi_j = self.m - self.s + 1, self.m
        return tuple(
            (i, self.ell - i)
            for i in range(max(lo_i, self.ell - hi_j), min(hi_i, self.ell - lo_j) + 1)
        )

    @property
    def rank(self) -> int:
        return len(self.pairs)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (2 * self.ell - 1, self.ell)

    def to_json(self) -> dict:
        return {
            "r": self.r, "n": self.n, "s": self.s, "m": self.m, "ell": self.ell,
            "pairs": [list(p) for p in self.pairs],
        }


@dataclass(frozen=True)
class LineElement:
    """Element of a line: one integer per basis pair.  A magnitude-1 entry on
    a symbolic-unit element stands for an undetermined sign +/-1."""

    basis: JoinLineBasis
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.basis.rank:
            raise ValueError("coefficient vector length must equal basis rank")

    def render(self) -> str:
        terms = [
            f"+-{abs(c) if abs(c) != 1 else ''}b_{i}(x)g_{j}[1]".replace("+-1", "+-")
            for (i, j), c in zip(self.basis.pairs, self.coefficients)
            if c != 0
        ]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class SignedUnitMap:
    """l -> unit-coefficient LineElement; nonzero entries all +-1 (symbolic)."""

    values: dict[int, LineElement] = field(default_factory=dict)

    def __post_init__(self):
        for ell, elt in self.values.items():
            if any(abs(c) not in (0, 1) for c in elt.coefficients):
                raise ValueError(f"non-unit coefficient on line {ell}")


def join_line_basis(r: int, n: int, s: int, m: int, ell: int) -> JoinLineBasis:
    return JoinLineBasis(r=r, n=n, s=s, m=m, ell=ell)


def intrinsic_join_pullback(r: int, n: int, m: int, ell: int) -> LineElement:
    """h*(alpha_ell) on the (2ell-1, ell)-line of V_r(A^n)*V_r(A^m): the
    full-support sum of +-beta_i (x) gamma_j [1] over i + j = ell.

    Requires m even (the homotopy commuting the second pullback diagram needs
    an even number of column swaps) and ell in the range where alpha_ell lives
    on the target."""
    if m % 2 != 0:
        raise ValueError("unsupported: m must be even")
    if not (r <= n and r <= m):
        raise ValueError(f"need r <= n and r <= m, got r={r}, n={n}, m={m}")
    if not n + m - r + 1 <= ell <= n + m:
        raise ValueError(
            f"ell={ell} outside generator range [{n + m - r + 1}, {n + m}]"
        )
    basis = join_line_basis(r, n, r, m, ell)
    return LineElement(basis=basis, coefficients=(1,) * basis.rank)


@dataclass(frozen=True)
class TraceStep:
    step: int
    rule: str
    citation: str
    coefficients: dict

    def to_json(self) -> dict:
        return {
            "step": self.step, "rule": self.rule, "citation": self.citation,
            "coefficients": self.coefficients,
        }


@dataclass(frozen=True)
class JoinCoefficients:
    """|a_{i,j}| for the intrinsic-join pullback at (r, n, m), with the
    derivation trace that fixed each coefficient."""

    r: int
    n: int
    m: int
    magnitudes: dict[tuple[int, int, int], int]  # (ell, i, j) -> |a_{i,j}|
    trace: tuple[TraceStep, ...]

    def all_units(self) -> bool:
        return all(v == 1 for v in self.magnitudes.values())

    def trace_json(self) -> list[dict]:
        return [s.to_json() for s in self.trace]


def derive_join_coefficients(r: int, n: int, m: int) -> JoinCoefficients:
    """Re-derive |a_{i,j}| = 1 by induction on r.

    Base r = 1: each line has at most one basis pair and the intrinsic join is
    an equivalence, so the lone coefficient is a unit.  Step r > 1: pairs with
    i < n restrict (under inclusion of the smaller join) to the r-1 answer at
    (n-1, m) -- the two index sets agree because ell < n+m -- and the pair
    (n, ell-n) is handled by the symmetric diagram; ell = n+m is the rank-one
    generator chase."""
    if m % 2 != 0:
        raise ValueError("unsupported: m must be even")
    if not (2 <= r <= n and r <= m):
        raise ValueError(f"need 2 <= r <= min(n, m), got r={r}, n={n}, m={m}")

    trace: list[TraceStep] = []
    step = 0

    def record(rule: str, citation: str, coeffs: dict) -> None:
        nonlocal step
        step += 1
        trace.append(TraceStep(step=step, rule=rule, citation=citation, coefficients=coeffs))

    # Inductive stack of (rr, nn) pairs bottoming out at rr = 1.
    magnitudes: dict[tuple[int, int, int], int] = {}
    prev: dict[tuple[int, int, int], int] = {}
    for depth in range(r - 1, -1, -1):
        rr, nn = r - depth, n - depth
        current: dict[tuple[int, int, int], int] = {}
        if rr == 1:
            for ell in range(nn + m, nn + m - rr, -1):
                basis = join_line_basis(1, nn, 1, m, ell)
                for (i, j) in basis.pairs:
                    current[(ell, i, j)] = 1
                record(
                    "base-case",
                    "the case r = 1 is vacuously true; h is an equivalence",
                    {f"a[{ell},{i},{j}]": 1 for (i, j) in basis.pairs},
                )
            prev = current
            continue
        for ell in range(nn + m, nn + m - rr, -1):
            basis = join_line_basis(rr, nn, rr, m, ell)
            if ell == nn + m:
                # Rank-1 chase through the projection-to-V_1 square.
                (i, j) = basis.pairs[0]
                assert basis.rank == 1 and (i, j) == (nn, m)
                current[(ell, i, j)] = 1
                record(
                    "generator-chase",
                    f"{CITE_RANK_ONE}; {CITE_PROJ_PULLBACK}",
                    {f"a[{ell},{nn},{m}]": 1},
                )
                continue
            # ell < nn+m: inclusion pullback matches the r-1 answer at (nn-1, m).
            inner_pairs = join_line_basis(rr - 1, nn - 1, rr - 1, m, ell).pairs
            survive = [(i, j) for (i, j) in basis.pairs if i <= nn - 1]
            if [p for p in survive] != list(inner_pairs):
                # The proof's index-set equality; failure would mean a bug.
                raise AssertionError(
                    f"index sets differ on line {ell}: {survive} vs {inner_pairs}"
                )
            record(
                "index-set-equality",
                "the two index sets are equal since ell < n + m",
                {"line": ell, "pairs": [list(p) for p in survive]},
            )
            fixed = {}
            for (i, j) in survive:
                if prev.get((ell, i, j)) != 1:
                    raise AssertionError(f"underdetermined coefficient ({ell},{i},{j})")
                current[(ell, i, j)] = 1
                fixed[f"a[{ell},{i},{j}]"] = 1
            if fixed:
                record("inclusion-restriction", CITE_INCL_PULLBACK, fixed)
            if (nn, ell - nn) in basis.pairs:
                current[(ell, nn, ell - nn)] = 1
                record(
                    "symmetric-diagram",
                    f"symmetric argument; {CITE_PROJ_PULLBACK}",
                    {f"a[{ell},{nn},{ell - nn}]": 1},
                )
            covered = set((i, j) for (e, i, j) in current if e == ell)
            if covered != set(basis.pairs):
                raise AssertionError(f"line {ell} underdetermined: {basis.pairs}")
        prev = current
    magnitudes = prev
    return JoinCoefficients(r=r, n=n, m=m, magnitudes=magnitudes, trace=tuple(trace))


@dataclass(frozen=True)
class ChaseLine:
    ell: int
    source_rank: int
    target_rank: int
    composite_coefficient: int  # |coefficient|; 1 means a symbolic unit
    line_rank_match: bool


@dataclass(frozen=True)
class ChaseReport:
    r: int
    n: int
    m: int
    lines: tuple[ChaseLine, ...]
    passed: bool
    failures: tuple[int, ...]  # ells with a rank mismatch or non-unit composite

    def to_json(self) -> dict:
        return {
            "r": self.r, "n": self.n, "m": self.m, "passed": self.passed,
            "failures": list(self.failures),
            "lines": [vars(l) for l in self.lines],
        }


def splitting_chase(r: int, n: int, m: int) -> ChaseReport:
    """Push the pullback sums through a section phi of V_r(A^m) -> V_1(A^m).

    phi* keeps gamma_m and kills gamma_i for i < m, so each line collapses to
    +-beta_{ell-m} (x) gamma_m [1]; the chase checks that every line where
    source and target are rank 1 lands on a single unit generator and that
    the ranks agree on every line."""
    if m % 2 != 0:
        raise ValueError("unsupported: m must be even")
    if m < r * n + 2 * (r - n):
        raise ValueError(f"need m >= rn + 2(r - n) = {r * n + 2 * (r - n)}, got m={m}")
    lo, hi = n + m - r + 1, n + m
    lines = []
    failures = []
    for ell in range(lo - 2, hi + 2):
        # Source line: suspended truncation at n+m; rank 1 iff alpha_ell lives.
        source_rank = 1 if lo <= ell <= hi else 0
        # Target line: the m-fold suspension of the n-side truncation.
        target_rank = 1 if n - r + 1 <= ell - m <= n else 0
        if source_rank == 0:
            composite = 0
        else:
            pullback = intrinsic_join_pullback(r, n, m, ell)
            surviving = [
                c for (i, j), c in zip(pullback.basis.pairs, pullback.coefficients)
                if j == m and c != 0
            ]
            composite = abs(surviving[0]) if len(surviving) == 1 else -1
        match = source_rank == target_rank
        if not match or (source_rank == 1 and composite != 1):
            failures.append(ell)
        lines.append(ChaseLine(
            ell=ell, source_rank=source_rank, target_rank=target_rank,
            composite_coefficient=composite, line_rank_match=match,
        ))
    return ChaseReport(
        r=r, n=n, m=m, lines=tuple(lines), passed=not failures,
        failures=tuple(failures),
    )
