"""Rule-based derivation of connectivity bounds, cohomological-dimension
bounds, and lifting side-conditions.

The engine derives BOUNDS with citations, not truths about arbitrary motivic
spaces: every output is "derivable from the rule table", and the trace is the
deliverable.  Conventions: the empty space is -2-connected; a map is
n-connected iff its fibres are.  The sphere rule conn(S^{p,q}) = p - q - 1 is
the generalization consistent with both instances the rule table's sources
use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

# A contractible space is n-connected for every n; large finite sentinel so
# arithmetic on bounds stays in plain ints.
CONTRACTIBLE = 10 ** 6


class NoRuleApplies(Exception):
    """Expression outside rule coverage; carries the blocking atom."""

    def __init__(self, atom):
        self.atom = atom
        super().__init__(f"no rule applies to {atom!r}")


class SideConditionError(ValueError):
    """A rule's hypothesis is violated."""


# --- expression atoms -------------------------------------------------------

@dataclass(frozen=True)
class Sphere:
    p: int
    q: int

    def __post_init__(self):
        if not self.p >= self.q >= 0:
            raise SideConditionError(f"need p >= q >= 0, got {self}")


@dataclass(frozen=True)
class Stiefel:
    r: int
    n: int

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise SideConditionError(f"need 0 <= r <= n, got {self}")


@dataclass(frozen=True)
class TruncProj:
    """P^m_{r+1}: projective m-space with cells below dimension r+1 removed."""

    m: int
    r: int

    def __post_init__(self):
        if not 0 <= self.r <= self.m:
            raise SideConditionError(f"need 0 <= r <= m, got {self}")


@dataclass(frozen=True)
class Point:
    pass


@dataclass(frozen=True)
class Smash:
    left: "ConnExpr"
    right: "ConnExpr"


@dataclass(frozen=True)
class Suspension:
    p: int
    q: int
    inner: "ConnExpr"


@dataclass(frozen=True)
class Join:
    left: "ConnExpr"
    right: "ConnExpr"


@dataclass(frozen=True)
class PlusPoint:
    inner: "ConnExpr"


@dataclass(frozen=True)
class MapF:
    """The comparison map f_r^n from the suspended truncation to V_r(A^n)."""

    r: int
    n: int


@dataclass(frozen=True)
class InclusionIota:
    """The inclusion P^m_{r+1} -> P^n_{r+1}."""

    r: int
    m: int
    n: int


@dataclass(frozen=True)
class Map:
    """A generic map with an externally supplied connectivity."""

    conn: int


ConnExpr = Union[
    Sphere, Stiefel, TruncProj, Point, Smash, Suspension, Join, PlusPoint,
    MapF, InclusionIota, Map,
]


@dataclass(frozen=True)
class TraceStep:
    rule: str
    citation: str
    instantiation: str
    inequality: str = ""
    holds: bool = True

    def to_json(self) -> dict:
        return {
            "rule": self.rule, "citation": self.citation,
            "instantiation": self.instantiation,
            "inequality": self.inequality, "holds": self.holds,
        }


@dataclass(frozen=True)
class ConnFact:
    subject: ConnExpr
    bound: int
    rule_trace: tuple[TraceStep, ...]

    def trace_json(self) -> list[dict]:
        return [s.to_json() for s in self.rule_trace]


# Rule table: name -> anchor citation.
RULES = {
    "sphere": "S^{2(m+1),m+1} is m-connected; conn(S^{p,q}) = p-q-1",
    "stiefel": "V_r(A^n) is (n-r-1)-connected",
    "trunc-proj": "P^m_{r+1} is r-connected",
    "contractible": "a point is n-connected for every n",
    "smash": "the smash of n- and m-connected spaces is (n+m+1)-connected",
    "join-as-suspension": "X*Y is the (1,0)-suspension of the smash X^Y",
    "plus-point": "X_+ is disconnected: -1-connected only",
    "map-f": "f_r^n is (2(n-r)-1)-connected (perfect base field)",
    "iota": "the truncation inclusion is (m-1)-connected",
    "generic-map": "externally supplied bound",
    "blakers-massey": "fib(f) -> Omega cof(f) is (n+m)-connected",
    "cof-to-map": "if cof(f) is n-connected (n > 0) then f is (n-1)-connected",
    "lifting": "lifts exist when cohdim <= conn+1, uniquely when <= conn",
    "cohdim-join": "the join model has Krull dimension rn+sm",
    "cohdim-susp-trunc": "the (1,1)-suspended truncation P^a has cohdim a+1",
}


def derive_connectivity(e: ConnExpr) -> ConnFact:
    """Best bound derivable from the rule table, with a full trace."""
    steps: list[TraceStep] = []

    def visit(x: ConnExpr) -> int:
        if isinstance(x, Sphere):
            b = x.p - x.q - 1
            steps.append(TraceStep("sphere", RULES["sphere"],
                                   f"conn(S^{{{x.p},{x.q}}}) = {x.p}-{x.q}-1 = {b}"))
            return b
        if isinstance(x, Stiefel):
            b = x.n - x.r - 1
            steps.append(TraceStep("stiefel", RULES["stiefel"],
                                   f"conn(V_{x.r}(A^{x.n})) = {b}"))
            return b
        if isinstance(x, TruncProj):
            b = x.r
            steps.append(TraceStep("trunc-proj", RULES["trunc-proj"],
                                   f"conn(P^{x.m}_{x.r + 1}) = {b}"))
            return b
        if isinstance(x, Point):
            steps.append(TraceStep("contractible", RULES["contractible"],
                                   "conn(*) unbounded"))
            return CONTRACTIBLE
        if isinstance(x, Smash):
            a, b = visit(x.left), visit(x.right)
            if a < -1 or b < -1:
                raise SideConditionError("smash rule needs conn >= -1 factors")
            steps.append(TraceStep("smash", RULES["smash"],
                                   f"conn = {a}+{b}+1 = {a + b + 1}"))
            return a + b + 1
        if isinstance(x, Suspension):
            return visit(Smash(Sphere(x.p, x.q), x.inner))
        if isinstance(x, Join):
            return visit(Suspension(1, 0, Smash(x.left, x.right)))
        if isinstance(x, PlusPoint):
            visit(x.inner)
            steps.append(TraceStep("plus-point", RULES["plus-point"], "conn = -1"))
            return -1
        if isinstance(x, MapF):
            if not 1 <= x.r <= x.n - 2:
                raise SideConditionError(f"map-f rule needs 1 <= r <= n-2, got {x}")
            b = 2 * (x.n - x.r) - 1
            steps.append(TraceStep("map-f", RULES["map-f"],
                                   f"conn(f_{x.r}^{x.n}) = 2({x.n}-{x.r})-1 = {b}"))
            return b
        if isinstance(x, InclusionIota):
            if not (0 <= x.r <= x.m <= x.n):
                raise SideConditionError(f"iota rule needs r <= m <= n, got {x}")
            steps.append(TraceStep("iota", RULES["iota"],
                                   f"conn(iota) = {x.m}-1 = {x.m - 1}"))
            return x.m - 1
        if isinstance(x, Map):
            steps.append(TraceStep("generic-map", RULES["generic-map"],
                                   f"conn = {x.conn}"))
            return x.conn
        raise NoRuleApplies(x)

    bound = visit(e)
    return ConnFact(subject=e, bound=bound, rule_trace=tuple(steps))


def blakers_massey_bound(conn_x: int, conn_f: int) -> int:
    """Connectivity of fib(f) -> Omega cof(f) for conn_x-connected source and
    conn_f-connected f; hypotheses conn_x, conn_f >= -1 and sum >= 0."""
    if conn_x < -1 or conn_f < -1:
        raise SideConditionError("need conn_x, conn_f >= -1")
    if conn_x + conn_f < 0:
        raise SideConditionError("need conn_x + conn_f >= 0")
    return conn_x + conn_f


def cof_to_map_bound(conn_cof: int) -> int:
    """If cof(f) is n-connected with n >= 1 (source simply connected, target
    connected -- asserted by the caller), then f is (n-1)-connected."""
    if conn_cof < 1:
        raise SideConditionError(f"need conn(cof) >= 1, got {conn_cof}")
    return conn_cof - 1


@dataclass(frozen=True)
class LiftingResult:
    exists: bool
    unique: bool


def lifting_check(cohdim_x: int, conn_f: int) -> LiftingResult:
    if cohdim_x < 0:
        raise SideConditionError("cohomological dimension must be >= 0")
    return LiftingResult(
        exists=cohdim_x <= conn_f + 1,
        unique=cohdim_x <= conn_f,
    )


def cohdim_bound(e: ConnExpr) -> int:
    """Cohomological-dimension bound for the shapes the pipeline uses."""
    if isinstance(e, Join) and isinstance(e.left, Stiefel) and isinstance(e.right, Stiefel):
        return e.left.r * e.left.n + e.right.r * e.right.n
    if (isinstance(e, Suspension) and (e.p, e.q) == (1, 1)
            and isinstance(e.inner, TruncProj)):
        return e.inner.m + 1
    if isinstance(e, Point):
        return 0
    raise NoRuleApplies(e)


# --- proof replays ----------------------------------------------------------

@dataclass(frozen=True)
class ProofTrace:
    name: str
    params: dict
    steps: tuple[TraceStep, ...]
    passed: bool
    conclusion: str
    first_failure: str | None = None
    perfect_field_required: bool = True

    def to_json(self) -> dict:
        return {
            "name": self.name, "params": self.params,
            "steps": [s.to_json() for s in self.steps],
            "passed": self.passed, "conclusion": self.conclusion,
            "first_failure": self.first_failure,
            "perfect_field_required": self.perfect_field_required,
        }


def _check(steps: list[TraceStep], rule: str, instantiation: str,
           lhs: int, rel: str, rhs: int) -> bool:
    holds = {"<=": lhs <= rhs, ">=": lhs >= rhs, ">": lhs > rhs, "<": lhs < rhs,
             "==": lhs == rhs}[rel]
    steps.append(TraceStep(rule, RULES.get(rule, rule), instantiation,
                           f"{lhs} {rel} {rhs}", holds))
    return holds


def _finish(name: str, params: dict, steps: list[TraceStep],
            conclusion: str) -> ProofTrace:
    failures = [s for s in steps if not s.holds]
    return ProofTrace(
        name=name, params=params, steps=tuple(steps),
        passed=not failures, conclusion=conclusion,
        first_failure=failures[0].inequality if failures else None,
    )


def _replay_prop5_7(r: int, n: int) -> ProofTrace:
    """Induction on r computing conn(f_r^n) = 2(n-r)-1, replaying every
    inequality of each inductive step from the base case upward."""
    if not 2 <= r <= n - 2:
        raise SideConditionError(f"need 2 <= r <= n-2, got r={r}, n={n}")
    steps: list[TraceStep] = []
    steps.append(TraceStep("base-case", "f_1^m is an equivalence",
                           f"conn(f_1^{n - r + 1}) unbounded; cof is 2(n-r)-connected"))
    for rr in range(2, r + 1):
        nn = n - r + rr
        d = nn - rr  # invariant n-r along the ladder
        hyp = 2 * d - 1
        steps.append(TraceStep(
            "induction-hypothesis", "inner map bound from the previous rung",
            f"conn(f_{rr - 1}^{nn - 1}) = {hyp}"))
        src = derive_connectivity(Suspension(1, 1, TruncProj(nn - 2, d - 1))).bound
        steps.append(TraceStep(
            "source-connectivity", RULES["trunc-proj"] + "; " + RULES["smash"],
            f"conn(Sigma^(1,1) P^{nn - 2}_{d + 1}) = {src}"))
        bm = blakers_massey_bound(src, hyp)
        steps.append(TraceStep(
            "blakers-massey", RULES["blakers-massey"],
            f"fib -> Omega cof of the inner map is {src}+{hyp} = {bm}-connected"))
        _check(steps, "range-comparison",
               "the approximation range clears the fibre bound", bm + 1, ">", hyp)
        cof_inner = hyp + 1
        steps.append(TraceStep(
            "cofibre-bound", "loop shift", f"cof of inner map is {cof_inner}-connected"))
        _check(steps, "pi0-epi", "the comparison of cofibres is onto pi_0",
               d, ">=", 2)
        top = derive_connectivity(
            Smash(Sphere(2 * nn - 1, nn), Stiefel(rr - 1, nn - 1))).bound
        steps.append(TraceStep(
            "smash", RULES["smash"],
            f"conn(Sigma^({2 * nn - 1},{nn}) V_{rr - 1}(A^{nn - 1})) = {top}"))
        g_bound = cof_to_map_bound(top)
        steps.append(TraceStep(
            "cof-to-map", RULES["cof-to-map"],
            f"the cofibre comparison g is {g_bound}-connected"))
        _check(steps, "range-comparison",
               "g preserves the cofibre bound (needs r >= 2)",
               top, ">=", cof_inner)
        f_bound = cof_to_map_bound(cof_inner)
        steps.append(TraceStep(
            "cof-to-map", RULES["cof-to-map"],
            f"conn(f_{rr}^{nn}) = {cof_inner}-1 = {f_bound}"))
    return _finish("Prop5_7", {"r": r, "n": n}, steps,
                   f"conn(f_{r}^{n}) = {2 * (n - r) - 1}")


def _replay_thm8_1_case1(n: int) -> ProofTrace:
    """The lifting step against f_4^n: threshold exactly at n = 8."""
    if n < 6:
        raise SideConditionError(f"need n >= 6 so that conn(f_4^n) is defined")
    steps: list[TraceStep] = []
    cohdim = cohdim_bound(Suspension(1, 1, TruncProj(n - 1, n - 3)))
    steps.append(TraceStep("cohdim-susp-trunc", RULES["cohdim-susp-trunc"],
                           f"cohdim(Sigma^(1,1) P^{n - 1}_{n - 1}) = {cohdim}"))
    conn_f = derive_connectivity(MapF(4, n)).bound
    steps.append(TraceStep("map-f", RULES["map-f"], f"conn(f_4^{n}) = {conn_f}"))
    sc = derive_connectivity(Suspension(1, 1, TruncProj(n - 1, n - 5))).bound
    _check(steps, "simply-connected", "target of the lift is simply connected",
           sc, ">=", 1)
    lift = lifting_check(cohdim, conn_f)
    _check(steps, "lifting", f"lift exists iff {cohdim} <= {conn_f}+1",
           cohdim, "<=", conn_f + 1)
    return _finish("Thm8_1_case1", {"n": n}, steps,
                   f"lift exists: {lift.exists}")


def _replay_thm8_2_case1(n: int, r: int) -> ProofTrace:
    """The lifting step against f_3^{n-r+2} in the one-step regime n-r >= 3.

    The source inequality 2n-2r-2 >= n-r+2 is asserted for n-r >= 3 but only
    holds for n-r >= 4; at n-r = 3 the failing instance is recorded in the
    trace, not repaired."""
    d = n - r
    if d < 3:
        raise SideConditionError(f"need n-r >= 3, got {d}")
    steps: list[TraceStep] = []
    conn_f = derive_connectivity(MapF(3, d + 2)).bound
    steps.append(TraceStep("map-f", RULES["map-f"],
                           f"conn(f_3^{d + 2}) = {conn_f}"))
    cohdim = cohdim_bound(Suspension(1, 1, TruncProj(d + 1, d - 2)))
    steps.append(TraceStep("cohdim-susp-trunc", RULES["cohdim-susp-trunc"],
                           f"cohdim(Sigma^(1,1) P^{d + 1}_{d - 1}) = {cohdim}"))
    sc = derive_connectivity(Suspension(1, 1, TruncProj(d + 1, d - 2))).bound
    _check(steps, "simply-connected", "target of the lift is simply connected",
           sc, ">=", 1)
    ok = _check(steps, "stated-inequality",
                "asserted for n-r >= 3 but equivalent to n-r >= 4",
                2 * d - 2, ">=", d + 2)
    if not ok:
        steps.append(TraceStep(
            "discrepancy", "recorded, not repaired",
            f"the stated inequality fails at n-r = {d}", holds=False))
    lift = lifting_check(cohdim, conn_f)
    _check(steps, "lifting", f"lift exists iff {cohdim} <= {conn_f}+1",
           cohdim, "<=", conn_f + 1)
    return _finish("Thm8_2_case1", {"n": n, "r": r}, steps,
                   f"lift exists: {lift.exists}")


def _replay_prop6_4(r: int, n: int, m: int) -> ProofTrace:
    """The splitting's lifting step across the join."""
    steps: list[TraceStep] = []
    _check(steps, "parity", "m must be even", m % 2, "==", 0)
    _check(steps, "window", "choice of m", m, ">=", r * n + 2 * (r - n))
    cohdim = cohdim_bound(Join(Stiefel(r, n), Stiefel(1, m)))
    steps.append(TraceStep("cohdim-join", RULES["cohdim-join"],
                           f"cohdim(V_{r}(A^{n}) * V_1(A^{m})) <= {cohdim}"))
    conn_f = derive_connectivity(MapF(r, n + m)).bound
    steps.append(TraceStep("map-f", RULES["map-f"],
                           f"conn(f_{r}^{n + m}) = {conn_f}"))
    _check(steps, "lifting", f"lift exists iff {cohdim} <= {conn_f}+1",
           cohdim, "<=", conn_f + 1)
    _check(steps, "simply-connected", "suspended truncation simply connected",
           n + m - r - 1, ">=", 1)
    return _finish("Prop6_4", {"r": r, "n": n, "m": m}, steps,
                   "stable retract lift exists")


PROOFS = {
    "Prop5_7": _replay_prop5_7,
    "Prop6_4": _replay_prop6_4,
    "Thm8_1_case1": _replay_thm8_1_case1,
    "Thm8_2_case1": _replay_thm8_2_case1,
}


def replay_proof(name: str, **params) -> ProofTrace:
    """Replay a recorded derivation; every inequality is checked exactly and
    failures are reported in the trace, never thrown."""
    if name not in PROOFS:
        raise ValueError(f"unknown proof {name!r}; options: {sorted(PROOFS)}")
    return PROOFS[name](**params)


def revalidate(fact: ConnFact) -> bool:
    """Re-derive the fact's bound from its subject; the trace must reproduce."""
    fresh = derive_connectivity(fact.subject)
    return fresh.bound == fact.bound and fresh.rule_trace == fact.rule_trace
