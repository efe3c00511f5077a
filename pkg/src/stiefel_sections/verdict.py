"""End-to-end section-existence verdicts for the projections
p: V_{r+l}(A^n) -> V_r(A^n) over a described field.

A verdict composes reductions, solver runs, divisibility conditions, and
cited facts into a reason chain that replays: re-executing every step
reproduces the status, no step is trust-me.  Four statuses are kept apart --
proved nonexistence, proved existence, a necessary condition only (the
n - r = 1 (mod 24) residue class, where the obstruction theory is
one-directional), and Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

from .connectivity import ProofTrace, replay_proof
from .retract_solver import (
    Exists,
    Impossible,
    RetractProblem,
    RetractVerdict,
    decide_retract,
    verify_certificate,
    verify_witness,
)

NO_SECTION = "NoSection"
SECTION_EXISTS = "SectionExists"
NECESSARY_ONLY = "NecessaryConditionOnly"
UNKNOWN = "Unknown"

# Anchor quotes for every cited fact and hypothesis step.
ANCHOR_ALG_CLOSED = "we may assume k is algebraically closed"
ANCHOR_DROP_L = "has a section for any nonnegative integer l' <= l"
ANCHOR_DROP_R = "if p has a section after adding s rows, it has one before"
ANCHOR_JAMES_0 = "divisible by the third James number b3 = 24"
ANCHOR_JAMES_2 = "the integer N3(2) is 3"
ANCHOR_JAMES_3 = "the integer N3(3) is 4"
ANCHOR_JAMES_P = "the integer N3(p) is 12"
ANCHOR_SQ2 = "Sq2(a2) = a3"
ANCHOR_SQ4_26 = "Sq4(a4) = a6"
ANCHOR_SQ4_24 = "Sq4(a2) = a4"
ANCHOR_KUMAR_NORI = "a stably free module of rank 2 given by a unimodular row of length 3 that is not free"
ANCHOR_SL_N = "a section of p is given by the obvious inclusion SL_n -> GL_n"
ANCHOR_V2_PARITY = "V_2(A^n) -> V_1(A^n) has a section if and only if n is even"
ANCHOR_SPLITTING = "the comparison map f_2^n has a stable retract (perfect field, finite 2-etale cohomological dimension)"
ANCHOR_OVER_Z = "there does not exist a section of p over Z"
ANCHOR_MOD24 = "then n - r = 1 (mod 24)"
ANCHOR_CASE_COVERAGE = "the stated inequality is recorded as failing at n-r = 3; the case conclusion is carried as a cited fact"
ANCHOR_IDENTITY = "l = 0: p is the identity projection"

_KNOWN_ANCHORS = {v for k, v in list(globals().items()) if k.startswith("ANCHOR_")}


@dataclass(frozen=True)
class FieldDescriptor:
    characteristic: int = 0
    algebraically_closed: bool = False
    perfect: bool = True
    finite_2_etale_cohdim: bool = True

    def __post_init__(self):
        if self.characteristic < 0:
            raise ValueError("characteristic must be 0 or a prime")
        if self.characteristic == 0 and not self.perfect:
            raise ValueError("characteristic 0 fields are perfect")

    def to_json(self) -> dict:
        return {
            "char": self.characteristic,
            "alg_closed": self.algebraically_closed,
            "perfect": self.perfect,
            "fin_2_cohdim": self.finite_2_etale_cohdim,
        }


@dataclass(frozen=True)
class SectionQuery:
    r: int
    l: int
    n: int
    field: FieldDescriptor = FieldDescriptor()

    def __post_init__(self):
        if self.r < 1 or self.l < 0 or self.r + self.l > self.n:
            raise ValueError(f"need r >= 1, l >= 0, r + l <= n; got {self}")

    def to_json(self) -> dict:
        return {"r": self.r, "l": self.l, "n": self.n, "field": self.field.to_json()}


@dataclass(frozen=True)
class ReasonStep:
    kind: str  # Reduction | SolverRun | CitedFact | DivisibilityCheck | ConnectivityReplay
    payload: dict
    citation: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": self.payload, "citation": self.citation}


@dataclass(frozen=True)
class SectionVerdict:
    query: SectionQuery
    status: str
    reason_chain: tuple[ReasonStep, ...]
    holds_over_z: bool = False

    def to_json(self) -> dict:
        return {
            "query": self.query.to_json(),
            "status": self.status,
            "holds_over_Z": self.holds_over_z,
            "chain": [s.to_json() for s in self.reason_chain],
        }


@dataclass(frozen=True)
class StablyFreeStatement:
    n: int
    rank: int
    forbidden_free_summand_rank: int
    status: str

    def render(self) -> str:
        if self.status == NO_SECTION:
            return (
                f"there is a stably free module of type ({self.n}, {self.rank}) "
                f"with no free summand of rank {self.forbidden_free_summand_rank}"
            )
        return (
            f"the universal stably free module of type ({self.n}, {self.rank}) "
            f"has a free summand of rank {self.forbidden_free_summand_rank}"
        )


def reduce_query(q: SectionQuery) -> tuple[SectionQuery, tuple[ReasonStep, ...]]:
    """Shrink (r, l, n) to the two canonical shapes: (2, 2, n-r+2) when
    l >= 2 and (2, 1, n-r+2) when l = 1, r >= 2.  Nonexistence for the
    reduced query implies nonexistence for the original (contrapositive of
    the two section lemmas); out-of-regime queries reduce to themselves."""
    steps: list[ReasonStep] = []
    r, l, n = q.r, q.l, q.n
    if r < 2 or l < 1:
        return q, ()
    if l > 2:
        steps.append(ReasonStep(
            "Reduction", {"from": [r, l, n], "to": [r, 2, n]}, ANCHOR_DROP_L))
        l = 2
    if r > 2:
        steps.append(ReasonStep(
            "Reduction", {"from": [r, l, n], "to": [2, l, n - r + 2], "shaved_rows": r - 2},
            ANCHOR_DROP_R))
        n = n - r + 2
        r = 2
    reduced = SectionQuery(r=r, l=l, n=n, field=q.field)
    return reduced, tuple(steps)


def james_divisibility(n: int, fld: FieldDescriptor) -> tuple[int, str]:
    """Divisibility modulus for n imposed by a section of V_3(A^n) -> V_1(A^n)."""
    p = fld.characteristic
    if p == 0:
        return 24, ANCHOR_JAMES_0
    if p == 2:
        return 3, ANCHOR_JAMES_2
    if p == 3:
        return 4, ANCHOR_JAMES_3
    return 12, ANCHOR_JAMES_P


@dataclass(frozen=True)
class CitedFact:
    name: str
    statement: str
    anchor: str
    status_if_applies: str

    def applies(self, q: SectionQuery) -> bool:
        return _FACT_PREDICATES[self.name](q)


_FACT_PREDICATES = {
    "sl-n-inclusion": lambda q: q.l == 1 and q.r == q.n - 1,
    "v2-section-parity": lambda q: q.r == 1 and q.l == 1 and q.n % 2 == 0,
    "v2-no-section-odd": lambda q: q.r == 1 and q.l == 1 and q.n % 2 == 1,
    "sq2-obstruction": lambda q: (q.r, q.l, q.n) == (1, 1, 3),
    "sq4-obstruction-6": lambda q: (q.r, q.l, q.n) == (1, 2, 6)
    and q.field.characteristic == 2,
    "sq4-obstruction-4": lambda q: (q.r, q.l, q.n) == (1, 2, 4)
    and q.field.characteristic == 3,
    "kumar-nori": lambda q: (q.r, q.l, q.n) == (1, 2, 3)
    and q.field.characteristic == 2,
}

_FACTS = (
    CitedFact("sl-n-inclusion",
              "the projection V_n(A^n) -> V_{n-1}(A^n) splits via SL_n",
              ANCHOR_SL_N, SECTION_EXISTS),
    CitedFact("v2-section-parity",
              "V_2(A^n) -> V_1(A^n) has a section for even n",
              ANCHOR_V2_PARITY, SECTION_EXISTS),
    CitedFact("v2-no-section-odd",
              "V_2(A^n) -> V_1(A^n) has no section for odd n",
              ANCHOR_V2_PARITY, NO_SECTION),
    CitedFact("sq2-obstruction",
              "the first Steenrod square obstructs V_2(A^3) -> V_1(A^3)",
              ANCHOR_SQ2, NO_SECTION),
    CitedFact("sq4-obstruction-6",
              "Sq4 obstructs V_3(A^6) -> V_1(A^6) in characteristic 2",
              ANCHOR_SQ4_26, NO_SECTION),
    CitedFact("sq4-obstruction-4",
              "Sq4 obstructs V_3(A^4) -> V_1(A^4) in characteristic 3",
              ANCHOR_SQ4_24, NO_SECTION),
    CitedFact("kumar-nori",
              "a rank-2 stably free non-free module obstructs V_3(A^3) -> V_1(A^3)",
              ANCHOR_KUMAR_NORI, NO_SECTION),
)


def cited_obstructions() -> tuple[CitedFact, ...]:
    return _FACTS


@lru_cache(maxsize=None)
def _cached_retract(n: int, s: int, t: int, ks: frozenset) -> RetractVerdict:
    return decide_retract(RetractProblem(n=n, s=s, t=t, ks=ks))


def _solver_step(n: int, s: int, t: int) -> tuple[ReasonStep, RetractVerdict]:
    v = _cached_retract(n, s, t, frozenset({2}))
    payload = {
        "problem": {"n": n, "s": s, "t": t, "ks": [2]},
        "result": v.to_json(),
    }
    return ReasonStep("SolverRun", payload,
                      "equivariant retract decided by exact linear algebra"), v


def _fact_step(fact: CitedFact) -> ReasonStep:
    return ReasonStep("CitedFact", {"name": fact.name, "statement": fact.statement},
                      fact.anchor)


def decide_section(q: SectionQuery) -> SectionVerdict:
    chain: list[ReasonStep] = []
    fld = q.field
    r, l, n = q.r, q.l, q.n

    if l == 0:
        chain.append(ReasonStep("CitedFact", {"l": 0}, ANCHOR_IDENTITY))
        return SectionVerdict(q, SECTION_EXISTS, tuple(chain))

    for fact in _FACTS:
        if fact.status_if_applies == SECTION_EXISTS and fact.applies(q):
            chain.append(_fact_step(fact))
            return SectionVerdict(q, SECTION_EXISTS, tuple(chain))

    if r == 1:
        for fact in _FACTS:
            if fact.status_if_applies == NO_SECTION and fact.applies(q):
                chain.append(_fact_step(fact))
                chain.append(ReasonStep("CitedFact", {}, ANCHOR_OVER_Z))
                return SectionVerdict(q, NO_SECTION, tuple(chain), holds_over_z=True)
        # r = 1, l > 1 beyond the fact table is out of scope here.
        chain.append(ReasonStep(
            "CitedFact", {"blocking": "no applicable obstruction for r = 1, l > 1"},
            "deferred"))
        return SectionVerdict(q, UNKNOWN, tuple(chain))

    # r >= 2 pipeline.  Nonexistence descends along field extensions, so we
    # may pass to the algebraic closure; afterwards the field is perfect with
    # trivial 2-etale cohomology, so those hypotheses hold automatically.
    if not fld.algebraically_closed:
        chain.append(ReasonStep(
            "CitedFact",
            {"base_change": "algebraic closure",
             "note": "nonexistence descends; existence would not"},
            ANCHOR_ALG_CLOSED))

    reduced, steps = reduce_query(q)
    chain.extend(steps)
    n2 = reduced.n

    if l >= 2:
        if n2 >= 8:
            rep = replay_proof("Thm8_1_case1", n=n2)
            chain.append(_replay_step(rep))
            if not rep.passed:
                chain.append(ReasonStep("CitedFact", {"blocking": rep.first_failure},
                                        "lifting threshold"))
                return SectionVerdict(q, UNKNOWN, tuple(chain))
            chain.append(ReasonStep(
                "CitedFact", {"hypotheses": ["perfect", "finite 2-etale cohdim"]},
                ANCHOR_SPLITTING))
            step, v = _solver_step(n2, n2 - 2, n2 - 4)
            chain.append(step)
            if isinstance(v, Impossible):
                chain.append(ReasonStep("CitedFact", {}, ANCHOR_OVER_Z))
                return SectionVerdict(q, NO_SECTION, tuple(chain), holds_over_z=True)
            return SectionVerdict(q, UNKNOWN, tuple(chain))
        # n2 in {4..7}: one more reduction, then divisibility + cited facts.
        m = n2 - 1
        chain.append(ReasonStep(
            "Reduction", {"from": [2, 2, n2], "to": [1, 2, m]}, ANCHOR_DROP_R))
        modulus, anchor = james_divisibility(m, fld)
        divisible = m % modulus == 0
        chain.append(ReasonStep(
            "DivisibilityCheck",
            {"value": m, "modulus": modulus, "divisible": divisible}, anchor))
        if not divisible:
            chain.append(ReasonStep("CitedFact", {}, ANCHOR_OVER_Z))
            return SectionVerdict(q, NO_SECTION, tuple(chain), holds_over_z=True)
        sub = SectionQuery(r=1, l=2, n=m, field=fld)
        for fact in _FACTS:
            if fact.status_if_applies == NO_SECTION and fact.applies(sub):
                chain.append(_fact_step(fact))
                chain.append(ReasonStep("CitedFact", {}, ANCHOR_OVER_Z))
                return SectionVerdict(q, NO_SECTION, tuple(chain), holds_over_z=True)
        chain.append(ReasonStep(
            "CitedFact", {"blocking": f"divisible case {m} not covered"}, "gap"))
        return SectionVerdict(q, UNKNOWN, tuple(chain))

    # l = 1, 2 <= r <= n - 2.
    if n - r == 2:
        chain.append(ReasonStep(
            "Reduction", {"from": [2, 1, 4], "to": [1, 1, 3]}, ANCHOR_DROP_R))
        sq2 = next(f for f in _FACTS if f.name == "sq2-obstruction")
        chain.append(_fact_step(sq2))
        chain.append(ReasonStep("CitedFact", {}, ANCHOR_OVER_Z))
        return SectionVerdict(q, NO_SECTION, tuple(chain), holds_over_z=True)

    rep = replay_proof("Thm8_2_case1", n=n, r=r)
    chain.append(_replay_step(rep))
    if not rep.passed:
        # The replay records the failing inequality at n - r = 3; the case
        # conclusion is nevertheless carried, as a cited fact, not repaired.
        chain.append(ReasonStep(
            "CitedFact", {"first_failure": rep.first_failure}, ANCHOR_CASE_COVERAGE))
    step, v = _solver_step(n2, n2 - 2, n2 - 3)
    chain.append(step)
    if isinstance(v, Impossible):
        chain.append(ReasonStep(
            "DivisibilityCheck",
            {"value": n - r, "modulus": 24, "residue": (n - r) % 24,
             "condition_met": (n - r) % 24 == 1},
            ANCHOR_MOD24))
        chain.append(ReasonStep("CitedFact", {}, ANCHOR_OVER_Z))
        return SectionVerdict(q, NO_SECTION, tuple(chain), holds_over_z=True)
    chain.append(ReasonStep(
        "DivisibilityCheck",
        {"value": n - r, "modulus": 24, "residue": (n - r) % 24,
         "condition_met": (n - r) % 24 == 1},
        ANCHOR_MOD24))
    return SectionVerdict(q, NECESSARY_ONLY, tuple(chain))


def _replay_step(rep: ProofTrace) -> ReasonStep:
    return ReasonStep(
        "ConnectivityReplay",
        {"name": rep.name, "params": rep.params, "passed": rep.passed,
         "conclusion": rep.conclusion, "first_failure": rep.first_failure},
        "rule-table replay")


def to_stably_free(v: SectionVerdict) -> StablyFreeStatement:
    """Restate a definite verdict in stably-free-module language."""
    if v.status not in (NO_SECTION, SECTION_EXISTS):
        raise ValueError(f"verdict {v.status} has no module translation")
    q = v.query
    return StablyFreeStatement(
        n=q.n, rank=q.n - q.r, forbidden_free_summand_rank=q.l, status=v.status)


def verify_verdict(v: SectionVerdict) -> bool:
    """Replay every step of the chain and re-derive the status."""
    for step in v.reason_chain:
        if step.kind == "SolverRun":
            prob = step.payload["problem"]
            p = RetractProblem(n=prob["n"], s=prob["s"], t=prob["t"],
                               ks=frozenset(prob["ks"]))
            res = step.payload["result"]
            if res["verdict"] == "impossible":
                from .lattice import NoSolution
                cert = NoSolution(
                    certificate=tuple(res["certificate"]["y"]),
                    modulus=res["certificate"]["modulus"])
                if not verify_certificate(p, Impossible(certificate=cert)):
                    return False
            else:
                from .lattice import IntMatrix
                if not verify_witness(p, IntMatrix.from_rows(res["witness"])):
                    return False
        elif step.kind == "DivisibilityCheck":
            pay = step.payload
            if "divisible" in pay:
                if pay["divisible"] != (pay["value"] % pay["modulus"] == 0):
                    return False
            else:
                if pay["residue"] != pay["value"] % pay["modulus"]:
                    return False
        elif step.kind == "ConnectivityReplay":
            rep = replay_proof(step.payload["name"], **step.payload["params"])
            if rep.passed != step.payload["passed"]:
                return False
            if rep.conclusion != step.payload["conclusion"]:
                return False
        elif step.kind == "CitedFact":
            if step.citation not in _KNOWN_ANCHORS and step.citation not in (
                    "deferred", "gap", "lifting threshold"):
                return False
        elif step.kind == "Reduction":
            pass  # checked wholesale by the re-derivation below
        else:
            return False
    return decide_section(v.query).status == v.status


def sweep(r_range, l_range, n_range, fld: FieldDescriptor) -> list[SectionVerdict]:
    """One verdict per admissible (r, l, n) triple, deterministic order."""
    out = []
    for r in r_range:
        for l in l_range:
            for n in n_range:
                if r >= 1 and l >= 0 and r + l <= n:
                    out.append(decide_section(SectionQuery(r=r, l=l, n=n, field=fld)))
    return out


CSV_COLUMNS = ("r", "l", "n", "char", "status", "chain_length", "certificate_ref")


def csv_row(v: SectionVerdict) -> tuple:
    ref = ""
    for step in v.reason_chain:
        if step.kind == "SolverRun":
            p = step.payload["problem"]
            ref = f"retract(n={p['n']},s={p['s']},t={p['t']},ks={p['ks']})"
    return (v.query.r, v.query.l, v.query.n, v.query.field.characteristic,
            v.status, len(v.reason_chain), ref)
