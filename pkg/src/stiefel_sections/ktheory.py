"""K-theory of truncated projective spaces and Adams operations as matrices.

The reduced K-group of the truncation P^{n-1}_m is free abelian on the
monomials u^m, ..., u^{n-1} where u = [O(1)] - 1.  On a line-bundle class the
k-th Adams operation is the k-th power, which forces psi^k(u) = (1+u)^k - 1;
extending multiplicatively and truncating at u^n gives the action on each
basis monomial.  For k = 2 this specializes to
psi^2(u^i) = sum_j C(i,j) 2^(i-j) u^(i+j).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .lattice import IntMatrix


def poly_mul_trunc(p: list[int], q: list[int], n: int) -> list[int]:
    """Product of coefficient lists, truncated below degree n."""
    out = [0] * min(len(p) + len(q) - 1, n)
    for i, a in enumerate(p):
        if a == 0 or i >= n:
            continue
        for j, b in enumerate(q):
            if i + j >= n:
                break
            out[i + j] += a * b
    return out


def poly_pow_trunc(p: list[int], e: int, n: int) -> list[int]:
    out = [1]
    base = list(p)
    while e:
        if e & 1:
            out = poly_mul_trunc(out, base, n)
        base = poly_mul_trunc(base, base, n)
        e >>= 1
    return out


@dataclass(frozen=True)
class TruncProjKGroup:
    """Free integer module on the monomials u^m, ..., u^(n-1)."""

    n: int
    m: int

    def __post_init__(self):
        if not 1 <= self.m <= self.n - 1:
            raise ValueError(f"need 1 <= m <= n-1, got n={self.n}, m={self.m}")

    @property
    def rank(self) -> int:
        return self.n - self.m

    @property
    def basis(self) -> range:
        """Basis exponents, ascending."""
        return range(self.m, self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "basis": list(self.basis)}


@dataclass(frozen=True)
class KClass:
    """An element of a TruncProjKGroup: one integer per basis exponent."""

    owner: TruncProjKGroup
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.owner.rank:
            raise ValueError("coefficient vector length does not match rank")

    def coefficient(self, exponent: int) -> int:
        if exponent not in self.owner.basis:
            raise ValueError(f"exponent {exponent} not in basis of {self.owner}")
        return self.coefficients[exponent - self.owner.m]

    def to_json(self) -> dict:
        return {**self.owner.to_json(), "coefficients": list(self.coefficients)}


def adams_on_monomial(k: int, i: int, n: int) -> KClass:
    """psi^k(u^i) in the full reduced K-group of P^(n-1) (truncation m = 1)."""
    if k < 1:
        raise ValueError(f"Adams index must be >= 1, got {k}")
    if not 1 <= i <= n - 1:
        raise ValueError(f"exponent {i} out of range 1..{n - 1}")
    # ((1+u)^k - 1)^i mod u^n
    psi_mu = [comb(k, j) for j in range(1, k + 1)]  # (1+u)^k - 1, offset by u
    coeffs = poly_pow_trunc([0] + psi_mu, i, n)
    coeffs += [0] * (n - len(coeffs))
    group = TruncProjKGroup(n=n, m=1)
    return KClass(owner=group, coefficients=tuple(coeffs[1:n]))


def adams_matrix(k: int, g: TruncProjKGroup) -> IntMatrix:
    """Matrix of psi^k on g, columns indexed by basis exponents ascending.

    Lower triangular since psi^k(u^i) only involves exponents >= i, with
    diagonal entry k^i at exponent i.
    """
    cols = []
    for i in g.basis:
        full = adams_on_monomial(k, i, g.n)
        cols.append([full.coefficient(e) for e in g.basis])
    return IntMatrix.from_rows(
        [[cols[j][r] for j in range(g.rank)] for r in range(g.rank)]
    )


def restriction_matrix(source: TruncProjKGroup, target: TruncProjKGroup) -> IntMatrix:
    """Matrix of the inclusion u^i -> u^i from the deeper truncation into the
    shallower one.  Requires target.m <= source.m and equal ambient n."""
    if source.n != target.n:
        raise ValueError(f"ambient mismatch: {source.n} != {target.n}")
    if target.m > source.m:
        raise ValueError(f"need target.m <= source.m, got {target.m} > {source.m}")
    return IntMatrix.from_rows(
        [[1 if e == i else 0 for i in source.basis] for e in target.basis]
    )


def matrix_to_json(g: TruncProjKGroup, mat: IntMatrix) -> dict:
    return {**g.to_json(), "entries": mat.to_lists()}
