"""Intersection-form matrices and rho-invariants for the Dehn-twist family.

The mapping class f_(m,n,N) = (D_alpha o D_beta(m,n))^(N+1) acts on the
genus-2 subsurface of Sigma_{g,1}; the representation sends every standard
generator to a root of unity omega != 1.  Its rho-invariant is
``signature(C_(m,n,N)(omega)) - 2(N+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cyclo import CyclotomicNumber, parse, root_of_unity
from .hermitian import HermitianMatrix, Inertia, determinant, signature


class PreconditionError(ValueError):
    """A documented precondition of a twist-family computation is violated."""


def omega_k(k: int) -> CyclotomicNumber:
    """exp(2 pi i / 4^k)."""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    return root_of_unity(4**k, 1)


def _require_nontrivial(omega: CyclotomicNumber) -> None:
    if omega == 1:
        raise PreconditionError("omega must not be 1")


@dataclass(frozen=True)
class TwistFamilySpec:
    """Parameters of f_(m,n,N) and the representation psi_omega.

    m = 0 is accepted: the independence table for omega_1 uses
    m = 4^0 - 1.  The matrix formula is well defined there.
    """

    m: int
    n: int
    N: int
    omega: CyclotomicNumber

    def __post_init__(self) -> None:
        if self.m < 0 or self.n < 0 or self.N < 0:
            raise PreconditionError(
                f"need m, n, N >= 0, got m={self.m}, n={self.n}, N={self.N}"
            )
        _require_nontrivial(self.omega)


def matrix_A(N: int) -> HermitianMatrix:
    """N x N tridiagonal matrix, 2 on the diagonal and -1 beside it."""
    if N < 0:
        raise PreconditionError(f"N must be >= 0, got {N}")
    return HermitianMatrix(
        tuple(
            tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(N))
            for i in range(N)
        )  # type: ignore[arg-type]
    )


def matrix_B(N: int) -> tuple[tuple[int, ...], ...]:
    """N x N lower bidiagonal matrix, -1 on the diagonal and 1 below it."""
    if N < 0:
        raise PreconditionError(f"N must be >= 0, got {N}")
    return tuple(
        tuple(-1 if i == j else (1 if i == j + 1 else 0) for j in range(N))
        for i in range(N)
    )


def g_factor(m: int, n: int, omega: CyclotomicNumber) -> CyclotomicNumber:
    """G_(m,n)(omega) = (omega^(n-1) - 1)(omega^-(m+1) - 1)."""
    return (omega ** (n - 1) - 1) * (omega ** (-(m + 1)) - 1)


def matrix_C(spec: TwistFamilySpec) -> HermitianMatrix:
    """The 2N x 2N block matrix [[A, conj(G) B^T], [G B, A]]."""
    N = spec.N
    g = g_factor(spec.m, spec.n, spec.omega)
    gbar = g.conj()
    a = matrix_A(N).entries
    b = matrix_B(N)
    zero = CyclotomicNumber.rational(0)
    rows = []
    for i in range(N):
        rows.append(tuple(a[i]) + tuple(gbar * b[j][i] if b[j][i] else zero for j in range(N)))
    for i in range(N):
        rows.append(tuple(g * b[i][j] if b[i][j] else zero for j in range(N)) + tuple(a[i]))
    return HermitianMatrix(tuple(rows))


def interleaved_order(N: int) -> list[int]:
    """alpha_1, beta_1, alpha_2, beta_2, ...: makes matrix_C banded."""
    order = []
    for i in range(N):
        order += [i, N + i]
    return order


def twist_inertia(spec: TwistFamilySpec) -> Inertia:
    # a permutation is a congruence, so inertia is unchanged
    return signature(matrix_C(spec).permuted(interleaved_order(spec.N)))


def rho_twist(spec: TwistFamilySpec) -> int:
    """rho_omega(f_(m,n,N)) = signature(C_(m,n,N)(omega)) - 2(N+1)."""
    return twist_inertia(spec).signature - 2 * (spec.N + 1)


def twist_record(spec: TwistFamilySpec) -> dict:
    """JSON-ready {m, n, N, omega, signature: [p, q, z], rho}."""
    inertia = twist_inertia(spec)
    return {
        "m": spec.m,
        "n": spec.n,
        "N": spec.N,
        "omega": spec.omega.serialize(),
        "signature": list(inertia),
        "rho": inertia.signature - 2 * (spec.N + 1),
    }


@lru_cache(maxsize=4096)
def _rho_power_cached(m: int, n: int, power: int, omega_text: str) -> int:
    return rho_twist(TwistFamilySpec(m, n, power - 1, parse(omega_text)))


def rho_power(M: int, m: int, n: int, omega: CyclotomicNumber) -> int:
    """rho_omega(h^M) for h = D_alpha o D_beta(m,n); h^0 = id, h^-M reverses sign."""
    _require_nontrivial(omega)
    if M == 0:
        return 0
    if M < 0:
        return -rho_power(-M, m, n, omega)
    return _rho_power_cached(m, n, M, omega.serialize())


def rho_dehn_power(M: int, omega: CyclotomicNumber) -> int:
    """rho_omega(D^M) for a Dehn twist D about a bounding curve.

    For M >= 1 the intersection form is matrix_A(M - 1) against an ordinary
    signature of M.  Zero and negative powers use rho(id) = 0 and
    rho(f^-1) = -rho(f).
    """
    _require_nontrivial(omega)
    if M == 0:
        return 0
    if M < 0:
        return -rho_dehn_power(-M, omega)
    return signature(matrix_A(M - 1)).signature - M


def defect_bound(genus: int = 2, rep_dim: int = 1) -> int:
    """2 n beta_1(Sigma_{g,1}) with beta_1 = 2g."""
    return 2 * rep_dim * 2 * genus


def cocycle_defect(a: int, b: int, m: int, n: int, omega: CyclotomicNumber) -> int:
    """sigma(h^a, h^b) = rho(h^a) + rho(h^b) - rho(h^(a+b))."""
    if a < 0 or b < 0:
        raise PreconditionError("powers must be >= 0")
    return rho_power(a, m, n, omega) + rho_power(b, m, n, omega) - rho_power(a + b, m, n, omega)


@dataclass(frozen=True)
class DefectScan:
    m: int
    n: int
    omega: CyclotomicNumber
    max_power: int
    rho_table: tuple[int, ...]  # rho(h^M) for M = 0 .. 2 * max_power
    max_abs_defect: int
    argmax: tuple[int, int]
    bound: int

    @property
    def within_bound(self) -> bool:
        return self.max_abs_defect <= self.bound


def defect_scan(
    m: int, n: int, omega: CyclotomicNumber, max_power: int, genus: int = 2
) -> DefectScan:
    """Max |sigma(h^a, h^b)| over 1 <= a, b <= max_power."""
    _require_nontrivial(omega)
    table = tuple(rho_power(M, m, n, omega) for M in range(2 * max_power + 1))
    best, arg = -1, (0, 0)
    for a in range(1, max_power + 1):
        for b in range(1, max_power + 1):
            d = abs(table[a] + table[b] - table[a + b])
            if d > best:
                best, arg = d, (a, b)
    return DefectScan(m, n, omega, max_power, table, max(best, 0), arg, defect_bound(genus))


@dataclass(frozen=True)
class IndependenceWitness:
    """Family member f_(4^j - 1, 4^j + 1, 2 N0) on which the combination is large."""

    j: int
    N0: int
    value: Fraction
    rho_values: tuple[int, ...]

    @property
    def m(self) -> int:
        return 4**self.j - 1

    @property
    def n(self) -> int:
        return 4**self.j + 1


def family_rho(k: int, j: int, N0: int) -> int:
    """rho_k(f_(4^j - 1, 4^j + 1, 2 N0)) through the full matrix pipeline."""
    return rho_twist(TwistFamilySpec(4**j - 1, 4**j + 1, 2 * N0, omega_k(k)))


def independence_certificate(
    ks: Sequence[int],
    coeffs: Sequence[Fraction | int],
    bound: Fraction | int,
    max_N0: int = 10_000,
) -> IndependenceWitness:
    """Find f in the family with |sum a_i rho_{k_i}(f)| > bound.

    Evaluates at j = max(ks) - 1: there omega_kmax^(4^j) = i while every
    smaller k has omega_k^(4^j) = 1, so only the top term grows with N0.
    """
    if not ks or len(ks) != len(coeffs):
        raise PreconditionError("ks and coeffs must be nonempty and of equal length")
    if any(k < 1 for k in ks) or list(ks) != sorted(set(ks)):
        raise PreconditionError("ks must be strictly increasing positive integers")
    coeffs = [Fraction(c) for c in coeffs]
    if any(c == 0 for c in coeffs):
        raise PreconditionError("coefficients must be nonzero")
    bound = Fraction(bound)
    if bound <= 0:
        raise PreconditionError("bound must be positive")
    j = ks[-1] - 1
    for N0 in range(max_N0 + 1):
        rhos = tuple(family_rho(k, j, N0) for k in ks)
        value = sum((c * r for c, r in zip(coeffs, rhos)), Fraction(0))
        if abs(value) > bound:
            return IndependenceWitness(j, N0, value, rhos)
    raise PreconditionError(f"no witness with N0 <= {max_N0}")


def roots_with_power(r: int, targets: Sequence[CyclotomicNumber]) -> list[CyclotomicNumber]:
    """Roots of unity omega != 1 with omega^r among ``targets``.

    Every target must be a root of unity of order dividing 4; the search runs
    over the 4r-th roots of unity.
    """
    out = []
    for p in range(4 * r):
        w = root_of_unity(4 * r, p)
        if w != 1 and any(w**r == t for t in targets):
            out.append(w)
    return out


def matrix_A_plus_2B(N: int) -> tuple[tuple[int, ...], ...]:
    a = matrix_A(N).entries
    b = matrix_B(N)
    return tuple(
        tuple(int(a[i][j].rational_value()) + 2 * b[i][j] for j in range(N)) for i in range(N)
    )


def det_A_plus_2B(N: int) -> CyclotomicNumber:
    return determinant(matrix_A_plus_2B(N))
