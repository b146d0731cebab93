"""Inertia of a Hermitian matrix from its characteristic polynomial.

Independent of the congruence engine: sympy supplies the characteristic
polynomial and its square-free decomposition; roots of each square-free
factor are counted on (-inf, 0) and (0, inf) by a Sturm sequence over Q.
"""

from __future__ import annotations

from fractions import Fraction

import sympy
from sympy.polys.matrices import DomainMatrix

Poly = list[Fraction]  # coefficients, highest degree first


def _trim(p: Poly) -> Poly:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _rem(a: Poly, b: Poly) -> Poly:
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for k in range(len(b)):
            a[k] -= f * b[k]
        a.pop(0)
    return _trim(a) if a else [Fraction(0)]


def _deriv(p: Poly) -> Poly:
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [Fraction(0)]


def _sturm(p: Poly) -> list[Poly]:
    seq = [p, _deriv(p)]
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        r = _rem(seq[-2], seq[-1])
        if not any(r):
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(values: list[int]) -> int:
    vals = [v for v in values if v != 0]
    return sum(1 for a, b in zip(vals, vals[1:]) if a * b < 0)


def _sign_at_zero(p: Poly) -> int:
    c = p[-1]
    return (c > 0) - (c < 0)


def _sign_at_inf(p: Poly, positive: bool) -> int:
    lead = p[0]
    s = (lead > 0) - (lead < 0)
    if not positive and (len(p) - 1) % 2:
        s = -s
    return s


def _count(p: Poly) -> tuple[int, int]:
    """(roots in (0, inf), roots in (-inf, 0)) for square-free p with p(0) != 0."""
    seq = _sturm(p)
    at0 = _sign_changes([_sign_at_zero(q) for q in seq])
    pos = at0 - _sign_changes([_sign_at_inf(q, True) for q in seq])
    neg = _sign_changes([_sign_at_inf(q, False) for q in seq]) - at0
    return pos, neg


def inertia_oracle(rows: list[list[sympy.Expr]]) -> tuple[int, int, int]:
    if not rows:
        return 0, 0, 0
    lam = sympy.Symbol("lam")
    dm = DomainMatrix.from_Matrix(sympy.Matrix(rows)).convert_to(sympy.QQ_I)
    # a Hermitian characteristic polynomial has real coefficients
    real = []
    for c in dm.charpoly():
        assert c.y == 0
        real.append(sympy.Rational(c.x.numerator, c.x.denominator))
    cp = sympy.Poly(real, lam, domain=sympy.QQ)
    plus = minus = zero = 0
    _, factors = sympy.sqf_list(cp)
    for f, mult in factors:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in f.all_coeffs()]
        while coeffs[-1] == 0:
            # factor out lam; square-free, so this happens at most once
            zero += mult
            coeffs.pop()
        if len(coeffs) == 1:
            continue
        pos, neg = _count(coeffs)
        plus += mult * pos
        minus += mult * neg
    return plus, minus, zero
