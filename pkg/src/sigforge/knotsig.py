"""Levine-Tristram signatures of knots and their circle average rho_0.

The signature function omega -> sign((1 - omega) V + (1 - conj omega) V^T) is
locally constant off the unit-circle roots of the Alexander polynomial
det(V - t V^T).  rho_0 integrates it exactly by locating those roots and
evaluating once per arc at a root of unity inside the arc.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from importlib import resources
from typing import Sequence

import sympy

from .cyclo import CyclotomicNumber, cyclotomic_polynomial, euler_phi, root_of_unity, sign_of_real
from .hermitian import HermitianMatrix, signature


@dataclass(frozen=True)
class SeifertMatrix:
    """Integer Seifert form of a knot; det(V - V^T) must be 1."""

    entries: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Seifert matrix must be square")
        skew = [[rows[i][j] - rows[j][i] for j in range(n)] for i in range(n)]
        if _int_determinant(skew) != 1:
            raise ValueError("not a knot Seifert matrix: det(V - V^T) != 1")

    @classmethod
    def _unchecked(cls, entries: tuple[tuple[int, ...], ...], name: str | None) -> SeifertMatrix:
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", entries)
        object.__setattr__(obj, "name", name)
        return obj

    @property
    def dim(self) -> int:
        return len(self.entries)

    def transpose(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.entries)) if self.entries else ()

    def mirror(self) -> SeifertMatrix:
        """Seifert matrix -V^T of the mirror image."""
        name = None if self.name is None else f"mirror({self.name})"
        return SeifertMatrix(tuple(tuple(-v for v in row) for row in self.transpose()), name)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _int_determinant(m: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def connected_sum(v1: SeifertMatrix, v2: SeifertMatrix) -> SeifertMatrix:
    """Block sum of Seifert matrices."""
    n1, n2 = v1.dim, v2.dim
    rows = [tuple(r) + (0,) * n2 for r in v1.entries]
    rows += [(0,) * n1 + tuple(r) for r in v2.entries]
    names = [v.name for v in (v1, v2) if v.name and v.name != "unknot"]
    # det(V - V^T) is multiplicative over block sums, so no re-validation
    return SeifertMatrix._unchecked(tuple(rows), " # ".join(names) if names else None)


def connected_sum_of(knots: Sequence[SeifertMatrix]) -> SeifertMatrix:
    out = SeifertMatrix((), "unknot")
    for k in knots:
        out = connected_sum(out, k)
    return out


# -- built-in knot table -----------------------------------------------------

BUILTIN_KNOTS = ("unknot", "trefoil_right", "trefoil_left", "figure8")


@lru_cache(maxsize=None)
def load_knot(name: str) -> SeifertMatrix:
    if name not in BUILTIN_KNOTS:
        raise KeyError(f"unknown knot {name!r}; built-ins are {', '.join(BUILTIN_KNOTS)}")
    text = resources.files("sigforge").joinpath(f"data/knots/{name}.json").read_text()
    data = json.loads(text)
    return SeifertMatrix(tuple(tuple(r) for r in data["seifert_matrix"]), data["name"])


def knot_from_json(obj: object) -> SeifertMatrix:
    """A built-in name or an integer array-of-arrays."""
    if isinstance(obj, str):
        return load_knot(obj)
    if isinstance(obj, list):
        return SeifertMatrix(tuple(tuple(r) for r in obj))
    raise ValueError(f"cannot read knot from {obj!r}")


# -- signature function --------------------------------------------------------


def lt_form(v: SeifertMatrix, omega: CyclotomicNumber) -> HermitianMatrix:
    """(1 - omega) V + (1 - conj omega) V^T."""
    a = 1 - omega
    b = a.conj()
    vt = v.transpose()
    return HermitianMatrix(
        tuple(
            tuple(a * v.entries[i][j] + b * vt[i][j] for j in range(v.dim))
            for i in range(v.dim)
        )
    )


def lt_signature(v: SeifertMatrix, omega: CyclotomicNumber) -> int:
    if omega == 1:
        raise ValueError("omega must not be 1")
    if omega * omega.conj() != 1:
        raise ValueError("omega must lie on the unit circle")
    return signature(lt_form(v, omega)).signature


def alexander_polynomial(v: SeifertMatrix) -> tuple[int, ...]:
    """Integer coefficients of det(V - t V^T), lowest degree first."""
    if v.dim == 0:
        return (1,)
    t = sympy.Symbol("t")
    mat = sympy.Matrix(v.entries) - t * sympy.Matrix(v.transpose())
    poly = sympy.Poly(mat.det(method="berkowitz"), t)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


# -- unit circle roots -----------------------------------------------------------


def _eval(poly: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _trace_polynomial(f: Sequence[int]) -> tuple[int, ...]:
    """g with t^(-d) f(t) = g(t + 1/t) for palindromic f of degree 2d."""
    d = (len(f) - 1) // 2
    dickson = [(2,), (0, 1)]  # t^k + t^-k as a polynomial in u
    for _ in range(2, d + 1):
        prev, cur = dickson[-2], dickson[-1]
        nxt = [0] + list(cur)
        for i, c in enumerate(prev):
            nxt[i] -= c
        dickson.append(tuple(nxt))
    g = [0] * (d + 1)
    g[0] = f[d]
    for k in range(1, d + 1):
        for i, c in enumerate(dickson[k]):
            g[i] += f[d + k] * c
    return tuple(g)


def _cyclotomic_index(f: Sequence[int]) -> int | None:
    deg = len(f) - 1
    lead = f[-1]
    for q in range(1, 2 * deg * deg + 3):
        if euler_phi(q) != deg:
            continue
        cyc = cyclotomic_polynomial(q)
        if all(a == lead * c for a, c in zip(f, cyc)):
            return q
    return None


@dataclass
class UnitRoot:
    """One root of the Alexander polynomial on the upper unit semicircle.

    ``turn`` is arg(t) / 2 pi when t is a root of unity; otherwise the root is
    isolated by ``u_bounds``, an interval holding t + 1/t = 2 cos(2 pi turn).
    """

    factor: tuple[int, ...]
    multiplicity: int
    turn: Fraction | None = None
    u_bounds: tuple[Fraction, Fraction] | None = None
    trace_poly: tuple[int, ...] | None = None

    @property
    def exact(self) -> bool:
        return self.turn is not None

    def approx_turn(self) -> float:
        if self.turn is not None:
            return float(self.turn)
        lo, hi = self.u_bounds  # type: ignore[misc]
        u = (float(lo) + float(hi)) / 2
        return math.acos(max(-1.0, min(1.0, u / 2))) / (2 * math.pi)

    def turn_bounds(self) -> tuple[float, float]:
        if self.turn is not None:
            return float(self.turn), float(self.turn)
        lo, hi = self.u_bounds  # type: ignore[misc]
        a = math.acos(max(-1.0, min(1.0, float(hi) / 2))) / (2 * math.pi)
        b = math.acos(max(-1.0, min(1.0, float(lo) / 2))) / (2 * math.pi)
        return a, b

    def refine(self) -> None:
        lo, hi = self.u_bounds  # type: ignore[misc]
        if lo == hi:
            return
        g = self.trace_poly
        mid = (lo + hi) / 2
        s_mid = _eval(g, mid)
        if s_mid == 0:
            self.u_bounds = (mid, mid)
        elif (s_mid > 0) == (_eval(g, lo) > 0):
            self.u_bounds = (mid, hi)
        else:
            self.u_bounds = (lo, mid)

    def compare_turn(self, x: Fraction) -> int:
        """Sign of x - turn for a rational turn x in [0, 1/2]."""
        if self.turn is not None:
            return (x > self.turn) - (x < self.turn)
        u_x = root_of_unity(x.denominator, x.numerator) + root_of_unity(x.denominator, -x.numerator)
        while True:
            lo, hi = self.u_bounds  # type: ignore[misc]
            if sign_of_real(u_x - hi) > 0:
                return -1
            if sign_of_real(u_x - lo) < 0:
                return 1
            self.refine()

    def describe(self) -> dict:
        out: dict = {"factor": list(self.factor), "multiplicity": self.multiplicity}
        if self.turn is not None:
            out["turn"] = str(self.turn)
        else:
            out["u_interval"] = [str(b) for b in self.u_bounds]  # type: ignore[union-attr]
            out["turn_approx"] = self.approx_turn()
        return out


def _compare_roots(a: UnitRoot, b: UnitRoot) -> int:
    if a.turn is not None:
        return -b.compare_turn(a.turn)
    if b.turn is not None:
        return a.compare_turn(b.turn)
    while True:
        alo, ahi = a.u_bounds  # type: ignore[misc]
        blo, bhi = b.u_bounds  # type: ignore[misc]
        if ahi < blo:
            return 1  # smaller u means larger angle
        if bhi < alo:
            return -1
        a.refine()
        b.refine()


def alexander_unit_roots(v: SeifertMatrix) -> list[UnitRoot]:
    """Roots of det(V - t V^T) on the closed upper unit semicircle, by angle.

    Roots below the real axis are the complex conjugates of these.
    """
    delta = alexander_polynomial(v)
    if len(delta) == 1:
        return []
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(delta)), t)
    _, factors = sympy.factor_list(poly)
    roots: list[UnitRoot] = []
    for fac, mult in factors:
        f = tuple(int(c) for c in reversed(fac.all_coeffs()))
        q = _cyclotomic_index(f)
        if q is not None:
            for p in range(1, q // 2 + 1):
                if math.gcd(p, q) == 1:
                    roots.append(UnitRoot(f, mult, turn=Fraction(p, q)))
            continue
        if len(f) % 2 == 0 or f != f[::-1]:
            continue  # irreducible, not palindromic: no unimodular roots
        g = _trace_polynomial(f)
        u = sympy.Symbol("u")
        gpoly = sympy.Poly(list(reversed(g)), u)
        for (lo, hi), _ in gpoly.intervals():
            lo, hi = Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))
            root = UnitRoot(f, mult, u_bounds=(lo, hi), trace_poly=g)
            while root.u_bounds[0] <= -2 or root.u_bounds[1] >= 2:  # type: ignore[index]
                if root.u_bounds[0] == root.u_bounds[1]:  # type: ignore[index]
                    break
                root.refine()
            ulo, uhi = root.u_bounds  # type: ignore[misc]
            if -2 < ulo and uhi < 2:
                roots.append(root)
    roots.sort(key=cmp_to_key(_compare_roots))
    return roots


# -- arcs and rho_0 ----------------------------------------------------------------


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction of least denominator strictly inside (lo, hi), 0 <= lo < hi."""
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    lo, hi = lo - fl, hi - fl
    if lo == 0:
        # need 1/k < hi
        return fl + Fraction(1, math.floor(1 / hi) + 1)
    inner = _simplest_between(1 / hi, 1 / lo)
    return fl + 1 / inner


@dataclass
class Arc:
    """Open arc of the upper semicircle between consecutive roots (in turns)."""

    lo: UnitRoot | None  # None: starts at turn 0 (omega = 1)
    hi: UnitRoot | None  # None: runs to turn 1/2 and through omega = -1

    def _bound(self, which: str) -> tuple[Fraction | None, float]:
        root = self.lo if which == "lo" else self.hi
        if root is None:
            val = Fraction(0) if which == "lo" else Fraction(1, 2)
            return val, float(val)
        if root.turn is not None:
            return root.turn, float(root.turn)
        a, b = root.turn_bounds()
        return None, (a if which == "lo" else b)

    def contains(self, x: Fraction) -> bool:
        if self.lo is None:
            if x <= 0:
                return False
        elif self.lo.compare_turn(x) <= 0:
            return False
        if self.hi is None:
            return x <= Fraction(1, 2)
        return self.hi.compare_turn(x) < 0

    def length(self) -> Fraction | float:
        lo, lo_f = self._bound("lo")
        hi, hi_f = self._bound("hi")
        if lo is not None and hi is not None:
            return hi - lo
        a = self.lo.approx_turn() if self.lo is not None else 0.0
        b = self.hi.approx_turn() if self.hi is not None else 0.5
        return b - a

    def samples(self, count: int = 1) -> list[Fraction]:
        """``count`` distinct rational turns certified to lie in the arc."""
        while True:
            lo_exact, lo_f = self._bound("lo")
            hi_exact, hi_f = self._bound("hi")
            lo = lo_exact if lo_exact is not None else Fraction(lo_f)
            hi = hi_exact if hi_exact is not None else Fraction(hi_f)
            if self.hi is None and count == 1:
                # the arc continues through omega = -1
                hi = Fraction(1, 2) + (Fraction(1, 2) - lo)
            step = (hi - lo) / count
            picks = []
            for k in range(count):
                x = _simplest_between(lo + k * step, lo + (k + 1) * step)
                if x > Fraction(1, 2):
                    x = Fraction(1, 2)
                picks.append(x)
            if len(set(picks)) == count and all(self.contains(x) for x in picks):
                return picks
            for r in (self.lo, self.hi):
                if r is not None and r.turn is None:
                    for _ in range(8):
                        r.refine()


def signature_arcs(v: SeifertMatrix) -> list[tuple[Arc, int]]:
    """Arcs of the upper semicircle with the constant signature on each."""
    roots = alexander_unit_roots(v)
    bounds: list[UnitRoot | None] = [None, *roots, None]
    if roots and roots[-1].turn == Fraction(1, 2):
        bounds = [None, *roots]
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        arc = Arc(lo, hi)
        x = arc.samples(1)[0]
        out.append((arc, lt_signature(v, root_of_unity(x.denominator, x.numerator))))
    return out


def _orthogonal_blocks(v: SeifertMatrix) -> list[tuple[tuple[int, ...], ...]]:
    """Split V into diagonal blocks with no entries between them."""
    n = v.dim
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(n):
            if v.entries[i][j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [
        tuple(tuple(v.entries[i][j] for j in idx) for i in idx)
        for idx in groups.values()
    ]


@lru_cache(maxsize=1024)
def _rho0_block(entries: tuple[tuple[int, ...], ...]) -> Fraction | float:
    total: Fraction | float = Fraction(0)
    for arc, sig in signature_arcs(SeifertMatrix(entries)):
        total = total + 2 * sig * arc.length()
    return total


def rho0(v: SeifertMatrix) -> Fraction | float:
    """Average of the Levine-Tristram signature over the circle.

    Exact (a Fraction) when every unit-circle root of the Alexander
    polynomial is a root of unity; otherwise a float.  Computed blockwise:
    a connected sum splits into orthogonal blocks and rho_0 is additive.
    """
    total: Fraction | float = Fraction(0)
    for block in _orthogonal_blocks(v):
        total = total + _rho0_block(block)
    return total
