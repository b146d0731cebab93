"""Homology cylinders built from the identity cylinder by knot infection.

An infection along a curve lying in the (n-1)-st lower central term of the
fundamental group, with no power in the n-th, shifts rho_i by rho_0(K) for
i >= n and leaves rho_i unchanged for 2 <= i < n.  Depth n is declared by
the caller.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .knotsig import SeifertMatrix, connected_sum_of, knot_from_json, load_knot, rho0


class InsufficientKnotBasisError(ValueError):
    """The available knots cannot realize the requested rho value."""


@dataclass(frozen=True)
class InfectionRecord:
    depth: int
    knot: SeifertMatrix

    def __post_init__(self) -> None:
        if self.depth < 2:
            raise ValueError(f"infection depth must be >= 2, got {self.depth}")

    def rho0(self) -> Fraction:
        value = rho0(self.knot)
        if not isinstance(value, Fraction):
            raise ValueError("knot has non-cyclotomic Alexander roots; rho_0 is not rational")
        return value


@dataclass(frozen=True, eq=False)
class InfectionScript:
    """Identity cylinder over Sigma_{genus,1} followed by ordered infections.

    Two scripts are equal when their rho ledgers agree (same genus and the
    same total rho_0 contribution at every depth).
    """

    genus: int = 2
    records: tuple[InfectionRecord, ...] = ()

    def __post_init__(self) -> None:
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        object.__setattr__(self, "records", tuple(self.records))

    def infect(self, depth: int, knot: SeifertMatrix) -> InfectionScript:
        return InfectionScript(self.genus, self.records + (InfectionRecord(depth, knot),))

    def __add__(self, other: InfectionScript) -> InfectionScript:
        if not isinstance(other, InfectionScript):
            return NotImplemented
        if other.genus != self.genus:
            raise ValueError("cannot concatenate scripts of different genus")
        return InfectionScript(self.genus, self.records + other.records)

    def ledger(self) -> dict[int, Fraction]:
        """Total rho_0 added at each depth, zero totals dropped."""
        out: dict[int, Fraction] = {}
        for rec in self.records:
            out[rec.depth] = out.get(rec.depth, Fraction(0)) + rec.rho0()
        return {d: v for d, v in sorted(out.items()) if v != 0}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InfectionScript):
            return NotImplemented
        return self.genus == other.genus and self.ledger() == other.ledger()

    def __hash__(self) -> int:
        return hash((self.genus, tuple(self.ledger().items())))

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "records": [
                {"depth": r.depth, "knot": _knot_label(r.knot)}
                for r in self.records
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> InfectionScript:
        if isinstance(data, str):
            data = json.loads(data)
        records = tuple(
            InfectionRecord(int(r["depth"]), _knot(r["knot"])) for r in data.get("records", [])
        )
        return cls(int(data.get("genus", 2)), records)


def _knot_label(knot: SeifertMatrix) -> str | list[list[int]]:
    # the name only when it reloads to the same matrix
    if knot.name:
        try:
            if _knot(knot.name) == knot:
                return knot.name
        except (KeyError, ValueError):
            pass
    return knot.to_json()


def _knot(obj: object) -> SeifertMatrix:
    if isinstance(obj, str) and " # " in obj:
        return connected_sum_of([load_knot(part) for part in obj.split(" # ")])
    return knot_from_json(obj)


def rho_n(script: InfectionScript, i: int) -> Fraction:
    """rho_i of the cylinder: sum of rho_0 over infections of depth <= i."""
    if i < 2:
        raise ValueError(f"rho_n is defined for n >= 2, got {i}")
    return sum((r.rho0() for r in script.records if r.depth <= i), Fraction(0))


def evaluate_combination(
    script: InfectionScript, indices: Sequence[int], coeffs: Sequence[Fraction | int]
) -> Fraction:
    return sum((Fraction(c) * rho_n(script, i) for i, c in zip(indices, coeffs)), Fraction(0))


def _check_combination(indices: Sequence[int], coeffs: Sequence[Fraction | int]) -> None:
    if not indices or len(indices) != len(coeffs):
        raise ValueError("indices and coeffs must be nonempty and of equal length")
    if list(indices) != sorted(set(indices)) or indices[0] < 2:
        raise ValueError("indices must be strictly increasing integers >= 2")
    if any(Fraction(c) == 0 for c in coeffs):
        raise ValueError("coefficients must be nonzero")


def independence_witness(
    indices: Sequence[int],
    coeffs: Sequence[Fraction | int],
    bound: Fraction | int,
    genus: int = 2,
) -> InfectionScript:
    """A cylinder on which sum coeffs_i * rho_{indices_i} exceeds ``bound``.

    One infection at depth max(indices) by c right-handed trefoils, c minimal.
    Every rho_j with j < max(indices) vanishes on it.
    """
    _check_combination(indices, coeffs)
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    trefoil = load_knot("trefoil_right")
    unit = abs(Fraction(coeffs[-1]) * rho0(trefoil))
    c = math.floor(bound / unit) + 1
    knot = connected_sum_of([trefoil] * c)
    return InfectionScript(genus, (InfectionRecord(indices[-1], knot),))


def _lattice_generator(values: Iterable[Fraction]) -> Fraction:
    """Positive generator of the subgroup of Q spanned by ``values``."""
    g = Fraction(0)
    for v in values:
        a, b = abs(g), abs(v)
        if b == 0:
            continue
        if a == 0:
            g = b
            continue
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        g = Fraction(math.gcd(int(a * den), int(b * den)), den)
    return g


def _bezout(values: Sequence[Fraction], g: Fraction) -> list[int]:
    """Integers x with sum x_i * values_i = g (g generates the span)."""
    acc, coeffs = 0, [0] * len(values)
    for k, v in enumerate(values):
        n = int(v / g)
        if n == 0:
            continue
        acc, s, t = _ext_gcd(acc, n)
        coeffs = [s * c for c in coeffs]
        coeffs[k] += t
    return coeffs


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    d, s, t = _ext_gcd(b, a % b)
    return d, t, s - (a // b) * t


def density_sample(
    target: Fraction | int,
    tolerance: Fraction | int,
    depth: int = 2,
    genus: int = 2,
    knots: Sequence[SeifertMatrix] | None = None,
) -> InfectionScript:
    """A script whose rho_depth lies within ``tolerance`` of ``target``.

    Uses integer combinations of the rho_0 values of ``knots`` (default: the
    built-in table) and their mirrors.  Raises InsufficientKnotBasisError if
    the nearest reachable value is still too far.
    """
    target, tolerance = Fraction(target), Fraction(tolerance)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if target == 0:
        return InfectionScript(genus)
    if knots is None:
        knots = [load_knot(name) for name in ("unknot", "trefoil_right", "trefoil_left", "figure8")]
    values = []
    for k in knots:
        v = rho0(k)
        if not isinstance(v, Fraction):
            raise ValueError(f"knot {k.name or k.entries} has irrational rho_0")
        values.append(v)
    g = _lattice_generator(values)
    if g == 0:
        raise InsufficientKnotBasisError("every available knot has rho_0 = 0")
    c = round(target / g)
    best = c * g
    if abs(best - target) > tolerance:
        raise InsufficientKnotBasisError(
            f"nearest reachable value {best} is {abs(best - target)} from {target}; "
            f"the knot table only realizes multiples of {g}"
        )
    step = g if c > 0 else -g
    direct = next((k for k, v in zip(knots, values) if v == step), None)
    if direct is not None:
        return InfectionScript(genus, (InfectionRecord(depth, direct),) * abs(c))
    mult = _bezout(values, g)
    records = []
    for k, x in zip(knots, mult):
        n = x * c
        if n:
            piece = k if n > 0 else k.mirror()
            records += [InfectionRecord(depth, piece)] * abs(n)
    return InfectionScript(genus, tuple(records))
