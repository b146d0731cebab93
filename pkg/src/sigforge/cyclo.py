"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored as integer numerators over a common positive denominator,
in the power basis ``1, zeta, ..., zeta^(phi(m)-1)`` reduced modulo the m-th
cyclotomic polynomial.  Rational elements are normalized to conductor 1 so
that mixing them with anything else is cheap.
"""

from __future__ import annotations

import math
import os
import re
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from mpmath import iv

Scalar = Union[int, Fraction]

DEFAULT_PRECISION_BITS = 64

# mpmath's interval context keeps its precision globally
_IV_LOCK = threading.Lock()


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError(f"conductor must be positive, got {m}")
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds zeta_m^k in the power basis, for 0 <= k < m."""
    phi = euler_phi(m)
    cyc = cyclotomic_polynomial(m)
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * a for c, a in zip(cur, cyc)]
    return tuple(rows)


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums, den = [-c for c in nums], -den
    g = den
    for c in nums:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    if not any(nums):
        return tuple(0 for _ in nums), 1
    if g != 1:
        nums = [c // g for c in nums]
        den //= g
    return tuple(nums), den


class CyclotomicNumber:
    """An element of Q(zeta_m) with exact rational coefficients.

    ``CyclotomicNumber(m, coeffs)`` takes ``phi(m)`` rationals, the
    coordinates in the power basis.  Instances are immutable.
    """

    __slots__ = ("_m", "_nums", "_den")

    def __init__(self, conductor: int, coeffs: Sequence[Scalar]):
        phi = euler_phi(conductor)
        if len(coeffs) != phi:
            raise ValueError(
                f"conductor {conductor} needs {phi} coefficients, got {len(coeffs)}"
            )
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fracs]
        self._set(conductor, *_normalize(nums, den))

    def _set(self, m: int, nums: tuple[int, ...], den: int) -> None:
        if m > 1 and not any(nums[1:]):
            m, nums = 1, nums[:1]
        self._m = m
        self._nums = nums
        self._den = den

    @classmethod
    def _raw(cls, m: int, nums: Sequence[int], den: int = 1) -> CyclotomicNumber:
        obj = cls.__new__(cls)
        obj._set(m, *_normalize(list(nums), den))
        return obj

    @classmethod
    def rational(cls, q: Scalar) -> CyclotomicNumber:
        q = Fraction(q)
        return cls._raw(1, [q.numerator], q.denominator)

    # -- accessors -------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self._m

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._nums)

    def is_zero(self) -> bool:
        return not self._nums[0] and self._m == 1

    def is_rational(self) -> bool:
        return self._m == 1

    def rational_value(self) -> Fraction:
        if self._m != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._nums[0], self._den)

    # -- conductor handling ---------------------------------------------

    def _lifted_nums(self, target: int) -> list[int]:
        if target == self._m:
            return list(self._nums)
        if target % self._m:
            raise ValueError(f"cannot lift conductor {self._m} to {target}")
        step = target // self._m
        table = _power_table(target)
        out = [0] * euler_phi(target)
        for j, c in enumerate(self._nums):
            if c:
                row = table[(j * step) % target]
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return out

    def lift(self, conductor: int) -> tuple[Fraction, ...]:
        """Coordinates of this element in the power basis of Q(zeta_conductor)."""
        return tuple(Fraction(c, self._den) for c in self._lifted_nums(conductor))

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other: object) -> CyclotomicNumber | None:
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(other)
        return None

    def __add__(self, other: object) -> CyclotomicNumber:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        m = _lcm(self._m, b._m)
        x, y = self._lifted_nums(m), b._lifted_nums(m)
        nums = [p * b._den + q * self._den for p, q in zip(x, y)]
        return CyclotomicNumber._raw(m, nums, self._den * b._den)

    __radd__ = __add__

    def __neg__(self) -> CyclotomicNumber:
        return CyclotomicNumber._raw(self._m, [-c for c in self._nums], self._den)

    def __sub__(self, other: object) -> CyclotomicNumber:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: object) -> CyclotomicNumber:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other: object) -> CyclotomicNumber:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        den = self._den * b._den
        if b._m == 1:
            return CyclotomicNumber._raw(
                self._m, [c * b._nums[0] for c in self._nums], den
            )
        if self._m == 1:
            return CyclotomicNumber._raw(
                b._m, [c * self._nums[0] for c in b._nums], den
            )
        m = _lcm(self._m, b._m)
        x, y = self._lifted_nums(m), b._lifted_nums(m)
        conv = [0] * (len(x) + len(y) - 1)
        for i, p in enumerate(x):
            if p:
                for j, q in enumerate(y):
                    if q:
                        conv[i + j] += p * q
        phi = len(x)
        out = conv[:phi]
        table = _power_table(m)
        for k in range(phi, len(conv)):
            c = conv[k]
            if c:
                for i, r in enumerate(table[k % m]):
                    if r:
                        out[i] += c * r
        return CyclotomicNumber._raw(m, out, den)

    __rmul__ = __mul__

    def conj(self) -> CyclotomicNumber:
        m = self._m
        if m <= 2:
            return self
        table = _power_table(m)
        out = [0] * len(self._nums)
        for j, c in enumerate(self._nums):
            if c:
                for i, r in enumerate(table[(-j) % m]):
                    if r:
                        out[i] += c * r
        return CyclotomicNumber._raw(m, out, self._den)

    def _as_root_of_unity(self) -> tuple[int, int] | None:
        """Return (sign, k) with self == sign * zeta_m^k, or None."""
        if self._den != 1:
            return None
        table = _power_table(self._m)
        for k, row in enumerate(table):
            if row == self._nums:
                return 1, k
            if all(a == -b for a, b in zip(row, self._nums)):
                return -1, k
        return None

    def __pow__(self, exponent: int) -> CyclotomicNumber:
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base = base._unit_inverse()
            exponent = -exponent
        result = CyclotomicNumber.rational(1)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def _unit_inverse(self) -> CyclotomicNumber:
        if self._m == 1:
            if not self._nums[0]:
                raise ZeroDivisionError("inverse of zero")
            return CyclotomicNumber._raw(1, [self._den], self._nums[0])
        root = self._as_root_of_unity()
        if root is None:
            raise ValueError(
                f"{self} is neither rational nor a root of unity; "
                "general inversion is not supported"
            )
        sign, k = root
        return sign * root_of_unity(self._m, -k)

    def __truediv__(self, other: object) -> CyclotomicNumber:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self * b._unit_inverse()

    def __rtruediv__(self, other: object) -> CyclotomicNumber:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b * self._unit_inverse()

    # -- comparison, hashing ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        m = _lcm(self._m, b._m)
        x, y = self._lifted_nums(m), b._lifted_nums(m)
        return all(p * b._den == q * self._den for p, q in zip(x, y))

    def __hash__(self) -> int:
        # normalized trace does not depend on the conductor used
        return hash(self.normalized_trace())

    def normalized_trace(self) -> Fraction:
        m = self._m
        total = Fraction(0)
        for j, c in enumerate(self._nums):
            if c:
                total += c * Fraction(_ramanujan_sum(m, j), euler_phi(m))
        return total / self._den

    def is_real(self) -> bool:
        return self == self.conj()

    # -- numerics ----------------------------------------------------------

    def to_complex(self) -> complex:
        m = self._m
        z = sum(
            c * complex(math.cos(2 * math.pi * j / m), math.sin(2 * math.pi * j / m))
            for j, c in enumerate(self._nums)
        )
        return z / self._den

    def sign_of_real(self) -> int:
        return sign_of_real(self)

    # -- text --------------------------------------------------------------

    def serialize(self) -> str:
        parts = ", ".join(_fmt_fraction(c) for c in self.coeffs)
        return f"cyclo({self._m}; {parts})"

    def __repr__(self) -> str:
        return self.serialize()

    def __str__(self) -> str:
        if self._m == 1:
            return _fmt_fraction(self.rational_value())
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if j == 0 else (f"z{self._m}" if j == 1 else f"z{self._m}^{j}")
            if j == 0:
                terms.append(_fmt_fraction(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{_fmt_fraction(c)}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def _ramanujan_sum(m: int, j: int) -> int:
    """Trace of zeta_m^j from Q(zeta_m) down to Q."""
    d = m // math.gcd(m, j)
    return _mobius(d) * euler_phi(m) // euler_phi(d)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def root_of_unity(m: int, power: int = 1) -> CyclotomicNumber:
    """zeta_m^power, with zeta_m = exp(2*pi*i/m)."""
    if m < 1:
        raise ValueError(f"conductor must be positive, got {m}")
    return CyclotomicNumber._raw(m, _power_table(m)[power % m])


def as_cyclotomic(x: CyclotomicNumber | Scalar) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        return x
    return CyclotomicNumber.rational(x)


def is_zero(a: CyclotomicNumber) -> bool:
    return a.is_zero()


def multiplicative_order(a: CyclotomicNumber) -> int:
    """Order of a root of unity; raises for anything else."""
    root = a._as_root_of_unity()
    if root is None:
        raise ValueError(f"{a} is not a root of unity")
    sign, k = root
    m = a.conductor
    order = m // math.gcd(m, k)
    if sign < 0:
        # -zeta_m^k = zeta_{2m}^{2k+m}
        m2, k2 = 2 * m, 2 * k + m
        order = m2 // math.gcd(m2, k2)
    return order


def _initial_precision() -> int:
    raw = os.environ.get("SIGFORGE_PRECISION_BITS")
    if raw is None:
        return DEFAULT_PRECISION_BITS
    bits = int(raw)
    if bits < 2:
        raise ValueError("SIGFORGE_PRECISION_BITS must be at least 2")
    return bits


def sign_of_real(a: CyclotomicNumber, precision: int | None = None) -> int:
    """Certified sign of a real cyclotomic number under zeta_m -> e^(2 pi i/m).

    The zero test is exact; a nonzero value is enclosed in intervals of
    doubling precision until the enclosure excludes zero.
    """
    if not a.is_real():
        raise ValueError(f"sign_of_real needs a real element, got {a}")
    if a.is_zero():
        return 0
    if a.conductor == 1:
        return 1 if a._nums[0] > 0 else -1
    m = a.conductor
    prec = precision or _initial_precision()
    terms = [(j, c) for j, c in enumerate(a._nums) if c]
    while True:
        with _IV_LOCK:
            saved = iv.prec
            iv.prec = prec
            try:
                total = iv.mpf(0)
                for j, c in terms:
                    total += iv.mpf(c) * iv.cos(2 * iv.pi * j / m)
                if total.a > 0:
                    return 1
                if total.b < 0:
                    return -1
            finally:
                iv.prec = saved
        prec *= 2


_SERIAL = re.compile(r"^\s*cyclo\(\s*(\d+)\s*;(.*)\)\s*$")
_ZETA = re.compile(r"^\s*zeta\(\s*(\d+)\s*\)\s*(?:\^\s*(-?\d+)\s*)?$")


def parse(text: str) -> CyclotomicNumber:
    """Inverse of :meth:`CyclotomicNumber.serialize`.

    Also accepts ``zeta(m)^p`` and plain rationals like ``-3/4``.
    """
    match = _SERIAL.match(text)
    if match:
        m = int(match.group(1))
        body = match.group(2).strip()
        coeffs = [Fraction(tok.strip()) for tok in body.split(",")] if body else []
        return CyclotomicNumber(m, coeffs)
    match = _ZETA.match(text)
    if match:
        power = int(match.group(2)) if match.group(2) is not None else 1
        return root_of_unity(int(match.group(1)), power)
    try:
        return CyclotomicNumber.rational(Fraction(text.strip()))
    except ValueError:
        raise ValueError(f"cannot parse cyclotomic number from {text!r}") from None


def galois_conjugate(a: CyclotomicNumber, k: int) -> CyclotomicNumber:
    """Image of ``a`` under zeta_m -> zeta_m^k, gcd(k, m) = 1."""
    m = a.conductor
    if math.gcd(k, m) != 1:
        raise ValueError(f"{k} is not a unit modulo {m}")
    table = _power_table(m)
    out = [0] * len(a._nums)
    for j, c in enumerate(a._nums):
        if c:
            for i, r in enumerate(table[(j * k) % m]):
                if r:
                    out[i] += c * r
    return CyclotomicNumber._raw(m, out, a._den)


def field_inverse(a: CyclotomicNumber) -> CyclotomicNumber:
    """Multiplicative inverse in Q(zeta_m) for any nonzero element.

    Used internally by elimination routines: the product of the nontrivial
    Galois conjugates of ``a`` divided by its norm.
    """
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero")
    if a.conductor == 1:
        return a._unit_inverse()
    m = a.conductor
    cofactor = CyclotomicNumber.rational(1)
    for k in range(2, m):
        if math.gcd(k, m) == 1:
            cofactor = cofactor * galois_conjugate(a, k)
    norm = (a * cofactor).rational_value()
    return cofactor * (1 / norm)


def lcm_conductor(values: Iterable[CyclotomicNumber]) -> int:
    m = 1
    for v in values:
        m = _lcm(m, v.conductor)
    return m
