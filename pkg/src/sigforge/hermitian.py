"""Hermitian matrices over cyclotomic fields: inertia, determinant, rank.

Inertia is computed by exact congruence diagonalization on a sparse row
representation, so banded inputs stay cheap.  The caller's index order is the
pivot order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .cyclo import (
    CyclotomicNumber,
    Scalar,
    as_cyclotomic,
    field_inverse,
    parse,
    sign_of_real,
)

Entry = CyclotomicNumber | Scalar


class Inertia(NamedTuple):
    n_plus: int
    n_minus: int
    n_zero: int

    @property
    def signature(self) -> int:
        return self.n_plus - self.n_minus

    def __add__(self, other: object) -> Inertia:  # type: ignore[override]
        if not isinstance(other, Inertia):
            return NotImplemented
        return Inertia(*(a + b for a, b in zip(self, other)))


def _square(rows: Sequence[Sequence[Entry]]) -> tuple[tuple[CyclotomicNumber, ...], ...]:
    out = tuple(tuple(as_cyclotomic(v) for v in row) for row in rows)
    for row in out:
        if len(row) != len(out):
            raise ValueError("matrix must be square")
    return out


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    entries: tuple[tuple[CyclotomicNumber, ...], ...]

    def __post_init__(self) -> None:
        rows = _square(self.entries)
        object.__setattr__(self, "entries", rows)
        for i, row in enumerate(rows):
            for j in range(i, len(rows)):
                if row[j] != rows[j][i].conj():
                    raise ValueError(f"not Hermitian at ({i}, {j})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Entry]]) -> HermitianMatrix:
        return cls(rows)  # type: ignore[arg-type]

    @classmethod
    def zero(cls, dim: int) -> HermitianMatrix:
        return cls(tuple((0,) * dim for _ in range(dim)))  # type: ignore[arg-type]

    @classmethod
    def identity(cls, dim: int) -> HermitianMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))  # type: ignore[arg-type]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> CyclotomicNumber:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __neg__(self) -> HermitianMatrix:
        return _trusted(tuple(tuple(-v for v in row) for row in self.entries))

    def permuted(self, order: Sequence[int]) -> HermitianMatrix:
        """P^T H P for the permutation sending position k to index order[k]."""
        if sorted(order) != list(range(self.dim)):
            raise ValueError("order must be a permutation")
        e = self.entries
        return _trusted(tuple(tuple(e[i][j] for j in order) for i in order))

    def congruent(self, p: Sequence[Sequence[Entry]]) -> HermitianMatrix:
        """P* H P."""
        pm = _square(p)
        n = self.dim
        if len(pm) != n:
            raise ValueError("dimension mismatch")
        hp = _matmul(self.entries, pm)
        pstar = tuple(tuple(pm[j][i].conj() for j in range(n)) for i in range(n))
        return HermitianMatrix(_matmul(pstar, hp))

    def to_json(self) -> str:
        return json.dumps([[v.serialize() for v in row] for row in self.entries])

    @classmethod
    def from_json(cls, text: str) -> HermitianMatrix:
        data = json.loads(text)
        return cls(tuple(tuple(_parse_entry(v) for v in row) for row in data))

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


def _trusted(entries: tuple[tuple[CyclotomicNumber, ...], ...]) -> HermitianMatrix:
    # skips the Hermitian check; only for entries derived from a checked matrix
    obj = object.__new__(HermitianMatrix)
    object.__setattr__(obj, "entries", entries)
    return obj


def _parse_entry(v: object) -> CyclotomicNumber:
    if isinstance(v, bool):
        raise ValueError("boolean matrix entry")
    if isinstance(v, int):
        return CyclotomicNumber.rational(v)
    if isinstance(v, str):
        return parse(v)
    raise ValueError(f"unsupported matrix entry {v!r}")


def _matmul(a, b):
    n, k = len(a), len(b)
    cols = len(b[0]) if b else 0
    zero = CyclotomicNumber.rational(0)
    out = []
    for i in range(n):
        row = []
        for j in range(cols):
            acc = zero
            for t in range(k):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def block_sum(h1: HermitianMatrix, h2: HermitianMatrix) -> HermitianMatrix:
    n1, n2 = h1.dim, h2.dim
    rows = [tuple(row) + (0,) * n2 for row in h1.entries]
    rows += [(0,) * n1 + tuple(row) for row in h2.entries]
    return HermitianMatrix(tuple(rows))  # type: ignore[arg-type]


def _inverse(a: CyclotomicNumber) -> CyclotomicNumber:
    return field_inverse(a)


def signature(h: HermitianMatrix) -> Inertia:
    """Exact inertia (n_plus, n_minus, n_zero) by congruence diagonalization.

    Pivot on the first nonzero diagonal entry.  With a zero diagonal, a
    nonzero entry h_ij is handled by adding row/column j to i when that makes
    the diagonal nonzero, and otherwise as a hyperbolic pair.
    """
    rows: dict[int, dict[int, CyclotomicNumber]] = {
        i: {j: v for j, v in enumerate(row) if not v.is_zero()}
        for i, row in enumerate(h.entries)
    }
    active = list(range(h.dim))
    plus = minus = 0

    def drop(p: int) -> None:
        for j in rows.pop(p):
            if j != p:
                rows[j].pop(p, None)
        active.remove(p)

    def put(i: int, j: int, v: CyclotomicNumber) -> None:
        if v.is_zero():
            rows[i].pop(j, None)
        else:
            rows[i][j] = v

    while True:
        p = next((i for i in active if i in rows[i]), None)
        if p is not None:
            d = rows[p][p]
            s = sign_of_real(d)
            if s > 0:
                plus += 1
            else:
                minus += 1
            inv = _inverse(d)
            nbrs = [(j, v) for j, v in rows[p].items() if j != p]
            for i, _ in nbrs:
                f = rows[i][p] * inv
                ri = rows[i]
                for j, v in nbrs:
                    put(i, j, ri.get(j, _ZERO) - f * v)
            drop(p)
            continue

        i = next((k for k in active if rows[k]), None)
        if i is None:
            break
        j = next(k for k in active if k in rows[i])
        hij = rows[i][j]
        diag = hij + hij.conj()
        if not diag.is_zero():
            # e_i -> e_i + e_j; all diagonals are zero here
            new_row = dict(rows[i])
            for k, v in rows[j].items():
                new_row[k] = new_row.get(k, _ZERO) + v
            new_row.pop(i, None)
            for k in list(rows[i]):
                rows[k].pop(i, None)
            rows[i] = {}
            for k, v in new_row.items():
                if not v.is_zero():
                    rows[i][k] = v
                    rows[k][i] = v.conj()
            rows[i][i] = diag
            continue

        # hyperbolic pair [[0, h], [conj h, 0]] has inertia (1, 1, 0)
        plus += 1
        minus += 1
        inv_h = _inverse(hij)
        inv_hbar = inv_h.conj()
        others = set(rows[i]) | set(rows[j])
        others.discard(i)
        others.discard(j)
        col_i = {a: rows[a].get(i, _ZERO) for a in others}
        col_j = {a: rows[a].get(j, _ZERO) for a in others}
        for a in others:
            for b in others:
                delta = col_i[a] * inv_hbar * rows[j].get(b, _ZERO) + col_j[a] * inv_h * rows[i].get(b, _ZERO)
                if not delta.is_zero():
                    put(a, b, rows[a].get(b, _ZERO) - delta)
        drop(i)
        drop(j)

    return Inertia(plus, minus, len(active))


_ZERO = CyclotomicNumber.rational(0)


def determinant(m: Sequence[Sequence[Entry]] | HermitianMatrix) -> CyclotomicNumber:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    rows = [list(r) for r in _square(m.entries if isinstance(m, HermitianMatrix) else m)]
    n = len(rows)
    if n == 0:
        return CyclotomicNumber.rational(1)
    sign = 1
    prev = CyclotomicNumber.rational(1)
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if not rows[r][k].is_zero()), None)
        if piv is None:
            return CyclotomicNumber.rational(0)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        inv_prev = _inverse(prev)
        pk = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (pk * rows[i][j] - rows[i][k] * rows[k][j]) * inv_prev
            rows[i][k] = _ZERO
        prev = pk
    return rows[n - 1][n - 1] * sign


def rank(m: Sequence[Sequence[Entry]] | HermitianMatrix) -> int:
    """Rank by Gaussian elimination over the cyclotomic field."""
    rows = [list(r) for r in (m.entries if isinstance(m, HermitianMatrix) else _rect(m))]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _inverse(rows[r][c])
        for i in range(r + 1, len(rows)):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def _rect(m: Sequence[Sequence[Entry]]) -> list[list[CyclotomicNumber]]:
    return [[as_cyclotomic(v) for v in row] for row in m]
