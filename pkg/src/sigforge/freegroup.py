"""Free group words, the integral group ring, and Fox derivatives.

Words are tuples of ``(generator, exponent)`` letters with exponent +1 or -1.
The genus-2 generators used by the Dehn-twist family are ``x, y, z, w``
(indices 0..3).
"""

from __future__ import annotations

import re
from math import gcd
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .cyclo import CyclotomicNumber, is_zero, root_of_unity

Letter = tuple[int, int]

GENUS2_NAMES = ("x", "y", "z", "w")
X, Y, Z, W = range(4)


def _reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for g, e in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((g, e))
    return tuple(stack)


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in the free group of the given rank."""

    letters: tuple[Letter, ...] = ()
    rank: int = 4

    def __post_init__(self) -> None:
        for g, e in self.letters:
            if not 0 <= g < self.rank:
                raise ValueError(f"generator {g} out of range for rank {self.rank}")
            if e not in (1, -1):
                raise ValueError(f"letter exponents must be +-1, got {e}")
        object.__setattr__(self, "letters", _reduce_letters(self.letters))

    @classmethod
    def identity(cls, rank: int = 4) -> FreeWord:
        return cls((), rank)

    @classmethod
    def generator(cls, g: int, power: int = 1, rank: int = 4) -> FreeWord:
        e = 1 if power >= 0 else -1
        return cls(((g, e),) * abs(power), rank)

    def __mul__(self, other: FreeWord) -> FreeWord:
        if not isinstance(other, FreeWord):
            return NotImplemented
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        return FreeWord(self.letters + other.letters, self.rank)

    def inverse(self) -> FreeWord:
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)), self.rank)

    def __pow__(self, n: int) -> FreeWord:
        base = self if n >= 0 else self.inverse()
        out = FreeWord.identity(self.rank)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def exponent_sum(self, g: int | None = None) -> int:
        return sum(e for h, e in self.letters if g is None or h == g)

    def to_str(self, names: tuple[str, ...] = GENUS2_NAMES) -> str:
        if not self.letters:
            return "1"
        out = []
        for g, e in self.letters:
            name = names[g] if g < len(names) else f"g{g}"
            out.append(name if e == 1 else f"{name}^-1")
        return " ".join(out)

    def __str__(self) -> str:
        return self.to_str()


def reduce(word: FreeWord) -> FreeWord:
    """Freely reduced form (words are always stored reduced)."""
    return FreeWord(word.letters, word.rank)


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    """[u, v] = u v u^-1 v^-1."""
    return u * v * u.inverse() * v.inverse()


def gen(g: int, power: int = 1) -> FreeWord:
    return FreeWord.generator(g, power, 4)


def build_alpha_beta(m: int, n: int) -> tuple[FreeWord, FreeWord]:
    """Based words for the bounding curves alpha and beta(m, n) in x, y, z, w.

    alpha = z^-1 [z, w] z and beta = [y, x^-1] [(y x^m)^-1, z^n w^-1].
    """
    if m < 1 or n < 0:
        raise ValueError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    x, y, z, w = gen(X), gen(Y), gen(Z), gen(W)
    alpha = z.inverse() * commutator(z, w) * z
    beta = commutator(y, x.inverse()) * commutator(
        (y * x**m).inverse(), z**n * w.inverse()
    )
    return alpha, beta


@dataclass(frozen=True)
class GroupRingElement:
    """Finite integer combination of free words, zero coefficients dropped."""

    terms: Mapping[FreeWord, int] = field(default_factory=dict)
    rank: int = 4

    def __post_init__(self) -> None:
        clean: dict[FreeWord, int] = {}
        for word, c in self.terms.items():
            if word.rank != self.rank:
                raise ValueError("rank mismatch")
            word = reduce(word)
            clean[word] = clean.get(word, 0) + c
        object.__setattr__(
            self, "terms", {w: c for w, c in clean.items() if c != 0}
        )

    @classmethod
    def zero(cls, rank: int = 4) -> GroupRingElement:
        return cls({}, rank)

    @classmethod
    def one(cls, rank: int = 4) -> GroupRingElement:
        return cls({FreeWord.identity(rank): 1}, rank)

    @classmethod
    def of(cls, word: FreeWord, coeff: int = 1) -> GroupRingElement:
        return cls({word: coeff}, word.rank)

    @staticmethod
    def _coerce(other: object, rank: int) -> GroupRingElement | None:
        if isinstance(other, GroupRingElement):
            return other
        if isinstance(other, FreeWord):
            return GroupRingElement.of(other)
        if isinstance(other, int):
            return GroupRingElement({FreeWord.identity(rank): other}, rank)
        return None

    def __add__(self, other: object) -> GroupRingElement:
        b = self._coerce(other, self.rank)
        if b is None:
            return NotImplemented
        out = dict(self.terms)
        for word, c in b.terms.items():
            out[word] = out.get(word, 0) + c
        return GroupRingElement(out, self.rank)

    __radd__ = __add__

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement({w: -c for w, c in self.terms.items()}, self.rank)

    def __sub__(self, other: object) -> GroupRingElement:
        b = self._coerce(other, self.rank)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: object) -> GroupRingElement:
        b = self._coerce(other, self.rank)
        if b is None:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other: object) -> GroupRingElement:
        b = self._coerce(other, self.rank)
        if b is None:
            return NotImplemented
        out: dict[FreeWord, int] = {}
        for u, c in self.terms.items():
            for v, d in b.terms.items():
                uv = u * v
                out[uv] = out.get(uv, 0) + c * d
        return GroupRingElement(out, self.rank)

    def __rmul__(self, other: object) -> GroupRingElement:
        b = self._coerce(other, self.rank)
        if b is None:
            return NotImplemented
        return b * self

    def __eq__(self, other: object) -> bool:
        b = self._coerce(other, self.rank)
        if b is None:
            return NotImplemented
        return self.terms == b.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def to_str(self, names: tuple[str, ...] = GENUS2_NAMES) -> str:
        if not self.terms:
            return "0"
        parts = []
        for word, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0].letters)):
            w = word.to_str(names)
            if w == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(w)
            elif c == -1:
                parts.append(f"-{w}")
            else:
                parts.append(f"{c}*{w}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_str()


def fox_derivative(word: FreeWord, g: int) -> GroupRingElement:
    """Left Fox derivative d(word)/d(x_g).

    Uses d(uv) = du + u dv letter by letter: a letter x_g contributes the
    current prefix, a letter x_g^-1 contributes -(prefix x_g^-1).
    """
    if not 0 <= g < word.rank:
        raise ValueError(f"generator {g} out of range for rank {word.rank}")
    out: dict[FreeWord, int] = {}
    prefix: list[Letter] = []
    for h, e in word.letters:
        if h == g:
            if e == 1:
                key, c = FreeWord(tuple(prefix), word.rank), 1
            else:
                key, c = FreeWord(tuple(prefix) + ((h, -1),), word.rank), -1
            out[key] = out.get(key, 0) + c
        prefix.append((h, e))
    return GroupRingElement(out, word.rank)


def evaluate_diagonal(e: GroupRingElement, omega: CyclotomicNumber) -> CyclotomicNumber:
    """Image under the map sending every generator to omega."""
    total = CyclotomicNumber.rational(0)
    for word, c in e.terms.items():
        total = total + c * omega ** word.exponent_sum()
    return total


def _check_omega(omega: CyclotomicNumber) -> None:
    if omega == 1:
        raise ValueError("omega must differ from 1")


def abelianized_vector(word: FreeWord, omega: CyclotomicNumber) -> tuple[CyclotomicNumber, ...]:
    """Coefficients of ``word`` on the lifted generators, twisted by omega."""
    _check_omega(omega)
    return tuple(evaluate_diagonal(fox_derivative(word, g), omega) for g in range(word.rank))


def independence_check(m: int, n: int, omega: CyclotomicNumber) -> bool:
    """True iff the twisted vectors of alpha and beta(m, n) are independent."""
    _check_omega(omega)
    alpha, beta = build_alpha_beta(m, n)
    a = abelianized_vector(alpha, omega)
    b = abelianized_vector(beta, omega)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if not is_zero(a[i] * b[j] - a[j] * b[i]):
                return True
    return False


# -- word literal parser ----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|([A-Za-z]\w*)(?:\^(-?\d+))?)")


def parse_word(text: str, names: tuple[str, ...] = GENUS2_NAMES) -> FreeWord:
    """Parse e.g. ``"z^-1 [z,w] z"`` or ``"[y, x^-1] y x^3"``.

    Brackets denote commutators and may nest; ``]^k`` is not supported.
    """
    index = {name: i for i, name in enumerate(names)}
    rank = len(names)
    pos = 0

    def parse_seq(stop: set[str]) -> FreeWord:
        nonlocal pos
        out = FreeWord.identity(rank)
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text) or text[pos] in stop:
                return out
            match = _TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise ValueError(f"cannot parse word at {text[pos:]!r}")
            if match.group(1):
                pos = match.end()
                u = parse_seq({","})
                if pos >= len(text) or text[pos] != ",":
                    raise ValueError("commutator needs a comma")
                pos += 1
                v = parse_seq({"]"})
                if pos >= len(text) or text[pos] != "]":
                    raise ValueError("unclosed commutator")
                pos += 1
                out = out * commutator(u, v)
            elif match.group(4):
                name = match.group(4)
                if name not in index:
                    raise ValueError(f"unknown generator {name!r}")
                power = int(match.group(5)) if match.group(5) else 1
                pos = match.end()
                out = out * FreeWord.generator(index[name], power, rank)
            else:
                raise ValueError(f"unexpected {match.group(0)!r}")

    word = parse_seq(set())
    if pos != len(text):
        raise ValueError(f"trailing input {text[pos:]!r}")
    return word


def primitive_roots(conductor: int) -> list[CyclotomicNumber]:
    """All roots of unity of exact order ``conductor``."""
    return [root_of_unity(conductor, k) for k in range(conductor) if gcd(k, conductor) == 1]
