"""Words in the braid group B_n, the free group F_n and their semidirect product.

Braid letters are ``(i, e)`` meaning sigma_i**e; free letters are ``(j, e)``
meaning x_j**e.  Automorphisms act on the left: ``artin_act`` applies the
image of sigma_i**sign to a free word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInputError, ParseError

__all__ = [
    "BraidWord",
    "FreeWord",
    "MixedWord",
    "free_reduce",
    "artin_act",
    "wada_act",
    "act_by_braid",
    "pure_braid_generator",
    "tilde_pure_braid_generator",
    "invert",
    "permutation_of",
    "parse_mixed",
    "pure_letters",
]


def _check_letters(letters: Iterable, upper: int, what: str) -> tuple[tuple[int, int], ...]:
    out = []
    for item in letters:
        try:
            idx, exp = item
        except (TypeError, ValueError):
            raise InvalidInputError(f"{what} letter must be an (index, exponent) pair, got {item!r}") from None
        if not isinstance(idx, int) or not isinstance(exp, int) or isinstance(idx, bool):
            raise InvalidInputError(f"{what} letter entries must be integers, got {item!r}")
        if not 1 <= idx <= upper:
            raise InvalidInputError(f"{what} index {idx} outside 1..{upper}")
        out.append((idx, exp))
    return tuple(out)


def free_reduce(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Merge adjacent letters with the same index and drop zero exponents."""
    stack: list[tuple[int, int]] = []
    for idx, exp in letters:
        if exp == 0:
            continue
        if stack and stack[-1][0] == idx:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged:
                stack.append((idx, merged))
        else:
            stack.append((idx, exp))
    return tuple(stack)


@dataclass(frozen=True)
class BraidWord:
    """A word in sigma_1..sigma_{n-1}, kept as written (not reduced)."""

    n: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidInputError(f"braid words need n >= 2 strands, got {self.n!r}")
        letters = _check_letters(self.letters, self.n - 1, "braid")
        if any(e == 0 for _, e in letters):
            raise InvalidInputError("braid letters must have nonzero exponents")
        object.__setattr__(self, "letters", letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if not isinstance(other, BraidWord) or other.n != self.n:
            return NotImplemented
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple((i, -e) for i, e in reversed(self.letters)))

    def __str__(self) -> str:
        return _format(("s", i, e) for i, e in self.letters)


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in x_1..x_rank."""

    rank: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise InvalidInputError(f"free group rank must be >= 1, got {self.rank!r}")
        object.__setattr__(self, "letters", free_reduce(_check_letters(self.letters, self.rank, "free")))

    @classmethod
    def generator(cls, rank: int, j: int, exp: int = 1) -> "FreeWord":
        return cls(rank, ((j, exp),))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if not isinstance(other, FreeWord) or other.rank != self.rank:
            return NotImplemented
        return FreeWord(self.rank, self.letters + other.letters)

    def __pow__(self, e: int) -> "FreeWord":
        base = self if e >= 0 else self.inverse()
        return FreeWord(self.rank, base.letters * abs(e))

    def inverse(self) -> "FreeWord":
        return FreeWord(self.rank, tuple((j, -e) for j, e in reversed(self.letters)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __str__(self) -> str:
        return _format(("x", j, e) for j, e in self.letters)


@dataclass(frozen=True)
class MixedWord:
    """A word in F_n x| B_n: tokens ``("x", j, e)`` and ``("s", i, e)``."""

    n: int
    tokens: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidInputError(f"mixed words need n >= 1, got {self.n!r}")
        out = []
        for tok in self.tokens:
            try:
                kind, idx, exp = tok
            except (TypeError, ValueError):
                raise InvalidInputError(f"bad mixed-word token {tok!r}") from None
            if kind not in ("x", "s"):
                raise InvalidInputError(f"token kind must be 'x' or 's', got {kind!r}")
            upper = self.n if kind == "x" else self.n - 1
            if not isinstance(idx, int) or not 1 <= idx <= upper:
                raise InvalidInputError(f"{kind} index {idx!r} outside 1..{upper}")
            if not isinstance(exp, int) or exp == 0:
                raise InvalidInputError(f"token exponent must be a nonzero integer, got {exp!r}")
            out.append((kind, idx, exp))
        object.__setattr__(self, "tokens", tuple(out))

    @classmethod
    def from_free(cls, w: FreeWord, n: int | None = None) -> "MixedWord":
        return cls(w.rank if n is None else n, tuple(("x", j, e) for j, e in w.letters))

    @classmethod
    def from_braid(cls, w: BraidWord) -> "MixedWord":
        return cls(w.n, tuple(("s", i, e) for i, e in w.letters))

    def __mul__(self, other: "MixedWord") -> "MixedWord":
        if not isinstance(other, MixedWord) or other.n != self.n:
            return NotImplemented
        return MixedWord(self.n, self.tokens + other.tokens)

    def inverse(self) -> "MixedWord":
        return MixedWord(self.n, tuple((k, i, -e) for k, i, e in reversed(self.tokens)))

    def __str__(self) -> str:
        return _format(self.tokens)


def _format(tokens) -> str:
    parts = []
    for kind, idx, exp in tokens:
        parts.append(f"{kind}{idx}" if exp == 1 else f"{kind}{idx}^{exp}")
    return " ".join(parts)


_TOKEN = re.compile(r"^([sx])(\d+)(?:\^(-?\d+))?$")


def parse_mixed(text: str, n: int) -> MixedWord:
    """Parse text such as ``"s1 s2^-1 x3"``; the empty string is the identity."""
    tokens = []
    for part in text.split():
        m = _TOKEN.match(part)
        if not m:
            raise ParseError(f"cannot parse word token {part!r}")
        exp = int(m.group(3)) if m.group(3) is not None else 1
        tokens.append((m.group(1), int(m.group(2)), exp))
    try:
        return MixedWord(n, tuple(tokens))
    except InvalidInputError as exc:
        raise ParseError(str(exc)) from None


def _generator_image(k: int, i: int, sign: int, j: int, rank: int) -> FreeWord:
    """Image of x_j under the Wada automorphism phi^k(sigma_i)**sign."""
    if j not in (i, i + 1):
        return FreeWord.generator(rank, j)
    if sign > 0:
        if j == i:
            return FreeWord.generator(rank, i + 1)
        return FreeWord(rank, ((i + 1, -k), (i, 1), (i + 1, k)))
    if j == i + 1:
        return FreeWord.generator(rank, i)
    return FreeWord(rank, ((i, k), (i + 1, 1), (i, -k)))


def wada_act(k: int, i: int, sign: int, w: FreeWord) -> FreeWord:
    """Apply phi^k(sigma_i)**sign to ``w`` (sign is +1 or -1)."""
    if not isinstance(k, int) or k == 0:
        raise InvalidInputError("Wada exponent k must be a nonzero integer")
    if sign not in (1, -1):
        raise InvalidInputError(f"sign must be +1 or -1, got {sign!r}")
    if not 1 <= i <= w.rank - 1:
        raise InvalidInputError(f"sigma index {i} outside 1..{w.rank - 1}")
    out: list[tuple[int, int]] = []
    for j, e in w.letters:
        out.extend((_generator_image(k, i, sign, j, w.rank) ** e).letters)
    return FreeWord(w.rank, tuple(out))


def artin_act(i: int, sign: int, w: FreeWord) -> FreeWord:
    """Apply the Artin automorphism of sigma_i**sign to ``w``."""
    return wada_act(1, i, sign, w)


def act_by_braid(beta: BraidWord, w: FreeWord, k: int = 1) -> FreeWord:
    """Left action of a whole braid word: the last letter acts first."""
    if beta.n != w.rank:
        raise InvalidInputError("braid and free word disagree on n")
    for i, e in reversed(beta.letters):
        sign = 1 if e > 0 else -1
        for _ in range(abs(e)):
            w = wada_act(k, i, sign, w)
    return w


def pure_braid_generator(i: int, j: int, n: int) -> BraidWord:
    """sigma_i..sigma_{j-2} sigma_{j-1}^2 (sigma_i..sigma_{j-2})^{-1}."""
    if not 1 <= i < j <= n:
        raise InvalidInputError(f"pure braid generator needs 1 <= i < j <= n, got ({i}, {j}, {n})")
    head = tuple((m, 1) for m in range(i, j - 1))
    tail = tuple((m, -1) for m in reversed(range(i, j - 1)))
    return BraidWord(n, head + ((j - 1, 2),) + tail)


def tilde_pure_braid_generator(i: int, j: int, n: int) -> BraidWord:
    """The same shape as :func:`pure_braid_generator` built from inverse letters."""
    if not 1 <= i < j <= n:
        raise InvalidInputError(f"pure braid generator needs 1 <= i < j <= n, got ({i}, {j}, {n})")
    head = tuple((m, -1) for m in range(i, j - 1))
    tail = tuple((m, 1) for m in reversed(range(i, j - 1)))
    return BraidWord(n, head + ((j - 1, -2),) + tail)


def invert(w):
    """Group inverse of a braid, free or mixed word."""
    if isinstance(w, (BraidWord, FreeWord, MixedWord)):
        return w.inverse()
    raise InvalidInputError(f"cannot invert {type(w).__name__}")


def permutation_of(w: BraidWord) -> tuple[int, ...]:
    """Underlying permutation as a tuple ``p`` with strand ``k`` ending at ``p[k-1]``."""
    perm = list(range(1, w.n + 1))
    for i, e in w.letters:
        if e % 2:
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
    # perm now lists which start strand sits at each position; invert it
    out = [0] * w.n
    for pos, strand in enumerate(perm, start=1):
        out[strand - 1] = pos
    return tuple(out)


def pure_letters(n: int) -> Sequence[tuple[int, int]]:
    """All index pairs (i, j) with 0 <= i < j <= n, in lexicographic order."""
    return [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
