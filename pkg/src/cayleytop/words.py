"""Reduced words in the free group F_k and enumeration of its metric balls.

A letter is a nonzero integer ``v`` with ``|v| <= k``; ``+i`` stands for the
generator ``a_i`` and ``-i`` for its inverse.  Words are always stored fully
reduced, so the word length is just ``len(word)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ArityError, CapExceeded, ParseError

#: Default cap on the number of words a ball enumeration may produce.
DEFAULT_BALL_CAP = 2_000_000


def letter_key(v: int) -> tuple[int, int]:
    """Sort key realising the letter order +1 < -1 < +2 < -2 < ..."""
    return (abs(v), 0 if v > 0 else 1)


def letters_in_order(arity: int) -> list[int]:
    out = []
    for i in range(1, arity + 1):
        out.extend((i, -i))
    return out


def _check_letters(arity: int, letters: Iterable[int]) -> None:
    if arity < 1:
        raise ArityError(f"arity must be positive, got {arity}")
    for v in letters:
        if v == 0 or abs(v) > arity:
            raise ArityError(f"letter {v} out of range for arity {arity}")


@dataclass(frozen=True)
class Word:
    """A reduced word of F_k.  Build through :func:`reduce` or :func:`parse_word`."""

    arity: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        _check_letters(self.arity, self.letters)
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError(f"word {self.letters} is not reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def sort_key(self):
        """Canonical ball order: by length, then lexicographically by letter_key."""
        return (len(self.letters), tuple(letter_key(v) for v in self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def length(self) -> int:
        return len(self.letters)


def _fast_word(arity: int, letters: tuple[int, ...]) -> Word:
    # bypasses validation for words produced internally from valid parts
    w = object.__new__(Word)
    object.__setattr__(w, "arity", arity)
    object.__setattr__(w, "letters", letters)
    return w


def identity(arity: int) -> Word:
    _check_letters(arity, ())
    return _fast_word(arity, ())


def reduce(arity: int, raw: Sequence[int]) -> Word:
    """Freely reduce a letter sequence.

    >>> reduce(2, [1, -1, 2]).letters
    (2,)
    """
    raw = list(raw)
    _check_letters(arity, raw)
    stack: list[int] = []
    for v in raw:
        if stack and stack[-1] == -v:
            stack.pop()
        else:
            stack.append(v)
    return _fast_word(arity, tuple(stack))


def concat(a: Word, b: Word) -> Word:
    if a.arity != b.arity:
        raise ArityError(f"cannot multiply words of arity {a.arity} and {b.arity}")
    x, y = a.letters, b.letters
    i = 0
    n = min(len(x), len(y))
    while i < n and x[len(x) - 1 - i] == -y[i]:
        i += 1
    return _fast_word(a.arity, x[: len(x) - i] + y[i:])


def invert(w: Word) -> Word:
    return _fast_word(w.arity, tuple(-v for v in reversed(w.letters)))


def ball_size(arity: int, radius: int) -> int:
    """Number of reduced words of length <= radius: 1 + sum 2k(2k-1)^(r-1)."""
    if radius < 0:
        return 0
    total = 1
    sphere = 2 * arity
    for _ in range(radius):
        total += sphere
        sphere *= 2 * arity - 1
    return total


def iter_ball(arity: int, radius: int, cap: int = DEFAULT_BALL_CAP) -> Iterator[Word]:
    """Yield nbhd_R(1) of F_k in canonical order (length, then letter order)."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    _check_letters(arity, ())
    size = ball_size(arity, radius)
    if size > cap:
        raise CapExceeded(f"ball of radius {radius} in F_{arity} has {size} words > cap {cap}")
    order = letters_in_order(arity)
    sphere: list[tuple[int, ...]] = [()]
    yield _fast_word(arity, ())
    for _ in range(radius):
        nxt = []
        for w in sphere:
            last = w[-1] if w else 0
            for v in order:
                if v != -last:
                    nxt.append(w + (v,))
        for w in nxt:
            yield _fast_word(arity, w)
        sphere = nxt


def enumerate_ball(arity: int, radius: int, cap: int = DEFAULT_BALL_CAP) -> list[Word]:
    """All reduced words of length <= ``radius`` in canonical order."""
    return list(iter_ball(arity, radius, cap))


def format_word(w: Word) -> str:
    """Text form: ``e`` for the empty word, otherwise e.g. ``s1.S2.s1``."""
    if not w.letters:
        return "e"
    return ".".join(f"s{v}" if v > 0 else f"S{-v}" for v in w.letters)


def parse_word(text: str, arity: int) -> Word:
    """Inverse of :func:`format_word`; the result is reduced."""
    text = text.strip()
    if text == "e" or text == "":
        return identity(arity)
    letters = []
    pos = 0
    for tok in text.split("."):
        if len(tok) < 2 or tok[0] not in "sS" or not tok[1:].isdigit():
            raise ParseError(f"bad letter {tok!r}", text, pos)
        v = int(tok[1:])
        letters.append(v if tok[0] == "s" else -v)
        pos += len(tok) + 1
    return reduce(arity, letters)
