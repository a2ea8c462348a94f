"""Reduced words in the free group F_n and the statistics states are built from.

A word is stored as a tuple of signed generator indices: ``+i`` is ``u_i`` and
``-i`` is ``u_i^{-1}``.  The rank ``n`` travels with every word, and words of
different rank refuse to interact.

Text syntax: whitespace-separated signed integers, ``"e"`` for the identity,
e.g. ``"-1 -1 2 2 2 -1"`` is ``u1^-2 u2^3 u1^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from . import kernels
from .errors import InvalidGenerator, RankMismatch

MAX_RANK = 64


class Letter(NamedTuple):
    gen: int
    sign: int

    @property
    def code(self) -> int:
        return self.gen * self.sign


LetterLike = Union[Letter, tuple, int]


def _as_code(x: LetterLike) -> int:
    if isinstance(x, (tuple, Letter)):
        gen, sign = x
        if sign not in (1, -1):
            raise InvalidGenerator(f"sign must be +1 or -1, got {sign}")
        return int(gen) * int(sign)
    return int(x)


@dataclass(frozen=True)
class ReducedWord:
    n: int
    code: tuple = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 2 <= self.n <= MAX_RANK:
            raise InvalidGenerator(f"rank must be in 2..{MAX_RANK}, got {self.n}")
        prev = 0
        for x in self.code:
            if x == 0 or abs(x) > self.n:
                raise InvalidGenerator(f"generator index {x} outside 1..{self.n}")
            if x == -prev:
                raise ValueError(f"letter sequence {self.code} is not freely reduced")
            prev = x
        object.__setattr__(self, "_hash", hash((self.n, self.code)))

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.code)

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return multiply(self, other)

    def __invert__(self) -> "ReducedWord":
        return inverse(self)

    def __str__(self):
        return format_word(self)

    @property
    def letters(self) -> tuple:
        return tuple(Letter(abs(x), 1 if x > 0 else -1) for x in self.code)

    @property
    def is_identity(self) -> bool:
        return not self.code

    @property
    def first_sign(self) -> int:
        """Sign of the first letter, 0 for the identity."""
        return 0 if not self.code else (1 if self.code[0] > 0 else -1)

    @property
    def last_sign(self) -> int:
        return 0 if not self.code else (1 if self.code[-1] > 0 else -1)


@dataclass(frozen=True)
class WordStats:
    length: int
    gamma: int
    u1_length: int
    tau: int


def identity(n: int) -> ReducedWord:
    return ReducedWord(n, ())


def generator(n: int, i: int, power: int = 1) -> ReducedWord:
    """``u_i ** power`` as a reduced word."""
    if not 1 <= i <= n:
        raise InvalidGenerator(f"generator index {i} outside 1..{n}")
    sign = 1 if power >= 0 else -1
    if not 2 <= n <= MAX_RANK:
        raise InvalidGenerator(f"rank must be in 2..{MAX_RANK}, got {n}")
    return _trusted(n, (sign * i,) * abs(power))


def reduce(letters: Iterable[LetterLike], n: int) -> ReducedWord:
    """Freely reduce a raw letter sequence (stack-based cancellation)."""
    stack: list = []
    for raw in letters:
        x = _as_code(raw)
        if x == 0 or abs(x) > n:
            raise InvalidGenerator(f"generator index {x} outside 1..{n}")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return ReducedWord(n, tuple(stack))


def _trusted(n: int, code: tuple) -> ReducedWord:
    """Skip validation for codes that are reduced by construction."""
    w = object.__new__(ReducedWord)
    object.__setattr__(w, "n", n)
    object.__setattr__(w, "code", code)
    object.__setattr__(w, "_hash", hash((n, code)))
    return w


def _check_rank(s: ReducedWord, t: ReducedWord) -> None:
    if s.n != t.n:
        raise RankMismatch(f"rank {s.n} word combined with rank {t.n} word")


def multiply(s: ReducedWord, t: ReducedWord) -> ReducedWord:
    _check_rank(s, t)
    a, b = s.code, t.code
    k = 0
    m = min(len(a), len(b))
    while k < m and a[-1 - k] == -b[k]:
        k += 1
    return _trusted(s.n, a[: len(a) - k] + b[k:])


def inverse(s: ReducedWord) -> ReducedWord:
    return _trusted(s.n, tuple(-x for x in reversed(s.code)))


def stats(s: ReducedWord) -> WordStats:
    code = s.code
    gamma = sum(1 for x, y in zip(code, code[1:]) if x < 0 < y)
    return WordStats(
        length=len(code),
        gamma=gamma,
        u1_length=sum(1 for x in code if abs(x) == 1),
        tau=sum(1 if x > 0 else -1 for x in code),
    )


def beta(s: ReducedWord) -> ReducedWord:
    """Image under the automorphism fixing u_1 and sending u_j to u_1 u_j."""
    raw: list = []
    for x in s.code:
        if abs(x) == 1:
            raw.append(x)
        elif x > 0:
            raw.extend((1, x))
        else:
            raw.extend((x, -1))
    return reduce(raw, s.n)


def sigma(s: ReducedWord) -> ReducedWord:
    """Image under the automorphism sending every generator to its inverse."""
    return ReducedWord(s.n, tuple(-x for x in s.code))


def in_plus_minus(s: ReducedWord) -> bool:
    """True iff s lies in G+ (G+)^{-1}, i.e. has no negative-to-positive switch."""
    return stats(s).gamma == 0


def enumerate_sphere(n: int, k: int, constraint: str = "all", gen: int | None = None) -> list:
    """Reduced words of length ``k`` in lexicographic order.

    ``constraint`` is ``"all"``, ``"positive_only"`` (the slice G+_k) or
    ``"ending_negative_in"`` together with ``gen`` (words ending in a negative
    power of ``u_gen``).
    """
    codes = sphere_array(n, k, constraint, gen)
    return [ReducedWord(n, tuple(int(x) for x in row)) for row in codes]


def sphere_array(n: int, k: int, constraint: str = "all", gen: int | None = None) -> np.ndarray:
    """Code-matrix form of :func:`enumerate_sphere`."""
    if k < 0:
        raise ValueError("radius must be nonnegative")
    if constraint == "positive_only":
        if k == 0:
            return np.zeros((1, 0), dtype=kernels.CODE_DTYPE)
        grids = np.indices((n,) * k).reshape(k, -1).T + 1
        return np.ascontiguousarray(grids, dtype=kernels.CODE_DTYPE)
    codes = kernels.sphere_codes(n, k)
    if constraint == "all":
        return codes
    if constraint == "ending_negative_in":
        if gen is None or not 1 <= gen <= n:
            raise InvalidGenerator(f"ending_negative_in needs a generator in 1..{n}")
        if k == 0:
            return codes[:0]
        return codes[codes[:, -1] == -gen]
    raise ValueError(f"unknown constraint {constraint!r}")


def ball(n: int, r: int) -> list:
    """All reduced words of length at most ``r``, by length then lexicographic."""
    out = []
    for k in range(r + 1):
        out.extend(enumerate_sphere(n, k))
    return out


def words_to_codes(words: Sequence[ReducedWord]):
    """Pack words into a zero-padded ``int8`` code matrix plus a lengths vector."""
    width = max((len(w) for w in words), default=0)
    codes = np.zeros((len(words), width), dtype=kernels.CODE_DTYPE)
    lengths = np.zeros(len(words), dtype=np.int64)
    for r, w in enumerate(words):
        codes[r, : len(w)] = w.code
        lengths[r] = len(w)
    return codes, lengths


def batch_stats(codes: np.ndarray, lengths: np.ndarray | None = None):
    """Vector form of :func:`stats`: returns ``(length, gamma, u1_length, tau)``."""
    codes = np.asarray(codes)
    if lengths is None:
        lengths = np.full(codes.shape[0], codes.shape[1], dtype=np.int64)
    gamma, u1, tau = kernels.word_stats(codes, lengths)
    return np.asarray(lengths, dtype=np.int64), gamma, u1, tau


def right_multiply_letter(codes: np.ndarray, lengths: np.ndarray, x: int):
    """Codes and lengths of ``s * letter(x)`` for each row ``s`` (with cancellation)."""
    codes = np.asarray(codes)
    lengths = np.asarray(lengths, dtype=np.int64)
    m, width = codes.shape
    out = np.zeros((m, width + 1), dtype=kernels.CODE_DTYPE)
    out[:, :width] = codes
    rows = np.arange(m)
    if width:
        last = np.where(lengths > 0, codes[rows, np.maximum(lengths - 1, 0)], 0)
    else:
        last = np.zeros(m, dtype=np.int64)
    cancel = (lengths > 0) & (last == -x)
    new_len = np.where(cancel, lengths - 1, lengths + 1)
    out[rows[cancel], lengths[cancel] - 1] = 0
    out[rows[~cancel], lengths[~cancel]] = x
    return out, new_len


def parse_word(text: str, n: int) -> ReducedWord:
    """Parse the signed-integer text syntax and reduce the result."""
    text = text.strip()
    if text in ("", "e"):
        return identity(n)
    try:
        raw = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise InvalidGenerator(f"cannot parse word {text!r}") from exc
    return reduce(raw, n)


def format_word(s: ReducedWord) -> str:
    return "e" if not s.code else " ".join(str(x) for x in s.code)
