"""Words over the position alphabet, the dihedral action on them, and cofinality.

A vertex address is a root letter from ``abcd`` followed by position letters
``0..7``. Infinite addresses are kept eventually periodic so that every
question asked about them is decidable in finite time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterator, Sequence, Union

from .errors import InvalidArgument, WordSyntaxError

LETTERS = tuple(range(8))
ROOTS = ("a", "b", "c", "d")


def _check_letters(seq: Sequence[int], what: str) -> tuple[int, ...]:
    out = tuple(int(x) for x in seq)
    for x in out:
        if not 0 <= x <= 7:
            raise InvalidArgument(f"{what}: letter {x} is outside 0..7")
    return out


def _check_root(root: str) -> str:
    if root not in ROOTS:
        raise InvalidArgument(f"root letter {root!r} is not one of a, b, c, d")
    return root


def _digits(seq: Sequence[int]) -> str:
    return "".join(str(x) for x in seq)


@dataclass(frozen=True)
class FiniteWord:
    """The prefix ``y x1 ... x_{n-1}``; its length counts the root letter."""

    root: str
    digits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "root", _check_root(self.root))
        object.__setattr__(self, "digits", _check_letters(self.digits, "digits"))

    def __len__(self) -> int:
        return 1 + len(self.digits)

    @property
    def level(self) -> int:
        """Level of the finite graph this word names a vertex of."""
        return len(self)

    def __str__(self) -> str:
        return f"{self.root}:{_digits(self.digits)}"

    @property
    def compact(self) -> str:
        return self.root + _digits(self.digits)


@dataclass(frozen=True)
class TailSequence:
    """The position part ``x1 x2 ...`` as ``preperiod . period^omega``."""

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self):
        object.__setattr__(self, "preperiod", _check_letters(self.preperiod, "preperiod"))
        object.__setattr__(self, "period", _check_letters(self.period, "period"))
        if not self.period:
            raise InvalidArgument("period must be nonempty")

    def letter_at(self, i: int) -> int:
        return letter_at(self, i)

    def letters(self) -> Iterator[int]:
        """Endless iterator over x1, x2, ..."""
        yield from self.preperiod
        while True:
            yield from self.period

    def __str__(self) -> str:
        return f"{_digits(self.preperiod)}({_digits(self.period)})"


@dataclass(frozen=True)
class InfiniteWord:
    root: str
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self):
        object.__setattr__(self, "root", _check_root(self.root))
        object.__setattr__(self, "preperiod", _check_letters(self.preperiod, "preperiod"))
        object.__setattr__(self, "period", _check_letters(self.period, "period"))
        if not self.period:
            raise InvalidArgument("period must be nonempty")

    @property
    def tail(self) -> TailSequence:
        return TailSequence(self.preperiod, self.period)

    @classmethod
    def from_tail(cls, root: str, tail: TailSequence) -> InfiniteWord:
        return cls(root, tail.preperiod, tail.period)

    def prefix(self, n: int) -> FiniteWord:
        return prefix(self, n)

    def __str__(self) -> str:
        return f"{self.root}:{self.tail}"


Word = Union[FiniteWord, InfiniteWord]


def prefix(w: InfiniteWord, n: int) -> FiniteWord:
    """Length-``n`` prefix ``w_n``: the root and the first ``n - 1`` position letters."""
    if n < 1:
        raise InvalidArgument(f"prefix length must be >= 1, got {n}")
    return FiniteWord(w.root, tuple(islice(w.tail.letters(), n - 1)))


def letter_at(t: TailSequence, i: int) -> int:
    """The ``i``-th letter of the tail, 1-indexed."""
    if i < 1:
        raise InvalidArgument(f"letter index must be >= 1, got {i}")
    p = len(t.preperiod)
    if i <= p:
        return t.preperiod[i - 1]
    return t.period[(i - p - 1) % len(t.period)]


def cofinal(u: TailSequence, v: TailSequence) -> bool:
    """True iff ``u`` and ``v`` differ in only finitely many positions.

    Past the longer preperiod both tails repeat with period ``lcm`` of the two
    period lengths, so one window of that length decides the question.
    """
    start = max(len(u.preperiod), len(v.preperiod)) + 1
    span = math.lcm(len(u.period), len(v.period))
    return all(letter_at(u, k) == letter_at(v, k) for k in range(start, start + span))


# -- the dihedral group acting on positions ---------------------------------


@dataclass(frozen=True)
class GroupElement:
    """A permutation of the position letters stored as its image array."""

    image: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        img = _check_letters(self.image, "image")
        if sorted(img) != list(LETTERS):
            raise InvalidArgument(f"{img} is not a permutation of 0..7")
        object.__setattr__(self, "image", img)

    def __call__(self, letter: int) -> int:
        return self.image[letter]

    def __matmul__(self, other: GroupElement) -> GroupElement:
        """Composition ``self @ other`` applies ``other`` first."""
        return GroupElement(tuple(self.image[other.image[i]] for i in LETTERS))

    def inverse(self) -> GroupElement:
        inv = [0] * 8
        for i, j in enumerate(self.image):
            inv[j] = i
        return GroupElement(tuple(inv))

    def __pow__(self, k: int) -> GroupElement:
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = base @ out
        return out

    def cycles(self) -> str:
        """Disjoint-cycle notation, e.g. ``(1357)(2460)``; ``()`` for the identity."""
        seen = set()
        parts = []
        for start in LETTERS:
            if start in seen or self.image[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.image[j]
            parts.append("(" + "".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"

    def __str__(self) -> str:
        return self.cycles()


def from_cycles(text: str) -> GroupElement:
    """Parse disjoint-cycle notation such as ``(04)(13)(57)``."""
    image = list(LETTERS)
    for cyc in re.findall(r"\(([0-7]*)\)", text):
        pts = [int(c) for c in cyc]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            image[a] = b
    return GroupElement(tuple(image))


IDENTITY = GroupElement(LETTERS, "e")
R = GroupElement(from_cycles("(1357)(2460)").image, "r")
S = GroupElement(from_cycles("(04)(13)(57)").image, "s")

_ELEMENT_NAMES = ("e", "r", "r^2", "r^3", "s", "sr", "sr^2", "sr^3")


def dihedral_group() -> tuple[GroupElement, ...]:
    """The 8 elements in the fixed order e, r, r^2, r^3, s, sr, sr^2, sr^3."""
    rots = [R**k for k in range(4)]
    elems = rots + [S @ x for x in rots]
    return tuple(GroupElement(g.image, n) for g, n in zip(elems, _ELEMENT_NAMES))


def apply(sigma: GroupElement, t: TailSequence) -> TailSequence:
    return TailSequence(tuple(map(sigma, t.preperiod)), tuple(map(sigma, t.period)))


# -- text syntax -------------------------------------------------------------

_WORD_RE = re.compile(r"([a-d]):([0-7]*)(?:\(([0-7]+)\))?")


def parse_word(text: str) -> Word:
    """Parse ``a:206(13)`` (infinite) or ``a:206`` (finite)."""
    m = _WORD_RE.fullmatch(text)
    if m is not None:
        root, pre, per = m.groups()
        pre_d = tuple(int(c) for c in pre)
        if per is None:
            return FiniteWord(root, pre_d)
        return InfiniteWord(root, pre_d, tuple(int(c) for c in per))
    raise WordSyntaxError(text, *_locate_error(text))


def _locate_error(text: str) -> tuple[int, str]:
    if not text:
        return 0, "empty word"
    if text[0] not in ROOTS:
        return 0, f"root must be one of a, b, c, d (got {text[0]!r})"
    if len(text) < 2 or text[1] != ":":
        return 1, "expected ':' after the root letter"
    i = 2
    while i < len(text) and text[i] in "01234567":
        i += 1
    if i == len(text):
        return i, "malformed word"
    if text[i] != "(":
        if text[i].isdigit():
            return i, f"position letter {text[i]!r} is outside 0..7"
        return i, f"unexpected character {text[i]!r}"
    i += 1
    if i < len(text) and text[i] == ")":
        return i, "period must be nonempty"
    while i < len(text) and text[i] in "01234567":
        i += 1
    if i == len(text):
        return i, "missing ')'"
    if text[i] != ")":
        if text[i].isdigit():
            return i, f"position letter {text[i]!r} is outside 0..7"
        return i, f"unexpected character {text[i]!r}"
    return i + 1, "trailing characters after ')'"


def parse_infinite(text: str) -> InfiniteWord:
    w = parse_word(text)
    if not isinstance(w, InfiniteWord):
        raise WordSyntaxError(text, len(text), "expected an infinite word like a:20(6)")
    return w


def parse_finite(text: str) -> FiniteWord:
    w = parse_word(text)
    if not isinstance(w, FiniteWord):
        raise WordSyntaxError(text, text.index("("), "expected a finite word like a:206")
    return w
