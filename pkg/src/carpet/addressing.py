"""Planar embedding of the carpet graphs and word <-> coordinate translation.

Level ``n`` occupies the square ``[0, 3**(n-1)]**2`` with unit edges. The
letter ``x_i`` of a word places the level-``i`` block at the cell
``offset(x_i)`` of a 3x3 grid whose cells have side ``3**(i-1)``; copies are
translated only, never rotated or reflected.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .errors import InvalidArgument
from .words import LETTERS, ROOTS, FiniteWord, GroupElement

Coord = tuple[int, int]


class Side(str, Enum):
    BOTTOM = "bottom"
    RIGHT = "right"
    TOP = "top"
    LEFT = "left"

    def __str__(self) -> str:
        return self.value


ALL_SIDES = frozenset(Side)

OFFSETS: dict[int, Coord] = {
    0: (0, 0), 1: (1, 0), 2: (2, 0), 3: (2, 1),
    4: (2, 2), 5: (1, 2), 6: (0, 2), 7: (0, 1),
}

ROOT_COORDS: dict[str, Coord] = {"a": (0, 0), "b": (1, 0), "c": (1, 1), "d": (0, 1)}

B, R_, T, L_ = Side.BOTTOM, Side.RIGHT, Side.TOP, Side.LEFT

_GLUED = {
    0: {R_, T}, 1: {L_, R_}, 2: {L_, T}, 3: {B, T},
    4: {B, L_}, 5: {R_, L_}, 6: {R_, B}, 7: {T, B},
}
_SEALED = {1: {T}, 3: {L_}, 5: {B}, 7: {R_}}

# Letters that keep a block on a given outer side of the next level.
SIDE_LETTERS: dict[Side, frozenset[int]] = {
    B: frozenset({0, 1, 2}),
    R_: frozenset({2, 3, 4}),
    T: frozenset({4, 5, 6}),
    L_: frozenset({6, 7, 0}),
}
SIDE_ROOTS: dict[Side, frozenset[str]] = {
    B: frozenset("ab"), R_: frozenset("bc"), T: frozenset("cd"), L_: frozenset("da"),
}


@dataclass(frozen=True)
class ModelLayout:
    offset: dict[int, Coord]
    glued: dict[int, frozenset[Side]]
    sealed: dict[int, frozenset[Side]]
    outer: dict[int, frozenset[Side]]


def model_layout() -> ModelLayout:
    glued = {p: frozenset(_GLUED[p]) for p in LETTERS}
    sealed = {p: frozenset(_SEALED.get(p, ())) for p in LETTERS}
    outer = {p: ALL_SIDES - glued[p] - sealed[p] for p in LETTERS}
    return ModelLayout(dict(OFFSETS), glued, sealed, outer)


def side_length(level: int) -> int:
    if level < 1:
        raise InvalidArgument(f"level must be >= 1, got {level}")
    return 3 ** (level - 1)


def root_coord(y: str) -> Coord:
    try:
        return ROOT_COORDS[y]
    except KeyError:
        raise InvalidArgument(f"unknown root letter {y!r}") from None


def word_to_coord(w: FiniteWord) -> Coord:
    x, y = ROOT_COORDS[w.root]
    scale = 1
    for letter in w.digits:
        ox, oy = OFFSETS[letter]
        x += scale * ox
        y += scale * oy
        scale *= 3
    return x, y


def same_vertex(u: FiniteWord, v: FiniteWord) -> bool:
    if len(u) != len(v):
        raise InvalidArgument(f"words have different lengths ({len(u)} vs {len(v)})")
    return word_to_coord(u) == word_to_coord(v)


def _kept(i: int, j: int) -> bool:
    while i or j:
        if i % 3 == 1 and j % 3 == 1:
            return False
        i //= 3
        j //= 3
    return True


def cell_kept(i: int, j: int, level: int) -> bool:
    """Whether unit cell ``(i, j)`` survives in the level-``level`` carpet."""
    n = side_length(level)
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidArgument(f"cell ({i},{j}) outside the {n}x{n} grid of level {level}")
    return _kept(i, j)


def coord_sides(c: Coord, level: int) -> frozenset[Side]:
    """Outer sides of the level-``level`` square that contain the point ``c``."""
    n = side_length(level)
    x, y = c
    out = set()
    if y == 0:
        out.add(B)
    if x == n:
        out.add(R_)
    if y == n:
        out.add(T)
    if x == 0:
        out.add(L_)
    return frozenset(out)


def boundary_sides_by_word(w: FiniteWord) -> frozenset[Side]:
    """Side membership read off the letters alone (root set plus digit set)."""
    if len(w) < 2:
        raise InvalidArgument("boundary is defined from level 2 on; word too short")
    return frozenset(
        s for s in Side
        if w.root in SIDE_ROOTS[s] and all(x in SIDE_LETTERS[s] for x in w.digits)
    )


def boundary_sides(w: FiniteWord) -> frozenset[Side]:
    """Outer sides of ``Gamma_n`` containing the vertex named by ``w``.

    The geometric test decides; for words whose letters already match a
    side's pattern the two answers coincide.
    """
    if len(w) < 2:
        raise InvalidArgument("boundary is defined from level 2 on; word too short")
    return coord_sides(word_to_coord(w), len(w))


def corners(level: int) -> tuple[Coord, ...]:
    n = side_length(level)
    return ((0, 0), (n, 0), (n, n), (0, n))


def is_corner(w: FiniteWord) -> bool:
    return word_to_coord(w) in corners(len(w))


def words_for_coord(c: Coord, level: int) -> Iterator[FiniteWord]:
    """Every length-``level`` word naming the vertex at ``c`` (may be empty)."""
    if level == 1:
        for y in ROOTS:
            if ROOT_COORDS[y] == c:
                yield FiniteWord(y)
        return
    scale = 3 ** (level - 2)
    for letter in LETTERS:
        ox, oy = OFFSETS[letter]
        lx, ly = c[0] - scale * ox, c[1] - scale * oy
        if 0 <= lx <= scale and 0 <= ly <= scale:
            for inner in words_for_coord((lx, ly), level - 1):
                yield FiniteWord(inner.root, inner.digits + (letter,))


def canonical_word(w: FiniteWord) -> FiniteWord:
    """Lexicographically least word of the same length naming the same vertex."""
    return min(words_for_coord(word_to_coord(w), len(w)), key=lambda u: u.compact)


# -- square isometries -------------------------------------------------------

_MATRICES = (
    ((1, 0), (0, 1)), ((0, -1), (1, 0)), ((-1, 0), (0, -1)), ((0, 1), (-1, 0)),
    ((1, 0), (0, -1)), ((-1, 0), (0, 1)), ((0, 1), (1, 0)), ((0, -1), (-1, 0)),
)


def _mul(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def isometry_matrix(sigma: GroupElement) -> tuple[tuple[int, int], tuple[int, int]]:
    """The linear symmetry of the square that permutes the 8 cells like ``sigma``."""
    for m in _MATRICES:
        # doubled cell centers relative to the grid center
        if all(
            _mul(m, (2 * OFFSETS[p][0] - 2, 2 * OFFSETS[p][1] - 2))
            == (2 * OFFSETS[sigma(p)][0] - 2, 2 * OFFSETS[sigma(p)][1] - 2)
            for p in LETTERS
        ):
            return m
    raise InvalidArgument(f"{sigma} is not a symmetry of the model layout")


def apply_isometry(sigma: GroupElement, c: Coord, level: int) -> Coord:
    """Image of point ``c`` of ``Gamma_level`` under the symmetry realizing ``sigma``."""
    n = side_length(level)
    m = isometry_matrix(sigma)
    qx, qy = _mul(m, (2 * c[0] - n, 2 * c[1] - n))
    return (qx + n) // 2, (qy + n) // 2


def root_image(sigma: GroupElement, y: str) -> str:
    """Root letter whose corner of ``Gamma_1`` is the image of ``y``'s corner."""
    target = apply_isometry(sigma, ROOT_COORDS[y], 1)
    return next(k for k, v in ROOT_COORDS.items() if v == target)


def transform_word(sigma: GroupElement, w: FiniteWord) -> FiniteWord:
    """``sigma`` on the digits together with the matching root correspondence."""
    return FiniteWord(root_image(sigma, w.root), tuple(map(sigma, w.digits)))
