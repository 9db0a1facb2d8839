"""Rooted balls in the finite graphs and in the limit graph of an infinite word.

Balls are grown by a local breadth-first search on the integer lattice, using
the cell predicate to decide which unit edges exist, so a small ball at a high
level never materializes the whole level.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .addressing import (
    Coord, Side, coord_sides, model_layout, side_length, word_to_coord, _kept,
)
from .errors import ResourceLimitError
from .graph import _check_level, max_level
from .words import InfiniteWord, letter_at, prefix


@dataclass(frozen=True)
class RootedBall:
    """Ball around a root, with vertices stored as offsets from the root.

    Equality compares the offset graph only (radius included); ``root_word``
    and ``level`` are provenance.
    """

    radius: int
    vertices: tuple[Coord, ...]
    edges: tuple[tuple[Coord, Coord], ...]
    root_word: InfiniteWord | None = field(default=None, compare=False)
    level: int | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> dict[Coord, list[Coord]]:
        adj: dict[Coord, list[Coord]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_subgraph_of(self, other: RootedBall) -> bool:
        return set(self.vertices) <= set(other.vertices) and set(self.edges) <= set(other.edges)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "radius": self.radius,
            "root": "(0,0)",
            "word": None if self.root_word is None else str(self.root_word),
            "level": self.level,
            "vertices": [list(v) for v in self.vertices],
            "edges": [[list(a), list(b)] for a, b in self.edges],
        }


def lattice_neighbors(c: Coord, level: int) -> list[Coord]:
    """Neighbors of the point ``c`` in ``Gamma_level`` (``c`` assumed a vertex)."""
    n = side_length(level)
    x, y = c
    out = []
    for dx in (-1, 1):
        nx_ = x + dx
        if 0 <= nx_ <= n:
            cx = min(x, nx_)
            if (y < n and _kept(cx, y)) or (y > 0 and _kept(cx, y - 1)):
                out.append((nx_, y))
    for dy in (-1, 1):
        ny = y + dy
        if 0 <= ny <= n:
            cy = min(y, ny)
            if (x < n and _kept(x, cy)) or (x > 0 and _kept(x - 1, cy)):
                out.append((x, ny))
    return out


def _grow(center: Coord, r: int, level: int) -> dict[Coord, int]:
    dist = {center: 0}
    queue = deque([center])
    while queue:
        p = queue.popleft()
        if dist[p] == r:
            continue
        for q in lattice_neighbors(p, level):
            if q not in dist:
                dist[q] = dist[p] + 1
                queue.append(q)
    return dist


def _ball_from_dist(dist: dict[Coord, int], center: Coord, r: int, level: int,
                    w: InfiniteWord | None) -> RootedBall:
    cx, cy = center
    edges = set()
    for p in dist:
        for q in lattice_neighbors(p, level):
            if q in dist and p < q:
                edges.add(((p[0] - cx, p[1] - cy), (q[0] - cx, q[1] - cy)))
    verts = sorted((p[0] - cx, p[1] - cy) for p in dist)
    return RootedBall(r, tuple(verts), tuple(sorted(edges)), w, level)


def ball_at_level(w: InfiniteWord, r: int, n: int) -> RootedBall:
    """Radius-``r`` ball around ``w_n`` in ``Gamma_n``, rebased to the root."""
    _check_level(n)
    center = word_to_coord(prefix(w, n))
    return _ball_from_dist(_grow(center, r, n), center, r, n, w)


@dataclass(frozen=True)
class SideFate:
    kind: str  # "glued", "sealed" or "outer_forever"
    level: int | None = None

    def __str__(self) -> str:
        return self.kind if self.level is None else f"{self.kind}_at({self.level})"


def side_fates(w: InfiniteWord, level: int = 1) -> dict[Side, SideFate]:
    """What eventually happens to each side of the root's level-``level`` block.

    Letter ``x_i`` places the level-``i`` block inside level ``i + 1``, so the
    first letter that touches a side of the level-``k`` block is ``x_k``.
    """
    layout = model_layout()
    t = w.tail
    last = max(level, len(t.preperiod) + 1) + len(t.period) - 1
    fates = {}
    for s in Side:
        fate = SideFate("outer_forever")
        for i in range(level, last + 1):
            x = letter_at(t, i)
            if s in layout.glued[x]:
                fate = SideFate("glued", i + 1)
                break
            if s in layout.sealed[x]:
                fate = SideFate("sealed", i + 1)
                break
        fates[s] = fate
    return fates


def is_certified(w: InfiniteWord, r: int, n: int) -> bool:
    """Whether the radius-``r`` ball around ``w_n`` can no longer change.

    New vertices only ever attach to points of the outer boundary lying on a
    side that is later glued to a sibling copy; a ball is final once no point
    closer than ``r`` to the root sits on such a side.
    """
    center = word_to_coord(prefix(w, n))
    dist = _grow(center, r, n)
    fates = side_fates(w, n)
    for p, d in dist.items():
        if d < r and any(fates[s].kind == "glued" for s in coord_sides(p, n)):
            return False
    return True


def stabilization_level(w: InfiniteWord, r: int, cap: int | None = None) -> int:
    cap = max_level() if cap is None else cap
    for n in range(1, cap + 1):
        if is_certified(w, r, n):
            return n
    raise ResourceLimitError(
        f"ball of radius {r} around {w} not certified stable up to level {cap}"
    )


def limit_ball(w: InfiniteWord, r: int) -> RootedBall:
    return ball_at_level(w, r, stabilization_level(w, r))
