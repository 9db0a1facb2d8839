"""Finite carpet graphs ``Gamma_n``: construction, counts, boundaries, distances.

Two independent constructions are provided. :func:`build_cells` scans the
unit-cell grid with the base-3 digit test and is the fast path (numpy,
multi-million vertices). :func:`build_recursive` literally places eight
translated copies of the previous level and merges coincident points; it also
produces the internal boundary through its defining recursion.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .addressing import OFFSETS, Coord, side_length, word_to_coord
from .errors import InvalidArgument, ResourceLimitError
from .words import InfiniteWord, FiniteWord, prefix

DEFAULT_MAX_LEVEL = 9


def max_level() -> int:
    """Resource cap on materialized levels; ``CARPET_MAX_LEVEL`` overrides it."""
    raw = os.environ.get("CARPET_MAX_LEVEL")
    if raw is None:
        return DEFAULT_MAX_LEVEL
    try:
        return int(raw)
    except ValueError:
        raise InvalidArgument(f"CARPET_MAX_LEVEL={raw!r} is not an integer") from None


def _check_level(n: int) -> None:
    if n < 1:
        raise InvalidArgument(f"level must be >= 1, got {n}")
    cap = max_level()
    if n > cap:
        raise ResourceLimitError(
            f"level {n} exceeds the resource cap {cap} (set CARPET_MAX_LEVEL to raise it)"
        )


def vertex_count_closed_form(n: int) -> int:
    if n < 1:
        raise InvalidArgument(f"level must be >= 1, got {n}")
    v = Fraction(11, 70) * 8**n + Fraction(8, 15) * 3**n + Fraction(8, 7)
    assert v.denominator == 1, v
    return int(v)


@dataclass(frozen=True, eq=False)
class CarpetGraph:
    """Level-``n`` graph with vertices in y-major coordinate order.

    ``indptr``/``indices`` hold the adjacency in CSR form; vertex ids are row
    indices into ``coords``.
    """

    level: int
    coords: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    boundary_ids: np.ndarray | None
    internal_boundary_ids: np.ndarray | None

    @property
    def side(self) -> int:
        return side_length(self.level)

    @property
    def n_vertices(self) -> int:
        return len(self.coords)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def _keys(self, xs, ys):
        return np.asarray(ys, dtype=np.int64) * (self.side + 1) + np.asarray(xs, dtype=np.int64)

    @cached_property
    def _sorted_keys(self) -> np.ndarray:
        return self._keys(self.coords[:, 0], self.coords[:, 1])

    def index_of(self, c: Coord) -> int:
        keys = self._sorted_keys
        if not (0 <= c[0] <= self.side and 0 <= c[1] <= self.side):
            raise InvalidArgument(f"{c} is outside the level-{self.level} square")
        k = int(self._keys(c[0], c[1]))
        i = int(np.searchsorted(keys, k))
        if i == len(keys) or keys[i] != k:
            raise InvalidArgument(f"{c} is not a vertex of level {self.level}")
        return i

    def indices_of(self, cs) -> np.ndarray:
        cs = np.asarray(cs, dtype=np.int64).reshape(-1, 2)
        if np.any((cs < 0) | (cs > self.side)):
            raise InvalidArgument(f"coordinates outside the level-{self.level} square")
        keys = self._sorted_keys
        q = self._keys(cs[:, 0], cs[:, 1])
        idx = np.searchsorted(keys, q)
        if np.any(idx >= len(keys)) or np.any(keys[np.minimum(idx, len(keys) - 1)] != q):
            raise InvalidArgument("some coordinates are not vertices of this level")
        return idx

    def coord_of(self, i: int) -> Coord:
        x, y = self.coords[i]
        return int(x), int(y)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> np.ndarray:
        """``(E, 2)`` array of id pairs with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.n_vertices), self.degrees())
        mask = src < self.indices
        return np.stack([src[mask], self.indices[mask]], axis=1)

    def coord_set(self) -> set[Coord]:
        return {(int(x), int(y)) for x, y in self.coords}

    def edge_coord_set(self) -> set[tuple[Coord, Coord]]:
        e = self.edges()
        a, b = self.coords[e[:, 0]], self.coords[e[:, 1]]
        return {
            ((int(p[0]), int(p[1])), (int(q[0]), int(q[1]))) for p, q in zip(a, b)
        }

    def adjacency(self) -> dict[int, list[int]]:
        return {i: self.neighbors(i).tolist() for i in range(self.n_vertices)}

    def same_as(self, other: CarpetGraph) -> bool:
        """Equal coordinate vertex sets and edge sets."""
        return (
            self.level == other.level
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.edges(), other.edges())
        )

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "level": self.level,
            "vertex_count": self.n_vertices,
            "vertices": self.coords.tolist(),
            "edges": self.edges().tolist(),
            "boundary": None if self.boundary_ids is None else self.boundary_ids.tolist(),
            "internal_boundary": (
                None if self.internal_boundary_ids is None
                else self.internal_boundary_ids.tolist()
            ),
        }


def _csr(n_vertices: int, u: np.ndarray, v: np.ndarray):
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int64)
    counts = np.bincount(src, minlength=n_vertices)
    indptr = np.zeros(n_vertices + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def kept_cells(n: int) -> np.ndarray:
    """Boolean ``[j, i]`` mask of surviving unit cells (row = y, column = x)."""
    size = side_length(n)
    idx = np.arange(size)
    kept = np.ones((size, size), dtype=bool)
    p = 1
    while p < size:
        ones = (idx // p) % 3 == 1
        kept &= ~(ones[:, None] & ones[None, :])
        p *= 3
    return kept


def build_cells(n: int) -> CarpetGraph:
    """Direct lattice construction from the surviving unit cells."""
    _check_level(n)
    size = side_length(n)
    k = kept_cells(n)

    vmask = np.zeros((size + 1, size + 1), dtype=bool)
    for dy in (0, 1):
        for dx in (0, 1):
            vmask[dy:dy + size, dx:dx + size] |= k
    # horizontal edge (x,y)-(x+1,y) at [y, x]; vertical (x,y)-(x,y+1) at [y, x]
    hmask = np.zeros((size + 1, size), dtype=bool)
    hmask[:size] |= k
    hmask[1:] |= k
    vtmask = np.zeros((size, size + 1), dtype=bool)
    vtmask[:, :size] |= k
    vtmask[:, 1:] |= k

    flat = vmask.ravel()
    ids = np.cumsum(flat, dtype=np.int64) - 1
    ys, xs = np.nonzero(vmask)
    coords = np.stack([xs, ys], axis=1).astype(np.int64)
    w = size + 1

    hy, hx = np.nonzero(hmask)
    base = hy.astype(np.int64) * w + hx
    hu, hv = ids[base], ids[base + 1]
    vy, vx = np.nonzero(vtmask)
    base = vy.astype(np.int64) * w + vx
    vu, vv = ids[base], ids[base + w]
    del base, ids, hmask, vtmask, flat
    indptr, indices = _csr(len(coords), np.concatenate([hu, vu]), np.concatenate([hv, vv]))

    bnd = inner = None
    if n >= 2:
        on_outer = (xs == 0) | (xs == size) | (ys == 0) | (ys == size)
        bnd = np.flatnonzero(on_outer)
        removed = ~k
        touch = np.zeros((size + 1, size + 1), dtype=bool)
        for dy in (0, 1):
            for dx in (0, 1):
                touch[dy:dy + size, dx:dx + size] |= removed
        inner = np.flatnonzero(touch[ys, xs])
    return CarpetGraph(n, coords, indptr, indices, bnd, inner)


def _from_coords_edges(level: int, coords: np.ndarray, edges: np.ndarray,
                       inner_coords: np.ndarray | None) -> CarpetGraph:
    size = side_length(level)
    keys = coords[:, 1] * (size + 1) + coords[:, 0]
    order = np.argsort(keys)
    coords, keys = coords[order], keys[order]
    ekeys = edges[:, :, 1] * (size + 1) + edges[:, :, 0]
    u = np.searchsorted(keys, ekeys[:, 0])
    v = np.searchsorted(keys, ekeys[:, 1])
    indptr, indices = _csr(len(coords), u, v)
    bnd = inner = None
    if level >= 2:
        x, y = coords[:, 0], coords[:, 1]
        bnd = np.flatnonzero((x == 0) | (x == size) | (y == 0) | (y == size))
        ik = inner_coords[:, 1] * (size + 1) + inner_coords[:, 0]
        inner = np.sort(np.searchsorted(keys, ik))
    return CarpetGraph(level, coords, indptr, indices, bnd, inner)


def _unique_rows(a: np.ndarray) -> np.ndarray:
    return np.unique(a, axis=0)


def middle_square_perimeter(level: int) -> np.ndarray:
    """Perimeter points of the largest hole of ``Gamma_level`` (level >= 2)."""
    s = side_length(level - 1)
    pts = set()
    for t in range(s + 1):
        pts.update({(s + t, s), (s + t, 2 * s), (s, s + t), (2 * s, s + t)})
    return np.array(sorted(pts), dtype=np.int64)


def build_recursive(n: int) -> CarpetGraph:
    """Eight translated copies of the previous level, coincident points merged.

    The internal boundary is carried along by the recursion: copies of the
    previous internal boundary plus the perimeter of the new middle square.
    """
    _check_level(n)
    coords = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=np.int64)
    edges = np.array([[[0, 0], [1, 0]], [[1, 0], [1, 1]],
                      [[0, 1], [1, 1]], [[0, 0], [0, 1]]], dtype=np.int64)
    inner = np.zeros((0, 2), dtype=np.int64)
    for level in range(2, n + 1):
        s = side_length(level - 1)
        shifts = [np.array(OFFSETS[p], dtype=np.int64) * s for p in range(8)]
        coords = _unique_rows(np.concatenate([coords + d for d in shifts]))
        edges = _unique_rows(np.concatenate([edges + d for d in shifts]).reshape(-1, 4))
        edges = edges.reshape(-1, 2, 2)
        parts = [inner + d for d in shifts] + [middle_square_perimeter(level)]
        inner = _unique_rows(np.concatenate(parts))
    return _from_coords_edges(n, coords, edges, inner if n >= 2 else None)


def recursive_word_labels(n: int) -> dict[Coord, list[FiniteWord]]:
    """Words attached to each vertex when labels ride along the copy-and-glue steps.

    Each copy at position ``p`` extends its labels by ``p``; points merged by
    gluing pool their labels.
    """
    _check_level(n)
    labels: dict[Coord, list[FiniteWord]] = {
        c: [FiniteWord(y)] for y, c in (("a", (0, 0)), ("b", (1, 0)), ("c", (1, 1)), ("d", (0, 1)))
    }
    for level in range(2, n + 1):
        s = side_length(level - 1)
        nxt: dict[Coord, list[FiniteWord]] = {}
        for p in range(8):
            ox, oy = OFFSETS[p]
            for (x, y), ws in labels.items():
                tgt = nxt.setdefault((x + s * ox, y + s * oy), [])
                tgt.extend(FiniteWord(w.root, w.digits + (p,)) for w in ws)
        labels = nxt
    return {c: sorted(ws, key=lambda w: w.compact) for c, ws in labels.items()}


@lru_cache(maxsize=None)
def carpet_graph(n: int) -> CarpetGraph:
    """Shared, cached ``Gamma_n`` (the cell construction)."""
    return build_cells(n)


def boundary(g: CarpetGraph) -> np.ndarray:
    if g.level < 2:
        raise InvalidArgument("the boundary is defined from level 2 on")
    return g.boundary_ids


def internal_boundary(g: CarpetGraph) -> np.ndarray:
    if g.level < 2:
        raise InvalidArgument("the internal boundary is defined from level 2 on")
    return g.internal_boundary_ids


def degree_histogram(g: CarpetGraph) -> dict[int, int]:
    vals, counts = np.unique(g.degrees(), return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def _expand(g: CarpetGraph, frontier: np.ndarray) -> np.ndarray:
    starts = g.indptr[frontier]
    lens = g.indptr[frontier + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return frontier[:0]
    offs = np.repeat(starts - np.cumsum(lens) + lens, lens)
    return g.indices[offs + np.arange(total)]


def bfs_layers(g: CarpetGraph, sources, max_depth: int | None = None) -> np.ndarray:
    """Hop distances from the source set; ``-1`` marks unreached vertices."""
    dist = np.full(g.n_vertices, -1, dtype=np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    d = 0
    while len(frontier) and (max_depth is None or d < max_depth):
        nxt = _expand(g, frontier)
        nxt = np.unique(nxt[dist[nxt] < 0])
        d += 1
        dist[nxt] = d
        frontier = nxt
    return dist


def bfs_distance(g: CarpetGraph, source: int, targets) -> int:
    """Fewest hops from ``source`` to any vertex in ``targets``."""
    targets = np.asarray(targets, dtype=np.int64)
    if len(targets) == 0:
        raise InvalidArgument("target set is empty")
    nv = g.n_vertices
    if not 0 <= source < nv or targets.min() < 0 or targets.max() >= nv:
        raise InvalidArgument("unknown vertex id")
    is_target = np.zeros(nv, dtype=bool)
    is_target[targets] = True
    seen = np.zeros(nv, dtype=bool)
    frontier = np.array([source], dtype=np.int64)
    seen[source] = True
    d = 0
    while len(frontier):
        if is_target[frontier].any():
            return d
        nxt = _expand(g, frontier)
        nxt = np.unique(nxt[~seen[nxt]])
        seen[nxt] = True
        frontier = nxt
        d += 1
    raise InvalidArgument("no target is reachable from the source")


def d_value(w: FiniteWord) -> int:
    """Distance in ``Gamma_n`` (n = len(w)) from the vertex of ``w`` to the internal boundary."""
    g = carpet_graph(len(w))
    return bfs_distance(g, g.index_of(word_to_coord(w)), internal_boundary(g))


def d_sequence(w: InfiniteWord | FiniteWord, n: int | None = None) -> tuple[int, ...]:
    """``(d_2, ..., d_N)`` for the root prefixes of ``w``; element 0 is ``d_2``.

    For a finite word ``N`` defaults to its length.
    """
    if isinstance(w, FiniteWord):
        if n is None:
            n = len(w)
        if n > len(w):
            raise InvalidArgument(f"word {w} is shorter than {n}")
        prefixes = [FiniteWord(w.root, w.digits[: i - 1]) for i in range(2, n + 1)]
    else:
        if n is None:
            raise InvalidArgument("depth is required for an infinite word")
        prefixes = [prefix(w, i) for i in range(2, n + 1)]
    if n < 2:
        raise InvalidArgument(f"depth must be >= 2, got {n}")
    _check_level(n)
    return tuple(d_value(p) for p in prefixes)
