"""Isomorphism decisions for carpet graphs, plus a brute-force oracle.

The fast decisions compare distance sequences (rooted, finite levels) and test
cofinality of tails up to the dihedral action (unrooted limit graphs). The
backtracking matcher below is independent of both and is what the fast paths
are validated against.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np

from .addressing import apply_isometry, root_image, words_for_coord
from .balls import RootedBall, limit_ball
from .errors import CarpetError, InvalidArgument, ResourceLimitError
from .graph import CarpetGraph, carpet_graph, d_sequence
from .words import GroupElement, InfiniteWord, apply, cofinal, dihedral_group

MAX_ORACLE_VERTICES = 10_000
MAX_AUTOMORPHISM_LEVEL = 4

Adjacency = Mapping[Hashable, Sequence[Hashable]]


# -- brute-force oracle ------------------------------------------------------


def _as_adjacency(g) -> Adjacency:
    if isinstance(g, (CarpetGraph, RootedBall)):
        return g.adjacency()
    return g


def _bfs(adj: Adjacency, sources) -> dict:
    dist = {s: 0 for s in sources}
    queue = deque(dist)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _invariants(adj: Adjacency, root=None) -> dict:
    deg = {v: len(ns) for v, ns in adj.items()}
    corner_dist = _bfs(adj, [v for v, d in deg.items() if d == 2])
    root_dist = _bfs(adj, [root]) if root is not None else {}
    return {
        v: (
            deg[v],
            tuple(sorted(deg[u] for u in adj[v])),
            corner_dist.get(v, -1),
            root_dist.get(v, -1),
        )
        for v in adj
    }


def find_isomorphisms(adj1: Adjacency, adj2: Adjacency, roots=None) -> Iterator[dict]:
    """Yield every isomorphism ``adj1 -> adj2`` (mapping roots[0] to roots[1] if given).

    Vertices of ``adj1`` are matched in breadth-first order so that each new
    vertex has an already-matched parent; its candidates are the unmatched
    neighbors of the parent's image that share its invariant.
    """
    if len(adj1) != len(adj2):
        return
    if sum(map(len, adj1.values())) != sum(map(len, adj2.values())):
        return
    r1, r2 = roots if roots is not None else (None, None)
    inv1, inv2 = _invariants(adj1, r1), _invariants(adj2, r2)
    if Counter(inv1.values()) != Counter(inv2.values()):
        return
    by_inv: dict = {}
    for v, key in inv2.items():
        by_inv.setdefault(key, []).append(v)
    sets2 = {v: set(ns) for v, ns in adj2.items()}

    order: list = []
    parent: dict = {}
    placed: set = set()
    starts = [r1] if r1 is not None else []
    starts += sorted(adj1, key=lambda v: (len(by_inv[inv1[v]]), repr(v)))
    for s in starts:
        if s in placed:
            continue
        parent[s] = None
        placed.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in adj1[u]:
                if v not in placed:
                    placed.add(v)
                    parent[v] = u
                    queue.append(v)

    mapping: dict = {}
    used: set = set()

    def candidates(v):
        p = parent[v]
        if p is None:
            if v == r1:
                return [r2]
            return list(by_inv[inv1[v]])
        return [c for c in adj2[mapping[p]] if inv2[c] == inv1[v]]

    def feasible(v, c) -> bool:
        if c in used or inv2[c] != inv1[v]:
            return False
        k = 0
        for u in adj1[v]:
            if u in mapping:
                if mapping[u] not in sets2[c]:
                    return False
                k += 1
        return k == sum(1 for x in adj2[c] if x in used)

    stack = [iter(candidates(order[0]))]
    while stack:
        v = order[len(stack) - 1]
        if v in mapping:
            used.discard(mapping.pop(v))
        for c in stack[-1]:
            if feasible(v, c):
                mapping[v] = c
                used.add(c)
                break
        else:
            stack.pop()
            continue
        if len(stack) == len(order):
            yield dict(mapping)
        else:
            stack.append(iter(candidates(order[len(stack)])))


def graph_iso_bruteforce(g1, g2, root1=None, root2=None) -> bool:
    """Exact isomorphism test; rooted when both roots are given.

    Accepts :class:`CarpetGraph`, :class:`RootedBall` (rooted at offset
    ``(0, 0)`` by default) or a plain adjacency mapping.
    """
    if isinstance(g1, RootedBall) and isinstance(g2, RootedBall) and root1 is None:
        root1 = root2 = (0, 0)
    if (root1 is None) != (root2 is None):
        raise InvalidArgument("give both roots or neither")
    a1, a2 = _as_adjacency(g1), _as_adjacency(g2)
    if max(len(a1), len(a2)) > MAX_ORACLE_VERTICES:
        raise ResourceLimitError(f"oracle is limited to {MAX_ORACLE_VERTICES} vertices")
    roots = None if root1 is None else (root1, root2)
    return next(find_isomorphisms(a1, a2, roots), None) is not None


def automorphisms(g: CarpetGraph) -> list[np.ndarray]:
    """All automorphisms of ``g`` as image arrays (``perm[i]`` is the image of ``i``)."""
    if g.level > MAX_AUTOMORPHISM_LEVEL:
        raise ResourceLimitError(
            f"automorphism search is limited to level {MAX_AUTOMORPHISM_LEVEL}"
        )
    adj = g.adjacency()
    out = []
    for m in find_isomorphisms(adj, adj):
        perm = np.empty(g.n_vertices, dtype=np.int64)
        for k, v in m.items():
            perm[k] = v
        out.append(perm)
    return sorted(out, key=lambda p: p.tolist())


def isometry_permutation(g: CarpetGraph, sigma: GroupElement) -> np.ndarray:
    """Vertex permutation of ``g`` induced by the square symmetry realizing ``sigma``."""
    images = [apply_isometry(sigma, g.coord_of(i), g.level) for i in range(g.n_vertices)]
    return g.indices_of(images)


# -- the fast decisions ------------------------------------------------------


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    witness: GroupElement | None = None

    def __post_init__(self):
        if self.witness is not None and not self.isomorphic:
            raise InvalidArgument("a witness implies isomorphic=True")

    def __str__(self) -> str:
        if not self.isomorphic:
            return "not isomorphic"
        return f"isomorphic witness={self.witness}"

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "isomorphic": self.isomorphic,
            "witness": None if self.witness is None else self.witness.cycles(),
        }


def rooted_iso_finite(left: InfiniteWord, right: InfiniteWord, depth: int) -> bool:
    """Rooted isomorphism of the depth-``depth`` approximations via distance sequences."""
    if depth < 2:
        raise InvalidArgument(f"depth must be >= 2, got {depth}")
    return d_sequence(left, depth) == d_sequence(right, depth)


def find_witness_radius(left: InfiniteWord, right: InfiniteWord, max_depth: int,
                        max_radius: int | None = None) -> int | None:
    """Smallest radius at which the rooted limit balls differ, or ``None``.

    ``None`` means the distance sequences agree through ``max_depth``, so no
    search is attempted.
    """
    dl, dr = d_sequence(left, max_depth), d_sequence(right, max_depth)
    if dl == dr:
        return None
    k = next(i for i, (a, b) in enumerate(zip(dl, dr)) if a != b) + 2
    if max_radius is None:
        max_radius = 2 * 3 ** (k - 1)
    for r in range(1, max_radius + 1):
        b1, b2 = limit_ball(left, r), limit_ball(right, r)
        if b1 != b2 and not graph_iso_bruteforce(b1, b2):
            return r
    raise CarpetError(
        f"distance sequences of {left} and {right} differ at index {k}, "
        f"but rooted balls agree up to radius {max_radius}"
    )


def unrooted_iso(left: InfiniteWord, right: InfiniteWord) -> IsoVerdict:
    """Decide whether the limit graphs are isomorphic; root letters play no part."""
    for sigma in dihedral_group():
        if cofinal(apply(sigma, left.tail), right.tail):
            return IsoVerdict(True, sigma)
    return IsoVerdict(False)


def transform_infinite(sigma: GroupElement, w: InfiniteWord) -> InfiniteWord:
    """Image of ``w`` under ``sigma`` with the geometric root correspondence."""
    return InfiniteWord.from_tail(root_image(sigma, w.root), apply(sigma, w.tail))


@dataclass
class IsoClass:
    """One isomorphism class; ``witnesses[i]`` carries the representative's tail
    onto a tail cofinal with ``members[i]``'s."""

    members: list[InfiniteWord] = field(default_factory=list)
    witnesses: list[GroupElement] = field(default_factory=list)

    @property
    def representative(self) -> InfiniteWord:
        return self.members[0]

    def witness(self, u: InfiniteWord, v: InfiniteWord) -> GroupElement:
        """A group element taking ``u``'s tail to one cofinal with ``v``'s."""
        su = self.witnesses[self.members.index(u)]
        sv = self.witnesses[self.members.index(v)]
        return sv @ su.inverse()


def classify(words: Sequence[InfiniteWord]) -> list[IsoClass]:
    if not words:
        raise InvalidArgument("need at least one word")
    classes: list[IsoClass] = []
    for w in words:
        for cls in classes:
            verdict = unrooted_iso(cls.representative, w)
            if verdict.isomorphic:
                cls.members.append(w)
                cls.witnesses.append(verdict.witness)
                break
        else:
            classes.append(IsoClass([w], [dihedral_group()[0]]))
    return classes


# -- agreement between distance sequences and automorphism orbits ------------


@dataclass
class AgreementReport:
    level: int
    pairs: int
    agree: int
    # ordered vertex pairs with equal distance sequences but no automorphism
    equal_dseq_no_aut: list = field(default_factory=list)
    # ordered vertex pairs related by an automorphism with different sequences
    aut_but_dseq_differs: list = field(default_factory=list)
    # vertices whose naming words disagree on the sequence
    ambiguous_vertices: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.agree == self.pairs and not self.ambiguous_vertices


def vertex_dsequences(level: int) -> dict[tuple[int, int], tuple[int, ...]]:
    """Distance sequence of every vertex of ``Gamma_level`` (via its least word)."""
    g = carpet_graph(level)
    out = {}
    for i in range(g.n_vertices):
        c = g.coord_of(i)
        words = sorted(words_for_coord(c, level), key=lambda u: u.compact)
        out[c] = [d_sequence(u) for u in words]
    return out


def orbit_agreement(level: int) -> AgreementReport:
    """Compare "equal distance sequences" with "same automorphism orbit" on all ordered pairs."""
    g = carpet_graph(level)
    seqs = vertex_dsequences(level)
    auts = automorphisms(g)
    orbit = [set() for _ in range(g.n_vertices)]
    for perm in auts:
        for i, j in enumerate(perm.tolist()):
            orbit[i].add(j)
    rep = AgreementReport(level, 0, 0)
    for c, ss in seqs.items():
        if len(set(ss)) > 1:
            rep.ambiguous_vertices.append(c)
    coords = [g.coord_of(i) for i in range(g.n_vertices)]
    for i, ci in enumerate(coords):
        for j, cj in enumerate(coords):
            same_d = seqs[ci][0] == seqs[cj][0]
            related = j in orbit[i]
            rep.pairs += 1
            if same_d == related:
                rep.agree += 1
            elif same_d:
                rep.equal_dseq_no_aut.append((ci, cj))
            else:
                rep.aut_but_dseq_differs.append((ci, cj))
    return rep
