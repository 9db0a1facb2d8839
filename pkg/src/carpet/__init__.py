"""Sierpinski carpet graphs, their vertex addresses and isomorphism classes."""

__version__ = "0.1.0"

from .errors import CarpetError, InvalidArgument, ResourceLimitError, WordSyntaxError
from .words import (
    FiniteWord, GroupElement, InfiniteWord, TailSequence, apply, cofinal, dihedral_group,
    letter_at, parse_word, prefix,
)
from .addressing import (
    Side, boundary_sides, canonical_word, cell_kept, is_corner, model_layout, root_coord,
    same_vertex, word_to_coord,
)
from .graph import (
    CarpetGraph, bfs_distance, boundary, build_cells, build_recursive, d_sequence,
    degree_histogram, internal_boundary, vertex_count_closed_form,
)
from .balls import RootedBall, ball_at_level, limit_ball, side_fates, stabilization_level
from .iso import (
    IsoVerdict, automorphisms, classify, find_witness_radius, graph_iso_bruteforce,
    rooted_iso_finite, unrooted_iso,
)
