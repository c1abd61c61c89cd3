"""Reference data for the seven-copy Gordon-Webb-Wolpert pair and a four-copy path.

Copy ``i`` here is copy ``i + 1`` in the usual 1-based tables.
"""
from __future__ import annotations

import numpy as np

from .algebra import PermGenerators
from .tiling import DiV, Tile, build_div, from_generators

# a four-copy path glued across a, then b, then c
PATH_WORDS = ("", "a", "ba", "cba")
PATH_ACTION = {"a": "(1,2)", "b": "(2,3)", "c": "(3,4)"}

GWW_LEFT_CYCLES = {"a": "(4,6)(5,7)", "b": "(3,5)(2,4)", "c": "(1,2)(5,6)"}
GWW_RIGHT_CYCLES = {"a": "(3,7)(2,6)", "b": "(3,5)(2,4)", "c": "(1,2)(5,6)"}

GWW_LEFT_WORDS = ("", "c", "bcabc", "bc", "cabc", "abc", "acabc")
GWW_RIGHT_WORDS = ("", "c", "bcac", "bc", "cac", "ac", "abcac")

W_LEFT = np.array([1, -1, -1, 1, 1, -1, -1])
W_RIGHT = np.array([1, -1, 1, 1, -1, 1, -1])

X_LEFT = np.array([
    [1, 1, 0, 0, 0, 0, 0],
    [1, 2, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 0, 0],
    [0, 1, 0, 2, 0, 1, 0],
    [0, 0, 1, 0, 3, 1, 1],
    [0, 0, 0, 1, 1, 2, 0],
    [0, 0, 0, 0, 1, 0, 1],
])
X_RIGHT = np.array([
    [1, 1, 0, 0, 0, 0, 0],
    [1, 3, 0, 1, 0, 1, 0],
    [0, 0, 2, 0, 1, 0, 1],
    [0, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 2, 1, 0],
    [0, 1, 0, 0, 1, 2, 0],
    [0, 0, 1, 0, 0, 0, 1],
])

# reference incidence matrices; they are not incidence matrices of the volumes
# (Q_LEFT_REFERENCE has a zero row) and Q Q^T differs from X
Q_LEFT_REFERENCE = np.array([
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 1, 1],
    [1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [1, 0, 0, 0, 0, 0],
])
Q_RIGHT_REFERENCE = np.array([
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 1],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 0],
    [1, 1, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 0, 0],
])

# internal-side map between the two volumes, unnormalised (U^T U = 2 I)
U_SIDES = np.array([
    [0, 0, 0, 1, 0, -1],
    [0, 1, 0, 0, 1, 0],
    [1, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 1],
    [-1, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, -1, 0],
])

M_REFERENCE_A = np.array([
    [0, 1, 0, -1, 0, -1, 0],
    [1, 0, 0, 1, -1, 0, 0],
    [0, 0, 1, 1, 0, 0, -1],
    [-1, 1, -1, 0, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 1],
    [1, 0, 0, 0, 0, 1, -1],
    [0, 0, 1, 0, -1, 1, 0],
])
M_REFERENCE_B = np.array([
    [1, 0, 1, 0, -1, 0, -1],
    [0, 1, -1, 0, 0, -1, 1],
    [-1, 1, 0, 0, 1, -1, 0],
    [0, 0, 0, 1, -1, 1, -1],
    [1, 0, 1, 1, 0, 1, 0],
    [0, 1, -1, -1, 1, 0, 0],
    [-1, 1, 0, -1, 0, 0, 1],
])
# the reference combination 3/7 A + 4/7 B
M_REFERENCE = 3 / 7 * M_REFERENCE_A + 4 / 7 * M_REFERENCE_B

X_SPECTRUM = (0.0, 0.225377, 1.0, 1.0, 2.18589, 3.36041, 4.22833)

# census figures as stated for seven regular triangles
STATED_CENSUS_CLASSES = 25
STATED_GROUP_ORDERS = {5040: 12, 2520: 10, 168: 3}
STATED_GWW_GROUP_ORDER = 2520


def two_parameter_family(a: float, b: float) -> np.ndarray:
    """The two-parameter family of maps from right-volume data to left-volume data."""
    return np.array([
        [a, b, a, -b, -a, -b, -a],
        [b, a, -a, b, -b, -a, a],
        [-a, a, b, b, a, -a, -b],
        [-b, b, -b, a, -a, a, -a],
        [a, b, a, a, b, a, b],
        [b, a, -a, -a, a, b, -b],
        [-a, a, b, -a, -b, b, a],
    ], dtype=float)


def gww_generators() -> tuple[PermGenerators, PermGenerators]:
    left = PermGenerators.from_cycles(7, **GWW_LEFT_CYCLES)
    right = PermGenerators.from_cycles(7, **GWW_RIGHT_CYCLES)
    return left, right


def gww_pair(tile: Tile | None = None) -> tuple[DiV, DiV]:
    """Both volumes, copy indices matching the generator tables."""
    tile = tile or Tile.equilateral()
    left, right = gww_generators()
    return from_generators(tile, left.as_dict()), from_generators(tile, right.as_dict())


def path_div(tile: Tile | None = None) -> DiV:
    return build_div(tile or Tile.equilateral(), PATH_WORDS)


def scalene_tile() -> Tile:
    """Acute scalene tile (angles 50, 60, 70 degrees)."""
    return Tile.from_angles(50.0, 60.0)
