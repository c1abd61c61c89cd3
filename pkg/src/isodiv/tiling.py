"""Reflective gluing of a labelled triangle tile into discretized volumes.

Gluing words are strings over ``{a, b, c}``.  The rightmost letter is the
first gluing: ``"cba"`` glues a copy across side ``a`` of the base tile, a
second copy across side ``b`` of that copy and a third across side ``c`` of
the second.  The empty word (also written ``"e"``) is the base tile.

If ``g`` places a copy and ``R_s`` is the reflection of the reference tile
across its side ``s``, the copy glued across side ``s`` is placed by
``g o R_s``.  Equivalently ``g o R_s o g^-1`` is the reflection of the plane
across the image of side ``s``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import GluingError, OutOfCopy, OverlapError, TileMismatch, WordError

EPS = 1e-9
# grid used when serialising geometry into hashable keys (relative to diameter)
KEY_QUANTUM = 1e-6


class SideLabel(str, enum.Enum):
    A = "a"
    B = "b"
    C = "c"

    @property
    def index(self) -> int:
        return "abc".index(self.value)

    @classmethod
    def parse(cls, value) -> "SideLabel":
        if isinstance(value, SideLabel):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown side label {value!r}") from None

    def __str__(self):
        return self.value


LABELS = (SideLabel.A, SideLabel.B, SideLabel.C)


@dataclass(frozen=True, eq=False)
class Isometry:
    """Plane isometry ``x -> linear @ x + translation``."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float).reshape(2, 2)
        tr = np.array(self.translation, dtype=float).reshape(2)
        lin.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def reflection(cls, p, q) -> "Isometry":
        """Reflection across the line through ``p`` and ``q``."""
        p = np.asarray(p, dtype=float)
        d = np.asarray(q, dtype=float) - p
        d = d / np.hypot(*d)
        lin = 2.0 * np.outer(d, d) - np.eye(2)
        return cls(lin, p - lin @ p)

    @classmethod
    def rotation(cls, theta: float, center=(0.0, 0.0)) -> "Isometry":
        c, s = math.cos(theta), math.sin(theta)
        lin = np.array([[c, -s], [s, c]])
        center = np.asarray(center, dtype=float)
        return cls(lin, center - lin @ center)

    @classmethod
    def translation_by(cls, v) -> "Isometry":
        return cls(np.eye(2), v)

    @classmethod
    def from_points(cls, src, dst, tol: float = 1e-7) -> "Isometry | None":
        """Isometry mapping the three points ``src`` onto ``dst``, if one exists."""
        src = np.asarray(src, dtype=float)
        dst = np.asarray(dst, dtype=float)
        es = np.column_stack([src[1] - src[0], src[2] - src[0]])
        ed = np.column_stack([dst[1] - dst[0], dst[2] - dst[0]])
        lin = ed @ np.linalg.inv(es)
        scale = max(1.0, float(np.abs(es).max()))
        if np.abs(lin.T @ lin - np.eye(2)).max() > tol * scale:
            return None
        return cls(lin, dst[0] - lin @ src[0])

    @property
    def orientation(self) -> int:
        return 1 if np.linalg.det(self.linear) > 0 else -1

    def __call__(self, points):
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.translation

    def __matmul__(self, other: "Isometry") -> "Isometry":
        # (self o other)(x) = self(other(x))
        return Isometry(self.linear @ other.linear,
                        self.linear @ other.translation + self.translation)

    def inverse(self) -> "Isometry":
        lin = self.linear.T
        return Isometry(lin, -(lin @ self.translation))

    def is_orthogonal(self, tol: float = 1e-12) -> bool:
        return bool(np.abs(self.linear.T @ self.linear - np.eye(2)).max() <= tol)

    def close_to(self, other: "Isometry", tol: float = 1e-12) -> bool:
        return bool(np.abs(self.linear - other.linear).max() <= tol
                    and np.abs(self.translation - other.translation).max() <= tol)

    def as_matrix(self) -> np.ndarray:
        """Homogeneous 3x3 matrix acting on column vectors ``(x1, x2, 1)``."""
        m = np.eye(3)
        m[:2, :2] = self.linear
        m[:2, 2] = self.translation
        return m

    def __repr__(self):
        return (f"Isometry(linear={self.linear.round(12).tolist()}, "
                f"translation={self.translation.round(12).tolist()})")


@dataclass(frozen=True)
class Tile:
    """Triangle with labelled sides; side ``i`` is the side opposite vertex ``i``."""

    vertices: tuple
    side_labels: tuple = LABELS

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        if len(verts) != 3:
            raise ValueError("a tile has exactly three vertices")
        labels = tuple(SideLabel.parse(s) for s in self.side_labels)
        if sorted(labels) != sorted(LABELS):
            raise ValueError("side labels must use a, b and c exactly once")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "side_labels", labels)
        if abs(self.signed_area) <= EPS * self.diameter ** 2:
            raise ValueError("degenerate tile (zero area)")

    @classmethod
    def equilateral(cls, side: float = 1.0) -> "Tile":
        return cls(((0.0, 0.0), (side, 0.0), (side / 2, side * math.sqrt(3) / 2)))

    @classmethod
    def from_angles(cls, alpha: float, beta: float, base: float = 1.0) -> "Tile":
        """Tile with interior angles ``alpha`` at vertex 0 and ``beta`` at vertex 1 (degrees)."""
        a, b = math.radians(alpha), math.radians(beta)
        gamma = math.pi - a - b
        if gamma <= 0:
            raise ValueError("angles do not form a triangle")
        # law of sines: side from vertex 0 to vertex 2 is opposite vertex 1
        d02 = base * math.sin(b) / math.sin(gamma)
        return cls(((0.0, 0.0), (base, 0.0), (d02 * math.cos(a), d02 * math.sin(a))))

    @cached_property
    def points(self) -> np.ndarray:
        pts = np.array(self.vertices)
        pts.setflags(write=False)
        return pts

    @cached_property
    def signed_area(self) -> float:
        (x0, y0), (x1, y1), (x2, y2) = self.vertices
        return 0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @cached_property
    def diameter(self) -> float:
        p = self.points
        return max(float(np.hypot(*(p[i] - p[j]))) for i in range(3) for j in range(i))

    def side_index(self, label) -> int:
        return self.side_labels.index(SideLabel.parse(label))

    def side_vertices(self, label) -> tuple[int, int]:
        i = self.side_index(label)
        return ((i + 1) % 3, (i + 2) % 3)

    def side_length(self, label) -> float:
        u, v = self.side_vertices(label)
        return float(np.hypot(*(self.points[u] - self.points[v])))

    @cached_property
    def _reflections(self) -> dict:
        out = {}
        for lab in LABELS:
            u, v = self.side_vertices(lab)
            out[lab] = Isometry.reflection(self.points[u], self.points[v])
        return out

    def reflection(self, label) -> Isometry:
        """Reflection across side ``label`` in tile-local coordinates."""
        return self._reflections[SideLabel.parse(label)]

    def kind(self, tol: float = 1e-9) -> str:
        """``"equilateral"``, ``"isosceles"`` or ``"scalene"``."""
        lengths = sorted(self.side_length(s) for s in LABELS)
        eq = [abs(lengths[i + 1] - lengths[i]) <= tol * self.diameter for i in range(2)]
        if all(eq):
            return "equilateral"
        return "isosceles" if any(eq) else "scalene"

    def symmetries(self, tol: float = 1e-9) -> list[tuple[Isometry, tuple[int, int, int]]]:
        """Isometries mapping the tile onto itself, with the induced vertex permutation.

        The identity always comes first.
        """
        out = []
        for perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)):
            iso = Isometry.from_points(self.points, self.points[list(perm)], tol)
            if iso is not None:
                out.append((iso, perm))
        return out

    def congruent_to(self, other: "Tile", respect_labels: bool = True,
                     tol: float = EPS) -> bool:
        scale = max(self.diameter, other.diameter)
        if respect_labels:
            return all(abs(self.side_length(s) - other.side_length(s)) <= tol * scale
                       for s in LABELS)
        a = sorted(self.side_length(s) for s in LABELS)
        b = sorted(other.side_length(s) for s in LABELS)
        return all(abs(x - y) <= tol * scale for x, y in zip(a, b))

    def barycentric(self, points) -> np.ndarray:
        """Barycentric coordinates (vertex order) of points in local coordinates."""
        p = self.points
        t = np.column_stack([p[1] - p[0], p[2] - p[0]])
        rel = np.atleast_2d(np.asarray(points, dtype=float)) - p[0]
        l12 = np.linalg.solve(t, rel.T).T
        return np.column_stack([1.0 - l12.sum(axis=1), l12])


def parse_word(word) -> str:
    """Normalise a gluing word; ``"e"`` and ``""`` denote the identity."""
    if isinstance(word, (list, tuple)):
        word = "".join(SideLabel.parse(s).value for s in word)
    w = str(word).strip().lower()
    if w == "e":
        return ""
    bad = set(w) - set("abc")
    if bad:
        raise WordError(f"word {word!r} contains letters outside a, b, c")
    return w


def word_isometry(tile: Tile, word: str) -> Isometry:
    g = Isometry.identity()
    for ch in reversed(parse_word(word)):
        g = g @ tile.reflection(ch)
    return g


@dataclass(frozen=True, eq=False)
class Placement:
    tile: Tile
    copy_index: int
    word: str
    isometry: Isometry

    @property
    def orientation(self) -> int:
        return self.isometry.orientation

    @cached_property
    def vertices(self) -> np.ndarray:
        v = self.isometry(self.tile.points)
        v.setflags(write=False)
        return v

    def side_segment(self, label) -> np.ndarray:
        u, v = self.tile.side_vertices(label)
        return self.vertices[[u, v]]

    def coincides(self, other: "Placement", tol: float) -> bool:
        return bool(np.abs(self.vertices - other.vertices).max() <= tol)

    def same_image(self, other: "Placement", tol: float) -> bool:
        """Images agree as point sets, labels ignored."""
        for perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)):
            if np.abs(self.vertices - other.vertices[list(perm)]).max() <= tol:
                return True
        return False


def reflect_across_side(p: Placement, s) -> Placement:
    """Copy glued to ``p`` across its side ``s``; the word gains ``s`` on the left."""
    s = SideLabel.parse(s)
    return replace(p, word=s.value + p.word, isometry=p.isometry @ p.tile.reflection(s))


class InternalSide(NamedTuple):
    i: int
    j: int
    label: SideLabel


class ExternalSide(NamedTuple):
    copy: int
    label: SideLabel


class Violation(NamedTuple):
    i: int
    j: int
    kind: str   # "overlap", "label-conflict", "side-conflict" or "coincident"


@dataclass(frozen=True, eq=False)
class DiV:
    """A discretized volume: copies of one tile glued along matching sides."""

    tile: Tile
    placements: tuple
    internal_sides: tuple
    external_sides: tuple
    words: tuple = ()

    @property
    def n(self) -> int:
        return len(self.placements)

    @property
    def k(self) -> int:
        return len(self.internal_sides)

    @cached_property
    def _neighbors(self) -> dict:
        nb = {}
        for i, j, lab in self.internal_sides:
            nb[(i, lab)] = j
            nb[(j, lab)] = i
        return nb

    def neighbor(self, copy: int, label) -> int | None:
        return self._neighbors.get((copy, SideLabel.parse(label)))

    def external_counts(self) -> dict:
        counts = {lab: 0 for lab in LABELS}
        for _, lab in self.external_sides:
            counts[lab] += 1
        return counts

    def __repr__(self):
        return f"DiV(n={self.n}, k={self.k}, words={list(self.words)})"


# -- geometric predicates ---------------------------------------------------

def _overlap_depth(p: np.ndarray, q: np.ndarray) -> float:
    """Smallest interval overlap over the separating axes of two triangles.

    Positive means the interiors intersect (by at least that much along every
    candidate axis); zero or negative means they are separated or only touch.
    """
    best = math.inf
    for tri in (p, q):
        for k in range(3):
            ex = tri[(k + 1) % 3][0] - tri[k][0]
            ey = tri[(k + 1) % 3][1] - tri[k][1]
            nrm = math.hypot(ex, ey)
            ax, ay = -ey / nrm, ex / nrm
            pp = [ax * x + ay * y for x, y in p]
            qq = [ax * x + ay * y for x, y in q]
            depth = min(max(pp), max(qq)) - max(min(pp), min(qq))
            if depth < best:
                best = depth
                if best <= 0:
                    return best
    return best


def interiors_overlap(p: Placement, q: Placement, eps: float = EPS) -> bool:
    tol = eps * p.tile.diameter
    c = np.abs(p.vertices.mean(axis=0) - q.vertices.mean(axis=0)).max()
    if c > 2 * p.tile.diameter:
        return False
    return _overlap_depth(p.vertices.tolist(), q.vertices.tolist()) > tol


def _find_sides(tile: Tile, placements: Sequence[Placement], eps: float):
    tol = eps * tile.diameter
    n = len(placements)
    segs = {}
    for p in placements:
        for lab in LABELS:
            segs[(p.copy_index, lab)] = p.side_segment(lab)
    internal = []
    seen = set()
    for a in range(n):
        pa = placements[a]
        for b in range(a + 1, n):
            pb = placements[b]
            if np.abs(pa.vertices.mean(axis=0) - pb.vertices.mean(axis=0)).max() > 2 * tile.diameter:
                continue
            if pa.same_image(pb, tol):
                continue
            for la in LABELS:
                sa = segs[(a, la)]
                for lb in LABELS:
                    sb = segs[(b, lb)]
                    direct = np.abs(sa - sb).max() <= tol
                    flipped = np.abs(sa - sb[::-1]).max() <= tol
                    if not (direct or flipped):
                        continue
                    if la != lb or not direct:
                        raise GluingError(
                            f"side {la} of copy {a} meets side {lb} of copy {b} "
                            "with inconsistent labels or vertex order")
                    for key in ((a, la), (b, lb)):
                        if key in seen:
                            raise GluingError(f"side {key[1]} of copy {key[0]} is shared "
                                              "by more than two copies")
                        seen.add(key)
                    internal.append(InternalSide(a, b, la))
    external = [ExternalSide(p.copy_index, lab)
                for p in placements for lab in LABELS if (p.copy_index, lab) not in seen]
    internal.sort(key=lambda s: (s.i, s.label.index, s.j))
    return tuple(internal), tuple(external)


def from_placements(tile: Tile, placements: Iterable, words: Sequence[str] | None = None,
                    eps: float = EPS) -> DiV:
    """Assemble a DiV from explicit placements (isometries or Placement objects).

    No realizability check is made here; see :func:`check_realizable`.
    """
    pl = []
    for idx, item in enumerate(placements):
        if isinstance(item, Placement):
            pl.append(replace(item, tile=tile, copy_index=idx))
        else:
            pl.append(Placement(tile, idx, "", item))
    internal, external = _find_sides(tile, pl, eps)
    if words is None:
        words = tuple(p.word for p in pl)
    return DiV(tile, tuple(pl), internal, external, tuple(words))


def build_div(tile: Tile, words: Sequence, eps: float = EPS) -> DiV:
    """Glue copies of ``tile`` following a tree of gluing words.

    ``words[0]`` must be the identity and every later word must extend an
    earlier one by a single letter on the left.  Copies landing exactly on an
    existing copy are merged; partial overlaps raise :class:`OverlapError`.
    """
    words = [parse_word(w) for w in words]
    if not words or words[0] != "":
        raise WordError("the first word must be the identity 'e'")
    tol = eps * tile.diameter
    base = Placement(tile, 0, "", Isometry.identity())
    placements = [base]
    copy_of = {"": 0}
    for w in words[1:]:
        if w in copy_of:
            continue
        parent = w[1:]
        if parent not in copy_of:
            raise WordError(f"word {w!r} does not extend an earlier word")
        cand = reflect_across_side(placements[copy_of[parent]], w[0])
        hit = None
        for p in placements:
            if cand.coincides(p, tol):
                hit = p.copy_index
                break
            if cand.same_image(p, tol):
                raise GluingError(f"word {w!r} lands on copy {p.copy_index} with permuted labels")
            if interiors_overlap(cand, p, eps):
                raise OverlapError(len(placements), p.copy_index,
                                   f"word {w!r} overlaps copy {p.copy_index}")
        if hit is None:
            hit = len(placements)
            placements.append(replace(cand, copy_index=hit, word=w))
        copy_of[w] = hit
    internal, external = _find_sides(tile, placements, eps)
    return DiV(tile, tuple(placements), internal, external, tuple(words))


def from_generators(tile: Tile, generators: Mapping, eps: float = EPS) -> DiV:
    """Build the DiV whose copy ``i`` is point ``i`` of a permutation triple.

    ``generators`` maps each label to a 0-based permutation (sequence).  The
    copies are reached by breadth-first search from copy 0 and renumbered so
    the DiV's copy indices equal the permutation points.
    """
    perms = {SideLabel.parse(k): list(v) for k, v in generators.items()}
    n = len(next(iter(perms.values())))
    word = {0: ""}
    order = [0]
    for u in order:
        for lab in LABELS:
            v = perms.get(lab, list(range(n)))[u]
            if v != u and v not in word:
                word[v] = lab.value + word[u]
                order.append(v)
    if len(order) != n:
        raise WordError("permutation triple is not transitive")
    div = build_div(tile, [word[v] for v in order], eps)
    if div.n != n:
        raise GluingError("distinct points of the triple land on the same copy")
    return renumber(div, order)


def renumber(div: DiV, order: Sequence[int]) -> DiV:
    """Renumber copies so that the copy currently at position ``t`` becomes ``order[t]``."""
    inv = [0] * div.n
    for t, new in enumerate(order):
        inv[new] = t
    pl = tuple(replace(div.placements[inv[c]], copy_index=c) for c in range(div.n))
    internal = sorted(
        (InternalSide(min(order[i], order[j]), max(order[i], order[j]), lab)
         for i, j, lab in div.internal_sides),
        key=lambda s: (s.i, s.label.index, s.j))
    external = sorted((ExternalSide(order[c], lab) for c, lab in div.external_sides),
                      key=lambda s: (s.copy, s.label.index))
    # a tree word list stays valid in any order that keeps parents first
    words = sorted(div.words, key=lambda w: (len(w), w))
    return DiV(div.tile, pl, tuple(internal), tuple(external), tuple(words))


def check_realizable(div: DiV, eps: float = EPS, include_coincident: bool = False) -> list:
    """Pairs of copies violating the disjoint-or-coincident rule.

    Coincident copies are allowed and only listed when ``include_coincident``.
    """
    tol = eps * div.tile.diameter
    out = []
    pl = div.placements
    for a in range(len(pl)):
        for b in range(a + 1, len(pl)):
            if pl[a].coincides(pl[b], tol):
                if include_coincident:
                    out.append(Violation(a, b, "coincident"))
            elif pl[a].same_image(pl[b], tol):
                out.append(Violation(a, b, "label-conflict"))
            elif interiors_overlap(pl[a], pl[b], eps):
                out.append(Violation(a, b, "overlap"))
            else:
                for la in LABELS:
                    for lb in LABELS:
                        sa, sb = pl[a].side_segment(la), pl[b].side_segment(lb)
                        if (np.abs(sa - sb).max() <= tol or np.abs(sa - sb[::-1]).max() <= tol) \
                                and not (la == lb and np.abs(sa - sb).max() <= tol):
                            out.append(Violation(a, b, "side-conflict"))
    return out


# -- equivalence ------------------------------------------------------------

def _labeled_triples(div: DiV) -> np.ndarray:
    """Vertices of every copy ordered by the label of the opposite side."""
    order = [div.tile.side_index(lab) for lab in LABELS]
    return np.stack([p.vertices[order] for p in div.placements])


def _quantize(points: np.ndarray, scale: float) -> tuple:
    q = KEY_QUANTUM * scale
    return tuple(int(v) for v in np.rint(np.asarray(points).ravel() / q))


def _figure_keys(triples: np.ndarray, iso: Isometry, scale: float, respect_labels: bool):
    keys = []
    for tri in triples:
        img = iso(tri)
        if respect_labels:
            keys.append(_quantize(img, scale))
        else:
            keys.append(tuple(sorted(_quantize(pt, scale) for pt in img)))
    return tuple(sorted(keys))


def canonical_key(div: DiV, respect_labels: bool = True) -> tuple:
    """Serialised geometry, minimised over isometries moving a copy onto the tile.

    Two DiVs built from the same tile are equivalent exactly when their keys
    are equal (up to the quantisation grid).
    """
    scale = div.tile.diameter
    triples = _labeled_triples(div)
    syms = [Isometry.identity()] if respect_labels else [s for s, _ in div.tile.symmetries()]
    best = None
    for p in div.placements:
        ginv = p.isometry.inverse()
        for s in syms:
            key = _figure_keys(triples, s @ ginv, scale, respect_labels)
            if best is None or key < best:
                best = key
    return best


def div_equivalent(v1: DiV, v2: DiV, eps: float = EPS,
                   respect_labels: bool = True) -> Isometry | None:
    """Isometry carrying ``v1`` onto ``v2`` copy by copy, or ``None``.

    With ``respect_labels`` the side labels must be preserved; otherwise only
    the geometric figures are compared, so tile self-symmetries count.
    Reflections of the plane are always admissible.
    """
    if not v1.tile.congruent_to(v2.tile, respect_labels, eps):
        raise TileMismatch("tiles are not congruent")
    if v1.n != v2.n or v1.k != v2.k:
        return None
    scale = max(v1.tile.diameter, v2.tile.diameter)
    tol = 1e-7
    t1, t2 = _labeled_triples(v1), _labeled_triples(v2)
    if respect_labels:
        perms = [(0, 1, 2)]
    else:
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
    target = _figure_keys(t2, Isometry.identity(), scale, respect_labels)
    for q in range(v2.n):
        for perm in perms:
            g = Isometry.from_points(t1[0], t2[q][list(perm)], tol)
            if g is None:
                continue
            if _figure_keys(t1, g, scale, respect_labels) == target:
                return g
    return None


# -- derived volumes ----------------------------------------------------------

def transform(div: DiV, iso: Isometry) -> DiV:
    """Image of ``div`` under a global isometry (labels carried along)."""
    pl = tuple(replace(p, isometry=iso @ p.isometry) for p in div.placements)
    return DiV(div.tile, pl, div.internal_sides, div.external_sides, div.words)


def _swap_word(word: str, x: SideLabel, y: SideLabel) -> str:
    return word.translate(str.maketrans({x.value: y.value, y.value: x.value}))


def relabel_swap(div: DiV, x, y, eps: float = EPS) -> DiV:
    """Rebuild ``div`` from its gluing words with letters ``x`` and ``y`` exchanged."""
    x, y = SideLabel.parse(x), SideLabel.parse(y)
    words = div.words or tuple(p.word for p in div.placements)
    return build_div(div.tile, [_swap_word(w, x, y) for w in words], eps)


def swap_labels(div: DiV, x, y) -> DiV:
    """Same geometry with the names of sides ``x`` and ``y`` exchanged."""
    x, y = SideLabel.parse(x), SideLabel.parse(y)
    swap = {x: y, y: x}
    tile = Tile(div.tile.vertices, tuple(swap.get(s, s) for s in div.tile.side_labels))
    pl = tuple(replace(p, tile=tile, word=_swap_word(p.word, x, y)) for p in div.placements)
    internal = sorted((InternalSide(i, j, swap.get(l, l)) for i, j, l in div.internal_sides),
                      key=lambda s: (s.i, s.label.index, s.j))
    external = tuple(ExternalSide(c, swap.get(l, l)) for c, l in div.external_sides)
    words = tuple(_swap_word(w, x, y) for w in div.words)
    return DiV(tile, pl, tuple(internal), external, words)


# -- coordinates --------------------------------------------------------------

def to_local(div: DiV, copy: int, x, eps: float = EPS) -> np.ndarray:
    """Tile-local coordinates of a global point lying in the given copy."""
    pt = np.asarray(x, dtype=float)
    xi = div.placements[copy].isometry.inverse()(pt)
    bary = div.tile.barycentric(xi)
    if bary.min() < -eps * max(1.0, div.tile.diameter):
        raise OutOfCopy(f"point {pt.tolist()} is outside copy {copy}")
    return xi


def to_global(div: DiV, copy: int, xi) -> np.ndarray:
    return div.placements[copy].isometry(np.asarray(xi, dtype=float))
