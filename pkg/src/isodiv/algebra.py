"""Combinatorial descriptors of a glued volume.

Everything here is integer valued: the colored copy graph, the three
involutions it induces, adjacency ``A``, auxiliary ``X = D + A`` and the
copy/side incidence ``Q`` with ``X = Q Q^T``.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DivError, GeometryError, SizeGuard
from .tiling import LABELS, DiV, SideLabel

MAX_GROUP_N = 10
MAX_ISO_N = 12


@dataclass(frozen=True)
class ColoredGraph:
    """Copies as vertices, internal sides as edges coloured by side label."""

    n: int
    edges: tuple = ()

    def __post_init__(self):
        norm = []
        used = set()
        for i, j, lab in self.edges:
            lab = SideLabel.parse(lab)
            i, j = int(i), int(j)
            if i == j:
                raise ValueError("self-loops are not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError("edge endpoint out of range")
            i, j = min(i, j), max(i, j)
            for key in ((i, lab), (j, lab)):
                if key in used:
                    raise ValueError(f"vertex {key[0]} has two {key[1]}-edges")
                used.add(key)
            norm.append((i, j, lab))
        norm.sort(key=lambda e: (e[0], e[2].index, e[1]))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def k(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[dict]:
        """``nb[v][label] = u`` for each edge."""
        nb = [dict() for _ in range(self.n)]
        for i, j, lab in self.edges:
            nb[i][lab] = j
            nb[j][lab] = i
        return nb

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def color_counts(self) -> tuple[int, int, int]:
        counts = [0, 0, 0]
        for _, _, lab in self.edges:
            counts[lab.index] += 1
        return tuple(counts)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        nb = self.neighbors()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in nb[v].values():
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return self.is_connected() and self.k == self.n - 1

    def to_dot(self, name: str = "div", one_based: bool = True) -> str:
        off = 1 if one_based else 0
        lines = [f"graph {name} {{"]
        lines += [f"  {v + off};" for v in range(self.n)]
        for i, j, lab in self.edges:
            lines.append(f'  {i + off} -- {j + off} [color="{lab.value}", label="{lab.value}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PermGenerators:
    """The involutions ``a``, ``b``, ``c`` acting on copy indices (0-based)."""

    a: tuple
    b: tuple
    c: tuple

    def __post_init__(self):
        n = len(self.a)
        for lab in "abc":
            p = tuple(int(x) for x in getattr(self, lab))
            if len(p) != n or sorted(p) != list(range(n)):
                raise ValueError(f"generator {lab} is not a permutation of 0..{n - 1}")
            if any(p[p[i]] != i for i in range(n)):
                raise ValueError(f"generator {lab} is not an involution")
            object.__setattr__(self, lab, p)

    @property
    def n(self) -> int:
        return len(self.a)

    def __getitem__(self, label) -> tuple:
        return getattr(self, SideLabel.parse(label).value)

    def as_dict(self) -> dict:
        return {lab: self[lab] for lab in LABELS}

    @classmethod
    def identity(cls, n: int) -> "PermGenerators":
        e = tuple(range(n))
        return cls(e, e, e)

    @classmethod
    def from_cycles(cls, n: int, a: str = "", b: str = "", c: str = "",
                    one_based: bool = True) -> "PermGenerators":
        """Parse cycle notation such as ``"(1,2)(5,6)"``."""
        return cls(*(_parse_cycles(n, s, one_based) for s in (a, b, c)))

    def cycles(self, label, one_based: bool = True) -> str:
        p = self[label]
        off = 1 if one_based else 0
        out = []
        for i in range(self.n):
            if p[i] > i:
                out.append(f"({i + off},{p[i] + off})")
        return "".join(out) or "()"

    def __str__(self):
        return ", ".join(f"{lab}={self.cycles(lab)}" for lab in "abc")


def _parse_cycles(n: int, text: str, one_based: bool) -> tuple:
    perm = list(range(n))
    off = 1 if one_based else 0
    for grp in re.findall(r"\(([^)]*)\)", text or ""):
        pts = [int(t) - off for t in grp.replace(" ", "").split(",") if t]
        for k, x in enumerate(pts):
            perm[x] = pts[(k + 1) % len(pts)]
    return tuple(perm)


def graph_of(div: DiV) -> ColoredGraph:
    return ColoredGraph(div.n, tuple((s.i, s.j, s.label) for s in div.internal_sides))


def _graph(obj) -> ColoredGraph:
    if isinstance(obj, ColoredGraph):
        return obj
    if isinstance(obj, PermGenerators):
        return graph_from_generators(obj)
    return graph_of(obj)


def generators_of(obj) -> PermGenerators:
    """Involutions swapping copies glued along each label; external sides are fixed points."""
    g = _graph(obj)
    perms = {lab: list(range(g.n)) for lab in LABELS}
    for i, j, lab in g.edges:
        perms[lab][i] = j
        perms[lab][j] = i
    return PermGenerators(*(tuple(perms[lab]) for lab in LABELS))


def graph_from_generators(gens: PermGenerators) -> ColoredGraph:
    edges = [(i, gens[lab][i], lab) for lab in LABELS for i in range(gens.n) if gens[lab][i] > i]
    return ColoredGraph(gens.n, tuple(edges))


def group_elements(gens: PermGenerators | Sequence, limit_n: int = MAX_GROUP_N) -> set:
    """All elements of the generated group as byte strings (image of 0..n-1)."""
    perms = list(gens.as_dict().values()) if isinstance(gens, PermGenerators) else list(gens)
    n = len(perms[0]) if perms else 0
    if n > limit_n:
        raise SizeGuard(f"group closure limited to {limit_n} points (got {n})")
    gen_bytes = [bytes(p) for p in perms]
    ident = bytes(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gen_bytes:
                h = bytes(map(s.__getitem__, g))    # h[i] = s[g[i]]
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def group_order(gens: PermGenerators, limit_n: int = MAX_GROUP_N) -> int:
    """Order of the group generated by ``a``, ``b``, ``c`` by breadth-first closure."""
    return len(group_elements(gens, limit_n))


def adjacency(obj) -> np.ndarray:
    g = _graph(obj)
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for i, j, _ in g.edges:
        a[i, j] += 1
        a[j, i] += 1
    return a


def auxiliary(obj) -> np.ndarray:
    """``X = D + A``: degrees on the diagonal, adjacency off it."""
    a = adjacency(obj)
    return a + np.diag(a.sum(axis=1))


@dataclass(frozen=True, eq=False)
class StructuralMatrix:
    """Copy by internal-side incidence matrix; columns keyed ``(i, j, label)``."""

    entries: np.ndarray
    column_keys: tuple

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def shape(self):
        return self.entries.shape

    def gram(self) -> np.ndarray:
        return self.entries @ self.entries.T


def structural(obj) -> StructuralMatrix:
    """Incidence matrix ``Q`` (N x K) with columns ordered by (smaller copy, label)."""
    g = _graph(obj)
    q = np.zeros((g.n, g.k), dtype=np.int64)
    for col, (i, j, _) in enumerate(g.edges):
        q[i, col] = 1
        q[j, col] = 1
    return StructuralMatrix(q, g.edges)


def orientation_coloring(div: DiV) -> np.ndarray:
    """``w[i] = +1`` for copies with the tile's orientation and ``-1`` otherwise."""
    if div.n < 1:
        raise DivError("empty volume")
    w = np.array([p.orientation for p in div.placements], dtype=np.int64)
    if np.any(auxiliary(div) @ w):
        raise GeometryError("glued copies share an orientation; X w != 0")
    return w


def bipartite_coloring(obj) -> np.ndarray:
    """Two-colouring from the graph alone (copy 0 gets +1), for graphs without geometry."""
    g = _graph(obj)
    nb = g.neighbors()
    w = np.zeros(g.n, dtype=np.int64)
    for root in range(g.n):
        if w[root]:
            continue
        w[root] = 1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in nb[v].values():
                if w[u] == 0:
                    w[u] = -w[v]
                    queue.append(u)
                elif w[u] == w[v]:
                    raise GeometryError("graph is not bipartite")
    return w


# -- isomorphism ----------------------------------------------------------------

ISO_MODES = ("exact", "permute", "uncolored")


def colored_iso(g1: ColoredGraph, g2: ColoredGraph, mode: str = "exact"):
    """Find a vertex bijection ``f`` and a label map ``sigma`` with
    ``(i, j, l)`` an edge of ``g1`` iff ``(f[i], f[j], sigma[l])`` is an edge of ``g2``.

    ``mode`` is ``"exact"`` (sigma = identity), ``"permute"`` (any sigma) or
    ``"uncolored"`` (colours ignored; sigma is ``None``).  Returns
    ``(f, sigma)`` or ``None``.
    """
    if mode not in ISO_MODES:
        raise ValueError(f"mode must be one of {ISO_MODES}")
    if max(g1.n, g2.n) > MAX_ISO_N:
        raise SizeGuard(f"isomorphism search limited to {MAX_ISO_N} vertices")
    if g1.n != g2.n or g1.k != g2.k:
        return None
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return None
    if mode == "uncolored":
        f = _backtrack_uncolored(g1, g2)
        return None if f is None else (f, None)
    sigmas = [dict(zip(LABELS, LABELS))] if mode == "exact" else \
        [dict(zip(LABELS, p)) for p in itertools.permutations(LABELS)]
    for sigma in sigmas:
        if tuple(g1.color_counts()[l.index] for l in LABELS) != \
                tuple(g2.color_counts()[sigma[l].index] for l in LABELS):
            continue
        f = _backtrack_colored(g1, g2, sigma)
        if f is not None:
            return f, sigma
    return None


def _search_order(g: ColoredGraph) -> list[int]:
    nb = g.neighbors()
    order, seen = [], set()
    for root in sorted(range(g.n), key=lambda v: -len(nb[v])):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for lab in LABELS:
                u = nb[v].get(lab)
                if u is not None and u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order


def _backtrack_colored(g1, g2, sigma):
    nb1, nb2 = g1.neighbors(), g2.neighbors()
    sig1 = [frozenset(sigma[l] for l in nb1[v]) for v in range(g1.n)]
    sig2 = [frozenset(nb2[v]) for v in range(g2.n)]
    order = _search_order(g1)
    f = [-1] * g1.n
    used = [False] * g2.n

    def ok(v, u):
        if sig1[v] != sig2[u]:
            return False
        for lab, w in nb1[v].items():
            if f[w] >= 0 and nb2[u].get(sigma[lab]) != f[w]:
                return False
        return True

    def rec(t):
        if t == len(order):
            return True
        v = order[t]
        # a mapped neighbour pins the image of v uniquely
        forced = None
        for lab, w in nb1[v].items():
            if f[w] >= 0:
                forced = nb2[f[w]].get(sigma[lab])
                break
        cands = [forced] if forced is not None else range(g2.n)
        for u in cands:
            if u is None or used[u] or not ok(v, u):
                continue
            f[v], used[u] = u, True
            if rec(t + 1):
                return True
            f[v], used[u] = -1, False
        return False

    return list(f) if rec(0) else None


def _backtrack_uncolored(g1, g2):
    m1, m2 = adjacency(g1), adjacency(g2)
    d1, d2 = m1.sum(axis=1), m2.sum(axis=1)
    order = _search_order(g1)
    f = [-1] * g1.n
    used = [False] * g2.n

    def rec(t):
        if t == len(order):
            return True
        v = order[t]
        for u in range(g2.n):
            if used[u] or d1[v] != d2[u]:
                continue
            if any(f[w] >= 0 and m1[v, w] != m2[u, f[w]] for w in range(g1.n)):
                continue
            f[v], used[u] = u, True
            if rec(t + 1):
                return True
            f[v], used[u] = -1, False
        return False

    return list(f) if rec(0) else None


def graph_signature(g: ColoredGraph, mode: str = "exact") -> tuple:
    """Isomorphism invariant: degree sequence, colour counts and walk counts.

    Walk counts are the sorted per-vertex numbers of walks of each length
    ``1..n`` in the underlying multigraph.  For ``mode="permute"`` the colour
    counts are sorted; for ``"uncolored"`` they are dropped.
    """
    a = adjacency(g)
    walks = []
    v = np.ones(g.n, dtype=object)
    for _ in range(max(g.n, 1)):
        v = a.astype(object) @ v
        walks.append(tuple(sorted(int(x) for x in v)))
    counts = g.color_counts()
    if mode == "permute":
        counts = tuple(sorted(counts))
    elif mode == "uncolored":
        counts = ()
    return (tuple(sorted(g.degrees())), counts, tuple(walks))


def equal_up_to_permutation(m1, m2) -> bool:
    """Whether ``m2 = P m1 S`` for permutation matrices ``P`` and ``S`` (small matrices)."""
    m1, m2 = np.asarray(m1), np.asarray(m2)
    if m1.shape != m2.shape:
        return False
    if sorted(map(tuple, np.sort(m1, axis=1))) != sorted(map(tuple, np.sort(m2, axis=1))):
        return False
    rows = list(range(m1.shape[0]))
    target_cols = sorted(map(tuple, m2.T))
    for perm in itertools.permutations(rows):
        if sorted(map(tuple, m1[list(perm)].T)) == target_cols:
            return True
    return False
