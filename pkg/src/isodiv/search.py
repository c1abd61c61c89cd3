"""Exhaustive enumeration of glued volumes and their classification."""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import algebra, spectral
from .errors import SizeGuard
from .tiling import (EPS, LABELS, DiV, Tile, build_div, canonical_key, div_equivalent,
                     from_placements, interiors_overlap, reflect_across_side)

MAX_ENUM_N = 10
MAX_TRIPLE_N = 8


# -- geometric enumeration -------------------------------------------------------

def _children(tile: Tile, words: tuple, eps: float, respect_labels: bool) -> list:
    """Canonical keys and word lists of every one-copy extension of a volume."""
    div = build_div(tile, words, eps)
    tol = eps * tile.diameter
    out = []
    for p in div.placements:
        for lab in LABELS:
            if div.neighbor(p.copy_index, lab) is not None:
                continue
            cand = reflect_across_side(p, lab)
            if any(cand.coincides(q, tol) or interiors_overlap(cand, q, eps)
                   or cand.same_image(q, tol) for q in div.placements):
                continue
            placements = list(div.placements) + [cand]
            child = from_placements(tile, placements, eps=eps)
            out.append((canonical_key(child, respect_labels), tuple(words) + (cand.word,)))
    return out


def _children_star(args):
    return _children(*args)


def enumerate_divs(tile: Tile, n: int, eps: float = EPS, respect_labels: bool = True,
                   jobs: int = 1, return_levels: bool = False):
    """All connected volumes of ``n`` copies, one per equivalence class.

    Volumes are grown one copy at a time: every connected volume has a copy
    whose removal leaves a connected volume, so level ``k + 1`` is obtained
    from the representatives of level ``k``.  Each level is deduplicated by
    canonical key and sorted by it, so the output is deterministic.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_ENUM_N:
        raise SizeGuard(f"enumeration limited to {MAX_ENUM_N} copies")
    base = build_div(tile, [""], eps)
    level = {canonical_key(base, respect_labels): ("",)}
    levels = [len(level)]
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for _ in range(n - 1):
            parents = [level[k] for k in sorted(level)]
            tasks = [(tile, w, eps, respect_labels) for w in parents]
            if pool is None:
                results = map(_children_star, tasks)
            else:
                results = pool.map(_children_star, tasks, chunksize=max(1, len(tasks) // (4 * jobs)))
            nxt = {}
            for res in results:
                for key, words in res:
                    # keep the first word list met in sorted parent order
                    nxt.setdefault(key, words)
            level = nxt
            levels.append(len(level))
    finally:
        if pool is not None:
            pool.shutdown()
    divs = [build_div(tile, level[k], eps) for k in sorted(level)]
    return (divs, levels) if return_levels else divs


# -- classification --------------------------------------------------------------

@dataclass
class CensusClass:
    representative: DiV
    size: int
    signature: tuple
    group_order: int | None
    spectrum: tuple
    is_tree: bool
    members: list = field(default_factory=list, repr=False)

    @property
    def graph(self) -> algebra.ColoredGraph:
        return algebra.graph_of(self.representative)


@dataclass
class Census:
    n: int
    mode: str
    classes: list
    total: int = 0

    def group_orders(self) -> Counter:
        return Counter(c.group_order for c in self.classes)

    def tree_classes(self) -> list:
        return [c for c in self.classes if c.is_tree]

    def summary(self) -> dict:
        orders = self.group_orders()
        return {
            "n": self.n,
            "mode": self.mode,
            "divs": self.total,
            "classes": len(self.classes),
            "tree_classes": len(self.tree_classes()),
            "group_orders": {int(k): v for k, v in sorted(orders.items(), key=lambda kv: -kv[0])},
        }

    def find(self, graph: algebra.ColoredGraph, mode: str | None = None):
        """Index of the class whose graph is isomorphic to ``graph``."""
        for idx, c in enumerate(self.classes):
            if algebra.colored_iso(graph, c.graph, mode or self.mode) is not None:
                return idx
        return None


def classify(divs, mode: str = "exact", with_spectra: bool = True) -> Census:
    """Group volumes into coloured-graph isomorphism classes."""
    divs = list(divs)
    if not divs:
        return Census(0, mode, [], 0)
    n = divs[0].n
    buckets: dict = {}
    classes: list = []
    for div in divs:
        g = algebra.graph_of(div)
        sig = algebra.graph_signature(g, mode)
        home = None
        for idx in buckets.get(sig, []):
            if algebra.colored_iso(g, classes[idx].graph, mode) is not None:
                home = idx
                break
        if home is None:
            gens = algebra.generators_of(g)
            order = algebra.group_order(gens) if n <= algebra.MAX_GROUP_N else None
            spec = spectral.sym_eigen(algebra.auxiliary(g)).rounded(9) if with_spectra else ()
            classes.append(CensusClass(div, 0, sig, order, spec, g.is_tree()))
            home = len(classes) - 1
            buckets.setdefault(sig, []).append(home)
        classes[home].size += 1
        classes[home].members.append(div)
    return Census(n, mode, classes, len(divs))


# -- pairs -----------------------------------------------------------------------

@dataclass
class PairReport:
    left: int
    right: int
    left_div: DiV = field(repr=False)
    right_div: DiV = field(repr=False)
    cospectral: bool
    equivalent: bool
    graphs_isomorphic: bool
    external_side_counts_match: bool
    intertwiner_dim: int = 0
    intertwiner_rank: int = 0
    congruent: bool = False

    @property
    def transplantable(self) -> bool:
        """An invertible intertwiner exists, so the Dirichlet spectra coincide."""
        return self.intertwiner_rank == self.left_div.n

    @property
    def candidate(self) -> bool:
        return self.cospectral and not self.equivalent

    def as_dict(self) -> dict:
        return {
            "left": self.left, "right": self.right,
            "left_words": list(self.left_div.words), "right_words": list(self.right_div.words),
            "cospectral": self.cospectral, "equivalent": self.equivalent,
            "graphs_isomorphic": self.graphs_isomorphic,
            "external_side_counts_match": self.external_side_counts_match,
            "intertwiner_dim": self.intertwiner_dim,
            "intertwiner_rank": self.intertwiner_rank,
            "transplantable": self.transplantable,
            "congruent": self.congruent,
        }


def find_pairs(census: Census, tol: float | None = None) -> list:
    """Cospectral pairs of classes with matching tile, size and boundary side counts.

    Equal auxiliary spectra are necessary but not sufficient for equal
    Dirichlet spectra; ``transplantable`` marks pairs with an invertible
    intertwiner and ``congruent`` pairs that differ only by side labels.
    """
    reps = [c.representative for c in census.classes]
    counts = [tuple(sorted(d.external_counts().items())) for d in reps]
    xs = [algebra.auxiliary(d) for d in reps]
    out = []
    for i, j in itertools.combinations(range(len(reps)), 2):
        a, b = reps[i], reps[j]
        if a.n != b.n or not a.tile.congruent_to(b.tile):
            continue
        if counts[i] != counts[j]:
            continue
        if not spectral.cospectral(xs[i], xs[j], tol):
            continue
        iso = algebra.colored_iso(algebra.graph_of(a), algebra.graph_of(b), "exact") is not None
        basis = spectral.intertwiners(a, b)
        out.append(PairReport(
            i, j, a, b, True, div_equivalent(a, b) is not None, iso, True,
            len(basis), spectral.intertwiner_rank(basis),
            div_equivalent(a, b, respect_labels=False) is not None))
    return out


# -- abstract triples --------------------------------------------------------------

def _bfs_form(perms: list, root: int) -> tuple:
    n = len(perms[0])
    new = {root: 0}
    order = [root]
    for v in order:
        for p in perms:
            u = p[v]
            if u not in new:
                new[u] = len(order)
                order.append(u)
    return tuple(tuple(new[p[order[t]]] for t in range(n)) for p in perms)


def canonical_triple(gens: algebra.PermGenerators) -> tuple:
    """Least breadth-first relabelling over all roots (transitive triples)."""
    perms = [gens.a, gens.b, gens.c]
    return min(_bfs_form(perms, r) for r in range(gens.n))


def involution_triples(n: int) -> list:
    """Transitive triples of involutions on ``n`` points up to simultaneous conjugation."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_TRIPLE_N:
        raise SizeGuard(f"triple enumeration limited to {MAX_TRIPLE_N} points")
    perms = [[-1] * n for _ in range(3)]
    found = set()

    # points are numbered in breadth-first order from 0; slot t = (point, generator)
    def rec(slot: int, count: int):
        if slot == 3 * n:
            if count == n:
                found.add(min(_bfs_form(perms, r) for r in range(n)))
            return
        v, g = divmod(slot, 3)
        if v >= count:
            return      # point v never reached: not transitive
        p = perms[g]
        if p[v] >= 0:
            rec(slot + 1, count)
            return
        options = [v] + [u for u in range(v + 1, count) if p[u] < 0]
        if count < n:
            options.append(count)
        for u in options:
            p[v], p[u] = u, v
            rec(slot + 1, count + (u == count))
            p[v] = p[u] = -1

    rec(0, 1)
    return [algebra.PermGenerators(*t) for t in sorted(found)]


def realizability(tile: Tile, n: int, divs=None) -> dict:
    """Counts of abstract triples and of those realised by a geometric volume."""
    triples = involution_triples(n)
    divs = enumerate_divs(tile, n) if divs is None else divs
    geometric = {canonical_triple(algebra.generators_of(d)) for d in divs}
    abstract = {canonical_triple(t) for t in triples}
    return {"triples": len(abstract), "realized": len(abstract & geometric),
            "unrealized": len(abstract - geometric), "geometric_not_abstract": len(geometric - abstract)}
