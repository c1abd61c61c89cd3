"""Brute-force census of small volumes from raw placement sets.

Candidate copies are all images of the tile under products of at most
``n - 1`` side reflections.  Every ``n``-subset containing the tile itself is
tested for pairwise interior disjointness and for side-connectivity, and the
survivors are grouped by a direct isometry search.  Only numpy is used.
"""
from itertools import combinations, product

import numpy as np

TOL = 1e-7


def reflect_matrix(p, q):
    d = (q - p) / np.linalg.norm(q - p)
    lin = 2 * np.outer(d, d) - np.eye(2)
    m = np.eye(3)
    m[:2, :2] = lin
    m[:2, 2] = p - lin @ p
    return m


def side_reflections(verts):
    # side i joins the two vertices other than i
    return [reflect_matrix(verts[(i + 1) % 3], verts[(i + 2) % 3]) for i in range(3)]


def apply(m, pts):
    return pts @ m[:2, :2].T + m[:2, 2]


def candidates(verts, depth):
    refl = side_reflections(verts)
    out = []
    for length in range(depth + 1):
        for word in product(range(3), repeat=length):
            g = np.eye(3)
            for s in reversed(word):
                g = g @ refl[s]
            img = apply(g, verts)
            if not any(np.abs(img - o).max() < TOL for o in out):
                out.append(img)
    return out


def _proj(tri, axis):
    v = tri @ axis
    return v.min(), v.max()


def overlap(t1, t2):
    for tri in (t1, t2):
        for k in range(3):
            e = tri[(k + 1) % 3] - tri[k]
            axis = np.array([-e[1], e[0]]) / np.linalg.norm(e)
            a0, a1 = _proj(t1, axis)
            b0, b1 = _proj(t2, axis)
            if min(a1, b1) - max(a0, b0) <= TOL:
                return False
    return True


def same_set(t1, t2):
    return all(min(np.abs(t2 - p).max(axis=1)) < TOL for p in t1)


def sides_shared(t1, t2):
    """(i, j) when side i of t1 coincides with side j of t2."""
    out = []
    for i in range(3):
        s1 = t1[[(i + 1) % 3, (i + 2) % 3]]
        for j in range(3):
            s2 = t2[[(j + 1) % 3, (j + 2) % 3]]
            if np.abs(s1 - s2).max() < TOL or np.abs(s1 - s2[::-1]).max() < TOL:
                out.append((i, j))
    return out


def connected(tris):
    n = len(tris)
    seen = {0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in range(n):
            if b not in seen and sides_shared(tris[a], tris[b]):
                seen.add(b)
                stack.append(b)
    return len(seen) == n


def rigid(src, dst):
    es = np.column_stack([src[1] - src[0], src[2] - src[0]])
    ed = np.column_stack([dst[1] - dst[0], dst[2] - dst[0]])
    lin = ed @ np.linalg.inv(es)
    if np.abs(lin.T @ lin - np.eye(2)).max() > 1e-7:
        return None
    return lin, dst[0] - lin @ src[0]


def equivalent(a, b):
    """Some isometry maps every labelled copy of ``a`` onto a labelled copy of ``b``."""
    if len(a) != len(b):
        return False
    for target in b:
        g = rigid(a[0], target)
        if g is None:
            continue
        lin, t = g
        if all(any(np.abs(tri @ lin.T + t - other).max() < 1e-6 for other in b) for tri in a):
            return True
    return False


def census(verts, n):
    verts = np.asarray(verts, dtype=float)
    cands = candidates(verts, n - 1)
    base, rest = cands[0], cands[1:]
    found = []
    for combo in combinations(range(len(rest)), n - 1):
        tris = [base] + [rest[k] for k in combo]
        if any(overlap(x, y) or same_set(x, y) for x, y in combinations(tris, 2)):
            continue
        # sides must meet with the same label and the same orientation
        if any((i != j) for x, y in combinations(tris, 2) for i, j in sides_shared(x, y)):
            continue
        if not connected(tris):
            continue
        if not any(equivalent(tris, f) for f in found):
            found.append(tris)
    return found
