"""Piecewise-linear Dirichlet eigenproblems on glued volumes.

Every copy carries the same uniformly refined mesh, indexed by integer
barycentric triples ``(i, j, k)`` with ``i + j + k = 2**r``.  Nodes on an
internal side are identified by their barycentric triple, which the gluing
reflection leaves unchanged, so no floating-point matching is needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ContinuityViolation, ConvergenceFailure, ShapeMismatch, SizeGuard
from .tiling import DiV, Tile, build_div

MAX_LEVEL = 7
DENSE_LIMIT = 1500


@dataclass(frozen=True, eq=False)
class RefMesh:
    """Uniform refinement of the reference triangle in barycentric coordinates."""

    level: int
    nodes: np.ndarray        # (M, 3) integer triples summing to 2**level
    elements: np.ndarray     # (E, 3) node indices

    @property
    def denominator(self) -> int:
        return 2 ** self.level

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def on_side(self, vertex: int) -> np.ndarray:
        """Indices of nodes on the side opposite ``vertex``."""
        return np.flatnonzero(self.nodes[:, vertex] == 0)

    def boundary_mask(self) -> np.ndarray:
        return (self.nodes == 0).any(axis=1)

    def local_coordinates(self, tile: Tile) -> np.ndarray:
        return self.nodes @ tile.points / self.denominator

    @cached_property
    def index(self) -> dict:
        return {tuple(t): i for i, t in enumerate(self.nodes.tolist())}


def refine(tile: Tile | None, r: int) -> RefMesh:
    """Mesh of ``4**r`` congruent elements; node order is the sorted barycentric triple."""
    if not 0 <= r <= MAX_LEVEL:
        raise SizeGuard(f"refinement level must be in 0..{MAX_LEVEL}")
    m = 2 ** r
    triples = sorted((i, j, m - i - j) for i in range(m + 1) for j in range(m + 1 - i))
    idx = {t: n for n, t in enumerate(triples)}
    elems = []
    for i in range(m):
        for j in range(m - i):
            elems.append((idx[(i, j, m - i - j)], idx[(i + 1, j, m - i - j - 1)],
                          idx[(i, j + 1, m - i - j - 1)]))
            if i + j <= m - 2:
                elems.append((idx[(i + 1, j, m - i - j - 1)], idx[(i + 1, j + 1, m - i - j - 2)],
                              idx[(i, j + 1, m - i - j - 1)]))
    return RefMesh(r, np.array(triples, dtype=np.int64), np.array(elems, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class GlobalMesh:
    div: DiV
    ref: RefMesh
    node_ids: np.ndarray     # (N, M): global id of each (copy, local node)
    dirichlet: np.ndarray    # boolean mask over global ids
    coords: np.ndarray       # (G, 2) physical coordinates

    @property
    def n_global(self) -> int:
        return len(self.coords)

    @cached_property
    def free(self) -> np.ndarray:
        return np.flatnonzero(~self.dirichlet)

    @cached_property
    def internal_side_nodes(self) -> np.ndarray:
        """Global ids of nodes on internal sides (including their endpoints)."""
        ids = set()
        for i, _, lab in self.div.internal_sides:
            ids.update(self.node_ids[i, self.ref.on_side(self.div.tile.side_index(lab))].tolist())
        return np.array(sorted(ids), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    mesh: GlobalMesh
    stiffness: sp.csr_matrix         # free x free
    mass: sp.csr_matrix
    full_stiffness: sp.csr_matrix    # all global nodes, before elimination
    full_mass: sp.csr_matrix

    @property
    def n_free(self) -> int:
        return self.stiffness.shape[0]

    def expand(self, v_free) -> np.ndarray:
        """Free-node vector(s) to global vector(s) with zeros on the boundary."""
        v_free = np.asarray(v_free)
        out = np.zeros((self.mesh.n_global,) + v_free.shape[1:], dtype=v_free.dtype)
        out[self.mesh.free] = v_free
        return out

    def restrict(self, v) -> np.ndarray:
        return np.asarray(v)[self.mesh.free]

    def residual(self, lam: float, v) -> float:
        """``|K v - lam B v| / |K v|`` for a global or free-node vector."""
        v = np.asarray(v, dtype=float)
        if len(v) == self.mesh.n_global:
            v = self.restrict(v)
        kv = self.stiffness @ v
        den = np.linalg.norm(kv)
        return float(np.linalg.norm(kv - lam * (self.mass @ v)) / den) if den > 0 else float("inf")


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _element_matrices(pts: np.ndarray):
    """P1 stiffness and mass for triangles ``pts`` of shape (E, 3, 2)."""
    d1 = pts[:, 1] - pts[:, 0]
    d2 = pts[:, 2] - pts[:, 0]
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    area = 0.5 * np.abs(det)
    # gradients of the barycentric basis functions
    inv = np.empty((len(pts), 2, 2))
    inv[:, 0, 0] = d2[:, 1] / det
    inv[:, 0, 1] = -d2[:, 0] / det
    inv[:, 1, 0] = -d1[:, 1] / det
    inv[:, 1, 1] = d1[:, 0] / det
    ref_grad = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
    grads = np.einsum("ak,ekx->eax", ref_grad, inv)
    ke = area[:, None, None] * np.einsum("eax,ebx->eab", grads, grads)
    me = area[:, None, None] / 12.0 * (np.ones((3, 3)) + np.eye(3))
    return ke, me


def assemble(div: DiV, r: int, ref: RefMesh | None = None):
    """Global mesh and the Dirichlet stiffness/mass pair of a volume."""
    ref = ref or refine(div.tile, r)
    n, m = div.n, ref.n_nodes
    uf = _UnionFind(n * m)
    for i, j, lab in div.internal_sides:
        for node in ref.on_side(div.tile.side_index(lab)):
            uf.union(i * m + node, j * m + node)
    roots = np.array([uf.find(x) for x in range(n * m)])
    _, first, inverse = np.unique(roots, return_index=True, return_inverse=True)
    # number globals by first appearance in (copy, node) order
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    node_ids = rank[inverse].reshape(n, m)

    g = len(order)
    dirichlet = np.zeros(g, dtype=bool)
    for c, lab in div.external_sides:
        dirichlet[node_ids[c, ref.on_side(div.tile.side_index(lab))]] = True
    local = ref.local_coordinates(div.tile)
    coords = np.zeros((g, 2))
    for p in div.placements:
        coords[node_ids[p.copy_index]] = p.isometry(local)
    mesh = GlobalMesh(div, ref, node_ids, dirichlet, coords)

    rows, cols, kv, mv = [], [], [], []
    for p in div.placements:
        phys = p.isometry(local)
        ke, me = _element_matrices(phys[ref.elements])
        gid = node_ids[p.copy_index][ref.elements]
        rows.append(np.repeat(gid, 3, axis=1).ravel())
        cols.append(np.tile(gid, (1, 3)).ravel())
        kv.append(ke.ravel())
        mv.append(me.ravel())
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    kfull = sp.csr_matrix((np.concatenate(kv), (rows, cols)), shape=(g, g))
    mfull = sp.csr_matrix((np.concatenate(mv), (rows, cols)), shape=(g, g))
    free = mesh.free
    k = kfull[free][:, free].tocsr()
    b = mfull[free][:, free].tocsr()
    return mesh, DiscreteOperator(mesh, k, b, kfull, mfull)


@dataclass(frozen=True, eq=False)
class FemSpectrum:
    values: np.ndarray
    vectors: np.ndarray      # global vectors as columns, boundary entries zero
    residuals: np.ndarray


def dirichlet_spectrum(op: DiscreteOperator, k: int = 10, tol: float = 1e-8,
                       dense_limit: int = DENSE_LIMIT) -> FemSpectrum:
    """Smallest ``k`` eigenpairs of ``K v = lam B v`` (B-orthonormal vectors)."""
    nf = op.n_free
    if not 1 <= k <= nf:
        raise ValueError(f"k must be in 1..{nf}")
    if nf <= dense_limit:
        vals, vecs = sla.eigh(op.stiffness.toarray(), op.mass.toarray(), subset_by_index=[0, k - 1])
        info = {"method": "dense"}
    else:
        try:
            vals, vecs = spla.eigsh(op.stiffness.tocsc(), k=k, M=op.mass.tocsc(), sigma=0.0,
                                    which="LM", tol=1e-12, maxiter=5000)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceFailure("shift-invert Lanczos did not converge",
                                     {"converged": len(exc.eigenvalues), "requested": k}) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        info = {"method": "shift-invert"}
    res = np.array([op.residual(l, vecs[:, t]) for t, l in enumerate(vals)])
    if np.any(res > tol):
        raise ConvergenceFailure("eigen-residual above tolerance",
                                 dict(info, residuals=res.tolist()))
    return FemSpectrum(vals, op.expand(vecs), res)


# -- vector form ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VectorForm:
    """Per-copy nodal blocks ``(f_1, ..., f_N)`` in the common local node order."""

    mesh: GlobalMesh
    blocks: np.ndarray       # (N, M)

    def continuity_mismatch(self) -> float:
        """Largest disagreement between copies at identified nodes."""
        ids = self.mesh.node_ids.ravel()
        vals = self.blocks.ravel()
        hi = np.full(self.mesh.n_global, -np.inf)
        lo = np.full(self.mesh.n_global, np.inf)
        np.maximum.at(hi, ids, vals)
        np.minimum.at(lo, ids, vals)
        return float((hi - lo).max(initial=0.0))

    def boundary_max(self) -> float:
        """Largest absolute value on the Dirichlet boundary."""
        mask = self.mesh.dirichlet[self.mesh.node_ids]
        return float(np.abs(self.blocks[mask]).max(initial=0.0))


def to_vector_form(mesh: GlobalMesh, vec) -> VectorForm:
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (mesh.n_global,):
        raise ShapeMismatch(f"expected a vector of length {mesh.n_global}")
    return VectorForm(mesh, vec[mesh.node_ids])


def from_vector_form(mesh: GlobalMesh, vf: VectorForm, tol: float = 1e-8) -> np.ndarray:
    """Global vector from blocks; raises if shared nodes disagree beyond ``tol``."""
    blocks = np.asarray(vf.blocks if isinstance(vf, VectorForm) else vf, dtype=float)
    if blocks.shape != mesh.node_ids.shape:
        raise ShapeMismatch("block shape does not match the mesh")
    view = VectorForm(mesh, blocks)
    scale = max(1.0, float(np.abs(blocks).max(initial=0.0)))
    mismatch = view.continuity_mismatch()
    if mismatch > tol * scale:
        raise ContinuityViolation(f"blocks disagree on shared nodes by {mismatch:.3e}", mismatch)
    out = np.zeros(mesh.n_global)
    out[mesh.node_ids.ravel()] = blocks.ravel()
    return out


def transplant(vf: VectorForm, m, target: GlobalMesh | None = None) -> VectorForm:
    """Block ``i`` of the result is ``sum_j m[i, j] f_j`` at matching local nodes.

    Continuity on ``target`` is not assumed; inspect ``continuity_mismatch``
    and ``boundary_max`` of the result.
    """
    m = np.asarray(m, dtype=float)
    n = vf.blocks.shape[0]
    target = target or vf.mesh
    if m.shape != (target.node_ids.shape[0], n):
        raise ShapeMismatch(f"matrix of shape {m.shape} cannot act on {n} blocks")
    if target.ref.n_nodes != vf.blocks.shape[1]:
        raise ShapeMismatch("meshes have different refinement levels")
    return VectorForm(target, m @ vf.blocks)


@dataclass
class TransplantReport:
    lam: float
    continuity: float
    boundary: float
    residual: float


def transplant_eigenvectors(op1: DiscreteOperator, op2: DiscreteOperator, m,
                            spec: FemSpectrum) -> list:
    """Transplant each eigenvector of ``op1`` and measure it on ``op2``."""
    out = []
    for lam, vec in zip(spec.values, spec.vectors.T):
        vf2 = transplant(to_vector_form(op1.mesh, vec), m, op2.mesh)
        scale = np.abs(vf2.blocks).max()
        cont = vf2.continuity_mismatch() / scale
        bnd = vf2.boundary_max() / scale
        glob = np.zeros(op2.mesh.n_global)
        glob[op2.mesh.node_ids.ravel()] = vf2.blocks.ravel()
        out.append(TransplantReport(float(lam), cont, bnd, op2.residual(lam, glob)))
    return out


def hersch_check(div: DiV, r: int, mode: int = 0, k: int = 10, tol: float = 1e-6) -> dict:
    """Extend a tile eigenvector to the volume with the orientation signs.

    The extension vanishes on every internal side and solves the volume's
    discrete problem with the tile eigenvalue.
    """
    ref = refine(div.tile, r)
    tile_div = build_div(div.tile, [""])
    tmesh, top = assemble(tile_div, r, ref)
    tspec = dirichlet_spectrum(top, mode + 1)
    lam = float(tspec.values[mode])
    phi = tspec.vectors[tmesh.node_ids[0], mode]     # local node order

    mesh, op = assemble(div, r, ref)
    w = np.array([p.orientation for p in div.placements], dtype=float)
    blocks = w[:, None] * phi[None, :]
    vf = VectorForm(mesh, blocks)
    glob = np.zeros(mesh.n_global)
    glob[mesh.node_ids.ravel()] = blocks.ravel()
    internal = mesh.internal_side_nodes
    report = {
        "tile_eigenvalue": lam,
        "residual": op.residual(lam, glob),
        "internal_side_max": float(np.abs(glob[internal]).max(initial=0.0)),
        "continuity_mismatch": vf.continuity_mismatch(),
    }
    kk = min(k, op.n_free)
    vals = dirichlet_spectrum(op, kk).values
    report["in_spectrum"] = bool(np.any(np.abs(vals - lam) <= tol * lam))
    report["spectrum"] = vals.tolist()
    return report
