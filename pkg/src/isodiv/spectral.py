"""Symmetric spectra, cospectrality and transplantation matrices.

A transplantation ``M`` carries the per-copy vector form of a function on
volume 1 to one on volume 2 (block ``i`` of the image is
``sum_j M[i, j] f_j``).  ``Q1``, ``Q2`` are the copy/side incidence
matrices and ``U`` relates the boundary data on internal sides.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.linalg as sla

from .algebra import PermGenerators, generators_of
from .errors import DimensionMismatch, NotSymmetric, RankDeficient
from .tiling import LABELS


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray
    vectors: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values.tolist())

    def __len__(self):
        return self.n

    def rounded(self, digits: int = 6) -> tuple:
        return tuple(float(np.round(v, digits)) + 0.0 for v in self.values)


def sym_eigen(matrix, vectors: bool = False, sym_tol: float = 1e-12) -> Spectrum:
    """Eigenvalues (ascending) of a real symmetric matrix.

    Uses LAPACK's tridiagonalisation-based symmetric solver.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric("matrix is not square")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.T).max(initial=0.0) > sym_tol * scale:
        raise NotSymmetric("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    if vectors:
        w, v = np.linalg.eigh(a)
        return Spectrum(w, v)
    return Spectrum(np.linalg.eigvalsh(a))


def default_tol(*mats) -> float:
    return 1e-8 * max([1.0] + [float(np.linalg.norm(np.asarray(m, float))) for m in mats])


def cospectral(x1, x2, tol: float | None = None) -> bool:
    """Sorted spectra agree entrywise within ``tol``."""
    x1, x2 = np.asarray(x1), np.asarray(x2)
    if x1.shape != x2.shape:
        raise DimensionMismatch(f"shapes {x1.shape} and {x2.shape} differ")
    tol = default_tol(x1, x2) if tol is None else tol
    s1, s2 = sym_eigen(x1).values, sym_eigen(x2).values
    return bool(np.abs(s1 - s2).max(initial=0.0) <= tol)


# -- transplantation ------------------------------------------------------------

def _gram_inverse(q, allow_pinv: bool = False) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    g = q.T @ q
    if g.size == 0:
        return g
    rcond = 1.0 / np.linalg.cond(g) if np.linalg.matrix_rank(g) == g.shape[0] else 0.0
    if rcond < 1e-10:
        if not allow_pinv:
            raise RankDeficient("Q^T Q is singular; the side columns are dependent")
        warnings.warn("Q^T Q is singular; using the pseudo-inverse", RuntimeWarning)
        return np.linalg.pinv(g)
    return np.linalg.inv(g)


def projector(q, allow_pinv: bool = False) -> np.ndarray:
    """Orthogonal projector ``Q (Q^T Q)^-1 Q^T`` onto the column space of ``Q``."""
    q = np.asarray(q, dtype=float)
    return q @ _gram_inverse(q, allow_pinv) @ q.T


def compute_m(q1, q2, u, allow_pinv: bool = False) -> np.ndarray:
    """``M = Q2 U (Q1^T Q1)^-1 Q1^T``."""
    q1, q2, u = (np.asarray(x, dtype=float) for x in (q1, q2, u))
    if q1.shape[1] != u.shape[1] or q2.shape[1] != u.shape[0]:
        raise DimensionMismatch("U does not conform with Q1, Q2")
    return q2 @ u @ _gram_inverse(q1, allow_pinv) @ q1.T


def verify_fixed_point(m, q1, q2, allow_pinv: bool = False) -> float:
    """Frobenius residual of ``M = P2 M P1`` with ``P_i`` the column-space projectors."""
    m = np.asarray(m, dtype=float)
    return float(np.linalg.norm(m - projector(q2, allow_pinv) @ m @ projector(q1, allow_pinv)))


def recover_u(m, q1, q2, allow_pinv: bool = False) -> np.ndarray:
    """``U = (Q2^T Q2)^-1 Q2^T M Q1``."""
    q1, q2, m = (np.asarray(x, dtype=float) for x in (q1, q2, m))
    return _gram_inverse(q2, allow_pinv) @ q2.T @ m @ q1


def transport_cosine(m, w1, w2) -> float:
    """Cosine between ``M^T w2`` and ``w1`` (0 when ``M^T w2`` vanishes)."""
    v = np.asarray(m, dtype=float).T @ np.asarray(w2, dtype=float)
    w1 = np.asarray(w1, dtype=float)
    nv, nw = np.linalg.norm(v), np.linalg.norm(w1)
    if nv <= 1e-14 * max(1.0, np.abs(m).max()) or nw == 0:
        return 0.0
    return float(abs(v @ w1) / (nv * nw))


def verify_w_transport(m, w1, w2, tol: float = 1e-10) -> bool:
    """``M^T w2`` is parallel to ``w1`` (either sign)."""
    return transport_cosine(m, w1, w2) >= 1.0 - tol


@dataclass(frozen=True, eq=False)
class TransplantationPair:
    """``(Q1, Q2, U, M)`` with ``U`` stored orthonormal and its scale kept aside."""

    q1: np.ndarray
    q2: np.ndarray
    u: np.ndarray
    m: np.ndarray
    scale: float = 1.0

    @classmethod
    def build(cls, q1, q2, u, normalize: bool = True,
              allow_pinv: bool = False) -> "TransplantationPair":
        u = np.asarray(u, dtype=float)
        scale = 1.0
        if normalize and u.size:
            norms = np.linalg.norm(u, axis=0)
            if np.allclose(norms, norms[0]) and norms[0] > 0:
                scale = float(norms[0])
                u = u / scale
        q1, q2 = np.asarray(q1, float), np.asarray(q2, float)
        return cls(q1, q2, u, compute_m(q1, q2, u, allow_pinv), scale)

    def residual(self) -> float:
        return verify_fixed_point(self.m, self.q1, self.q2)

    def orthogonality_error(self) -> float:
        return float(np.abs(self.u.T @ self.u - np.eye(self.u.shape[1])).max(initial=0.0))


# -- intertwiners ---------------------------------------------------------------

def side_action_matrices(obj) -> dict:
    """Signed permutation matrix per side label.

    Entry ``(i, j)`` is 1 when copies ``i`` and ``j`` are glued across the
    label, and the diagonal entry is -1 when that side of copy ``i`` is on the
    boundary.  A function vanishing on the boundary and continuous across
    internal sides has side traces fixed by these matrices.
    """
    gens = obj if isinstance(obj, PermGenerators) else generators_of(obj)
    out = {}
    for lab in LABELS:
        p = gens[lab]
        s = np.zeros((gens.n, gens.n))
        for i, j in enumerate(p):
            s[i, j] = 1.0 if j != i else -1.0
        out[lab] = s
    return out


def intertwiners(src, dst, tol: float = 1e-10) -> np.ndarray:
    """Basis (shape ``(d, N, N)``) of all ``T`` with ``T S_src = S_dst T`` for every label.

    Such ``T`` map vector forms of Dirichlet functions on ``src`` to vector
    forms that are again continuous and vanish on the boundary of ``dst``,
    and commute with the Laplacian.
    """
    s1, s2 = side_action_matrices(src), side_action_matrices(dst)
    n = next(iter(s1.values())).shape[0]
    if next(iter(s2.values())).shape[0] != n:
        raise DimensionMismatch("volumes have different numbers of copies")
    eye = np.eye(n)
    # row-major vec: vec(T A) = (I kron A^T) vec(T), vec(B T) = (B kron I) vec(T)
    blocks = [np.kron(eye, s1[l].T) - np.kron(s2[l], eye) for l in LABELS]
    basis = sla.null_space(np.vstack(blocks), rcond=tol)
    return basis.T.reshape(-1, n, n)


def intertwiner_rank(basis, seed: int = 0) -> int:
    """Rank of a generic element of the span (the largest rank attained)."""
    basis = np.asarray(basis, dtype=float)
    if len(basis) == 0:
        return 0
    coeffs = np.random.default_rng(seed).standard_normal(len(basis))
    return int(np.linalg.matrix_rank(np.tensordot(coeffs, basis, axes=1), tol=1e-8))


def _sparsest(basis, n: int) -> np.ndarray | None:
    """Invertible element of a two-dimensional span with the most zero entries."""
    flat = basis.reshape(2, -1)
    best, best_nnz = None, None
    for col in range(flat.shape[1]):
        coeffs = np.array([flat[1, col], -flat[0, col]])
        if not coeffs.any():
            continue
        t = np.tensordot(coeffs, basis, axes=1)
        t = t / np.abs(t).max()
        t[np.abs(t) < 1e-12] = 0.0
        nnz = np.count_nonzero(t)
        if (best_nnz is None or nnz < best_nnz) and np.linalg.matrix_rank(t, tol=1e-8) == n:
            best, best_nnz = t, nnz
    return best


def transplantation_matrix(src, dst, seed: int = 0) -> np.ndarray | None:
    """An invertible intertwiner from ``src`` to ``dst``, or ``None``.

    Every pair of volumes admits the rank-one intertwiner built from the two
    orientation colourings, so only an invertible one certifies that the
    Dirichlet spectra coincide.  For a two-dimensional intertwiner space the
    sparsest invertible element is returned; otherwise an invertible basis
    element, or failing that a generic combination.  The result is scaled to
    unit max-norm.
    """
    basis = intertwiners(src, dst)
    n = basis.shape[1] if basis.ndim == 3 else 0
    if len(basis) == 0 or intertwiner_rank(basis, seed) < n:
        return None
    if len(basis) == 2:
        t = _sparsest(basis, n)
        if t is not None:
            return t
    for t in basis:
        if np.linalg.matrix_rank(t, tol=1e-8) == n:
            return t / np.abs(t).max()
    coeffs = np.random.default_rng(seed).standard_normal(len(basis))
    t = np.tensordot(coeffs, basis, axes=1)
    return t / np.abs(t).max()


def intertwining_residual(t, src, dst) -> float:
    s1, s2 = side_action_matrices(src), side_action_matrices(dst)
    t = np.asarray(t, dtype=float)
    return float(max(np.abs(t @ s1[l] - s2[l] @ t).max() for l in LABELS))


def span_residual(m, basis) -> float:
    """Distance of ``m`` from the span of ``basis`` (Frobenius, least squares)."""
    b = np.asarray(basis, dtype=float).reshape(len(basis), -1).T
    x, *_ = np.linalg.lstsq(b, np.ravel(m), rcond=None)
    return float(np.linalg.norm(b @ x - np.ravel(m)))

