import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from isodiv import algebra, fixtures, spectral
from isodiv.errors import DimensionMismatch, NotSymmetric, RankDeficient
from isodiv.tiling import Tile, build_div


def test_sym_eigen_examples():
    assert np.allclose(spectral.sym_eigen(np.eye(3)).values, [1, 1, 1])
    assert np.allclose(spectral.sym_eigen(np.diag([3.0, 1.0, 2.0])).values, [1, 2, 3])
    s = spectral.sym_eigen(fixtures.X_LEFT)
    assert np.allclose(s.values, fixtures.X_SPECTRUM, atol=1e-5)
    with pytest.raises(NotSymmetric):
        spectral.sym_eigen([[0.0, 1.0], [0.0, 0.0]])


@settings(max_examples=40, deadline=None)
@given(arrays(float, (6, 6), elements=st.floats(-5, 5)))
def test_sym_eigen_residuals(a):
    x = a + a.T
    s = spectral.sym_eigen(x, vectors=True)
    assert np.all(np.diff(s.values) >= -1e-12)
    res = np.linalg.norm(x @ s.vectors - s.vectors * s.values, axis=0)
    assert res.max() <= 1e-10 * max(1.0, np.linalg.norm(x))


def test_spectrum_properties_over_census(census_levels):
    for divs in census_levels.values():
        for div in divs:
            x = algebra.auxiliary(div)
            q = algebra.structural(div).entries
            vals = spectral.sym_eigen(x).values
            assert abs(vals.sum() - 2 * div.k) <= 1e-9
            assert vals[0] >= -1e-10
            if div.k:
                nz1 = vals[vals > 1e-9]
                nz2 = spectral.sym_eigen(q.T @ q).values
                assert np.allclose(nz1, nz2[nz2 > 1e-9], atol=1e-9)


def test_cospectral():
    assert spectral.cospectral(fixtures.X_LEFT, fixtures.X_RIGHT)
    assert spectral.cospectral(fixtures.X_LEFT, fixtures.X_LEFT)
    assert not spectral.cospectral(fixtures.X_LEFT, np.eye(7))
    path = algebra.auxiliary(fixtures.path_div())
    with pytest.raises(DimensionMismatch):
        spectral.cospectral(fixtures.X_LEFT, path)


def test_compute_m_projector_identity():
    q = fixtures.Q_LEFT_REFERENCE
    m = spectral.compute_m(q, q, np.eye(6))
    assert np.allclose(m, spectral.projector(q))
    assert np.allclose(m @ q, q)
    assert spectral.verify_fixed_point(m, q, q) <= 1e-12


def test_compute_m_two_copies():
    q = np.array([[1.0], [1.0]])
    m = spectral.compute_m(q, q, np.array([[1.0]]))
    # (f1, f2) -> both entries replaced by their mean
    assert np.allclose(m, [[0.5, 0.5], [0.5, 0.5]])
    assert np.allclose(m @ [3.0, 1.0], [2.0, 2.0])
    assert spectral.verify_w_transport(m, [1.0, 1.0], [1.0, 1.0])


def test_compute_m_shape_and_rank_checks():
    q = np.array([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(RankDeficient):
        spectral.compute_m(q, q, np.eye(2))
    with pytest.warns(RuntimeWarning):
        spectral.compute_m(q, q, np.eye(2), allow_pinv=True)
    with pytest.raises(DimensionMismatch):
        spectral.compute_m(fixtures.Q_LEFT_REFERENCE, fixtures.Q_RIGHT_REFERENCE, np.eye(5))


def test_random_m_not_fixed():
    rng = np.random.default_rng(1)
    q1, q2 = fixtures.Q_LEFT_REFERENCE, fixtures.Q_RIGHT_REFERENCE
    assert spectral.verify_fixed_point(rng.standard_normal((7, 7)), q1, q2) > 1e-3


@settings(max_examples=30, deadline=None)
@given(arrays(float, (6, 6), elements=st.floats(-3, 3)))
def test_round_trip(u):
    q1, q2 = fixtures.Q_LEFT_REFERENCE, fixtures.Q_RIGHT_REFERENCE
    m = spectral.compute_m(q1, q2, u)
    assert spectral.verify_fixed_point(m, q1, q2) <= 1e-10 * max(1.0, np.abs(u).max())
    assert np.allclose(spectral.recover_u(m, q1, q2), u, atol=1e-10 * max(1.0, np.abs(u).max()))


def test_transplantation_pair_normalises_u():
    pair = spectral.TransplantationPair.build(fixtures.Q_LEFT_REFERENCE, fixtures.Q_RIGHT_REFERENCE,
                                              fixtures.U_SIDES)
    assert np.isclose(pair.scale, np.sqrt(2))
    assert pair.orthogonality_error() <= 1e-12
    assert pair.residual() <= 1e-10


def test_transport_trivial_cases():
    assert spectral.verify_w_transport(np.eye(7), fixtures.W_LEFT, fixtures.W_LEFT)
    assert spectral.transport_cosine(np.zeros((7, 7)), fixtures.W_LEFT, fixtures.W_RIGHT) == 0.0


def test_side_matrices_fix_orientation_up_to_sign(gww):
    # every side action sends the orientation colouring to its negative on glued pairs
    for div in gww:
        w = algebra.orientation_coloring(div)
        for s in spectral.side_action_matrices(div).values():
            assert np.array_equal(s @ w, -w)


def test_intertwiner_space_of_gww(gww):
    left, right = gww
    basis = spectral.intertwiners(right, left)
    assert len(basis) == 2
    assert spectral.intertwiner_rank(basis) == 7
    for t in (fixtures.M_REFERENCE_A, fixtures.M_REFERENCE_B, fixtures.M_REFERENCE):
        assert spectral.intertwining_residual(t, right, left) <= 1e-12
        assert spectral.span_residual(np.asarray(t, float).T, spectral.intertwiners(left, right)) <= 1e-10
    # the reference combination carries one orientation colouring onto the other
    assert np.allclose(fixtures.M_REFERENCE @ fixtures.W_RIGHT, fixtures.W_LEFT)
    assert np.allclose(fixtures.M_REFERENCE.T @ fixtures.W_LEFT, fixtures.W_RIGHT)


def test_rank_one_intertwiner_always_exists():
    tri = Tile.equilateral()
    a = build_div(tri, ["e", "a", "ba"])
    b = build_div(tri, ["e", "a", "ca"])
    basis = spectral.intertwiners(a, b)
    wa, wb = algebra.orientation_coloring(a), algebra.orientation_coloring(b)
    assert spectral.span_residual(np.outer(wb, wa), basis) <= 1e-10
    if spectral.intertwiner_rank(basis) < 3:
        assert spectral.transplantation_matrix(a, b) is None


def test_transplantation_matrix_for_gww(gww):
    left, right = gww
    t = spectral.transplantation_matrix(left, right)
    assert t is not None
    assert abs(np.linalg.det(t)) > 1e-6
    assert spectral.intertwining_residual(t, left, right) <= 1e-12


def test_compute_m_does_not_reproduce_reference_family(gww):
    # neither the reference nor the derived incidence matrices give a member of
    # the two-parameter family, in either direction (see the decisions ledger)
    family = np.stack([fixtures.M_REFERENCE_A, fixtures.M_REFERENCE_B]).astype(float)
    left, right = gww
    pairs = [(fixtures.Q_LEFT_REFERENCE, fixtures.Q_RIGHT_REFERENCE),
             (algebra.structural(left).entries, algebra.structural(right).entries)]
    for ql, qr in pairs:
        for q1, q2 in ((ql, qr), (qr, ql)):
            m = spectral.compute_m(q1, q2, fixtures.U_SIDES)
            assert spectral.span_residual(m, family) > 0.5 * np.linalg.norm(m)


def test_transplantation_matrix_is_sparse_signed(gww_scalene):
    left, right = gww_scalene
    t = spectral.transplantation_matrix(left, right)
    assert np.allclose(np.abs(t[t != 0]), 1.0, atol=1e-12)
    assert np.all(np.count_nonzero(t, axis=0) == 3)
    assert np.all(np.count_nonzero(t, axis=1) == 3)
