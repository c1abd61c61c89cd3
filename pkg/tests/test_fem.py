import itertools

import numpy as np
import pytest

from isodiv import fem, fixtures, spectral
from isodiv.errors import ContinuityViolation, ShapeMismatch, SizeGuard
from isodiv.tiling import Tile, build_div

EXACT_LAMBDA1 = 16 * np.pi ** 2 / 3     # unit equilateral triangle


@pytest.fixture(scope="module")
def rhombus():
    return build_div(Tile.equilateral(), ["e", "a"])


@pytest.fixture(scope="module")
def gww_ops(gww_scalene):
    left, right = gww_scalene
    (m1, op1), (m2, op2) = fem.assemble(left, 3), fem.assemble(right, 3)
    return op1, op2


@pytest.mark.parametrize("r,nodes,elems", [(0, 3, 1), (1, 6, 4), (3, 45, 64)])
def test_refine_counts(r, nodes, elems):
    ref = fem.refine(None, r)
    assert ref.n_nodes == nodes == (2 ** r + 1) * (2 ** r + 2) // 2
    assert len(ref.elements) == elems == 4 ** r
    assert np.all(ref.nodes.sum(axis=1) == 2 ** r)


def test_refine_symmetric_and_guarded():
    ref = fem.refine(None, 3)
    nodes = {tuple(t) for t in ref.nodes.tolist()}
    for perm in itertools.permutations(range(3)):
        assert {tuple(t[list(perm)]) for t in ref.nodes} == nodes
    with pytest.raises(SizeGuard):
        fem.refine(None, 8)


def test_elements_have_equal_area():
    tile = fixtures.scalene_tile()
    ref = fem.refine(tile, 2)
    pts = ref.local_coordinates(tile)[ref.elements]
    ke, me = fem._element_matrices(pts)
    assert np.allclose(me.sum(axis=(1, 2)), tile.area / 16)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_mass_sums_to_area_and_constants_in_kernel(r, gww_scalene):
    div = gww_scalene[0]
    mesh, op = fem.assemble(div, r)
    assert abs(op.full_mass.sum() - div.n * div.tile.area) <= 1e-12
    assert np.abs(op.full_stiffness @ np.ones(mesh.n_global)).max() <= 1e-10
    assert abs(op.full_stiffness - op.full_stiffness.T).max() <= 1e-12


def test_identified_nodes_share_coordinates(gww_scalene):
    mesh, _ = fem.assemble(gww_scalene[1], 3)
    local = mesh.ref.local_coordinates(mesh.div.tile)
    for p in mesh.div.placements:
        assert np.allclose(mesh.coords[mesh.node_ids[p.copy_index]], p.isometry(local))
    # Dirichlet set is exactly the nodes of external sides
    ext = set()
    for c, lab in mesh.div.external_sides:
        ext.update(mesh.node_ids[c, mesh.ref.on_side(mesh.div.tile.side_index(lab))].tolist())
    assert set(np.flatnonzero(mesh.dirichlet).tolist()) == ext


def test_lambda1_converges_to_exact():
    tile = build_div(Tile.equilateral(), ["e"])
    errs = []
    for r in (3, 4, 5):
        _, op = fem.assemble(tile, r)
        errs.append(fem.dirichlet_spectrum(op, 1).values[0] - EXACT_LAMBDA1)
    assert errs[-1] / EXACT_LAMBDA1 <= 0.02
    assert all(e > 0 for e in errs)
    # second order: halving h divides the error by about four
    assert 3.0 < errs[0] / errs[1] < 5.0


def test_monotonicity(rhombus):
    tile = build_div(Tile.equilateral(), ["e"])
    _, op_t = fem.assemble(tile, 4)
    _, op_r = fem.assemble(rhombus, 4)
    assert fem.dirichlet_spectrum(op_r, 1).values[0] < fem.dirichlet_spectrum(op_t, 1).values[0]
    prev = None
    for r in (2, 3, 4):
        _, op = fem.assemble(rhombus, r)
        vals = fem.dirichlet_spectrum(op, 5).values
        if prev is not None:
            assert np.all(vals <= prev + 1e-12)
        prev = vals


def test_ground_state_is_positive(gww_ops):
    spec = fem.dirichlet_spectrum(gww_ops[0], 1)
    v = spec.vectors[:, 0] * np.sign(spec.vectors[:, 0].sum())
    assert spec.values[0] > 0
    assert np.all(v[gww_ops[0].mesh.free] > 0)


def test_dense_and_shift_invert_agree(gww_ops):
    a = fem.dirichlet_spectrum(gww_ops[0], 6)
    b = fem.dirichlet_spectrum(gww_ops[0], 6, dense_limit=0)
    assert np.allclose(a.values, b.values, rtol=1e-10)


def test_vector_form_round_trip(rhombus):
    mesh, _ = fem.assemble(rhombus, 3)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(mesh.n_global)
    vf = fem.to_vector_form(mesh, v)
    assert vf.blocks.shape == (2, mesh.ref.n_nodes)
    assert np.abs(fem.from_vector_form(mesh, vf) - v).max() <= 1e-14
    ones = fem.to_vector_form(mesh, np.ones(mesh.n_global))
    assert np.array_equal(ones.blocks[0], ones.blocks[1])
    single, _ = fem.assemble(build_div(Tile.equilateral(), ["e"]), 3)
    assert np.array_equal(fem.to_vector_form(single, v[:single.n_global]).blocks[0],
                          v[:single.n_global][single.node_ids[0]])


def test_discontinuous_blocks_rejected(rhombus):
    mesh, _ = fem.assemble(rhombus, 2)
    blocks = np.zeros(mesh.node_ids.shape)
    blocks[0] = 1.0
    with pytest.raises(ContinuityViolation) as exc:
        fem.from_vector_form(mesh, blocks)
    assert exc.value.mismatch == pytest.approx(1.0)


def test_transplant_identity(gww_ops):
    op1, _ = gww_ops
    spec = fem.dirichlet_spectrum(op1, 3)
    vf = fem.to_vector_form(op1.mesh, spec.vectors[:, 0])
    out = fem.transplant(vf, np.eye(7))
    assert np.array_equal(out.blocks, vf.blocks)
    with pytest.raises(ShapeMismatch):
        fem.transplant(vf, np.eye(6))


def test_transplanted_eigenvectors(gww_scalene, gww_ops):
    left, right = gww_scalene
    op1, op2 = gww_ops
    m = spectral.transplantation_matrix(left, right)
    s1, s2 = fem.dirichlet_spectrum(op1, 10), fem.dirichlet_spectrum(op2, 10)
    assert np.allclose(s1.values, s2.values, rtol=1e-10)
    for rep in fem.transplant_eigenvectors(op1, op2, m, s1):
        assert rep.continuity <= 1e-10 and rep.boundary <= 1e-10
        assert rep.residual <= 1e-8


def test_perturbed_matrix_breaks_continuity(gww_scalene, gww_ops):
    left, right = gww_scalene
    op1, op2 = gww_ops
    m = spectral.transplantation_matrix(left, right)
    bad = m + 0.05 * np.random.default_rng(3).standard_normal(m.shape)
    assert spectral.intertwining_residual(bad, left, right) > 1e-3
    s1 = fem.dirichlet_spectrum(op1, 3)
    reps = fem.transplant_eigenvectors(op1, op2, bad, s1)
    assert max(max(r.continuity, r.boundary) for r in reps) > 1e-3


def test_hersch_rhombus(rhombus):
    rep = fem.hersch_check(rhombus, 4)
    assert rep["internal_side_max"] == 0.0
    assert rep["residual"] <= 1e-8
    assert rep["continuity_mismatch"] == 0.0
    assert rep["in_spectrum"]


def test_hersch_single_tile():
    tile = build_div(Tile.equilateral(), ["e"])
    rep = fem.hersch_check(tile, 3)
    assert rep["spectrum"][0] == pytest.approx(rep["tile_eigenvalue"], rel=1e-12)
    assert rep["residual"] <= 1e-10 and rep["in_spectrum"]


def test_hersch_flags_missing_eigenvalue():
    # a fourth mode of the tile need not be among the first two of the rhombus
    rhombus = build_div(Tile.equilateral(), ["e", "a"])
    rep = fem.hersch_check(rhombus, 3, mode=3, k=2)
    assert not rep["in_spectrum"]
