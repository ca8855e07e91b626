"""Holonomy algebra construction and the sharp decomposition."""

import numpy as np
import pytest

from bochner import (
    Bivector,
    ComplexTensor,
    EuclideanSpace,
    act_on_tensor,
    build_algebra,
    lie_bracket,
    project_bivector,
    sharp,
)
from bochner.forms import dz_covector, kahler_form

from oracles import gram_projection_naive


def test_dimensions(c3, h2):
    so6 = build_algebra(c3, "so")
    assert so6.dim == 15
    u3 = build_algebra(c3, "u")
    assert u3.dim == 9
    sp2 = build_algebra(h2, "sp")
    assert sp2.dim == 13


def test_u_requires_complex_structure():
    with pytest.raises(ValueError):
        build_algebra(EuclideanSpace.euclidean(4), "u")


def test_sp_requires_quaternionic_structure(c2):
    with pytest.raises(ValueError):
        build_algebra(c2, "sp")
    with pytest.raises(ValueError):
        build_algebra(EuclideanSpace.quaternionic_space(1), "sp")


def test_basis_orthonormal_and_closed(c2, h2):
    # construction already validates; re-check the Gram matrix here
    for alg in (build_algebra(c2, "u"), build_algebra(h2, "sp")):
        G = alg.coeff_matrix @ alg.coeff_matrix.T
        assert np.abs(G - np.eye(alg.dim)).max() < 1e-10
        Q = alg.complement_projector()
        worst = 0.0
        for a in range(alg.dim):
            for b in range(a + 1, alg.dim):
                br = lie_bracket(alg.basis[a], alg.basis[b])
                worst = max(worst, np.linalg.norm(Q @ br.coeffs))
        assert worst < 1e-9


def test_u_basis_commutes_with_j(c3):
    J = c3.j_matrix()
    for b in build_algebra(c3, "u").basis:
        M = b.matrix()
        assert np.abs(M @ J - J @ M).max() < 1e-12


def test_sp_basis_structure(h2):
    """sp(m) block commutes with I, J, K; sp(1) block spans the structure forms."""
    I, J, K = h2.quaternionic_structure
    alg = build_algebra(h2, "sp")
    sp1, spm = alg.basis[:3], alg.basis[3:]
    for b in spm:
        M = b.matrix()
        for X in (I, J, K):
            assert np.abs(M @ X - X @ M).max() < 1e-9
    # the first three elements are the normalized structure 2-forms
    for b, X in zip(sp1, (I, J, K)):
        M = b.matrix() * np.sqrt(2 * h2.m)
        assert np.abs(M - X).max() < 1e-9


def test_sharp_invariant_tensor_has_zero_slices(c2):
    om = kahler_form(c2)
    dec = sharp(om, build_algebra(c2, "u"))
    assert dec.norm2() < 1e-20


def test_sharp_single_generator(c1):
    u1 = build_algebra(c1, "u")
    assert u1.dim == 1
    T = ComplexTensor.basis_covector(c1, 0)
    dec = sharp(T, u1)
    assert len(dec.slices) == 1
    assert dec.norm2() == pytest.approx(1.0)


def test_sharp_one_zero_form_norm(c2, c3):
    # |phi^u|^2 = n |phi|^2 for (1, 0)-forms
    for space in (c2, c3):
        u = build_algebra(space, "u")
        phi = dz_covector(space, 0)
        dec = sharp(phi, u)
        assert dec.norm2() == pytest.approx(space.n * phi.norm2(), rel=1e-12)


def test_sharp_equivariance(c2, rng):
    # g(L, T^g(indices)) = (L T)(indices) for L in the algebra
    u = build_algebra(c2, "u")
    worst = 0.0
    for _ in range(100):
        rank = int(rng.integers(1, 4))
        T = ComplexTensor.random(c2, rank, rng)
        L = u.random_element(rng)
        dec = sharp(T, u)
        idx = tuple(rng.integers(0, 4, size=rank))
        lhs = dec.evaluate(L, idx)
        rhs = act_on_tensor(L, T).components[idx]
        worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-9


def test_sharp_norm_reconstruction(c2, rng):
    u = build_algebra(c2, "u")
    T = ComplexTensor.random(c2, 2, rng)
    dec = sharp(T, u)
    # |T^g|^2 from the reconstructed coefficient array agrees with slice sums
    rec = dec.reconstruct()
    assert np.sum(np.abs(rec) ** 2) == pytest.approx(dec.norm2(), rel=1e-12)


def test_basis_independence_of_sharp_norm(c2, h2, rng):
    T2 = ComplexTensor.random(c2, 2, rng)
    base = sharp(T2, build_algebra(c2, "u")).norm2()
    for _ in range(3):
        perm = rng.permutation(4)
        alg = build_algebra(c2, "u", permutation=list(perm))
        assert abs(sharp(T2, alg).norm2() - base) < 1e-9 * max(base, 1.0)
    Tq = ComplexTensor.random(h2, 2, rng)
    baseq = sharp(Tq, build_algebra(h2, "sp")).norm2()
    perm = rng.permutation(10)
    algq = build_algebra(h2, "sp", permutation=list(perm))
    assert abs(sharp(Tq, algq).norm2() - baseq) < 1e-9 * max(baseq, 1.0)


def test_projector_splits_identity(c2):
    u = build_algebra(c2, "u")
    P = u.projector()
    Q = u.complement_projector()
    assert np.abs(P + Q - np.eye(6)).max() < 1e-12
    assert np.abs(P @ P - P).max() < 1e-10


def test_project_bivector(c2, rng):
    u = build_algebra(c2, "u")
    # elements of the span project to themselves
    L = u.random_element(rng)
    assert np.allclose(project_bivector(L, u).coeffs, L.coeffs, atol=1e-12)
    # orthogonal complement projects to zero
    Q = u.complement_projector()
    Lp = Bivector(c2, Q @ rng.standard_normal(6))
    assert project_bivector(Lp, u).norm() < 1e-12
    # generic: agrees with the normal-equation oracle, norm non-increasing
    for _ in range(10):
        L = Bivector.random(c2, rng)
        proj = project_bivector(L, u)
        expected = gram_projection_naive(list(u.coeff_matrix), L.coeffs)
        assert np.allclose(proj.coeffs, expected, atol=1e-10)
        assert proj.norm() <= L.norm() + 1e-12


def test_wedge_projects_into_u2_with_norm_at_most_one(c2):
    u = build_algebra(c2, "u")
    L = Bivector.wedge(c2, 0, 1)
    proj = project_bivector(L, u)
    assert 0.0 < proj.norm() <= 1.0 + 1e-12
