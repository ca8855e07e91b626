"""Holonomy subalgebras of so(V) and the sharp decomposition of tensors.

Builds orthonormal bases of so(d), u(n) and sp(m)+sp(1) inside
Lambda^2 V and computes, for a tensor T, the family of slices
{Xi_alpha T} whose squared norms sum to |T^g|^2.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .tensors import (
    Bivector,
    ComplexTensor,
    act_on_tensor,
    lie_bracket,
    wedge_pairs,
)

__all__ = [
    "AlgebraKind",
    "HolonomySubalgebra",
    "SharpDecomposition",
    "build_algebra",
    "sharp",
    "project_bivector",
    "gram_schmidt",
]

log = logging.getLogger(__name__)


class AlgebraKind(str, Enum):
    SO = "so"
    U = "u"
    SP_SP1 = "sp"


def gram_schmidt(vectors, against=(), drop_tol=1e-12):
    """Orthonormalize rows in order, dropping near-dependent entries.

    `against` supplies already-orthonormal vectors that the result must
    also be orthogonal to (they are not returned).
    """
    basis = [np.asarray(v, dtype=float) for v in against]
    kept = []
    for v in vectors:
        w = np.asarray(v, dtype=float).copy()
        for b in basis:
            w -= (w @ b) * b
        # second pass for numerical stability
        for b in basis:
            w -= (w @ b) * b
        nrm = np.linalg.norm(w)
        if nrm > drop_tol:
            w /= nrm
            basis.append(w)
            kept.append(w)
    return kept


class HolonomySubalgebra:
    """Ordered orthonormal basis {Xi_alpha} of a Lie subalgebra of Lambda^2 V."""

    def __init__(self, space, kind, basis, validate=True, atol=1e-9):
        self.space = space
        self.kind = AlgebraKind(kind)
        self.basis = list(basis)
        # rows = coefficient vectors on the wedge basis
        self.coeff_matrix = np.array([b.coeffs for b in self.basis])
        if validate:
            self._validate(atol)

    @property
    def dim(self):
        return len(self.basis)

    def projector(self):
        """Orthogonal projector onto span{Xi_alpha} in wedge coordinates."""
        return self.coeff_matrix.T @ self.coeff_matrix

    def complement_projector(self):
        P = self.projector()
        return np.eye(P.shape[0]) - P

    def random_element(self, rng, unit=False):
        c = rng.standard_normal(self.dim)
        if unit:
            c /= np.linalg.norm(c)
        return self.element(c)

    def element(self, coefficients):
        coefficients = np.asarray(coefficients, dtype=float)
        return Bivector(self.space, self.coeff_matrix.T @ coefficients)

    def coordinates(self, L):
        """Coefficients of the projection of L onto the algebra."""
        return self.coeff_matrix @ L.coeffs

    def _validate(self, atol):
        gram = self.coeff_matrix @ self.coeff_matrix.T
        if not np.allclose(gram, np.eye(self.dim), atol=1e-10):
            raise ValueError("algebra basis is not orthonormal")
        expected = _expected_dim(self.space, self.kind)
        if self.dim != expected:
            raise ValueError(f"{self.kind.value} basis has {self.dim} elements, expected {expected}")
        Q = self.complement_projector()
        for a, b in itertools.combinations(range(self.dim), 2):
            br = lie_bracket(self.basis[a], self.basis[b])
            leak = np.linalg.norm(Q @ br.coeffs)
            if leak > atol:
                raise ValueError(f"basis not closed under brackets, leak {leak:.2e}")
        if self.kind == AlgebraKind.U:
            J = self.space.j_matrix()
            for b in self.basis:
                M = b.matrix()
                if not np.allclose(M @ J, J @ M, atol=atol):
                    raise ValueError("u(n) element does not commute with J")

    def __repr__(self):
        return f"HolonomySubalgebra({self.kind.value}, dim={self.dim}, ambient={self.space.dim})"


def _expected_dim(space, kind):
    d = space.dim
    if kind == AlgebraKind.SO:
        return d * (d - 1) // 2
    if kind == AlgebraKind.U:
        n = d // 2
        return n * n
    m = d // 4
    return m * (2 * m + 1) + 3


def _skew_commutant(space, mats):
    """Orthonormal wedge-coefficient basis of {A skew : [A, X] = 0 for X in mats}."""
    d = space.dim
    rows = []
    for (i, j) in wedge_pairs(d):
        S = np.zeros((d, d))
        S[j, i] = 1.0
        S[i, j] = -1.0
        rows.append(np.concatenate([(S @ X - X @ S).ravel() for X in mats]))
    A = np.array(rows)
    u, s, vh = np.linalg.svd(A.T, full_matrices=True)
    rank = int(np.sum(s > 1e-9 * (s[0] if s.size else 1.0)))
    return vh[rank:]


def _u_spanning_set(space, permutation=None):
    """Canonical u(n) spanning set in the block convention.

    Families, in order: {eps_i ^ eps_j + J eps_i ^ J eps_j : i < j},
    {eps_i ^ J eps_i}, {eps_i ^ J eps_j + eps_j ^ J eps_i : i < j},
    where eps_i = e_{2i-1} and J eps_i = e_{2i}.
    """
    n = space.dim // 2
    out = []
    for i, j in itertools.combinations(range(n), 2):
        out.append(Bivector.wedge(space, 2 * i, 2 * j) + Bivector.wedge(space, 2 * i + 1, 2 * j + 1))
    for i in range(n):
        out.append(Bivector.wedge(space, 2 * i, 2 * i + 1))
    for i, j in itertools.combinations(range(n), 2):
        out.append(Bivector.wedge(space, 2 * i, 2 * j + 1) + Bivector.wedge(space, 2 * j, 2 * i + 1))
    if permutation is not None:
        out = [out[p] for p in permutation]
    return out


def structure_two_form_bivector(space, A):
    """Bivector of the 2-form omega_A(X, Y) = g(A X, Y) for a structure matrix A."""
    return Bivector.from_two_form(space, np.asarray(A).T)


def build_algebra(space, kind, permutation=None):
    """Construct a holonomy subalgebra basis.

    so(d) uses the wedge basis directly.  u(n) orthonormalizes the
    canonical commuting-with-J spanning set by Gram-Schmidt in a fixed
    order.  sp(m)+sp(1) places the normalized structure 2-forms
    omega_I, omega_J, omega_K first and then the skew commutant of
    {I, J, K}, orthonormalized against them.

    `permutation` reorders the spanning set before orthonormalization
    (used to exercise basis independence); the resulting span is
    unchanged.
    """
    kind = AlgebraKind(kind)
    if kind == AlgebraKind.SO:
        basis = [Bivector.wedge(space, i, j) for (i, j) in wedge_pairs(space.dim)]
        if permutation is not None:
            basis = [basis[p] for p in permutation]
        return HolonomySubalgebra(space, kind, basis)
    if kind == AlgebraKind.U:
        if space.complex_structure is None:
            raise ValueError("u(n) needs a complex structure")
        if space.dim % 2 != 0:
            raise ValueError("u(n) needs even real dimension")
        spanning = _u_spanning_set(space, permutation)
        rows = gram_schmidt([b.coeffs for b in spanning])
        basis = [Bivector(space, r) for r in rows]
        return HolonomySubalgebra(space, kind, basis)
    # sp(m) + sp(1)
    if space.quaternionic_structure is None:
        raise ValueError("sp(m)+sp(1) needs a quaternionic structure")
    if space.dim % 4 != 0:
        raise ValueError("sp(m)+sp(1) needs real dimension divisible by 4")
    m = space.dim // 4
    if m < 2:
        raise ValueError("sp(m)+sp(1) needs m >= 2")
    I, J, K = space.quaternionic_structure
    sp1 = [structure_two_form_bivector(space, A) for A in (I, J, K)]
    sp1_rows = [b.coeffs / b.norm() for b in sp1]
    commutant = _skew_commutant(space, [I, J])
    if permutation is not None:
        commutant = commutant[list(permutation)]
    spm_rows = gram_schmidt(list(commutant), against=sp1_rows)
    basis = [Bivector(space, r) for r in sp1_rows + spm_rows]
    return HolonomySubalgebra(space, AlgebraKind.SP_SP1, basis)


_ALGEBRA_CACHE: dict = {}


def cached_algebra(space, kind):
    """Memoized build_algebra; spaces are hashable by identity."""
    key = (space, AlgebraKind(kind))
    if key not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[key] = build_algebra(space, kind)
    return _ALGEBRA_CACHE[key]


@dataclass
class SharpDecomposition:
    """Slices Xi_alpha T of a tensor over an algebra basis.

    T^g itself is sum_alpha slices[alpha] (x) Xi_alpha; its squared norm
    is the sum of the squared slice norms.
    """

    algebra: HolonomySubalgebra
    tensor: ComplexTensor
    slices: list

    def norm2(self):
        return float(sum(s.norm2() for s in self.slices))

    def slice_norms2(self):
        return np.array([s.norm2() for s in self.slices])

    def as_array(self):
        """Stacked slice components, axis 0 indexed by the basis."""
        return np.stack([s.components for s in self.slices])

    def evaluate(self, L, multi_index):
        """g(L, T^g(multi_index)) for a bivector L, by expanding over the basis."""
        coords = self.algebra.coordinates(L)
        return complex(sum(c * s.components[multi_index] for c, s in zip(coords, self.slices)))

    def reconstruct(self):
        """Components of T^g as an array with a trailing wedge-coefficient axis."""
        arr = np.stack([s.components for s in self.slices], axis=-1)
        return np.tensordot(arr, self.algebra.coeff_matrix, axes=([-1], [0]))


def sharp(T, algebra):
    """Decompose T over the algebra: slices[alpha] = Xi_alpha T."""
    if not T.space.compatible(algebra.space):
        raise ValueError(f"dimension mismatch: {T.space.dim} vs {algebra.space.dim}")
    slices = [act_on_tensor(x, T) for x in algebra.basis]
    return SharpDecomposition(algebra, T, slices)


def project_bivector(L, algebra):
    """Orthogonal projection of a bivector onto the algebra span."""
    if not L.space.compatible(algebra.space):
        raise ValueError(f"dimension mismatch: {L.space.dim} vs {algebra.space.dim}")
    return Bivector(L.space, algebra.projector() @ L.coeffs)
