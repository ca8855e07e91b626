"""Dense complex tensors over an orthonormal Euclidean vector space.

Everything downstream (holonomy algebras, curvature operators, form
spaces) is built on three small carriers:

* :class:`EuclideanSpace` fixes the dimension and the optional complex or
  quaternionic structure matrices.  The metric is the identity in the
  stored basis, so raising and lowering indices is free.
* :class:`ComplexTensor` is a dense complex (0, k)-tensor.
* :class:`Bivector` is an element of so(V) = Lambda^2 V stored as real
  coefficients on the orthonormal wedge basis {e_i ^ e_j : i < j}.

Conventions
-----------
The complex structure acts blockwise, J e_1 = e_2, J e_2 = -e_1, and so
on (1-based).  The quaternionic triple acts on blocks of four with
I J = -J I = K; the complex structure of a quaternionic space is I.
Antisymmetric forms are stored as full tensors over all index orders, so
the wedge monomial e_1 ^ e_2 has two components +-1 and squared
full-tensor norm 2; the norm in which wedge monomials are unit vectors
divides the squared full-tensor norm by k!.
"""

from __future__ import annotations

import itertools
import json
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "EuclideanSpace",
    "ComplexTensor",
    "Bivector",
    "bivector_action",
    "lie_bracket",
    "act_on_tensor",
    "hermitian_inner",
    "alternate",
    "pullback",
    "wedge_pairs",
    "tensor_to_json",
    "tensor_from_json",
]

DEFAULT_ATOL = 1e-10


@lru_cache(maxsize=None)
def wedge_pairs(dim):
    """Ordered basis (i, j), i < j, of Lambda^2 for a given dimension."""
    return tuple(itertools.combinations(range(dim), 2))


@lru_cache(maxsize=None)
def _pair_index(dim):
    return {p: a for a, p in enumerate(wedge_pairs(dim))}


def _block_complex_structure(d):
    J = np.zeros((d, d))
    for i in range(d // 2):
        J[2 * i + 1, 2 * i] = 1.0
        J[2 * i, 2 * i + 1] = -1.0
    return J


def _block_quaternionic_structure(m):
    """(I, J, K) acting on blocks of four; I J = -J I = K."""
    d = 4 * m
    bi = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
    bj = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
    bk = bi @ bj
    mats = []
    for blk in (bi, bj, bk):
        M = np.zeros((d, d))
        for a in range(m):
            s = slice(4 * a, 4 * a + 4)
            M[s, s] = blk
        mats.append(M)
    return tuple(mats)


class EuclideanSpace:
    """Euclidean R^d with optional complex / quaternionic structure.

    Instances are immutable; the factory classmethods cache and reuse
    them so spaces can serve as dictionary keys for derived data.
    """

    def __init__(self, real_dim, complex_structure=None, quaternionic_structure=None,
                 validate=True, atol=DEFAULT_ATOL):
        if real_dim <= 0 or real_dim % 2 != 0:
            raise ValueError(f"real dimension must be positive and even, got {real_dim}")
        self.dim = int(real_dim)
        self.complex_structure = None if complex_structure is None else np.array(complex_structure, dtype=float)
        if quaternionic_structure is None:
            self.quaternionic_structure = None
        else:
            self.quaternionic_structure = tuple(np.array(A, dtype=float) for A in quaternionic_structure)
        if validate:
            self._validate(atol)
        for A in self._all_structures():
            A.setflags(write=False)

    def _all_structures(self):
        out = []
        if self.complex_structure is not None:
            out.append(self.complex_structure)
        if self.quaternionic_structure is not None:
            out.extend(self.quaternionic_structure)
        return out

    def _validate(self, atol):
        d = self.dim
        eye = np.eye(d)
        for A in self._all_structures():
            if A.shape != (d, d):
                raise ValueError(f"structure matrix has shape {A.shape}, expected {(d, d)}")
            if not np.allclose(A @ A, -eye, atol=atol):
                raise ValueError("structure matrix does not square to -Id")
            if not np.allclose(A.T @ A, eye, atol=atol):
                raise ValueError("structure matrix is not orthogonal")
        if self.quaternionic_structure is not None:
            if d % 4 != 0:
                raise ValueError(f"quaternionic structure needs dim divisible by 4, got {d}")
            I, J, K = self.quaternionic_structure
            if not (np.allclose(I @ J, K, atol=atol) and np.allclose(J @ I, -K, atol=atol)):
                raise ValueError("quaternionic triple does not satisfy IJ = -JI = K")

    _cache: dict = {}

    @classmethod
    def euclidean(cls, d):
        """Plain R^d without extra structure."""
        key = ("e", d)
        if key not in cls._cache:
            cls._cache[key] = cls(d)
        return cls._cache[key]

    @classmethod
    def complex_space(cls, n):
        """C^n = R^{2n} with the block complex structure."""
        key = ("c", n)
        if key not in cls._cache:
            d = 2 * n
            cls._cache[key] = cls(d, complex_structure=_block_complex_structure(d))
        return cls._cache[key]

    @classmethod
    def quaternionic_space(cls, m):
        """H^m = R^{4m} with the block quaternionic triple; J-structure is I."""
        key = ("q", m)
        if key not in cls._cache:
            I, J, K = _block_quaternionic_structure(m)
            cls._cache[key] = cls(4 * m, complex_structure=I, quaternionic_structure=(I, J, K))
        return cls._cache[key]

    @property
    def n(self):
        """Complex dimension (requires a complex structure)."""
        if self.complex_structure is None:
            raise ValueError("space has no complex structure")
        return self.dim // 2

    @property
    def m(self):
        """Quaternionic dimension (requires a quaternionic structure)."""
        if self.quaternionic_structure is None:
            raise ValueError("space has no quaternionic structure")
        return self.dim // 4

    def j_matrix(self):
        if self.complex_structure is None:
            raise ValueError("space has no complex structure")
        return self.complex_structure

    def compatible(self, other):
        return self.dim == other.dim

    def __repr__(self):
        tags = []
        if self.complex_structure is not None:
            tags.append("J")
        if self.quaternionic_structure is not None:
            tags.append("IJK")
        extra = f", structure={'+'.join(tags)}" if tags else ""
        return f"EuclideanSpace(dim={self.dim}{extra})"


def _check_same_space(a, b):
    if not a.space.compatible(b.space):
        raise ValueError(f"dimension mismatch: {a.space.dim} vs {b.space.dim}")


class ComplexTensor:
    """Dense complex (0, k)-tensor with components indexed by (i_1, ..., i_k)."""

    def __init__(self, space, components):
        self.space = space
        arr = np.array(components, dtype=complex)
        if arr.shape != (space.dim,) * arr.ndim:
            raise ValueError(f"components shape {arr.shape} incompatible with dim {space.dim}")
        arr.setflags(write=False)
        self.components = arr

    @property
    def rank(self):
        return self.components.ndim

    @classmethod
    def zero(cls, space, rank):
        return cls(space, np.zeros((space.dim,) * rank, dtype=complex))

    @classmethod
    def basis_covector(cls, space, i):
        """Covector dual to e_i (0-based index)."""
        v = np.zeros(space.dim, dtype=complex)
        v[i] = 1.0
        return cls(space, v)

    @classmethod
    def random(cls, space, rank, rng, real=False):
        shape = (space.dim,) * rank
        arr = rng.standard_normal(shape)
        if not real:
            arr = arr + 1j * rng.standard_normal(shape)
        return cls(space, arr)

    def norm2(self):
        """Squared full-tensor norm, sum over every index order."""
        return float(np.sum(np.abs(self.components) ** 2))

    def form_norm2(self):
        """Squared norm in which wedge monomials are unit vectors."""
        return self.norm2() / math.factorial(self.rank)

    def conj(self):
        return ComplexTensor(self.space, np.conj(self.components))

    def copy(self):
        return ComplexTensor(self.space, self.components.copy())

    def allclose(self, other, atol=DEFAULT_ATOL):
        _check_same_space(self, other)
        return np.allclose(self.components, other.components, atol=atol)

    def __add__(self, other):
        _check_same_space(self, other)
        return ComplexTensor(self.space, self.components + other.components)

    def __sub__(self, other):
        _check_same_space(self, other)
        return ComplexTensor(self.space, self.components - other.components)

    def __mul__(self, scalar):
        return ComplexTensor(self.space, self.components * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return ComplexTensor(self.space, -self.components)

    def __repr__(self):
        return f"ComplexTensor(dim={self.space.dim}, rank={self.rank})"


class Bivector:
    """Element of Lambda^2 V on the orthonormal basis {e_i ^ e_j : i < j}.

    The matrix avatar M sends e_i to e_j and e_j to -e_i for the wedge
    monomial e_i ^ e_j, so M[j, i] = +1 and M[i, j] = -1.
    """

    def __init__(self, space, coeffs):
        self.space = space
        c = np.array(coeffs, dtype=float)
        expected = space.dim * (space.dim - 1) // 2
        if c.shape != (expected,):
            raise ValueError(f"coefficient vector has length {c.shape}, expected ({expected},)")
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def zero(cls, space):
        return cls(space, np.zeros(space.dim * (space.dim - 1) // 2))

    @classmethod
    def wedge(cls, space, i, j):
        """The wedge monomial e_i ^ e_j (0-based, any order of i, j)."""
        if i == j:
            raise ValueError("wedge of a vector with itself is zero")
        sign = 1.0
        if i > j:
            i, j, sign = j, i, -1.0
        c = np.zeros(space.dim * (space.dim - 1) // 2)
        c[_pair_index(space.dim)[(i, j)]] = sign
        return cls(space, c)

    @classmethod
    def from_matrix(cls, space, M):
        M = np.asarray(M, dtype=float)
        if not np.allclose(M, -M.T, atol=1e-9 * max(1.0, np.abs(M).max())):
            raise ValueError("matrix avatar must be skew-symmetric")
        c = np.array([M[j, i] for (i, j) in wedge_pairs(space.dim)])
        return cls(space, c)

    @classmethod
    def from_two_form(cls, space, lam):
        """Build from the antisymmetric rank-2 component array lam_{ij}."""
        lam = np.asarray(lam, dtype=float)
        return cls(space, np.array([lam[i, j] for (i, j) in wedge_pairs(space.dim)]))

    @classmethod
    def random(cls, space, rng, unit=False):
        c = rng.standard_normal(space.dim * (space.dim - 1) // 2)
        if unit:
            c = c / np.linalg.norm(c)
        return cls(space, c)

    def matrix(self):
        # coefficients are frozen, so the avatar is computed once
        cached = getattr(self, "_matrix", None)
        if cached is None:
            d = self.space.dim
            idx = np.array(wedge_pairs(d))
            M = np.zeros((d, d))
            M[idx[:, 1], idx[:, 0]] = self.coeffs
            M[idx[:, 0], idx[:, 1]] = -self.coeffs
            M.setflags(write=False)
            self._matrix = cached = M
        return cached

    def two_form(self):
        """The rank-2 antisymmetric component array; equals matrix().T."""
        return self.matrix().T

    def as_tensor(self):
        return ComplexTensor(self.space, self.two_form().astype(complex))

    def norm2(self):
        return float(self.coeffs @ self.coeffs)

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other):
        _check_same_space(self, other)
        return float(self.coeffs @ other.coeffs)

    def __add__(self, other):
        _check_same_space(self, other)
        return Bivector(self.space, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_same_space(self, other)
        return Bivector(self.space, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return Bivector(self.space, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return Bivector(self.space, -self.coeffs)

    def __repr__(self):
        return f"Bivector(dim={self.space.dim}, |L|={self.norm():.4g})"


def bivector_action(L, v):
    """Apply the infinitesimal rotation of L to a vector.

    (X ^ Y) Z = g(X, Z) Y - g(Y, Z) X extended linearly; in matrix terms
    this is M(L) @ v.
    """
    v = np.asarray(v)
    if v.shape != (L.space.dim,):
        raise ValueError(f"vector has shape {v.shape}, expected ({L.space.dim},)")
    return L.matrix() @ v


def lie_bracket(L1, L2):
    """Commutator [L1, L2] of the matrix avatars, returned as a bivector."""
    _check_same_space(L1, L2)
    M1, M2 = L1.matrix(), L2.matrix()
    return Bivector.from_matrix(L1.space, M1 @ M2 - M2 @ M1)


def _act_matrix(M, arr):
    out = np.zeros_like(arr)
    for s in range(arr.ndim):
        contrib = np.tensordot(arr, M, axes=([s], [0]))
        out -= np.moveaxis(contrib, -1, s)
    return out


def act_on_tensor(L, T):
    """Derivation action L T(X_1, ..., X_r) = -sum_i T(X_1, ..., L X_i, ..., X_r)."""
    _check_same_space(L, T)
    return ComplexTensor(T.space, _act_matrix(L.matrix(), T.components))


def hermitian_inner(T, S):
    """Sum of T times conj(S) over all multi-indices; positive definite."""
    _check_same_space(T, S)
    if T.rank != S.rank:
        raise ValueError(f"rank mismatch: {T.rank} vs {S.rank}")
    return complex(np.sum(T.components * np.conj(S.components)))


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, cycle = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return sign


def alternate(T):
    """Full antisymmetrization (1/k!) sum_sigma sign(sigma) T^sigma."""
    arr = T.components
    k = arr.ndim
    if k <= 1:
        return T.copy()
    out = np.zeros_like(arr)
    for perm in itertools.permutations(range(k)):
        out += _perm_sign(perm) * np.transpose(arr, perm)
    return ComplexTensor(T.space, out / math.factorial(k))


def pullback(T, A):
    """Componentwise pullback T(A X_1, ..., A X_k) by a linear map A."""
    arr = T.components
    A = np.asarray(A)
    for s in range(arr.ndim):
        arr = np.moveaxis(np.tensordot(arr, A, axes=([s], [0])), -1, s)
    return ComplexTensor(T.space, arr)


def tensor_to_json(T):
    """Serialize to the interchange dict.

    Components are flattened row-major over (i_1, ..., i_k) with each
    entry a [re, im] pair; indices run 1..dim in the documented order
    (the first index varies slowest).
    """
    space = T.space
    flat = T.components.reshape(-1)
    return {
        "dim": space.dim,
        "rank": T.rank,
        "j_convention": "none" if space.complex_structure is None else "block",
        "components": [[float(z.real), float(z.imag)] for z in flat],
    }


def tensor_from_json(obj, space=None):
    """Rebuild a tensor from the interchange dict.

    When no space is supplied one is created from "dim" and
    "j_convention" ("block" yields the standard block complex structure).
    """
    d = int(obj["dim"])
    k = int(obj["rank"])
    if space is None:
        if obj.get("j_convention", "none") == "block":
            space = EuclideanSpace.complex_space(d // 2)
        else:
            space = EuclideanSpace.euclidean(d)
    elif space.dim != d:
        raise ValueError(f"file dimension {d} does not match target space {space.dim}")
    comps = np.array([complex(re, im) for re, im in obj["components"]])
    if comps.size != d**k:
        raise ValueError(f"expected {d**k} components, got {comps.size}")
    return ComplexTensor(space, comps.reshape((d,) * k))


def save_tensor(T, path):
    with open(path, "w") as fh:
        json.dump(tensor_to_json(T), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_tensor(path, space=None):
    with open(path) as fh:
        return tensor_from_json(json.load(fh), space=space)
