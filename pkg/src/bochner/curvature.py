"""Algebraic curvature tensors, curvature operators and their decompositions.

A curvature tensor here is a purely pointwise object: a real rank-4
tensor with the pair symmetries and the first Bianchi identity, no
manifold attached.  The module provides

* conversion between the (0,4) tensor and the symmetric operator on
  Lambda^2 V (wedge-orthonormal basis),
* Ricci contractions and the Kulkarni-Nomizu product,
* model tensors: flat, constant sectional curvature, constant
  holomorphic sectional curvature (chsc) and the quaternionic projective
  model (hpm),
* the standard splitting of a Kahler curvature tensor into scalar,
  Ricci and totally trace-free (Bochner) parts, and the quaternionic
  splitting into a model multiple plus a Ricci-flat remainder,
* restricted spectra on holonomy subalgebras and the sharp-norm
  identities that relate |Rm^g|^2 to the component norms,
* random generators for curvature classes supported on a holonomy
  subalgebra (symmetric form on the algebra, intersected with the
  Bianchi and optional Ricci-flat constraints).

Norm bookkeeping: |Rm|^2 always denotes the full rank-4 tensor norm and
equals 4 |R|^2, where |R|^2 is the Frobenius norm of the operator.  The
sharp norm |Rm^g|^2 sums full-tensor slice norms; its operator-scaled
variant |Rm^g|^2 / 4 is reported alongside, since the component
identities below take their cleanest form in that scaling.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .holonomy import AlgebraKind, cached_algebra, sharp
from .tensors import Bivector, ComplexTensor, EuclideanSpace, wedge_pairs

__all__ = [
    "AlgebraicCurvatureTensor",
    "CurvatureOperator",
    "KahlerDecomposition",
    "QuaternionDecomposition",
    "to_operator",
    "from_operator",
    "ricci",
    "scalar_curvature",
    "tf_ricci",
    "ricci_form",
    "primitive_ricci_form",
    "kulkarni_nomizu",
    "model",
    "flat_model",
    "constant_sectional_model",
    "chsc_model",
    "quaternionic_projective_model",
    "kahler_decompose",
    "quaternion_decompose",
    "restricted_spectrum",
    "kahler_sharp_identity",
    "quaternion_sharp_identity",
    "sharp_norm_identities",
    "random_curvature",
    "random_kahler_curvature",
    "random_hyperkahler_curvature",
    "random_quaternion_kahler_curvature",
    "curvature_to_json",
    "curvature_from_json",
]

log = logging.getLogger(__name__)


def _kahler_form_array(space):
    """omega_{ab} = g(J e_a, e_b), the Kahler 2-form of the complex structure."""
    return space.j_matrix().T


def _structure_form_array(A):
    return np.asarray(A).T


def _bianchi_residual(arr):
    return arr + np.transpose(arr, (1, 2, 0, 3)) + np.transpose(arr, (2, 0, 1, 3))


def _pair_symmetry_residual(arr):
    r1 = arr + np.transpose(arr, (1, 0, 2, 3))
    r2 = arr + np.transpose(arr, (0, 1, 3, 2))
    r3 = arr - np.transpose(arr, (2, 3, 0, 1))
    return max(np.abs(r1).max(), np.abs(r2).max(), np.abs(r3).max())


class AlgebraicCurvatureTensor:
    """Real rank-4 tensor with curvature symmetries and first Bianchi identity."""

    def __init__(self, space, rm, kahler=False, quaternion=False, validate=True, atol=1e-8):
        self.space = space
        if isinstance(rm, ComplexTensor):
            arr = rm.components
        else:
            arr = np.asarray(rm)
        if np.iscomplexobj(arr):
            if np.abs(arr.imag).max() > atol * max(1.0, np.abs(arr.real).max()):
                raise ValueError("curvature components must be real")
            arr = arr.real
        arr = np.array(arr, dtype=float)
        if arr.shape != (space.dim,) * 4:
            raise ValueError(f"components shape {arr.shape} incompatible with dim {space.dim}")
        arr.setflags(write=False)
        self.array = arr
        self.kahler = bool(kahler)
        self.quaternion = bool(quaternion)
        if validate:
            self._validate(atol)

    def _validate(self, atol):
        scale = max(1.0, np.abs(self.array).max())
        dev = _pair_symmetry_residual(self.array)
        if dev > atol * scale:
            raise ValueError(f"curvature pair symmetries violated, deviation {dev:.2e}")
        dev = np.abs(_bianchi_residual(self.array)).max()
        if dev > atol * scale:
            raise ValueError(f"first Bianchi identity violated, deviation {dev:.2e}")
        if self.kahler:
            J = self.space.j_matrix()
            jj = np.einsum("ax,by,xyzw->abzw", J, J, self.array)
            dev = np.abs(jj - self.array).max()
            if dev > atol * scale:
                raise ValueError(f"Kahler pair invariance violated, deviation {dev:.2e}")
        if self.quaternion and self.space.quaternionic_structure is None:
            raise ValueError("quaternion flag requires a quaternionic structure")

    @property
    def rm(self):
        """The components as a ComplexTensor (real entries)."""
        return ComplexTensor(self.space, self.array.astype(complex))

    def norm2(self):
        return float(np.sum(self.array * self.array))

    def __add__(self, other):
        return AlgebraicCurvatureTensor(
            self.space, self.array + other.array,
            kahler=self.kahler and other.kahler,
            quaternion=self.quaternion and other.quaternion,
            validate=False,
        )

    def __sub__(self, other):
        return AlgebraicCurvatureTensor(
            self.space, self.array - other.array,
            kahler=self.kahler and other.kahler,
            quaternion=self.quaternion and other.quaternion,
            validate=False,
        )

    def __mul__(self, scalar):
        return AlgebraicCurvatureTensor(self.space, self.array * scalar,
                                        kahler=self.kahler, quaternion=self.quaternion,
                                        validate=False)

    __rmul__ = __mul__

    def __repr__(self):
        flags = [f for f, on in (("kahler", self.kahler), ("quaternion", self.quaternion)) if on]
        extra = f", flags={flags}" if flags else ""
        return f"AlgebraicCurvatureTensor(dim={self.space.dim}{extra})"


class CurvatureOperator:
    """Symmetric operator on Lambda^2 V in the wedge-orthonormal basis."""

    def __init__(self, space, matrix, validate=True, atol=1e-9):
        self.space = space
        M = np.asarray(matrix, dtype=float)
        P = space.dim * (space.dim - 1) // 2
        if M.shape != (P, P):
            raise ValueError(f"operator matrix has shape {M.shape}, expected ({P}, {P})")
        if validate and np.abs(M - M.T).max() > atol * max(1.0, np.abs(M).max()):
            raise ValueError("curvature operator must be symmetric")
        M = 0.5 * (M + M.T)
        M.setflags(write=False)
        self.matrix = M

    def apply(self, L):
        return Bivector(L.space, self.matrix @ L.coeffs)

    def norm2(self):
        """Squared Frobenius norm |R|^2; satisfies |Rm|^2 = 4 |R|^2."""
        return float(np.sum(self.matrix * self.matrix))

    def restricted_gram(self, algebra):
        B = algebra.coeff_matrix
        return B @ self.matrix @ B.T

    def leakage(self, algebra):
        """Spectral norm of R applied to the orthogonal complement of the algebra."""
        Q = algebra.complement_projector()
        return float(np.linalg.norm(self.matrix @ Q, 2))

    def __repr__(self):
        return f"CurvatureOperator(dim={self.space.dim})"


def to_operator(rm_tensor, atol=1e-8):
    """Curvature operator with g(R(e_i ^ e_j), e_k ^ e_l) = Rm(e_i, e_j, e_k, e_l).

    The duality |Rm|^2 = 4 |R|^2 is checked on conversion; it holds
    identically once the pair symmetries do.
    """
    arr = rm_tensor.array
    d = rm_tensor.space.dim
    pl = wedge_pairs(d)
    idx = np.array(pl)
    M = arr[idx[:, 0][:, None], idx[:, 1][:, None], idx[:, 0][None, :], idx[:, 1][None, :]]
    op = CurvatureOperator(rm_tensor.space, M)
    rm2, op2 = rm_tensor.norm2(), op.norm2()
    if rm2 > 0 and abs(rm2 - 4 * op2) > atol * rm2:
        raise ValueError(f"norm duality |Rm|^2 = 4|R|^2 violated: {rm2:.6g} vs {4 * op2:.6g}")
    return op


def from_operator(op, kahler=False, quaternion=False, validate=True):
    """Rank-4 tensor of a symmetric operator on Lambda^2 V."""
    d = op.space.dim
    pl = wedge_pairs(d)
    arr = np.zeros((d, d, d, d))
    for a, (i, j) in enumerate(pl):
        row = op.matrix[a]
        for b, (k, l) in enumerate(pl):
            v = row[b]
            arr[i, j, k, l] = v
            arr[j, i, k, l] = -v
            arr[i, j, l, k] = -v
            arr[j, i, l, k] = v
    return AlgebraicCurvatureTensor(op.space, arr, kahler=kahler, quaternion=quaternion,
                                    validate=validate)


def ricci(rm_tensor):
    """Ric(Y, W) = sum_i Rm(e_i, Y, e_i, W); symmetric."""
    return np.einsum("iyiw->yw", rm_tensor.array)


def scalar_curvature(rm_tensor):
    return float(np.trace(ricci(rm_tensor)))


def tf_ricci(rm_tensor):
    """Trace-free Ricci tensor Ric - (scal / d) g."""
    ric = ricci(rm_tensor)
    d = rm_tensor.space.dim
    return ric - (np.trace(ric) / d) * np.eye(d)


def ricci_form(rm_tensor):
    """rho(X, Y) = Ric(J X, Y); antisymmetric for Kahler input."""
    if rm_tensor.space.complex_structure is None:
        raise ValueError("Ricci form needs a complex structure")
    J = rm_tensor.space.j_matrix()
    return np.einsum("xa,xb->ab", J, ricci(rm_tensor))


def primitive_ricci_form(rm_tensor):
    """rho - (scal / d) omega, orthogonal to the Kahler form."""
    if rm_tensor.space.complex_structure is None:
        raise ValueError("Ricci form needs a complex structure")
    d = rm_tensor.space.dim
    scal = scalar_curvature(rm_tensor)
    return ricci_form(rm_tensor) - (scal / d) * _kahler_form_array(rm_tensor.space)


def kulkarni_nomizu(h, k):
    """(h ow k)(X,Y,Z,W) = h(X,Z)k(Y,W) + h(Y,W)k(X,Z) - h(X,W)k(Y,Z) - h(Y,Z)k(X,W).

    For symmetric inputs the output has the curvature pair symmetries
    and satisfies the first Bianchi identity.
    """
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    if h.shape != k.shape or h.ndim != 2:
        raise ValueError("Kulkarni-Nomizu inputs must be rank-2 arrays of equal shape")
    return (np.einsum("xz,yw->xyzw", h, k) + np.einsum("yw,xz->xyzw", h, k)
            - np.einsum("xw,yz->xyzw", h, k) - np.einsum("yz,xw->xyzw", h, k))


def _outer22(a, b):
    return np.einsum("xy,zw->xyzw", a, b)


def flat_model(space):
    # the zero tensor satisfies every symmetry, so it carries whatever
    # flags the space supports
    return AlgebraicCurvatureTensor(space, np.zeros((space.dim,) * 4),
                                    kahler=space.complex_structure is not None,
                                    quaternion=space.quaternionic_structure is not None,
                                    validate=False)


def constant_sectional_model(space, c=1.0):
    """Sectional curvature c: (c/2) g ow g, the identity operator scaled by c."""
    g = np.eye(space.dim)
    return AlgebraicCurvatureTensor(space, (c / 2.0) * kulkarni_nomizu(g, g), validate=False)


def chsc_model(space, c=1.0):
    """Constant holomorphic sectional curvature c.

    (c/4) (1/2 g ow g + 1/2 omega ow omega + 2 omega (x) omega); Einstein
    with Ric = c (n+1)/2 g and scal = c n (n+1).
    """
    g = np.eye(space.dim)
    om = _kahler_form_array(space)
    arr = (c / 4.0) * (0.5 * kulkarni_nomizu(g, g) + 0.5 * kulkarni_nomizu(om, om)
                       + 2.0 * _outer22(om, om))
    return AlgebraicCurvatureTensor(space, arr, kahler=True, validate=False)


def quaternionic_projective_model(space):
    """The quaternionic projective model operator in tensor form.

    R(X ^ Y) = X ^ Y + sum_A (A X ^ A Y + 2 g(X ^ Y, omega_A) omega_A)
    over A in {I, J, K}; Einstein with scal = 16 m (m+2).  Restricted to
    the holonomy algebra it acts as 4 on sp(m) and 4m on sp(1) and
    annihilates the complement.
    """
    if space.quaternionic_structure is None:
        raise ValueError("quaternionic projective model needs a quaternionic structure")
    g = np.eye(space.dim)
    arr = 0.5 * kulkarni_nomizu(g, g)
    for A in space.quaternionic_structure:
        om = _structure_form_array(A)
        arr = arr + 0.5 * kulkarni_nomizu(om, om) + 2.0 * _outer22(om, om)
    return AlgebraicCurvatureTensor(space, arr, quaternion=True, validate=False)


def model(kind, space, c=1.0):
    """Dispatch on the model name: flat | cs | chsc | hpm."""
    kind = str(kind)
    if kind == "flat":
        return flat_model(space)
    if kind in ("cs", "constant_sectional"):
        return constant_sectional_model(space, c)
    if kind == "chsc":
        return chsc_model(space, c)
    if kind == "hpm":
        return quaternionic_projective_model(space)
    raise ValueError(f"unknown model kind {kind!r}")


@dataclass
class KahlerDecomposition:
    """Scalar + Ricci + Bochner splitting of a Kahler curvature tensor."""

    scalar_part: AlgebraicCurvatureTensor
    ricci_part: AlgebraicCurvatureTensor
    bochner: AlgebraicCurvatureTensor
    scal: float
    tf_ricci: np.ndarray
    ricci_form: np.ndarray
    primitive_ricci_form: np.ndarray

    def reassembled(self):
        return self.scalar_part + self.ricci_part + self.bochner

    def bochner_traces(self):
        """Max absolute value of the two trace sums of the Bochner part."""
        B = self.bochner.array
        J = self.bochner.space.j_matrix()
        tr1 = np.einsum("iyiw->yw", B)
        tr2 = np.einsum("bi,ibzw->zw", J.T, B)
        return float(np.abs(tr1).max()), float(np.abs(tr2).max())


def kahler_decompose(rm_tensor):
    """Split a Kahler curvature tensor into scalar, Ricci and Bochner parts.

    scalar_part = scal/(4n(n+1)) (1/2 g ow g + 1/2 omega ow omega + 2 omega (x) omega)
    ricci_part  = 1/(2(n+2)) (tfRic ow g + rho0 ow omega + 2 (rho0 (x) omega + omega (x) rho0))
    bochner     = remainder, totally trace-free.
    """
    if not rm_tensor.kahler:
        raise ValueError("Kahler decomposition needs a Kahler curvature tensor")
    space = rm_tensor.space
    n = space.n
    g = np.eye(space.dim)
    om = _kahler_form_array(space)
    scal = scalar_curvature(rm_tensor)
    tfric = tf_ricci(rm_tensor)
    rho0 = primitive_ricci_form(rm_tensor)
    scalar_arr = (scal / (4.0 * n * (n + 1))) * (
        0.5 * kulkarni_nomizu(g, g) + 0.5 * kulkarni_nomizu(om, om) + 2.0 * _outer22(om, om))
    ricci_arr = (1.0 / (2.0 * (n + 2))) * (
        kulkarni_nomizu(tfric, g) + kulkarni_nomizu(rho0, om)
        + 2.0 * (_outer22(rho0, om) + _outer22(om, rho0)))
    bochner_arr = rm_tensor.array - scalar_arr - ricci_arr
    mk = lambda a: AlgebraicCurvatureTensor(space, a, kahler=True, validate=False)
    return KahlerDecomposition(mk(scalar_arr), mk(ricci_arr), mk(bochner_arr),
                               scal, tfric, ricci_form(rm_tensor), rho0)


@dataclass
class QuaternionDecomposition:
    """Model multiple plus Ricci-flat remainder of a quaternionic curvature tensor."""

    hp_coefficient: float
    r0: AlgebraicCurvatureTensor
    leakage: float

    def ricci_residual(self):
        return float(np.abs(ricci(self.r0)).max())


def quaternion_decompose(rm_tensor, leak_tol=1e-8):
    """Split Rm = coeff * hpm + R0 with coeff = scal / (16 m (m+2)).

    The input operator must annihilate the complement of sp(m)+sp(1);
    the measured leakage is raised as an error above `leak_tol` and
    reported otherwise.  The remainder is Ricci-flat.
    """
    space = rm_tensor.space
    if space.quaternionic_structure is None:
        raise ValueError("quaternionic decomposition needs a quaternionic structure")
    m = space.m
    if m < 2:
        raise ValueError("quaternionic decomposition needs m >= 2")
    algebra = cached_algebra(space, AlgebraKind.SP_SP1)
    op = to_operator(rm_tensor)
    leak = op.leakage(algebra)
    scale = max(1.0, float(np.abs(op.matrix).max()))
    if leak > leak_tol * scale:
        raise ValueError(
            f"operator does not annihilate the sp(m)+sp(1) complement: residual {leak:.3e}")
    scal = scalar_curvature(rm_tensor)
    coeff = scal / (16.0 * m * (m + 2))
    r0 = AlgebraicCurvatureTensor(
        space, rm_tensor.array - coeff * quaternionic_projective_model(space).array,
        quaternion=True, validate=False)
    return QuaternionDecomposition(coeff, r0, leak)


def restricted_spectrum(op, algebra):
    """Ascending eigenvalues of the Gram restriction [g(R Xi_a, Xi_b)].

    Returns (eigenvalues, leakage); leakage is the spectral norm of the
    operator applied to the complement of the algebra and is reported,
    never raised.
    """
    gram = op.restricted_gram(algebra)
    vals = np.linalg.eigvalsh(gram)
    return vals, op.leakage(algebra)


# ---------------------------------------------------------------------------
# sharp-norm identities


def kahler_sharp_identity(rm_tensor, algebra=None):
    """Norm identity between the u(n) sharp of Rm and its component norms.

    With full-tensor norms the identity reads

        |Rm^u|^2 = 4 (n+1) |Rm - S|^2 - 16 |tfRic|^2,

    where S is the constant-holomorphic-sectional part of the splitting.
    Dividing the two curvature norms by 4 (the operator scaling) turns
    the Ricci coefficient into 4, which is the form the report exposes
    as lhs_operator / rhs_operator.  Both scalings are returned, along
    with the trace-free-operator variant of |Rm - S|^2 for comparison.
    """
    if not rm_tensor.kahler:
        raise ValueError("identity applies to Kahler curvature tensors")
    space = rm_tensor.space
    n = space.n
    if algebra is None:
        algebra = cached_algebra(space, AlgebraKind.U)
    dec = kahler_decompose(rm_tensor)
    sh = sharp(rm_tensor.rm, algebra)
    lhs = sh.norm2()
    ringed = rm_tensor.array - dec.scalar_part.array
    ringed_norm2 = float(np.sum(ringed * ringed))
    tfric_norm2 = float(np.sum(dec.tf_ricci * dec.tf_ricci))
    # the trace-free Gram restriction does not vanish on the chsc model,
    # so it cannot play the role of the ringed norm; exposed for comparison
    gram = to_operator(rm_tensor).restricted_gram(algebra)
    gram_tf = gram - (np.trace(gram) / gram.shape[0]) * np.eye(gram.shape[0])
    rhs_tensor = 4.0 * (n + 1) * ringed_norm2 - 16.0 * tfric_norm2
    report = {
        "n": n,
        "lhs_tensor": lhs,
        "rhs_tensor": rhs_tensor,
        "lhs_operator": lhs / 4.0,
        "rhs_operator": (n + 1) * ringed_norm2 - 4.0 * tfric_norm2,
        "ringed_norm2_tensor": ringed_norm2,
        "ringed_norm2_operator": ringed_norm2 / 4.0,
        "ringed_norm2_gram_tracefree": float(np.sum(gram_tf * gram_tf)),
        "tf_ricci_norm2": tfric_norm2,
    }
    denom = max(abs(report["lhs_tensor"]), abs(report["rhs_tensor"]), 1e-300)
    report["relative_deviation"] = abs(report["lhs_tensor"] - report["rhs_tensor"]) / denom
    return report


def quaternion_sharp_identity(rm_tensor, algebra=None, leak_tol=1e-8):
    """Norm ratio between the sp(m)+sp(1) sharp of Rm and its remainder.

    The sharp norm of a quaternionic curvature tensor comes entirely
    from the Ricci-flat remainder R0 (the model part is invariant and
    the sp(1) slices of R0 vanish since sp(1) centralizes sp(m)).  The
    measured invariant ratio is

        |Rm^sp|^2 = 4 (m+2) |R0|^2

    in full-tensor norms; the report also evaluates the nominal
    (4/3)(3m+4) coefficient for comparison.
    """
    space = rm_tensor.space
    m = space.m
    if algebra is None:
        algebra = cached_algebra(space, AlgebraKind.SP_SP1)
    dec = quaternion_decompose(rm_tensor, leak_tol=leak_tol)
    sh = sharp(rm_tensor.rm, algebra)
    lhs = sh.norm2()
    r0_norm2 = dec.r0.norm2()
    slice_norms = sh.slice_norms2()
    report = {
        "m": m,
        "lhs_tensor": lhs,
        "r0_norm2": r0_norm2,
        "measured_coefficient": 4.0 * (m + 2),
        "rhs_measured": 4.0 * (m + 2) * r0_norm2,
        "nominal_coefficient": (4.0 / 3.0) * (3 * m + 4),
        "rhs_nominal": (4.0 / 3.0) * (3 * m + 4) * r0_norm2,
        "sp1_slice_norm2": float(np.sum(slice_norms[:3])),
        "hp_coefficient": dec.hp_coefficient,
    }
    denom = max(abs(lhs), abs(report["rhs_measured"]), 1e-300)
    report["relative_deviation_measured"] = abs(lhs - report["rhs_measured"]) / denom
    denom = max(abs(lhs), abs(report["rhs_nominal"]), 1e-300)
    report["relative_deviation_nominal"] = abs(lhs - report["rhs_nominal"]) / denom
    return report


def sharp_norm_identities(rm_tensor):
    """Dispatch the applicable sharp-norm identity report by flag."""
    if rm_tensor.kahler:
        return kahler_sharp_identity(rm_tensor)
    if rm_tensor.quaternion:
        return quaternion_sharp_identity(rm_tensor)
    raise ValueError("tensor carries neither the kahler nor the quaternion flag")


# ---------------------------------------------------------------------------
# random generators


def random_curvature(space, rng, scale=1.0):
    """Random algebraic curvature tensor (full so(d) support).

    Draws a random symmetric operator on Lambda^2 and removes the
    rank-4 alternation, which is the orthogonal projection onto the
    subspace satisfying the first Bianchi identity.
    """
    P = space.dim * (space.dim - 1) // 2
    M = rng.standard_normal((P, P)) * scale
    M = 0.5 * (M + M.T)
    arr = from_operator(CurvatureOperator(space, M), validate=False).array
    alt = (arr + np.transpose(arr, (1, 2, 0, 3)) + np.transpose(arr, (2, 0, 1, 3))) / 3.0
    return AlgebraicCurvatureTensor(space, arr - alt, validate=False)


_SUPPORTED_BASIS_CACHE: dict = {}
_SPM_SPAN_CACHE: dict = {}


class _BivectorSpan:
    """Plain orthonormal span of bivectors, used by the random generators."""

    def __init__(self, space, rows):
        self.space = space
        self.coeff_matrix = np.array(rows)
        self.basis = [Bivector(space, r) for r in rows]


def _sp_m_span(space):
    """Span of the skew commutant of {I, J, K}: the sp(m) block alone."""
    key = space
    if key not in _SPM_SPAN_CACHE:
        from .holonomy import _skew_commutant, gram_schmidt

        I, J, K = space.quaternionic_structure
        rows = gram_schmidt(list(_skew_commutant(space, [I, J])))
        _SPM_SPAN_CACHE[key] = _BivectorSpan(space, rows)
    return _SPM_SPAN_CACHE[key]


def _supported_curvature_basis(algebra, ricci_flat=False):
    """Basis tensors of {Rm supported on the algebra, Bianchi, (Ricci-flat)}.

    Parametrizes symmetric forms on the algebra by their upper triangle,
    imposes the linear constraints and returns, for each nullspace
    direction, the corresponding rank-4 tensor.  Cached per algebra.
    """
    key = (algebra, ricci_flat)
    if key in _SUPPORTED_BASIS_CACHE:
        return _SUPPORTED_BASIS_CACHE[key]
    space = algebra.space
    d = space.dim
    lams = [b.two_form() for b in algebra.basis]
    N = len(lams)
    sym_tensors = []
    for a in range(N):
        for b in range(a, N):
            t = _outer22(lams[a], lams[b])
            if a != b:
                t = t + _outer22(lams[b], lams[a])
            sym_tensors.append(t)
    quads = list(itertools.combinations(range(d), 4))
    rows = []
    for t in sym_tensors:
        br = _bianchi_residual(t)
        row = [br[i, j, k, l] for (i, j, k, l) in quads]
        if ricci_flat:
            rc = np.einsum("iyiw->yw", t)
            row.extend(rc[i, j] for i in range(d) for j in range(i, d))
        rows.append(np.array(row))
    A = np.array(rows)
    u, s, vh = np.linalg.svd(A.T, full_matrices=True)
    rank = int(np.sum(s > 1e-9 * (s[0] if s.size else 1.0)))
    null = vh[rank:]
    basis = []
    for coeffs in null:
        arr = np.zeros((d, d, d, d))
        for c, t in zip(coeffs, sym_tensors):
            arr += c * t
        basis.append(arr)
    _SUPPORTED_BASIS_CACHE[key] = basis
    return basis


def _random_supported(algebra, rng, ricci_flat, kahler=False, quaternion=False, scale=1.0):
    basis = _supported_curvature_basis(algebra, ricci_flat=ricci_flat)
    coeffs = rng.standard_normal(len(basis)) * scale
    arr = np.zeros((algebra.space.dim,) * 4)
    for c, t in zip(coeffs, basis):
        arr += c * t
    return AlgebraicCurvatureTensor(algebra.space, arr, kahler=kahler,
                                    quaternion=quaternion, validate=False)


def random_kahler_curvature(space, rng, algebra=None, scale=1.0):
    """Random Kahler curvature tensor: u(n)-supported symmetric form with Bianchi."""
    if algebra is None:
        algebra = cached_algebra(space, AlgebraKind.U)
    return _random_supported(algebra, rng, ricci_flat=False, kahler=True, scale=scale)


def random_hyperkahler_curvature(space, rng, scale=1.0):
    """Random Ricci-flat curvature tensor supported on sp(m) alone."""
    if space.quaternionic_structure is None:
        raise ValueError("hyperkahler generator needs a quaternionic structure")
    return _random_supported(_sp_m_span(space), rng, ricci_flat=True,
                             quaternion=True, scale=scale)


def random_quaternion_kahler_curvature(space, rng, model_weight=1.0, scale=1.0):
    """Model multiple plus a random hyperkahler remainder."""
    base = quaternionic_projective_model(space) * (model_weight * (0.5 + rng.random()))
    pert = random_hyperkahler_curvature(space, rng, scale=scale)
    return base + pert


# ---------------------------------------------------------------------------
# JSON


def curvature_to_json(rm_tensor):
    from .tensors import tensor_to_json

    obj = tensor_to_json(rm_tensor.rm)
    obj["kind"] = "curvature"
    flags = []
    if rm_tensor.kahler:
        flags.append("kahler")
    if rm_tensor.quaternion:
        flags.append("quaternion")
    if flags:
        obj["flags"] = flags
    return obj


def curvature_from_json(obj, validate=True):
    from .tensors import tensor_from_json

    if obj.get("kind") != "curvature":
        raise ValueError("not a curvature file (missing kind == 'curvature')")
    flags = obj.get("flags", [])
    d = int(obj["dim"])
    if "quaternion" in flags:
        if d % 4 != 0:
            raise ValueError("quaternion flag needs dim divisible by 4")
        space = EuclideanSpace.quaternionic_space(d // 4)
    elif obj.get("j_convention", "none") == "block" or "kahler" in flags:
        space = EuclideanSpace.complex_space(d // 2)
    else:
        space = EuclideanSpace.euclidean(d)
    T = tensor_from_json(obj, space=space)
    return AlgebraicCurvatureTensor(space, T, kahler="kahler" in flags,
                                    quaternion="quaternion" in flags, validate=validate)


def save_curvature(rm_tensor, path):
    import json as _json

    with open(path, "w") as fh:
        _json.dump(curvature_to_json(rm_tensor), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_curvature(path, validate=True):
    import json as _json

    with open(path) as fh:
        return curvature_from_json(_json.load(fh), validate=validate)
