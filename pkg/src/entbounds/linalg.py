"""Dense linear algebra on bipartite operators.

The composite index convention is A-major everywhere: the product basis
state |i>_A |j>_B sits at position i * dim_b + j, i.e. a row-major reshape
of a length dim_a * dim_b vector into shape (dim_a, dim_b). All structural
reshapes below (partial transpose, realignment, partial trace) share this
convention and must never be mixed with another one.

Every function is a pure function of immutable inputs, so concurrent use
needs no locking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    HermiticityError,
    InvalidMatrixError,
)

TAU_HERM = 1e-9   # relative Hermiticity tolerance
TAU_PSD = 1e-9    # positive-semidefiniteness tolerance
TAU_TR = 1e-9     # unit-trace tolerance
TAU_EIG = 1e-10   # eigenpair residual tolerance


def as_complex_matrix(a) -> np.ndarray:
    """Copy ``a`` into a finite 2-d complex128 array."""
    m = np.array(a, dtype=np.complex128, copy=True)
    if m.ndim != 2:
        raise InvalidMatrixError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if not np.isfinite(m).all():
        raise InvalidMatrixError("matrix contains NaN or Inf entries")
    return m


def require_hermitian(h, tol: float = TAU_HERM) -> np.ndarray:
    """Validate Hermiticity within ``tol`` (relative) and return the array."""
    m = as_complex_matrix(h)
    if m.shape[0] != m.shape[1]:
        raise HermiticityError(f"Hermitian matrix must be square, got {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.conj().T).max()) > tol * scale:
        raise HermiticityError("matrix is not Hermitian within tolerance")
    return m


def singular_values(a) -> np.ndarray:
    """Singular values of ``a``, nonincreasing."""
    return np.linalg.svd(as_complex_matrix(a), compute_uv=False)


def hermitian_eigensystem(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns the eigenvalues in nonincreasing order together with matching
    orthonormal eigenvectors as columns.
    """
    m = require_hermitian(h)
    w, v = np.linalg.eigh(m)
    return np.ascontiguousarray(w[::-1]), np.ascontiguousarray(v[:, ::-1])


def trace_norm(a) -> float:
    """Trace norm ||a||_1, the sum of all singular values."""
    return float(singular_values(a).sum())


def ky_fan_norm(a, k: int) -> float:
    """Ky Fan k-norm, the sum of the k largest singular values."""
    s = singular_values(a)
    if not 1 <= k <= s.size:
        raise DomainError(f"k must be in [1, {s.size}], got {k}")
    return float(s[:k].sum())


def _as_dim(x, name: str) -> int:
    try:
        n = int(x)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be an integer") from None
    if n != x:
        raise DomainError(f"{name} must be an integer, got {x!r}")
    return n


@dataclass(frozen=True, eq=False)
class BipartiteOperator:
    """Operator on H_A (x) H_B stored as a dense (m n) x (m n) matrix.

    The convention dim_a <= dim_b (A is the smaller factor) is enforced at
    construction; formulas involving the smaller local dimension rely on it.
    """

    dim_a: int
    dim_b: int
    matrix: np.ndarray

    def __post_init__(self):
        da = _as_dim(self.dim_a, "dim_a")
        db = _as_dim(self.dim_b, "dim_b")
        if not 2 <= da <= db:
            raise DomainError(f"need 2 <= dim_a <= dim_b, got ({da}, {db})")
        m = as_complex_matrix(self.matrix)
        side = da * db
        if m.shape != (side, side):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match ({side}, {side})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "dim_a", da)
        object.__setattr__(self, "dim_b", db)
        object.__setattr__(self, "matrix", m)

    @property
    def side(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    def as4(self) -> np.ndarray:
        """View with row and column indices split into (A, B) pairs."""
        return self.matrix.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Validated quantum state: Hermitian, unit trace, positive semidefinite."""

    op: BipartiteOperator

    def __post_init__(self):
        m = self.op.matrix
        require_hermitian(m, TAU_HERM)
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TAU_TR:
            raise InvalidMatrixError(f"trace must be 1, got {tr}")
        w = np.linalg.eigvalsh(m)
        if float(w[0]) < -TAU_PSD:
            raise InvalidMatrixError(
                f"negative eigenvalue {float(w[0]):.3e} beyond tolerance"
            )

    @classmethod
    def from_matrix(cls, dim_a: int, dim_b: int, matrix) -> "DensityOperator":
        return cls(BipartiteOperator(dim_a, dim_b, matrix))

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dim_a(self) -> int:
        return self.op.dim_a

    @property
    def dim_b(self) -> int:
        return self.op.dim_b

    @property
    def side(self) -> int:
        return self.op.side

    @property
    def dims(self) -> tuple[int, int]:
        return self.op.dims

    def as4(self) -> np.ndarray:
        return self.op.as4()

    def spectrum_clamped(self) -> np.ndarray:
        """Eigenvalues in nonincreasing order, PSD noise clamped to zero.

        Validation already guaranteed every eigenvalue is >= -TAU_PSD; the
        clamp keeps tiny negative noise from flipping the sign of criterion
        margins downstream.
        """
        w = np.linalg.eigvalsh(self.matrix)[::-1]
        return np.where(w < 0.0, 0.0, w)


def density_ky_fan(rho: DensityOperator, k: int) -> float:
    """Ky Fan k-norm of a state, from its clamped eigenvalue spectrum.

    k = 0 is allowed here and gives 0; it shows up in noise-overlap bounds
    when the subspace fills the whole space.
    """
    w = rho.spectrum_clamped()
    if not 0 <= k <= w.size:
        raise DomainError(f"k must be in [0, {w.size}], got {k}")
    return float(w[:k].sum())


def _as_bipartite(x) -> BipartiteOperator:
    if isinstance(x, DensityOperator):
        return x.op
    if isinstance(x, BipartiteOperator):
        return x
    raise InvalidMatrixError(
        "expected a BipartiteOperator or DensityOperator, got "
        f"{type(x).__name__}"
    )


def partial_transpose_b(rho) -> BipartiteOperator:
    """Transpose the B factor: out[(i,j),(k,l)] = in[(i,l),(k,j)]."""
    op = _as_bipartite(rho)
    out = op.as4().transpose(0, 3, 2, 1).reshape(op.side, op.side)
    return BipartiteOperator(op.dim_a, op.dim_b, out)


def partial_transpose_a(rho) -> BipartiteOperator:
    """Transpose the A factor: out[(i,j),(k,l)] = in[(k,j),(i,l)]."""
    op = _as_bipartite(rho)
    out = op.as4().transpose(2, 1, 0, 3).reshape(op.side, op.side)
    return BipartiteOperator(op.dim_a, op.dim_b, out)


def realign(rho) -> np.ndarray:
    """Realignment map: out[(i,j),(k,l)] = in[(i,k),(j,l)], shape (m^2, n^2)."""
    op = _as_bipartite(rho)
    return (
        op.as4()
        .transpose(0, 2, 1, 3)
        .reshape(op.dim_a * op.dim_a, op.dim_b * op.dim_b)
        .copy()
    )


def partial_trace_b(rho) -> np.ndarray:
    """Reduction to the A factor: out[i,k] = sum_j in[(i,j),(k,j)]."""
    return np.einsum("ijkj->ik", _as_bipartite(rho).as4())


def partial_trace_a(rho) -> np.ndarray:
    """Reduction to the B factor: out[j,l] = sum_i in[(i,j),(i,l)]."""
    return np.einsum("ijil->jl", _as_bipartite(rho).as4())


def trace_pairing_bounds(a, b) -> tuple[float, float]:
    """Extremal eigenvalue pairings of tr{AB} for Hermitian A and B.

    Returns (sum_i a_i^dn b_i^up, sum_i a_i^dn b_i^dn) where dn/up denote
    nonincreasing/nondecreasing ordering; tr{AB} always lies inside.
    """
    ma = require_hermitian(a)
    mb = require_hermitian(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"shapes differ: {ma.shape} vs {mb.shape}")
    wa = np.linalg.eigvalsh(ma)  # ascending
    wb = np.linalg.eigvalsh(mb)
    lower = float(wa[::-1] @ wb)
    upper = float(wa @ wb)
    return lower, upper


def hermitian_expectation(rho_matrix: np.ndarray, obs_matrix: np.ndarray) -> float:
    """Re tr{rho H} for Hermitian inputs of equal side."""
    if rho_matrix.shape != obs_matrix.shape:
        raise DimensionMismatchError(
            f"shapes differ: {rho_matrix.shape} vs {obs_matrix.shape}"
        )
    return float(np.einsum("ij,ji->", rho_matrix, obs_matrix).real)
