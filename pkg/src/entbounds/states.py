"""Pure and mixed bipartite states: Schmidt machinery, canonical families,
ensembles, and seeded random generators.

Schmidt convention: for |psi> = sum_i sqrt(lam_i) |a_i b_i> the ``schmidt``
vector of a state holds the squared coefficients lam_i, nonincreasing and
summing to 1. These are the squared singular values of the m x n coefficient
matrix of the state, which is its amplitude vector reshaped A-major.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    InvalidMatrixError,
    ParseError,
)
from .linalg import DensityOperator

_NORM_TOL = 1e-12
_RANK_TOL = 1e-12


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on the m*n product space, components in A-major order."""

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        da, db = int(self.dim_a), int(self.dim_b)
        if not 2 <= da <= db:
            raise DomainError(f"need 2 <= dim_a <= dim_b, got ({da}, {db})")
        v = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        if v.size != da * db:
            raise DimensionMismatchError(
                f"amplitude vector has length {v.size}, expected {da * db}"
            )
        if not np.isfinite(v).all():
            raise InvalidMatrixError("amplitudes contain NaN or Inf")
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > _NORM_TOL:
            raise InvalidMatrixError(f"state vector norm is {nrm}, expected 1")
        v.setflags(write=False)
        object.__setattr__(self, "dim_a", da)
        object.__setattr__(self, "dim_b", db)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def from_coeff_matrix(cls, c) -> "PureState":
        c = np.asarray(c, dtype=np.complex128)
        return cls(c.shape[0], c.shape[1], c.reshape(-1))

    @classmethod
    def normalized(cls, dim_a: int, dim_b: int, amplitudes) -> "PureState":
        """Construct after dividing by the vector norm."""
        v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise InvalidMatrixError("cannot normalize the zero vector")
        return cls(dim_a, dim_b, v / nrm)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    @cached_property
    def coeff_matrix(self) -> np.ndarray:
        """m x n matrix c with |psi> = sum_ij c[i,j] |i>_A |j>_B."""
        return self.amplitudes.reshape(self.dim_a, self.dim_b)

    @cached_property
    def schmidt(self) -> np.ndarray:
        """Squared Schmidt coefficients, nonincreasing."""
        s = np.linalg.svd(self.coeff_matrix, compute_uv=False)
        return s * s

    def density(self) -> DensityOperator:
        return DensityOperator.from_matrix(
            self.dim_a, self.dim_b, np.outer(self.amplitudes, self.amplitudes.conj())
        )

    def overlap(self, other: "PureState") -> complex:
        """<self|other>."""
        if self.dims != other.dims:
            raise DimensionMismatchError(f"dims differ: {self.dims} vs {other.dims}")
        return complex(self.amplitudes.conj() @ other.amplitudes)


def schmidt_decompose(psi: PureState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt data of a pure state.

    Returns ``(lam, alphas, betas)``: squared coefficients in nonincreasing
    order and two orthonormal stacks of vectors as columns, such that
    ``sum_k sqrt(lam[k]) * kron(alphas[:, k], betas[:, k])`` rebuilds the
    amplitudes. The phase of each pair is fixed by making the first sizable
    component of the left vector real positive, so decompositions are
    reproducible away from degenerate coefficients.
    """
    u, s, vh = np.linalg.svd(psi.coeff_matrix, full_matrices=False)
    alphas = u.copy()
    betas = vh.T.copy()
    for k in range(s.size):
        col = alphas[:, k]
        idx = int(np.argmax(np.abs(col) > 1e-12))
        ph = col[idx] / abs(col[idx])
        alphas[:, k] = col * ph.conjugate()
        betas[:, k] = betas[:, k] * ph
    return s * s, alphas, betas


def max_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_j |jj> on a d x d system."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    v = np.zeros(d * d, dtype=np.complex128)
    v[np.arange(d) * d + np.arange(d)] = 1.0 / np.sqrt(d)
    return PureState(d, d, v)


def _basis_ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1.0
    return v


def _pair_state(d: int, i: int, j: int, sign: float) -> np.ndarray:
    """(|ij> + sign |ji>) / sqrt(2) as a length d*d vector."""
    v = np.zeros(d * d, dtype=np.complex128)
    v[i * d + j] = 1.0 / np.sqrt(2)
    v[j * d + i] = sign / np.sqrt(2)
    return v


def antisym_basis(d: int) -> list[PureState]:
    """Orthonormal basis (|ij> - |ji>)/sqrt(2), i < j, of the antisymmetric
    subspace. Each member has Schmidt spectrum (1/2, 1/2, 0, ...)."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    return [
        PureState(d, d, _pair_state(d, i, j, -1.0))
        for i in range(d)
        for j in range(i + 1, d)
    ]


def _symmetric_projector(d: int) -> np.ndarray:
    p = np.zeros((d * d, d * d), dtype=np.complex128)
    for k in range(d):
        v = np.kron(_basis_ket(d, k), _basis_ket(d, k))
        p += np.outer(v, v.conj())
    for i in range(d):
        for j in range(i + 1, d):
            v = _pair_state(d, i, j, 1.0)
            p += np.outer(v, v.conj())
    return p


def _antisymmetric_projector(d: int) -> np.ndarray:
    p = np.zeros((d * d, d * d), dtype=np.complex128)
    for st in antisym_basis(d):
        p += np.outer(st.amplitudes, st.amplitudes.conj())
    return p


def isotropic(d: int, fidelity: float) -> DensityOperator:
    """Mixture of |Phi+><Phi+| with white noise at fixed fidelity F:

        rho_F = (1-F)/(d^2-1) (I - |Phi+><Phi+|) + F |Phi+><Phi+|
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if not 0.0 <= fidelity <= 1.0:
        raise DomainError(f"fidelity must lie in [0, 1], got {fidelity}")
    phi = max_entangled(d).amplitudes
    p = np.outer(phi, phi.conj())
    rho = ((1.0 - fidelity) / (d * d - 1.0)) * (np.eye(d * d) - p) + fidelity * p
    return DensityOperator.from_matrix(d, d, rho)


def werner(d: int, weight: float) -> DensityOperator:
    """Werner state with antisymmetric weight W:

        2(1-W)/(d(d+1)) * (sum_k |kk><kk| + sum_{i<j} |P+_ij><P+_ij|)
          + 2W/(d(d-1)) * sum_{i<j} |P-_ij><P-_ij|

    where |P+-_ij> = (|ij> +- |ji>)/sqrt(2). The expectation of the
    antisymmetric projector in this state equals W.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if not 0.0 <= weight <= 1.0:
        raise DomainError(f"weight must lie in [0, 1], got {weight}")
    rho = (2.0 * (1.0 - weight) / (d * (d + 1))) * _symmetric_projector(d)
    rho += (2.0 * weight / (d * (d - 1))) * _antisymmetric_projector(d)
    return DensityOperator.from_matrix(d, d, rho)


def mixture_antisym_phi_plus(d: int, fraction: float) -> DensityOperator:
    """Mixture of the normalized antisymmetric projector (mass F) with
    |Phi+><Phi+| (mass 1-F):

        rho = 2F/(d(d-1)) sum_{i<j} |P-_ij><P-_ij| + (1-F) |Phi+><Phi+|
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"fraction must lie in [0, 1], got {fraction}")
    phi = max_entangled(d).amplitudes
    rho = (2.0 * fraction / (d * (d - 1))) * _antisymmetric_projector(d)
    rho += (1.0 - fraction) * np.outer(phi, phi.conj())
    return DensityOperator.from_matrix(d, d, rho)


@dataclass(frozen=True, eq=False)
class EnsembleDecomposition:
    """List of (probability, PureState) pairs reconstructing a state."""

    members: tuple

    def __post_init__(self):
        members = tuple((float(q), st) for q, st in self.members)
        if not members:
            raise DomainError("ensemble needs at least one member")
        dims = members[0][1].dims
        total = 0.0
        for q, st in members:
            if q <= 0.0:
                raise DomainError(f"ensemble probabilities must be positive, got {q}")
            if st.dims != dims:
                raise DimensionMismatchError("ensemble members have mixed dimensions")
            total += q
        if abs(total - 1.0) > 1e-10:
            raise DomainError(f"ensemble probabilities sum to {total}, expected 1")
        object.__setattr__(self, "members", members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def dims(self) -> tuple[int, int]:
        return self.members[0][1].dims

    def reconstruct(self) -> DensityOperator:
        da, db = self.dims
        rho = np.zeros((da * db, da * db), dtype=np.complex128)
        for q, st in self.members:
            rho += q * np.outer(st.amplitudes, st.amplitudes.conj())
        return DensityOperator.from_matrix(da, db, rho)


def mixture_defining_ensemble(d: int, fraction: float) -> EnsembleDecomposition:
    """The defining ensemble of ``mixture_antisym_phi_plus``: each
    antisymmetric pair state with probability 2F/(d(d-1)) plus |Phi+> with
    probability 1-F. Zero-probability members are dropped at F = 0 or 1.

    Away from eigenvalue collisions this coincides with the spectral
    ensemble; at a collision the spectral basis is not unique, while this
    ensemble stays well defined.
    """
    members = []
    q_anti = 2.0 * fraction / (d * (d - 1))
    if q_anti > 0.0:
        members.extend((q_anti, st) for st in antisym_basis(d))
    if 1.0 - fraction > 0.0:
        members.append((1.0 - fraction, max_entangled(d)))
    return EnsembleDecomposition(tuple(members))


def eigen_ensemble(rho: DensityOperator, tol: float = _RANK_TOL) -> EnsembleDecomposition:
    """Spectral decomposition of a state as an ensemble of its eigenvectors.

    Within a degenerate eigenvalue the member states are an arbitrary
    orthonormal basis of the eigenspace; only spectra and reconstructions
    are reproducible across platforms there.
    """
    w, v = np.linalg.eigh(rho.matrix)
    order = np.argsort(w)[::-1]
    members = []
    for i in order:
        if w[i] > tol:
            members.append((float(w[i]), PureState(rho.dim_a, rho.dim_b, v[:, i])))
    total = sum(q for q, _ in members)
    members = [(q / total, st) for q, st in members]
    return EnsembleDecomposition(tuple(members))


def random_pure(dim_a: int, dim_b: int, seed=None) -> PureState:
    """Haar-random pure state: a normalized complex Gaussian vector."""
    if not 2 <= dim_a <= dim_b:
        raise DomainError(f"need 2 <= dim_a <= dim_b, got ({dim_a}, {dim_b})")
    g = _rng(seed)
    n = dim_a * dim_b
    v = g.standard_normal(n) + 1j * g.standard_normal(n)
    return PureState(dim_a, dim_b, v / np.linalg.norm(v))


def random_density(dim_a: int, dim_b: int, rank: int, seed=None) -> DensityOperator:
    """Random state G G^+ / tr{G G^+} with G an (m n) x rank complex Gaussian."""
    if not 2 <= dim_a <= dim_b:
        raise DomainError(f"need 2 <= dim_a <= dim_b, got ({dim_a}, {dim_b})")
    n = dim_a * dim_b
    if not 1 <= rank <= n:
        raise DomainError(f"rank must be in [1, {n}], got {rank}")
    g = _rng(seed)
    G = g.standard_normal((n, rank)) + 1j * g.standard_normal((n, rank))
    rho = G @ G.conj().T
    rho /= np.trace(rho).real
    return DensityOperator.from_matrix(dim_a, dim_b, rho)


def random_ensemble(rho: DensityOperator, size: int, seed=None) -> EnsembleDecomposition:
    """Random exact ensemble decomposition of ``rho`` with ``size`` members.

    Uses the standard ensemble freedom: a Haar-random isometry T of shape
    (size, rank) mixes the scaled eigenvectors,

        sqrt(q_u) |Phi_u> = sum_i T[u, i] sqrt(e_i) |v_i>,

    which reconstructs rho exactly for any such T.
    """
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > _RANK_TOL
    e = w[keep]
    vecs = v[:, keep]
    rank = int(e.size)
    if size < rank:
        raise DomainError(f"ensemble size {size} is below the state rank {rank}")
    g = _rng(seed)
    G = g.standard_normal((size, rank)) + 1j * g.standard_normal((size, rank))
    q_fac, r_fac = np.linalg.qr(G)
    phases = np.diagonal(r_fac).copy()
    phases /= np.abs(phases)
    T = q_fac * phases  # Haar isometry, T^+ T = I_rank
    scaled = vecs * np.sqrt(e)
    W = scaled @ T.T  # column u = sqrt(q_u) |Phi_u>
    members = []
    for u in range(size):
        q = float(np.linalg.norm(W[:, u]) ** 2)
        if q <= 1e-14:
            continue
        members.append((q, PureState(rho.dim_a, rho.dim_b, W[:, u] / np.sqrt(q))))
    return EnsembleDecomposition(tuple(members))


# ---------------------------------------------------------------------------
# State files: JSON with complex numbers written as [re, im] pairs.
# Pure states store a flat amplitude list; densities store the matrix rows
# concatenated in row-major order.

def _pairs_from_complex(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v.reshape(-1)]


def _complex_from_pairs(pairs, expected: int, what: str) -> np.ndarray:
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError(f"{what} must be a list of [re, im] pairs")
    if arr.shape[0] != expected:
        raise ParseError(f"{what} has {arr.shape[0]} entries, expected {expected}")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_dict(state) -> dict:
    if isinstance(state, PureState):
        return {
            "dim_a": state.dim_a,
            "dim_b": state.dim_b,
            "kind": "pure",
            "data": _pairs_from_complex(state.amplitudes),
        }
    if isinstance(state, DensityOperator):
        return {
            "dim_a": state.dim_a,
            "dim_b": state.dim_b,
            "kind": "density",
            "data": _pairs_from_complex(state.matrix),
        }
    raise InvalidMatrixError(f"cannot serialize {type(state).__name__}")


def state_from_dict(payload: dict):
    if not isinstance(payload, dict):
        raise ParseError("state file must hold a JSON object")
    try:
        da = int(payload["dim_a"])
        db = int(payload["dim_b"])
        kind = payload["kind"]
        data = payload["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"state file missing or malformed field: {exc}") from exc
    side = da * db
    if kind == "pure":
        v = _complex_from_pairs(data, side, "pure state data")
        return PureState(da, db, v)
    if kind == "density":
        flat = _complex_from_pairs(data, side * side, "density data")
        return DensityOperator.from_matrix(da, db, flat.reshape(side, side))
    raise ParseError(f"unknown state kind {kind!r}")


def save_state(state, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_state(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return state_from_dict(payload)
