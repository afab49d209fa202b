"""Entanglement measures where they are exactly computable, ensemble upper
bounds, and the subspace-generalized fully entangled fraction.

Pure-state conventions used throughout:

    C(psi) = sqrt(2 (1 - tr rho_A^2)) = 2 sqrt(sum_{i<j} lam_i lam_j)
    N(psi) = sum_{i<j} sqrt(lam_i lam_j)

with lam the squared Schmidt coefficients. Some conventions rescale the
pure-state negativity by 2/(d-1); this package never does.

For mixed states the convex-roof measures (minimum average over all
ensemble decompositions) are intractable in general. The API therefore
reports exact values only for closed-form families, upper bounds from
explicit ensembles, and lower bounds from the bounds module, with
MeasureValue.kind recording which one a number is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatchError, DomainError, UnsupportedFamilyError
from .linalg import DensityOperator, hermitian_expectation, partial_transpose_b
from .states import EnsembleDecomposition, PureState
from .subspace import SeesawOptions, Subspace, projector

KIND_EXACT = "exact"
KIND_UPPER = "upper_bound"
KIND_LOWER = "lower_bound"


@dataclass(frozen=True)
class MeasureValue:
    """A measure value labelled by how it was obtained."""

    value: float
    kind: str
    method: str

    def __post_init__(self):
        if self.kind not in (KIND_EXACT, KIND_UPPER, KIND_LOWER):
            raise DomainError(f"unknown measure kind {self.kind!r}")
        if self.value < 0.0:
            raise DomainError(f"measure values are nonnegative, got {self.value}")


def concurrence_pure(psi: PureState) -> float:
    """Concurrence of a pure state, sqrt(2 (1 - sum lam_i^2))."""
    lam = psi.schmidt
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - float(lam @ lam)))))


def negativity(rho: DensityOperator) -> float:
    """Negativity (||rho^T_B||_1 - 1) / 2; zero on PPT states."""
    pt = partial_transpose_b(rho).matrix
    w = np.linalg.eigvalsh(pt)
    return max(0.0, 0.5 * (float(np.abs(w).sum()) - 1.0))


def negativity_pure_schmidt(psi: PureState) -> float:
    """Pure-state negativity sum_{i<j} sqrt(lam_i lam_j) from Schmidt data."""
    s = np.sqrt(psi.schmidt)
    total = float(s.sum())
    return max(0.0, 0.5 * (total * total - 1.0))


def cren_upper_from_ensemble(dec: EnsembleDecomposition) -> MeasureValue:
    """Average pure-state negativity of an ensemble.

    Any decomposition upper-bounds the convex roof, so this is an upper
    bound on the convex-roof extended negativity of the reconstruction.
    """
    val = sum(q * negativity_pure_schmidt(st) for q, st in dec.members)
    return MeasureValue(float(val), KIND_UPPER, "ensemble average of N")


def concurrence_upper_from_ensemble(dec: EnsembleDecomposition) -> MeasureValue:
    """Average pure-state concurrence of an ensemble (convex-roof upper bound)."""
    val = sum(q * concurrence_pure(st) for q, st in dec.members)
    return MeasureValue(float(val), KIND_UPPER, "ensemble average of C")


def _family_check(family: str, d: int, param: float) -> None:
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if not 0.0 <= param <= 1.0:
        raise DomainError(f"family parameter must lie in [0, 1], got {param}")


def cren_exact_family(family: str, d: int, param: float) -> MeasureValue:
    """Exact convex-roof extended negativity of a recognized family.

    Families: "isotropic" (param = fidelity F), "werner" (param = weight W),
    and "antisym_phi_mixture" at d = 2 only (param = antisymmetric mass F).
    """
    _family_check(family, d, param)
    if family == "isotropic":
        val = max((param * d - 1.0) / 2.0, 0.0)
    elif family == "werner":
        val = max((2.0 * param - 1.0) / 2.0, 0.0)
    elif family == "antisym_phi_mixture":
        if d != 2:
            raise UnsupportedFamilyError(
                "antisym/phi+ mixture is exactly solvable only at d = 2"
            )
        val = abs(param - 0.5)
    else:
        raise UnsupportedFamilyError(f"unknown family {family!r}")
    return MeasureValue(float(val), KIND_EXACT, f"closed form, {family}")


def concurrence_exact_family(family: str, d: int, param: float) -> MeasureValue:
    """Exact concurrence of a recognized family ("isotropic" or "werner")."""
    _family_check(family, d, param)
    if family == "isotropic":
        val = max(math.sqrt(2.0 * d / (d - 1.0)) * (param - 1.0 / d), 0.0)
    elif family == "werner":
        val = max(math.sqrt(2.0 / (d * (d - 1.0))) * (2.0 * param - 1.0), 0.0)
    else:
        raise UnsupportedFamilyError(
            f"no exact concurrence implemented for family {family!r}"
        )
    return MeasureValue(float(val), KIND_EXACT, f"closed form, {family}")


class FvResult(NamedTuple):
    value: float
    u_a: np.ndarray
    u_b: np.ndarray


DEFAULT_FV_OPTIONS = SeesawOptions(restarts=16, max_sweeps=200, tol=1e-10, seed=0)


def _haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    return q * ph


def _polar_argmax(m: np.ndarray) -> np.ndarray | None:
    """Unitary maximizing Re tr{U M}, or None when M is numerically zero."""
    w, s, vh = np.linalg.svd(m)
    if float(s.max(initial=0.0)) < 1e-15:
        return None
    return vh.conj().T @ w.conj().T


def fully_entangled_fraction_v(
    rho: DensityOperator, v: Subspace, opts: SeesawOptions | None = None
) -> FvResult:
    """Best found value of tr{(U_A x U_B) rho (U_A x U_B)^+ P_V} over local
    unitaries, with the achieving pair.

    Alternating ascent: with U_B held, the exact linear minorant of the
    objective at the current iterate is Re tr{U_A M} with

        M = Tr_B{ (I x U_B) rho (U_A x U_B)^+ P_V },

    maximized in closed form by the unitary polar factor of M (via SVD);
    the B step contracts over A instead. Minorize-maximize guarantees the
    objective never decreases, and the identity pair is always the first
    restart, so the result is at least tr{rho P_V}. The value is a local
    optimum, not a certified global one.
    """
    if rho.dims != v.dims:
        raise DimensionMismatchError(f"dims differ: {rho.dims} vs {v.dims}")
    opts = opts or DEFAULT_FV_OPTIONS
    m, n = rho.dims
    p = projector(v).matrix
    rmat = rho.matrix
    eye_m, eye_n = np.eye(m), np.eye(n)
    rng = np.random.default_rng(opts.seed)

    def objective(ua, ub):
        rot = np.kron(ua, ub)
        return hermitian_expectation(rot @ rmat @ rot.conj().T, p)

    best = FvResult(-np.inf, eye_m, eye_n)
    for restart in range(max(1, opts.restarts)):
        if restart == 0:
            ua, ub = eye_m.astype(complex), eye_n.astype(complex)
        else:
            ua, ub = _haar_unitary(rng, m), _haar_unitary(rng, n)
        val = objective(ua, ub)
        for _ in range(opts.max_sweeps):
            prev = val
            rot = np.kron(ua, ub)
            t = np.kron(eye_m, ub) @ rmat @ rot.conj().T @ p
            ma = np.einsum("ijkj->ik", t.reshape(m, n, m, n))
            upd = _polar_argmax(ma)
            if upd is not None:
                ua = upd
            rot = np.kron(ua, ub)
            t = np.kron(ua, eye_n) @ rmat @ rot.conj().T @ p
            nb = np.einsum("ijil->jl", t.reshape(m, n, m, n))
            upd = _polar_argmax(nb)
            if upd is not None:
                ub = upd
            val = objective(ua, ub)
            if val < prev - 1e-10:
                raise RuntimeError("seesaw objective decreased; numerical failure")
            if val - prev < opts.tol:
                break
        if val > best.value:
            best = FvResult(val, ua, ub)
    return best
