"""Stability of detected entanglement under perturbations and mixing.

Once the criterion margin delta = tr{rho P_V} - lam_sup is positive, the
detection survives any admissible Hermitian perturbation D (traceless,
state-preserving) whose Ky Fan k-norm stays strictly below delta, where
k = dim V: the projector has exactly k unit singular values, so
|tr{P_V D}| <= ||D||_(k). For Hermitian D that norm is the sum of the k
largest absolute eigenvalues.

Mixing with a noise state rho_M keeps (1-p) rho + p rho_M detected for

    p < delta / (lam_sup + delta + ||rho_M||_(mn-k) - 1),

because 1 - ||rho_M||_(mn-k) <= tr{P_V rho_M} <= ||rho_M||_(k) from the
extremal eigenvalue pairings of the trace. When V is exactly the support
of rho (so tr{P_V rho} = 1 and delta = 1 - lam_sup), the threshold reduces
to (1 - lam_sup) / ||rho_M||_(mn-k).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidPerturbationError,
    NotDetectedError,
)
from .linalg import (
    TAU_PSD,
    DensityOperator,
    density_ky_fan,
    hermitian_expectation,
    require_hermitian,
)
from .subspace import LambdaSup, Subspace, projector
from .bounds import separability_test

_TRACELESS_TOL = 1e-10
_CAP_SLACK = 1e-9


@dataclass(frozen=True)
class PerturbationGate:
    """Norm budget below which perturbations cannot erase a detection."""

    k: int
    delta: float
    threshold: float


@dataclass(frozen=True)
class MixingThreshold:
    """Mixing probability below which detection provably survives."""

    p_max: float
    lambda_sup: float
    delta: float
    noise_kyfan: float

    def to_dict(self) -> dict:
        return {
            "p_max": self.p_max,
            "lambda_sup": self.lambda_sup,
            "delta": self.delta,
            "noise_kyfan": self.noise_kyfan,
        }


class PerturbationVerdict(enum.Enum):
    ENTANGLED_GUARANTEED = "entangled_guaranteed"
    INCONCLUSIVE = "inconclusive"


def perturbation_gate(
    rho: DensityOperator, v: Subspace, lam: LambdaSup | None = None
) -> PerturbationGate:
    """Gate with threshold delta = tr{rho P_V} - lam_sup, requiring delta > 0.

    Also verifies the structural cap delta <= ||rho||_(k) - lam_sup, which
    holds for any correct inputs.
    """
    result = separability_test(rho, v, lam)
    if result.delta <= 0.0:
        raise NotDetectedError(
            f"criterion margin is {result.delta}; no entanglement detected"
        )
    lv = result.lambda_sup.bound_value
    cap = density_ky_fan(rho, v.dim) - lv
    if result.delta > cap + _CAP_SLACK:
        raise RuntimeError(f"margin {result.delta} exceeds its cap {cap}")
    return PerturbationGate(k=v.dim, delta=result.delta, threshold=result.delta)


def check_perturbation(
    gate: PerturbationGate, rho: DensityOperator, delta_op
) -> PerturbationVerdict:
    """Decide whether rho + D is guaranteed entangled.

    D must be Hermitian, traceless within 1e-10, and keep rho + D positive
    semidefinite; violations raise. The guarantee needs ||D||_(k) strictly
    below the gate threshold, so the boundary case is inconclusive.
    """
    d = require_hermitian(delta_op)
    if d.shape != rho.matrix.shape:
        raise DimensionMismatchError(
            f"perturbation shape {d.shape} does not match state {rho.matrix.shape}"
        )
    tr = complex(np.trace(d))
    if abs(tr) > _TRACELESS_TOL:
        raise InvalidPerturbationError(f"perturbation trace is {tr}, expected 0")
    w_sum = np.linalg.eigvalsh(rho.matrix + d)
    if float(w_sum[0]) < -TAU_PSD:
        raise InvalidPerturbationError(
            f"rho + D has eigenvalue {float(w_sum[0]):.3e}; not a state"
        )
    w = np.sort(np.abs(np.linalg.eigvalsh(d)))[::-1]
    kyfan = float(w[: gate.k].sum())
    if kyfan < gate.threshold:
        return PerturbationVerdict.ENTANGLED_GUARANTEED
    return PerturbationVerdict.INCONCLUSIVE


def noise_overlap_bounds(rho_m: DensityOperator, v: Subspace) -> tuple[float, float]:
    """Interval certain to contain tr{P_V rho_M}:

        1 - ||rho_M||_(mn-k) <= tr{P_V rho_M} <= ||rho_M||_(k).
    """
    if rho_m.dims != v.dims:
        raise DimensionMismatchError(f"dims differ: {rho_m.dims} vs {v.dims}")
    k = v.dim
    rest = rho_m.side - k
    lo = 1.0 - density_ky_fan(rho_m, rest)
    hi = density_ky_fan(rho_m, k)
    return lo, hi


def mixing_threshold(
    rho: DensityOperator,
    v: Subspace,
    rho_m: DensityOperator,
    lam: LambdaSup | None = None,
) -> MixingThreshold:
    """Largest proven-safe mixing probability with noise state rho_M.

    p_max = delta / (lam_sup + delta + ||rho_M||_(mn-k) - 1), clamped to
    [0, 1]; a nonpositive denominator means no admissible mixing can erase
    the detection, reported as p_max = 1. A few sampled p below p_max are
    re-verified against the criterion before returning.
    """
    if rho_m.dims != rho.dims:
        raise DimensionMismatchError(f"dims differ: {rho.dims} vs {rho_m.dims}")
    result = separability_test(rho, v, lam)
    if result.delta <= 0.0:
        raise NotDetectedError(
            f"criterion margin is {result.delta}; no entanglement detected"
        )
    lv = result.lambda_sup.bound_value
    delta = result.delta
    k = v.dim
    noise_kyfan = density_ky_fan(rho_m, rho.side - k)
    den = lv + delta + noise_kyfan - 1.0
    p_max = 1.0 if den <= 0.0 else min(1.0, delta / den)
    p_mat = projector(v).matrix
    for frac in (0.25, 0.75, 0.999):
        p = frac * p_max
        if not 0.0 < p < 1.0:
            continue
        mixed = (1.0 - p) * rho.matrix + p * rho_m.matrix
        margin = hermitian_expectation(mixed, p_mat) - lv
        if margin <= -1e-12:
            raise RuntimeError(
                f"mixing guarantee failed self-check at p={p}: margin {margin}"
            )
    return MixingThreshold(
        p_max=p_max, lambda_sup=lv, delta=delta, noise_kyfan=noise_kyfan
    )
