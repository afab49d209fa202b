"""Lower bounds on concurrence and convex-roof extended negativity from a
single projector expectation value, plus the separability criterion they
rest on and the PPT/realignment baseline.

With t = tr{rho P_V}, lam = lam_sup(V) and m the smaller local dimension:

    N_CREN(rho) >= max( (t - lam) / (2 lam), 0 )
    C(rho)      >= max( sqrt(2 / (m (m-1))) (t - lam) / lam, 0 )

and, for a one-dimensional projector onto an entangled |phi>, the sharper

    C(rho) >= max( 2 (<phi|rho|phi> - lam_1(phi)) / C(phi), 0 ).

Every separable state obeys t <= lam, so delta = t - lam > 0 certifies
entanglement; delta also never exceeds ||rho||_(k) - lam with k = dim V.
All bounds consume lam through LambdaSup.bound_value, which keeps
certified intervals valid (their upper end weakens but never invalidates
a bound) and leaves heuristic estimates flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    CertificationRequiredError,
    DimensionMismatchError,
    DomainError,
)
from .linalg import (
    DensityOperator,
    density_ky_fan,
    hermitian_expectation,
    partial_transpose_a,
    realign,
    trace_norm,
)
from .measures import concurrence_pure, fully_entangled_fraction_v
from .states import EnsembleDecomposition, PureState
from .subspace import (
    LambdaSup,
    SeesawOptions,
    Subspace,
    projector,
    resolve_lambda_sup,
)

_DELTA_CAP_SLACK = 1e-9


def projector_expectation(rho: DensityOperator, v: Subspace) -> float:
    """tr{rho P_V}."""
    if rho.dims != v.dims:
        raise DimensionMismatchError(f"dims differ: {rho.dims} vs {v.dims}")
    return hermitian_expectation(rho.matrix, projector(v).matrix)


def _resolved(v: Subspace, lam: LambdaSup | None) -> LambdaSup:
    if lam is not None:
        return lam
    return resolve_lambda_sup(v, fallback="heuristic")


def _exactish(v: Subspace, lam: LambdaSup | None) -> LambdaSup:
    """Resolve lam for detection claims: heuristic values are refused."""
    if lam is None:
        lam = resolve_lambda_sup(v, fallback="closed")
    if lam.is_heuristic:
        raise CertificationRequiredError(
            "detection claims need an exact or certified lambda_sup"
        )
    return lam


def cren_lower(
    rho: DensityOperator, v: Subspace, lam: LambdaSup | None = None
) -> float:
    """max((tr{rho P_V} - lam) / (2 lam), 0)."""
    lam = _resolved(v, lam)
    t = projector_expectation(rho, v)
    lv = lam.bound_value
    return max((t - lv) / (2.0 * lv), 0.0)


def concurrence_lower(
    rho: DensityOperator, v: Subspace, lam: LambdaSup | None = None
) -> float:
    """max(sqrt(2/(m(m-1))) (tr{rho P_V} - lam) / lam, 0)."""
    lam = _resolved(v, lam)
    t = projector_expectation(rho, v)
    lv = lam.bound_value
    m = rho.dim_a
    return max(math.sqrt(2.0 / (m * (m - 1.0))) * (t - lv) / lv, 0.0)


def concurrence_lower_sharp(rho: DensityOperator, phi: PureState) -> float:
    """max(2 (<phi|rho|phi> - lam_1(phi)) / C(phi), 0) for entangled phi."""
    c_phi = concurrence_pure(phi)
    if c_phi <= 1e-12:
        raise DomainError("phi must be entangled (division by C(phi) = 0)")
    if rho.dims != phi.dims:
        raise DimensionMismatchError(f"dims differ: {rho.dims} vs {phi.dims}")
    t = float(
        np.real(phi.amplitudes.conj() @ rho.matrix @ phi.amplitudes)
    )
    lam1 = float(phi.schmidt[0])
    return max(2.0 * (t - lam1) / c_phi, 0.0)


class SharpComparison(NamedTuple):
    sharp: float
    generic: float
    winner: str


def sharp_bound_comparison(rho: DensityOperator, phi: PureState) -> SharpComparison:
    """Both concurrence bounds for the one-dimensional projector on phi.

    ``sharp`` divides the margin by C(phi), ``generic`` by lam_1(phi) with
    the m-dependent prefactor. The sharp form wins only when the margin is
    positive, so the report names the winner rather than silently choosing.
    """
    sharp = concurrence_lower_sharp(rho, phi)
    generic = concurrence_lower(rho, Subspace.span_of(phi))
    if sharp > generic + 1e-15:
        winner = "sharp"
    elif generic > sharp + 1e-15:
        winner = "generic"
    else:
        winner = "tie"
    return SharpComparison(sharp, generic, winner)


def cren_lower_optimized(
    rho: DensityOperator,
    v: Subspace,
    opts: SeesawOptions | None = None,
    lam: LambdaSup | None = None,
) -> float:
    """CREN bound with tr{rho P_V} replaced by its local-unitary maximum.

    The identity pair is feasible, so this never falls below the plain
    bound; the seesaw value is heuristic, which the report records.
    """
    lam = _resolved(v, lam)
    t = max(
        fully_entangled_fraction_v(rho, v, opts).value,
        projector_expectation(rho, v),
    )
    lv = lam.bound_value
    return max((t - lv) / (2.0 * lv), 0.0)


def concurrence_lower_optimized(
    rho: DensityOperator,
    v: Subspace,
    opts: SeesawOptions | None = None,
    lam: LambdaSup | None = None,
) -> float:
    """Concurrence bound with the local-unitary-optimized expectation."""
    lam = _resolved(v, lam)
    t = max(
        fully_entangled_fraction_v(rho, v, opts).value,
        projector_expectation(rho, v),
    )
    lv = lam.bound_value
    m = rho.dim_a
    return max(math.sqrt(2.0 / (m * (m - 1.0))) * (t - lv) / lv, 0.0)


@dataclass(frozen=True)
class SeparabilityResult:
    """Outcome of the projector criterion tr{rho P_V} <= lam_sup."""

    entangled: bool
    delta: float
    expectation: float
    lambda_sup: LambdaSup

    def to_dict(self) -> dict:
        return {
            "entangled": self.entangled,
            "delta": self.delta,
            "expectation": self.expectation,
            "lambda_sup": self.lambda_sup.to_dict(),
        }


def separability_test(
    rho: DensityOperator, v: Subspace, lam: LambdaSup | None = None
) -> SeparabilityResult:
    """Flag entanglement when tr{rho P_V} exceeds lam_sup.

    Heuristic lam_sup values are refused: an underestimated threshold could
    flag separable states. The margin delta is also checked against its
    structural cap ||rho||_(dim V) - lam.
    """
    lam = _exactish(v, lam)
    t = projector_expectation(rho, v)
    lv = lam.bound_value
    delta = t - lv
    cap = density_ky_fan(rho, v.dim) - lv
    if delta > cap + _DELTA_CAP_SLACK:
        raise RuntimeError(
            f"margin {delta} exceeds its Ky Fan cap {cap}; inconsistent inputs"
        )
    return SeparabilityResult(
        entangled=delta > 0.0, delta=delta, expectation=t, lambda_sup=lam
    )


class EnsembleViolation(NamedTuple):
    index: int
    probability: float
    top_schmidt: float


def ensemble_separability_check(
    dec: EnsembleDecomposition, tol: float = 1e-12
) -> list[EnsembleViolation]:
    """Members violating lam_1 >= q, which every ensemble of a separable
    state satisfies; any violation certifies entanglement of the
    reconstruction."""
    out = []
    for idx, (q, st) in enumerate(dec.members):
        lam1 = float(st.schmidt[0])
        if lam1 < q - tol:
            out.append(EnsembleViolation(idx, q, lam1))
    return out


def baseline_ppt_realignment(rho: DensityOperator) -> float:
    """Concurrence lower bound from partial transposition and realignment:

        max( sqrt(2/(m(m-1))) (max(||rho^T_A||_1, ||R(rho)||_1) - 1), 0 ).
    """
    m = rho.dim_a
    best = max(trace_norm(partial_transpose_a(rho).matrix), trace_norm(realign(rho)))
    return max(math.sqrt(2.0 / (m * (m - 1.0))) * (best - 1.0), 0.0)


@dataclass(frozen=True)
class BoundReport:
    """Everything one projector says about one state."""

    expectation: float
    lambda_sup: LambdaSup
    delta: float
    cren_lower: float
    concurrence_lower: float
    certified: bool
    baseline_ppt_realign: float | None = None
    cren_lower_optimized: float | None = None
    concurrence_lower_optimized: float | None = None
    sharp_concurrence_lower: float | None = None
    sharp_winner: str | None = None
    notes: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out = {
            "expectation": self.expectation,
            "lambda_sup": self.lambda_sup.to_dict(),
            "delta": self.delta,
            "cren_lower": self.cren_lower,
            "concurrence_lower": self.concurrence_lower,
            "certified": self.certified,
            "notes": list(self.notes),
        }
        for name in (
            "baseline_ppt_realign",
            "cren_lower_optimized",
            "concurrence_lower_optimized",
            "sharp_concurrence_lower",
            "sharp_winner",
        ):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out


def bound_report(
    rho: DensityOperator,
    v: Subspace,
    lam: LambdaSup | None = None,
    fallback: str = "heuristic",
    eps: float | None = None,
    optimize: bool = False,
    opts: SeesawOptions | None = None,
    baseline: bool = True,
) -> BoundReport:
    """Assemble the full report for a state and a projector.

    ``fallback`` and ``eps`` control how lam_sup is resolved when no closed
    form applies; see resolve_lambda_sup. The unclamped margin delta is kept
    for diagnostics even when the clamped bounds are zero.
    """
    if lam is None:
        lam = resolve_lambda_sup(v, fallback=fallback, eps=eps)
    t = projector_expectation(rho, v)
    lv = lam.bound_value
    m = rho.dim_a
    notes = []
    if lam.is_heuristic:
        notes.append(
            "lambda_sup is a heuristic lower estimate; bounds may be inflated"
        )
    sharp = None
    sharp_winner = None
    if v.dim == 1 and concurrence_pure(v.basis[0]) > 1e-12:
        cmp = sharp_bound_comparison(rho, v.basis[0])
        sharp = cmp.sharp
        sharp_winner = cmp.winner
    report = BoundReport(
        expectation=t,
        lambda_sup=lam,
        delta=t - lv,
        cren_lower=max((t - lv) / (2.0 * lv), 0.0),
        concurrence_lower=max(
            math.sqrt(2.0 / (m * (m - 1.0))) * (t - lv) / lv, 0.0
        ),
        certified=not lam.is_heuristic,
        baseline_ppt_realign=baseline_ppt_realignment(rho) if baseline else None,
        cren_lower_optimized=(
            cren_lower_optimized(rho, v, opts, lam) if optimize else None
        ),
        concurrence_lower_optimized=(
            concurrence_lower_optimized(rho, v, opts, lam) if optimize else None
        ),
        sharp_concurrence_lower=sharp,
        sharp_winner=sharp_winner,
        notes=tuple(notes),
    )
    return report
