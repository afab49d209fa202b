"""Subspaces of H_A (x) H_B and the product-overlap supremum lam_sup.

lam_sup(V) is the supremum, over unit vectors of V, of the largest squared
Schmidt coefficient. It is the scale parameter of every bound in this
package and the threshold of the separability criterion
tr{rho P_V} <= lam_sup. For a unit vector psi, its largest squared Schmidt
coefficient equals its best squared overlap with product vectors, and
maximizing over psi in V first turns the supremum into

    lam_sup(V) = max over unit a, b of  <a x b| P_V |a x b>,

which is the form evaluated by the seesaw estimate and the net
certification below.

Closed forms exist for one-dimensional spans (the top squared Schmidt
coefficient of the single vector) and for the full antisymmetric subspace
at m = n, where the nonzero Schmidt coefficients of every vector come in
equal pairs, capping the largest one at 1/2 with equality on the basis
pair states themselves.

Safety rule for consumers: the bounds divide by lam_sup and subtract it,
so an underestimate inflates a bound. Exact values are safe as-is;
certified intervals are safe through their upper end (a weaker but valid
bound); a bare seesaw value is a lower estimate, and anything computed
from it is flagged as heuristic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CertificationRequiredError,
    DimensionMismatchError,
    DomainError,
    InvalidMatrixError,
    NetBudgetError,
    ParseError,
)
from .linalg import BipartiteOperator
from .states import PureState, antisym_basis, schmidt_decompose

STATUS_EXACT = "exact_closed_form"
STATUS_HEURISTIC = "heuristic_lower_estimate"
STATUS_CERTIFIED = "certified_interval"

_GRAM_TOL = 1e-10
_ANTISYM_TOL = 1e-9
_SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class LambdaSup:
    """Value of lam_sup together with how trustworthy it is.

    ``value`` is the best known attained value (a valid lower bound on the
    true supremum). For a certified result ``interval`` brackets the truth
    and ``net_size`` records how many net points backed the upper end.
    """

    value: float
    status: str
    interval: tuple[float, float] | None = None
    net_size: int | None = None

    def __post_init__(self):
        if self.status not in (STATUS_EXACT, STATUS_HEURISTIC, STATUS_CERTIFIED):
            raise DomainError(f"unknown lambda_sup status {self.status!r}")
        if not 0.0 < self.value <= 1.0 + 1e-9:
            raise DomainError(f"lambda_sup must lie in (0, 1], got {self.value}")
        if self.status == STATUS_CERTIFIED:
            if self.interval is None:
                raise DomainError("certified lambda_sup needs an interval")
            lo, hi = self.interval
            if not lo <= self.value <= hi:
                raise DomainError("lambda_sup value must lie inside its interval")

    @property
    def is_heuristic(self) -> bool:
        return self.status == STATUS_HEURISTIC

    @property
    def bound_value(self) -> float:
        """The value safe to insert into the measure bounds."""
        if self.status == STATUS_CERTIFIED:
            return self.interval[1]
        return self.value

    def to_dict(self) -> dict:
        out = {"value": self.value, "status": self.status}
        if self.interval is not None:
            out["interval"] = [self.interval[0], self.interval[1]]
        if self.net_size is not None:
            out["net_size"] = self.net_size
        return out


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of the product space given by an orthonormal spanning set."""

    dim_a: int
    dim_b: int
    basis: tuple

    def __post_init__(self):
        basis = tuple(self.basis)
        if not basis:
            raise DomainError("subspace needs at least one basis vector")
        for st in basis:
            if not isinstance(st, PureState):
                raise InvalidMatrixError("basis entries must be PureState objects")
            if st.dims != (self.dim_a, self.dim_b):
                raise DimensionMismatchError(
                    f"basis state dims {st.dims} do not match "
                    f"({self.dim_a}, {self.dim_b})"
                )
        if len(basis) > self.dim_a * self.dim_b:
            raise DomainError("more basis vectors than the space dimension")
        object.__setattr__(self, "basis", basis)
        g = self.basis_matrix.conj().T @ self.basis_matrix
        if float(np.abs(g - np.eye(len(basis))).max()) > _GRAM_TOL:
            raise InvalidMatrixError("subspace basis is not orthonormal")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    @property
    def side(self) -> int:
        return self.dim_a * self.dim_b

    @cached_property
    def basis_matrix(self) -> np.ndarray:
        """(m n) x l matrix whose columns are the basis amplitudes."""
        return np.column_stack([st.amplitudes for st in self.basis])

    @classmethod
    def span_of(cls, *states: PureState) -> "Subspace":
        da, db = states[0].dims
        return cls(da, db, tuple(states))

    @classmethod
    def from_vectors(cls, dim_a: int, dim_b: int, vectors) -> "Subspace":
        return cls(dim_a, dim_b, tuple(PureState(dim_a, dim_b, v) for v in vectors))

    @classmethod
    def phi_plus(cls, d: int) -> "Subspace":
        from .states import max_entangled

        return cls.span_of(max_entangled(d))

    @classmethod
    def antisymmetric(cls, d: int) -> "Subspace":
        return cls.span_of(*antisym_basis(d))

    @classmethod
    def support_of(cls, rho, tol: float = _SUPPORT_TOL) -> "Subspace":
        """Span of the eigenvectors of ``rho`` with eigenvalue above ``tol``."""
        w, v = np.linalg.eigh(rho.matrix)
        keep = [i for i in range(w.size) if w[i] > tol]
        if not keep:
            raise InvalidMatrixError("state has empty support at this tolerance")
        vecs = [v[:, i] for i in reversed(keep)]  # largest eigenvalue first
        return cls.from_vectors(rho.dim_a, rho.dim_b, vecs)


def projector(v: Subspace) -> BipartiteOperator:
    """Orthogonal projector onto V: Hermitian, idempotent, trace = dim V."""
    b = v.basis_matrix
    return BipartiteOperator(v.dim_a, v.dim_b, b @ b.conj().T)


def best_overlap_in_v(phi: PureState, v: Subspace) -> float:
    """Squared norm of the projection of phi onto V.

    Equals the maximum squared overlap of phi with unit vectors of V, since
    the maximizer is the normalized projection itself.
    """
    if phi.dims != v.dims:
        raise DimensionMismatchError(f"dims differ: {phi.dims} vs {v.dims}")
    amps = v.basis_matrix.conj().T @ phi.amplitudes
    return float(np.real(amps.conj() @ amps))


def orthogonal_complement(v: Subspace) -> Subspace | None:
    """Orthogonal complement of V, or None when V is the whole space."""
    if v.dim == v.side:
        return None
    q, _ = np.linalg.qr(v.basis_matrix, mode="complete")
    vecs = [q[:, i] for i in range(v.dim, v.side)]
    return Subspace.from_vectors(v.dim_a, v.dim_b, vecs)


@dataclass(frozen=True)
class SeesawOptions:
    restarts: int = 32
    max_sweeps: int = 500
    tol: float = 1e-12
    seed: int | None = 0


def _haar_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _product_seesaw(p4, m, n, alpha, beta, max_sweeps, tol):
    """Alternating exact block maximization of <a x b|P|a x b>.

    With b fixed the objective is the quadratic form of an m x m Hermitian
    contraction of P, maximized exactly by its top eigenvector; same for a.
    Each half step is an exact block maximum, so the value never decreases.
    """
    val = -np.inf
    for _ in range(max_sweeps):
        mb = np.einsum("ijkl,j,l->ik", p4, beta.conj(), beta)
        _, u = np.linalg.eigh(mb)
        alpha = u[:, -1]
        na = np.einsum("ijkl,i,k->jl", p4, alpha.conj(), alpha)
        w2, u2 = np.linalg.eigh(na)
        beta = u2[:, -1]
        new = float(w2[-1].real)
        if new < val - 1e-12:
            raise RuntimeError("seesaw objective decreased; numerical failure")
        if new - val < tol:
            val = max(val, new)
            break
        val = new
    return val, alpha, beta


def lambda_sup_seesaw(v: Subspace, opts: SeesawOptions | None = None) -> LambdaSup:
    """Heuristic lower estimate of lam_sup by alternating eigenvector ascent.

    Starts from the top Schmidt pair of each basis vector plus Haar-random
    product pairs and keeps the best value over restarts. The result never
    exceeds the true supremum, but can fall below it when every restart
    stalls in a local maximum; downstream consumers must treat it as
    heuristic.
    """
    opts = opts or SeesawOptions()
    p4 = projector(v).as4()
    rng = np.random.default_rng(opts.seed)
    starts = []
    for st in v.basis[: opts.restarts]:
        _, alphas, betas = schmidt_decompose(st)
        starts.append((alphas[:, 0], betas[:, 0]))
    while len(starts) < opts.restarts:
        starts.append((_haar_unit(rng, v.dim_a), _haar_unit(rng, v.dim_b)))
    best = 0.0
    for a0, b0 in starts:
        val, _, _ = _product_seesaw(
            p4, v.dim_a, v.dim_b, a0, b0, opts.max_sweeps, opts.tol
        )
        best = max(best, val)
    return LambdaSup(value=min(best, 1.0), status=STATUS_HEURISTIC)


def lambda_sup_closed_form(v: Subspace) -> LambdaSup | None:
    """Exact lam_sup where a closed form exists, else None.

    Covered: one-dimensional spans (top squared Schmidt coefficient of the
    vector) and the full antisymmetric subspace at m = n (value 1/2),
    recognized by projector equality against the canonical pair basis. No
    broader structure detection is attempted.
    """
    if v.dim == 1:
        return LambdaSup(float(v.basis[0].schmidt[0]), STATUS_EXACT)
    if v.dim_a == v.dim_b:
        d = v.dim_a
        if v.dim == d * (d - 1) // 2:
            anti = Subspace.antisymmetric(d)
            diff = projector(v).matrix - projector(anti).matrix
            if float(np.abs(diff).max()) <= _ANTISYM_TOL:
                return LambdaSup(0.5, STATUS_EXACT)
    return None


def net_size_estimate(
    dim_a: int, dim_b: int, eps: float, confidence: float = 1e-2
) -> int:
    """Coupon-collector sample count for a random product-state net.

    A Haar product sample lands within phase-aligned distance eps of a fixed
    product state when both factor overlaps exceed 1 - eps^2/2, which has
    probability (eps^2/2)^(m-1) * (eps^2/2)^(n-1). The returned count makes
    every cell of a covering at that resolution receive a sample except with
    probability about ``confidence``.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    t = 0.5 * eps * eps
    p = t ** (dim_a - 1) * t ** (dim_b - 1)
    return int(math.ceil((math.log(1.0 / p) + math.log(1.0 / confidence)) / p))


def lambda_sup_certified(
    v: Subspace,
    eps: float,
    seed: int = 0,
    budget: int = 600_000_000,
    confidence: float = 1e-2,
    opts: SeesawOptions | None = None,
) -> LambdaSup:
    """Bracket lam_sup in an interval of width at most ``eps``.

    Lower end: the better of the seesaw value and the best sampled product
    state (both attained, hence valid lower bounds). Upper end: the sampled
    maximum plus the Lipschitz slack over a product-state net of resolution
    eps/2; the overlap map changes by at most twice the product-vector
    distance because the projector has unit operator norm. The net is
    uniform random with coupon-collector oversampling at a fixed seed, so
    the upper end is a high-confidence statistical certificate rather than
    a deterministic one; the sample count used is reported in ``net_size``.

    Parameters
    ----------
    eps : target interval width; the net resolution is eps/2.
    budget : hard cap on net samples. Exceeding it raises NetBudgetError
        carrying the required size, which happens quickly beyond 2 x 2
        factors at tight eps.
    confidence : residual probability that the random net misses a cell of
        the covering it emulates.
    """
    needed = net_size_estimate(v.dim_a, v.dim_b, eps / 2.0, confidence)
    if needed > budget:
        raise NetBudgetError(required=needed, budget=budget)
    lo = lambda_sup_seesaw(v, opts).value
    p = projector(v).matrix
    rng = np.random.default_rng(seed)
    m, n = v.dim_a, v.dim_b
    net_max = 0.0
    left = needed
    chunk = 1 << 19
    while left > 0:
        b = min(chunk, left)
        left -= b
        a_blk = rng.standard_normal((b, m)) + 1j * rng.standard_normal((b, m))
        b_blk = rng.standard_normal((b, n)) + 1j * rng.standard_normal((b, n))
        a_blk /= np.linalg.norm(a_blk, axis=1, keepdims=True)
        b_blk /= np.linalg.norm(b_blk, axis=1, keepdims=True)
        x = (a_blk[:, :, None] * b_blk[:, None, :]).reshape(b, m * n)
        vals = np.einsum("bi,ij,bj->b", x.conj(), p, x).real
        net_max = max(net_max, float(vals.max()))
    lo = max(lo, net_max)
    hi = max(lo, min(1.0, net_max + eps))
    return LambdaSup(
        value=lo, status=STATUS_CERTIFIED, interval=(lo, hi), net_size=needed
    )


def resolve_lambda_sup(
    v: Subspace,
    fallback: str = "heuristic",
    eps: float | None = None,
    seed: int = 0,
    opts: SeesawOptions | None = None,
) -> LambdaSup:
    """Closed form when available, otherwise the requested fallback.

    ``fallback`` is one of "closed" (refuse anything but a closed form),
    "net" (certify with the given eps), or "heuristic" (seesaw estimate).
    """
    cf = lambda_sup_closed_form(v)
    if cf is not None:
        return cf
    if fallback == "closed":
        raise CertificationRequiredError(
            "no closed form for this subspace; pick a net or heuristic fallback"
        )
    if fallback == "net":
        if eps is None:
            raise DomainError("net fallback needs an interval width eps")
        return lambda_sup_certified(v, eps, seed=seed, opts=opts)
    if fallback == "heuristic":
        return lambda_sup_seesaw(v, opts)
    raise DomainError(f"unknown lambda_sup fallback {fallback!r}")


# ---------------------------------------------------------------------------
# Subspace files: JSON with one flat [re, im]-pair vector per basis state.

def subspace_to_dict(v: Subspace) -> dict:
    return {
        "dim_a": v.dim_a,
        "dim_b": v.dim_b,
        "basis": [
            [[float(z.real), float(z.imag)] for z in st.amplitudes]
            for st in v.basis
        ],
    }


def subspace_from_dict(payload: dict) -> Subspace:
    if not isinstance(payload, dict):
        raise ParseError("subspace file must hold a JSON object")
    try:
        da = int(payload["dim_a"])
        db = int(payload["dim_b"])
        basis = payload["basis"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"subspace file missing or malformed field: {exc}") from exc
    if not isinstance(basis, list) or not basis:
        raise ParseError("subspace basis must be a nonempty list")
    vectors = []
    for entry in basis:
        arr = np.asarray(entry, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ParseError("basis vectors must be lists of [re, im] pairs")
        vectors.append(arr[:, 0] + 1j * arr[:, 1])
    return Subspace.from_vectors(da, db, vectors)


def save_subspace(v: Subspace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(subspace_to_dict(v), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_subspace(path) -> Subspace:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return subspace_from_dict(payload)
