"""Command-line front end.

Subcommands: ``bound`` (one report), ``sweep`` (CSV over a family
parameter), ``robustness`` (perturbation gate and mixing threshold), and
``audit`` (randomized property suites). Exit codes: 0 success, 1 audit
failure, 2 parse error, 3 validation error, 4 dimension mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import (
    baseline_ppt_realignment,
    bound_report,
    concurrence_lower,
    concurrence_lower_sharp,
    cren_lower,
    projector_expectation,
)
from .errors import (
    DimensionMismatchError,
    DomainError,
    EntboundsError,
    ParseError,
)
from .linalg import DensityOperator, singular_values
from .measures import (
    concurrence_pure,
    cren_upper_from_ensemble,
    negativity_pure_schmidt,
)
from .robustness import (
    mixing_threshold,
    noise_overlap_bounds,
    perturbation_gate,
)
from .states import (
    PureState,
    eigen_ensemble,
    isotropic,
    load_state,
    max_entangled,
    mixture_antisym_phi_plus,
    random_density,
    random_pure,
    werner,
)
from .subspace import (
    Subspace,
    load_subspace,
    projector,
    resolve_lambda_sup,
)

_EXIT_AUDIT_FAIL = 1
_EXIT_PARSE = 2
_EXIT_VALIDATION = 3
_EXIT_DIMENSION = 4

_FAMILIES = ("isotropic", "werner", "mixture", "bell", "werner-w1")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _load_density_arg(args) -> tuple[DensityOperator, dict]:
    """State from --state file or --family spec, plus metadata for reports."""
    if args.state:
        obj = load_state(args.state)
        if isinstance(obj, PureState):
            obj = obj.density()
        return obj, {"state": args.state}
    if not args.family:
        raise DomainError("provide either --state or --family")
    fam = args.family
    d = args.d
    if d is None:
        raise DomainError("--family needs --d")
    meta = {"family": fam, "d": d}
    if fam == "isotropic":
        if args.F is None:
            raise DomainError("isotropic family needs --F")
        meta["F"] = args.F
        return isotropic(d, args.F), meta
    if fam == "werner":
        if args.W is None:
            raise DomainError("werner family needs --W")
        meta["W"] = args.W
        return werner(d, args.W), meta
    if fam == "mixture":
        if args.F is None:
            raise DomainError("mixture family needs --F")
        meta["F"] = args.F
        return mixture_antisym_phi_plus(d, args.F), meta
    if fam == "bell":
        return max_entangled(d).density(), meta
    if fam == "werner-w1":
        return werner(d, 1.0), meta
    raise DomainError(f"unknown family {fam!r}")


def _make_subspace(spec: str, rho: DensityOperator) -> Subspace:
    if spec == "phi-plus":
        if rho.dim_a != rho.dim_b:
            raise DimensionMismatchError("phi-plus projector needs dim_a == dim_b")
        return Subspace.phi_plus(rho.dim_a)
    if spec == "antisym":
        if rho.dim_a != rho.dim_b:
            raise DimensionMismatchError("antisym projector needs dim_a == dim_b")
        return Subspace.antisymmetric(rho.dim_a)
    if spec == "support":
        return Subspace.support_of(rho)
    if spec.startswith("file:"):
        v = load_subspace(spec[len("file:"):])
        if v.dims != rho.dims:
            raise DimensionMismatchError(
                f"subspace dims {v.dims} do not match state dims {rho.dims}"
            )
        return v
    raise DomainError(f"unknown projector spec {spec!r}")


def _lambda_policy(args) -> tuple[str, float | None]:
    spec = args.certify_lambda_sup
    if spec == "closed":
        return "closed", None
    if spec == "heuristic":
        return "heuristic", None
    if spec.startswith("net:"):
        try:
            eps = float(spec.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad net width in {spec!r}") from None
        return "net", eps
    raise DomainError(f"unknown --certify-lambda-sup value {spec!r}")


def cmd_bound(args) -> int:
    rho, meta = _load_density_arg(args)
    v = _make_subspace(args.projector, rho)
    fallback, eps = _lambda_policy(args)
    report = bound_report(
        rho, v, fallback=fallback, eps=eps, optimize=args.optimize
    )
    payload = dict(meta)
    payload["projector"] = args.projector
    payload["report"] = report.to_dict()
    if args.format == "csv":
        flat = {
            k: val
            for k, val in report.to_dict().items()
            if isinstance(val, (int, float, bool))
        }
        keys = sorted(flat)
        lines = [",".join(keys)]
        lines.append(",".join(_fmt(float(flat[k])) for k in keys))
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(_json_dump(payload), args.output)
    return 0


@dataclass(frozen=True)
class SweepSpec:
    family: str
    d: int
    parameter: str
    start: float
    stop: float
    steps: int
    projectors: tuple


def _sweep_state(spec: SweepSpec, value: float) -> DensityOperator:
    if spec.family == "isotropic":
        return isotropic(spec.d, value)
    if spec.family == "werner":
        return werner(spec.d, value)
    if spec.family == "mixture":
        return mixture_antisym_phi_plus(spec.d, value)
    raise DomainError(f"family {spec.family!r} has no sweep parameter")


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise DomainError("--steps must be at least 2")
    if not (0.0 <= args.start <= 1.0 and 0.0 <= args.stop <= 1.0):
        raise DomainError("sweep grid must stay inside [0, 1]")
    if args.family not in ("isotropic", "werner", "mixture"):
        raise DomainError(f"family {args.family!r} is not sweepable")
    projectors = tuple(args.projector.split(","))
    spec = SweepSpec(
        family=args.family,
        d=args.d,
        parameter="W" if args.family == "werner" else "F",
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        projectors=projectors,
    )
    fallback, eps = _lambda_policy(args)
    grid = np.linspace(spec.start, spec.stop, spec.steps)
    rows = []
    for value in grid:
        rho = _sweep_state(spec, float(value))
        best = None
        for proj_spec in spec.projectors:
            v = _make_subspace(proj_spec, rho)
            lam = resolve_lambda_sup(v, fallback=fallback, eps=eps)
            t = projector_expectation(rho, v)
            entry = {
                "expectation": t,
                "delta": t - lam.bound_value,
                "cren_lower": cren_lower(rho, v, lam),
                "conc_lower": concurrence_lower(rho, v, lam),
            }
            if best is None or entry["cren_lower"] > best["cren_lower"]:
                best = entry
            else:
                best["conc_lower"] = max(best["conc_lower"], entry["conc_lower"])
        upper = cren_upper_from_ensemble(eigen_ensemble(rho)).value
        rows.append(
            (
                float(value),
                best["expectation"],
                best["delta"],
                best["cren_lower"],
                best["conc_lower"],
                upper,
                baseline_ppt_realignment(rho),
            )
        )
    lines = ["param,expectation,delta,cren_lower,conc_lower,cren_upper,baseline"]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_robustness(args) -> int:
    rho, meta = _load_density_arg(args)
    v = _make_subspace(args.projector, rho)
    fallback, eps = _lambda_policy(args)
    lam = resolve_lambda_sup(v, fallback=fallback, eps=eps)
    if args.noise == "maximally-mixed":
        side = rho.side
        rho_m = DensityOperator.from_matrix(
            rho.dim_a, rho.dim_b, np.eye(side) / side
        )
        noise_meta = "maximally-mixed"
    elif args.noise.startswith("file:"):
        obj = load_state(args.noise[len("file:"):])
        rho_m = obj.density() if isinstance(obj, PureState) else obj
        noise_meta = args.noise
    else:
        raise DomainError(f"unknown noise spec {args.noise!r}")
    gate = perturbation_gate(rho, v, lam)
    mix = mixing_threshold(rho, v, rho_m, lam)
    lo, hi = noise_overlap_bounds(rho_m, v)
    support = Subspace.support_of(rho)
    support_case = (
        support.dim == v.dim
        and float(
            np.abs(projector(support).matrix - projector(v).matrix).max()
        )
        <= 1e-9
    )
    payload = dict(meta)
    payload.update(
        {
            "projector": args.projector,
            "noise": noise_meta,
            "k": gate.k,
            "delta": gate.delta,
            "perturbation_threshold": gate.threshold,
            "lambda_sup": lam.to_dict(),
            "noise_overlap_bounds": [lo, hi],
            "mixing": mix.to_dict(),
            "support_case": support_case,
        }
    )
    _emit(_json_dump(payload), args.output)
    return 0


# ---------------------------------------------------------------------------
# Randomized audit suites.

def _audit_von_neumann(shapes, samples, rng) -> dict:
    violations = 0
    worst = 0.0
    for m, n in shapes:
        a = rng.standard_normal((samples, m, n)) + 1j * rng.standard_normal(
            (samples, m, n)
        )
        b = rng.standard_normal((samples, m, n)) + 1j * rng.standard_normal(
            (samples, m, n)
        )
        lhs = np.abs(np.einsum("sij,sij->s", a.conj(), b))
        sa = np.linalg.svd(a, compute_uv=False)
        sb = np.linalg.svd(b, compute_uv=False)
        rhs = np.einsum("si,si->s", sa, sb)
        gap = lhs - rhs
        worst = max(worst, float(gap.max()))
        violations += int((gap > 1e-10).sum())
    return {"suite": "von_neumann", "violations": violations, "worst_gap": worst}


def _audit_pure_soundness(shapes, samples, rng) -> dict:
    violations = 0
    failures = []
    for m, n in shapes:
        for idx in range(samples):
            psi = random_pure(m, n, rng)
            phi = random_pure(m, n, rng)
            while concurrence_pure(phi) < 1e-6:
                phi = random_pure(m, n, rng)
            rho = psi.density()
            v = Subspace.span_of(phi)
            exact_n = negativity_pure_schmidt(psi)
            exact_c = concurrence_pure(psi)
            checks = (
                cren_lower(rho, v) <= exact_n + 1e-9,
                concurrence_lower(rho, v) <= exact_c + 1e-9,
                concurrence_lower_sharp(rho, phi) <= exact_c + 1e-9,
            )
            if not all(checks):
                violations += 1
                failures.append({"shape": [m, n], "index": idx})
    return {
        "suite": "pure_state_soundness",
        "violations": violations,
        "failures": failures[:5],
    }


def _audit_noise_overlap(shapes, samples, rng) -> dict:
    violations = 0
    for m, n in shapes:
        for _ in range(samples):
            rank = int(rng.integers(1, m * n + 1))
            rho_m = random_density(m, n, rank, rng)
            ell = int(rng.integers(1, m * n + 1))
            vecs = np.linalg.qr(
                rng.standard_normal((m * n, ell))
                + 1j * rng.standard_normal((m * n, ell))
            )[0]
            v = Subspace.from_vectors(m, n, [vecs[:, i] for i in range(ell)])
            lo, hi = noise_overlap_bounds(rho_m, v)
            t = projector_expectation(rho_m, v)
            if not (lo - 1e-10 <= t <= hi + 1e-10):
                violations += 1
    return {"suite": "noise_overlap_containment", "violations": violations}


def run_audit(shapes, samples: int, seed: int) -> dict:
    """Run the randomized property suites. Deterministic for a fixed seed."""
    base = np.random.SeedSequence(seed)
    streams = [np.random.default_rng(s) for s in base.spawn(3)]
    results = [
        _audit_von_neumann(shapes, samples, streams[0]),
        _audit_pure_soundness(shapes, max(1, samples // 10), streams[1]),
        _audit_noise_overlap(shapes, max(1, samples // 10), streams[2]),
    ]
    total = sum(r["violations"] for r in results)
    return {
        "seed": seed,
        "shapes": [f"{m}x{n}" for m, n in shapes],
        "samples": samples,
        "suites": results,
        "violations": total,
        "passed": total == 0,
    }


def _parse_shapes(text: str) -> list[tuple[int, int]]:
    shapes = []
    for part in text.split(","):
        try:
            m, n = part.lower().split("x")
            shapes.append((int(m), int(n)))
        except ValueError:
            raise DomainError(f"bad shape {part!r}; expected like 2x3") from None
    return shapes


def cmd_audit(args) -> int:
    shapes = _parse_shapes(args.shapes)
    result = run_audit(shapes, args.samples, args.seed)
    _emit(_json_dump(result), args.output)
    return 0 if result["passed"] else _EXIT_AUDIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--output", default=None, help="write here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument(
        "--certify-lambda-sup",
        default="heuristic",
        metavar="{closed,net:<eps>,heuristic}",
        help="fallback when lambda_sup has no closed form",
    )

    state_args = argparse.ArgumentParser(add_help=False)
    state_args.add_argument("--state", default=None, help="state JSON file")
    state_args.add_argument("--family", choices=_FAMILIES, default=None)
    state_args.add_argument("--d", type=int, default=None, help="local dimension")
    state_args.add_argument("--F", type=float, default=None)
    state_args.add_argument("--W", type=float, default=None)

    parser = argparse.ArgumentParser(
        prog="entbounds",
        description="Entanglement bounds from projector expectation values",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser(
        "bound", parents=[common, state_args], help="one bound report"
    )
    p_bound.add_argument("--projector", required=True)
    p_bound.add_argument(
        "--optimize", action="store_true", help="include local-unitary seesaw bounds"
    )
    p_bound.set_defaults(func=cmd_bound)

    p_sweep = sub.add_parser(
        "sweep", parents=[common], help="CSV sweep over a family parameter"
    )
    p_sweep.add_argument("--family", choices=("isotropic", "werner", "mixture"),
                         required=True)
    p_sweep.add_argument("--d", type=int, required=True)
    p_sweep.add_argument("--start", type=float, default=0.0)
    p_sweep.add_argument("--stop", type=float, default=1.0)
    p_sweep.add_argument("--steps", type=int, default=101)
    p_sweep.add_argument(
        "--projector",
        required=True,
        help="projector spec, or several separated by commas for the best bound",
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_rob = sub.add_parser(
        "robustness", parents=[common, state_args], help="robustness report"
    )
    p_rob.add_argument("--projector", default="support")
    p_rob.add_argument("--noise", default="maximally-mixed")
    p_rob.set_defaults(func=cmd_robustness)

    p_audit = sub.add_parser(
        "audit", parents=[common], help="randomized property suites"
    )
    p_audit.add_argument("--shapes", default="2x2,2x3,3x3")
    p_audit.add_argument("--samples", type=int, default=1000)
    p_audit.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_PARSE
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DIMENSION
    except EntboundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
