"""Command-line front end.

Exit codes: 0 success, 1 runtime failure (a diagnostic report is still
written), 2 invalid arguments or input files.

Relative ``--out`` paths are resolved against ``$WSEMIGROUP_OUT_DIR`` when
that variable is set.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import dynamics_lab as dl
from . import rh_lab as rh
from . import semigroup as sg
from .eigen_families import EigenFamilySpec, generate
from .hardy_core import CoeffVector, lin_comb, monomial, norm
from .serialize import SchemaError, load_vector, save_vector, write_csv, write_json

OUT_DIR_ENV = "WSEMIGROUP_OUT_DIR"
SUBCOMMANDS = ("gen", "apply", "orbit", "period", "gram", "radius", "expansive",
               "rh-sweep", "m-diag", "orbit-residual")


class UsageError(ValueError):
    pass


class RunFailure(RuntimeError):
    """Runtime failure after which a diagnostic payload has been written."""


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)


# ---------------------------------------------------------------- self checks


def identity_checks(seed: int, n: int = 3, degree: int = 40) -> dict[str, bool]:
    """Spot checks of the semigroup identities, embedded in every report."""
    rng = np.random.default_rng(seed)
    f = dl.random_unit_polynomial(rng, degree)
    g = dl.random_unit_polynomial(rng, degree)
    back = sg.apply_W_star(n, sg.apply_W(n, f))
    lhs = complex(np.vdot(g.coeffs_upto(n * degree + n - 1), sg.apply_W(n, f).coeffs))
    rhs = complex(np.vdot(sg.apply_W_star(n, g).coeffs_upto(degree), f.coeffs))
    one = monomial(0)
    return {
        f"W*_{n} W_{n} f == {n} f": bool(np.allclose(back.trusted(), n * f.trusted(), rtol=0, atol=1e-12)),
        f"|W_{n} f|^2 == {n} |f|^2": abs(norm(sg.apply_W(n, f)).value ** 2 - n) <= 1e-12,
        f"<W_{n} f, g> == <f, W*_{n} g>": abs(lhs - rhs) <= 1e-12,
        "W*_k 1 == 1 (k=2..10)": all(
            np.array_equal(sg.apply_W_star(k, one).trusted(), [1]) for k in range(2, 11)),
    }


def _report(cfg: RunConfig, body: dict, status: str = "ok") -> dict:
    return {
        "subcommand": cfg.subcommand,
        "status": status,
        "params": cfg.params,
        "checks": identity_checks(cfg.params["seed"]),
        **body,
    }


# ---------------------------------------------------------------- argument parsing


def _add_common(p: argparse.ArgumentParser, fmt: bool = False):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default="json")


def _add_start(p: argparse.ArgumentParser):
    p.add_argument("--in", dest="in_path")
    p.add_argument("--family", choices=("f", "g", "kappa", "h", "one"))
    p.add_argument("--k", type=int)
    p.add_argument("--s-re", type=float)
    p.add_argument("--s-im", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsemigroup",
        description="Numerical experiments with the weighted composition semigroup on H^2.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", help="generate an eigenvector family member")
    p.add_argument("--family", choices=("f", "g", "kappa", "h"), required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--s-re", type=float)
    p.add_argument("--s-im", type=float, default=0.0)
    p.add_argument("--degree", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("apply", help="apply W_n or W_n^* (optionally iterated)")
    p.add_argument("--op", choices=("w", "wstar"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--in", dest="in_path", required=True)
    _add_common(p)

    p = sub.add_parser("orbit", help="norm profile along an orbit")
    p.add_argument("--op", choices=("w", "wstar"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--degree", type=int, default=1000)
    p.add_argument("--stride", type=int, default=0)
    p.add_argument("--max-degree", type=int)
    _add_start(p)
    _add_common(p, fmt=True)

    p = sub.add_parser("period", help="detect the period of a zeta kernel on Re s = 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha-p", type=int, required=True)
    p.add_argument("--alpha-q", type=int, default=1)
    p.add_argument("--degree", type=int, default=10**6)
    p.add_argument("--tol", type=float, default=1e-2)
    _add_common(p)

    p = sub.add_parser("gram", help="Gram report of a finite family")
    p.add_argument("--family", choices=("f", "g", "h", "kappa"))
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--s-re", type=float, default=0.75)
    p.add_argument("--t-min", type=float, default=0.5)
    p.add_argument("--t-max", type=float, default=4.0)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--degree", type=int, default=10**4)
    p.add_argument("--tau", type=float)
    p.add_argument("--in", dest="in_paths", action="append")
    _add_common(p, fmt=True)

    p = sub.add_parser("radius", help="spectral radius probe of W_n^*")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-max", type=int, default=6)
    _add_common(p, fmt=True)

    p = sub.add_parser("expansive", help="uniform positive expansivity check of W_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--degree", type=int, default=50)
    p.add_argument("--m-max", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("rh-sweep", help="distance from 1 to span{h_2..h_K}")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--degree", type=int, default=10**4)
    p.add_argument("--ridge", type=float, default=0.0)
    _add_common(p, fmt=True)

    p = sub.add_parser("m-diag", help="diagnostics for span{h_k - h_l}")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--degree", type=int, default=10**4)
    _add_common(p)

    p = sub.add_parser("orbit-residual", help="distance of an adjoint orbit to span{h_2..h_K}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--degree", type=int, default=10**4)
    p.add_argument("--ridge", type=float, default=0.0)
    _add_start(p)
    _add_common(p, fmt=True)
    return parser


def _require(cond: bool, message: str):
    if not cond:
        raise UsageError(message)


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _family_spec(family, k, s_re, s_im, degree) -> EigenFamilySpec:
    _require(degree >= 1, "degree must be >= 1")
    if family == "kappa":
        _require(s_re is not None, "kappa needs --s-re")
        _require(s_re > 0.5, "kappa needs Re s > 1/2")
        return EigenFamilySpec("kappa", degree, s=complex(s_re, s_im))
    lo = 2 if family == "h" else 1
    _require(k is not None and k >= lo, f"{family} needs --k >= {lo}")
    if family == "h":
        _require(degree >= k - 1, "h_k needs --degree >= k-1")
    return EigenFamilySpec(family, degree, k=k)


def _start_vector(args) -> tuple[CoeffVector, str]:
    if args.in_path:
        return load_vector(args.in_path), os.path.basename(args.in_path)
    _require(args.family is not None, "give --in or --family")
    if args.family == "one":
        return monomial(0), "1"
    spec = _family_spec(args.family, args.k, args.s_re, args.s_im, args.degree)
    return generate(spec), spec.label


def _params(args) -> dict:
    skip = {"subcommand", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ---------------------------------------------------------------- commands


def cmd_gen(args, cfg):
    spec = _family_spec(args.family, args.k, args.s_re, args.s_im, args.degree)
    save_vector(_out_path(args.out), generate(spec))


def cmd_apply(args, cfg):
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.power >= 0, "--power must be >= 0")
    f = load_vector(args.in_path)
    kind = sg.FORWARD if args.op == "w" else sg.ADJOINT
    g = sg.apply_iterate(sg.OperatorSpec(kind, args.n), args.power, f, max_degree=args.max_degree)
    save_vector(_out_path(args.out), g)


def cmd_orbit(args, cfg):
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.steps >= 0, "--steps must be >= 0")
    f, label = _start_vector(args)
    kind = sg.FORWARD if args.op == "w" else sg.ADJOINT
    rec = dl.run_orbit(sg.OperatorSpec(kind, args.n), f, args.steps, args.stride, args.max_degree)
    rows = [(m, rec.norms[m], rec.norm_radii[m]) for m in range(rec.steps + 1)]
    body = {
        "operator": str(rec.operator), "start": label, "steps": rec.steps,
        "requested_steps": rec.requested_steps, "exhausted": rec.exhausted,
        "norms": rec.norms, "norm_radii": rec.norm_radii,
        "surrogate": "norm profile along a finite orbit",
    }
    _emit(args, cfg, body, ["step", "norm", "norm_radius"], rows,
          status="exhausted" if rec.exhausted else "ok")
    if rec.exhausted:
        raise RunFailure(f"trusted range exhausted after {rec.steps} of {args.steps} steps")


def cmd_period(args, cfg):
    _require(args.n >= 2, "--n must be >= 2")
    _require(args.alpha_q >= 1, "--alpha-q must be >= 1")
    _require(args.tol > 0, "--tol must be > 0")
    _require(args.degree >= 1, "--degree must be >= 1")
    spec = dl.PeriodicPointSpec(args.n, Fraction(args.alpha_p, args.alpha_q))
    det = dl.detect_period(spec, args.degree, args.tol)
    body = {
        "alpha": str(spec.alpha), "t": spec.t, "s": spec.s, "eigenvalue": spec.eigenvalue,
        "predicted_period": spec.predicted_period, "detected_period": det.period,
        "residuals": det.residuals, "tail_radius": det.tail_radius,
        "precondition_ok": det.precondition_ok,
    }
    status = "ok" if det.period == spec.predicted_period else "failed"
    write_json(_out_path(args.out), _report(cfg, body, status))
    if status != "ok":
        raise RunFailure(f"period not detected (residuals {det.residuals})")


def cmd_gram(args, cfg):
    _require(args.degree >= 1, "--degree must be >= 1")
    if args.in_paths:
        vecs = [load_vector(p) for p in args.in_paths]
        labels = [os.path.basename(p) for p in args.in_paths]
    else:
        _require(args.family is not None, "give --in (repeatable) or --family")
        if args.family == "kappa":
            _require(args.count >= 1, "--count must be >= 1")
            ts = np.linspace(args.t_min, args.t_max, args.count)
            specs = [_family_spec("kappa", None, args.s_re, t, args.degree) for t in ts]
        else:
            _require(args.kmin <= args.kmax, "--kmin must not exceed --kmax")
            specs = [_family_spec(args.family, k, None, 0.0, args.degree)
                     for k in range(args.kmin, args.kmax + 1)]
        vecs = [generate(s) for s in specs]
        labels = [s.label for s in specs]
    rep = dl.span_gram(vecs, args.tau, labels)
    rows = [(labels[i], labels[j], rep.gram[i, j].real, rep.gram[i, j].imag)
            for i in range(len(labels)) for j in range(len(labels))]
    body = {
        "labels": rep.labels, "eigenvalues": rep.eigenvalues, "min_eigenvalue": rep.min_eigenvalue,
        "effective_rank": rep.effective_rank, "tau": rep.tau,
        "condition_estimate": rep.condition_estimate, "trusted_degree": rep.trusted_degree,
        "gram": rep.gram, "surrogate": rep.note,
    }
    _emit(args, cfg, body, ["row", "col", "re", "im"], rows)


def cmd_radius(args, cfg):
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.m_max >= 1, "--m-max must be >= 1")
    vals = dl.spectral_radius_probe(args.n, args.m_max)
    body = {"values": vals, "sqrt_n": math.sqrt(args.n)}
    _emit(args, cfg, body, ["m", "value"], list(enumerate(vals, start=1)))


def cmd_expansive(args, cfg):
    _require(args.k >= 2, "--k must be >= 2")
    _require(args.trials >= 1, "--trials must be >= 1")
    rep = dl.expansivity_check(args.k, args.trials, args.degree, args.seed, args.m_max)
    body = {"max_relative_error": rep.max_relative_error, "witness": rep.witness,
            "tol": rep.tol, "passed": rep.passed}
    write_json(_out_path(args.out), _report(cfg, body, "ok" if rep.passed else "failed"))
    if not rep.passed:
        raise RunFailure("norm identity violated")


def cmd_rh_sweep(args, cfg):
    _require(args.kmax >= 2, "--kmax must be >= 2")
    _require(args.degree >= args.kmax - 1, "--degree must be >= kmax-1")
    _require(args.ridge >= 0, "--ridge must be >= 0")
    try:
        sw = rh.rh_distance_sweep(args.kmax, args.degree, args.ridge)
    except rh.IllConditionedError as exc:
        write_json(_out_path(args.out), _report(cfg, {"error": str(exc),
                                                     "condition": exc.condition}, "failed"))
        raise RunFailure(str(exc)) from None
    rows = [(K, d, c, args.degree, args.ridge)
            for K, d, c in zip(sw.K_values, sw.distances, sw.condition_numbers)]
    body = {"K_values": sw.K_values, "distances": sw.distances,
            "condition_numbers": sw.condition_numbers, "oracle_distances": sw.oracle_distances,
            "max_oracle_gap": sw.max_oracle_gap, "monotone": sw.monotone,
            "solver": "normal equations (Cholesky); oracle: dense least squares",
            "note": sw.note}
    _emit(args, cfg, body, ["K", "distance", "condition", "D", "ridge"], rows)


def cmd_m_diag(args, cfg):
    _require(args.K >= 3, "--K must be >= 3")
    _require(args.degree >= args.K - 1, "--degree must be >= K-1")
    rep = rh.m_family_diagnostics(args.K, args.degree)
    body = {"labels": rep.gram.labels, "eigenvalues": rep.gram.eigenvalues,
            "effective_rank": rep.gram.effective_rank, "min_eigenvalue": rep.gram.min_eigenvalue,
            "distance_M": rep.distance_M, "distance_N": rep.distance_N, "note": rep.note}
    write_json(_out_path(args.out), _report(cfg, body))


def cmd_orbit_residual(args, cfg):
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.K >= 2, "--K must be >= 2")
    _require(args.steps >= 0, "--steps must be >= 0")
    f, label = _start_vector(args)
    prof = rh.orbit_residual_profile(args.n, f, args.steps, args.K, args.degree, label, args.ridge)
    rows = [(m, r, d) for m, (r, d) in enumerate(zip(prof.residuals, prof.trusted_degrees))]
    body = {"start": label, "residuals": prof.residuals, "trusted_degrees": prof.trusted_degrees,
            "exhausted": prof.exhausted, "note": prof.note}
    _emit(args, cfg, body, ["step", "residual", "trusted_degree"], rows,
          status="exhausted" if prof.exhausted else "ok")
    if prof.exhausted:
        raise RunFailure(f"trusted range exhausted after {prof.steps} of {args.steps} steps")


def _emit(args, cfg, body, header, rows, status="ok"):
    out = _out_path(args.out)
    if args.format == "csv":
        write_csv(out, header, rows)
        write_json(out.with_name(out.name + ".meta.json"), _report(cfg, {}, status))
    else:
        write_json(out, _report(cfg, body, status))


COMMANDS = {
    "gen": cmd_gen, "apply": cmd_apply, "orbit": cmd_orbit, "period": cmd_period,
    "gram": cmd_gram, "radius": cmd_radius, "expansive": cmd_expansive,
    "rh-sweep": cmd_rh_sweep, "m-diag": cmd_m_diag, "orbit-residual": cmd_orbit_residual,
}


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(args.subcommand, _params(args))
    try:
        COMMANDS[args.subcommand](args, cfg)
    except (UsageError, SchemaError, ValueError, OverflowError, FileNotFoundError) as exc:
        print(f"wsemigroup {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    except (RunFailure, ArithmeticError) as exc:
        print(f"wsemigroup {args.subcommand}: failed: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
