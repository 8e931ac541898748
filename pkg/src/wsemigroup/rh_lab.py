"""Distance experiments for the span of h_k = (1-z)^-1 log((1 + ... + z^(k-1)) / k).

The constant 1 lies in the closure of span{h_k : k >= 2} exactly when the
Riemann Hypothesis holds.  Here we only compute finite-K, finite-D
distances d_K = dist(1, span{h_2..h_K}); nothing is claimed about the limit.

The primary solver uses the normal equations (the Gram entries are inner
products of h's and worth reporting).  :func:`dist_to_span_lstsq` is an
independent cross-check on the raw coefficient matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as spla

from . import semigroup as sg
from .dynamics_lab import GramReport, span_gram
from .eigen_families import make_h
from .hardy_core import CoeffVector, common_range, lin_comb, monomial, stack_upto
from .semigroup import OperatorSpec

__all__ = [
    "DistanceResult",
    "DistanceSweep",
    "IllConditionedError",
    "MFamilyReport",
    "OrbitResidualProfile",
    "dist_to_span",
    "dist_to_span_lstsq",
    "h_basis",
    "m_family_diagnostics",
    "orbit_residual_profile",
    "rh_distance_sweep",
]

RIDGE_TRIGGER = 1e12


class IllConditionedError(ArithmeticError):
    def __init__(self, condition: float):
        super().__init__(f"Gram matrix is singular or ill-conditioned (condition {condition:.3g}); "
                         f"pass a positive ridge")
        self.condition = condition


@dataclass
class DistanceResult:
    distance: float
    coefficients: np.ndarray
    condition: float
    ridge_used: float
    trusted_degree: int

    def __iter__(self):
        # allows ``d, c, cond = dist_to_span(...)``
        return iter((self.distance, self.coefficients, self.condition))


def _solve_normal(G: np.ndarray, beta: np.ndarray, target_sq: float, ridge: float,
                  upto: int) -> DistanceResult:
    cond = float(np.linalg.cond(G))
    used = 0.0
    if not math.isfinite(cond) or cond > RIDGE_TRIGGER:
        if ridge <= 0:
            raise IllConditionedError(cond)
        G = G + ridge * np.eye(G.shape[0])
        used = ridge
    try:
        c = spla.solve(G, beta, assume_a="pos")
    except (spla.LinAlgError, ValueError):
        raise IllConditionedError(cond) from None
    d2 = target_sq - float(np.real(np.vdot(beta, c)))
    return DistanceResult(math.sqrt(max(d2, 0.0)), c, cond, used, upto)


def dist_to_span(target: CoeffVector, basis: list[CoeffVector], ridge: float = 0.0) -> DistanceResult:
    """min_c |target - sum c_k b_k| over the common trusted range.

    Solves G c = beta with G[j, k] = <b_k, b_j> and beta_j = <target, b_j>;
    distance^2 = |target|^2 - Re(beta^H c), clamped at 0.  A ridge is added
    to G's diagonal when its condition number exceeds 1e12; with ridge 0
    that situation raises :class:`IllConditionedError`.
    """
    if not basis:
        raise ValueError("basis must be nonempty")
    upto = common_range([target, *basis])
    if upto < 0:
        raise ValueError("no common trusted range")
    B = stack_upto(basis, upto)
    t = target.coeffs_upto(upto)
    G = B.conj().T @ B
    G = (G + G.conj().T) / 2
    beta = B.conj().T @ t
    return _solve_normal(G, beta, float(np.vdot(t, t).real), ridge, upto)


def dist_to_span_lstsq(target: CoeffVector, basis: list[CoeffVector]) -> float:
    """Oracle: residual of a dense least-squares solve (SVD-based LAPACK gelsd)."""
    upto = common_range([target, *basis])
    B = stack_upto(basis, upto)
    t = target.coeffs_upto(upto)
    c, *_ = np.linalg.lstsq(B, t, rcond=None)
    return float(np.linalg.norm(t - B @ c))


def h_basis(K: int, D: int) -> list[CoeffVector]:
    return [make_h(k, D) for k in range(2, K + 1)]


# ---------------------------------------------------------------- sweeps


@dataclass
class DistanceSweep:
    K_values: list[int]
    D: int
    ridge: float
    distances: list[float]
    condition_numbers: list[float]
    oracle_distances: list[float]
    h_tail_bounds: list[float]
    monotone: bool
    max_oracle_gap: float
    note: str = "finite-K, finite-D distances; no statement about the limit K -> infinity"


def rh_distance_sweep(K_max: int, D: int, ridge: float = 0.0) -> DistanceSweep:
    """d_K = dist(1, span{h_2..h_K}) for K = 2..K_max.

    The Gram matrix of all K_max - 1 vectors is assembled once; each K uses
    its leading principal block.
    """
    if K_max < 2:
        raise ValueError("K_max must be >= 2")
    basis = h_basis(K_max, D)
    one = monomial(0)
    upto = common_range([one, *basis])
    B = stack_upto(basis, upto)
    t = one.coeffs_upto(upto)
    G = B.conj().T @ B
    G = (G + G.conj().T) / 2
    beta = B.conj().T @ t
    target_sq = float(np.vdot(t, t).real)
    Ks, dists, conds, oracle = [], [], [], []
    for K in range(2, K_max + 1):
        r = K - 1
        res = _solve_normal(G[:r, :r], beta[:r], target_sq, ridge, upto)
        Ks.append(K)
        dists.append(res.distance)
        conds.append(res.condition)
        c, *_ = np.linalg.lstsq(B[:, :r], t, rcond=None)
        oracle.append(float(np.linalg.norm(t - B[:, :r] @ c)))
    monotone = all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))
    gap = max(abs(a - b) for a, b in zip(dists, oracle))
    tails = [v.tail_bound for v in basis]
    return DistanceSweep(Ks, D, ridge, dists, conds, oracle, tails, monotone, gap)


@dataclass
class MFamilyReport:
    K: int
    D: int
    gram: GramReport
    distance_M: float
    distance_N: float
    note: str = ("dim of the orthogonal complement of M is not computable at finite "
                 "truncation; these are diagnostics only")


def m_family_diagnostics(K: int, D: int) -> MFamilyReport:
    """Gram rank of {h_k - h_2 : 3 <= k <= K} and dist(1, its span).

    The differences h_k - h_2 span the same space as all h_k - h_l with
    2 <= k, l <= K.
    """
    if K < 3:
        raise ValueError("K must be >= 3")
    hs = h_basis(K, D)
    diffs = [lin_comb([(1, h), (-1, hs[0])]) for h in hs[1:]]
    labels = [f"h_{k}-h_2" for k in range(3, K + 1)]
    report = span_gram(diffs, labels=labels)
    one = monomial(0)
    dM = dist_to_span(one, diffs).distance
    dN = dist_to_span(one, hs).distance
    return MFamilyReport(K, D, report, dM, dN)


@dataclass
class OrbitResidualProfile:
    n: int
    start: str
    steps: int
    K: int
    residuals: list[float]
    trusted_degrees: list[int]
    requested_steps: int
    exhausted: bool = False
    note: str = field(default="small residuals are evidence about orbit membership, never proof")


def orbit_residual_profile(n: int, f: CoeffVector, steps: int, K: int, D: int,
                           start: str = "f", ridge: float = 0.0) -> OrbitResidualProfile:
    """residuals[m] = dist((W_n^*)^m f, span{h_2..h_K}) for m = 0..steps.

    Stops early (``exhausted=True``) once the iterate keeps no trusted
    coefficient.
    """
    basis = h_basis(K, D)
    spec = OperatorSpec(sg.ADJOINT, n)
    residuals, degrees = [], []
    current = f
    exhausted = False
    for m in range(steps + 1):
        if m > 0:
            current = sg.apply(spec, current)
        if not current.has_trusted:
            exhausted = True
            break
        res = dist_to_span(current, basis, ridge)
        residuals.append(res.distance)
        degrees.append(res.trusted_degree)
    return OrbitResidualProfile(n, start, len(residuals) - 1, K, residuals, degrees, steps,
                                exhausted)
