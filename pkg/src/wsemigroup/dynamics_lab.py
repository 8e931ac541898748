"""Finite-dimensional orbit experiments for W_n and W_n^*.

Hypercyclicity, mixing and frequent hypercyclicity live in infinite
dimensions and cannot be certified numerically.  What this module reports
are surrogates: norm profiles along orbits, return times of periodic
kernels, finite-horizon visit frequencies and Gram-matrix ranks of finite
eigenvector families.  Each report says which surrogate it is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import semigroup as sg
from .eigen_families import make_kappa
from .hardy_core import CoeffVector, common_range, lin_comb, norm, polynomial, stack_upto
from .semigroup import OperatorSpec

__all__ = [
    "ExpansivityReport",
    "GramReport",
    "OrbitRecord",
    "PeriodDetection",
    "PeriodicPointSpec",
    "detect_period",
    "expansivity_check",
    "random_unit_polynomial",
    "run_orbit",
    "span_gram",
    "spectral_radius_probe",
    "visit_density",
]


def random_unit_polynomial(rng: np.random.Generator, degree: int) -> CoeffVector:
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return polynomial(c / np.linalg.norm(c))


# ---------------------------------------------------------------- orbits


@dataclass
class OrbitRecord:
    operator: OperatorSpec
    start: CoeffVector
    steps: int
    norms: list[float]
    norm_radii: list[float]
    snapshots: dict[int, CoeffVector] = field(default_factory=dict)
    requested_steps: int = 0
    exhausted: bool = False

    @property
    def snapshot_stride(self) -> int:
        keys = sorted(self.snapshots)
        return keys[1] - keys[0] if len(keys) > 1 else 0


def run_orbit(spec: OperatorSpec, f: CoeffVector, steps: int, snapshot_stride: int = 0,
              max_degree: int | None = None) -> OrbitRecord:
    """Iterate ``spec`` on ``f`` and record trusted-range norms.

    Adjoint orbits lose trusted degree geometrically (V_m ~ V / n^m); when
    no trusted coefficient is left the orbit stops early with
    ``exhausted=True`` and ``steps`` set to the last completed step.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    current = f
    est = norm(f)
    norms, radii = [est.value], [est.radius]
    snapshots = {0: f} if snapshot_stride > 0 else {}
    done = 0
    exhausted = False
    for m in range(1, steps + 1):
        nxt = sg.apply(spec, current, max_degree)
        if not nxt.has_trusted:
            exhausted = True
            break
        current = nxt
        est = norm(current)
        norms.append(est.value)
        radii.append(est.radius)
        if snapshot_stride > 0 and m % snapshot_stride == 0:
            snapshots[m] = current
        done = m
    return OrbitRecord(spec, f, done, norms, radii, snapshots, steps, exhausted)


def visit_density(orbit: OrbitRecord, target: CoeffVector, radius: float) -> float:
    """Finite-horizon lower-density proxy of the visits to a ball.

    With hits counted among the first N orbit points T^0 f .. T^(N-1) f,
    returns min over N of hits(N)/N.  This is a lower-density estimate on
    a finite horizon, not the liminf itself.
    """
    if not orbit.snapshots:
        raise ValueError("orbit has no snapshots; run it with snapshot_stride=1")
    if sorted(orbit.snapshots) != list(range(orbit.steps + 1)):
        raise ValueError("visit_density needs snapshots at stride 1")
    hits = np.array([
        norm(lin_comb([(1, orbit.snapshots[m]), (-1, target)])).value <= radius
        for m in range(orbit.steps + 1)
    ], dtype=float)
    running = np.cumsum(hits) / np.arange(1, hits.size + 1)
    return float(running.min())


# ---------------------------------------------------------------- periodic points


@dataclass(frozen=True)
class PeriodicPointSpec:
    """Kernel kappa_s at s = 1 + i pi alpha / log n, an eigenvector with eigenvalue e^(i pi alpha)."""

    n: int
    alpha: Fraction

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")
        object.__setattr__(self, "alpha", Fraction(self.alpha))

    @property
    def t(self) -> float:
        return math.pi * float(self.alpha) / math.log(self.n)

    @property
    def s(self) -> complex:
        return complex(1.0, self.t)

    @property
    def eigenvalue(self) -> complex:
        return complex(np.exp(1j * self.t * math.log(self.n)))

    @property
    def predicted_period(self) -> int:
        # least m >= 1 with alpha * m an even integer
        p, q = self.alpha.numerator, self.alpha.denominator
        return q if p % 2 == 0 else 2 * q


@dataclass
class PeriodDetection:
    spec: PeriodicPointSpec
    period: int | None
    residuals: list[float]
    tail_radius: float
    precondition_ok: bool

    @property
    def found(self) -> bool:
        return self.period is not None


def detect_period(spec: PeriodicPointSpec, D: int, tol: float,
                  max_period: int | None = None) -> PeriodDetection:
    """Smallest m with |(W_n^*)^m kappa - kappa| <= tol on the trusted range.

    Scans m = 1..max_period (default: the predicted period).  ``residuals``
    holds the profile either way; ``period`` is None when nothing was
    found, which means D is too small or tol too tight.
    ``precondition_ok`` records whether the one-step propagated tail radius
    of the eigenresidual is below tol/4.
    """
    kappa = make_kappa(spec.s, D)
    limit = spec.predicted_period if max_period is None else max_period
    one_step = (math.sqrt(spec.n) + 1) * kappa.tail_bound
    residuals = []
    period = None
    for m in range(1, limit + 1):
        moved = sg.apply_iterate(OperatorSpec(sg.ADJOINT, spec.n), m, kappa)
        if not moved.has_trusted:
            break
        res = norm(lin_comb([(1, moved), (-1, kappa)])).value
        residuals.append(res)
        if res <= tol:
            period = m
            break
    return PeriodDetection(spec, period, residuals, one_step, one_step <= tol / 4)


# ---------------------------------------------------------------- Gram reports


@dataclass
class GramReport:
    labels: list[str]
    gram: np.ndarray
    eigenvalues: np.ndarray
    min_eigenvalue: float
    effective_rank: int
    tau: float
    condition_estimate: float
    trusted_degree: int
    note: str = "finite-family rank is a surrogate for span density, not a proof of it"

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @property
    def full_rank(self) -> bool:
        return self.effective_rank == self.dimension and self.min_eigenvalue > 0


def gram_matrix(vectors, upto: int) -> np.ndarray:
    """G[i, j] = <v_j, v_i> over indices 0..upto."""
    B = stack_upto(vectors, upto)
    G = B.conj().T @ B
    return (G + G.conj().T) / 2


def span_gram(vectors: list[CoeffVector], tau: float | None = None,
              labels: list[str] | None = None) -> GramReport:
    """Gram matrix of trusted inner products with eigenvalue diagnostics.

    ``tau`` defaults to a rounding-level floor, ``dim * eps * max_eig``;
    eigenvalues above it count toward the effective rank.
    """
    if not vectors:
        raise ValueError("span_gram needs at least one vector")
    degrees = {v.degree for v in vectors if not v.exact}
    if len(degrees) > 1:
        raise ValueError(f"mismatched degrees {sorted(degrees)}")
    upto = common_range(vectors)
    if upto < 0:
        raise ValueError("no common trusted range")
    G = gram_matrix(vectors, upto)
    asym = np.max(np.abs(G - G.conj().T)) if G.size else 0.0
    assert asym <= 1e-12 * max(1.0, np.max(np.abs(G)))
    eig = np.linalg.eigvalsh(G)
    top = float(eig[-1])
    if tau is None:
        tau = len(vectors) * np.finfo(float).eps * max(top, 0.0)
    rank = int(np.sum(eig > tau))
    lo = float(eig[0])
    cond = top / lo if lo > 0 else math.inf
    if labels is None:
        labels = [f"v{i}" for i in range(len(vectors))]
    return GramReport(list(labels), G, eig, lo, rank, float(tau), cond, upto)


# ---------------------------------------------------------------- norms and expansivity


def spectral_radius_probe(n: int, m_max: int, method: str = "loop") -> list[float]:
    """|(W_n^*)^m e_m|^(1/m) for m = 1..m_max.

    The probe e_m = W_{n^m} 1 / |W_{n^m} 1| is where W_n^{*m} attains its
    norm n^(m/2), so every value equals sqrt(n) up to rounding.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for m in range(1, m_max + 1):
        N = n**m
        e = polynomial(np.full(N, 1 / math.sqrt(N)))
        image = sg.apply_iterate(OperatorSpec(sg.ADJOINT, n), m, e, method=method)
        out.append(norm(image).value ** (1.0 / m))
    return out


@dataclass
class ExpansivityReport:
    k: int
    trials: int
    degree: int
    seed: int
    m_max: int
    max_relative_error: float
    witness: int
    tol: float = 1e-12

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tol


def expansivity_witness(k: int) -> int:
    """Smallest m with k^(m/2) >= 2, i.e. k^m >= 4."""
    if k < 2:
        raise ValueError("k must be >= 2")
    m = 1
    while k**m < 4:
        m += 1
    return m


def expansivity_check(k: int, trials: int, D: int, seed: int = 0, m_max: int = 6) -> ExpansivityReport:
    """Check |W_k^m f| = k^(m/2) on random unit exact polynomials of degree D."""
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    worst = 0.0
    spec = OperatorSpec(sg.FORWARD, k)
    for _ in range(trials):
        f = random_unit_polynomial(rng, D)
        g = f
        for m in range(1, m_max + 1):
            g = sg.apply(spec, g)
            got = norm(g).value
            want = k ** (m / 2)
            worst = max(worst, abs(got - want) / want)
    return ExpansivityReport(k, trials, D, seed, m_max, worst, expansivity_witness(k))
