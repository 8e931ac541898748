"""Truncated Hardy-space vectors and the series arithmetic built on them.

An element of H^2 is stored by its Maclaurin coefficients ``f^(0..D)``
together with the metadata needed to keep truncation error honest:

* ``valid_degree`` (V): coefficients at indices ``0..V`` are the true ones;
  anything stored above V is kept for diagnostics but never read into a
  trusted result.
* ``exact``: the represented function is the polynomial of degree <= V, so
  every true coefficient above V is known to be zero.
* ``tail_bound``: an upper bound on the l2 norm of the true coefficients with
  index > V.  ``math.inf`` means "unknown".

All vectors are immutable; every operation returns a new vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "CoeffVector",
    "Estimate",
    "common_range",
    "cumsum",
    "inner_product",
    "lin_comb",
    "monomial",
    "norm",
    "polynomial",
    "shift",
    "stack_upto",
    "truncate",
]


class Estimate(NamedTuple):
    """A computed value with an error radius around it."""

    value: complex | float
    radius: float


@dataclass(frozen=True, eq=False)
class CoeffVector:
    coeffs: np.ndarray
    valid_degree: int
    exact: bool = False
    tail_bound: float = math.inf
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if arr.size == 0:
            raise ValueError("coeffs must hold at least one entry")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        V = int(self.valid_degree)
        if not -1 <= V <= arr.size - 1:
            raise ValueError(f"valid_degree {V} outside [-1, {arr.size - 1}]")
        object.__setattr__(self, "valid_degree", V)
        tail = float(self.tail_bound)
        if math.isnan(tail) or tail < 0:
            raise ValueError(f"tail_bound must be a nonnegative real, got {tail}")
        if self.exact:
            tail = 0.0
        object.__setattr__(self, "tail_bound", tail)
        object.__setattr__(self, "exact", bool(self.exact))
        object.__setattr__(self, "notes", tuple(self.notes))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def has_trusted(self) -> bool:
        return self.valid_degree >= 0

    def trusted(self) -> np.ndarray:
        """Coefficients at indices 0..V (a read-only view)."""
        return self.coeffs[: self.valid_degree + 1]

    def known_upto(self) -> float:
        """Largest index whose true coefficient is known (``inf`` when exact)."""
        return math.inf if self.exact else self.valid_degree

    def coeffs_upto(self, m: int) -> np.ndarray:
        """True coefficients at indices 0..m.

        Exact vectors are zero-padded past V; asking an inexact vector for
        indices it does not trust raises ``ValueError``.
        """
        if m > self.known_upto():
            raise ValueError(f"index {m} exceeds trusted degree {self.valid_degree}")
        out = np.zeros(m + 1, dtype=np.complex128)
        top = min(m, self.valid_degree)
        out[: top + 1] = self.coeffs[: top + 1]
        return out

    def __repr__(self):
        head = np.array2string(self.coeffs[: min(4, self.coeffs.size)], precision=6)
        return (
            f"CoeffVector(D={self.degree}, V={self.valid_degree}, exact={self.exact}, "
            f"tail={self.tail_bound:.3g}, head={head})"
        )


def polynomial(coeffs: Iterable[complex], degree: int | None = None) -> CoeffVector:
    """Exact polynomial with the given coefficients, optionally zero-padded to ``degree``."""
    arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=np.complex128)
    if degree is not None:
        if degree < arr.size - 1:
            raise ValueError("degree smaller than the polynomial's length")
        arr = np.concatenate([arr, np.zeros(degree + 1 - arr.size, dtype=np.complex128)])
    return CoeffVector(arr, arr.size - 1, exact=True, tail_bound=0.0)


def monomial(a: int, degree: int | None = None) -> CoeffVector:
    if a < 0:
        raise ValueError("monomial exponent must be >= 0")
    c = np.zeros(a + 1, dtype=np.complex128)
    c[a] = 1.0
    return polynomial(c, degree)


def _upper_norm(f: CoeffVector) -> float:
    part = float(np.linalg.norm(f.trusted()))
    return math.hypot(part, f.tail_bound)


def _scaled(c: float, bound: float) -> float:
    # 0 * inf is treated as 0: a zero weight carries no uncertainty.
    if c == 0 or bound == 0:
        return 0.0
    return c * bound


def inner_product(f: CoeffVector, g: CoeffVector) -> Estimate:
    """<f, g> = sum f^(j) conj(g^(j)) over the jointly trusted range.

    The radius bounds the contribution of the untrusted tails by
    Cauchy-Schwarz: ``tail_f * |g|_upper + tail_g * |f|_upper``.
    """
    # Past min(V_f, V_g) one side is either known zero (exact) or covered by
    # its tail bound in the Cauchy-Schwarz term.
    top = min(f.valid_degree, g.valid_degree)
    value = complex(np.vdot(g.coeffs[: top + 1], f.coeffs[: top + 1])) if top >= 0 else 0j
    radius = _scaled(f.tail_bound, _upper_norm(g)) + _scaled(g.tail_bound, _upper_norm(f))
    return Estimate(value, radius)


def norm(f: CoeffVector) -> Estimate:
    """H^2 norm from the trusted coefficients.

    ``value`` is the trusted partial norm, a lower bound; ``value + radius``
    is an upper bound.
    """
    part = float(np.linalg.norm(f.trusted()))
    return Estimate(part, math.hypot(part, f.tail_bound) - part)


def common_range(vectors: Sequence[CoeffVector]) -> int:
    """Largest index m such that every vector's true coefficients 0..m are known."""
    if not vectors:
        raise ValueError("need at least one vector")
    inexact = [v.valid_degree for v in vectors if not v.exact]
    if inexact:
        return min(inexact)
    return max(v.valid_degree for v in vectors)


def stack_upto(vectors: Sequence[CoeffVector], m: int) -> np.ndarray:
    """Columns of true coefficients 0..m, shape (m+1, len(vectors))."""
    return np.stack([v.coeffs_upto(m) for v in vectors], axis=1)


def _tail_beyond(f: CoeffVector, m: int) -> float:
    """Bound on the l2 norm of f's true coefficients past index m."""
    if f.exact and f.valid_degree <= m:
        return 0.0
    if m >= f.valid_degree:
        return f.tail_bound
    dropped = float(np.linalg.norm(f.coeffs[max(m + 1, 0): f.valid_degree + 1]))
    return math.hypot(dropped, f.tail_bound)


def lin_comb(pairs: Sequence[tuple[complex, CoeffVector]]) -> CoeffVector:
    """Coefficient-wise combination sum c_i f_i.

    The result is trusted up to the smallest V among the inexact inputs
    (exact inputs are known everywhere).  Its tail bound is
    ``sum |c_i| * tail_i``, where each input's tail is measured past the
    output's V so that trusted coefficients dropped by the shorter inputs
    are still accounted for.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("lin_comb needs a nonempty list of (scalar, vector) pairs")
    vecs = [v for _, v in pairs]
    D = max(v.degree for v in vecs)
    out = np.zeros(D + 1, dtype=np.complex128)
    for c, v in pairs:
        if v.exact:
            # untrusted storage past V of an exact vector is not real data
            out[: v.valid_degree + 1] += c * v.trusted()
        else:
            out[: v.degree + 1] += c * v.coeffs
    exact = all(v.exact for v in vecs)
    V = min(common_range(vecs), D)
    tail = 0.0 if exact else sum(_scaled(abs(c), _tail_beyond(v, V)) for c, v in pairs)
    return CoeffVector(out, V, exact=exact, tail_bound=tail)


def scale(c: complex, f: CoeffVector) -> CoeffVector:
    return lin_comb([(c, f)])


def shift(f: CoeffVector, degree: int | None = None) -> CoeffVector:
    """Multiplication by z.

    Storage grows by one so no trusted coefficient is lost; pass ``degree``
    to cap the output, in which case the dropped coefficient moves into the
    tail bound.
    """
    out = np.concatenate([[0j], f.coeffs])
    g = CoeffVector(out, f.valid_degree + 1, exact=f.exact, tail_bound=f.tail_bound)
    if degree is not None and degree < g.degree:
        g = truncate(g, degree)
    return g


def cumsum(f: CoeffVector, tail_bound: float | None = None) -> CoeffVector:
    """Multiplication by 1/(1-z): g^(j) = sum_{i<=j} f^(i).

    The result is generally not a polynomial and its tail is unknown
    (``inf``) unless the caller supplies one.  The one case resolved here is
    an exact input whose coefficients sum to zero: then the result is an
    exact polynomial of degree < V.
    """
    V = f.valid_degree
    out = np.cumsum(f.coeffs)
    if f.exact and V >= 0 and np.sum(f.trusted()) == 0:
        return CoeffVector(out, V, exact=True, tail_bound=0.0)
    tail = math.inf if tail_bound is None else tail_bound
    return CoeffVector(out, V, exact=False, tail_bound=tail, notes=f.notes)


def truncate(f: CoeffVector, new_degree: int) -> CoeffVector:
    """Drop stored coefficients above ``new_degree``.

    The l2 norm of dropped trusted coefficients is added to the tail bound.
    """
    if new_degree < 0:
        raise ValueError("new_degree must be >= 0")
    V = min(f.valid_degree, new_degree)
    dropped = f.coeffs[new_degree + 1: f.valid_degree + 1]
    dropped_norm = float(np.linalg.norm(dropped)) if dropped.size else 0.0
    exact = f.exact and dropped_norm == 0.0
    tail = 0.0 if exact else f.tail_bound + dropped_norm
    return CoeffVector(f.coeffs[: new_degree + 1], V, exact=exact, tail_bound=tail,
                       notes=f.notes)
