"""Coefficient-level actions of W_n f(z) = (1 + z + ... + z^{n-1}) f(z^n) and its adjoint.

On coefficients, W_n repeats every coefficient n times and W_n^* replaces
the sequence by its sums over consecutive blocks of length n.  Both run in
O(D) without materializing a matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .hardy_core import CoeffVector, truncate

__all__ = [
    "FORWARD",
    "ADJOINT",
    "OperatorSpec",
    "apply",
    "apply_W",
    "apply_W_star",
    "apply_iterate",
]

FORWARD = "W"
ADJOINT = "W_star"

# Largest semigroup index an iterate may collapse to.
MAX_INDEX = 2**62


@dataclass(frozen=True)
class OperatorSpec:
    kind: Literal["W", "W_star"]
    n: int

    def __post_init__(self):
        if self.kind not in (FORWARD, ADJOINT):
            raise ValueError(f"kind must be {FORWARD!r} or {ADJOINT!r}, got {self.kind!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"semigroup index n must be an integer >= 1, got {self.n}")

    def __str__(self):
        return f"W_{self.n}" if self.kind == FORWARD else f"W*_{self.n}"


def _check_n(n: int):
    if int(n) != n or n < 1:
        raise ValueError(f"semigroup index n must be an integer >= 1, got {n}")


def apply_W(n: int, f: CoeffVector, max_degree: int | None = None) -> CoeffVector:
    """W_n f: output coefficient j is f^(j // n).

    The output degree is n(D+1)-1.  With ``max_degree`` set, coefficients
    above it are dropped and their norm moves into the tail bound.
    """
    _check_n(n)
    V = n * f.valid_degree + n - 1 if f.valid_degree >= 0 else -1
    tail = math.sqrt(n) * f.tail_bound if f.tail_bound else 0.0
    full = n * f.coeffs.size - 1
    if max_degree is None or max_degree >= full:
        return CoeffVector(np.repeat(f.coeffs, n), V, exact=f.exact, tail_bound=tail,
                           notes=f.notes)
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    out = f.coeffs[np.arange(max_degree + 1) // n]
    if V <= max_degree:
        return CoeffVector(out, V, exact=f.exact, tail_bound=tail, notes=f.notes)
    # trusted output indices max_degree+1..V come from input index j with
    # multiplicity n, except the first block which is partially kept
    first = (max_degree + 1) // n
    kept_in_first = (max_degree + 1) - first * n
    src = np.abs(f.coeffs[first: f.valid_degree + 1]) ** 2
    weights = np.full(src.size, float(n))
    weights[0] -= kept_in_first
    dropped = math.sqrt(float(np.dot(weights, src)))
    return CoeffVector(out, max_degree, exact=f.exact and dropped == 0.0,
                       tail_bound=tail + dropped, notes=f.notes)


def _block_sums(c: np.ndarray, n: int) -> np.ndarray:
    # the last block may be partial
    return np.add.reduceat(c, np.arange(0, c.size, n))


def apply_W_star(n: int, f: CoeffVector) -> CoeffVector:
    """W_n^* f: output coefficient k is f^(nk) + ... + f^(nk+n-1).

    A block is trusted only when all n members are trusted.  For exact
    inputs the true coefficients past V are zero, so the block containing V
    is complete as well.  When no block is trusted the result has
    ``valid_degree == -1``; callers decide what to do with it.
    """
    _check_n(n)
    V = f.valid_degree
    if f.exact:
        src = f.trusted() if f.has_trusted else np.zeros(1, dtype=np.complex128)
        out = _block_sums(src, n)
        return CoeffVector(out, out.size - 1, exact=True, tail_bound=0.0, notes=f.notes)

    out = _block_sums(f.coeffs, n)
    V_out = (V + 1) // n - 1
    # |W_n^*| = sqrt(n); what feeds the untrusted blocks is the leftover
    # trusted partial block plus the input's own tail.
    leftover = f.coeffs[n * (V_out + 1): V + 1]
    rest = math.hypot(float(np.linalg.norm(leftover)), f.tail_bound)
    tail = math.sqrt(n) * rest if rest else 0.0
    return CoeffVector(out, V_out, exact=False, tail_bound=tail, notes=f.notes)


def apply(spec: OperatorSpec, f: CoeffVector, max_degree: int | None = None) -> CoeffVector:
    if spec.kind == FORWARD:
        return apply_W(spec.n, f, max_degree)
    return apply_W_star(spec.n, f)


def apply_iterate(spec: OperatorSpec, m: int, f: CoeffVector, method: str = "collapse",
                  max_degree: int | None = None) -> CoeffVector:
    """m-fold application of ``spec`` to ``f``.

    ``method="collapse"`` uses W_n^m = W_{n^m} (and the same for adjoints);
    ``method="loop"`` applies the operator m times.  Both agree on the
    trusted range.
    """
    if int(m) != m or m < 0:
        raise ValueError(f"iterate count must be an integer >= 0, got {m}")
    if m == 0:
        return f
    if method == "loop":
        g = f
        for _ in range(m):
            g = apply(spec, g, max_degree)
        return g
    if method != "collapse":
        raise ValueError(f"unknown method {method!r}")
    # float screen first so huge powers are never built
    if m * math.log2(spec.n) > 62 or spec.n**m > MAX_INDEX:
        raise OverflowError(f"index {spec.n}^{m} overflows index arithmetic")
    return apply(OperatorSpec(spec.kind, spec.n**m), f, max_degree)
