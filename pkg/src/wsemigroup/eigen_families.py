"""Closed-form generators for the common eigenvectors of the adjoint semigroup.

Every generator returns a :class:`CoeffVector` trusted on 0..D with a
rigorous bound on the l2 norm of the coefficients it leaves out.

Families
--------
f_k      f^(0) = 1, f^(n) = (n+1)^-k - n^-k; W_n^* f_k = n^-k f_k
g_k      g^(n) = (n+1)^-k; (1 - z) g_k = f_k
kappa_s  zeta kernel, coefficient j is phi(j, conj(s)); W_n^* kappa_s = n^(1-conj(s)) kappa_s
h_k      (1-z)^-1 log((1 + z + ... + z^(k-1)) / k), k >= 2

Complex powers use ``n**w = exp(w * ln n)`` with real ``ln n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hardy_core import CoeffVector, cumsum

__all__ = [
    "EigenFamilySpec",
    "MultiplicativeSequence",
    "eigenvalue",
    "generate",
    "h_inner_coeffs",
    "make_common_eigenvector",
    "make_f",
    "make_g",
    "make_h",
    "make_kappa",
    "phi",
    "phi_array",
]

SLOW_TAIL = "slow tail decay: choose D with the tail bound in mind"


def _check_int(name, value, lo):
    if int(value) != value or value < lo:
        raise ValueError(f"{name} must be an integer >= {lo}, got {value}")


def _power_diff(w: complex, j: np.ndarray) -> np.ndarray:
    """(j+1)**w - j**w for j >= 1 without cancellation."""
    j = np.asarray(j, dtype=np.float64)
    return np.exp(w * np.log(j)) * np.expm1(w * np.log1p(1.0 / j))


def make_f(k: int, D: int) -> CoeffVector:
    _check_int("k", k, 1)
    _check_int("D", D, 1)
    n = np.arange(1, D + 1, dtype=np.float64)
    coeffs = np.empty(D + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    coeffs[1:] = _power_diff(-k, n).real
    # |f^(n)| <= k n^-(k+1), summed past D by integral comparison
    tail = math.sqrt(k * k / ((2 * k + 1) * float(D) ** (2 * k + 1)))
    return CoeffVector(coeffs, D, exact=False, tail_bound=tail)


def make_g(k: int, D: int) -> CoeffVector:
    _check_int("k", k, 1)
    _check_int("D", D, 0)
    coeffs = (np.arange(D + 1, dtype=np.float64) + 1.0) ** (-k)
    tail = math.sqrt((D + 1.0) ** (1 - 2 * k) / (2 * k - 1))
    notes = (SLOW_TAIL,) if k == 1 else ()
    return CoeffVector(coeffs.astype(np.complex128), D, tail_bound=tail, notes=notes)


def phi(j: int, s: complex) -> complex:
    """Coefficient functional: -1/s at j = 0, else -((j+1)^(1-s) - j^(1-s)) / s."""
    if s == 0:
        raise ValueError("phi is undefined at s = 0")
    if j < 0:
        raise ValueError("j must be >= 0")
    s = complex(s)
    if j == 0:
        return -1 / s
    return complex(-_power_diff(1 - s, np.array([j]))[0] / s)


def phi_array(s: complex, D: int) -> np.ndarray:
    """phi(j, s) for j = 0..D."""
    if s == 0:
        raise ValueError("phi is undefined at s = 0")
    s = complex(s)
    out = np.empty(D + 1, dtype=np.complex128)
    out[0] = -1 / s
    if D >= 1:
        out[1:] = -_power_diff(1 - s, np.arange(1, D + 1)) / s
    return out


def make_kappa(s: complex, D: int) -> CoeffVector:
    s = complex(s)
    if s.real <= 0.5:
        raise ValueError(f"zeta kernel needs Re s > 1/2, got {s}")
    _check_int("D", D, 0)
    sb = s.conjugate()
    coeffs = phi_array(sb, D)
    # |phi_j(sb)| <= |1-sb|/|sb| * int_j^{j+1} x^-Re(s) dx, then Cauchy-Schwarz
    # on each unit interval: sum_{j>D} <= int_{D+1}^inf x^-2Re(s) dx
    sigma = s.real
    C = abs(1 - sb) / abs(sb)
    tail = C * math.sqrt((D + 1.0) ** (1 - 2 * sigma) / (2 * sigma - 1))
    notes = (SLOW_TAIL,) if sigma <= 1 else ()
    return CoeffVector(coeffs, D, tail_bound=tail, notes=notes)


def h_inner_coeffs(k: int, D: int) -> np.ndarray:
    """Coefficients of log((1 - z^k) / (k (1 - z))) on 0..D.

    c_0 = -log k and c_j = (1 - k [k | j]) / j: the series of -log(1-z)
    minus that of -log(1-z^k).
    """
    _check_int("k", k, 2)
    j = np.arange(1, D + 1)
    c = np.empty(D + 1, dtype=np.float64)
    c[0] = -math.log(k)
    c[1:] = (1.0 - k * (j % k == 0)) / j
    return c


def make_h(k: int, D: int) -> CoeffVector:
    """h_k on 0..D: partial sums of the telescoped log series.

    h^(m) = -(sum of c_j over j > m), and grouping the tail in blocks of k
    gives |h^(m)| <= 1.5 (k-1) / (m - k + 2) for m >= k-1, so the
    coefficients past D have l2 norm at most 1.5 (k-1) / sqrt(D - k + 2).
    """
    _check_int("k", k, 2)
    if D < k - 1:
        raise ValueError(f"make_h needs D >= k-1 = {k - 1} for its tail bound")
    inner = CoeffVector(h_inner_coeffs(k, D).astype(np.complex128), D)
    tail = 1.5 * (k - 1) / math.sqrt(D - k + 2)
    return cumsum(inner, tail_bound=tail)


@dataclass(frozen=True)
class MultiplicativeSequence:
    """Completely multiplicative n -> lambda_n, evaluated on integer arrays.

    ``certified_l2_diff`` is the caller's assertion that the successive
    differences are square summable; it cannot be checked numerically.
    ``exponent`` is set for power sequences lambda_n = n**w and enables a
    cancellation-free difference.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    certified_l2_diff: bool = False
    label: str = "lambda"
    exponent: complex | None = None

    @classmethod
    def power(cls, w: complex) -> "MultiplicativeSequence":
        w = complex(w)
        return cls(
            evaluator=lambda n: np.exp(w * np.log(np.asarray(n, dtype=np.float64))),
            # (n+1)^w - n^w ~ w n^(w-1), square summable iff Re w < 1/2
            certified_l2_diff=w.real < 0.5,
            label=f"n^({w.real:g}{w.imag:+g}j)",
            exponent=w,
        )

    def __call__(self, n):
        return np.asarray(self.evaluator(np.asarray(n)), dtype=np.complex128)

    def differences(self, D: int) -> np.ndarray:
        """lambda_{n+1} - lambda_n for n = 1..D."""
        n = np.arange(1, D + 1)
        if self.exponent is not None:
            return _power_diff(self.exponent, n)
        vals = self(np.arange(1, D + 2))
        return vals[1:] - vals[:-1]

    def multiplicativity_defect(self, pairs) -> float:
        """max |lambda_{mn} - lambda_m lambda_n| over the given (m, n) pairs."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        m, n = pairs[:, 0], pairs[:, 1]
        return float(np.max(np.abs(self(m * n) - self(m) * self(n))))


def make_common_eigenvector(lam: MultiplicativeSequence, f0: complex, D: int,
                            tail_bound: float = math.inf) -> CoeffVector:
    """f^(0) = f0, f^(n) = (lambda_{n+1} - lambda_n) f0; then W_n^* f = lambda_n f."""
    if f0 == 0:
        raise ValueError("f0 must be nonzero")
    if not lam.certified_l2_diff:
        raise ValueError(f"{lam.label}: differences not certified square summable")
    _check_int("D", D, 0)
    coeffs = np.empty(D + 1, dtype=np.complex128)
    coeffs[0] = f0
    coeffs[1:] = lam.differences(D) * f0
    return CoeffVector(coeffs, D, tail_bound=tail_bound)


@dataclass(frozen=True)
class EigenFamilySpec:
    family: str
    degree: int
    k: int | None = None
    s: complex | None = None

    def __post_init__(self):
        if self.family not in ("f", "g", "kappa", "h"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "kappa":
            if self.s is None or complex(self.s).real <= 0.5:
                raise ValueError("kappa needs s with Re s > 1/2")
        else:
            lo = 2 if self.family == "h" else 1
            if self.k is None or int(self.k) != self.k or self.k < lo:
                raise ValueError(f"{self.family}_k needs integer k >= {lo}")

    @property
    def label(self) -> str:
        if self.family == "kappa":
            s = complex(self.s)
            return f"kappa_{s.real:g}{s.imag:+g}i"
        return f"{self.family}_{self.k}"


def generate(spec: EigenFamilySpec) -> CoeffVector:
    if spec.family == "f":
        return make_f(spec.k, spec.degree)
    if spec.family == "g":
        return make_g(spec.k, spec.degree)
    if spec.family == "h":
        return make_h(spec.k, spec.degree)
    return make_kappa(spec.s, spec.degree)


def eigenvalue(spec: EigenFamilySpec, n: int) -> complex:
    """Eigenvalue of W_n^* on the family member (f and kappa only)."""
    if spec.family == "f":
        return float(n) ** (-spec.k)
    if spec.family == "kappa":
        w = 1 - complex(spec.s).conjugate()
        return complex(np.exp(w * math.log(n)))
    raise ValueError(f"{spec.family}_k is not an eigenvector of W_n^*")
