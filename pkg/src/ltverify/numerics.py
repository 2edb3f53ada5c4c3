"""Scalar numerics used throughout: Gamma/Beta, bisection, bounded
minimization, adaptive quadrature and a symmetric eigenvalue solver.

Everything here is a thin, contract-checking layer over the standard
library, numpy and scipy.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .errors import AccuracyError, BracketError, ContractError, DomainError

ScalarFn = Callable[[float], float]


@dataclass(frozen=True)
class BracketedRoot:
    lo: float
    hi: float
    tolerance: float = 1e-14

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty bracket [{self.lo}, {self.hi}]")
        if self.tolerance <= 0:
            raise DomainError("bracket tolerance must be positive")


@dataclass(frozen=True)
class CertifiedValue:
    """A truncated evaluation with the true value in ``[value, value + tail_bound]``."""

    value: float
    tail_bound: float
    terms_used: int

    @property
    def upper(self) -> float:
        return self.value + self.tail_bound


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"beta needs positive arguments, got ({a}, {b})")
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def find_root(f: ScalarFn, bracket: BracketedRoot) -> float:
    """Plain bisection. Deterministic, returns the midpoint of the final bracket."""
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    while hi - lo > bracket.tolerance:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # float resolution reached
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def minimize_scalar(f: ScalarFn, lo: float, hi: float, tol: float = 1e-10,
                    grid: int = 65) -> tuple[float, float]:
    """Minimize ``f`` on ``[lo, hi]``.

    A uniform pre-scan picks the best grid cell, then bounded Brent refines
    inside the two neighbouring cells, so mildly non-unimodal inputs are
    handled as long as the grid resolves the basin.
    """
    if not lo < hi:
        mid = 0.5 * (lo + hi)
        return mid, f(mid)
    xs = np.linspace(lo, hi, grid)
    ys = np.array([f(x) for x in xs])
    i = int(np.argmin(ys))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    res = optimize.minimize_scalar(f, bounds=(a, b), method="bounded",
                                   options={"xatol": tol})
    if res.fun <= ys[i]:
        return float(res.x), float(res.fun)
    return float(xs[i]), float(ys[i])


def integrate_adaptive(f: ScalarFn, a: float, b: float, tol: float = 1e-10,
                       limit: int = 500) -> float:
    """Adaptive Gauss-Kronrod quadrature on ``[a, b]``; ``b`` may be ``inf``.

    An infinite upper limit is mapped to ``[0, 1)`` with ``x = a + s/(1-s)``.
    Raises :class:`AccuracyError` when the estimated error exceeds ``tol``
    (absolute or relative, whichever is looser).
    """
    # convergence is judged below from the returned error estimate
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = _quad(f, a, b, tol, limit)
    if err > max(tol, tol * abs(value)):
        raise AccuracyError(f"quadrature error {err:.3g} exceeds {tol:.3g}",
                            value, err)
    return float(value)


def _quad(f, a, b, tol, limit):
    if math.isinf(b):
        def g(s):
            if s >= 1.0:
                return 0.0
            return f(a + s / (1.0 - s)) / (1.0 - s) ** 2
        value, err = integrate.quad(g, 0.0, 1.0, epsabs=tol, epsrel=tol,
                                    limit=limit)
    else:
        value, err = integrate.quad(f, a, b, epsabs=tol, epsrel=tol,
                                    limit=limit)
    return value, err


def eig_sym(A) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {A.shape}")
    if A.size == 0:
        return np.zeros(0)
    scale = float(np.max(np.abs(A)))
    if scale > 0 and float(np.max(np.abs(A - A.T))) > 1e-12 * scale:
        raise ContractError("matrix is not symmetric")
    return np.linalg.eigvalsh(0.5 * (A + A.T))
