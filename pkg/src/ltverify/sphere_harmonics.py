"""Real spherical harmonics on S^2 and the shell identities they satisfy.

Convention: ``Pt_n^m(theta)`` is the associated Legendre function normalized
so that ``Pt_n^m(theta) e^{i m phi}`` has unit L^2 norm on the sphere, with
no Condon-Shortley phase.  The real basis of degree ``n`` is::

    Pt_n^0,  sqrt(2) Pt_n^m cos(m phi),  sqrt(2) Pt_n^m sin(m phi)   (1 <= m <= n)

For this basis ``sum_l Y_l(s)^2 = (2n+1)/(4 pi)`` and
``sum_l |grad Y_l(s)|^2 = n(n+1)(2n+1)/(4 pi)`` at every point ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

N_MAX_SUPPORTED = 64


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise DomainError(f"phi must lie in [0, 2pi), got {self.phi}")


@dataclass
class HarmonicShell:
    """Degree-``n`` real harmonics at one point.

    ``grad_phi`` is the physical component ``(1/sin theta) dY/dphi``.
    """

    n: int
    values: np.ndarray
    grad_theta: np.ndarray
    grad_phi: np.ndarray

    @property
    def eigenvalue(self) -> int:
        return self.n * (self.n + 1)

    @property
    def multiplicity(self) -> int:
        return 2 * self.n + 1


def eigen_table(m: int, n_max: int) -> list[tuple[int, int]]:
    """``(Lambda_n, k_m(n))`` for the Laplacian on ``S^{m-1}``, ``n = 1..n_max``.

    ``Lambda_n = n(n+m-2)`` and ``k_m(n) = (2n+m-2)/n * C(n+m-3, n-1)``.
    """
    if m < 2:
        raise DomainError(f"need m >= 2, got {m}")
    return [(n * (n + m - 2), (2 * n + m - 2) * math.comb(n + m - 3, n - 1) // n)
            for n in range(1, n_max + 1)]


def _legendre(n_max: int, theta, divide_sin: bool):
    """Table ``P[m][n]`` (``n >= m``) of ``Pt_n^m``, or ``Pt_n^m / sin`` for m >= 1.

    The division by ``sin theta`` is done analytically on the seed
    ``Pt_m^m ~ sin^m``, so the result is finite at the poles.
    """
    theta = np.asarray(theta, dtype=float)
    x, s = np.cos(theta), np.sin(theta)
    table = {}
    seed = np.full_like(theta, 1 / math.sqrt(4 * math.pi))
    for m in range(n_max + 2):
        if m > 0:
            c = math.sqrt((2 * m + 1) / (2 * m))
            if divide_sin and m == 1:
                seed = c * seed  # Pt_1^1 / sin
            else:
                seed = c * s * seed
        if divide_sin and m == 0:
            continue
        col = {m: seed}
        if m + 1 <= n_max + 1:
            col[m + 1] = math.sqrt(2 * m + 3) * x * seed
        for n in range(m + 2, n_max + 2):
            a = math.sqrt((4 * n * n - 1) / (n * n - m * m))
            b = math.sqrt(((n - 1) ** 2 - m * m) / (4 * (n - 1) ** 2 - 1))
            col[n] = a * (x * col[n - 1] - b * col[n - 2])
        table[m] = col
    return table


def _shell_arrays(n: int, theta, phi):
    """Values and gradient components of the degree-``n`` shell.

    Arrays have shape ``(2n+1,) + theta.shape``, ordered ``m = 0``, then
    ``(cos, sin)`` pairs for ``m = 1..n``.
    """
    P = _legendre(n, theta, False)
    Q = _legendre(n, theta, True) if n >= 1 else {}
    zero = np.zeros_like(np.asarray(theta, dtype=float))

    def Pnm(m):
        return P[m][n] if 0 <= m <= n else zero

    def dtheta(m):
        if m == 0:
            return -math.sqrt(n * (n + 1)) * Pnm(1)
        return 0.5 * (math.sqrt((n + m) * (n - m + 1)) * Pnm(m - 1)
                      - math.sqrt((n - m) * (n + m + 1)) * Pnm(m + 1))

    vals, gth, gph = [Pnm(0)], [dtheta(0)], [zero]
    r2 = math.sqrt(2.0)
    for m in range(1, n + 1):
        c, s = np.cos(m * phi), np.sin(m * phi)
        p, d, q = Pnm(m), dtheta(m), Q[m][n]
        vals += [r2 * p * c, r2 * p * s]
        gth += [r2 * d * c, r2 * d * s]
        gph += [-r2 * m * q * s, r2 * m * q * c]
    return np.array(vals), np.array(gth), np.array(gph)


def eval_shell(n: int, p: SpherePoint) -> HarmonicShell:
    if not 0 <= n <= N_MAX_SUPPORTED:
        raise DomainError(f"degree must lie in [0, {N_MAX_SUPPORTED}], got {n}")
    v, gt, gp = _shell_arrays(n, p.theta, p.phi)
    return HarmonicShell(n, v, gt, gp)


def addition_identity_residual(n: int, p: SpherePoint) -> float:
    sh = eval_shell(n, p)
    return abs(float(np.sum(sh.values ** 2)) - (2 * n + 1) / (4 * math.pi))


def gradient_identity_residual(n: int, p: SpherePoint) -> float:
    sh = eval_shell(n, p)
    total = float(np.sum(sh.grad_theta ** 2) + np.sum(sh.grad_phi ** 2))
    return abs(total - n * (n + 1) * (2 * n + 1) / (4 * math.pi))


@lru_cache(maxsize=4)
def _quadrature(n_theta: int = 64, n_phi: int = 128):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    T, Ph = np.meshgrid(theta, phi, indexing="ij")
    W = np.outer(w, np.full(n_phi, 2 * np.pi / n_phi))
    return T, Ph, W


def gram_matrix(n_max: int, n_theta: int = 64, n_phi: int = 128) -> np.ndarray:
    """Gram matrix of all real harmonics of degree ``<= n_max`` under
    Gauss-Legendre (in cos theta) x uniform (in phi) quadrature."""
    T, Ph, W = _quadrature(n_theta, n_phi)
    Y = np.concatenate([_shell_arrays(n, T, Ph)[0] for n in range(n_max + 1)])
    Y = Y.reshape(Y.shape[0], -1)
    return (Y * W.ravel()) @ Y.T


def shell_ratio(n0: int) -> float:
    """``||rho||^2 / sum lambda_j`` for the first ``n0`` complete shells.

    ``rho = N/(4 pi)`` is constant, so ``||rho||^2 = N^2 / (4 pi)``; the
    ratio equals ``n0(n0+2) / (2 pi (n0+1)^2)`` and increases to ``1/(2 pi)``.
    """
    if n0 < 1:
        raise DomainError("n0 must be >= 1")
    N = n0 * (n0 + 2)
    lam_sum = sum((2 * n + 1) * n * (n + 1) for n in range(1, n0 + 1))
    return N * N / (4 * math.pi) / lam_sum


def random_points(count: int, seed: int = 0, include_poles: bool = True) -> list[SpherePoint]:
    """Uniform random points on S^2, optionally preceded by the two poles."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1, 1, count)
    phi = rng.uniform(0, 2 * np.pi, count)
    pts = [SpherePoint(float(np.arccos(zi)), float(f)) for zi, f in zip(z, phi)]
    if include_poles:
        pts = [SpherePoint(0.0, 0.0), SpherePoint(math.pi, 0.0)] + pts
    return pts


def max_residuals(n_max: int, samples: int, seed: int = 0) -> dict[str, float]:
    pts = random_points(samples, seed)
    add = max(addition_identity_residual(n, p) for n in range(1, n_max + 1) for p in pts)
    grad = max(gradient_identity_residual(n, p) for n in range(1, n_max + 1) for p in pts)
    return {"addition": add, "gradient": grad}
