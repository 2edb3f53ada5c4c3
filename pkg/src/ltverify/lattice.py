"""Integer lattice points of Z^2 and Z^3 grouped by squared norm.

Besides enumeration this module carries the counting bounds
``N(lam) <= 8 lam`` (2D) and ``N(lam) <= 27 lam^{3/2}`` (3D), the
majorants they induce for radially decreasing lattice series, the
exponential series ``2 pi sum exp(-2 pi mu |m|)`` that controls the
Poisson correction of the torus sum at ``k = 3/2``, and the torus
thresholds derived from it.

The 3D density constant 27 comes from inscribing the ball of radius
``sqrt(lam)`` in the cube of side ``2 sqrt(lam) + 1``:
``N(lam) <= (2 sqrt(lam) + 1)^3 - 1 <= 27 lam^{3/2}`` for ``lam >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, signal, special

from .errors import ContractError, DomainError, ResourceError
from .numerics import CertifiedValue

# Largest lambda_max accepted per dimension (memory ~ 8 bytes per entry,
# a few temporaries on top).
MAX_LAMBDA = {2: 1 << 23, 3: 1 << 22}

# lambda_j >= (j / DENSITY)^(2/dim), proved by the square/cube inscription.
DENSITY = {2: 8.0, 3: 27.0}


@dataclass(frozen=True)
class LatticeSpectrum:
    """Distinct squared norms of ``Z^dim \\ {0}`` up to ``lambda_max``.

    ``norms`` is ascending and ``multiplicity[i]`` counts the lattice points
    with ``|m|^2 == norms[i]``.  ``cumulative[i]`` is ``N(norms[i])``.
    """

    dim: int
    lambda_max: int
    norms: np.ndarray
    multiplicity: np.ndarray

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.multiplicity)

    @property
    def lambdas(self) -> np.ndarray:
        """The full sequence lambda_1 <= lambda_2 <= ... with repetition."""
        return np.repeat(self.norms, self.multiplicity)

    @property
    def counting(self) -> dict[int, int]:
        return dict(zip(self.norms.tolist(), self.cumulative.tolist()))

    def N(self, lam: float) -> int:
        """Number of nonzero lattice points with ``|m|^2 <= lam``."""
        if lam > self.lambda_max:
            raise DomainError(f"N({lam}) beyond enumerated range {self.lambda_max}")
        i = int(np.searchsorted(self.norms, lam, side="right"))
        return int(self.multiplicity[:i].sum())

    def truncate(self, lam: int) -> "LatticeSpectrum":
        i = int(np.searchsorted(self.norms, lam, side="right"))
        return LatticeSpectrum(self.dim, int(lam), self.norms[:i], self.multiplicity[:i])


def _r1(lam_max: int) -> np.ndarray:
    r = math.isqrt(lam_max)
    out = np.zeros(lam_max + 1, dtype=np.int64)
    out[np.arange(1, r + 1) ** 2] = 2
    out[0] = 1
    return out


def _r2(lam_max: int) -> np.ndarray:
    # exact: one bincount over the first-quadrant pairs with sign weights
    r = math.isqrt(lam_max)
    i = np.arange(r + 1, dtype=np.int64)
    vals, weights = [], []
    for start in range(0, r + 1, 512):
        blk = i[start:start + 512, None]
        s = blk * blk + i[None, :] ** 2
        w = np.where(blk == 0, 1, 2) * np.where(i[None, :] == 0, 1, 2)
        mask = s <= lam_max
        vals.append(s[mask])
        weights.append(np.broadcast_to(w, s.shape)[mask])
    counts = np.bincount(np.concatenate(vals), weights=np.concatenate(weights),
                         minlength=lam_max + 1)
    return np.rint(counts).astype(np.int64)


def _r3(lam_max: int) -> np.ndarray:
    conv = signal.fftconvolve(_r2(lam_max).astype(float),
                              _r1(lam_max).astype(float))[: lam_max + 1]
    counts = np.rint(conv)
    if float(np.max(np.abs(conv - counts))) > 0.25:
        raise ResourceError("FFT convolution lost integer precision")
    return counts.astype(np.int64)


def enumerate(dim: int, lambda_max: int) -> LatticeSpectrum:  # noqa: A001
    """Exact enumeration of ``m in Z^dim \\ {0}`` with ``|m|^2 <= lambda_max``."""
    if dim not in (2, 3):
        raise DomainError(f"dim must be 2 or 3, got {dim}")
    lambda_max = int(lambda_max)
    if lambda_max < 1:
        raise DomainError("lambda_max must be >= 1")
    if lambda_max > MAX_LAMBDA[dim]:
        raise ResourceError(
            f"lambda_max={lambda_max} exceeds the memory budget; "
            f"use lambda_max <= {MAX_LAMBDA[dim]}")
    return _cached(dim, lambda_max)


@lru_cache(maxsize=8)
def _cached(dim: int, lambda_max: int) -> LatticeSpectrum:
    counts = _r2(lambda_max) if dim == 2 else _r3(lambda_max)
    counts[0] = 0
    norms = np.flatnonzero(counts)
    return LatticeSpectrum(dim, lambda_max, norms, counts[norms])


def spectrum_covering(dim: int, lam: int) -> LatticeSpectrum:
    """Spectrum up to ``lam`` cut from a cached power-of-two enumeration."""
    size = 1 << max(int(lam) - 1, 15).bit_length()
    if size > MAX_LAMBDA[dim]:
        if lam > MAX_LAMBDA[dim]:
            raise ResourceError(
                f"lattice radius^2 {lam} exceeds the {dim}D budget {MAX_LAMBDA[dim]}")
        size = MAX_LAMBDA[dim]
    return enumerate(dim, size).truncate(int(lam))


def check_counting_bounds(spectrum: LatticeSpectrum) -> dict:
    """Check the counting bounds on every realized squared norm.

    For ``j`` inside a block of equal norms the ratio ``lambda_j / j`` is
    smallest at the block's last index ``N(lambda)``, so checking the
    distinct norms covers all ``j``.  Integer arithmetic throughout.
    """
    lam = spectrum.norms.astype(np.int64)
    N = spectrum.cumulative.astype(np.int64)
    if spectrum.dim == 2:
        report = {
            "dim": 2,
            "lambda_max": spectrum.lambda_max,
            "max_ratio_N_over_lambda": float(np.max(N / lam)),
            "min_ratio_lambda_j_over_j": float(np.min(lam / N)),
            "N_le_8lambda": bool(np.all(N <= 8 * lam)),
            "lambda_j_ge_j_over_8": bool(np.all(8 * lam >= N)),
            "lambda_j_ge_j_over_4": bool(np.all(4 * lam >= N)),
        }
        report["passed"] = (report["N_le_8lambda"] and report["lambda_j_ge_j_over_8"]
                            and report["lambda_j_ge_j_over_4"])
    else:
        # N <= 27 lam^{3/2}  <=>  N^2 <= 729 lam^3 (exact in Python ints)
        ok = all(int(n) ** 2 <= 729 * int(l) ** 3 for l, n in zip(lam, N))
        report = {
            "dim": 3,
            "lambda_max": spectrum.lambda_max,
            "max_ratio_N_over_lambda32": float(np.max(N / lam ** 1.5)),
            "N_le_27lambda32": ok,
            "passed": ok,
        }
    return report


def radial_tail_bound(dim: int, J: int, a: float, p: float) -> float:
    """Bound on ``sum_{j > J} r_j^p exp(-a r_j)`` with ``r_j = sqrt(lambda_j)``.

    Uses ``r_j >= rho(j) = (j/DENSITY)^(1/dim)`` and integral comparison,
    which needs ``r^p e^{-a r}`` decreasing past ``rho(J)``; returns ``inf``
    when that fails so callers enlarge the cutoff.
    """
    if a <= 0:
        raise DomainError("decay rate must be positive")
    r0 = (J / DENSITY[dim]) ** (1.0 / dim)
    if p > 0 and a * r0 < p:
        return math.inf
    s = p + dim
    # sum_{j>J} rho(j)^p e^{-a rho(j)} <= int_J^inf = dim*DENSITY int_{r0}^inf r^{s-1} e^{-ar} dr
    return dim * DENSITY[dim] * special.gammaincc(s, a * r0) * special.gamma(s) / a ** s


def exp_tail_2d(mu: float, tol: float = 1e-12) -> CertifiedValue:
    """``2 pi sum_{m in Z^2_0} exp(-2 pi mu |m|)`` with a certified tail."""
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    a = 2.0 * math.pi * mu
    lam = 16
    while True:
        spec = spectrum_covering(2, lam)
        J = int(spec.multiplicity.sum())
        tail = 2.0 * math.pi * radial_tail_bound(2, J, a, 0.0)
        if tail <= 0.5 * tol:
            break
        lam *= 2
    terms = spec.multiplicity * np.exp(-a * np.sqrt(spec.norms))
    s = 2.0 * math.pi * math.fsum(terms)
    slack = 8 * np.finfo(float).eps * s
    return CertifiedValue(float(s - slack), float(tail + 2 * slack), lam)


def exp_sum_majorant(mu: float, density: float = 8.0) -> float:
    """Closed-form bound on ``sum_{m != 0} exp(-2 pi mu |m|)``.

    With ``lambda_j >= j/density`` and ``L = pi mu / sqrt(density)``:
    ``sum_j exp(-2L sqrt(j)) < exp(-L) * 2 / L^2``.
    """
    L = math.pi * mu / math.sqrt(density)
    return 2.0 * math.exp(-L) / L ** 2


def torus2_mu0() -> tuple[float, float]:
    """Thresholds beyond which ``2 pi sum exp(-2 pi mu |m|) < 1/mu^2``.

    ``crude`` uses ``lambda_j >= j/8``, ``sharp`` uses ``lambda_j >= j/4``.
    """
    crude = 2.0 * math.sqrt(2.0) / math.pi * math.log(32.0 / math.pi)
    sharp = 2.0 / math.pi * math.log(16.0 / math.pi)
    return crude, sharp


def torus3_mu0() -> float:
    """Threshold beyond which ``pi^2 sum_{Z^3_0} exp(-2 pi mu |m|) < 1/mu^3``.

    With ``a = 2 pi mu`` and ``|m_j| >= rho(j) = (j/27)^{1/3} >= 1/3``, split
    ``e^{-a rho} <= e^{-a/6} e^{-a rho/2}`` and compare the second factor with
    its integral ``1296/a^3``; the bound is ``(162/pi) e^{-pi mu/3} / mu^3``.
    """
    return 3.0 / math.pi * math.log(162.0 / math.pi)


def fourier_decay_bound(k: float, a: float) -> float:
    """Coefficient of the envelope ``|f^(xi)| <= C exp(-a |xi|)`` for
    ``f(x) = (1 + |x|^2)^{-k}`` on R^2, valid for ``0 < a < sqrt(2)/2``."""
    if not 1.0 < k < 2.0:
        raise DomainError(f"k must lie in (1, 2), got {k}")
    if not 0.0 < a < math.sqrt(2.0) / 2.0:
        raise DomainError(f"a must lie in (0, sqrt(2)/2), got {a}")
    return 1.0 / (2.0 * (k - 1.0) * (1.0 - 2.0 * a * a) ** (k - 1.0))


def general_k_mu0(k: float, a_grid=None) -> float:
    """A torus threshold for general ``k``.

    The Poisson correction ``2 pi sum |f^(2 pi mu m)|`` is at most
    ``2 pi C(a,k) sum exp(-2 pi a mu |m|) < 2 pi C * 2 e^{-L} / L^2`` with
    ``L = pi a mu / (2 sqrt 2)``; this is below ``1/mu^2`` once
    ``L > log(32 C / (pi a^2))``.  The smallest such ``mu`` over the grid
    of ``a`` values is returned.
    """
    if not 1.0 < k < 2.0:
        raise DomainError(f"k must lie in (1, 2), got {k}")
    if a_grid is None:
        a_grid = [0.1 * i for i in range(1, 8)]
    best = math.inf
    for a in a_grid:
        C = fourier_decay_bound(k, a)
        L = max(math.log(32.0 * C / (math.pi * a * a)), 0.0)
        best = min(best, L * 2.0 * math.sqrt(2.0) / (math.pi * a))
    return best


def fourier_check_1d(xi: float) -> tuple[float, float]:
    """``int_R cos(x xi)/(1+x^2) dx`` by quadrature against ``pi e^{-|xi|}``."""
    closed = math.pi * math.exp(-abs(xi))
    if xi == 0:
        val, _ = integrate.quad(lambda x: 1.0 / (1.0 + x * x), 0.0, np.inf,
                                epsabs=1e-13, epsrel=1e-13)
    else:
        val, _ = integrate.quad(lambda x: 1.0 / (1.0 + x * x), 0.0, np.inf,
                                weight="cos", wvar=abs(xi), epsabs=1e-12)
    return 2.0 * val, closed


def brute_force_counts(dim: int, lambda_max: int) -> dict[int, int]:
    """Point-by-point multiplicities; slow, for cross-checking small ranges."""
    r = math.isqrt(lambda_max)
    ax = np.arange(-r, r + 1)
    grids = np.meshgrid(*([ax] * dim), indexing="ij")
    sq = sum(g * g for g in grids).ravel()
    sq = sq[(sq > 0) & (sq <= lambda_max)]
    vals, cnt = np.unique(sq, return_counts=True)
    if len(vals) and vals[0] <= 0:
        raise ContractError("origin leaked into enumeration")
    return dict(zip(vals.tolist(), cnt.tolist()))
