"""Parametric spectral sums on S^2, T^2, S^3, T^3 with certified truncation.

Sphere series are summed directly; the omitted tail of a convex term
function ``g`` with closed-form tail integral ``T(x) = int_x^inf g`` is
bracketed by the midpoint and trapezoid rules::

    T(N+1) + g(N+1)/2  <=  sum_{n > N} g(n)  <=  T(N + 1/2)

so the bracket width decays like ``g'`` rather than like ``g``.

Torus sums use the Poisson summation identity

    F(mu) = pi/(k-1) - mu^-2
            + (2 pi^k / Gamma(k)) mu^(k-1) sum_{m != 0} |m|^(k-1) K_{k-1}(2 pi mu |m|)

(and ``F_T3 = pi^2 - mu^-3 + pi^2 sum exp(-2 pi mu |m|)``), whose dual
series decays exponentially; its tail is bounded with the lattice
counting majorants of :mod:`ltverify.lattice`.

All bounds are evaluated in floating point; each result carries a
rounding allowance of a few ulps of the summed magnitude, subtracted from
``value`` and added to ``tail_bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import special

from . import lattice
from .errors import DomainError, ResourceError
from .numerics import CertifiedValue, minimize_scalar

EPS = np.finfo(float).eps
MAX_TERMS = 1 << 26


class Domain(str, Enum):
    SPHERE2 = "sphere2"
    TORUS2 = "torus2"
    SPHERE3 = "sphere3"
    TORUS3 = "torus3"


@dataclass(frozen=True)
class SumQuery:
    domain: Domain
    mu: float
    k: float = 1.5

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        if not self.mu >= 0:
            raise DomainError(f"mu must be >= 0, got {self.mu}")
        if self.domain in (Domain.SPHERE3, Domain.TORUS3):
            if self.k != 2:
                raise DomainError("3D sums are defined for k = 2 only")
        elif not 1.0 < self.k < 2.0:
            raise DomainError(f"k must lie in (1, 2), got {self.k}")

    def evaluate(self, tol: float = 1e-10) -> CertifiedValue:
        if self.domain is Domain.SPHERE2:
            return sphere2_H(self.mu, self.k, tol)
        if self.domain is Domain.TORUS2:
            return torus2_F(self.mu, self.k, tol)
        if self.domain is Domain.SPHERE3:
            return sphere3_H(self.mu, tol)
        return torus3_F(self.mu, tol)


@dataclass
class SweepReport:
    domain: Domain
    k: float
    grid: list[float]
    values: list[CertifiedValue]
    limit: float
    min_margin: float
    passed: bool
    margin_floor: float = 0.0
    margins: list[float] = field(default_factory=list)

    def csv_rows(self) -> list[tuple[float, float, float, float, float]]:
        return [(mu, v.value, v.tail_bound, self.limit, m)
                for mu, v, m in zip(self.grid, self.values, self.margins)]


def _check_common(mu, k, tol):
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not mu >= 0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    if k is not None and not 1.0 < k < 2.0:
        raise DomainError(f"k must lie in (1, 2), got {k}")


def _bracketed_series(term, tail_int, n0, n_min, prefactor, tol, terms):
    """Sum ``term(n)`` for ``n0 <= n <= N`` and bracket the rest.

    ``term`` must be convex on ``[n_min + 1/2, inf)``.  With ``terms`` given
    the cutoff is fixed (raised to ``n_min`` if needed); otherwise N doubles
    until the scaled bracket width is below ``tol``.
    """
    def evaluate(N):
        n = np.arange(n0, N + 1, dtype=float)
        s = math.fsum(term(n))
        lo = tail_int(N + 1.0) + 0.5 * term(np.float64(N + 1.0))
        hi = tail_int(N + 0.5)
        width = max(hi - lo, 0.0) + 4 * EPS * hi
        slack = 8 * EPS * prefactor * (s + hi)
        return (float(prefactor * (s + lo) - slack),
                float(prefactor * width + 2 * slack))

    if terms is not None:
        N = max(int(terms), n_min)
        value, tail = evaluate(N)
        return CertifiedValue(value, tail, N)
    N = max(n_min, 16)
    while True:
        value, tail = evaluate(N)
        if tail <= tol:
            return CertifiedValue(value, tail, N)
        if N > MAX_TERMS:
            raise ResourceError(f"tail {tail:.3g} still above tol {tol:.3g} at N={N}")
        N *= 2


def sphere2_partial(mu: float, k: float, n_terms: int, grouped: bool = False) -> float:
    """Plain partial sum of the S^2 series (no tail).

    ``grouped=True`` evaluates ``mu^-2 sum (2n+1) f(n(n+1)/mu^2)`` with
    ``f(x) = (1+x)^-k`` instead of the direct form.
    """
    n = np.arange(1, n_terms + 1, dtype=float)
    if grouped:
        if mu == 0:
            return 0.0
        x = n * (n + 1) / mu ** 2
        return math.fsum((2 * n + 1) * (1 + x) ** -k) / mu ** 2
    return mu ** (2 * k - 2) * math.fsum((2 * n + 1) / (n * (n + 1) + mu * mu) ** k)


def sphere2_H(mu: float, k: float = 1.5, tol: float = 1e-10,
              terms: int | None = None) -> CertifiedValue:
    """``mu^(2k-2) sum_{n>=1} (2n+1) / (n(n+1) + mu^2)^k``.

    Tail integral: ``(2x+1)(x(x+1)+mu^2)^-k`` has antiderivative
    ``-(x(x+1)+mu^2)^(1-k)/(k-1)``.  The term is convex once
    ``(4k-2)(x^2+x) + k + 1 >= 6 mu^2``.
    """
    _check_common(mu, k, tol)
    if mu == 0:
        return CertifiedValue(0.0, 0.0, 0)
    mu2 = mu * mu

    def term(x):
        return (2 * x + 1) / (x * (x + 1) + mu2) ** k

    def tail_int(x):
        return (x * (x + 1) + mu2) ** (1 - k) / (k - 1)

    # convexity at x = N + 1/2
    disc = 1.0 + 4.0 * max(6 * mu2 - (k + 1), 0.0) / (4 * k - 2)
    n_min = max(1, math.ceil((-1 + math.sqrt(disc)) / 2 - 0.5))
    return _bracketed_series(term, tail_int, 1, n_min, mu ** (2 * k - 2), tol, terms)


def _atan_ratio(u):
    """``arctan(sqrt(u))/sqrt(u)`` continued analytically to ``u <= 0``."""
    if abs(u) < 1e-3:
        return math.fsum((-u) ** j / (2 * j + 1) for j in range(8))
    if u > 0:
        s = math.sqrt(u)
        return math.atan(s) / s
    s = math.sqrt(-u)
    return math.atanh(s) / s


def sphere3_H(mu: float, tol: float = 1e-10, terms: int | None = None) -> CertifiedValue:
    """``mu sum_{n>=1} (n+1)^2 / (n(n+2) + mu^2)^2``.

    With ``y = n+1`` and ``c = mu^2 - 1`` the term is ``y^2/(y^2+c)^2`` and
    ``int_X^inf y^2/(y^2+c)^2 dy = (1/2)[A(X) + X/(X^2+c)]`` where
    ``A(X) = arctan(sqrt(c)/X)/sqrt(c)`` (``artanh`` form for ``c < 0``).
    The term is convex in ``y`` once ``6y^4 - 16cy^2 + 2c^2 >= 0``.
    """
    _check_common(mu, None, tol)
    if mu == 0:
        return CertifiedValue(0.0, 0.0, 0)
    c = mu * mu - 1.0

    def term(y):
        return y * y / (y * y + c) ** 2

    def tail_int(X):
        X = float(X)
        return 0.5 * (_atan_ratio(c / (X * X)) / X + X / (X * X + c))

    # convex for y^2 >= c (16 + sqrt(208))/12; the series index is y = n + 1
    y_min = math.sqrt(max(c, 0.0) * (16 + math.sqrt(208)) / 12) + 0.5
    n_min = max(2, math.ceil(y_min))
    return _bracketed_series(term, tail_int, 2, n_min, mu, tol, terms)


def _coth(x):
    return 1.0 + 2.0 / math.expm1(2.0 * x)


def sphere3_H_closed(mu: float) -> float:
    """Closed form of the S^3 sum, valid for ``mu > 1``."""
    if not mu > 1.0 + 1e-6:
        raise DomainError(f"closed form needs mu > 1 + 1e-6, got {mu}")
    nu = math.sqrt(mu * mu - 1.0)
    x = math.pi * nu
    coth = _coth(x)
    # 1 - coth^2 = -4 e^{-2x} / (1 - e^{-2x})^2
    one_minus_coth2 = -4.0 * math.exp(-2.0 * x) / (-math.expm1(-2.0 * x)) ** 2
    return (math.pi / 4 * mu / nu * coth
            + math.pi ** 2 * mu / 4 * one_minus_coth2
            - 1.0 / mu ** 3)


def sphere3_value(mu: float) -> float:
    """S^3 sum: series for ``mu <= 1.1``, closed form above."""
    if mu <= 1.1:
        return sphere3_H(mu, 1e-13).value
    return sphere3_H_closed(mu)


def _kbessel_factor(nu: float, z: float) -> float:
    # K_nu(z) <= sqrt(pi/(2z)) e^{-z} * factor for 0 <= nu <= 3/2
    return 1.0 + max(nu * nu - 0.25, 0.0) / (2.0 * z)


def _dual_sum(dim, mu, nu, weight, target):
    """``sum_{m != 0} |m|^nu K_nu(2 pi mu |m|)`` (2D) or ``exp(-2 pi mu |m|)``
    (3D), truncated so the certified tail is below ``target``."""
    a = 2.0 * math.pi * mu
    lam = 64
    while True:
        spec = lattice.spectrum_covering(dim, lam)
        J = int(spec.multiplicity.sum())
        r0 = (J / lattice.DENSITY[dim]) ** (1.0 / dim)
        if dim == 2:
            bound = (_kbessel_factor(nu, a * r0) * math.sqrt(math.pi / (2 * a))
                     * lattice.radial_tail_bound(2, J, a, nu - 0.5))
        else:
            bound = lattice.radial_tail_bound(3, J, a, 0.0)
        if weight * bound <= target:
            break
        if lam >= lattice.MAX_LAMBDA[dim]:
            raise ResourceError(
                f"mu={mu} too small for the dual lattice series at this tolerance")
        lam = min(lam * 2, lattice.MAX_LAMBDA[dim])
    r = np.sqrt(spec.norms.astype(float))
    if dim == 2:
        terms = spec.multiplicity * r ** nu * special.kv(nu, a * r)
    else:
        terms = spec.multiplicity * np.exp(-a * r)
    return math.fsum(terms), bound, lam


def torus2_F_direct(mu: float, k: float, lambda_max: int) -> CertifiedValue:
    """Direct lattice sum over ``|m|^2 <= lambda_max``.

    Tail: ``lambda_j >= j/8`` gives
    ``sum_{j>J} (lambda_j + mu^2)^-k <= 8 (J/8 + mu^2)^(1-k) / (k-1)``.
    """
    _check_common(mu, k, 1.0)
    if mu == 0:
        return CertifiedValue(0.0, 0.0, lambda_max)
    spec = lattice.spectrum_covering(2, lambda_max)
    J = int(spec.multiplicity.sum())
    pref = mu ** (2 * k - 2)
    s = math.fsum(spec.multiplicity * (spec.norms + mu * mu) ** -k)
    tail = 8.0 * (J / 8.0 + mu * mu) ** (1 - k) / (k - 1)
    slack = 8 * EPS * pref * s
    return CertifiedValue(float(pref * s - slack), float(pref * tail + 2 * slack), lambda_max)


def torus2_F(mu: float, k: float = 1.5, tol: float = 1e-10) -> CertifiedValue:
    """``mu^(2k-2) sum_{m in Z^2_0} (|m|^2 + mu^2)^-k``.

    Poisson route when the dual series fits the lattice budget, otherwise
    (very small ``mu``) the direct sum, which must then meet ``tol`` by
    itself.
    """
    _check_common(mu, k, tol)
    if mu == 0:
        return CertifiedValue(0.0, 0.0, 0)
    nu = k - 1.0
    weight = 2.0 * math.pi ** k / math.gamma(k) * mu ** nu
    try:
        s, bound, lam = _dual_sum(2, mu, nu, weight, 0.5 * tol)
    except ResourceError:
        cv = torus2_F_direct(mu, k, lattice.MAX_LAMBDA[2])
        if cv.tail_bound > tol:
            raise
        return cv
    head = math.pi / (k - 1.0) - mu ** -2
    value = head + weight * s
    slack = 64 * EPS * (abs(head) + 2 * mu ** -2 + weight * s)
    return CertifiedValue(float(value - slack), float(weight * bound + 2 * slack), lam)


def torus3_F(mu: float, tol: float = 1e-10) -> CertifiedValue:
    """``mu sum_{m in Z^3_0} (|m|^2 + mu^2)^-2`` via its Poisson dual."""
    _check_common(mu, None, tol)
    if mu == 0:
        return CertifiedValue(0.0, 0.0, 0)
    pi2 = math.pi ** 2
    try:
        s, bound, lam = _dual_sum(3, mu, 0.5, pi2, 0.5 * tol)
    except ResourceError:
        cv = torus3_F_direct(mu, lattice.MAX_LAMBDA[3])
        if cv.tail_bound > tol:
            raise
        return cv
    head = pi2 - mu ** -3
    value = head + pi2 * s
    slack = 16 * EPS * (abs(head) + 2 * mu ** -3 + pi2 * s)
    return CertifiedValue(float(value - slack), float(pi2 * bound + 2 * slack), lam)


def torus3_F_direct(mu: float, lambda_max: int) -> CertifiedValue:
    """Direct 3D lattice sum; tail via ``lambda_j >= (j/27)^(2/3)``:
    ``sum_{j>J} (lambda_j+mu^2)^-2 <= int_J^inf ((x/27)^(2/3) + mu^2)^-2 dx``,
    bounded by ``81 / r0`` with ``r0 = (J/27)^(1/3)``."""
    if mu == 0:
        return CertifiedValue(0.0, 0.0, lambda_max)
    spec = lattice.spectrum_covering(3, lambda_max)
    J = int(spec.multiplicity.sum())
    s = math.fsum(spec.multiplicity * (spec.norms + mu * mu) ** -2.0)
    r0 = (J / 27.0) ** (1.0 / 3.0)
    tail = 81.0 / r0
    slack = 8 * EPS * mu * s
    return CertifiedValue(float(mu * s - slack), float(mu * tail + 2 * slack), lambda_max)


def s3_kernel_partial(nu: float, n_terms: int = 10 ** 6) -> float:
    """``sum_{n <= n_terms} n^2 / (n^2 + nu^2)^2``."""
    n = np.arange(1, n_terms + 1, dtype=float)
    return math.fsum(n * n / (n * n + nu * nu) ** 2)


def s3_kernel_closed(nu: float) -> float:
    """Closed form of the full series ``sum_{n>=1} n^2/(n^2+nu^2)^2``, ``nu > 0``."""
    x = math.pi * nu
    coth = _coth(x)
    return math.pi / 4 * coth / nu + math.pi ** 2 / 4 * (1 - coth * coth)


def limit_value(domain, k: float = 1.5) -> float:
    domain = Domain(domain)
    if domain is Domain.SPHERE2:
        return 1.0 / (k - 1.0)
    if domain is Domain.TORUS2:
        return math.pi / (k - 1.0)
    if domain is Domain.SPHERE3:
        return math.pi / 4.0
    return math.pi ** 2


def evaluate(domain, mu: float, k: float = 1.5, tol: float = 1e-10) -> CertifiedValue:
    domain = Domain(domain)
    if domain in (Domain.SPHERE3, Domain.TORUS3):
        k = 2
    return SumQuery(domain, mu, k).evaluate(tol)


def asymptotic_residual(domain, mu: float, k: float = 1.5) -> float:
    """``mu^2 (limit - sum)``: tends to 2/3 on S^2 and to 1 on T^2."""
    if not mu >= 1:
        raise DomainError("asymptotic residual is defined for mu >= 1")
    cv = evaluate(domain, mu, k, tol=1e-13)
    mid = cv.value + 0.5 * cv.tail_bound
    return mu * mu * (limit_value(domain, k) - mid)


def sweep_grid(mu_upper: float, step: float) -> list[float]:
    n = int(math.floor(mu_upper / step + 1e-9))
    # rounding keeps grid points such as 5.1 exact in decimal output
    grid = [round(i * step, 12) for i in range(n + 1)]
    if mu_upper - grid[-1] > 1e-9:
        grid.append(float(mu_upper))
    return grid


def verify_on_interval(domain, k: float, mu_upper: float, step: float = 0.01,
                       margin_floor: float = 0.0, tol: float = 1e-9,
                       limit_scale: float = 1.0) -> SweepReport:
    """Grid check of ``sum(mu) < limit`` on ``{0, step, ..., mu_upper}``.

    Each point uses the certified upper value ``value + tail_bound``; the
    margin is ``limit - upper``.  This is a grid-level check: nothing is
    claimed between grid points.  ``limit_scale`` multiplies the limit
    (values below 1 are a negative control).
    """
    domain = Domain(domain)
    if not (mu_upper > 0 and step > 0):
        raise DomainError("mu_upper and step must be positive")
    limit = limit_value(domain, k) * limit_scale
    grid = sweep_grid(mu_upper, step)
    values = [evaluate(domain, mu, k, tol) for mu in grid]
    margins = [limit - v.upper for v in values]
    min_margin = min(margins)
    return SweepReport(domain, k if domain in (Domain.SPHERE2, Domain.TORUS2) else 2,
                       grid, values, limit, min_margin, min_margin > margin_floor,
                       margin_floor, margins)


def find_s3_max() -> tuple[float, float]:
    """Global maximum of the S^3 sum: grid scan on [1.1, 50] then refinement.

    Returns ``(mu_star, delta)`` with ``delta = max / (pi/4)``.
    """
    grid = np.linspace(1.1, 50.0, 4891)
    vals = np.array([sphere3_H_closed(m) for m in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    mu_star, neg = minimize_scalar(lambda m: -sphere3_H_closed(m), lo, hi, 1e-10)
    return mu_star, -neg / (math.pi / 4)
