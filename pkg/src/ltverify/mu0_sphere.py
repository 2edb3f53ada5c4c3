"""Threshold mu0 beyond which the S^2 sum stays below its limit.

With ``t = mu^-2`` and ``f(x) = (1+x)^-k`` the trapezoid-rule splitting of
``int_0^inf f`` shows ``H(mu) < 1/(k-1)`` whenever ``L_k(t) > R_k(t)``:

* ``L_k(t)``: the first panel, ``int_0^{2t} f - t f(2t)``, or its lower
  bound ``t - 2k t^2``;
* ``R_k(t) = (2k(k+1)/3) (G1 t + 3 G2 t^{3/2} + 3 G3 t^2 + G4 t^{5/2})``,
  where ``G_j`` bounds the Riemann sums ``(1/mu) sum g_j(n/mu)`` of
  ``g_j(x) = x^{4-j} / (x^2+1)^{k+2}``.

For a unimodal ``g`` with peak at ``x*``, ``(1/mu) sum_{n>=1} g(n/mu)`` is at
most ``x* g(x*) + int_{x*}^inf g`` (rising part: at most ``mu x*`` terms each
below the peak; falling part: right-endpoint rule). Any valid ``G_j`` must
therefore be at least ``int_0^inf g_j``, the large-``mu`` limit of the sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BracketError, DerivationError, DomainError, UnsupportedError
from .numerics import BracketedRoot, beta, find_root, integrate_adaptive
from . import spectral_sums


class Variant(str, Enum):
    PRINTED_FORMULA = "printed_formula"
    INTEGRAL_FROM_ZERO = "integral_from_zero"
    REFINED = "refined"


# second coefficient set of R_{3/2}(t), as polynomial coefficients
REFINED_POLY_K32 = (0.5317, 0.90074, 2.8054, 1.3333)


@dataclass(frozen=True)
class AppendixCoefficients:
    k: float
    G1: float
    G2: float
    G3: float
    G4: float
    variant: Variant

    @property
    def scale(self) -> float:
        return 2 * self.k * (self.k + 1) / 3

    @property
    def polynomial(self) -> tuple[float, float, float, float]:
        """Coefficients of ``t, t^{3/2}, t^2, t^{5/2}`` in ``R_k(t)``."""
        s = self.scale
        return (s * self.G1, 3 * s * self.G2, 3 * s * self.G3, s * self.G4)

    def R(self, t: float) -> float:
        c1, c32, c2, c52 = self.polynomial
        r = math.sqrt(t)
        return t * (c1 + r * (c32 + r * (c2 + r * c52)))


@dataclass(frozen=True)
class Mu0Result:
    t0: float
    mu0: float
    variant: Variant
    certificate: bool
    exact_left: bool = False
    majorants_valid: bool = True
    verified_up_to: float = 0.0
    coefficients: AppendixCoefficients | None = None


def _check_k(k):
    if not 1.0 < k < 2.0:
        raise DomainError(f"k must lie in (1, 2), got {k}")


def g_j(x: float, k: float, j: int) -> float:
    if j not in (1, 2, 3, 4):
        raise DomainError(f"j must be 1..4, got {j}")
    if x < 0:
        raise DomainError("g_j is defined for x >= 0")
    return x ** (4 - j) / (x * x + 1) ** (k + 2)


def peak(k: float, j: int) -> float:
    """Maximiser of ``g_j`` on ``[0, inf)``: ``x^2 = (4-j)/(2k+j)``."""
    return math.sqrt((4 - j) / (2 * k + j))


def integral_g(k: float, j: int, lower: float = 0.0) -> float:
    """``int_lower^inf g_j``; from 0 this is ``B((5-j)/2, k+2-(5-j)/2)/2``."""
    if lower == 0.0:
        a = (5 - j) / 2
        return 0.5 * beta(a, k + 2 - a)
    return integrate_adaptive(lambda x: g_j(x, k, j), lower, math.inf, tol=1e-12)


def sum_bound(k: float, j: int, lower_from_zero: bool) -> float:
    """``x* g_j(x*) + int g_j`` with the integral from ``x*`` or from 0."""
    x = peak(k, j)
    return x * g_j(x, k, j) + integral_g(k, j, 0.0 if lower_from_zero else x)


def _printed(k):
    G1 = (9 * (2 * k + 1) ** k / (2 * k + 4) ** (k + 2)
          + (5 * k + 4) * (2 * k + 1) ** k / (2 * k * (k + 1) * (2 * k + 4) ** (k + 1)))
    G2 = ((k + 1) ** (k + 0.5) / (k + 2) ** (k + 2)
          + 0.5 * math.gamma(1.5) * math.gamma(k + 0.5) / math.gamma(k + 2))
    # the first term exceeds the true peak value (2k+3)^{k+1}/(2k+4)^{k+2}
    G3 = (2 * k + 3) ** (k + 1.5) / (2 * k + 4) ** (k + 2) + 0.5 / (k + 1)
    G4 = 0.5 * math.gamma(0.5) * math.gamma(k + 1.5) / math.gamma(k + 2)
    return G1, G2, G3, G4


def G_coefficients(k: float, variant=Variant.PRINTED_FORMULA) -> AppendixCoefficients:
    _check_k(k)
    variant = Variant(variant)
    if variant is Variant.PRINTED_FORMULA:
        G = _printed(k)
    elif variant is Variant.INTEGRAL_FROM_ZERO:
        G = tuple(sum_bound(k, j, True) for j in (1, 2, 3)) + (integral_g(k, 4),)
    else:
        if abs(k - 1.5) > 1e-12:
            raise UnsupportedError("refined coefficients are tabulated for k = 3/2 only")
        s = 2 * k * (k + 1) / 3
        c1, c32, c2, c52 = REFINED_POLY_K32
        G = (c1 / s, c32 / (3 * s), c2 / (3 * s), c52 / s)
    return AppendixCoefficients(k, *G, variant=variant)


def majorants_valid(coef: AppendixCoefficients, rel: float = 1e-3) -> bool:
    """Necessary condition for a bound uniform in mu: ``G_j >= int_0^inf g_j``.

    ``rel`` absorbs the 4-5 digit rounding of tabulated coefficients.
    """
    G = (coef.G1, coef.G2, coef.G3, coef.G4)
    return all(g >= (1 - rel) * integral_g(coef.k, j) for j, g in zip((1, 2, 3, 4), G))


def left_side(t: float, k: float, exact: bool = False) -> float:
    """First-panel term ``L_k(t)``; the crude form ``t - 2kt^2`` is a lower bound."""
    _check_k(k)
    if not 0 < t < 1 / (2 * k):
        raise DomainError(f"t must lie in (0, 1/(2k)), got {t}")
    if not exact:
        return t - 2 * k * t * t
    # int_0^{2t} (1+x)^-k dx = (1 - (1+2t)^{1-k}) / (k-1)
    return -math.expm1((1 - k) * math.log1p(2 * t)) / (k - 1) - t * (1 + 2 * t) ** -k


def solve_t0(k: float = 1.5, variant=Variant.REFINED, exact_left: bool = True,
             step: float = 1e-4, certify: bool = True) -> Mu0Result:
    """First root of ``L_k - R_k`` by an upward scan from ``t = 1e-6``, then bisection.

    The certificate is the S^2 grid check on ``[0, mu0 + 0.01]``.  When the
    coefficient set fails :func:`majorants_valid`, its ``mu0`` cannot be
    trusted for large ``mu``; the grid is then extended to the ``mu0`` of
    the integral-from-zero bounds with the same left side.
    """
    _check_k(k)
    coef = G_coefficients(k, variant)

    def diff(t):
        return left_side(t, k, exact_left) - coef.R(t)

    t_end = 1 / (2 * k)
    prev_t = 1e-6
    prev = diff(prev_t)
    if prev <= 0:
        raise DerivationError(f"L <= R already at t = {prev_t}")
    t0 = None
    for t in np.arange(prev_t + step, t_end, step):
        cur = diff(float(t))
        if cur <= 0:
            try:
                t0 = find_root(diff, BracketedRoot(prev_t, float(t), 1e-15))
            except BracketError as exc:  # pragma: no cover - scan guarantees sign change
                raise DerivationError(str(exc)) from exc
            break
        prev_t = float(t)
    if t0 is None:
        raise DerivationError(f"no sign change of L - R below t = 1/(2k) for {coef.variant.value}")
    mu0 = t0 ** -0.5

    valid = majorants_valid(coef)
    upper = mu0
    if not valid:
        upper = max(mu0, solve_t0(k, Variant.INTEGRAL_FROM_ZERO, exact_left,
                                  step, certify=False).mu0)
    cert = False
    if certify:
        report = spectral_sums.verify_on_interval("sphere2", k, upper + 0.01, 0.01, 0.0)
        cert = report.passed
    return Mu0Result(t0, mu0, coef.variant, cert, exact_left, valid, upper + 0.01, coef)
