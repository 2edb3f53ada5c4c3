"""Galerkin discretization of periodic Schroedinger operators.

Two settings:

* 1D, period ``L``: ``(-1)^l d^{2l}/dx^{2l} - Pi(V .)`` with ``V >= 0``; the
  quadratic form is ``int |phi^(l)|^2 - int V phi^2``.
* 2D torus ``[0, 2pi]^2``: ``-Laplace + Pi(V .)``; negative spectrum comes
  from the negative part of ``V``.

``Pi`` removes the mean, which is realized by leaving the zero Fourier mode
out of the basis.  Trigonometric-polynomial potentials give exact matrix
entries ``c_{m'-m}`` in the Fourier basis.  The Hermitian Fourier matrix is
conjugated to the real cos/sin basis before the symmetric eigensolve.

By min-max, Galerkin eigenvalues are upper bounds for the exact ones, so
Galerkin negative traces and counts never exceed the true values and every
bound checked here must hold for the discretized spectrum too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ContractError, DomainError, ResourceError
from .lt_constants import taikov_c, trace_constant_2d, two_term_constants, zelik_K
from .numerics import eig_sym

MAX_DIM = 4000
QUAD_POINTS_1D = 1 << 12
QUAD_POINTS_2D = 512


@dataclass(frozen=True)
class GalerkinConfig:
    cutoff: int
    l: int = 1

    def __post_init__(self):
        if self.cutoff < 1:
            raise DomainError("cutoff must be >= 1")
        if self.l < 1:
            raise DomainError("l must be >= 1")


@dataclass
class Potential1D:
    """``V(x) = a0 + sum_j a_j cos(j k x) + b_j sin(j k x)``, ``k = 2 pi / period``."""

    cos: list[float]
    sin: list[float] = field(default_factory=list)
    period: float = 2 * math.pi

    def __post_init__(self):
        if not self.period > 0:
            raise DomainError("period must be positive")
        if not self.cos:
            self.cos = [0.0]

    @property
    def degree(self) -> int:
        return max(len(self.cos) - 1, len(self.sin))

    def coefficient(self, j: int) -> complex:
        """Complex Fourier coefficient ``c_j`` with ``V = sum c_j e^{i j k x}``."""
        if j == 0:
            return complex(self.cos[0])
        a = self.cos[abs(j)] if abs(j) < len(self.cos) else 0.0
        b = self.sin[abs(j) - 1] if abs(j) - 1 < len(self.sin) else 0.0
        c = 0.5 * complex(a, -b)
        return c if j > 0 else c.conjugate()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        kap = 2 * math.pi / self.period
        out = np.full_like(x, self.cos[0])
        for j, a in enumerate(self.cos[1:], 1):
            out = out + a * np.cos(j * kap * x)
        for j, b in enumerate(self.sin, 1):
            out = out + b * np.sin(j * kap * x)
        return out

    def grid(self, n: int = QUAD_POINTS_1D):
        x = self.period * np.arange(n) / n
        return x, self(x), self.period / n

    def shifted(self, c: float) -> "Potential1D":
        return Potential1D([self.cos[0] + c] + list(self.cos[1:]), list(self.sin), self.period)


@dataclass
class Potential2D:
    """Real trigonometric polynomial on ``[0, 2pi]^2``.

    ``terms`` maps ``(p, q)`` to ``(a, b)`` meaning ``a cos(px+qy) + b sin(px+qy)``.
    """

    terms: dict[tuple[int, int], tuple[float, float]]

    @property
    def degree(self) -> int:
        return max((max(abs(p), abs(q)) for p, q in self.terms), default=0)

    def coefficients(self) -> dict[tuple[int, int], complex]:
        c: dict[tuple[int, int], complex] = {}
        for (p, q), (a, b) in self.terms.items():
            if (p, q) == (0, 0):
                c[(0, 0)] = c.get((0, 0), 0) + a
                continue
            z = 0.5 * complex(a, -b)
            c[(p, q)] = c.get((p, q), 0) + z
            c[(-p, -q)] = c.get((-p, -q), 0) + z.conjugate()
        return c

    def __call__(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (p, q), (a, b) in self.terms.items():
            ph = p * x + q * y
            out = out + a * np.cos(ph) + b * np.sin(ph)
        return out

    def grid(self, n: int = QUAD_POINTS_2D):
        t = 2 * np.pi * np.arange(n) / n
        X, Y = np.meshgrid(t, t, indexing="ij")
        return self(X, Y), (2 * np.pi / n) ** 2

    @classmethod
    def product_well(cls, A: float) -> "Potential2D":
        """``-A (1 + cos x)(1 + cos y) / 2``."""
        h = -A / 2
        return cls({(0, 0): (h, 0.0), (1, 0): (h, 0.0), (0, 1): (h, 0.0),
                    (1, 1): (h / 2, 0.0), (1, -1): (h / 2, 0.0)})


@dataclass
class NegativeSpectrum:
    eigenvalues: np.ndarray
    count: int
    trace: float


class FamilyKind(str, Enum):
    SCALAR2D_GRAD = "scalar2d_grad"
    ONED_ORDER_L = "oneD_order_l"


def modes_1d(cutoff: int) -> np.ndarray:
    return np.array([m for m in range(-cutoff, cutoff + 1) if m != 0])


def modes_2d(cutoff: int) -> np.ndarray:
    r = range(-cutoff, cutoff + 1)
    return np.array([(p, q) for p in r for q in r if (p, q) != (0, 0)])


def half_modes_2d(cutoff: int) -> np.ndarray:
    """One representative of each pair ``{m, -m}``, in lexicographic order."""
    m = modes_2d(cutoff)
    keep = (m[:, 0] > 0) | ((m[:, 0] == 0) & (m[:, 1] > 0))
    return m[keep]


def _realify(H, plus, minus):
    """``U^H H U`` for the basis ``(e_m + e_-m)/sqrt2, (e_m - e_-m)/(i sqrt2)``.

    ``plus``/``minus`` give the indices of ``m`` and ``-m`` in the complex basis;
    output order is cos, sin for each pair.
    """
    n = H.shape[0]
    U = np.zeros((n, n), dtype=complex)
    r = 1 / math.sqrt(2)
    for i, (a, b) in enumerate(zip(plus, minus)):
        U[a, 2 * i], U[b, 2 * i] = r, r
        U[a, 2 * i + 1], U[b, 2 * i + 1] = -1j * r, 1j * r
    A = U.conj().T @ H @ U
    if np.max(np.abs(A.imag)) > 1e-10 * max(1.0, np.max(np.abs(A.real))):
        raise ContractError("potential is not real-valued")
    return A.real


def assemble_1d(V: Potential1D, cfg: GalerkinConfig) -> np.ndarray:
    """Real symmetric matrix in the basis ``cos(m k x), sin(m k x)``, ``m = 1..cutoff``."""
    modes = modes_1d(cfg.cutoff)
    kap = 2 * math.pi / V.period
    diff = modes[:, None] - modes[None, :]
    lookup = {j: V.coefficient(j) for j in range(-V.degree, V.degree + 1)}
    H = -np.vectorize(lambda d: lookup.get(d, 0j), otypes=[complex])(diff)
    H[np.diag_indices_from(H)] += (kap * np.abs(modes)) ** (2 * cfg.l)
    index = {int(m): i for i, m in enumerate(modes)}
    pos = range(1, cfg.cutoff + 1)
    return _realify(H, [index[m] for m in pos], [index[-m] for m in pos])


def assemble_2d_torus(V: Potential2D, cfg: GalerkinConfig) -> np.ndarray:
    """Real symmetric matrix of ``-Laplace + Pi(V .)`` on ``|m|_inf <= cutoff``."""
    modes = modes_2d(cfg.cutoff)
    if len(modes) > MAX_DIM:
        raise ResourceError(f"dimension {len(modes)} exceeds {MAX_DIM}; use cutoff <= 31")
    coef = V.coefficients()
    d = modes[:, None, :] - modes[None, :, :]
    H = np.zeros((len(modes), len(modes)), dtype=complex)
    for (p, q), c in coef.items():
        H[(d[..., 0] == p) & (d[..., 1] == q)] += c
    H[np.diag_indices_from(H)] += np.sum(modes ** 2, axis=1)
    index = {(int(p), int(q)): i for i, (p, q) in enumerate(modes)}
    half = half_modes_2d(cfg.cutoff)
    return _realify(H, [index[(p, q)] for p, q in half],
                    [index[(-p, -q)] for p, q in half])


def negative_spectrum(A) -> NegativeSpectrum:
    ev = eig_sym(A)
    neg = ev[ev <= 0]
    return NegativeSpectrum(neg, int(len(neg)), float(np.sum(np.abs(neg))))


def V_minus_power_integral(V: Potential2D, p: float, n: int = QUAD_POINTS_2D) -> float:
    vals, w = V.grid(n)
    return float(np.sum(np.maximum(-vals, 0.0) ** p) * w)


def check_trace_bound_2d(spec: NegativeSpectrum, V: Potential2D, constant: float | None = None) -> float:
    """``L1 int V_-^2 - sum|nu_j|`` with ``L1 = 3/8`` by default."""
    L1 = trace_constant_2d(1.5) if constant is None else constant
    return L1 * V_minus_power_integral(V, 2.0) - spec.trace


def _require_nonnegative(V: Potential1D):
    _, vals, _ = V.grid()
    if vals.min() < -1e-12:
        raise ContractError(f"potential must be >= 0, min is {vals.min():.3g}")


def check_two_term_1d(spec: NegativeSpectrum, V: Potential1D, l: int = 1,
                      period: float | None = None) -> float:
    """``trace_coeff int V^{(2l+1)/(2l)} - (sum nu_j + N count_coeff)``."""
    period = V.period if period is None else period
    if abs(period - V.period) > 1e-12 * period:
        raise ContractError("period does not match the potential")
    _require_nonnegative(V)
    cst = two_term_constants(l, period)
    _, vals, w = V.grid()
    integral = float(np.sum(np.maximum(vals, 0.0) ** ((2 * l + 1) / (2 * l))) * w)
    return cst["trace_coeff"] * integral - (spec.trace + spec.count * cst["count_coeff"])


def counting_rhs(V: Potential2D, r: float, k: float, t: float) -> float:
    """``(1/4pi) (1/(k-1)) (tr)^{1-k} int (V + (1-t) r)_-^k``."""
    if not (r > 0 and 1 < k < 2 and 0 < t < 1):
        raise DomainError("need r > 0, 1 < k < 2, 0 < t < 1")
    vals, w = V.grid()
    integral = float(np.sum(np.maximum(-(vals + (1 - t) * r), 0.0) ** k) * w)
    return (t * r) ** (1 - k) * integral / (4 * math.pi * (k - 1))


def check_counting_2d(V: Potential2D, r: float, k: float, t: float,
                      cfg: GalerkinConfig, eigenvalues=None) -> tuple[int, float]:
    """``(#{nu <= -r}, rhs)`` for the counting estimate at level ``-r``."""
    if eigenvalues is None:
        eigenvalues = eig_sym(assemble_2d_torus(V, cfg))
    lhs = int(np.sum(np.asarray(eigenvalues) <= -r))
    return lhs, counting_rhs(V, r, k, t)


def _gram_check(C):
    C = np.atleast_2d(np.asarray(C, dtype=float))
    dev = np.max(np.abs(C @ C.T - np.eye(C.shape[0])))
    if dev > 1e-10:
        raise ContractError(f"family is not orthonormal (Gram deviation {dev:.3g})")
    return C


def family_functionals(kind, coeffs, l: int = 1, period: float = 2 * math.pi) -> dict:
    """Both sides of the orthonormal-family inequality.

    ``coeffs`` has one row per function, expressed in the orthonormal real
    basis: 1D ``sqrt(2/L) cos(m k x), sqrt(2/L) sin(m k x)``, ``m = 1, 2, ...``;
    2D ``cos(m.x)/(pi sqrt2), sin(m.x)/(pi sqrt2)`` over :func:`half_modes_2d`.
    The basis size fixes the cutoff.  Integrals of ``rho^p`` use a
    trapezoid grid fine enough to be exact for the trigonometric polynomial.
    """
    kind = FamilyKind(kind)
    C = _gram_check(coeffs)
    N, dim = C.shape
    if dim % 2:
        raise ContractError("basis size must be even (cos/sin pairs)")
    if kind is FamilyKind.ONED_ORDER_L:
        M = dim // 2
        kap = 2 * math.pi / period
        m = np.repeat(np.arange(1, M + 1), 2)
        kinetic = float(np.sum(C ** 2 * (kap * m) ** (2 * l)))
        n = max(256, 2 * M * (2 * l + 1) + 1)
        x = period * np.arange(n) / n
        arg = np.outer(np.arange(1, M + 1), kap * x)
        B = np.empty((dim, n))
        B[0::2], B[1::2] = np.cos(arg), np.sin(arg)
        B *= math.sqrt(2 / period)
        rho = np.sum((C @ B) ** 2, axis=0)
        integral = float(np.sum(rho ** (2 * l + 1)) * period / n)
        K = zelik_K(l) * (2 * math.pi / period)
        lhs = integral + N * K ** (2 * l)
        rhs = taikov_c(l) ** (2 * l) * kinetic
    else:
        half = None
        for cut in range(1, 64):
            if 2 * len(half_modes_2d(cut)) == dim:
                half = half_modes_2d(cut)
                break
        if half is None:
            raise ContractError(f"basis size {dim} does not match any 2D cutoff")
        kinetic = float(np.sum(C ** 2 * np.repeat(np.sum(half ** 2, axis=1), 2)))
        n = max(64, 4 * int(np.abs(half).max()) + 1)
        t = 2 * np.pi * np.arange(n) / n
        X, Y = np.meshgrid(t, t, indexing="ij")
        phase = half[:, 0, None] * X.ravel() + half[:, 1, None] * Y.ravel()
        B = np.empty((dim, n * n))
        B[0::2], B[1::2] = np.cos(phase), np.sin(phase)
        B /= math.pi * math.sqrt(2)
        rho = np.sum((C @ B) ** 2, axis=0)
        integral = float(np.sum(rho ** 2) * (2 * np.pi / n) ** 2)
        lhs = integral
        rhs = 1.5 * kinetic
    return {"lhs": lhs, "rhs": rhs, "integral": integral, "kinetic": kinetic,
            "margin": rhs - lhs}


def orthonormal_family_check(kind, coeffs, l: int = 1, period: float = 2 * math.pi) -> float:
    return family_functionals(kind, coeffs, l, period)["margin"]


def first_modes_family(kind, count: int, cutoff: int) -> np.ndarray:
    """Identity rows: the first ``count`` basis functions of the given setting."""
    kind = FamilyKind(kind)
    dim = 2 * cutoff if kind is FamilyKind.ONED_ORDER_L else 2 * len(half_modes_2d(cutoff))
    if count > dim:
        raise DomainError("count exceeds basis size")
    return np.eye(dim)[:count]


def lowest_shells_family_2d(radius2: int, cutoff: int) -> np.ndarray:
    """All real basis functions with ``|m|^2 <= radius2``."""
    half = half_modes_2d(cutoff)
    keep = np.repeat(np.sum(half ** 2, axis=1) <= radius2, 2)
    return np.eye(2 * len(half))[keep]


def random_family(kind, count: int, cutoff: int, seed: int = 0) -> np.ndarray:
    """Random orthonormal rows (QR of a Gaussian matrix)."""
    dim = first_modes_family(kind, 0, cutoff).shape[1]
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((dim, count)))
    return Q.T


def gallery_1d() -> list[tuple[str, Potential1D]]:
    g = [(f"A(1+cos x), A={A:g}", Potential1D([A, A])) for A in (2.0, 10.0, 50.0)]
    g.append(("2+cos x+sin 2x", Potential1D([2.0, 1.0], [0.0, 1.0])))
    g.append(("10(1+cos kx), L=3", Potential1D([10.0, 10.0], period=3.0)))
    return g


def gallery_2d() -> list[tuple[str, Potential2D]]:
    g = [(f"product well, A={A:g}", Potential2D.product_well(A)) for A in (5.0, 20.0, 80.0)]
    g.append(("mixed sign, 3cos x+2sin(x+y)-4cos 2y",
              Potential2D({(1, 0): (3.0, 0.0), (1, 1): (0.0, 2.0), (0, 2): (-4.0, 0.0)})))
    g.append(("shifted well, 4-12(1+cos x)(1+cos y)/2",
              Potential2D({**Potential2D.product_well(12.0).terms, (0, 0): (4.0 - 6.0, 0.0)})))
    return g


def is_even(V: Potential1D) -> bool:
    return not any(V.sin)


def parity_cross_block(A) -> float:
    """Largest |entry| coupling cosine and sine basis functions."""
    A = np.asarray(A)
    return float(np.max(np.abs(A[0::2, 1::2])))


def run_gallery_1d(cutoffs=(32, 48, 64), ls=(1, 2)) -> list[dict]:
    rows = []
    for name, V in gallery_1d():
        for l in ls:
            specs = [negative_spectrum(assemble_1d(V, GalerkinConfig(c, l))) for c in cutoffs]
            top = specs[-1]
            cst = two_term_constants(l, V.period)
            _, vals, w = V.grid()
            bound = cst["trace_coeff"] * float(np.sum(vals ** ((2 * l + 1) / (2 * l))) * w)
            rows.append({
                "setting": "1d", "potential": name, "l": l, "cutoff": cutoffs[-1],
                "count": top.count, "trace": top.trace, "bound": bound,
                "margin": check_two_term_1d(top, V, l),
                "trace_change": _rel_change(specs[-2].trace, top.trace),
            })
    return rows


def run_gallery_2d(cutoffs=(8, 12, 16), r=0.5, k=1.5, t=0.5) -> list[dict]:
    rows = []
    for name, V in gallery_2d():
        evs = [eig_sym(assemble_2d_torus(V, GalerkinConfig(c))) for c in cutoffs]
        specs = [NegativeSpectrum(e[e <= 0], int(np.sum(e <= 0)), float(np.sum(-e[e <= 0])))
                 for e in evs]
        top = specs[-1]
        lhs, rhs = check_counting_2d(V, r, k, t, GalerkinConfig(cutoffs[-1]), evs[-1])
        rows.append({
            "setting": "2d", "potential": name, "cutoff": cutoffs[-1],
            "count": top.count, "trace": top.trace,
            "bound": trace_constant_2d(1.5) * V_minus_power_integral(V, 2.0),
            "margin": check_trace_bound_2d(top, V),
            "counting_lhs": lhs, "counting_rhs": rhs, "counting_margin": rhs - lhs,
            "trace_change": _rel_change(specs[-2].trace, top.trace),
            "ritz_monotone": _ritz_monotone(evs),
        })
    return rows


def _rel_change(a, b):
    if b == 0:
        return 0.0 if a == 0 else math.inf
    return abs(a - b) / abs(b)


def _ritz_monotone(evs, tol=1e-9) -> bool:
    for coarse, fine in zip(evs, evs[1:]):
        n = len(coarse)
        if np.any(fine[:n] > coarse + tol * max(1.0, np.max(np.abs(coarse)))):
            return False
    return True
