"""Named Lieb-Thirring type constants and the relations between them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, UnsupportedError
from .numerics import beta, integrate_adaptive, log_gamma, minimize_scalar


def classical_L(gamma: float, n: int) -> float:
    """Semiclassical constant ``Gamma(g+1) / ((4 pi)^{n/2} Gamma(n/2+g+1))``."""
    if gamma < 0 or n < 1:
        raise DomainError(f"need gamma >= 0 and n >= 1, got ({gamma}, {n})")
    return math.exp(log_gamma(gamma + 1) - log_gamma(n / 2 + gamma + 1)
                    - (n / 2) * math.log(4 * math.pi))


def best_known_factor() -> float:
    return math.pi / math.sqrt(3)


def trace_constant_2d(k: float) -> float:
    """``B(2-k, 1+k) / (4 pi (k-1)^k (2-k)^{2-k})``; equals 3/8 at k = 3/2."""
    if not 1.0 < k < 2.0:
        raise DomainError(f"k must lie in (1, 2), got {k}")
    return beta(2 - k, 1 + k) / (4 * math.pi * (k - 1) ** k * (2 - k) ** (2 - k))


def optimize_trace_constant_2d() -> tuple[float, float]:
    return minimize_scalar(trace_constant_2d, 1.05, 1.95, tol=1e-10)


def inner_integral_check(k: float, t: float, V_minus: float) -> tuple[float, float]:
    """``int_0^inf (tr)^{1-k} (V + (1-t) r)_-^k dr`` with ``V = -V_minus``.

    Closed form ``t^{1-k} (1-t)^{k-2} B(2-k, 1+k) V_minus^2``; the integrand
    vanishes for ``r > V_minus / (1-t)``.
    """
    if not (1.0 < k < 2.0 and 0.0 < t < 1.0 and V_minus > 0):
        raise DomainError("need 1 < k < 2, 0 < t < 1, V_minus > 0")
    closed = t ** (1 - k) * (1 - t) ** (k - 2) * beta(2 - k, 1 + k) * V_minus ** 2
    r_end = V_minus / (1 - t)

    def integrand(r):
        return (t * r) ** (1 - k) * max(V_minus - (1 - t) * r, 0.0) ** k

    quad = integrate_adaptive(integrand, 0.0, r_end, tol=1e-11)
    return closed, quad


def vector_constant_2d() -> float:
    # each scalar eigenvalue is counted twice for vector fields
    return 2 * trace_constant_2d(1.5)


def k_from_L(L1: float, n: int) -> float:
    """``k_n = (2/n) (1 + n/2)^{1+2/n} L_{1,n}^{2/n}``; ``4 L1`` for n = 2."""
    if not L1 > 0 or n < 1:
        raise DomainError("need L1 > 0 and n >= 1")
    return (2 / n) * (1 + n / 2) ** (1 + 2 / n) * L1 ** (2 / n)


def three_d_integral_factor() -> float:
    """``int_0^inf (r/2)^{-1/2} (r/2 - 1)_-^2 dr``, which should be 32/15."""
    return integrate_adaptive(lambda r: (r / 2) ** -0.5 * (1 - r / 2) ** 2, 0.0, 2.0,
                              tol=1e-12)


def constants_3d(delta_s3: float | None = None) -> tuple[float, float, float]:
    """``(integral_factor, L_T3, L_S3)``; ``L_M = delta_M * 4/(15 pi)``."""
    factor = three_d_integral_factor()
    if abs(factor - 32 / 15) > 1e-9:
        raise ArithmeticError(f"3D inner integral {factor} differs from 32/15")
    if delta_s3 is None:
        from .spectral_sums import find_s3_max
        delta_s3 = find_s3_max()[1]
    L_T3 = 4 / (15 * math.pi)
    return factor, L_T3, delta_s3 * L_T3


def taikov_c(l: float) -> float:
    """``c(l) = 1 / (2l a^a (1-a)^{1-a} sin(pi a))`` with ``a = 1/(2l)``."""
    if not l >= 0.5 + 1e-9:
        raise DomainError(f"need l > 1/2, got {l}")
    a = 1 / (2 * l)
    return 1 / (2 * l * a ** a * (1 - a) ** (1 - a) * math.sin(math.pi * a))


ZELIK_K = {1: 1 / math.pi, 2: 2 / (3 * math.pi)}


def zelik_K(l: int) -> float:
    try:
        return ZELIK_K[l]
    except KeyError:
        raise UnsupportedError(f"K(l) is only known for l in {{1, 2}}, got {l}") from None


def two_term_constants(l: int, period: float = 2 * math.pi) -> dict[str, float]:
    """Coefficients of ``sum|nu_j| + N * count_coeff <= trace_coeff * int V^{(2l+1)/(2l)}``."""
    if not period > 0:
        raise DomainError("period must be positive")
    c = taikov_c(l)
    K = zelik_K(l) * (2 * math.pi / period)
    trace = 2 * l / (2 * l + 1) ** ((2 * l + 1) / (2 * l)) * c
    return {"trace_coeff": trace, "count_coeff": (K / c) ** (2 * l)}


@dataclass
class ConstantEntry:
    name: str
    value: float
    formula_ref: str
    paper_value: float | None = None
    tolerance: float = 1e-9

    @property
    def matches(self) -> bool | None:
        if self.paper_value is None:
            return None
        return abs(self.value - self.paper_value) <= self.tolerance


@dataclass
class ConstantsTable:
    entries: list[ConstantEntry] = field(default_factory=list)

    def add(self, *args, **kw):
        self.entries.append(ConstantEntry(*args, **kw))

    @property
    def all_match(self) -> bool:
        return all(e.matches is not False for e in self.entries)

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def constants_table() -> ConstantsTable:
    pi = math.pi
    t = ConstantsTable()
    t.add("L_cl_1_2", classical_L(1, 2),
          "Gamma(g+1)/((4pi)^(n/2) Gamma(n/2+g+1)), g=1, n=2", 1 / (8 * pi), 1e-12)
    t.add("L_cl_3/2_1", classical_L(1.5, 1), "same, g=3/2, n=1")
    t.add("R_best_known", best_known_factor(), "pi/sqrt(3)", 1.8138, 1e-4)
    t.add("L1_2d_k3/2", trace_constant_2d(1.5),
          "B(2-k,1+k)/(4pi (k-1)^k (2-k)^(2-k)), k=3/2", 3 / 8, 1e-12)
    k_star, L_star = optimize_trace_constant_2d()
    t.add("k_star", k_star, "argmin over k of the 2D trace bound", 1.38, 0.01)
    t.add("L1_2d_opt", L_star, "min over k of the 2D trace bound", 0.3605, 2e-4)
    t.add("L1_vec", vector_constant_2d(), "2 * L1_2d_k3/2", 0.75, 1e-12)
    t.add("k2", k_from_L(3 / 8, 2), "k2 = 4 L1", 1.5, 1e-12)
    t.add("k2_vec", k_from_L(vector_constant_2d(), 2), "4 L1_vec", 3.0, 1e-12)
    t.add("k2_sol", k_from_L(vector_constant_2d(), 2) / 2, "k2_vec / 2", 1.5, 1e-12)
    t.add("k2_lower", k_from_L(classical_L(1, 2), 2), "4 L_cl_1_2", 1 / (2 * pi), 1e-12)
    factor, L_T3, L_S3 = constants_3d()
    t.add("integral_3d", factor, "int (r/2)^(-1/2) (r/2-1)_-^2 dr", 32 / 15, 1e-9)
    t.add("L1_T3", L_T3, "4/(15pi)", 0.08488, 1e-5)
    t.add("delta_S3", L_S3 / L_T3, "max of the S^3 sum over pi/4", 1.0139, 1e-3)
    t.add("L1_S3", L_S3, "delta_S3 * 4/(15pi)")
    t.add("c_1", taikov_c(1), "1/(2l a^a (1-a)^(1-a) sin(pi a)), a=1/(2l)", 1.0, 1e-12)
    t.add("c_2", taikov_c(2), "same, l=2", (4 / 27) ** 0.25, 1e-12)
    t.add("K_1", zelik_K(1), "table", 1 / pi, 1e-15)
    t.add("K_2", zelik_K(2), "table", 2 / (3 * pi), 1e-15)
    tt1 = two_term_constants(1)
    t.add("trace_coeff_l1", tt1["trace_coeff"], "2l/(2l+1)^((2l+1)/(2l)) c(l)",
          2 / (3 * math.sqrt(3)), 1e-12)
    t.add("count_coeff_l1", tt1["count_coeff"], "(K(l)/c(l))^(2l)", 1 / pi ** 2, 1e-12)
    tt2 = two_term_constants(2)
    t.add("trace_coeff_l2", tt2["trace_coeff"], "2l/(2l+1)^((2l+1)/(2l)) c(l), l=2")
    t.add("count_coeff_l2", tt2["count_coeff"], "(K(l)/c(l))^(2l), l=2")
    return t
