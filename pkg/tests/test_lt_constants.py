import math

import numpy as np
import pytest

from ltverify import lt_constants as lc
from ltverify.errors import DomainError, UnsupportedError


def test_classical_L():
    assert lc.classical_L(1, 2) == pytest.approx(1 / (8 * math.pi), rel=1e-12)
    for n in (1, 2, 3):
        assert lc.classical_L(0, n) == pytest.approx(
            1 / ((4 * math.pi) ** (n / 2) * math.gamma(n / 2 + 1)), rel=1e-12)
    assert lc.classical_L(1.5, 1) == pytest.approx(3 / 16, rel=1e-12)


def test_best_known_factor():
    assert lc.best_known_factor() == pytest.approx(1.8138, abs=1e-4)
    assert lc.best_known_factor() < 2


def test_trace_constant_2d():
    assert abs(lc.trace_constant_2d(1.5) - 0.375) <= 1e-12
    assert lc.trace_constant_2d(1.38) == pytest.approx(0.3605, abs=2e-4)
    assert lc.trace_constant_2d(1 + 1e-6) > 1e3
    assert lc.trace_constant_2d(2 - 1e-6) > 1e3
    with pytest.raises(DomainError):
        lc.trace_constant_2d(2.0)


def test_trace_constant_single_minimum():
    ks = np.linspace(1.05, 1.95, 400)
    v = np.array([lc.trace_constant_2d(k) for k in ks])
    d = np.sign(np.diff(v))
    assert np.count_nonzero(np.diff(d) != 0) == 1


def test_optimize_trace_constant():
    k, L = lc.optimize_trace_constant_2d()
    assert 1.37 <= k <= 1.40
    assert L <= 0.3606 and L < 3 / 8
    assert lc.trace_constant_2d(k) == L


def test_inner_integral():
    closed, quad = lc.inner_integral_check(1.5, 0.5, 1.0)
    assert abs(closed - quad) <= 1e-7 * closed
    vals = [lc.inner_integral_check(1.5, 0.3, V)[0] for V in (1, 2, 4)]
    assert vals[1] / vals[0] == pytest.approx(4) and vals[2] / vals[1] == pytest.approx(4)
    rng = np.random.default_rng(7)
    for _ in range(10):
        k, t, V = rng.uniform(1.05, 1.95), rng.uniform(0.05, 0.95), rng.uniform(0.1, 5)
        c, q = lc.inner_integral_check(k, t, V)
        assert abs(c - q) <= 1e-7 * c


def test_optimal_t():
    for k in (1.2, 1.5, 1.8):
        ts = np.linspace(0.01, 0.99, 9801)
        f = ts ** (1 - k) * (1 - ts) ** (k - 2)
        assert ts[np.argmin(f)] == pytest.approx(k - 1, abs=2e-4)


def test_vector_and_k_relations():
    assert lc.vector_constant_2d() == pytest.approx(0.75, abs=1e-12)
    assert lc.vector_constant_2d() == 2 * lc.trace_constant_2d(1.5)
    assert lc.k_from_L(3 / 8, 2) == pytest.approx(1.5, abs=1e-12)
    assert lc.k_from_L(3 / 4, 2) == pytest.approx(3.0, abs=1e-12)
    assert lc.k_from_L(1 / (8 * math.pi), 2) == pytest.approx(1 / (2 * math.pi), rel=1e-12)
    assert lc.k_from_L(lc.trace_constant_2d(1.5), 2) == pytest.approx(1.5, abs=1e-12)


def test_constants_3d():
    factor, LT3, LS3 = lc.constants_3d()
    assert abs(factor - 32 / 15) <= 1e-9
    assert LT3 == pytest.approx(4 / (15 * math.pi)) and LT3 == pytest.approx(0.08488, abs=1e-5)
    assert LS3 / LT3 == pytest.approx(1.0139, abs=1e-3)
    # 32/15 = 2 B(1/2, 3)
    from ltverify.numerics import beta
    assert 2 * beta(0.5, 3) == pytest.approx(32 / 15, rel=1e-13)


def test_taikov_c():
    assert abs(lc.taikov_c(1) - 1) <= 1e-12
    assert abs(lc.taikov_c(2) - (4 / 27) ** 0.25) <= 1e-12
    assert math.isfinite(lc.taikov_c(10))
    vals = [lc.taikov_c(l) for l in range(1, 11)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        lc.taikov_c(0.5)


def test_zelik_K():
    assert lc.zelik_K(1) == 1 / math.pi
    assert lc.zelik_K(2) == 2 / (3 * math.pi)
    with pytest.raises(UnsupportedError):
        lc.zelik_K(3)


def test_two_term_constants():
    c = lc.two_term_constants(1, 2 * math.pi)
    assert c["trace_coeff"] == pytest.approx(2 / (3 * math.sqrt(3)), abs=1e-12)
    assert c["count_coeff"] == pytest.approx(1 / math.pi ** 2, abs=1e-12)
    for L in (1.0, 3.0, 10.0):
        assert lc.two_term_constants(1, L)["count_coeff"] == pytest.approx(4 / L ** 2, rel=1e-12)
    c2 = lc.two_term_constants(2)
    assert c2["trace_coeff"] == pytest.approx(4 / 5 ** 1.25 * (4 / 27) ** 0.25, rel=1e-12)
    assert c2["count_coeff"] == pytest.approx((2 / (3 * math.pi) / (4 / 27) ** 0.25) ** 4, rel=1e-12)
    with pytest.raises(UnsupportedError):
        lc.two_term_constants(3)


def test_constants_table():
    t = lc.constants_table()
    assert t.all_match
    assert t["L1_2d_k3/2"].value == pytest.approx(0.375, abs=1e-12)
    assert all(e.formula_ref for e in t.entries)
