import math

import numpy as np
import pytest

from ltverify import spectral_sums as ss
from ltverify.errors import DomainError
from ltverify.spectral_sums import Domain

# high-precision values of the S^2 sum (30-digit partial sums + Euler-Maclaurin tail)
SPHERE2_ORACLE = {
    (5.0, 1.5): 1.97349649550978949,
    (100.0, 1.5): 1.99993333433338096,
    (10.0, 1.5): 1.99334338137605713,
    (1.0, 1.2): 4.45106371848427806,
    (2.5, 1.38): 2.52747186087647887,
    (0.3, 1.9): 0.120635658035287106,
}
SPHERE3_ORACLE = {0.5: 0.40329333688101970146, 1.0: 0.64493406684822643647,
                  2.0: 0.78156305593659013893, 3.312: 0.79632248924754040975}


def _contains(cv, x, slack=1e-14):
    return cv.value - slack <= x <= cv.upper + slack


@pytest.mark.parametrize("key", sorted(SPHERE2_ORACLE))
def test_sphere2_oracle(key):
    mu, k = key
    cv = ss.sphere2_H(mu, k, 1e-12)
    assert cv.tail_bound <= 1e-12
    assert _contains(cv, SPHERE2_ORACLE[key])


def test_sphere2_zero_and_errors():
    cv = ss.sphere2_H(0.0, 1.5, 1e-10)
    assert cv.value == 0 and cv.tail_bound == 0
    with pytest.raises(DomainError):
        ss.sphere2_H(1.0, 1.5, 0.0)
    with pytest.raises(DomainError):
        ss.sphere2_H(1.0, 2.5)


def test_sphere2_brute_force():
    cv = ss.sphere2_H(5.0, 1.5, 1e-10)
    n = np.arange(1, 10 ** 6 + 1, dtype=float)
    partial = 5.0 * math.fsum((2 * n + 1) / (n * (n + 1) + 25.0) ** 1.5)
    assert 0 < cv.value < 2
    # the partial sum misses a positive tail of about 10/N
    assert partial <= cv.upper
    assert cv.value - partial <= 1.1e-5


def test_sphere2_large_mu():
    cv = ss.sphere2_H(100, 1.5, 1e-12)
    assert cv.value == pytest.approx(2 - (2 / 3) / 100 ** 2, abs=1e-7)


def test_grouped_form_equals_direct():
    for mu, k in [(0.7, 1.5), (3.0, 1.3), (12.0, 1.8)]:
        a = ss.sphere2_partial(mu, k, 20000)
        b = ss.sphere2_partial(mu, k, 20000, grouped=True)
        assert abs(a - b) <= 1e-12 * abs(a)


def test_fixed_terms_certificate():
    for mu, k in [(2.0, 1.5), (4.0, 1.2)]:
        short = ss.sphere2_H(mu, k, terms=200)
        long = ss.sphere2_H(mu, k, terms=400)
        assert abs(long.value - short.value) <= short.tail_bound
        assert long.tail_bound <= short.tail_bound


def test_torus2_values():
    assert ss.torus2_F(0, 1.5, 1e-8).value == 0
    cv = ss.torus2_F(50, 1.5, 1e-8)
    assert cv.value == pytest.approx(2 * math.pi - 1 / 2500, abs=1e-10)
    direct = ss.torus2_F_direct(1.0, 1.5, 2000 ** 2)
    cv = ss.torus2_F(1.0, 1.5, 1e-8)
    assert cv.value <= direct.upper and direct.value <= cv.upper


def test_torus2_small_mu_fallback():
    cv = ss.torus2_F(0.05, 1.5, 1e-10)
    assert cv.tail_bound <= 1e-10
    direct = ss.torus2_F_direct(0.05, 1.5, 1 << 20)
    assert direct.value <= cv.upper and cv.value <= direct.upper


def test_torus3_values():
    assert ss.torus3_F(0, 1e-6).value == 0
    assert ss.torus3_F(20, 1e-6).value == pytest.approx(math.pi ** 2 - 20.0 ** -3, abs=1e-9)
    cv = ss.torus3_F(1.5, 1e-6)
    direct = ss.torus3_F_direct(1.5, 600 ** 2)
    assert cv.value <= direct.upper and direct.value <= cv.upper


@pytest.mark.parametrize("mu", sorted(SPHERE3_ORACLE))
def test_sphere3_oracle(mu):
    assert _contains(ss.sphere3_H(mu, 1e-12), SPHERE3_ORACLE[mu])


def test_sphere3_closed_form():
    for mu in (1.5, 2.0, 3.312, 5.0, 10.0, 20.0):
        assert abs(ss.sphere3_H(mu, 1e-12).value - ss.sphere3_H_closed(mu)) <= 1e-9
    assert ss.sphere3_H_closed(10.0) > math.pi / 4
    with pytest.raises(DomainError):
        ss.sphere3_H_closed(1.0)
    # overlap of the series and the closed form
    for mu in np.linspace(1.1, 1.5, 9):
        assert abs(ss.sphere3_value(mu) - ss.sphere3_H(mu, 1e-12).value) <= 1e-9


@pytest.mark.parametrize("nu", [1.0, 2.5, 7.0])
def test_kernel_partial_sum(nu):
    assert abs(ss.s3_kernel_partial(nu) - ss.s3_kernel_closed(nu)) <= 1e-6


def test_limits():
    assert ss.limit_value(Domain.SPHERE2, 1.5) == 2
    assert ss.limit_value("torus2", 1.5) == pytest.approx(2 * math.pi)
    assert ss.limit_value(Domain.TORUS3, 2) == pytest.approx(math.pi ** 2)
    assert ss.limit_value(Domain.SPHERE3, 2) == pytest.approx(math.pi / 4)


def test_asymptotic_residuals():
    r100 = ss.asymptotic_residual(Domain.SPHERE2, 100, 1.5)
    assert abs(r100 - 2 / 3) <= 0.02 * 2 / 3
    assert abs(ss.asymptotic_residual(Domain.TORUS2, 10, 1.5) - 1) <= 1e-6
    seq = [ss.asymptotic_residual(Domain.SPHERE2, mu, 1.5) for mu in (10, 20, 40, 100)]
    assert all(b > a for a, b in zip(seq, seq[1:]))
    with pytest.raises(DomainError):
        ss.asymptotic_residual(Domain.SPHERE2, 0.5)


def test_sweeps():
    rep = ss.verify_on_interval(Domain.SPHERE2, 1.5, 5.1, 0.01, 0)
    assert rep.passed and rep.min_margin > 0 and rep.grid[0] == 0 and rep.grid[-1] == 5.1
    assert ss.verify_on_interval(Domain.TORUS2, 1.5, 1.05, 0.005, 0).passed
    assert ss.verify_on_interval(Domain.SPHERE2, 1.38, 5.5, 0.01, 0).passed
    rows = rep.csv_rows()
    assert len(rows) == len(rep.grid) and len(rows[0]) == 5
    assert min(r[4] for r in rows) == rep.min_margin


def test_sweep_reports_failure():
    rep = ss.verify_on_interval(Domain.SPHERE2, 1.5, 5.1, 0.01, 0, limit_scale=0.9)
    assert not rep.passed and rep.min_margin < 0
    rep = ss.verify_on_interval(Domain.SPHERE2, 1.5, 2.0, 0.1, margin_floor=1.0)
    assert not rep.passed and rep.min_margin > 0


def test_find_s3_max():
    mu_star, delta = ss.find_s3_max()
    assert abs(mu_star - 3.312) <= 0.01
    assert abs(delta - 1.0139) <= 1e-3
    assert delta > 1
    assert ss.sphere3_H(3.312, 1e-10).value == pytest.approx(1.0139 * math.pi / 4, rel=1e-4)


def test_sum_query():
    q = ss.SumQuery("torus3", 1.0, 2)
    assert q.domain is Domain.TORUS3
    with pytest.raises(DomainError):
        ss.SumQuery("sphere3", 1.0, 1.5)
    with pytest.raises(DomainError):
        ss.SumQuery("sphere2", -1.0, 1.5)
    assert q.evaluate(1e-8).upper < math.pi ** 2
