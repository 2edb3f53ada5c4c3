import math

import numpy as np
import pytest

from ltverify import schrodinger_lab as lab
from ltverify.errors import ContractError, DomainError, ResourceError
from ltverify.lt_constants import two_term_constants
from ltverify.numerics import eig_sym
from ltverify.schrodinger_lab import FamilyKind, GalerkinConfig, Potential1D, Potential2D


def test_potential_coefficients_reconstruct_values():
    V = Potential1D([1.0, 2.0, -0.5], [0.3, 0.7], period=3.0)
    x = np.linspace(0, 3, 17)
    kap = 2 * math.pi / 3
    rec = sum(V.coefficient(j) * np.exp(1j * j * kap * x) for j in range(-2, 3))
    assert np.allclose(rec.real, V(x)) and np.allclose(rec.imag, 0)
    W = Potential2D({(0, 0): (1.0, 0.0), (1, 2): (0.5, -1.5), (2, -1): (0.0, 2.0)})
    X, Y = np.meshgrid(np.linspace(0, 6, 5), np.linspace(0, 6, 5))
    rec = sum(c * np.exp(1j * (p * X + q * Y)) for (p, q), c in W.coefficients().items())
    assert np.allclose(rec.real, W(X, Y))


def test_product_well_values():
    V = Potential2D.product_well(8.0)
    x, y = 0.4, 1.9
    assert V(x, y) == pytest.approx(-4 * (1 + math.cos(x)) * (1 + math.cos(y)))


def test_zero_potential_1d():
    A = lab.assemble_1d(Potential1D([0.0]), GalerkinConfig(10, 2))
    ev = eig_sym(A)
    assert np.allclose(ev, np.repeat(np.arange(1, 11) ** 4.0, 2))
    assert lab.negative_spectrum(A).count == 0


def test_zero_potential_2d():
    spec = lab.negative_spectrum(lab.assemble_2d_torus(Potential2D({}), GalerkinConfig(4)))
    assert spec.count == 0 and spec.trace == 0.0


def test_constant_potential_shifts_diagonal():
    # only the zero mode is projected out, so V = c gives m^2 - c
    ev = eig_sym(lab.assemble_1d(Potential1D([3.0]), GalerkinConfig(6)))
    assert np.allclose(ev, np.repeat(np.arange(1, 7) ** 2.0, 2) - 3.0)
    V = Potential1D([3.0, 2.0], [0.0, 1.0])
    cfg = GalerkinConfig(12)
    d = lab.assemble_1d(V, cfg) - lab.assemble_1d(V.shifted(5.0), cfg)
    assert np.allclose(d, 5.0 * np.eye(24))
    W = Potential2D.product_well(10.0)
    W2 = Potential2D({**W.terms, (0, 0): (W.terms[(0, 0)][0] + 7.0, 0.0)})
    cfg2 = GalerkinConfig(5)
    d2 = lab.assemble_2d_torus(W2, cfg2) - lab.assemble_2d_torus(W, cfg2)
    assert np.allclose(d2, 7.0 * np.eye(d2.shape[0]))


def test_matrices_symmetric():
    A = lab.assemble_1d(Potential1D([2.0, 1.0], [0.0, 1.0]), GalerkinConfig(16))
    assert np.allclose(A, A.T)
    B = lab.assemble_2d_torus(lab.gallery_2d()[3][1], GalerkinConfig(5))
    assert np.allclose(B, B.T)


def test_even_potential_decouples_parity():
    V = Potential1D([10.0, 10.0, 3.0])
    assert lab.is_even(V)
    assert lab.parity_cross_block(lab.assemble_1d(V, GalerkinConfig(20))) == 0.0
    W = Potential1D([1.0, 1.0], [1.0])
    assert lab.parity_cross_block(lab.assemble_1d(W, GalerkinConfig(20))) > 0


def test_dimension_guard():
    with pytest.raises(ResourceError):
        lab.assemble_2d_torus(Potential2D.product_well(1.0), GalerkinConfig(32))
    assert 2 * (2 * 31 + 1) ** 2 // 2 - 1 <= lab.MAX_DIM
    with pytest.raises(DomainError):
        GalerkinConfig(0)


def test_negative_potential_rejected_1d():
    V = Potential1D([-1.0, 0.5])
    spec = lab.negative_spectrum(lab.assemble_1d(V, GalerkinConfig(8)))
    with pytest.raises(ContractError):
        lab.check_two_term_1d(spec, V)


def test_two_term_bound_gallery_1d():
    for row in lab.run_gallery_1d(cutoffs=(24, 32), ls=(1, 2)):
        assert row["margin"] > 0, row


def test_trace_bound_gallery_2d():
    for row in lab.run_gallery_2d(cutoffs=(6, 8)):
        assert row["margin"] > 0, row
        assert row["counting_margin"] >= 0, row
        assert row["ritz_monotone"], row


def test_ritz_upper_bounds_decrease():
    V = Potential1D([50.0, 50.0])
    e1 = eig_sym(lab.assemble_1d(V, GalerkinConfig(8)))
    e2 = eig_sym(lab.assemble_1d(V, GalerkinConfig(16)))
    assert np.all(e2[:len(e1)] <= e1 + 1e-9)


def test_trace_is_sum_of_negative_eigenvalues():
    A = lab.assemble_2d_torus(Potential2D.product_well(20.0), GalerkinConfig(6))
    ev = np.linalg.eigvalsh(A)
    spec = lab.negative_spectrum(A)
    assert spec.trace == pytest.approx(-ev[ev <= 0].sum())
    assert spec.count == int(np.sum(ev <= 0))


def test_single_cosine_family_1d():
    # cos x / sqrt(pi) on [0, 2pi]: int rho^3 = 5/(8 pi^2), kinetic 1
    C = lab.first_modes_family(FamilyKind.ONED_ORDER_L, 1, 4)
    f = lab.family_functionals(FamilyKind.ONED_ORDER_L, C, l=1)
    assert f["integral"] == pytest.approx(5 / (8 * math.pi ** 2), rel=1e-12)
    assert f["kinetic"] == pytest.approx(1.0)
    assert f["lhs"] == pytest.approx(5 / (8 * math.pi ** 2) + 1 / math.pi ** 2, rel=1e-12)
    assert f["margin"] > 0


def test_family_checks_random():
    for l in (1, 2):
        for seed in range(3):
            C = lab.random_family(FamilyKind.ONED_ORDER_L, 5, 12, seed)
            assert lab.orthonormal_family_check(FamilyKind.ONED_ORDER_L, C, l) > 0
    for seed in range(3):
        C = lab.random_family(FamilyKind.SCALAR2D_GRAD, 6, 3, seed)
        assert lab.orthonormal_family_check(FamilyKind.SCALAR2D_GRAD, C) > 0


def test_family_shells_2d():
    for r2 in (1, 2, 5, 10):
        C = lab.lowest_shells_family_2d(r2, 4)
        assert lab.orthonormal_family_check(FamilyKind.SCALAR2D_GRAD, C) > 0


def test_family_non_orthonormal_rejected():
    C = np.ones((2, 8)) / math.sqrt(8)
    with pytest.raises(ContractError):
        lab.family_functionals(FamilyKind.ONED_ORDER_L, C)


def test_counting_rhs_zero_for_positive_potential():
    V = Potential2D({(0, 0): (5.0, 0.0), (1, 0): (1.0, 0.0)})
    assert lab.counting_rhs(V, 0.5, 1.5, 0.5) == 0.0
    with pytest.raises(DomainError):
        lab.counting_rhs(V, 0.5, 2.5, 0.5)


def test_two_term_constants_period_scaling():
    c = two_term_constants(1, 3.0)
    assert c["count_coeff"] == pytest.approx(4 / 9)
