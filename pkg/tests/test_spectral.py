"""Closed-form spectra: eigenvalues, determinant factorization, scaling, rectangles."""
import cmath
import math
import random

import numpy as np
import pytest

from torusdimers import spectral
from torusdimers.kasteleyn import build_kasteleyn, det_kd_numeric
from torusdimers.lattice import Lattice, square_torus
from torusdimers.spectral import (
    SpectralPoint,
    det_KE,
    det_kd_spectral,
    det_kd_spectral_mp,
    eigenvalues_M,
    lambda_K,
    mu1,
    p_LE,
    P_LE,
    product_formula_check,
    rectangle_count,
    rho,
    rho1,
    rho2,
    zeta_arguments,
)
from torusdimers.tilings import rectangle_count_transfer

SAMPLE = [square_torus(2), Lattice(2, 1, 1), Lattice(14, 4, 2), Lattice(8, 3, 3),
          Lattice(8, 1, 1), Lattice(4, 1, 3), Lattice(6, 2, 4), Lattice(16, 1, 1)]


def test_eigenvalue_examples():
    lam = eigenvalues_M(square_torus(1), (0.0, 0.0))
    assert len(lam) == 4
    assert lam[0] == pytest.approx(4.0)  # z = (0, 0): 4 (sin^2 0 + cos^2 0)
    assert all(v >= 0 for v in lam)
    # z = (1/4, 1/4): 4 (1 + 0) = 4
    assert 4.0 * (math.sin(math.pi / 2) ** 2 + math.cos(math.pi / 2) ** 2) == pytest.approx(4.0)


def test_lambda_k_formula():
    L = Lattice(6, 2, 4)
    u = (0.37, 0.61)
    z0, z1 = zeta_arguments(L, u, 2, 1)
    lam = lambda_K(SpectralPoint(2, 1), L, u)
    assert lam == pytest.approx(2 * math.cos(2 * math.pi * z1) + 2j * math.sin(2 * math.pi * z0))
    with pytest.raises(ValueError):
        lambda_K(SpectralPoint(3, 0), L, u)  # k0 out of [0, x0/2)


def test_conjugate_pair_identity_even_y1():
    rng = random.Random(1)
    for L in (square_torus(2), Lattice(6, 2, 4), Lattice(14, 4, 2)):
        u = (rng.random(), rng.random())
        for k0 in range(L.x0 // 2):
            for k1 in range(L.y1 // 2):
                a = lambda_K(SpectralPoint(k0, k1), L, u)
                b = lambda_K(SpectralPoint(k0, k1 + L.y1 // 2), L, u)
                assert a == pytest.approx(-b.conjugate())


def test_det_ke_product_and_reality():
    rng = random.Random(2)
    for L in SAMPLE:
        u = (rng.random(), rng.random())
        prod = 1.0 + 0.0j
        for k0 in range(L.x0 // 2):
            for k1 in range(L.y1):
                prod *= lambda_K(SpectralPoint(k0, k1), L, u)
        assert det_KE(L, u) == pytest.approx(prod, rel=1e-9)
        if L.y1 % 2 == 0:
            d = det_KE(L, u)
            assert abs(d.imag) < 1e-9 * max(1, abs(d))
            sign = (-1) ** (L.x0 * L.y1 // 4)
            assert sign * d.real >= -1e-9 * max(1, abs(d))


def test_t2_singular_at_unit():
    assert abs(det_KE(square_torus(2), (0.0, 0.0))) == pytest.approx(0.0, abs=1e-9)


def test_rho_cases():
    # even y1: -1 exactly when x0 = 0 (mod 4) and y1 = 2 (mod 4)
    assert rho1(Lattice(4, 0, 2)) == -1
    assert rho1(Lattice(8, 2, 2)) == -1
    assert rho1(square_torus(2)) == 1
    assert rho1(Lattice(2, 0, 2)) == 1
    assert rho1(Lattice(6, 0, 4)) == 1
    # odd y1, x0 = 2 / 6 (mod 8)
    assert rho1(Lattice(2, 1, 1)) == 1
    assert rho1(Lattice(10, 1, 1)) == 1
    assert rho1(Lattice(6, 1, 1)) == -1
    assert rho1(Lattice(14, 3, 3)) == -1
    # odd y1, x0 divisible by 4: fourth roots, pinned by det K_D = rho det K_E
    assert rho1(Lattice(8, 1, 1)) in (1j, -1j)
    assert rho2(square_torus(2), 0.77) == 1
    assert rho2(Lattice(2, 1, 1), 0.25) == pytest.approx(cmath.exp(-0.25j * math.pi))
    assert rho(Lattice(2, 1, 1), 0.0) == pytest.approx(1)


def test_determinant_factorization():
    rng = random.Random(3)
    for L in SAMPLE:
        K = build_kasteleyn(L)
        for _ in range(10):
            u0, u1 = rng.random(), rng.random()
            q0, q1 = cmath.exp(2j * math.pi * u0), cmath.exp(2j * math.pi * u1)
            d = det_kd_numeric(K, q0, q1)
            ds = det_kd_spectral(L, u0, u1)
            assert abs(d - ds) <= 1e-9 * max(1.0, abs(d), abs(ds))
            lam = np.prod(eigenvalues_M(L, (u0, u1)))
            assert abs(abs(d) ** 4 - lam) <= 1e-9 * max(1.0, abs(d) ** 4)
            # P_LE is det K_D up to the constant phase rho1
            assert P_LE(L, q0, q1) * rho1(L) == pytest.approx(d, abs=1e-9 * max(1, abs(d)))


def test_periodicity():
    rng = random.Random(4)
    for L in SAMPLE:
        for _ in range(5):
            u0, u1 = 3 * rng.random() - 1, 3 * rng.random() - 1
            p = p_LE(L, u0, u1)
            tol = 1e-9 * max(1.0, abs(p))
            assert abs(p_LE(L, u0 + 1, u1) - p) <= tol
            assert abs(p_LE(L, u0, u1 + 1) - (-1) ** L.y1 * p) <= tol
            assert abs(p_LE(L, u0, u1 + 2) - p) <= 10 * tol


def test_orthogonality_of_exponentials():
    rng = random.Random(5)
    for L in (square_torus(2), Lattice(6, 1, 3), Lattice(4, 2, 2)):
        u0, u1 = rng.random(), rng.random()
        # all area-many eigenvector classes of the doubled operator
        vecs = []
        for k0 in range(L.x0):
            for k1 in range(L.y1):
                z0, z1 = zeta_arguments(L, (u0, u1), k0, k1)
                v = np.array([
                    cmath.exp(2j * math.pi * (z0 * (i + 0.5) + z1 * (j + 0.5)))
                    for j in range(L.y1) for i in range(L.x0)
                ])
                vecs.append(v)
        V = np.array(vecs)
        G = V @ V.conj().T
        off = G - np.diag(np.diag(G))
        assert np.abs(off).max() < 1e-9 * np.abs(np.diag(G)).max()
        # the chosen half-box restricted to one color class is again orthogonal
        blacks = [j * L.x0 + i for j in range(L.y1) for i in range(L.x0) if (i + j) % 2 == 0]
        W = np.array(
            [vecs[k0 * L.y1 + k1][blacks] for k0 in range(L.x0 // 2) for k1 in range(L.y1)]
        )
        GW = W @ W.conj().T
        offw = GW - np.diag(np.diag(GW))
        assert np.abs(offw).max() < 1e-9 * np.abs(np.diag(GW)).max()


def test_product_formula():
    rng = random.Random(6)
    for L in (square_torus(1), Lattice(2, 1, 1), Lattice(4, 2, 2)):
        for n in (1, 2, 3):
            for _ in range(8):
                res = product_formula_check(L, n, (rng.random(), rng.random()))
                assert res < 1e-9


def test_mu1_cases():
    q1 = cmath.exp(0.62j)
    assert mu1(q1, 3, square_torus(2)) == 1  # even lattice
    assert mu1(q1, 2, Lattice(2, 1, 1)) == pytest.approx(q1 ** 2)
    assert mu1(q1, 3, Lattice(2, 1, 1)) == pytest.approx(q1 ** 3)


def test_det_kd_spectral_mp_matches_double():
    import mpmath

    for L in (square_torus(2), Lattice(6, 1, 3)):
        with mpmath.workdps(30):
            a = det_kd_spectral_mp(L, mpmath.mpf("0.3"), mpmath.mpf("0.7"))
        b = det_kd_spectral(L, 0.3, 0.7)
        assert abs(complex(a) - b) < 1e-9 * max(1, abs(b))


def test_sweep_csv_golden():
    csv = spectral.sweep_csv(Lattice(6, 1, 3), samples=3, seed=7)
    lines = csv.splitlines()
    assert lines[0] == "u0,u1,det_kd_re,det_kd_im,det_ke_re,det_ke_im,rho_re,rho_im"
    assert lines[1] == (
        "0.323832764833,0.150849173925,-9.672238272798e+01,1.244422601458e+02,"
        "1.428540239816e+02,-6.658696015777e+01,-8.897922179656e-01,4.563658716949e-01"
    )
    assert len(lines) == 4
    # deterministic
    assert csv == spectral.sweep_csv(Lattice(6, 1, 3), samples=3, seed=7)


def test_rectangle_count():
    assert rectangle_count(2, 3) == 3
    assert rectangle_count(2, 1) == 1
    assert rectangle_count(8, 8) == 12988816
    for m in (2, 4, 6, 8):
        for n in range(1, 9):
            assert rectangle_count(m, n) == rectangle_count_transfer(m, n)
    with pytest.raises(ValueError):
        rectangle_count(3, 2)
    with pytest.raises(ValueError):
        rectangle_count(2, 0)
