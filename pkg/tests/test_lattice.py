"""Lattice canonicalization, dual bases, flux lattice membership and candidates."""
import random
from fractions import Fraction

import pytest

from torusdimers.errors import NotValidLattice
from torusdimers.lattice import (
    Flux,
    FundamentalDomain,
    Lattice,
    cell_is_black,
    dual_basis,
    flux_candidates,
    l_sharp_membership,
    normalize_basis,
    square_torus,
    valid_lattices,
)


def brute_force_canonical(u, w, window=16):
    """Re-derive the canonical basis by enumerating lattice points in a box."""
    pts = set()
    for a in range(-window, window + 1):
        for b in range(-window, window + 1):
            p = (a * u[0] + b * w[0], a * u[1] + b * w[1])
            if max(abs(p[0]), abs(p[1])) <= window:
                pts.add(p)
    x0 = min(x for x, y in pts if y == 0 and x > 0)
    y1 = min(y for x, y in pts if y > 0)
    x1 = min(x % x0 for x, y in pts if y == y1)
    return x0, x1, y1


def test_normalize_basis_examples():
    assert normalize_basis((4, 0), (0, 4)) == Lattice(4, 0, 4)
    assert normalize_basis((14, 0), (4, 2)) == Lattice(14, 4, 2)
    assert normalize_basis((3, 3), (8, 0)) == Lattice(8, 3, 3)


def test_normalize_basis_against_window_oracle():
    cases = [((2, 2), (6, -2)), ((4, 2), (-2, 4)), ((1, 3), (5, -1)), ((6, 0), (3, 3))]
    for u, w in cases:
        L = normalize_basis(u, w)
        assert (L.x0, L.x1, L.y1) == brute_force_canonical(u, w)
    # the frozen value for the headline case
    assert normalize_basis((2, 2), (6, -2)) == Lattice(8, 2, 2)


def test_normalize_idempotent_and_det_preserving():
    rng = random.Random(11)
    found = 0
    while found < 200:
        u = (rng.randint(-32, 32), rng.randint(-32, 32))
        w = (rng.randint(-32, 32), rng.randint(-32, 32))
        det = u[0] * w[1] - u[1] * w[0]
        if det == 0 or (u[0] - u[1]) % 2 or (w[0] - w[1]) % 2:
            continue
        found += 1
        L = normalize_basis(u, w)
        assert L.area == abs(det)
        assert normalize_basis(L.v0, L.v1) == L
        # both inputs are lattice members
        assert L.contains(u) and L.contains(w)


def test_normalize_rejections():
    with pytest.raises(NotValidLattice):
        normalize_basis((1, 0), (0, 2))  # mixed parity
    with pytest.raises(NotValidLattice):
        normalize_basis((2, 2), (4, 4))  # dependent
    with pytest.raises(NotValidLattice):
        Lattice(3, 0, 2)  # odd x0
    with pytest.raises(NotValidLattice):
        Lattice(4, 1, 2)  # x1, y1 parity mismatch


def test_dual_basis_exact():
    phi0, phi1 = dual_basis(square_torus(1))
    assert phi0 == (Fraction(1, 4), Fraction(0)) and phi1 == (Fraction(0), Fraction(1, 4))
    # solved exactly from the 2x2 rational system <phi_i, v_j> = delta_ij / 2
    phi0, phi1 = dual_basis(Lattice(14, 4, 2))
    assert phi0 == (Fraction(1, 28), Fraction(-1, 14))
    assert phi1 == (Fraction(0), Fraction(1, 4))
    for L in valid_lattices(24)[::5]:
        phi = dual_basis(L)
        for i in range(2):
            for j, v in enumerate((L.v0, L.v1)):
                pair = phi[i][0] * v[0] + phi[i][1] * v[1]
                assert pair == (Fraction(1, 2) if i == j else 0)


def test_l_sharp_membership():
    half = Fraction(1, 2)
    for L in valid_lattices(20)[::3]:
        for p in ((half, 0), (-half, 0), (0, half), (0, -half)):
            assert l_sharp_membership(L, p)
    assert l_sharp_membership(square_torus(1), (Fraction(0), Fraction(0)))
    assert not l_sharp_membership(Lattice(2, 1, 1), (Fraction(0), Fraction(0)))
    assert not l_sharp_membership(square_torus(1), (Fraction(1, 3), Fraction(0)))


def test_flux_candidates_t2():
    cands = flux_candidates(square_torus(2))
    assert len(cands) == 13
    carts = {f.cartesian() for f in cands}
    q = Fraction(1, 4)
    assert (0 * q, 0 * q) in carts and (q, q) in carts and (2 * q, 0 * q) in carts


def test_flux_candidates_scaling():
    for L in (square_torus(1), Lattice(2, 1, 1), Lattice(4, 1, 3)):
        base = {f.cartesian() for f in flux_candidates(L)}
        for n in (2, 3):
            scaled = {f.cartesian() for f in flux_candidates(L.scaled(n))}
            assert base <= scaled


def test_flux_representation():
    T2 = square_torus(2)
    f = Flux(2, -2, T2)
    assert f.a0 == 1 and f.a1 == -1
    assert f.cartesian() == (Fraction(1, 4), Fraction(-1, 4))
    assert Flux.from_string(T2, "1,-1") == f
    with pytest.raises(ValueError):
        Flux(1, 0, T2)  # odd two_a0
    with pytest.raises(ValueError):
        Flux(0, 1, T2)  # two_a1 parity must match y1


def test_serialization_roundtrip():
    L = Lattice(14, 4, 2)
    assert Lattice.from_string(str(L)) == L
    assert Lattice.from_json(L.to_json()) == L
    with pytest.raises(NotValidLattice):
        Lattice.from_string("not,a,lattice")


def test_fundamental_domain_numbering():
    for L in (square_torus(2), Lattice(14, 4, 2), Lattice(8, 3, 3), Lattice(2, 1, 1)):
        dom = FundamentalDomain(L)
        black, white, m = dom.numbering()
        assert m == L.area // 2
        assert black[(0, 0)] == 1  # the square [0,1]^2 is black number 1
        assert sorted(black.values()) == list(range(1, m + 1))
        assert sorted(white.values()) == list(range(1, m + 1))
        sq = list(dom.squares())
        assert len(sq) == L.area
        assert sum(1 for _, color, _ in sq if color == "black") == m
        inv_b = {v: k for k, v in black.items()}
        inv_w = {v: k for k, v in white.items()}
        wrapped = 0
        for i in range(1, m + 1):
            bx, by = inv_b[i]
            wx, wy = inv_w[i]
            if (wx, wy) == (bx + 1, by):
                continue
            assert (wx + L.x0, wy) == (bx + 1, by)
            wrapped += 1
        assert wrapped == L.y1 // 2


def test_valid_lattices_listing():
    ls = valid_lattices(8)
    assert all(L.area <= 8 for L in ls)
    assert Lattice(2, 1, 1) in ls and Lattice(4, 0, 2) in ls
    assert len(set(ls)) == len(ls)
    for L in ls:
        assert cell_is_black(0, 0)
        assert (L.x1 - L.y1) % 2 == 0
