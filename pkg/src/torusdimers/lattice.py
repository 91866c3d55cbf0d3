"""Valid lattices, dual bases, and flux values.

A lattice L here is a full-rank sublattice of Z^2 whose generators each have
coordinates of equal parity.  Such lattices are exactly the ones for which the
quotient torus R^2/L inherits a consistent black-and-white coloring of unit
squares (we fix the square [0,1]^2 black).  Every such lattice has a unique
canonical basis (x0, 0), (x1, y1) with x0 even, y1 > 0 and 0 <= x1 < x0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotValidLattice

Vec = tuple[int, int]
QVec = tuple[Fraction, Fraction]


def cell_is_black(i: int, j: int) -> bool:
    """Color of the unit square with lower-left corner (i, j)."""
    return (i + j) % 2 == 0


@dataclass(frozen=True, order=True)
class Lattice:
    """Canonical form of a valid lattice: generated by (x0, 0) and (x1, y1)."""

    x0: int
    x1: int
    y1: int

    def __post_init__(self):
        if self.x0 <= 0 or self.x0 % 2 != 0:
            raise NotValidLattice(f"x0 must be positive and even, got {self.x0}")
        if self.y1 <= 0:
            raise NotValidLattice(f"y1 must be positive, got {self.y1}")
        if not 0 <= self.x1 < self.x0:
            raise NotValidLattice(f"x1 must lie in [0, x0), got {self.x1}")
        if (self.x1 - self.y1) % 2 != 0:
            raise NotValidLattice(
                f"(x1, y1) = {(self.x1, self.y1)} must have equal parity coordinates"
            )

    @property
    def v0(self) -> Vec:
        return (self.x0, 0)

    @property
    def v1(self) -> Vec:
        return (self.x1, self.y1)

    @property
    def area(self) -> int:
        return self.x0 * self.y1

    def scaled(self, n: int) -> "Lattice":
        """The dilated lattice nL (canonical form scales coordinatewise)."""
        if n <= 0:
            raise ValueError("scale factor must be positive")
        return Lattice(n * self.x0, n * self.x1, n * self.y1)

    def contains(self, v: Vec) -> bool:
        x, y = v
        if y % self.y1 != 0:
            return False
        b = y // self.y1
        return (x - b * self.x1) % self.x0 == 0

    def reduce_cell(self, x: int, y: int) -> tuple[int, int]:
        """Representative of the unit cell (x, y) inside the fundamental domain."""
        b = y // self.y1
        return (x - b * self.x1) % self.x0, y - b * self.y1

    def reduce_cell_shift(self, x: int, y: int) -> tuple[int, int, int, int]:
        """Representative (i, j) plus coefficients (a, b): (x,y) = (i,j) + a*v0 + b*v1."""
        b = y // self.y1
        j = y - b * self.y1
        xs = x - b * self.x1
        a = xs // self.x0
        return xs - a * self.x0, j, a, b

    def cell_index(self, i: int, j: int) -> int:
        return j * self.x0 + i

    def cells(self):
        """Fundamental-domain cells in row-major order."""
        for j in range(self.y1):
            for i in range(self.x0):
                yield (i, j)

    def __str__(self) -> str:
        return f"{self.x0},{self.x1},{self.y1}"

    @classmethod
    def from_string(cls, s: str) -> "Lattice":
        try:
            x0, x1, y1 = (int(p) for p in s.split(","))
        except ValueError as exc:
            raise NotValidLattice(f"cannot parse lattice spec {s!r}") from exc
        return cls(x0, x1, y1)

    def to_json(self) -> str:
        return json.dumps({"x0": self.x0, "x1": self.x1, "y1": self.y1})

    @classmethod
    def from_json(cls, s: str) -> "Lattice":
        d = json.loads(s)
        return cls(d["x0"], d["x1"], d["y1"])


def square_torus(n: int) -> Lattice:
    """The 2n x 2n square torus."""
    return Lattice(2 * n, 0, 2 * n)


def normalize_basis(u: Vec, w: Vec) -> Lattice:
    """Canonical (x0,0), (x1,y1) basis of the lattice generated by u and w.

    Column-reduces by integer operations: y1 is the gcd of the y-coordinates,
    x0 = |det| / y1 is the shortest horizontal period, and x1 is the unique
    representative in [0, x0).  Absolute determinant is preserved.
    """
    ux, uy = u
    wx, wy = w
    for v in (u, w):
        if (v[0] - v[1]) % 2 != 0:
            raise NotValidLattice(f"vector {v} has mixed-parity coordinates")
    det = ux * wy - uy * wx
    if det == 0:
        raise NotValidLattice(f"vectors {u} and {w} are linearly dependent")
    if uy == 0 and wy == 0:
        raise NotValidLattice(f"vectors {u} and {w} are linearly dependent")
    # s*uy + t*wy = g > 0 gives the lattice point of minimal positive height.
    g, s, t = _xgcd(uy, wy)
    if g < 0:
        g, s, t = -g, -s, -t
    px = s * ux + t * wx
    x0 = abs(det) // g
    return Lattice(x0, px % x0, g)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) (g sign follows the algorithm)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def dual_basis(L: Lattice) -> tuple[QVec, QVec]:
    """Vectors (phi0, phi1) with <phi_i, v_j> = 1/2 * delta_ij, exactly."""
    d = 2 * L.x0 * L.y1
    phi0 = (Fraction(L.y1, d), Fraction(-L.x1, d))
    phi1 = (Fraction(0), Fraction(L.x0, d))
    return phi0, phi1


@dataclass(frozen=True, order=True)
class Flux:
    """A flux value, stored through its doubled pairings with the canonical basis.

    two_a0 = 2<phi, v0> and two_a1 = 2<phi, v1>.  The first is always even;
    the second has the parity of y1.
    """

    two_a0: int
    two_a1: int
    lattice: Lattice

    def __post_init__(self):
        if self.two_a0 % 2 != 0:
            raise ValueError("two_a0 must be even (v0 has even coordinates)")
        if (self.two_a1 - self.lattice.y1) % 2 != 0:
            raise ValueError("two_a1 must have the parity of y1")

    @property
    def a0(self) -> Fraction:
        return Fraction(self.two_a0, 2)

    @property
    def a1(self) -> Fraction:
        return Fraction(self.two_a1, 2)

    def cartesian(self) -> QVec:
        phi0, phi1 = dual_basis(self.lattice)
        return (
            self.two_a0 * phi0[0] + self.two_a1 * phi1[0],
            self.two_a0 * phi0[1] + self.two_a1 * phi1[1],
        )

    def one_norm(self) -> Fraction:
        x, y = self.cartesian()
        return abs(x) + abs(y)

    def is_boundary(self) -> bool:
        return self.one_norm() == Fraction(1, 2)

    def __str__(self) -> str:
        return f"{self.a0},{self.a1}"

    @classmethod
    def from_pairings(cls, L: Lattice, a0, a1) -> "Flux":
        f0, f1 = Fraction(a0), Fraction(a1)
        if f0.denominator > 2 or f1.denominator > 2:
            raise ValueError(f"pairings must be half-integers, got {a0}, {a1}")
        return cls(int(2 * f0), int(2 * f1), L)

    @classmethod
    def from_string(cls, L: Lattice, s: str) -> "Flux":
        a0, a1 = (Fraction(p) for p in s.split(","))
        return cls.from_pairings(L, a0, a1)


def l_sharp_membership(L: Lattice, point: QVec) -> bool:
    """Whether an exact rational point belongs to the affine lattice of flux values.

    Membership is decided through the doubled pairings with the basis: both
    must be integers, the one against v0 even, and the one against v1 of the
    same parity as y1.
    """
    px, py = Fraction(point[0]), Fraction(point[1])
    t0 = 2 * (px * L.x0)
    t1 = 2 * (px * L.x1 + py * L.y1)
    if t0.denominator != 1 or t1.denominator != 1:
        return False
    return t0 % 2 == 0 and (t1 - L.y1) % 2 == 0


def flux_candidates(L: Lattice) -> tuple[Flux, ...]:
    """All points of the flux lattice inside the closed diamond |x|+|y| <= 1/2.

    Computed in exact rational arithmetic; boundary points are included.
    """
    half = Fraction(1, 2)
    out = []
    # |<phi, v>| <= ||phi||_1 * ||v||_inf bounds the doubled pairings.
    m0 = L.x0
    m1 = max(L.x1, L.y1)
    for t0 in range(-m0, m0 + 1, 2):
        for t1 in range(-m1 - 1, m1 + 2):
            if (t1 - L.y1) % 2 != 0:
                continue
            f = Flux(t0, t1, L)
            if f.one_norm() <= half:
                out.append(f)
    return tuple(sorted(out, key=lambda f: (f.two_a0, f.two_a1)))


@dataclass(frozen=True)
class FundamentalDomain:
    """Fundamental-domain squares with colors and the paired black/white numbering.

    The numbering pairs white square i with black square i via w_i = b_i + (1,0),
    except at the start of each white line, where w_i + v0 = b_i + (1,0).
    Indices are 1-based; the square [0,1]^2 is black number 1.
    """

    lattice: Lattice

    def squares(self):
        """Yield (cell, color, index-within-color), row-major."""
        black, white, _ = self.numbering()
        for cell in self.lattice.cells():
            if cell_is_black(*cell):
                yield cell, "black", black[cell]
            else:
                yield cell, "white", white[cell]

    def numbering(self):
        """(black_no, white_no, m): 1-based numbers per color, m squares each."""
        L = self.lattice
        black_no: dict[tuple[int, int], int] = {}
        white_no: dict[tuple[int, int], int] = {}
        n = 0
        for j in range(L.y1):
            if j % 2 == 0:  # black line: starts with a black square
                for i in range(0, L.x0, 2):
                    n += 1
                    black_no[(i, j)] = n
                    white_no[(i + 1, j)] = n
            else:  # white line: its first (white) square pairs with the last black
                for i in range(1, L.x0, 2):
                    n += 1
                    black_no[(i, j)] = n
                    white_no[(i + 1, j) if i + 1 < L.x0 else (0, j)] = n
        return black_no, white_no, n


def valid_lattices(max_area: int):
    """All valid lattices with fundamental-domain area <= max_area, sorted."""
    out = []
    for x0 in range(2, max_area + 1, 2):
        for y1 in range(1, max_area // x0 + 1):
            for x1 in range(y1 % 2, x0, 2):
                out.append(Lattice(x0, x1, y1))
    return sorted(out, key=lambda L: (L.area, L.x0, L.x1, L.y1))
