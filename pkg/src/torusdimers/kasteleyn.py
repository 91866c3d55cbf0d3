"""Kasteleyn matrices for tori and their exact Laurent-polynomial determinants.

Signing: -1 on every edge joining a black square to the white square on its
right (the dominoes of the brick wall with flux (0, 1/2)), +1 elsewhere.
Weights: an edge whose white endpoint lies in the fundamental-domain copy
shifted by a*v0 + b*v1 relative to its black endpoint picks up q0^(-b) * q1^a.
Each monomial c * q0^i0 * q1^i1 of det(K) then counts the tilings of one flux,
|c| of them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import InconsistentSigns, PatternViolation, ResidualTooLarge
from .lattice import Flux, FundamentalDomain, Lattice, cell_is_black
from . import spectral

Monomial = tuple[int, int, int]  # (sign, e0, e1)


def kasteleyn_sign(cell_a: tuple[int, int], cell_b: tuple[int, int]) -> int:
    """Sign of the edge between two adjacent squares of opposite colors.

    -1 exactly when the edge is horizontal with the black square on the left.
    """
    (ax, ay), (bx, by) = cell_a, cell_b
    if abs(ax - bx) + abs(ay - by) != 1:
        raise ValueError(f"cells {cell_a} and {cell_b} are not adjacent")
    if cell_is_black(ax, ay) == cell_is_black(bx, by):
        raise ValueError(f"cells {cell_a} and {cell_b} have the same color")
    black, white = (cell_a, cell_b) if cell_is_black(ax, ay) else (cell_b, cell_a)
    return -1 if white == (black[0] + 1, black[1]) else 1


@dataclass(frozen=True)
class KasteleynMatrix:
    """m x m matrix over black/white square numbers; entries are monomial lists.

    entries[(i, j)] collects the signed q-monomials of all edges joining black
    i to white j (0-based); thin tori can contribute several monomials to one
    entry.  Every exponent pair lies in {-1, 0, 1}^2.
    """

    lattice: Lattice
    m: int
    entries: tuple[tuple[tuple[int, int], tuple[Monomial, ...]], ...]

    def __post_init__(self):
        rows, cols, signs, e0s, e1s = [], [], [], [], []
        for (i, j), monos in self.entries:
            for s, e0, e1 in monos:
                rows.append(i)
                cols.append(j)
                signs.append(s)
                e0s.append(e0)
                e1s.append(e1)
        for name, vals in (("_rows", rows), ("_cols", cols), ("_signs", signs),
                           ("_e0s", e0s), ("_e1s", e1s)):
            object.__setattr__(self, name, np.array(vals, dtype=np.int64))

    def entry_map(self) -> dict[tuple[int, int], tuple[Monomial, ...]]:
        return dict(self.entries)

    def evaluate(self, q0: complex, q1: complex) -> np.ndarray:
        M = np.zeros((self.m, self.m), dtype=complex)
        weights = self._signs * complex(q0) ** self._e0s * complex(q1) ** self._e1s
        np.add.at(M, (self._rows, self._cols), weights)
        return M

    def adjacency_counts(self) -> np.ndarray:
        """Number of dual-graph edges (dominoes) joining each black/white pair."""
        A = np.zeros((self.m, self.m), dtype=int)
        for (i, j), monos in self.entries:
            A[i, j] = len(monos)
        return A


def build_kasteleyn(L: Lattice) -> KasteleynMatrix:
    """Kasteleyn matrix over the paired black/white numbering of the domain."""
    dom = FundamentalDomain(L)
    black_no, white_no, m = dom.numbering()
    acc: dict[tuple[int, int], list[Monomial]] = {}
    for (bi, bj), bnum in black_no.items():
        for dx, dy in ((0, 1), (1, 0), (0, -1), (-1, 0)):
            x, y = bi + dx, bj + dy
            i, j, a, b = L.reduce_cell_shift(x, y)
            wnum = white_no[(i, j)]
            sign = kasteleyn_sign((bi, bj), (x, y))
            acc.setdefault((bnum - 1, wnum - 1), []).append((sign, -b, a))
    entries = tuple(sorted((k, tuple(v)) for k, v in acc.items()))
    return KasteleynMatrix(L, m, entries)


def det_kd_numeric(K: KasteleynMatrix, q0: complex, q1: complex) -> complex:
    """Dense numerical determinant of the weighted matrix at given q's."""
    return complex(np.linalg.det(K.evaluate(q0, q1)))


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly2:
    """Sparse integer Laurent polynomial in q0, q1, keyed by exponent pairs."""

    def __init__(self, terms: dict[tuple[int, int], int]):
        self.terms = {k: int(c) for k, c in terms.items() if c != 0}

    def coeff(self, i: int, j: int) -> int:
        return self.terms.get((i, j), 0)

    def support(self):
        return sorted(self.terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly2) and self.terms == other.terms

    def __neg__(self):
        return LaurentPoly2({k: -c for k, c in self.terms.items()})

    def __repr__(self):
        return f"LaurentPoly2({self.terms!r})"

    def evaluate(self, q0: complex, q1: complex) -> complex:
        return sum(c * q0**i * q1**j for (i, j), c in self.terms.items())

    def evaluate_int(self, q0: int, q1: int) -> int:
        """Exact evaluation at nonzero integers (q0, q1 in {-1, 1} typically)."""
        total = 0
        for (i, j), c in self.terms.items():
            v = Fraction(c) * Fraction(q0) ** i * Fraction(q1) ** j
            total += v
        assert total.denominator == 1
        return int(total)

    def corners(self) -> tuple[int, int, int, int]:
        """(p(1,1), p(1,-1), p(-1,1), p(-1,-1)), exactly."""
        return (
            self.evaluate_int(1, 1),
            self.evaluate_int(1, -1),
            self.evaluate_int(-1, 1),
            self.evaluate_int(-1, -1),
        )

    def abs_sum(self) -> int:
        return sum(abs(c) for c in self.terms.values())

    def to_json(self) -> str:
        items = [
            {"i": i, "j": j, "c": str(c)} for (i, j), c in sorted(self.terms.items())
        ]
        return json.dumps({"terms": items})

    @classmethod
    def from_json(cls, s: str) -> "LaurentPoly2":
        d = json.loads(s)
        return cls({(t["i"], t["j"]): int(t["c"]) for t in d["terms"]})

    def pretty(self) -> str:
        """Human-readable form: constant first, then by |i| + |j|."""
        if not self.terms:
            return "0"
        def mono(i, j):
            parts = []
            if i:
                parts.append(f"q0^{i}" if i != 1 else "q0")
            if j:
                parts.append(f"q1^{j}" if j != 1 else "q1")
            return " ".join(parts)
        keys = sorted(self.terms, key=lambda k: (abs(k[0]) + abs(k[1]), k))
        out = []
        for i, j in keys:
            c = self.terms[(i, j)]
            body = mono(i, j)
            mag = abs(c)
            coeftxt = str(mag) if (mag != 1 or not body) else ""
            term = (coeftxt + (" " if coeftxt and body else "") + body).strip()
            if not out:
                out.append(term if c > 0 else f"-{term}")
            else:
                out.append(("+ " if c > 0 else "- ") + term)
        return " ".join(out)


# ---------------------------------------------------------------------------
# Exponent bounds and flux <-> exponent correspondence


def exponent_bounds(L: Lattice) -> tuple[int, int]:
    """Safe bounds (B0, B1) with one slack slot: |i0| < B0 is not required,
    but the recovered support must avoid |i0| = B0 and |i1| = B1."""
    return L.x0 // 2 + 1, (L.x1 + L.y1) // 2 + 1


def flux_to_exponents(L: Lattice, flux: Flux) -> tuple[int, int]:
    """Monomial exponents that tilings of this flux contribute to det(K)."""
    i0 = flux.two_a0 // 2
    i1 = flux.two_a1 // 2 if L.y1 % 2 == 0 else (flux.two_a1 - 1) // 2
    return i0, i1


def exponents_to_flux(L: Lattice, i0: int, i1: int) -> Flux:
    return Flux(2 * i0, 2 * i1 + L.y1 % 2, L)


# ---------------------------------------------------------------------------
# Determinant as a Laurent polynomial


def _grid_values(K: KasteleynMatrix, N0: int, N1: int, use_spectral: bool) -> np.ndarray:
    L = K.lattice
    C = np.zeros((N0, N1), dtype=complex)
    for a in range(N0):
        u0 = a / N0
        for b in range(N1):
            u1 = b / N1
            if use_spectral:
                C[a, b] = spectral.det_kd_spectral(L, u0, u1)
            else:
                q0 = np.exp(2j * np.pi * u0)
                q1 = np.exp(2j * np.pi * u1)
                C[a, b] = det_kd_numeric(K, q0, q1)
    return C


def det_laurent_dft(
    K: KasteleynMatrix, use_spectral: bool = True, residual_tol: float = 1e-6
) -> LaurentPoly2:
    """Recover det(K) by sampling on a unit grid and inverse Fourier transform.

    Raises ResidualTooLarge when rounding to integers is not clearly safe or
    when mass appears on the boundary of the exponent window.
    """
    L = K.lattice
    B0, B1 = exponent_bounds(L)
    N0, N1 = 2 * B0 + 1, 2 * B1 + 1
    # coefficient of q0^e0 q1^e1 is the forward transform of the sample grid
    F = np.fft.fft2(_grid_values(K, N0, N1, use_spectral)) / (N0 * N1)
    terms = {}
    resid = 0.0
    for k0 in range(N0):
        e0 = k0 if k0 <= B0 else k0 - N0
        for k1 in range(N1):
            e1 = k1 if k1 <= B1 else k1 - N1
            c = F[k0, k1]
            r = round(c.real)
            resid = max(resid, abs(c - r))
            if r and (abs(e0) == B0 or abs(e1) == B1):
                raise ResidualTooLarge(
                    f"unexpected coefficient {r} on the exponent window boundary {(e0, e1)}"
                )
            if r:
                terms[(e0, e1)] = r
    if resid >= residual_tol:
        raise ResidualTooLarge(f"rounding residual {resid:.3e} >= {residual_tol:.0e}")
    return LaurentPoly2(terms)


def _bareiss_det(M: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    M = [row[:] for row in M]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            rowi = M[i]
            rowk = M[k]
            lik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pivot - lik * rowk[j]) // prev
            rowi[k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def _newton_coeffs(xs: list[int], vs: list[Fraction]) -> list[Fraction]:
    """Coefficients (ascending) of the polynomial interpolating (xs, vs)."""
    n = len(xs)
    divided = [Fraction(v) for v in vs]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level])
    # Horner expansion of the Newton form: p = d0 + (x - x0)(d1 + (x - x1)(...))
    coeffs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        new = [Fraction(0)] * n
        for d in range(n - 1):
            new[d + 1] += coeffs[d]
            new[d] -= xs[i] * coeffs[d]
        new[0] += divided[i]
        coeffs = new
    return coeffs


def det_laurent_exact(K: KasteleynMatrix) -> LaurentPoly2:
    """Exact determinant through integer evaluations and rational interpolation.

    Each row is premultiplied by q0*q1 so all entries become genuine integer
    polynomials; the matrix is evaluated at small positive integer points, the
    bivariate polynomial is interpolated exactly, and the q0^m q1^m factor is
    divided back off at the end.
    """
    L = K.lattice
    m = K.m
    B0, B1 = exponent_bounds(L)
    lo0, hi0 = max(0, m - B0), min(2 * m, m + B0)
    lo1, hi1 = max(0, m - B1), min(2 * m, m + B1)
    n0, n1 = hi0 - lo0 + 1, hi1 - lo1 + 1
    xs = list(range(1, n0 + 1))
    ys = list(range(1, n1 + 1))
    entry_map = K.entry_map()

    def int_matrix(x: int, y: int) -> list[list[int]]:
        M = [[0] * m for _ in range(m)]
        for (i, j), monos in entry_map.items():
            M[i][j] = sum(s * x ** (e0 + 1) * y ** (e1 + 1) for s, e0, e1 in monos)
        return M

    # interpolate in x for each y, on values divided by x^lo0
    per_y: list[list[Fraction]] = []
    for y in ys:
        vals = [Fraction(_bareiss_det(int_matrix(x, y)), x**lo0) for x in xs]
        per_y.append(_newton_coeffs(xs, vals))
    terms: dict[tuple[int, int], int] = {}
    for d0 in range(n0):
        vals = [Fraction(per_y[t][d0], ys[t] ** lo1) for t in range(n1)]
        cy = _newton_coeffs(ys, vals)
        for d1 in range(n1):
            c = cy[d1]
            if c:
                assert c.denominator == 1, "interpolated coefficient must be integral"
                e0, e1 = d0 + lo0 - m, d1 + lo1 - m
                assert abs(e0) < B0 and abs(e1) < B1, "support outside safe window"
                terms[(e0, e1)] = int(c)
    return LaurentPoly2(terms)


def det_laurent(K: KasteleynMatrix, method: str = "auto") -> LaurentPoly2:
    """Exact Laurent-polynomial determinant of a torus Kasteleyn matrix.

    method: 'dft' (numeric sampling + integer rounding, checked), 'exact'
    (integer interpolation), or 'auto' (dft, falling back to exact).
    """
    if method == "dft":
        return det_laurent_dft(K)
    if method == "exact":
        return det_laurent_exact(K)
    if method == "auto":
        try:
            return det_laurent_dft(K)
        except ResidualTooLarge:
            return det_laurent_exact(K)
    raise ValueError(f"unknown method {method!r}")


def det_laurent_mp(L: Lattice, dps: int | None = None, residual_tol: float = 1e-6) -> LaurentPoly2:
    """High-precision variant of the DFT recovery, for large tori.

    Uses the spectral closed form under mpmath so that coefficients far beyond
    double precision still round safely to integers.
    """
    if dps is None:
        dps = max(40, int(0.13 * L.area) + 25)
    B0, B1 = exponent_bounds(L)
    N0, N1 = 2 * B0 + 1, 2 * B1 + 1
    with mpmath.workdps(dps):
        grid = [
            [
                spectral.det_kd_spectral_mp(
                    L, mpmath.mpf(a) / N0, mpmath.mpf(b) / N1
                )
                for b in range(N1)
            ]
            for a in range(N0)
        ]
        # separable inverse DFT
        w0 = [[mpmath.expjpi(-2 * mpmath.mpf(a * k) / N0) for a in range(N0)] for k in range(N0)]
        w1 = [[mpmath.expjpi(-2 * mpmath.mpf(b * k) / N1) for b in range(N1)] for k in range(N1)]
        half = [
            [sum(w0[k0][a] * grid[a][b] for a in range(N0)) for b in range(N1)]
            for k0 in range(N0)
        ]
        terms = {}
        resid = mpmath.mpf(0)
        scale = mpmath.mpf(N0 * N1)
        for k0 in range(N0):
            e0 = k0 if k0 <= B0 else k0 - N0
            for k1 in range(N1):
                e1 = k1 if k1 <= B1 else k1 - N1
                c = sum(w1[k1][b] * half[k0][b] for b in range(N1)) / scale
                r = int(mpmath.nint(c.real))
                resid = max(resid, abs(c - r))
                if r and (abs(e0) == B0 or abs(e1) == B1):
                    raise ResidualTooLarge(
                        f"coefficient {r} on exponent window boundary {(e0, e1)}"
                    )
                if r:
                    terms[(e0, e1)] = r
        if resid >= residual_tol:
            raise ResidualTooLarge(f"mp rounding residual {mpmath.nstr(resid)} too large")
    return LaurentPoly2(terms)


# ---------------------------------------------------------------------------
# Counting through the determinant


def count_by_flux_via_det(L: Lattice, poly: LaurentPoly2 | None = None) -> dict[Flux, int]:
    """Census of tilings per flux as |coefficient| of the matching monomial."""
    if poly is None:
        poly = det_laurent(build_kasteleyn(L))
    return {
        exponents_to_flux(L, i, j): abs(c) for (i, j), c in sorted(poly.terms.items())
    }


def _class_signs(p: LaurentPoly2):
    """Sign per exponent parity class; None where the class is empty."""
    signs: dict[tuple[int, int], int] = {}
    witness: dict[tuple[int, int], tuple[int, int]] = {}
    for (i, j), c in sorted(p.terms.items()):
        cls = (i % 2, j % 2)
        s = 1 if c > 0 else -1
        if cls in signs and signs[cls] != s:
            raise InconsistentSigns(
                f"monomials {witness[cls]} and {(i, j)} share a parity class with opposite signs"
            )
        signs.setdefault(cls, s)
        witness.setdefault(cls, (i, j))
    return signs


def total_from_corners(p: LaurentPoly2) -> int:
    """Total tiling count as a corner combination of the determinant polynomial.

    Solves the 4x4 sign system for constants s_ab from the observed parity-class
    signs, then returns sum s_ab * p(+-1, +-1).
    """
    observed = _class_signs(p)
    if not observed:
        return 0
    values = list(observed.values())
    majority = 1 if values.count(1) >= values.count(-1) else -1
    if len(observed) == 4 and values.count(majority) == 2:
        raise InconsistentSigns("parity-class signs split 2-2; no odd-one-out pattern")
    sigma = {cls: observed.get(cls, majority) for cls in ((0, 0), (0, 1), (1, 0), (1, 1))}
    s00, s01, s10, s11 = (
        Fraction(sigma[(0, 0)] + sigma[(0, 1)] + sigma[(1, 0)] + sigma[(1, 1)], 4),
        Fraction(sigma[(0, 0)] - sigma[(0, 1)] + sigma[(1, 0)] - sigma[(1, 1)], 4),
        Fraction(sigma[(0, 0)] + sigma[(0, 1)] - sigma[(1, 0)] - sigma[(1, 1)], 4),
        Fraction(sigma[(0, 0)] - sigma[(0, 1)] - sigma[(1, 0)] + sigma[(1, 1)], 4),
    )
    c_pp, c_pm, c_mp, c_mm = p.corners()
    total = s00 * c_pp + s01 * c_pm + s10 * c_mp + s11 * c_mm
    assert total.denominator == 1
    return int(total)


@dataclass(frozen=True)
class SignPatternReport:
    ok: bool
    class_signs: dict
    odd_class: tuple[int, int] | None
    detail: str


def sign_pattern_check(p: LaurentPoly2, L: Lattice) -> SignPatternReport:
    """Verify signs depend only on exponent parity, with one odd-one-out class.

    Equivalently: fluxes differing by an element of 2L* share a sign, and the
    sign change along any line of a flux-connecting basis is constant while
    adjacent parallel lines alternate.
    """
    try:
        signs = _class_signs(p)
    except InconsistentSigns as exc:
        raise PatternViolation(str(exc)) from exc
    if len(signs) == 4:
        values = list(signs.values())
        plus, minus = values.count(1), values.count(-1)
        if 0 < min(plus, minus) and min(plus, minus) != 1:
            raise PatternViolation(f"class signs {signs} split 2-2")
        if min(plus, minus) == 0:
            raise PatternViolation(f"all four parity classes share one sign: {signs}")
        odd = [cls for cls, s in signs.items() if values.count(s) == 1][0]
        return SignPatternReport(True, signs, odd, "odd-one-out pattern holds")
    return SignPatternReport(True, signs, None, "fewer than four classes populated")
