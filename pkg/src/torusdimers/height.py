"""Height functions on the square lattice and on tori.

Conventions: the square [0,1]^2 is black; every lattice edge is oriented so
that its black square lies on the right; traversing an edge along its
orientation raises the height by 1 when no domino crosses it and lowers it by
3 when one does.  With base value h(0,0) = 0, heights are congruent mod 4 to
the prescription function below.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import FluxOutsideQ
from .lattice import Flux, Lattice
from .tilings import Tiling


def phi_prescription(x: int, y: int) -> int:
    """Residue mod 4 that every height function takes at the vertex (x, y)."""
    if x % 2 == 0:
        return 0 if y % 2 == 0 else 1
    return 3 if y % 2 == 0 else 2


def _edge_up_oriented(x: int, y: int) -> bool:
    """Orientation of the vertical edge (x,y)-(x,y+1): up iff its east square is black."""
    return (x - y) % 2 == 0


def _edge_east_oriented(x: int, y: int) -> bool:
    """Orientation of the horizontal edge (x,y)-(x+1,y): east iff its south square is black."""
    return (x + y) % 2 == 1


def hmax_plane(v: tuple[int, int]) -> int:
    """Maximal height at v over plane height functions vanishing at the origin.

    Equals the length of the shortest orientation-respecting alternating path
    from the origin: 2*max(|x|,|y|) when the coordinates share parity.  Mixed
    parity forces one more vertical than horizontal step, which gives the
    closed form below; the BFS oracle hmax_plane_bfs checks both branches.
    """
    x, y = v
    if (x - y) % 2 == 0:
        return 2 * max(abs(x), abs(y))
    # alternating path starting vertically: #V = #H + 1, #H >= max(|x|, |y|-1)
    n_h = max(abs(x), abs(y) - 1)
    if (n_h - x) % 2:
        n_h += 1
    return 2 * n_h + 1


def hmin_plane(v: tuple[int, int]) -> int:
    """Minimal height at v; mirror of hmax_plane with reversed orientation.

    Reversed paths leave the origin horizontally, so for mixed parity the roles
    of the two coordinates swap: hmin(v) = -hmax(transpose(v)).
    """
    x, y = v
    if (x - y) % 2 == 0:
        return -2 * max(abs(x), abs(y))
    return -hmax_plane((y, x))


def _alternating_bfs(v: tuple[int, int], respect: bool) -> int:
    """Length of the shortest path 0 -> v whose steps respect (or reverse) orientation.

    Steps out of a vertex are vertical when the vertex parities agree and
    horizontal otherwise (reversed when reversing orientation), so paths
    alternate automatically.  The frontier never needs to leave
    ||.||_inf <= ||v||_inf + 2.
    """
    tx, ty = v
    if (tx, ty) == (0, 0):
        return 0
    bound = max(abs(tx), abs(ty)) + 2
    dist = {(0, 0): 0}
    q = deque([(0, 0)])
    while q:
        x, y = q.popleft()
        d = dist[(x, y)]
        vertical = (x - y) % 2 == 0
        if not respect:
            vertical = not vertical
        steps = ((0, 1), (0, -1)) if vertical else ((1, 0), (-1, 0))
        for dx, dy in steps:
            nxt = (x + dx, y + dy)
            if nxt == (tx, ty):
                return d + 1
            if max(abs(nxt[0]), abs(nxt[1])) <= bound and nxt not in dist:
                dist[nxt] = d + 1
                q.append(nxt)
    raise AssertionError("alternating BFS target unreachable inside its window")


def hmax_plane_bfs(v: tuple[int, int]) -> int:
    """BFS evaluation of the maximal height, used as an oracle for the closed form."""
    return _alternating_bfs(v, respect=True)


def hmin_plane_bfs(v: tuple[int, int]) -> int:
    return -_alternating_bfs(v, respect=False)


def toroidal_hmax(L: Lattice, flux: Flux, w: tuple[int, int]) -> int:
    """Value at w of the maximal toroidal height function with the given flux.

    Computed as min over lattice points v of 4<flux, v> + hmax_plane(w - v),
    over a window large enough that the true argmin is interior.
    """
    if flux.one_norm() > Fraction(1, 2):
        raise FluxOutsideQ(f"flux {flux} lies outside the diamond; no maximum exists")
    wx, wy = w
    window = max(abs(wx), abs(wy)) + 4 * L.area
    best = None
    best_interior = None
    bmax = window // L.y1 + 1
    for b in range(-bmax, bmax + 1):
        vy = b * L.y1
        if abs(vy) > window:
            continue
        amin = (-window - b * L.x1) // L.x0
        amax = (window - b * L.x1) // L.x0 + 1
        for a in range(amin, amax + 1):
            vx = a * L.x0 + b * L.x1
            if abs(vx) > window:
                continue
            val = 2 * (a * flux.two_a0 + b * flux.two_a1) + hmax_plane((wx - vx, wy - vy))
            if best is None or val < best:
                best = val
            if abs(vx) < window and abs(vy) < window and (best_interior is None or val < best_interior):
                best_interior = val
    # for boundary fluxes the minimum repeats along a diagonal family, so ties
    # with the window shell are fine; the interior must not be strictly beaten
    assert best is not None and best_interior == best, "window does not localize the minimum"
    return best


@dataclass(frozen=True)
class HeightField:
    """Heights on one fundamental domain plus the two quasiperiods.

    base[j * x0 + i] is the height at vertex (i, j) for 0 <= i < x0,
    0 <= j < y1; everywhere else the value follows from
    h(v + a*v0 + b*v1) = h(v) + a*quasi0 + b*quasi1.
    """

    lattice: Lattice
    base: tuple[int, ...]
    quasi0: int
    quasi1: int

    def value(self, x: int, y: int) -> int:
        L = self.lattice
        b = y // L.y1
        j = y - b * L.y1
        xs = x - b * L.x1
        a = xs // L.x0
        i = xs - a * L.x0
        return self.base[j * L.x0 + i] + a * self.quasi0 + b * self.quasi1

    def flux(self) -> Flux:
        return Flux(self.quasi0 // 2, self.quasi1 // 2, self.lattice)

    def to_json(self) -> str:
        L = self.lattice
        grid = [
            [self.base[j * L.x0 + i] for i in range(L.x0)] for j in range(L.y1)
        ]
        return json.dumps(
            {
                "lattice": {"x0": L.x0, "x1": L.x1, "y1": L.y1},
                "grid": grid,
                "quasi0": self.quasi0,
                "quasi1": self.quasi1,
            },
            sort_keys=True,
        )

    def is_valid(self) -> bool:
        """Base-point, mod-4, edge-increment and quasiperiod checks."""
        L = self.lattice
        if self.value(0, 0) != 0:
            return False
        if self.quasi0 % 4 != phi_prescription(*L.v0) % 4:
            return False
        if self.quasi1 % 4 != phi_prescription(*L.v1) % 4:
            return False
        for j in range(L.y1):
            for i in range(L.x0):
                h = self.value(i, j)
                if h % 4 != phi_prescription(i, j):
                    return False
                for dx, dy in ((1, 0), (0, 1)):
                    dh = self.value(i + dx, j + dy) - h
                    if dh not in (1, -1, 3, -3):
                        return False
        return True


def height_from_tiling(t: Tiling) -> HeightField:
    """The height function of a tiling, base value 0 at the origin."""
    L = t.lattice
    x0, y1 = L.x0, L.y1
    dirs = t.dirs

    def crossed_vertical(x, y):  # edge (x,y)-(x,y+1) crossed by a horizontal domino
        i, j = L.reduce_cell(x - 1, y)
        return dirs[L.cell_index(i, j)] == "E"

    def crossed_horizontal(x, y):  # edge (x,y)-(x+1,y) crossed by a vertical domino
        i, j = L.reduce_cell(x, y - 1)
        return dirs[L.cell_index(i, j)] == "N"

    W, H = x0 + 1, y1 + 1
    h = [None] * (W * H)
    h[0] = 0
    q = deque([(0, 0)])
    while q:
        x, y = q.popleft()
        cur = h[y * W + x]
        if y + 1 < H and h[(y + 1) * W + x] is None:
            c = crossed_vertical(x, y)
            d = (-3 if c else 1) if _edge_up_oriented(x, y) else (3 if c else -1)
            h[(y + 1) * W + x] = cur + d
            q.append((x, y + 1))
        if y > 0 and h[(y - 1) * W + x] is None:
            c = crossed_vertical(x, y - 1)
            d = (-3 if c else 1) if _edge_up_oriented(x, y - 1) else (3 if c else -1)
            h[(y - 1) * W + x] = cur - d
            q.append((x, y - 1))
        if x + 1 < W and h[y * W + x + 1] is None:
            c = crossed_horizontal(x, y)
            d = (-3 if c else 1) if _edge_east_oriented(x, y) else (3 if c else -1)
            h[y * W + x + 1] = cur + d
            q.append((x + 1, y))
        if x > 0 and h[y * W + x - 1] is None:
            c = crossed_horizontal(x - 1, y)
            d = (-3 if c else 1) if _edge_east_oriented(x - 1, y) else (3 if c else -1)
            h[y * W + x - 1] = cur - d
            q.append((x - 1, y))
    quasi0 = h[x0]  # vertex (x0, 0)
    quasi1 = h[y1 * W + L.x1]  # vertex (x1, y1)
    base = tuple(h[j * W + i] for j in range(y1) for i in range(x0))
    return HeightField(L, base, quasi0, quasi1)


def flux_of_tiling(t: Tiling) -> Flux:
    """Flux read off the quasiperiods of the tiling's height function."""
    hf = height_from_tiling(t)
    return hf.flux()


def tiling_from_height(hf: HeightField) -> Tiling:
    """Recover the tiling whose erased edges are the height jumps of size 3."""
    L = hf.lattice
    letters = []
    for j in range(L.y1):
        for i in range(L.x0):
            found = None
            # a domino covers the cell iff the corresponding side has |dh| = 3
            sides = {
                "W": abs(hf.value(i, j + 1) - hf.value(i, j)),
                "E": abs(hf.value(i + 1, j + 1) - hf.value(i + 1, j)),
                "S": abs(hf.value(i + 1, j) - hf.value(i, j)),
                "N": abs(hf.value(i + 1, j + 1) - hf.value(i, j + 1)),
            }
            for d, jump in sides.items():
                if jump == 3:
                    if found is not None:
                        raise ValueError("height field crosses two sides of one square")
                    found = d
            if found is None:
                raise ValueError("height field crosses no side of a square")
            letters.append(found)
    return Tiling(L, "".join(letters))


def pointwise_min(h1: HeightField, h2: HeightField) -> HeightField:
    """Pointwise minimum of two same-flux height fields (again a height field)."""
    if h1.lattice != h2.lattice:
        raise ValueError("height fields must share a lattice")
    if (h1.quasi0, h1.quasi1) != (h2.quasi0, h2.quasi1):
        raise ValueError("pointwise minimum needs equal quasiperiods")
    base = tuple(min(a, b) for a, b in zip(h1.base, h2.base))
    return HeightField(h1.lattice, base, h1.quasi0, h1.quasi1)
