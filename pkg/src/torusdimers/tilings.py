"""Tilings of quadriculated tori: enumeration, flips, staircases, cycles.

A tiling is stored as one direction letter per fundamental-domain square
(row-major): the letter says where that square's partner lies, with wrap-around
through the lattice identifications.  On thin tori two squares can be joined by
several distinct dominoes (different wraps), which the (square, direction)
representation keeps apart.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterator, Optional

import numpy as np

from .errors import AreaCapExceeded, InvalidFlipSite
from .lattice import Flux, Lattice, cell_is_black

DIRS = "NESW"
OPP = {"N": "S", "S": "N", "E": "W", "W": "E"}
STEP = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}

DEFAULT_AREA_CAP = 40


def _area_cap() -> int:
    return int(os.environ.get("TORUS_AREA_CAP", DEFAULT_AREA_CAP))


@lru_cache(maxsize=64)
def neighbor_tables(L: Lattice) -> dict[str, tuple[int, ...]]:
    """For each direction, the reduced fundamental-domain index of each cell's neighbor."""
    tabs = {}
    for d, (dx, dy) in STEP.items():
        t = []
        for j in range(L.y1):
            for i in range(L.x0):
                ii, jj = L.reduce_cell(i + dx, j + dy)
                t.append(L.cell_index(ii, jj))
        tabs[d] = tuple(t)
    return tabs


@dataclass(frozen=True)
class Tiling:
    """A perfect matching of the torus, one partner direction per square."""

    lattice: Lattice
    dirs: str

    def __post_init__(self):
        if len(self.dirs) != self.lattice.area:
            raise ValueError("direction string length must equal the area")

    def partner(self, cell: int) -> int:
        return neighbor_tables(self.lattice)[self.dirs[cell]][cell]

    def is_valid(self) -> bool:
        tabs = neighbor_tables(self.lattice)
        for c, d in enumerate(self.dirs):
            if d not in OPP:
                return False
            p = tabs[d][c]
            if self.dirs[p] != OPP[d] or tabs[OPP[d]][p] != c:
                return False
        return True

    def __str__(self) -> str:
        return self.dirs

    @classmethod
    def from_string(cls, L: Lattice, s: str) -> "Tiling":
        t = cls(L, s)
        if not t.is_valid():
            raise ValueError("direction string is not an involutive perfect matching")
        return t


def _enumerate_matchings(cand: list[tuple[tuple[str, int, str], ...]], n: int) -> list[str]:
    """All perfect matchings over a candidate table; deterministic DFS order.

    cand[c] lists (direction, partner, partner_back_direction) options for cell c,
    already in N, E, S, W order.
    """
    dirs = [""] * n
    covered = [False] * n
    out: list[str] = []

    def rec(lo: int):
        while lo < n and covered[lo]:
            lo += 1
        if lo == n:
            out.append("".join(dirs))
            return
        covered[lo] = True
        for d, p, db in cand[lo]:
            if not covered[p]:
                covered[p] = True
                dirs[lo] = d
                dirs[p] = db
                rec(lo + 1)
                covered[p] = False
        covered[lo] = False

    rec(0)
    return out


@lru_cache(maxsize=1)
def _tiling_matrix(L: Lattice) -> np.ndarray:
    """All tilings as one uint8 matrix of direction letters, row per tiling.

    Thin tori have millions of tilings, so rows go straight into one buffer
    rather than through per-tiling strings.
    """
    tabs = neighbor_tables(L)
    n = L.area
    cand = [
        tuple((ord(d), tabs[d][c], ord(OPP[d])) for d in DIRS) for c in range(n)
    ]
    cur = bytearray(n)
    covered = [False] * n
    out = bytearray()

    def rec(lo: int):
        while lo < n and covered[lo]:
            lo += 1
        if lo == n:
            out.extend(cur)
            return
        covered[lo] = True
        for d, p, db in cand[lo]:
            if not covered[p]:
                covered[p] = True
                cur[lo] = d
                cur[p] = db
                rec(lo + 1)
                covered[p] = False
        covered[lo] = False

    rec(0)
    return np.frombuffer(out, dtype=np.uint8).reshape(-1, n)


def enumerate_tilings(L: Lattice, cap: Optional[int] = None) -> list[Tiling]:
    """All tilings of the torus, deterministically ordered.

    Raises AreaCapExceeded when the fundamental domain is larger than the cap
    (default 40, overridable through TORUS_AREA_CAP).
    """
    cap = _area_cap() if cap is None else cap
    if L.area > cap:
        raise AreaCapExceeded(f"area {L.area} exceeds cap {cap}")
    mat = _tiling_matrix(L)
    return [Tiling(L, row.tobytes().decode()) for row in mat]


def count_tilings(L: Lattice, cap: Optional[int] = None) -> int:
    cap = _area_cap() if cap is None else cap
    if L.area > cap:
        raise AreaCapExceeded(f"area {L.area} exceeds cap {cap}")
    return len(_tiling_matrix(L))


# ---------------------------------------------------------------------------
# Flux by counting crossing dominoes


def _crossing_weights(L: Lattice):
    """Index/weight vectors so that fluxes of many tilings vectorize.

    Doubled pairings: two_a0 = 2 * (signed vertical dominoes crossing the bottom
    side); two_a1 = sum of the signed crossing counts of the two L-shaped paths
    from the origin to v1 (their average is the pairing).
    """
    x0, x1, y1 = L.x0, L.x1, L.y1
    idx = L.cell_index
    terms_a0 = []  # (cell, letter, weight)
    for x in range(x0):
        terms_a0.append((idx(x, 0), "S", 2 if x % 2 == 0 else -2))
    terms_a1 = []
    for x in range(x1):  # path A: east along y=0
        terms_a1.append((idx(x, 0), "S", 1 if x % 2 == 0 else -1))
    for y in range(y1):  # path A: north along x=x1
        i, j = L.reduce_cell(x1, y)
        terms_a1.append((idx(i, j), "W", 1 if (x1 + y) % 2 == 1 else -1))
    for y in range(y1):  # path B: north along x=0
        terms_a1.append((idx(0, y), "W", 1 if y % 2 == 1 else -1))
    for x in range(x1):  # path B: east along y=y1
        i, j = L.reduce_cell(x, y1 - 1)
        terms_a1.append((idx(i, j), "N", 1 if (x + y1) % 2 == 0 else -1))
    return terms_a0, terms_a1


def flux_by_crossings(t: Tiling) -> Flux:
    """Flux of a tiling by signed counting of boundary-crossing dominoes."""
    terms_a0, terms_a1 = _crossing_weights(t.lattice)
    s0 = sum(w for c, d, w in terms_a0 if t.dirs[c] == d)
    s1 = sum(w for c, d, w in terms_a1 if t.dirs[c] == d)
    return Flux(s0, s1, t.lattice)


@lru_cache(maxsize=1)
def _census_data(L: Lattice):
    """(tiling matrix, {flux: index array}) for all tilings of the lattice."""
    mat = _tiling_matrix(L)
    n = L.area
    if not len(mat):
        return mat, {}
    two_a = np.zeros((len(mat), 2), dtype=np.int32)
    for col, terms in enumerate(_crossing_weights(L)):
        for c, d, w in terms:
            two_a[:, col] += np.where(mat[:, c] == ord(d), np.int32(w), np.int32(0))
    groups: dict[Flux, np.ndarray] = {}
    keys = two_a[:, 0].astype(np.int64) * (8 * n + 1) + two_a[:, 1]
    order = np.argsort(keys, kind="stable").astype(np.int64)
    sorted_keys = keys[order]
    boundaries = np.flatnonzero(np.diff(sorted_keys)) + 1
    for chunk in np.split(order, boundaries):
        f = Flux(int(two_a[chunk[0], 0]), int(two_a[chunk[0], 1]), L)
        groups[f] = chunk
    return mat, groups


def tilings_by_flux(L: Lattice, cap: Optional[int] = None) -> dict[Flux, int]:
    """Census of tilings per flux value."""
    cap = _area_cap() if cap is None else cap
    if L.area > cap:
        raise AreaCapExceeded(f"area {L.area} exceeds cap {cap}")
    _, groups = _census_data(L)
    return {f: len(ix) for f, ix in sorted(groups.items())}


def census_to_json(census: dict[Flux, int]) -> str:
    import json

    return json.dumps({str(f): c for f, c in sorted(census.items())}, sort_keys=True)


# ---------------------------------------------------------------------------
# Flips


@dataclass(frozen=True, order=True)
class FlipSite:
    """A flippable 2x2 window, anchored at its lower-left cell.

    kind 'H' means the window currently holds two horizontal dominoes,
    'V' two vertical ones.
    """

    cell: int
    kind: str


def find_flips(t: Tiling) -> list[FlipSite]:
    """All 2x2 windows (wrap included) tiled by two parallel dominoes."""
    tabs = neighbor_tables(t.lattice)
    nN, nE = tabs["N"], tabs["E"]
    d = t.dirs
    sites = []
    for c in range(t.lattice.area):
        if d[c] == "E" and d[nN[c]] == "E":
            sites.append(FlipSite(c, "H"))
        elif d[c] == "N" and d[nE[c]] == "N":
            sites.append(FlipSite(c, "V"))
    return sites


def apply_flip(t: Tiling, site: FlipSite) -> Tiling:
    """Replace the window's parallel dominoes by the perpendicular pair."""
    tabs = neighbor_tables(t.lattice)
    c = site.cell
    cn, ce = tabs["N"][c], tabs["E"][c]
    cne = tabs["E"][cn]
    d = list(t.dirs)
    if site.kind == "H":
        if not (t.dirs[c] == "E" and t.dirs[cn] == "E"):
            raise InvalidFlipSite(f"no horizontal pair at cell {c}")
        d[c], d[cn], d[ce], d[cne] = "N", "S", "N", "S"
    elif site.kind == "V":
        if not (t.dirs[c] == "N" and t.dirs[ce] == "N"):
            raise InvalidFlipSite(f"no vertical pair at cell {c}")
        d[c], d[ce], d[cn], d[cne] = "E", "W", "E", "W"
    else:
        raise InvalidFlipSite(f"unknown flip kind {site.kind!r}")
    return Tiling(t.lattice, "".join(d))


@dataclass(frozen=True)
class FlipGraph:
    """Connectivity report for the flip moves among tilings of one flux."""

    lattice: Lattice
    flux: Flux
    nodes: int
    edges: int
    components: int
    isolated: int

    @property
    def connected(self) -> bool:
        return self.components <= 1

    @property
    def edgeless(self) -> bool:
        return self.edges == 0


_CODE = np.zeros(128, dtype=np.uint8)
for _k, _d in enumerate(DIRS):
    _CODE[ord(_d)] = _k


def _pack_rows(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pack 2-bit direction codes into two uint64 words per row (up to 64 cells)."""
    n = codes.shape[1]
    assert n <= 64, "packing supports fundamental domains up to 64 squares"
    w0 = np.zeros(len(codes), dtype=np.uint64)
    w1 = np.zeros(len(codes), dtype=np.uint64)
    for c in range(n):
        col = codes[:, c].astype(np.uint64)
        if c < 32:
            w0 |= col << np.uint64(2 * c)
        else:
            w1 |= col << np.uint64(2 * (c - 32))
    return w0, w1


def _flip_batches(L: Lattice):
    """Per anchor cell and orientation: eligibility letters and the rewrite.

    Yields (required: [(cell, letter)], rewrite: [(cell, code)]).
    """
    tabs = neighbor_tables(L)
    nN, nE = tabs["N"], tabs["E"]
    for c in range(L.area):
        cn, ce = nN[c], nE[c]
        cne = nE[cn]
        yield ([(c, "E"), (cn, "E")], [(c, 0), (cn, 2), (ce, 0), (cne, 2)])  # H -> V
        yield ([(c, "N"), (ce, "N")], [(c, 1), (ce, 3), (cn, 1), (cne, 3)])  # V -> H


def _find_sorted(S0: np.ndarray, S1: np.ndarray, q0: np.ndarray, q1: np.ndarray) -> np.ndarray:
    """Positions of query word-pairs inside the lexsorted (S0, S1) arrays."""
    lo = np.searchsorted(S0, q0, side="left")
    hi = np.searchsorted(S0, q0, side="right")
    pos = lo.copy()
    ties = np.flatnonzero(hi - lo > 1)
    for t in ties:
        a, b = lo[t], hi[t]
        pos[t] = a + np.searchsorted(S1[a:b], q1[t])
    if not ((S0[pos] == q0).all() and (S1[pos] == q1).all()):
        raise AssertionError("flip target missing from its flux class")
    return pos


def flip_graph(L: Lattice, flux: Flux, cap: Optional[int] = None) -> FlipGraph:
    """Graph over the tilings with the given flux, edges being single flips.

    Flips preserve flux, so every flip neighbor of a node is again a node.
    Classes can run into the millions, so the work is done columnwise on the
    tiling matrix: flippable windows are located per anchor cell, the flipped
    rows are rebuilt by masked bit operations on packed rows, and matched back
    by binary search.
    """
    cap = _area_cap() if cap is None else cap
    if L.area > cap:
        raise AreaCapExceeded(f"area {L.area} exceeds cap {cap}")
    mat, groups = _census_data(L)
    ix = groups.get(flux)
    if ix is None:
        return FlipGraph(L, flux, 0, 0, 0, 0)
    C = mat[ix]
    k = len(C)
    codes = _CODE[C]
    w0, w1 = _pack_rows(codes)
    order = np.lexsort((w1, w0))
    S0, S1 = w0[order], w1[order]
    src_all = []
    dst_all = []
    touched = np.zeros(k, dtype=bool)
    half_edges = 0
    for required, rewrite in _flip_batches(L):
        mask = np.ones(k, dtype=bool)
        for cell, letter in required:
            mask &= C[:, cell] == ord(letter)
        rows = np.flatnonzero(mask)
        if not len(rows):
            continue
        clear0 = np.uint64(0)
        clear1 = np.uint64(0)
        set0 = np.uint64(0)
        set1 = np.uint64(0)
        for cell, code in rewrite:
            if cell < 32:
                clear0 |= np.uint64(3) << np.uint64(2 * cell)
                set0 |= np.uint64(code) << np.uint64(2 * cell)
            else:
                clear1 |= np.uint64(3) << np.uint64(2 * (cell - 32))
                set1 |= np.uint64(code) << np.uint64(2 * (cell - 32))
        f0 = (w0[rows] & ~clear0) | set0
        f1 = (w1[rows] & ~clear1) | set1
        targets = order[_find_sorted(S0, S1, f0, f1)]
        src_all.append(rows)
        dst_all.append(targets)
        touched[rows] = True
        touched[targets] = True
        half_edges += len(rows)
    assert half_edges % 2 == 0
    if half_edges == 0:
        return FlipGraph(L, flux, nodes=k, edges=0, components=k, isolated=k)
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    src = np.concatenate(src_all)
    dst = np.concatenate(dst_all)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(k, k))
    ncomp, _ = connected_components(graph, directed=False)
    return FlipGraph(
        L,
        flux,
        nodes=k,
        edges=half_edges // 2,
        components=ncomp,
        isolated=int((~touched).sum()),
    )


# ---------------------------------------------------------------------------
# Brick walls and boundary structure

_BRICK_RULES = {
    # direction letters for (black, white) squares
    "N": ("E", "W"),  # horizontal dominoes, black on the left
    "S": ("W", "E"),  # horizontal dominoes, white on the left
    "E": ("S", "N"),  # vertical dominoes, black on top
    "W": ("N", "S"),  # vertical dominoes, white on top
}


def brick_wall(L: Lattice, which: str) -> Tiling:
    """One of the four all-parallel tilings; 'which' names its flux direction.

    brick_wall(L, 'N') has flux (0, 1/2) in Cartesian coordinates, 'E' has
    (1/2, 0), and so on.
    """
    try:
        b, w = _BRICK_RULES[which]
    except KeyError:
        raise ValueError(f"brick wall must be one of N, E, S, W, got {which!r}")
    out = []
    for j in range(L.y1):
        for i in range(L.x0):
            out.append(b if cell_is_black(i, j) else w)
    return Tiling(L, "".join(out))


@dataclass(frozen=True, order=True)
class StairClass:
    """One torus equivalence class of doubly-infinite domino staircases."""

    k: int
    index: int
    tag: str  # 'vert' or 'hor'


# Per staircase type k: (strip offset parity, vert letters, hor letters).
# Strips are diagonals i-j (k = 1, 3) or anti-diagonals i+j (k = 2, 4).
_SIDE_RULES = {
    1: ("diag", 0, ("S", "N"), ("E", "W")),
    2: ("anti", 0, ("N", "S"), ("E", "W")),
    3: ("diag", 1, ("N", "S"), ("W", "E")),
    4: ("anti", 1, ("S", "N"), ("W", "E")),
}


@dataclass(frozen=True)
class StaircaseClasses:
    """Staircase structure of the tilings whose flux lies on one side of the diamond.

    There are c_k vertical-domino classes and c_k horizontal ones; the stairflip
    involution exchanges the two realizations of each strip.  Choosing, for each
    strip class, which realization to use yields all 2^c_k tilings of this side.
    """

    lattice: Lattice
    k: int
    c_k: int
    classes: tuple[StairClass, ...]

    def stairflip(self, cls: StairClass) -> StairClass:
        return StairClass(cls.k, cls.index, "hor" if cls.tag == "vert" else "vert")

    def strip_of_cell(self, i: int, j: int) -> int:
        kind, off, _, _ = _SIDE_RULES[self.k]
        s = i - j if kind == "diag" else i + j
        return ((s + off) >> 1) % self.c_k

    def tiling(self, vert_classes) -> Tiling:
        """The tiling using vertical staircases on the given strip classes."""
        vert = frozenset(vert_classes)
        _, _, (bv, wv), (bh, wh) = _SIDE_RULES[self.k]
        out = []
        for j in range(self.lattice.y1):
            for i in range(self.lattice.x0):
                black = cell_is_black(i, j)
                if self.strip_of_cell(i, j) in vert:
                    out.append(bv if black else wv)
                else:
                    out.append(bh if black else wh)
        return Tiling(self.lattice, "".join(out))

    def all_tilings(self) -> Iterator[tuple[frozenset, Tiling]]:
        """All 2^c_k tilings of this side, as (vertical class set, tiling)."""
        for mask in range(1 << self.c_k):
            vert = frozenset(i for i in range(self.c_k) if mask >> i & 1)
            yield vert, self.tiling(vert)

    def flux_of_subset(self, vert_classes) -> Flux:
        return flux_by_crossings(self.tiling(vert_classes))

    def per_flux_counts(self) -> dict[Flux, int]:
        """Number of tilings per flux along this side: binomial in the vert count."""
        counts: dict[Flux, int] = {}
        for r in range(self.c_k + 1):
            f = self.flux_of_subset(range(r))
            counts[f] = comb(self.c_k, r)
        return counts


def staircase_class_count(L: Lattice, k: int) -> int:
    """c_k: the number of vertical staircase classes of type k on the torus."""
    if k in (1, 3):
        return gcd(L.x0, abs(L.x1 - L.y1)) // 2
    if k in (2, 4):
        return gcd(L.x0, L.x1 + L.y1) // 2
    raise ValueError(f"staircase type must be 1..4, got {k}")


def boundary_structure(L: Lattice, k: int) -> StaircaseClasses:
    c = staircase_class_count(L, k)
    classes = tuple(
        StairClass(k, i, tag) for i in range(c) for tag in ("vert", "hor")
    )
    return StaircaseClasses(L, k, c, classes)


def boundary_tiling_total(L: Lattice) -> int:
    """Total number of tilings with flux on the boundary of the diamond."""
    c1 = staircase_class_count(L, 1)
    c2 = staircase_class_count(L, 2)
    return 2 * (2**c1 + 2**c2 - 2)


@dataclass(frozen=True)
class TorusTilingClass:
    """Result of the flip/staircase dichotomy for a torus tiling."""

    admits_flip: bool
    staircase_types: tuple[int, ...] = ()

    @property
    def canonical_type(self) -> Optional[int]:
        return min(self.staircase_types) if self.staircase_types else None


def classify_torus_tiling(t: Tiling) -> TorusTilingClass:
    """Either the tiling admits a flip, or it is a union of parallel staircases.

    In the staircase case the flux sits on the boundary of the diamond; brick
    walls belong to two sides, and both type indices are reported.
    """
    if find_flips(t):
        return TorusTilingClass(admits_flip=True)
    f = flux_by_crossings(t)
    x, y = f.cartesian()
    half = Fraction(1, 2)
    ks = []
    if x >= 0 and y >= 0 and x + y == half:
        ks.append(1)
    if x <= 0 <= y and y - x == half:
        ks.append(2)
    if x <= 0 and y <= 0 and x + y == -half:
        ks.append(3)
    if y <= 0 <= x and x - y == half:
        ks.append(4)
    assert ks, "flipless torus tiling must have boundary flux"
    return TorusTilingClass(admits_flip=False, staircase_types=tuple(ks))


# ---------------------------------------------------------------------------
# Cycles and cycle flips


@dataclass(frozen=True)
class Cycle:
    """One alternating domino cycle of a tiling pair, walked once around.

    steps holds (cell index, physical (x, y) of the cell, direction, source)
    where source is 0 or 1 for the tiling contributing that domino.  For open
    cycles, displacement is the lattice vector joining consecutive lifts,
    expressed in basis coordinates (a, b).
    """

    cells: tuple[int, ...]
    steps: tuple[tuple[int, tuple[int, int], str, int], ...]
    kind: str  # 'trivial' | 'closed' | 'open'
    displacement: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class CycleSet:
    lattice: Lattice
    cycles: tuple[Cycle, ...]
    parameter: Optional[tuple[int, int]] = None  # short lattice vector (a, b) basis coords

    def parameter_vector(self) -> Optional[tuple[int, int]]:
        if self.parameter is None:
            return None
        a, b = self.parameter
        return (a * self.lattice.x0 + b * self.lattice.x1, b * self.lattice.y1)


def cycle_decompose(t0: Tiling, t1: Tiling) -> CycleSet:
    """Partition the squares into alternating cycles of the two tilings."""
    if t0.lattice != t1.lattice:
        raise ValueError("tilings must live on the same lattice")
    L = t0.lattice
    x0, y1 = L.x0, L.y1
    seen = [False] * L.area
    cycles = []
    param = None
    for start in range(L.area):
        if seen[start]:
            continue
        cells = []
        steps = []
        x, y = start % x0, start // x0
        cell = start
        which = 0
        while True:
            cells.append(cell)
            seen[cell] = True
            d = (t0 if which == 0 else t1).dirs[cell]
            steps.append((cell, (x, y), d, which))
            dx, dy = STEP[d]
            x, y = x + dx, y + dy
            i, j, _, _ = L.reduce_cell_shift(x, y)
            cell = L.cell_index(i, j)
            which ^= 1
            if cell == start and which == 0:
                break
        i, j, a, b = L.reduce_cell_shift(x, y)
        if (a, b) == (0, 0):
            kind = "trivial" if len(cells) == 2 else "closed"
            cycles.append(Cycle(tuple(cells), tuple(steps), kind))
        else:
            g = gcd(abs(a), abs(b))
            assert g == 1, "first-return displacement of an open cycle must be short"
            disp = (a, b)
            cycles.append(Cycle(tuple(cells), tuple(steps), "open", disp))
            canon = disp if disp > (-disp[0], -disp[1]) else (-disp[0], -disp[1])
            if param is None:
                param = canon
            else:
                assert param == canon, "open cycles must share one parameter up to sign"
    return CycleSet(L, tuple(cycles), param)


def apply_cycle_flip(t: Tiling, cycle: Cycle) -> Tiling:
    """Replace the cycle's dominoes from the first tiling by the other tiling's."""
    d = list(t.dirs)
    tabs = neighbor_tables(t.lattice)
    for cell, _, step_dir, which in cycle.steps:
        if which == 1:
            d[cell] = step_dir
            d[tabs[step_dir][cell]] = OPP[step_dir]
    return Tiling(t.lattice, "".join(d))


def kasteleyn_edge_sign_step(xy: tuple[int, int], d: str) -> int:
    """Sign of the dual-graph edge traversed by one step of a domino path.

    Negative edges are those of the brick wall with flux (0, 1/2): a black
    square with the white square on its right.
    """
    x, y = xy
    black = cell_is_black(x, y)
    if (d == "E" and black) or (d == "W" and not black):
        return -1
    return 1


def quasicycle_sign(cycle: Cycle) -> int:
    """Sign of an open cycle: (-1)^(T/2 + 1) times the product of edge signs."""
    if cycle.kind != "open":
        raise ValueError("quasicycle sign is defined for open cycles")
    T = len(cycle.steps)
    sign = -1 if (T // 2 + 1) % 2 else 1
    for _, xy, d, _ in cycle.steps:
        sign *= kasteleyn_edge_sign_step(xy, d)
    return sign


def cycle_pseudoflux_double(cycle: Cycle, flux: Flux) -> int:
    """2 * <flux, parameter> for an open cycle, an integer."""
    if cycle.displacement is None:
        raise ValueError("pseudo-flux is defined for open cycles")
    a, b = cycle.displacement
    return a * flux.two_a0 + b * flux.two_a1


# ---------------------------------------------------------------------------
# Rectangles (planar, no wrap) through the same matcher, plus a profile DP


def enumerate_rectangle_tilings(width: int, height: int) -> list[str]:
    """All domino tilings of a width x height rectangle (no identifications)."""
    n = width * height
    if n % 2:
        return []
    idx = lambda i, j: j * width + i
    cand = []
    for j in range(height):
        for i in range(width):
            opts = []
            for d, (dx, dy) in (("N", (0, 1)), ("E", (1, 0)), ("S", (0, -1)), ("W", (-1, 0))):
                x, y = i + dx, j + dy
                if 0 <= x < width and 0 <= y < height:
                    opts.append((d, idx(x, y), OPP[d]))
            cand.append(tuple(opts))
    return _enumerate_matchings(cand, n)


def rectangle_count_transfer(width: int, height: int) -> int:
    """Number of domino tilings of a rectangle by broken-profile dynamic programming."""
    if width * height % 2:
        return 0
    if width < height:
        width, height = height, width
    col = {0: 1}  # mask of cells protruding into the current column
    for _ in range(width):
        col = _advance_column(col, height)
    return col.get(0, 0)


def _advance_column(col: dict[int, int], height: int) -> dict[int, int]:
    """One column step: place vertical pairs and horizontal protrusions."""
    out: dict[int, int] = {}

    def place(row: int, filled: int, protrude: int, ways: int):
        if row == height:
            out[protrude] = out.get(protrude, 0) + ways
            return
        if filled >> row & 1:
            place(row + 1, filled, protrude, ways)
            return
        # horizontal domino into the next column
        place(row + 1, filled | 1 << row, protrude | 1 << row, ways)
        # vertical domino within this column
        if row + 1 < height and not filled >> (row + 1) & 1:
            place(row + 2, filled | 3 << row, protrude, ways)

    for mask, ways in col.items():
        place(0, mask, 0, ways)
    return out


# ---------------------------------------------------------------------------
# SVG rendering


def tiling_svg(t: Tiling, scale: int = 32) -> str:
    """Draw a tiling; cross-over dominoes are split across both boundary sides."""
    L = t.lattice
    W, H = L.x0 * scale, L.y1 * scale
    pad = scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W + 2 * pad}" '
        f'height="{H + 2 * pad}" viewBox="{-pad} {-pad} {W + 2 * pad} {H + 2 * pad}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="#fbfbf8" stroke="none"/>',
    ]
    # light checkerboard
    for j in range(L.y1):
        for i in range(L.x0):
            if cell_is_black(i, j):
                parts.append(
                    f'<rect x="{i * scale}" y="{(L.y1 - 1 - j) * scale}" '
                    f'width="{scale}" height="{scale}" fill="#e8e8e2"/>'
                )
    drawn = set()
    tabs = neighbor_tables(L)
    for c in range(L.area):
        d = t.dirs[c]
        p = tabs[d][c]
        if (p, OPP[d]) in drawn:
            continue
        drawn.add((c, d))
        i, j = c % L.x0, c // L.x0
        dx, dy = STEP[d]
        pieces = [((i, j), (i + dx, j + dy))]
        px, py = i + dx, j + dy
        if not (0 <= px < L.x0 and 0 <= py < L.y1):
            # split: also draw the wrapped copy anchored at the partner cell
            pi, pj = p % L.x0, p // L.x0
            ox, oy = STEP[OPP[d]]
            pieces.append(((pi, pj), (pi + ox, pj + oy)))
        for (ax, ay), (bx, by) in pieces:
            x0p = min(ax, bx) * scale + 3
            y0p = (L.y1 - 1 - max(ay, by)) * scale + 3
            w = (abs(bx - ax) + 1) * scale - 6
            h = (abs(by - ay) + 1) * scale - 6
            parts.append(
                f'<rect x="{x0p}" y="{y0p}" width="{w}" height="{h}" rx="6" '
                f'fill="#7d9fc2" fill-opacity="0.85" stroke="#2d4a6b" stroke-width="2"/>'
            )
    parts.append(
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="none" '
        f'stroke="#b03a2e" stroke-width="3"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts)
