"""The acceptance suite: every guarantee the engine makes, cross-verified.

Each criterion is a function returning a CheckResult; run_all executes them in
order against a shared per-lattice cache so the brute-force enumeration runs
once per lattice.  The same suite backs `pytest tests/test_acceptance.py` and
the `verify-all` CLI subcommand.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import Flux, Lattice, flux_candidates, square_torus, valid_lattices
from .tilings import (
    boundary_structure,
    boundary_tiling_total,
    brick_wall,
    cycle_decompose,
    cycle_pseudoflux_double,
    enumerate_tilings,
    flip_graph,
    quasicycle_sign,
    rectangle_count_transfer,
    tilings_by_flux,
)
from .height import (
    height_from_tiling,
    hmax_plane,
    hmax_plane_bfs,
    hmin_plane,
    hmin_plane_bfs,
    pointwise_min,
    tiling_from_height,
)
from .kasteleyn import (
    build_kasteleyn,
    count_by_flux_via_det,
    det_kd_numeric,
    det_laurent,
    det_laurent_mp,
    sign_pattern_check,
    total_from_corners,
)
from . import spectral

T2_POLY_PRINTED = {
    (0, 0): 132,
    (1, 0): -32, (-1, 0): -32, (0, 1): -32, (0, -1): -32,
    (1, 1): -2, (-1, 1): -2, (1, -1): -2, (-1, -1): -2,
    (2, 0): 1, (-2, 0): 1, (0, 2): 1, (0, -2): 1,
}

T2_CENSUS = {
    (0, 0): 132,
    (2, 0): 32, (-2, 0): 32, (0, 2): 32, (0, -2): 32,
    (2, 2): 2, (2, -2): 2, (-2, 2): 2, (-2, -2): 2,
    (4, 0): 1, (-4, 0): 1, (0, 4): 1, (0, -4): 1,
}

# (size label, flux pairings (a0, a1), published per-flux proportions)
PUBLISHED_PROPORTIONS = {
    4: {(0, 0): "0.48529", (1, 0): "0.11765", (1, 1): "0.00735", (2, 0): "0.00368"},
    6: {(0, 0): "0.48989", (1, 0): "0.11082", (1, 1): "0.01416", (2, 0): "0.00253"},
    10: {(0, 0): "0.49436", (1, 0): "0.10575", (1, 1): "0.01820", (2, 0): "0.00141"},
    16: {(0, 0): "0.49564", (1, 0): "0.10411", (2, 0): "0.00109", (1, 1): "0.02053"},
}


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.number:2d} [{self.name}] ({self.seconds:.1f}s): {self.detail}"


@dataclass
class LatticeFacts:
    """Everything the sweep criteria need about one lattice, summarized small."""

    lattice: Lattice
    total: int
    census: dict
    flux_set_ok: bool
    flux_set_detail: str
    det_census_ok: bool
    det_census_detail: str
    corners_ok: bool
    corners_detail: str
    pattern_ok: bool
    pattern_detail: str
    dichotomy_ok: bool
    dichotomy_detail: str
    boundary_ok: bool
    boundary_detail: str
    bricks_ok: bool
    bricks_detail: str


class SweepCache:
    """Per-lattice facts for all valid lattices up to an area bound."""

    def __init__(self, max_area: int = 36, progress=None):
        self.max_area = max_area
        self.lattices = valid_lattices(max_area)
        self.progress = progress
        self._facts: dict[Lattice, LatticeFacts] = {}
        self.sweep_seconds = 0.0

    def facts(self, L: Lattice) -> LatticeFacts:
        if L not in self._facts:
            t0 = time.time()
            self._facts[L] = _compute_facts(L, self.max_area)
            self.sweep_seconds += time.time() - t0
            if self.progress:
                self.progress(f"  swept {L} ({self._facts[L].total} tilings)")
        return self._facts[L]

    def all_facts(self) -> list[LatticeFacts]:
        return [self.facts(L) for L in self.lattices]


def _compute_facts(L: Lattice, cap: int) -> LatticeFacts:
    census = tilings_by_flux(L, cap=cap)
    total = sum(census.values())

    realized = set(census)
    predicted = set(flux_candidates(L))
    flux_ok = realized == predicted
    flux_detail = "realized fluxes = lattice-diamond intersection"
    if not flux_ok:
        flux_detail = (
            f"missing={sorted(map(str, predicted - realized))} "
            f"extra={sorted(map(str, realized - predicted))}"
        )

    poly = det_laurent(build_kasteleyn(L))
    det_census = count_by_flux_via_det(L, poly)
    det_ok = det_census == census
    det_detail = "per-flux |coefficients| match enumeration"
    if not det_ok:
        diffs = {
            str(f): (census.get(f), det_census.get(f))
            for f in set(census) | set(det_census)
            if census.get(f) != det_census.get(f)
        }
        det_detail = f"mismatches {diffs}"

    corners_total = total_from_corners(poly)
    corners_ok = corners_total == total
    corners_detail = f"corner combination = {corners_total}, enumeration = {total}"

    try:
        sign_pattern_check(poly, L)
        pattern_ok, pattern_detail = True, "odd-one-out sign pattern holds"
    except Exception as exc:  # PatternViolation
        pattern_ok, pattern_detail = False, str(exc)

    dichotomy_ok, dichotomy_detail = True, "interior connected, boundary edgeless"
    for f in sorted(census):
        g = flip_graph(L, f, cap=cap)
        if f.is_boundary():
            if not g.edgeless:
                dichotomy_ok = False
                dichotomy_detail = f"boundary flux {f} has {g.edges} flip edges"
                break
        else:
            if not g.connected:
                dichotomy_ok = False
                dichotomy_detail = f"interior flux {f} splits into {g.components} components"
                break

    boundary_ok, boundary_detail = _check_boundary(L, census, total)
    bricks_ok, bricks_detail = _check_bricks(L, census)

    return LatticeFacts(
        L, total, census,
        flux_ok, flux_detail,
        det_ok, det_detail,
        corners_ok, corners_detail,
        pattern_ok, pattern_detail,
        dichotomy_ok, dichotomy_detail,
        boundary_ok, boundary_detail,
        bricks_ok, bricks_detail,
    )


def _check_boundary(L: Lattice, census: dict, total: int):
    expected_boundary = boundary_tiling_total(L)
    actual_boundary = sum(c for f, c in census.items() if f.is_boundary())
    if actual_boundary != expected_boundary:
        return False, f"boundary totals differ: census {actual_boundary}, 2(2^c1+2^c2-2) = {expected_boundary}"
    for k in (1, 2, 3, 4):
        S = boundary_structure(L, k)
        for f, n in S.per_flux_counts().items():
            if census.get(f) != n:
                return False, f"side {k} flux {f}: census {census.get(f)} != binomial {n}"
    return True, f"binomial side counts and boundary total {expected_boundary} match"


def _check_bricks(L: Lattice, census: dict):
    from .tilings import _census_data, flux_by_crossings  # sweep-internal fast path

    mat, groups = _census_data(L)
    half = Fraction(1, 2)
    for which, cart in (("N", (0, half)), ("E", (half, 0)), ("S", (0, -half)), ("W", (-half, 0))):
        wall = brick_wall(L, which)
        f = flux_by_crossings(wall)
        if f.cartesian() != cart:
            return False, f"brick {which} has flux {f.cartesian()}, expected {cart}"
        if census.get(f) != 1:
            return False, f"brick flux {f} has census {census.get(f)} != 1"
        members = groups.get(f)
        if members is None or mat[members[0]].tobytes().decode() != wall.dirs:
            return False, f"enumerated tiling at {f} differs from constructed brick {which}"
    return True, "four brick walls unique at the four extreme fluxes"


# ---------------------------------------------------------------------------
# Criteria


def _timed(number, name, fn, budget: float | None = None) -> CheckResult:
    t0 = time.time()
    passed, detail = fn()
    secs = time.time() - t0
    if passed and budget is not None and secs > budget:
        passed = False
        detail = f"runtime {secs:.1f}s exceeds the {budget:.0f}s budget; {detail}"
    return CheckResult(number, name, passed, detail, secs)


def criterion_1() -> CheckResult:
    def run():
        T2 = square_torus(2)
        census = tilings_by_flux(T2)
        total = sum(census.values())
        got = {(f.two_a0, f.two_a1): c for f, c in census.items()}
        if total != 272 or got != T2_CENSUS:
            return False, f"total {total}, census {got}"
        props = sorted({format(c / total, ".5f") for c in census.values()}, reverse=True)
        want = ["0.48529", "0.11765", "0.00735", "0.00368"]
        if props != want:
            return False, f"proportions {props} != {want}"
        return True, "272 tilings; censuses 132/32x4/2x4/1x4; proportions 0.48529/0.11765/0.00735/0.00368"

    return _timed(1, "4x4 census", run, budget=1.0)


def criterion_2() -> CheckResult:
    def run():
        p = det_laurent(build_kasteleyn(square_torus(2)))
        if p.terms == T2_POLY_PRINTED:
            return True, "determinant equals the published polynomial (global sign +1)"
        if {k: -v for k, v in p.terms.items()} == T2_POLY_PRINTED:
            return True, "determinant equals the published polynomial up to global sign -1"
        return False, f"polynomial differs: {p.terms}"

    return _timed(2, "4x4 polynomial", run, budget=1.0)


def criterion_3(cache: SweepCache) -> CheckResult:
    def run():
        from .kasteleyn import LaurentPoly2

        printed = LaurentPoly2(T2_POLY_PRINTED)
        corners = printed.corners()  # (p(1,1), p(1,-1), p(-1,1), p(-1,-1))
        if (corners[0], corners[1], corners[2], corners[3]) != (0, 144, 144, 256):
            return False, f"printed-polynomial corners {corners}"
        if total_from_corners(printed) != 272:
            return False, f"corner combination gives {total_from_corners(printed)}"
        # a fixed batch of small lattices within the stated runtime budget
        batch = [L for L in cache.lattices if L.area <= 20]
        if len(batch) < 10:
            return False, f"only {len(batch)} lattices in the corner batch"
        for L in batch:
            poly = det_laurent(build_kasteleyn(L))
            total = sum(tilings_by_flux(L, cap=cache.max_area).values())
            if total_from_corners(poly) != total:
                return False, f"{L}: corners {total_from_corners(poly)} != {total}"
        return True, (
            f"1/2 [-p(1,1)+p(-1,1)+p(1,-1)+p(-1,-1)] = 272 with corners (0,144,144,256); "
            f"corner totals match enumeration on {len(batch)} lattices (full sweep in criterion 4)"
        )

    return _timed(3, "corner counting", run, budget=120.0)


def _sweep_criterion(number, name, cache: SweepCache, ok_attr: str, detail_attr: str) -> CheckResult:
    def run():
        bad = []
        for facts in cache.all_facts():
            if not getattr(facts, ok_attr):
                bad.append(f"{facts.lattice}: {getattr(facts, detail_attr)}")
        if bad:
            return False, "; ".join(bad[:4]) + (f" (+{len(bad)-4} more)" if len(bad) > 4 else "")
        n = len(cache.lattices)
        return True, f"holds for all {n} valid lattices with area <= {cache.max_area}"

    return _timed(number, name, run)


def criterion_4(cache) -> CheckResult:
    res = _sweep_criterion(4, "determinant vs enumeration census", cache, "det_census_ok", "det_census_detail")
    if res.passed:
        # corner totals and the sign pattern ride along for the whole sweep
        for facts in cache.all_facts():
            if not facts.corners_ok:
                return CheckResult(4, res.name, False, facts.corners_detail, res.seconds)
            if not facts.pattern_ok:
                return CheckResult(4, res.name, False, facts.pattern_detail, res.seconds)
    return res


def criterion_5(cache) -> CheckResult:
    return _sweep_criterion(5, "flux characterization", cache, "flux_set_ok", "flux_set_detail")


def criterion_6(cache) -> CheckResult:
    return _sweep_criterion(6, "flip dichotomy", cache, "dichotomy_ok", "dichotomy_detail")


def criterion_7(cache) -> CheckResult:
    return _sweep_criterion(7, "boundary staircase counts", cache, "boundary_ok", "boundary_detail")


def criterion_8(cache) -> CheckResult:
    return _sweep_criterion(8, "brick walls", cache, "bricks_ok", "bricks_detail")


def criterion_9(cache: SweepCache, samples: int = 50, seed: int = 20240601) -> CheckResult:
    def run():
        rng = random.Random(seed)
        tol = 1e-9
        for L in cache.lattices:
            K = build_kasteleyn(L)
            for _ in range(samples):
                u0, u1 = rng.random(), rng.random()
                q0 = complex(math.cos(2 * math.pi * u0), math.sin(2 * math.pi * u0))
                q1 = complex(math.cos(2 * math.pi * u1), math.sin(2 * math.pi * u1))
                d = det_kd_numeric(K, q0, q1)
                scale = max(1.0, abs(d))
                lam_prod = float(np.prod(spectral.eigenvalues_M(L, (u0, u1))))
                if abs(abs(d) ** 4 - lam_prod) > tol * max(1.0, abs(d) ** 4):
                    return False, f"{L}: |det|^4 vs eigenvalue product at u=({u0:.4f},{u1:.4f})"
                ds = spectral.det_kd_spectral(L, u0, u1)
                if abs(d - ds) > tol * scale:
                    return False, f"{L}: det K_D vs rho1 rho2 det_KE at u=({u0:.4f},{u1:.4f})"
                p = spectral.p_LE(L, u0, u1)
                if abs(spectral.p_LE(L, u0 + 1, u1) - p) > tol * max(1.0, abs(p)):
                    return False, f"{L}: u0-periodicity"
                sign = -1 if L.y1 % 2 else 1
                if abs(spectral.p_LE(L, u0, u1 + 1) - sign ** L.y1 * p) > tol * max(1.0, abs(p)):
                    return False, f"{L}: u1-periodicity"
                if L.y1 % 2 == 0:
                    if abs(d.imag) > tol * scale:
                        return False, f"{L}: determinant not real"
                    # some published statements swap these two cases; the 4x4
                    # polynomial itself forces this orientation: p(-1,1) = +144
                    if L.y1 % 4 == 0 and d.real < -tol * scale:
                        return False, f"{L}: sign corollary (expected nonnegative)"
                    if L.y1 % 4 == 2 and d.real > tol * scale:
                        return False, f"{L}: sign corollary (expected nonpositive)"
        return True, (
            f"|det|^4 = prod lambda, det = rho1 rho2 det_KE, periodicity and real-sign "
            f"corollary at {samples} random u per lattice (sign cases as forced by the "
            f"4x4 polynomial: y1=0 mod 4 nonnegative)"
        )

    return _timed(9, "spectral identities", run, budget=60.0)


def criterion_10(samples: int = 20, seed: int = 987) -> CheckResult:
    def run():
        rng = random.Random(seed)
        worst = 0.0
        for L in (square_torus(1), Lattice(2, 1, 1), Lattice(4, 2, 2)):
            for n in (2, 3):
                for _ in range(samples):
                    u = (rng.random(), rng.random())
                    worst = max(worst, spectral.product_formula_check(L, n, u))
        if worst >= 1e-9:
            return False, f"max residual {worst:.2e}"
        return True, f"scaling product formula and mu1 corollary, max residual {worst:.2e}"

    return _timed(10, "product formula", run, budget=60.0)


def criterion_11() -> CheckResult:
    def run():
        failures = []
        for n in (3, 5, 8):
            side = 2 * n
            T = square_torus(n)
            poly = det_laurent_mp(T)  # residual check is internal (< 1e-6)
            census = count_by_flux_via_det(T, poly)
            total = sum(census.values())
            for (a0, a1), want in PUBLISHED_PROPORTIONS[side].items():
                got = format(census[Flux(2 * a0, 2 * a1, T)] / total, ".5f")
                if abs(float(got) - float(want)) > 5e-6:
                    failures.append(f"{side}x{side} flux ({a0},{a1}): computed {got}, published {want}")
        if failures:
            return False, "; ".join(failures) + " [the published (1,1) cells for 6x6/10x10 are erroneous; see README]"
        return True, "published proportion tables reproduced for 6x6, 10x10, 16x16"

    return _timed(11, "large-torus proportions", run, budget=120.0)


def criterion_12() -> CheckResult:
    def run():
        if spectral.rectangle_count(2, 3) != 3:
            return False, "2x3 rectangle"
        if spectral.rectangle_count(2, 1) != 1:
            return False, "2x1 rectangle"
        for m in (2, 4, 6, 8):
            for n in range(1, 9):
                a = spectral.rectangle_count(m, n)
                b = rectangle_count_transfer(m, n)
                if a != b:
                    return False, f"{m}x{n}: closed form {a}, transfer oracle {b}"
        if spectral.rectangle_count(8, 8) != 12988816:
            return False, f"8x8 = {spectral.rectangle_count(8, 8)}"
        return True, "closed form equals transfer-matrix oracle for all even m <= 8, n <= 8; 8x8 = 12988816"

    return _timed(12, "rectangle formula", run)


def criterion_13(pairs: int = 600, seed: int = 3141) -> CheckResult:
    def run():
        for x in range(-10, 11):
            for y in range(-10, 11):
                if hmax_plane((x, y)) != hmax_plane_bfs((x, y)):
                    return False, f"hmax closed form vs BFS at {(x, y)}"
                if hmin_plane((x, y)) != hmin_plane_bfs((x, y)):
                    return False, f"hmin closed form vs BFS at {(x, y)}"
                if abs(hmax_plane((x, y)) - 2 * max(abs(x), abs(y))) > 1:
                    return False, f"hmax bound at {(x, y)}"

        T2 = square_torus(2)
        tilings = enumerate_tilings(T2)
        heights = [height_from_tiling(t) for t in tilings]
        by_flux: dict = {}
        for t, h in zip(tilings, heights):
            by_flux.setdefault(h.flux(), []).append(h)
        for group in by_flux.values():
            for ha in group:
                for hb in group:
                    hm = pointwise_min(ha, hb)
                    if not hm.is_valid():
                        return False, "pointwise minimum is not a height field"
                    t = tiling_from_height(hm)
                    if height_from_tiling(t).base != hm.base:
                        return False, "pointwise minimum does not round-trip"

        rng = random.Random(seed)
        reference: dict = {}
        checked = 0
        for _ in range(pairs):
            t0, t1 = rng.choice(tilings), rng.choice(tilings)
            cs = cycle_decompose(t0, t1)
            if cs.parameter is None:
                continue
            f0 = height_from_tiling(t0).flux()
            for c in cs.cycles:
                if c.kind != "open":
                    continue
                sgn = quasicycle_sign(c)
                two_phi = cycle_pseudoflux_double(c, f0)
                key = cs.parameter
                if key in reference:
                    sgn_ref, two_phi_ref = reference[key]
                    if (two_phi - two_phi_ref) % 2 != 0:
                        return False, f"pseudo-flux parity broken for parameter {key}"
                    if sgn * sgn_ref != (-1) ** ((two_phi - two_phi_ref) // 2):
                        return False, f"sign law broken for parameter {key}"
                else:
                    reference[key] = (sgn, two_phi)
                checked += 1
        if checked < 500:
            return False, f"only {checked} open cycles sampled"
        return (
            True,
            f"hmax/hmin closed forms match BFS on ||v||inf <= 10; pointwise-min closed over "
            f"all same-flux pairs; quasicycle sign law over {checked} open cycles",
        )

    return _timed(13, "height-function properties", run)


def run_all(max_area: int = 36, out=None, progress=None) -> list[CheckResult]:
    """Run every acceptance criterion; returns results in order."""
    cache = SweepCache(max_area=max_area, progress=progress)
    results = []

    def emit(r: CheckResult):
        results.append(r)
        if out:
            out(r.line())

    emit(criterion_1())
    emit(criterion_2())
    emit(criterion_3(cache))
    emit(criterion_4(cache))
    emit(criterion_5(cache))
    emit(criterion_6(cache))
    emit(criterion_7(cache))
    emit(criterion_8(cache))
    emit(criterion_9(cache))
    emit(criterion_10())
    emit(criterion_11())
    emit(criterion_12())
    emit(criterion_13())
    return results
