"""Tilings with extremal flux are unions of doubly-infinite staircases.

Along each side of the flux diamond the tilings are generated by choosing, for
each staircase class, one of its two realizations; the per-flux counts are
binomial coefficients and the four corners are the unique brick walls.
"""
from torusdimers import (
    boundary_structure,
    boundary_tiling_total,
    brick_wall,
    flux_of_tiling,
    square_torus,
    tilings_by_flux,
)

T2 = square_torus(2)
census = tilings_by_flux(T2)

for k in (1, 2, 3, 4):
    S = boundary_structure(T2, k)
    print(f"side {k}: c_{k} = {S.c_k} staircase classes")
    for flux, n in sorted(S.per_flux_counts().items()):
        print(f"    flux {flux} -> {n} tilings (binomial), census agrees: {census[flux] == n}")

print("\nboundary total 2(2^c1 + 2^c2 - 2) =", boundary_tiling_total(T2))

for which in "NESW":
    wall = brick_wall(T2, which)
    print(f"brick {which}: flux {flux_of_tiling(wall).cartesian()}, census count",
          census[flux_of_tiling(wall)])
