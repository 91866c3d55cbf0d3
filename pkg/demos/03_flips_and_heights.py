"""Flips, height functions, and the flip-connectivity dichotomy.

Tilings with the same interior flux form a single connected component under
flips; tilings with flux on the boundary diamond admit no flips at all and
decompose into parallel doubly-infinite staircases.
"""
from torusdimers import (
    Flux,
    apply_flip,
    brick_wall,
    classify_torus_tiling,
    enumerate_tilings,
    find_flips,
    flip_graph,
    flux_of_tiling,
    height_from_tiling,
    square_torus,
    toroidal_hmax,
)

T2 = square_torus(2)

print("Interior flux (0,0):", flip_graph(T2, Flux(0, 0, T2)))
print("Boundary flux (1,1):", flip_graph(T2, Flux(2, 2, T2)))
print()

wall = brick_wall(T2, "E")
print("brick wall E:", wall.dirs, "-> flux", flux_of_tiling(wall).cartesian())
print("  flips:", find_flips(wall), "->", classify_torus_tiling(wall))
print()

t = enumerate_tilings(T2)[0]
print("first enumerated tiling:", t.dirs)
hf = height_from_tiling(t)
print("  height grid (rows bottom to top):")
for j in range(T2.y1):
    print("   ", [hf.value(i, j) for i in range(T2.x0 + 1)])
print("  quasiperiods:", hf.quasi0, hf.quasi1, "-> flux", hf.flux())

site = find_flips(t)[0]
t2 = apply_flip(t, site)
h2 = height_from_tiling(t2)
print(f"  after flipping at cell {site.cell}: height changes at",
      [(i, j) for j in range(T2.y1) for i in range(T2.x0)
       if hf.value(i, j) != h2.value(i, j)])

f0 = Flux(0, 0, T2)
print("\nmaximal flux-(0,0) height at (1,1):", toroidal_hmax(T2, f0, (1, 1)))
