"""Command-line front end: censuses, polynomials, graphs, checks, rendering.

Exit codes: 0 on success, 1 when a verification-style command finds a failure,
2 on argument/parse errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import TorusDimersError
from .lattice import Flux, Lattice
from . import spectral
from .kasteleyn import build_kasteleyn, det_laurent, det_laurent_mp
from .tilings import (
    boundary_structure,
    boundary_tiling_total,
    enumerate_tilings,
    flip_graph,
    tiling_svg,
    tilings_by_flux,
)
from . import verify


def _lattice(spec: str) -> Lattice:
    return Lattice.from_string(spec)


def cmd_enumerate(args) -> int:
    L = _lattice(args.lattice)
    tilings = enumerate_tilings(L, cap=args.cap)
    if args.format == "json":
        out = {"lattice": str(L), "count": len(tilings)}
        if args.list:
            out["tilings"] = [t.dirs for t in tilings]
        print(json.dumps(out))
    else:
        print(f"lattice {L}: {len(tilings)} tilings")
        if args.list:
            for t in tilings:
                print(t.dirs)
    return 0


def cmd_flux_table(args) -> int:
    L = _lattice(args.lattice)
    census = tilings_by_flux(L, cap=args.cap)
    total = sum(census.values())
    rows = [
        (str(f), f"{f.cartesian()[0]},{f.cartesian()[1]}", c, format(c / total, ".5f"))
        for f, c in sorted(census.items())
    ]
    if args.format == "json":
        print(json.dumps({
            "lattice": str(L),
            "total": total,
            "rows": [
                {"flux": r[0], "cartesian": r[1], "tilings": r[2], "proportion": r[3]}
                for r in rows
            ],
        }))
    elif args.format == "csv":
        print("flux,cartesian,tilings,proportion")
        for r in rows:
            print(f"\"{r[0]}\",\"{r[1]}\",{r[2]},{r[3]}")
    else:
        print(f"lattice {L}: {total} tilings")
        w = max(len(r[0]) for r in rows)
        for r in rows:
            print(f"  flux {r[0]:>{w}}   tilings {r[2]:>8}   proportion {r[3]}")
    return 0


def cmd_polynomial(args) -> int:
    L = _lattice(args.lattice)
    if args.method == "mp":
        poly = det_laurent_mp(L)
    else:
        poly = det_laurent(build_kasteleyn(L), method=args.method)
    if args.format == "json":
        print(poly.to_json())
    else:
        print(poly.pretty())
    return 0


def cmd_flip_graph(args) -> int:
    L = _lattice(args.lattice)
    flux = Flux.from_string(L, args.flux)
    g = flip_graph(L, flux, cap=args.cap)
    report = {
        "lattice": str(L),
        "flux": str(flux),
        "nodes": g.nodes,
        "edges": g.edges,
        "components": g.components,
        "isolated": g.isolated,
        "connected": g.connected,
        "boundary_flux": flux.is_boundary(),
    }
    print(json.dumps(report) if args.format == "json" else
          f"flux {flux}: {g.nodes} tilings, {g.edges} flip edges, "
          f"{g.components} component(s), {g.isolated} isolated")
    return 0


def cmd_boundary(args) -> int:
    L = _lattice(args.lattice)
    lines = [f"lattice {L}: boundary tilings total {boundary_tiling_total(L)}"]
    data = {"lattice": str(L), "total": boundary_tiling_total(L), "sides": []}
    ks = [args.k] if args.k else [1, 2, 3, 4]
    for k in ks:
        S = boundary_structure(L, k)
        counts = S.per_flux_counts()
        data["sides"].append({
            "k": k,
            "c_k": S.c_k,
            "per_flux": {str(f): c for f, c in sorted(counts.items())},
        })
        lines.append(f"  side {k}: c_{k} = {S.c_k}; per-flux counts "
                     + ", ".join(f"{f}:{c}" for f, c in sorted(counts.items())))
    print(json.dumps(data) if args.format == "json" else "\n".join(lines))
    return 0


def cmd_spectral_check(args) -> int:
    L = _lattice(args.lattice)
    if args.format == "csv":
        print(spectral.sweep_csv(L, samples=args.samples, seed=args.seed), end="")
        return 0
    rng = random.Random(args.seed)
    K = build_kasteleyn(L)
    from .kasteleyn import det_kd_numeric
    import numpy as np

    worst = {"factorization": 0.0, "eigenvalue_product": 0.0, "periodicity": 0.0}
    for _ in range(args.samples):
        u0, u1 = rng.random(), rng.random()
        q0 = complex(np.cos(2 * np.pi * u0), np.sin(2 * np.pi * u0))
        q1 = complex(np.cos(2 * np.pi * u1), np.sin(2 * np.pi * u1))
        d = det_kd_numeric(K, q0, q1)
        ds = spectral.det_kd_spectral(L, u0, u1)
        worst["factorization"] = max(worst["factorization"],
                                     abs(d - ds) / max(1.0, abs(d), abs(ds)))
        lam = float(np.prod(spectral.eigenvalues_M(L, (u0, u1))))
        worst["eigenvalue_product"] = max(worst["eigenvalue_product"],
                                          abs(abs(d) ** 4 - lam) / max(1.0, abs(d) ** 4))
        p = spectral.p_LE(L, u0, u1)
        rel = abs(spectral.p_LE(L, u0 + 1, u1) - p) / max(1.0, abs(p))
        rel = max(rel, abs(spectral.p_LE(L, u0, u1 + 2) - p) / max(1.0, abs(p)))
        worst["periodicity"] = max(worst["periodicity"], rel)
    ok = all(v < args.tolerance for v in worst.values())
    for name, v in worst.items():
        print(f"{name}: max residual {v:.3e}")
    print("OK" if ok else "FAILED")
    return 0 if ok else 1


def cmd_product_formula(args) -> int:
    L = _lattice(args.lattice)
    rng = random.Random(args.seed)
    worst = 0.0
    for _ in range(args.samples):
        worst = max(worst, spectral.product_formula_check(L, args.n, (rng.random(), rng.random())))
    print(f"n = {args.n}: max residual {worst:.3e} over {args.samples} samples")
    ok = worst < args.tolerance
    print("OK" if ok else "FAILED")
    return 0 if ok else 1


def cmd_rectangle(args) -> int:
    print(spectral.rectangle_count(args.m, args.n))
    return 0


def cmd_render(args) -> int:
    L = _lattice(args.lattice)
    tilings = enumerate_tilings(L, cap=args.cap)
    if not 0 <= args.index < len(tilings):
        print(f"index {args.index} out of range [0, {len(tilings)})", file=sys.stderr)
        return 2
    svg = tiling_svg(tilings[args.index])
    with open(args.out, "w") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return 0


def cmd_verify_all(args) -> int:
    progress = (lambda s: print(s, flush=True)) if args.progress else None
    results = verify.run_all(max_area=args.cap, out=lambda s: print(s, flush=True),
                             progress=progress)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="torusdimers",
        description="Domino tilings of quadriculated tori: exact counting and structure.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    p = add("enumerate", cmd_enumerate, help="count (and list) all tilings")
    p.add_argument("lattice", help="lattice as x0,x1,y1")
    p.add_argument("--list", action="store_true", help="print each tiling's letters")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--cap", type=int, default=None, help="area cap override")

    p = add("flux-table", cmd_flux_table, help="tilings per flux, with proportions")
    p.add_argument("lattice")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--cap", type=int, default=None)

    p = add("polynomial", cmd_polynomial, help="Kasteleyn determinant as a Laurent polynomial")
    p.add_argument("lattice")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--method", choices=["auto", "dft", "exact", "mp"], default="auto")

    p = add("flip-graph", cmd_flip_graph, help="connectivity of one flux class under flips")
    p.add_argument("lattice")
    p.add_argument("--flux", required=True,
                   help="flux pairings a0,a1 as printed by flux-table (e.g. 0,0 or 2,0; halves like 3/2 occur for odd y1)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--cap", type=int, default=None)

    p = add("boundary", cmd_boundary, help="staircase classes and boundary-flux counts")
    p.add_argument("lattice")
    p.add_argument("--k", type=int, choices=[1, 2, 3, 4], default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = add("spectral-check", cmd_spectral_check, help="numeric vs closed-form determinants")
    p.add_argument("lattice")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--format", choices=["text", "csv"], default="text",
                   help="csv emits the (u0, u1, det_KD, det_KE, rho) sweep")

    p = add("product-formula", cmd_product_formula, help="uniform-scaling determinant identity")
    p.add_argument("lattice")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)

    p = add("rectangle", cmd_rectangle, help="exact tiling count of an m x n rectangle")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)

    p = add("render", cmd_render, help="draw one tiling as SVG")
    p.add_argument("lattice")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--cap", type=int, default=None)

    p = add("verify-all", cmd_verify_all, help="run the full acceptance suite")
    p.add_argument("--cap", type=int, default=36, help="sweep area cap")
    p.add_argument("--progress", action="store_true")

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except TorusDimersError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
