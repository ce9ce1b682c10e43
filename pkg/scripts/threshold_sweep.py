"""Sweep the distance threshold over a planted-cluster point set and tabulate the
base cluster system at each level.

    python3 scripts/threshold_sweep.py --sizes 4 3 3 --points 15 --out sweep.json
"""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from kgeodetic.cover import WeightFunction, base_cluster_system, classify_cluster_structure
from kgeodetic.matrices import ThresholdConfig, distance_matrix
from kgeodetic.synthetic import tight_clusters


@dataclass
class SweepConfig:
    sizes: tuple = (4, 3, 3)
    spread: float = 0.3
    gap: float = 3.0
    seed: int = 0
    points: int = 15
    weight: str = "similarity"


def run(cfg: SweepConfig) -> list[dict]:
    x = tight_clusters(cfg.seed, cfg.sizes, cfg.spread, cfg.gap)
    d = distance_matrix(x)
    off = d.entries[np.triu_indices(d.size, 1)]
    rows = []
    for delta in np.linspace(off.min(), off.max(), cfg.points):
        system = base_cluster_system(d, ThresholdConfig(float(delta)), WeightFunction(cfg.weight))
        reports = [classify_cluster_structure(c, system.graph) for c in system.clusters]
        rows.append({
            "delta": float(delta),
            "edges": system.graph.m,
            "J": system.cover.value,
            "method": system.cover.method,
            "cluster_sizes": sorted((len(c) for c in system.clusters), reverse=True),
            "max_geodetic_index": max(r.geodetic_index for r in reports),
        })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=list(SweepConfig.sizes))
    ap.add_argument("--spread", type=float, default=SweepConfig.spread)
    ap.add_argument("--gap", type=float, default=SweepConfig.gap)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--points", type=int, default=SweepConfig.points)
    ap.add_argument("--weight", choices=("unit", "similarity"), default=SweepConfig.weight)
    ap.add_argument("--out", help="also write the table as JSON")
    args = ap.parse_args()
    cfg = SweepConfig(tuple(args.sizes), args.spread, args.gap, args.seed, args.points, args.weight)
    rows = run(cfg)
    print(f"{'delta':>8} {'edges':>5} {'J':>9} {'method':>7}  clusters")
    for r in rows:
        print(f"{r['delta']:8.3f} {r['edges']:5d} {r['J']:9.4f} {r['method']:>7}  {r['cluster_sizes']}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
