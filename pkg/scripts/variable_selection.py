"""Compare the full OLS fit with the reduced fit on representatives across noise levels.

    python3 scripts/variable_selection.py --noise 1e-6 1e-3 0.1 0.3
"""

import argparse
from dataclasses import dataclass

from kgeodetic.errors import Multicollinear
from kgeodetic.regression import gram_condition_number, ols_fit, reduced_fit, select_representatives
from kgeodetic.synthetic import correlated_groups


@dataclass
class SelectionConfig:
    delta: float = 0.9
    n_obs: int = 100
    group_sizes: tuple = (3, 3)
    seed: int = 0


def row(cfg: SelectionConfig, noise: float) -> dict:
    ds = correlated_groups(cfg.seed, cfg.n_obs, cfg.group_sizes, noise)
    reps = select_representatives(ds, cfg.delta)
    try:
        full = ols_fit(ds).rss
    except Multicollinear:
        full = None
    reduced = reduced_fit(ds, reps)
    return {
        "noise": noise,
        "groups": len(reps.groups),
        "full_cond": gram_condition_number(ds.X),
        "full_rss": full,
        "reduced_cond": reduced.condition_number,
        "reduced_rss": reduced.rss,
        "cross_r": reps.cross_correlation,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--noise", type=float, nargs="+", default=[1e-6, 1e-4, 1e-2, 0.1, 0.3])
    ap.add_argument("--delta", type=float, default=SelectionConfig.delta)
    ap.add_argument("--seed", type=int, default=SelectionConfig.seed)
    args = ap.parse_args()
    cfg = SelectionConfig(delta=args.delta, seed=args.seed)
    print(f"{'noise':>8} {'groups':>6} {'full cond':>10} {'full RSS':>10} {'red cond':>9} {'red RSS':>9} {'cross r':>8}")
    for noise in args.noise:
        r = row(cfg, noise)
        full_rss = "singular" if r["full_rss"] is None else f"{r['full_rss']:.4g}"
        cross = "-" if r["cross_r"] is None else f"{r['cross_r']:.3f}"
        print(f"{r['noise']:8.0e} {r['groups']:6d} {r['full_cond']:10.3g} {full_rss:>10} "
              f"{r['reduced_cond']:9.3g} {r['reduced_rss']:9.4g} {cross:>8}")


if __name__ == "__main__":
    main()
