"""Run the full calibrate -> select -> trial pipeline and print the model ranking,
holdout tolerance table and campaign MAE matrix next to the hardware reference numbers."""

import argparse
import time

from astskin.calib import (default_specs, format_ranking, generate_dataset, select_model, split_dataset,
                           tolerance_report, train_model)
from astskin.trials import STRAWBERRIES, run_campaign

# reference values from the physical rig
HW_RMSE = {"linear-least-squares": 0.91, "regression-tree": 0.42, "gp-rational-quadratic": 0.28,
           "gp-squared-exponential": 0.40, "gp-matern-5/2": 0.34, "gp-exponential": 0.27}
HW_PCT = (91.13924, 99.27667, 99.81917, 100.0)
HW_SAMPLE_MAE = (0.116, 0.311, 0.293, 0.161, 0.090)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    ds = generate_dataset(seed=args.seed)
    train, test = split_dataset(ds, 0.9, args.seed)
    best, ranking = select_model(train, default_specs(), seed=args.seed)
    print(format_ranking(ranking))
    print("hardware rig:", ", ".join(f"{k} {v}" for k, v in HW_RMSE.items()))
    model = train_model(train, best, seed=args.seed)
    rep = tolerance_report(model, test)
    print(f"\nselected {best.kind}\n{rep.format()}")
    print("hardware rig % within:", HW_PCT, "MAE 0.16 N, std 0.22 N")

    camp = run_campaign(STRAWBERRIES, model, 5, seed=args.seed)
    print("\n" + camp.format())
    print("hardware rig per-sample average MAE:", HW_SAMPLE_MAE)
    print(f"\n{time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
