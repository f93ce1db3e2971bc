"""Sensitivity of kernel ranking and trial convergence to the surrogate's tunables.

Two sweeps:
  * noise_sigma x depth_jitter -> which model wins 10-fold CV (over several seeds)
  * compliance -> campaign failures and MAE
"""

import argparse
import itertools
from collections import Counter

import numpy as np

from astskin.calib import (ModelSpec, SweepProtocol, default_specs, generate_dataset, select_model,
                           split_dataset, train_model)
from astskin.skin import AttenuationModel, SkinSim
from astskin.trials import STRAWBERRIES, TrialConfig, run_campaign


def ranking_sweep(noises, jitters, seeds):
    for noise, jitter in itertools.product(noises, jitters):
        sim = SkinSim(attenuation=AttenuationModel(noise_sigma=noise))
        winners = Counter()
        for seed in seeds:
            ds = generate_dataset(SweepProtocol(depth_jitter=jitter), sim, seed)
            train, _ = split_dataset(ds, 0.9, seed)
            best, _ = select_model(train, default_specs(), seed=seed)
            winners[best.kind] += 1
        print(f"noise {noise:<6} jitter {jitter:<5} winners {dict(winners)}", flush=True)


def compliance_sweep(values, seed=0):
    ds = generate_dataset(seed=seed)
    train, _ = split_dataset(ds, 0.9, seed)
    model = train_model(train, ModelSpec("gp-exponential"), seed=seed)
    for c in values:
        rep = run_campaign(STRAWBERRIES, model, 5, TrialConfig(compliance=c), seed=seed)
        print(f"compliance {c:<6} failures {len(rep.failures):>2}  "
              f"sample avg MAE {np.round(rep.sample_average, 3)}", flush=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--skip-ranking", action="store_true")
    args = ap.parse_args()
    if not args.skip_ranking:
        ranking_sweep([0.002, 0.005], [0.0, 0.01, 0.02, 0.03], range(args.seeds))
    compliance_sweep([0.05, 0.07, 0.1, 0.125])


if __name__ == "__main__":
    main()
