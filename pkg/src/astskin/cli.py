"""Command-line entry point: ``astskin calibrate generate|train``, ``astskin trial run``, ``astskin report``."""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .calib import (ModelSpec, default_specs, format_ranking, generate_dataset, select_model,
                    split_dataset, tolerance_report, train_model)
from .config import load_config
from .errors import ConfigError, FormatError, ProtocolError, TrainingError, WorkbenchError
from .trials import STRAWBERRIES, CampaignReport, run_campaign

EXIT_CONFIG, EXIT_PROTOCOL, EXIT_TRAINING, EXIT_ABORT = 2, 3, 4, 5

log = logging.getLogger("astskin")


def _common(p):
    p.add_argument("--config", metavar="PATH", help="flat key = value config file ('#' comments)")
    p.add_argument("--seed", type=int, metavar="N", help="master seed (overrides config)")
    p.add_argument("--out", metavar="DIR", help="output directory (overrides config; default 'out')")


def build_parser():
    parser = argparse.ArgumentParser(prog="astskin", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    cal = sub.add_parser("calibrate", help="calibration dataset and model")
    cal_sub = cal.add_subparsers(dest="action", required=True)
    gen = cal_sub.add_parser("generate", help="run the press sweep and write dataset.csv")
    _common(gen)
    gen.add_argument("--repeats", type=int, metavar="N", help="presses per (subsection, depth)")
    gen.set_defaults(func=cmd_calibrate_generate)

    tr = cal_sub.add_parser("train", help="cross-validate models, select the best, write model.json")
    _common(tr)
    tr.add_argument("--dataset", metavar="PATH", help="dataset CSV (default OUT/dataset.csv)")
    tr.add_argument("--models", metavar="LIST",
                    help="comma-separated model kinds (default: all six; short names linear, tree, gp-exp, ...)")
    tr.set_defaults(func=cmd_calibrate_train)

    trial = sub.add_parser("trial", help="simulated gripping trials")
    trial_sub = trial.add_subparsers(dest="action", required=True)
    run = trial_sub.add_parser("run", help="run the pick-and-drop campaign")
    _common(run)
    run.add_argument("--model", metavar="PATH", help="model JSON (default OUT/model.json)")
    run.add_argument("--samples", metavar="PATH", help="CSV id,weight_n,peduncle_diameter_mm (default: built-in five)")
    run.add_argument("--trials", type=int, default=5, metavar="N", help="trials per sample (default 5)")
    run.set_defaults(func=cmd_trial_run)

    rep = sub.add_parser("report", help="print saved calibration and campaign reports")
    _common(rep)
    rep.set_defaults(func=cmd_report)
    return parser


def _config(args, **extra):
    overrides = {"seed": args.seed, "out": args.out, **extra}
    return load_config(args.config, overrides)


def cmd_calibrate_generate(args):
    cfg = _config(args, repeats=args.repeats)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    ds = generate_dataset(cfg.protocol, cfg.sim, cfg.seed)
    path = io.write_dataset(ds, out / "dataset.csv")
    print(f"wrote {len(ds)} samples to {path}")
    return 0


def cmd_calibrate_train(args):
    cfg = _config(args)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    ds = io.read_dataset(args.dataset or out / "dataset.csv")
    if args.models:
        specs = [ModelSpec(name.strip()) for name in args.models.split(",") if name.strip()]
    else:
        specs = default_specs()
    train, test = split_dataset(ds, 0.9, cfg.seed)
    best, ranking = select_model(train, specs, k=10, seed=cfg.seed)
    model = train_model(train, best, seed=cfg.seed)
    report = tolerance_report(model, test)
    io.save_model(model, out / "model.json")
    io.write_json({
        "format_version": 1,
        "n_train": len(train),
        "n_test": len(test),
        "selected": best.to_dict(),
        "ranking": [{"kind": r.spec.kind, "cv_rmse": r.rmse if r.ok else None, "error": r.error,
                     "hyperparameters": dict(r.spec.hyperparameters)} for r in ranking],
        "holdout": report.to_dict(),
    }, out / "calibration_report.json")
    print(f"train {len(train)} / test {len(test)} samples, 10-fold CV")
    print(format_ranking(ranking))
    print(f"selected {best.kind}")
    print(report.format())
    return 0


def cmd_trial_run(args):
    cfg = _config(args)
    out = Path(cfg.out)
    model = io.load_model(args.model or out / "model.json")
    samples = io.read_samples(args.samples) if args.samples else list(STRAWBERRIES)
    logs_dir = out / "trials"
    logs_dir.mkdir(parents=True, exist_ok=True)

    def save(sample_id, trial, tl):
        io.write_trial_log(tl, logs_dir / f"sample{sample_id}_trial{trial}.jsonl")

    report = run_campaign(samples, model, args.trials, cfg.trial, cfg.controller, cfg.sim,
                          seed=cfg.seed, on_trial=save)
    io.write_json(report.to_dict(), out / "campaign.json")
    print(report.format())
    for s, t, reason, msg in report.failures:
        print(f"sample {s} trial {t}: {reason}: {msg}")
    return EXIT_ABORT if report.n_aborts else 0


def cmd_report(args):
    cfg = _config(args)
    out = Path(cfg.out)
    found = False
    cal = out / "calibration_report.json"
    if cal.exists():
        found = True
        d = json.loads(cal.read_text())
        print(f"{'model':<26} {'CV RMSE (N)':>12}")
        for r in d["ranking"]:
            rmse = f"{r['cv_rmse']:>12.4f}" if r["cv_rmse"] is not None else f"{'failed':>12}"
            print(f"{r['kind']:<26} {rmse}")
        h = d["holdout"]
        for t, p in zip(h["thresholds"], h["pct_within"]):
            print(f"within +/-{t:.1f} N: {p:.5f} %")
        print(f"MAE {h['mae']:.4f} N (std {h['mae_std']:.4f} N), RMSE {h['rmse']:.4f} N")
    camp = out / "campaign.json"
    if camp.exists():
        found = True
        d = json.loads(camp.read_text())
        mae = np.array([[np.nan if v is None else v for v in row] for row in d["mae_matrix"]], dtype=float)
        rep = CampaignReport(d["samples"], mae,
                             [(e["sample"], e["trial"], e["events"]) for e in d["slip_events"]],
                             [(f["sample"], f["trial"], f["reason"], f["message"]) for f in d["failures"]],
                             d["f_d"], d["seed"])
        print(rep.format())
    if not found:
        raise ConfigError(f"no reports found in {out}")
    return 0


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except TrainingError as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except (FormatError, OSError, WorkbenchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
