"""On-disk formats: dataset CSV, model JSON, trial JSON-lines and campaign reports.

Floats are written with 17 significant digits (CSV) or ``repr`` (JSON), both
of which round-trip IEEE doubles exactly.
"""

import json
import math
from pathlib import Path

import numpy as np

from .calib.dataset import CalibrationDataset
from .calib.models import ModelSpec, RegressionModel, Standardization
from .errors import FormatError, ParseError
from .trials import PHASES, TickRecord, TrialLog

FORMAT_VERSION = 1
_BASE_COLUMNS = ("subsection", "depth_mm", "force_n")


def dataset_header(n_bands):
    return ",".join(_BASE_COLUMNS + tuple(f"f_{i:03d}" for i in range(n_bands)))


def _fmt(x):
    return format(float(x), ".17g")


def write_dataset(ds: CalibrationDataset, path):
    path = Path(path)
    lines = [dataset_header(ds.n_bands)]
    for s, d, f, row in zip(ds.subsection, ds.depth, ds.force, ds.features):
        lines.append(",".join([str(int(s)), _fmt(d), _fmt(f)] + [_fmt(v) for v in row]))
    try:
        path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write dataset to {path}: {exc}") from exc
    return path


def read_dataset(path) -> CalibrationDataset:
    """Read a calibration CSV (simulated or recorded on a real rig)."""
    path = Path(path)
    with path.open("r", encoding="ascii", newline="") as fh:
        text = fh.read().splitlines()
    if not text:
        raise ParseError("empty file, expected a header", line=1, path=path)
    cols = text[0].split(",")
    n_bands = len(cols) - len(_BASE_COLUMNS)
    if n_bands < 1 or text[0] != dataset_header(n_bands):
        raise ParseError(f"bad header {text[0]!r}; expected subsection,depth_mm,force_n,f_000,...",
                         line=1, path=path)
    sub, depth, force, feats = [], [], [], []
    for lineno, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != len(cols):
            raise ParseError(f"expected {len(cols)} columns, got {len(fields)}", line=lineno, path=path)
        try:
            sub.append(int(fields[0]))
            values = [float(v) for v in fields[1:]]
        except ValueError as exc:
            raise ParseError(f"non-numeric field: {exc}", line=lineno, path=path) from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite value", line=lineno, path=path)
        depth.append(values[0])
        force.append(values[1])
        feats.append(values[2:])
    if not force:
        raise ParseError("no data rows", line=len(text), path=path)
    return CalibrationDataset(np.array(sub), np.array(depth), np.array(force),
                              np.array(feats).reshape(len(force), n_bands),
                              {"source": str(path)})


def _listify(state):
    return {k: (np.asarray(v).tolist() if isinstance(v, np.ndarray) else v) for k, v in state.items()}


def model_to_dict(model: RegressionModel):
    st = model.standardization
    return {
        "format_version": FORMAT_VERSION,
        "spec": model.spec.to_dict(),
        "standardization": {"x_mean": st.x_mean.tolist(), "x_scale": st.x_scale.tolist(),
                            "y_mean": float(st.y_mean)},
        "state": _listify(model.state),
    }


def model_from_dict(d) -> RegressionModel:
    if not isinstance(d, dict):
        raise FormatError("model file must hold a JSON object")
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported model format_version {version!r}; this reader handles {FORMAT_VERSION}")
    for key in ("spec", "standardization", "state"):
        if key not in d:
            raise FormatError(f"model file is missing {key!r}")
    try:
        spec = ModelSpec.from_dict(d["spec"])
        st = d["standardization"]
        std = Standardization(np.array(st["x_mean"], dtype=float), np.array(st["x_scale"], dtype=float),
                              float(st["y_mean"]))
        state = dict(d["state"])
        if spec.is_gp:
            state = {"X": np.array(state["X"], dtype=float), "alpha": np.array(state["alpha"], dtype=float)}
        elif spec.kind == "linear-least-squares":
            state = {"weights": list(state["weights"]), "intercept": float(state["intercept"])}
        else:
            state = {"nodes": [list(n) for n in state["nodes"]]}
        return RegressionModel(spec, std, state)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed model file: {exc}") from exc


def save_model(model, path):
    path = Path(path)
    path.write_text(json.dumps(model_to_dict(model), indent=1) + "\n", encoding="utf-8")
    return path


def load_model(path) -> RegressionModel:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_dict(d)


def write_trial_log(trial_log: TrialLog, path):
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for r in trial_log.records:
                fh.write(json.dumps(r.to_dict()) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write trial log {path}: {exc}") from exc
    return path


def read_trial_log(path, sample_id=0, seed=0) -> TrialLog:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                rec = TickRecord(float(d["t"]), d["phase"], float(d["f_m"]), float(d["f_true"]), float(d["g_t"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad trial record: {exc}", line=lineno, path=path) from None
            if rec.phase not in PHASES:
                raise ParseError(f"unknown phase {rec.phase!r}", line=lineno, path=path)
            records.append(rec)
    return TrialLog(records, sample_id=sample_id, seed=seed)


def write_json(obj, path):
    path = Path(path)
    path.write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")
    return path


def read_samples(path):
    """Strawberry samples from a CSV with header ``id,weight_n,peduncle_diameter_mm``."""
    from .trials import StrawberrySample

    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != "id,weight_n,peduncle_diameter_mm":
        raise ParseError("expected header id,weight_n,peduncle_diameter_mm", line=1, path=path)
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        f = line.split(",")
        if len(f) != 3:
            raise ParseError(f"expected 3 columns, got {len(f)}", line=lineno, path=path)
        try:
            out.append(StrawberrySample(int(f[0]), float(f[1]), float(f[2])))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from None
    return out
