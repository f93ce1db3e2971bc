from .dataset import (CalibrationDataset, CalibrationSample, SweepProtocol, generate_dataset,
                      sweep_depths)
from .evaluation import (THRESHOLDS, RankingRow, ToleranceReport, cross_validate, fold_assignment,
                         format_ranking, select_model, split_dataset, tolerance_from_errors,
                         tolerance_report)
from .models import (MODEL_KINDS, ModelSpec, RegressionModel, default_specs, predict, resolve_kind,
                     resolve_spec, train_model)
