"""Online ordinal regression via cumulative-sum rank perceptrons.

The library provides:

* the cumulative-sum ranker and its unit-step / passive-aggressive
  online learners (`cusum`),
* the generic structured perceptron they instantiate (`engine`),
* Ranking by Projecting with ordered thresholds (`prank`),
* the independent-perceptrons counting baseline (`ensemble`),
* a kernelized dual with per-level coefficients (`kernel`),
* planted-margin generators and the mistake-bound harness (`synthlab`),
* benchmark ingestion, the feature learner, and the CLI
  (`data`, `features`, `bench`).
"""

from .core import (
    LossFn,
    RankedDataset,
    RankedExample,
    WeightStack,
    absolute_loss,
    mean_absolute_error,
    zero_one_loss,
)
from .cusum import (
    CuSumModel,
    CuSumProblem,
    cusum_fit_online,
    cusum_fit_pa,
    cusum_predict,
    cusum_score,
    cusum_scores,
)
from .engine import (
    StructuredProblem,
    TrainTrace,
    UpdateRule,
    sp_predict,
    sp_step_pa,
    sp_train_online,
    sp_update_vanilla,
)
from .ensemble import CountingModel, counting_fit_online, counting_predict, monotone_violations
from .kernel import DualCuSumModel, Kernel, dual_fit_online, dual_predict
from .prank import (
    PRankModel,
    PRankProblem,
    prank_fit_online,
    prank_margin_check,
    prank_predict,
)
from .synthlab import (
    BoundLedger,
    PlantedProblem,
    check_loss_augmented,
    check_rank_separable,
    d0_dataset,
    d0_separator,
    generate_prank_separable,
    generate_rank_separable,
    verify_bounds,
)

__version__ = "0.1.0"
