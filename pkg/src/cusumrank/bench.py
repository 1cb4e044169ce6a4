"""Benchmark harness: configuration, model artifacts, and the CLI.

Subcommands:

* ``train``         fit one model from a config, write artifact + metrics
* ``predict``       apply a saved artifact to a data file
* ``bench``         cross-partition MAE table for one dataset
* ``verify-bounds`` run the seeded mistake-bound suite

Configs are flat key/value TOML; unknown keys are rejected before any
computation.  All outputs are deterministic functions of (config, seed):
reports carry no timestamps and floats are printed with fixed formats,
so reruns are byte-identical.
"""

import argparse
import sys
from dataclasses import dataclass, field, fields

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .core import RankedDataset, absolute_loss, mean_absolute_error
from .cusum import CuSumModel, CuSumProblem, cusum_fit_online, cusum_fit_pa, cusum_predict
from .data import Discretizer, Normalizer, discretize, load_partition_file, parse_raw, partition
from .engine import UpdateRule, sp_train_online
from .ensemble import CountingModel, counting_fit_online, counting_predict
from .features import mlp_embed, mlp_train, MLPRegressor
from .kernel import DualCuSumModel, Kernel, dual_fit_online, dual_predict
from .prank import PRankModel, prank_fit_online, prank_predict
from .synthlab import generate_prank_separable, generate_rank_separable, verify_bounds
from .core import WeightStack

ALGORITHMS = ("cusum", "cusum-pa", "prank", "counting", "kernel-cusum")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated run settings; see module docstring for the file format."""

    dataset: str = ""
    bins: int = 5
    binning: str = "equal-frequency"
    normalization: str = "standardize"
    algorithm: str = "cusum"
    epochs: int = 50
    delta: float = 0.1
    kernel: str = "linear"
    averaging: bool = False
    cost_scale: float = 0.0
    shrinkage: float = 1.0
    features_enabled: bool = False
    hidden: int = 100
    lr: float = 0.001
    patience: int = 100
    max_mlp_epochs: int = 20000
    val_fraction: float = 0.2
    seed: int = 0
    train_fraction: float = 0.0  # 0 means "no holdout" for train, default 0.75 in bench
    train_size: int = 0
    folds: int = 20
    partitions: str = ""
    epochs_grid: list = field(default_factory=list)
    cost_scale_grid: list = field(default_factory=list)
    normalization_grid: list = field(default_factory=list)
    model_out: str = "model.txt"
    report_out: str = "report.csv"
    # verify-bounds generator settings
    n: int = 200
    dim: int = 10
    radius: float = 1.4142135623730951
    seeds: int = 100
    learner: str = "cusum-vanilla"

    def validate(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.bins < 2:
            raise ConfigError("bins must be >= 2")
        if self.binning not in ("equal-width", "equal-frequency"):
            raise ConfigError(f"unknown binning {self.binning!r}")
        if self.normalization not in ("standardize", "minmax", "none"):
            raise ConfigError(f"unknown normalization {self.normalization!r}")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        if self.train_fraction and self.train_size:
            raise ConfigError("give at most one of train_fraction and train_size")
        if not 0.0 <= self.train_fraction < 1.0:
            raise ConfigError("train_fraction must be in [0, 1)")
        if self.folds < 1:
            raise ConfigError("folds must be >= 1")
        try:
            Kernel.from_spec(self.kernel)
        except ValueError as exc:
            raise ConfigError(f"bad kernel spec {self.kernel!r}: {exc}") from None
        return self


def load_config(path=None, overrides=None):
    """Parse a flat TOML config file and apply CLI overrides."""
    raw = {}
    if path:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    cfg = RunConfig(**raw)
    for key, val in (overrides or {}).items():
        if val is not None:
            setattr(cfg, key, val)
    return cfg.validate()


# ---------------------------------------------------------------------------
# model artifacts
# ---------------------------------------------------------------------------

_META_ORDER = (
    "format",
    "algo",
    "r",
    "d",
    "raw_dim",
    "binning",
    "normalization",
    "features",
    "activation",
    "hidden",
    "kernel",
)


@dataclass
class ModelArtifact:
    """Versioned text snapshot of a trained pipeline.

    `meta` holds the header key/values; `blocks` maps block names to 2-d
    float arrays.  Floats are written with 17 significant digits, which
    round-trips IEEE doubles exactly, so save -> load -> save is
    byte-identical.
    """

    meta: dict
    blocks: dict

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    def dumps(self):
        lines = []
        for key in _META_ORDER:
            if key in self.meta:
                lines.append(f"{key}={self.meta[key]}")
        for name in sorted(self.blocks):
            arr = np.atleast_2d(np.asarray(self.blocks[name], dtype=np.float64))
            lines.append(f"block {name} {arr.shape[0]} {arr.shape[1]}")
            for row in arr:
                lines.append(" ".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, path):
        meta, blocks = {}, {}
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        i = 0
        while i < len(lines) and not lines[i].startswith("block "):
            key, _, val = lines[i].partition("=")
            meta[key] = val
            i += 1
        while i < len(lines):
            _, name, nrows, ncols = lines[i].split()
            nrows, ncols = int(nrows), int(ncols)
            rows = [[float(t) for t in lines[i + 1 + j].split()] for j in range(nrows)]
            arr = np.array(rows, dtype=np.float64).reshape(nrows, ncols)
            blocks[name] = arr
            i += 1 + nrows
        if meta.get("format") != "1":
            raise ValueError(f"unsupported artifact format {meta.get('format')!r}")
        return cls(meta=meta, blocks=blocks)


@dataclass
class TrainedPipeline:
    """Everything needed to rank new raw rows."""

    config: RunConfig
    discretizer: Discretizer
    raw_normalizer: Normalizer
    model: object
    mlp: MLPRegressor = None
    embed_normalizer: Normalizer = None

    def rank_features(self, raw_features):
        """Raw rows -> final ordinal-model inputs (bias slot appended)."""
        X = np.atleast_2d(np.asarray(raw_features, dtype=np.float64))
        if self.mlp is not None:
            X = self.embed_normalizer.transform(mlp_embed(self.mlp, self.raw_normalizer.transform(X)))
        else:
            X = self.raw_normalizer.transform(X)
        return np.hstack([X, -np.ones((X.shape[0], 1))])

    def predict(self, raw_features):
        X = self.rank_features(raw_features)
        return np.array([predict_one(self.model, x) for x in X], dtype=np.int64)


def predict_one(model, x):
    if isinstance(model, CuSumModel):
        return cusum_predict(model, x)
    if isinstance(model, PRankModel):
        return prank_predict(model, x[:-1])
    if isinstance(model, CountingModel):
        return counting_predict(model, x)
    if isinstance(model, DualCuSumModel):
        return dual_predict(model, x)
    raise TypeError(f"unknown model type {type(model).__name__}")


def pipeline_to_artifact(pipe):
    cfg = pipe.config
    model = pipe.model
    meta = {
        "format": "1",
        "algo": cfg.algorithm,
        "binning": cfg.binning,
        "normalization": cfg.normalization,
        "raw_dim": str(pipe.raw_normalizer.center.shape[0]),
        "features": "mlp" if pipe.mlp is not None else "none",
    }
    blocks = {
        "cuts": pipe.discretizer.cuts[None, :],
        "norm_center": pipe.raw_normalizer.center[None, :],
        "norm_scale": pipe.raw_normalizer.scale[None, :],
    }
    if pipe.mlp is not None:
        meta["activation"] = pipe.mlp.activation
        meta["hidden"] = str(pipe.mlp.hidden)
        blocks["mlp_w_in"] = pipe.mlp.w_in
        blocks["mlp_b_in"] = pipe.mlp.b_in[None, :]
        blocks["mlp_w_out"] = pipe.mlp.w_out[None, :]
        blocks["mlp_b_out"] = np.array([[pipe.mlp.b_out]])
        blocks["embed_center"] = pipe.embed_normalizer.center[None, :]
        blocks["embed_scale"] = pipe.embed_normalizer.scale[None, :]

    if isinstance(model, (CuSumModel, CountingModel)):
        meta["r"], meta["d"] = str(model.rank_count), str(model.dim)
        blocks["levels"] = model.weights.levels
    elif isinstance(model, PRankModel):
        meta["r"], meta["d"] = str(model.rank_count), str(model.feature_dim + 1)
        blocks["direction"] = model.direction[None, :]
        blocks["thresholds"] = model.thresholds[None, :]
    else:
        meta["r"], meta["d"] = str(model.rank_count), str(model.dim)
        meta["kernel"] = model.kernel.spec()
        blocks["support"] = model.support_x
        blocks["coefficients"] = model.coefficients.astype(np.float64)
        blocks["support_index"] = np.array([model.support_index], dtype=np.float64)
    return ModelArtifact(meta=meta, blocks=blocks)


def artifact_to_pipeline(art):
    meta, blocks = art.meta, art.blocks
    algo = meta["algo"]
    r, d = int(meta["r"]), int(meta["d"])

    disc = Discretizer(meta["binning"], r)
    disc.cuts = blocks["cuts"][0]
    raw_norm = Normalizer(meta["normalization"])
    raw_norm.center, raw_norm.scale = blocks["norm_center"][0], blocks["norm_scale"][0]

    mlp = embed_norm = None
    if meta.get("features") == "mlp":
        hidden = int(meta["hidden"])
        mlp = MLPRegressor(blocks["mlp_w_in"].shape[0], hidden, activation=meta["activation"])
        mlp.w_in = blocks["mlp_w_in"]
        mlp.b_in = blocks["mlp_b_in"][0]
        mlp.w_out = blocks["mlp_w_out"][0]
        mlp.b_out = float(blocks["mlp_b_out"][0, 0])
        embed_norm = Normalizer("standardize")
        embed_norm.center, embed_norm.scale = blocks["embed_center"][0], blocks["embed_scale"][0]

    if algo in ("cusum", "cusum-pa"):
        model = CuSumModel(r, d, WeightStack(r, d, blocks["levels"]))
    elif algo == "counting":
        model = CountingModel(r, d, WeightStack(r, d, blocks["levels"]))
    elif algo == "prank":
        model = PRankModel(d - 1, r, blocks["direction"][0], blocks["thresholds"][0])
    else:
        model = DualCuSumModel(r, d, Kernel.from_spec(meta["kernel"]))
        model.support_x = blocks["support"]
        model.coefficients = np.round(blocks["coefficients"]).astype(np.int64)
        model.support_index = [int(v) for v in blocks["support_index"][0]]

    cfg = RunConfig(algorithm=algo, bins=r, binning=meta["binning"], normalization=meta["normalization"])
    return TrainedPipeline(cfg, disc, raw_norm, model, mlp, embed_norm)


# ---------------------------------------------------------------------------
# training protocol
# ---------------------------------------------------------------------------


def _subset(dataset, idx):
    return RankedDataset(
        tuple(dataset.examples[i] for i in idx), dataset.rank_count, dataset.dim
    )


def fit_ordinal(cfg, train_ds):
    """Dispatch to the configured ordinal learner; returns (model, trace)."""
    algo = cfg.algorithm
    if algo == "cusum":
        fancy = cfg.averaging or cfg.cost_scale > 0 or cfg.shrinkage != 1.0
        if not fancy:
            return cusum_fit_online(train_ds, cfg.epochs)
        problem = CuSumProblem(train_ds.rank_count, train_ds.dim)
        aug = (absolute_loss, cfg.cost_scale) if cfg.cost_scale > 0 else None
        w, w_avg, trace = sp_train_online(
            problem,
            UpdateRule("vanilla"),
            train_ds,
            epochs=cfg.epochs,
            averaging=cfg.averaging,
            cost_augment=aug,
            shrinkage=cfg.shrinkage,
        )
        return problem.as_model(w_avg if cfg.averaging else w), trace
    if algo == "cusum-pa":
        return cusum_fit_pa(train_ds, cfg.epochs, cfg.delta)
    if algo == "prank":
        return prank_fit_online(train_ds, cfg.epochs)
    if algo == "counting":
        return counting_fit_online(train_ds, cfg.epochs), None
    return dual_fit_online(train_ds, Kernel.from_spec(cfg.kernel), cfg.epochs)


def run_training(cfg, raw, train_idx, test_idx=None):
    """The two-step protocol: optional feature learning, then ordinal fit.

    Normalizers and the feature learner see training rows only; the
    discretizer is fitted on the full target column (the benchmark
    datasets ship with dataset-level binning).
    """
    disc, ranks = discretize(raw.targets, cfg.binning, cfg.bins)
    train_idx = np.asarray(train_idx, dtype=np.int64)

    raw_norm = Normalizer(cfg.normalization).fit(raw.features[train_idx])
    mlp = embed_norm = None
    if cfg.features_enabled:
        Xn = raw_norm.transform(raw.features)
        rng = np.random.default_rng(cfg.seed)
        order = rng.permutation(len(train_idx))
        n_val = max(1, int(round(len(train_idx) * cfg.val_fraction)))
        val_rows = train_idx[order[:n_val]]
        fit_rows = train_idx[order[n_val:]]
        if fit_rows.size == 0:
            raise ConfigError("val_fraction leaves no MLP training rows")
        mlp = mlp_train(
            (Xn[fit_rows], raw.targets[fit_rows]),
            (Xn[val_rows], raw.targets[val_rows]),
            cfg.hidden,
            lr=cfg.lr,
            patience=cfg.patience,
            seed=cfg.seed,
            max_epochs=cfg.max_mlp_epochs,
        )
        E = mlp_embed(mlp, Xn)
        embed_norm = Normalizer("standardize").fit(E[train_idx])
        final = embed_norm.transform(E)
    else:
        final = raw_norm.transform(raw.features)

    all_ds = RankedDataset.from_arrays(
        np.hstack([final, -np.ones((final.shape[0], 1))]), list(ranks), rank_count=cfg.bins
    )
    train_ds = _subset(all_ds, train_idx)
    model, trace = fit_ordinal(cfg, train_ds)
    pipe = TrainedPipeline(cfg, disc, raw_norm, model, mlp, embed_norm)

    metrics = {
        "train_mae": mean_absolute_error(
            train_ds.rank_vector(), [predict_one(model, ex.features) for ex in train_ds]
        ),
        "test_mae": float("nan"),
        "mistakes": float(trace.mistakes()) if trace is not None else float("nan"),
        "epochs": float(cfg.epochs),
    }
    if test_idx is not None and len(test_idx) > 0:
        test_ds = _subset(all_ds, np.asarray(test_idx, dtype=np.int64))
        metrics["test_mae"] = mean_absolute_error(
            test_ds.rank_vector(), [predict_one(model, ex.features) for ex in test_ds]
        )
    return pipe, metrics


def run_bench(cfg, raw):
    """Per-partition protocol with optional selection on partition 0.

    Returns (selected config, list of per-fold metric dicts).  When any
    hyperparameter grid is configured, partition 0 picks the combination
    with the best test MAE and the remaining partitions are scored with
    it; otherwise every partition is scored with the configured values.
    """
    folds = _make_folds(cfg, len(raw))
    grids_on = bool(cfg.epochs_grid or cfg.cost_scale_grid or cfg.normalization_grid)
    chosen = cfg
    scored = folds
    if grids_on:
        if len(folds) < 2:
            raise ConfigError("hyperparameter grids need at least 2 folds")
        sel_train, sel_test = folds[0]
        best = (np.inf, None)
        for ep in cfg.epochs_grid or [cfg.epochs]:
            for cs in cfg.cost_scale_grid or [cfg.cost_scale]:
                for nm in cfg.normalization_grid or [cfg.normalization]:
                    cand = RunConfig(**{**cfg.__dict__, "epochs": ep, "cost_scale": cs, "normalization": nm})
                    _, m = run_training(cand, raw, sel_train, sel_test)
                    if m["test_mae"] < best[0]:
                        best = (m["test_mae"], cand)
        chosen = best[1]
        scored = folds[1:]

    rows = []
    for k, (tr, te) in enumerate(scored):
        _, m = run_training(chosen, raw, tr, te)
        rows.append({"fold": k, **m})
    return chosen, rows


def _make_folds(cfg, n):
    if cfg.partitions:
        test_sets = load_partition_file(cfg.partitions)
        folds = []
        for te in test_sets:
            mask = np.ones(n, dtype=bool)
            mask[te] = False
            folds.append((np.nonzero(mask)[0], np.sort(te)))
        return folds
    folds = []
    for k in range(cfg.folds):
        if cfg.train_size:
            tr, te = partition(n, cfg.seed + k, train_size=cfg.train_size)
        else:
            frac = cfg.train_fraction or 0.75
            tr, te = partition(n, cfg.seed + k, train_fraction=frac)
        folds.append((tr, te))
    return folds


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def _metrics_csv(metrics):
    lines = ["metric,value"]
    for key in ("train_mae", "test_mae", "mistakes", "epochs"):
        lines.append(f"{key},{metrics[key]:.17g}")
    return "\n".join(lines) + "\n"


def _bench_csv(rows):
    lines = ["fold,train_mae,test_mae,mistakes"]
    for m in rows:
        lines.append(f"{m['fold']},{m['train_mae']:.17g},{m['test_mae']:.17g},{m['mistakes']:.17g}")
    test = np.array([m["test_mae"] for m in rows])
    mean = float(np.mean(test))
    se = float(np.std(test, ddof=1) / np.sqrt(len(test))) if len(test) > 1 else 0.0
    lines.append(f"mean,,{mean:.17g},")
    lines.append(f"stderr,,{se:.17g},")
    return "\n".join(lines) + "\n", mean, se


def _bench_table(cfg, rows, mean, se):
    out = [f"algorithm {cfg.algorithm}, {cfg.bins} bins, epochs {cfg.epochs}"]
    out.append(f"{'fold':>6} {'train MAE':>10} {'test MAE':>10}")
    for m in rows:
        out.append(f"{m['fold']:>6} {m['train_mae']:>10.4f} {m['test_mae']:>10.4f}")
    out.append(f"{'mean':>6} {'':>10} {mean:>10.4f}")
    out.append(f"{'se':>6} {'':>10} {se:>10.4f}")
    return "\n".join(out)


def cmd_train(args):
    cfg = load_config(args.config, _overrides(args))
    if not cfg.dataset:
        raise ConfigError("config needs a dataset path")
    raw = parse_raw(cfg.dataset)
    if cfg.train_fraction or cfg.train_size:
        if cfg.train_size:
            tr, te = partition(len(raw), cfg.seed, train_size=cfg.train_size)
        else:
            tr, te = partition(len(raw), cfg.seed, train_fraction=cfg.train_fraction)
    else:
        tr, te = np.arange(len(raw)), None
    pipe, metrics = run_training(cfg, raw, tr, te)
    pipeline_to_artifact(pipe).save(cfg.model_out)
    with open(cfg.report_out, "w", encoding="utf-8") as fh:
        fh.write(_metrics_csv(metrics))
    print(f"wrote {cfg.model_out} and {cfg.report_out}")
    print(f"train MAE {metrics['train_mae']:.4f}" + (f", test MAE {metrics['test_mae']:.4f}" if te is not None else ""))
    return 0


def cmd_predict(args):
    art = ModelArtifact.load(args.model)
    pipe = artifact_to_pipeline(art)
    raw_dim = int(art.meta["raw_dim"])
    table = parse_raw(args.data)
    if table.features.shape[1] == raw_dim:
        X, targets = table.features, table.targets  # last column is the target
    elif table.features.shape[1] + 1 == raw_dim:
        X = np.hstack([table.features, table.targets[:, None]])  # features only
        targets = None
    else:
        raise ConfigError(
            f"data has {table.features.shape[1] + 1} columns; model expects {raw_dim} features"
        )
    preds = pipe.predict(X)
    lines = ["index,prediction,target_rank"]
    target_ranks = pipe.discretizer.transform(targets) if targets is not None else None
    for i, p in enumerate(preds):
        t = str(target_ranks[i]) if target_ranks is not None else ""
        lines.append(f"{i},{p},{t}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    if target_ranks is not None:
        print(f"MAE {mean_absolute_error(target_ranks, preds):.4f}")
    return 0


def cmd_bench(args):
    cfg = load_config(args.config, _overrides(args))
    if not cfg.dataset:
        raise ConfigError("config needs a dataset path")
    raw = parse_raw(cfg.dataset)
    chosen, rows = run_bench(cfg, raw)
    csv_text, mean, se = _bench_csv(rows)
    with open(cfg.report_out, "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    print(_bench_table(chosen, rows, mean, se))
    print(f"wrote {cfg.report_out}")
    return 0


def cmd_verify_bounds(args):
    cfg = load_config(args.config, _overrides(args))
    if cfg.learner == "cusum-pa" and cfg.delta > 1.0:
        raise ConfigError(
            "the passive-aggressive absolute-loss bound is only checked for "
            "delta <= 1; rerun with a smaller delta"
        )
    lines = ["seed,learner,separable,check,bound,cumulative,passed,violating_step"]
    failures = 0
    for s in range(cfg.seeds):
        if cfg.learner == "prank":
            problem = generate_prank_separable(s, cfg.n, cfg.dim, cfg.bins, cfg.delta, cfg.radius)
        else:
            problem = generate_rank_separable(s, cfg.n, cfg.dim, cfg.bins, cfg.delta, cfg.radius)
        result = verify_bounds(problem, cfg.learner, cfg.epochs)
        if not result.separable:
            failures += 1
            lines.append(f"{s},{cfg.learner},no,,,,no,")
            continue
        for chk in result.checks:
            cum = result.ledger.cumulative_loss[-1]
            ok = "yes" if chk.passed else "no"
            step = "" if chk.violating_step is None else str(chk.violating_step)
            lines.append(
                f"{s},{cfg.learner},yes,{chk.name},{chk.bound:.17g},{cum:.17g},{ok},{step}"
            )
            if not chk.passed:
                failures += 1
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    if failures:
        print(f"{failures} violation(s) found")
        return 1
    print(f"all bounds held over {cfg.seeds} seeds")
    return 0


def _overrides(args):
    return {
        "bins": getattr(args, "bins", None),
        "algorithm": getattr(args, "algo", None),
        "seed": getattr(args, "seed", None),
        "epochs": getattr(args, "epochs", None),
        "delta": getattr(args, "delta", None),
        "dataset": getattr(args, "dataset", None),
        "learner": getattr(args, "learner", None),
        "seeds": getattr(args, "seeds", None),
    }


def _add_common(p):
    p.add_argument("--config", help="flat TOML config file")
    p.add_argument("--bins", type=int)
    p.add_argument("--algo", choices=ALGORITHMS)
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--delta", type=float)


def build_parser():
    parser = argparse.ArgumentParser(prog="cusumrank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit one model and write artifact + metrics")
    _add_common(p)
    p.add_argument("--dataset", help="override the config dataset path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="apply a saved model to a data file")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("bench", help="cross-partition MAE table")
    _add_common(p)
    p.add_argument("--dataset")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify-bounds", help="run the seeded mistake-bound suite")
    _add_common(p)
    p.add_argument("--learner", choices=("cusum-vanilla", "cusum-pa", "prank", "engine-generic"))
    p.add_argument("--seeds", type=int)
    p.add_argument("--out", help="also write the ledger table as CSV")
    p.set_defaults(func=cmd_verify_bounds)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
