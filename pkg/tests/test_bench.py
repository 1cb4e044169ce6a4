import numpy as np
import pytest

import cusumrank.synthlab as sl
from cusumrank.bench import (
    ConfigError,
    ModelArtifact,
    RunConfig,
    artifact_to_pipeline,
    load_config,
    main,
    pipeline_to_artifact,
    run_bench,
    run_training,
)
from cusumrank.data import parse_raw


def write_config(tmp_path, name="run.toml", **keys):
    lines = []
    for k, v in keys.items():
        if isinstance(v, bool):
            lines.append(f"{k} = {'true' if v else 'false'}")
        elif isinstance(v, (int, float)):
            lines.append(f"{k} = {v}")
        elif isinstance(v, list):
            lines.append(f"{k} = [{', '.join(str(x) for x in v)}]")
        else:
            lines.append(f'{k} = "{v}"')
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def synthetic_regression_file(tmp_path, n=120, d=4, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = X @ rng.normal(size=d) + 0.1 * rng.normal(size=n)
    rows = "\n".join(" ".join(f"{v:.6f}" for v in row) + f" {t:.6f}" for row, t in zip(X, y))
    path = tmp_path / "synth.txt"
    path.write_text(rows + "\n")
    return str(path)


D0 = "datasets/d0.txt"


class TestConfig:
    def test_unknown_key_is_named(self, tmp_path):
        path = write_config(tmp_path, learning_rate=0.1)
        with pytest.raises(ConfigError, match="learning_rate"):
            load_config(path)

    def test_overrides_apply(self, tmp_path):
        path = write_config(tmp_path, bins=5, algorithm="cusum")
        cfg = load_config(path, {"bins": 10, "algorithm": "prank"})
        assert cfg.bins == 10 and cfg.algorithm == "prank"

    def test_validation_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, "a.toml", algorithm="svm"))
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, "b.toml", bins=1))
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, "c.toml", delta=-0.5))
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, "d.toml", kernel="spline:2"))


class TestArtifacts:
    @pytest.mark.parametrize(
        "algo,extra",
        [
            ("cusum", {}),
            ("cusum-pa", {"delta": 0.3}),
            ("prank", {}),
            ("counting", {}),
            ("kernel-cusum", {"kernel": "rbf:gamma=0.5"}),
        ],
    )
    def test_save_load_save_is_byte_identical(self, tmp_path, algo, extra, rng):
        cfg = RunConfig(algorithm=algo, bins=3, binning="equal-width", epochs=10, **extra)
        raw = parse_raw(D0)
        pipe, _ = run_training(cfg, raw, np.arange(4))
        art = pipeline_to_artifact(pipe)
        p1, p2 = tmp_path / "m1.txt", tmp_path / "m2.txt"
        art.save(p1)
        ModelArtifact.load(p1).save(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_round_trip_predictions_identical(self, tmp_path, rng):
        path = synthetic_regression_file(tmp_path)
        raw = parse_raw(path)
        probe = rng.normal(size=(25, 4))
        for algo in ("cusum", "prank", "kernel-cusum", "counting"):
            cfg = RunConfig(algorithm=algo, bins=4, epochs=5)
            pipe, _ = run_training(cfg, raw, np.arange(60))
            art_path = tmp_path / f"{algo}.txt"
            pipeline_to_artifact(pipe).save(art_path)
            loaded = artifact_to_pipeline(ModelArtifact.load(art_path))
            assert np.array_equal(pipe.predict(probe), loaded.predict(probe))

    def test_mlp_pipeline_round_trip(self, tmp_path, rng):
        path = synthetic_regression_file(tmp_path)
        raw = parse_raw(path)
        cfg = RunConfig(
            algorithm="cusum", bins=3, epochs=5, features_enabled=True, hidden=4, patience=5
        )
        pipe, metrics = run_training(cfg, raw, np.arange(80), np.arange(80, 120))
        assert np.isfinite(metrics["test_mae"])
        art_path = tmp_path / "mlp.txt"
        pipeline_to_artifact(pipe).save(art_path)
        loaded = artifact_to_pipeline(ModelArtifact.load(art_path))
        probe = rng.normal(size=(10, 4))
        assert np.array_equal(pipe.predict(probe), loaded.predict(probe))


class TestTrainingRuns:
    def test_cusum_solves_d0(self):
        cfg = RunConfig(algorithm="cusum", bins=3, binning="equal-width", epochs=100)
        pipe, metrics = run_training(cfg, parse_raw(D0), np.arange(4))
        assert metrics["train_mae"] == 0.0

    def test_prank_cannot_solve_d0(self):
        cfg = RunConfig(algorithm="prank", bins=3, binning="equal-width", epochs=200)
        _, metrics = run_training(cfg, parse_raw(D0), np.arange(4))
        assert metrics["train_mae"] > 0.0

    def test_averaged_with_margin_runs(self, tmp_path):
        path = synthetic_regression_file(tmp_path)
        cfg = RunConfig(algorithm="cusum", bins=4, epochs=8, averaging=True, cost_scale=0.5)
        _, metrics = run_training(cfg, parse_raw(path), np.arange(80), np.arange(80, 120))
        assert np.isfinite(metrics["test_mae"])

    def test_bench_selects_on_first_fold_with_grids(self, tmp_path):
        path = synthetic_regression_file(tmp_path)
        cfg = RunConfig(
            dataset=path, algorithm="cusum", bins=3, folds=4, seed=1,
            train_fraction=0.7, epochs_grid=[2, 10],
        )
        chosen, rows = run_bench(cfg, parse_raw(path))
        assert chosen.epochs in (2, 10)
        assert len(rows) == 3  # fold 0 was spent on selection


class TestCli:
    def test_train_writes_artifact_and_report(self, tmp_path, capsys):
        model_out = tmp_path / "model.txt"
        report_out = tmp_path / "report.csv"
        cfg_path = write_config(
            tmp_path,
            dataset=D0,
            algorithm="cusum",
            bins=3,
            binning="equal-width",
            epochs=100,
            model_out=str(model_out),
            report_out=str(report_out),
        )
        assert main(["train", "--config", cfg_path]) == 0
        assert model_out.exists() and report_out.exists()
        report = report_out.read_text()
        assert report.startswith("metric,value")
        assert "train_mae,0" in report

    def test_invalid_config_key_exits_nonzero_without_output(self, tmp_path, capsys):
        model_out = tmp_path / "model.txt"
        cfg_path = write_config(tmp_path, dataset=D0, banana=1, model_out=str(model_out))
        assert main(["train", "--config", cfg_path]) == 2
        assert not model_out.exists()
        assert "banana" in capsys.readouterr().err

    def test_predict_round_trip(self, tmp_path, capsys):
        model_out = tmp_path / "model.txt"
        cfg_path = write_config(
            tmp_path,
            dataset=D0,
            algorithm="cusum",
            bins=3,
            binning="equal-width",
            epochs=100,
            model_out=str(model_out),
            report_out=str(tmp_path / "r.csv"),
        )
        main(["train", "--config", cfg_path])
        out_path = tmp_path / "preds.csv"
        assert main(["predict", "--model", str(model_out), "--data", D0, "--out", str(out_path)]) == 0
        lines = out_path.read_text().strip().split("\n")
        assert lines[0] == "index,prediction,target_rank"
        preds = [int(line.split(",")[1]) for line in lines[1:]]
        assert preds == [1, 2, 2, 3]

    def test_bench_is_deterministic(self, tmp_path):
        data = synthetic_regression_file(tmp_path)
        outs = []
        for run in range(2):
            report = tmp_path / f"bench{run}.csv"
            cfg_path = write_config(
                tmp_path,
                f"bench{run}.toml",
                dataset=data,
                algorithm="cusum",
                bins=3,
                folds=3,
                epochs=5,
                seed=11,
                train_fraction=0.7,
                report_out=str(report),
            )
            assert main(["bench", "--config", cfg_path]) == 0
            outs.append(report.read_bytes())
        assert outs[0] == outs[1]
        assert b"mean,," in outs[0]

    def test_verify_bounds_cli_passes_and_is_deterministic(self, tmp_path):
        outs = []
        for run in range(2):
            out = tmp_path / f"vb{run}.csv"
            code = main(
                [
                    "verify-bounds",
                    "--config",
                    write_config(tmp_path, f"vb{run}.toml", seeds=3, n=60, dim=6, bins=4, epochs=3),
                    "--out",
                    str(out),
                ]
            )
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_verify_bounds_refuses_pa_with_large_delta(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path, learner="cusum-pa", delta=1.5, seeds=1)
        assert main(["verify-bounds", "--config", cfg_path]) == 2
        assert "delta" in capsys.readouterr().err

    def test_verify_bounds_reports_corruption_with_step(self, tmp_path, capsys, monkeypatch):
        from cusumrank.core import absolute_loss
        from cusumrank.cusum import CuSumModel
        from cusumrank.engine import TrainTrace, pick_argmax

        def corrupted_fit(dataset, epochs, stop_when_clean=False):
            model = CuSumModel(dataset.rank_count, dataset.dim)
            trace = TrainTrace()
            W = model.weights.levels
            for _ in range(epochs):
                for ex in dataset:
                    x, y = ex.features, ex.rank
                    yhat = 1 + pick_argmax(np.cumsum(W @ x), "lowest")
                    if yhat != y:
                        lo, hi = min(y, yhat), max(y, yhat)
                        W[lo:hi] -= np.sign(y - yhat) * x
                    trace.record(y, yhat, 1.0, absolute_loss(y, yhat))
            return model, trace

        monkeypatch.setattr(sl, "cusum_fit_online", corrupted_fit)
        cfg_path = write_config(tmp_path, seeds=2, n=80, dim=6, bins=4, epochs=8, delta=0.3)
        assert main(["verify-bounds", "--config", cfg_path]) == 1
        out = capsys.readouterr().out
        assert "violation" in out
        # the violating step index lands in the last CSV column
        bad_rows = [l for l in out.splitlines() if l.endswith("no,") is False and ",no," in l]
        assert any(l.rsplit(",", 1)[1].isdigit() for l in bad_rows)

    def test_missing_dataset_is_a_config_error(self, tmp_path):
        cfg_path = write_config(tmp_path, algorithm="cusum")
        assert main(["train", "--config", cfg_path]) == 2
