import itertools

import numpy as np
import pytest

from conftest import random_ranked_dataset
from cusumrank.core import RankedDataset, mean_absolute_error
from cusumrank.engine import UpdateRule, sp_train_online
from cusumrank.prank import (
    PRankModel,
    PRankProblem,
    prank_fit_online,
    prank_margin_check,
    prank_predict,
    prank_predict_scan,
)
from cusumrank.synthlab import d0_dataset, generate_prank_separable


def model_with(u, b):
    return PRankModel(len(u), len(b), np.asarray(u, dtype=float), np.asarray(b, dtype=float))


class TestPredict:
    def test_all_thresholds_cleared(self):
        m = model_with([0.0, 0.0], [-np.inf, 0.0, 0.0])
        assert prank_predict(m, np.array([1.0, 1.0])) == 3

    def test_only_sentinel_satisfied(self):
        m = model_with([0.0, 0.0], [-np.inf, 1.0, 2.0])
        assert prank_predict(m, np.array([5.0, -2.0])) == 1

    def test_matches_structured_argmax_bruteforce(self, rng):
        # equals argmax_y w.Phi(x,y) with Phi = (y z, -1_y, 0_{r-y})
        for _ in range(60):
            r = int(rng.integers(2, 7))
            d = int(rng.integers(2, 6))
            u = rng.normal(size=d - 1)
            b = np.concatenate([[-np.inf], np.sort(rng.normal(size=r - 1))])
            m = model_with(u, b)
            z = rng.normal(size=d - 1)
            scores = []
            for y in range(1, r + 1):
                # drop the -inf slot: constant shift common to every rank
                scores.append(y * float(np.dot(u, z)) - float(np.sum(b[1:y])))
            best = max(scores)
            highest_argmax = max(i + 1 for i, s in enumerate(scores) if s == best)
            assert prank_predict(m, z) == highest_argmax

    def test_binary_search_agrees_with_linear_scan(self, rng):
        for _ in range(80):
            r = int(rng.integers(2, 9))
            u = rng.normal(size=3)
            b = np.concatenate([[-np.inf], np.sort(rng.integers(-3, 4, size=r - 1).astype(float))])
            m = model_with(u, b)
            z = rng.normal(size=3)
            assert prank_predict(m, z) == prank_predict_scan(m, z)

    def test_dimension_mismatch(self):
        m = model_with([0.0, 0.0], [-np.inf, 0.0])
        with pytest.raises(ValueError):
            prank_predict(m, np.array([1.0]))


class TestFitOnline:
    def test_one_step_trace(self):
        # u=0, b=(-inf,0,0), example (z=(1,1), y=1): yhat=3, then
        # u=(-2,-2) and b=(-inf,1,1)
        ds = RankedDataset.from_arrays(np.array([[1.0, 1.0, -1.0]]), [1], rank_count=3)
        model, trace = prank_fit_online(ds, 1)
        assert trace.preds == [3]
        assert np.array_equal(model.direction, [-2.0, -2.0])
        assert np.array_equal(model.thresholds[1:], [1.0, 1.0])

    def test_correct_prediction_changes_nothing(self):
        ds = RankedDataset.from_arrays(np.array([[1.0, 1.0, -1.0]]), [3], rank_count=3)
        model, trace = prank_fit_online(ds, 2)
        assert trace.mistakes() == 0
        assert np.array_equal(model.direction, [0.0, 0.0])

    def test_d0_never_converges(self):
        # the four points need both orderings of the second coordinate
        ds = d0_dataset()
        _, trace = prank_fit_online(ds, 500)
        last_epoch = list(zip(trace.truths[-4:], trace.preds[-4:]))
        assert any(y != p for y, p in last_epoch)

    def test_thresholds_stay_sorted_after_every_update(self, rng):
        # replay training step by step and assert the order each time
        for trial in range(5):
            ds = random_ranked_dataset(rng, 40, 4, 5)
            model = PRankModel(3, 5)
            for ex in ds:
                z, y = ex.features[:-1], ex.rank
                yhat = prank_predict(model, z)
                if yhat != y:
                    model.direction += (y - yhat) * z
                    lo, hi = min(y, yhat), max(y, yhat)
                    model.thresholds[lo:hi] -= np.sign(y - yhat)
                assert model.thresholds_sorted()

    def test_trace_matches_engine_instantiation(self, rng):
        ds = random_ranked_dataset(rng, 40, 5, 4)
        model, trace = prank_fit_online(ds, 4)
        w, _, trace2 = sp_train_online(PRankProblem(4, 5), UpdateRule("vanilla"), ds, epochs=4)
        prob = PRankProblem(4, 5)
        u, btail = prob.split(w)
        assert trace.preds == trace2.preds
        assert np.array_equal(model.direction, u)
        assert np.array_equal(model.thresholds[1:], btail)

    def test_two_ranks_match_binary_perceptron_oracle(self, rng):
        ds = random_ranked_dataset(rng, 50, 4, 2)
        model, trace = prank_fit_online(ds, 3)

        # classic perceptron on (z, -1) inputs with +1/-1 targets
        v = np.zeros(4)
        preds = []
        for _ in range(3):
            for ex in ds:
                pred = 2 if float(np.dot(v, ex.features)) >= 0 else 1
                preds.append(pred)
                target = 1.0 if ex.rank == 2 else -1.0
                if pred != ex.rank:
                    v += target * ex.features
        assert trace.preds == preds
        assert np.array_equal(model.direction, v[:-1])
        # v.(z,-1) >= 0 iff u.z >= b_2, so the threshold equals the bias slot
        assert model.thresholds[1] == pytest.approx(v[-1])


class TestMarginCheck:
    def test_planted_problem_passes(self):
        p = generate_prank_separable(3, 80, 6, 4, 0.15, np.sqrt(2))
        assert prank_margin_check(p.dataset, p.planted_direction, p.planted_thresholds, 0.15)

    def test_fails_beyond_recorded_empirical_margin(self):
        p = generate_prank_separable(3, 80, 6, 4, 0.15, np.sqrt(2))
        too_big = p.empirical_margin * (1 + 1e-9) + 1e-15
        assert not prank_margin_check(p.dataset, p.planted_direction, p.planted_thresholds, too_big)

    def test_d0_fails_on_a_coarse_grid(self):
        # no shared-direction threshold model explains the fixture
        ds = d0_dataset()
        grid = np.linspace(-2.0, 2.0, 9)
        for u1, u2, b2 in itertools.product(grid, grid, grid):
            for b3 in grid[grid >= b2]:
                assert not prank_margin_check(
                    ds, np.array([u1, u2]), np.array([-np.inf, b2, b3]), 1e-9
                )

    def test_unsorted_thresholds_rejected(self):
        ds = d0_dataset()
        with pytest.raises(ValueError):
            prank_margin_check(ds, np.zeros(2), np.array([-np.inf, 1.0, 0.0]), 0.1)


class TestMistakeBoundSanity:
    def test_cumulative_loss_below_derived_constant(self):
        for seed in range(5):
            p = generate_prank_separable(seed, 120, 8, 5, 0.1, np.sqrt(2))
            _, trace = prank_fit_online(p.dataset, 5)
            z_sq = max(
                float(np.dot(ex.features[:-1], ex.features[:-1])) for ex in p.dataset
            )
            bound = (p.dataset.rank_count - 1) * (z_sq + 1.0) / p.margin**2
            assert trace.cum_loss[-1] <= bound
