import numpy as np
import pytest
from scipy.optimize import linprog

from conftest import random_ranked_dataset
from cusumrank.core import RankedDataset
from cusumrank.cusum import cusum_fit_online, cusum_scores
from cusumrank.kernel import DualCuSumModel, Kernel, dual_fit_online, dual_predict
from cusumrank.synthlab import d0_dataset, level_sign


def xor_rank_dataset():
    """2 informative features, 3 ranks; the top level task is XOR."""
    X = np.array(
        [
            [0.0, 0.0, -1.0],
            [1.0, 1.0, -1.0],
            [0.0, 1.0, -1.0],
            [1.0, 0.0, -1.0],
        ]
    )
    return RankedDataset.from_arrays(X, [1, 2, 3, 3], rank_count=3)


def rank_separability_lp(dataset):
    """LP feasibility certificate for rank separability at any positive
    margin: sgn(y - k) w_k . x >= 1 has a solution iff the data is
    separable.  Independent of the package's own checkers."""
    n, r, d = len(dataset), dataset.rank_count, dataset.dim
    n_vars = (r - 1) * d
    A, b = [], []
    for ex in dataset:
        for k in range(2, r + 1):
            row = np.zeros(n_vars)
            row[(k - 2) * d : (k - 1) * d] = -level_sign(ex.rank, k) * ex.features
            A.append(row)
            b.append(-1.0)
    res = linprog(
        c=np.zeros(n_vars),
        A_ub=np.array(A),
        b_ub=np.array(b),
        bounds=[(-100, 100)] * n_vars,
        method="highs",
    )
    return res.status == 0  # feasible -> separable


class StructureDual:
    """Pair-indexed dual perceptron over whole structures (test oracle).

    Keeps one counter per recorded (example, true, predicted) mistake;
    the score of rank z against support example x_i uses
    Phi(x,z).Phi(x_i,y) = min(z, y) K(x, x_i).
    """

    def __init__(self, rank_count, kernel):
        self.rank_count = rank_count
        self.kernel = kernel
        self.mistakes = []  # (x_i, y, yhat, count)

    def scores(self, x):
        s = np.zeros(self.rank_count)
        for xi, y, yhat, c in self.mistakes:
            kv = float(self.kernel(xi[None, :], np.asarray(x)[None, :])[0, 0])
            for z in range(1, self.rank_count + 1):
                s[z - 1] += c * (min(z, y) - min(z, yhat)) * kv
        return s

    def predict(self, x):
        s = self.scores(x)
        return 1 + int(np.argmax(s))

    def fit(self, dataset, epochs):
        for _ in range(epochs):
            for ex in dataset:
                yhat = self.predict(ex.features)
                if yhat != ex.rank:
                    for m in self.mistakes:
                        if m[0] is ex.features and m[1] == ex.rank and m[2] == yhat:
                            m[3] += 1
                            break
                    else:
                        self.mistakes.append([ex.features, ex.rank, yhat, 1])
        return self


class TestKernel:
    def test_symmetry_and_psd(self, rng):
        X = rng.normal(size=(20, 4))
        for kern in (Kernel("linear"), Kernel("polynomial", degree=2, coef0=1.0), Kernel("rbf", gamma=0.7)):
            G = kern(X, X)
            assert np.allclose(G, G.T, atol=1e-12)
            eigs = np.linalg.eigvalsh((G + G.T) / 2)
            assert np.min(eigs) >= -1e-8

    def test_spec_round_trip(self):
        for kern in (Kernel("linear"), Kernel("polynomial", degree=4, coef0=0.5), Kernel("rbf", gamma=2.0)):
            assert Kernel.from_spec(kern.spec()) == kern

    def test_validation(self):
        with pytest.raises(ValueError):
            Kernel("sigmoid")
        with pytest.raises(ValueError):
            Kernel("rbf", gamma=0.0)


class TestDualPredict:
    def test_empty_support_predicts_one(self):
        model = DualCuSumModel(4, 3, Kernel("rbf", gamma=1.0))
        assert dual_predict(model, np.array([2.0, 1.0, -1.0])) == 1

    def test_single_support_rbf_diagonal(self):
        # querying the support point itself: K(x,x)=1 scales nothing
        model = DualCuSumModel(4, 3, Kernel("rbf", gamma=0.5))
        x = np.array([1.0, 2.0, -1.0])
        model.support_x = x[None, :]
        model.support_index = [0]
        model.coefficients = np.array([[2, -1, 1]])
        scores = model.scores(x)
        assert np.allclose(scores, [0.0, 2.0, 1.0, 2.0])

    def test_non_finite_kernel_rejected(self):
        class BadKernel:
            def __call__(self, A, B):
                return np.full((len(np.atleast_2d(A)), len(np.atleast_2d(B))), np.nan)

        model = DualCuSumModel(3, 3, BadKernel())
        model.support_x = np.ones((1, 3))
        model.support_index = [0]
        model.coefficients = np.array([[1, 0]])
        with pytest.raises(ValueError):
            dual_predict(model, np.array([1.0, 1.0, -1.0]))


class TestDualFit:
    def test_single_pass_single_example_coefficients(self):
        # one mistake on (x, y=3) under an empty model: beta = +1 on levels 2..3
        ds = RankedDataset.from_arrays(np.array([[1.0, 0.5, -1.0]]), [3], rank_count=4)
        model, trace = dual_fit_online(ds, Kernel("linear"), 1)
        assert trace.preds == [1]
        assert model.support_size == 1
        assert np.array_equal(model.coefficients, [[1, 1, 0]])

    def test_linear_kernel_locks_step_for_step_with_primal(self, rng):
        for trial in range(6):
            ds = random_ranked_dataset(rng, 30, 4, 5)
            primal, tr_p = cusum_fit_online(ds, 3)
            dual, tr_d = dual_fit_online(ds, Kernel("linear"), 3)
            assert tr_p.preds == tr_d.preds
            # induced weight stack matches the primal one
            induced = dual.coefficients.T @ dual.support_x
            assert np.allclose(induced, primal.weights.levels[1:], atol=1e-9)
            for ex in ds:
                assert np.allclose(
                    dual.scores(ex.features), cusum_scores(primal, ex.features), atol=1e-9
                )

    def test_d0_linear_dual_converges_like_primal(self):
        ds = d0_dataset()
        primal, tr_p = cusum_fit_online(ds, 50)
        dual, tr_d = dual_fit_online(ds, Kernel("linear"), 50)
        assert tr_p.preds == tr_d.preds
        assert [dual_predict(dual, ex.features) for ex in ds] == [1, 2, 2, 3]

    def test_rbf_solves_rank_xor(self):
        ds = xor_rank_dataset()
        assert not rank_separability_lp(ds), "fixture must not be rank separable"
        assert rank_separability_lp(d0_dataset()), "LP oracle sanity check"
        model, _ = dual_fit_online(ds, Kernel("rbf", gamma=2.0), 200, stop_when_clean=True)
        preds = [dual_predict(model, ex.features) for ex in ds]
        assert preds == [ex.rank for ex in ds]

    def test_cache_does_not_change_results(self, rng):
        ds = random_ranked_dataset(rng, 25, 4, 4)
        m1, t1 = dual_fit_online(ds, Kernel("rbf", gamma=0.8), 3, use_cache=True)
        m2, t2 = dual_fit_online(ds, Kernel("rbf", gamma=0.8), 3, use_cache=False)
        assert t1.preds == t2.preds
        assert np.array_equal(m1.coefficients, m2.coefficients)

    def test_support_growth_bounded_by_mistakes(self, rng):
        ds = random_ranked_dataset(rng, 40, 4, 5)
        model, trace = dual_fit_online(ds, Kernel("rbf", gamma=1.0), 2)
        assert model.support_size <= trace.mistakes()

    def test_every_nonzero_coefficient_traces_to_a_mistake(self, rng):
        ds = random_ranked_dataset(rng, 30, 4, 5)
        model, trace = dual_fit_online(ds, Kernel("linear"), 2)
        touched = {i: np.zeros(ds.rank_count - 1, dtype=bool) for i in range(len(ds))}
        for t, (y, p) in enumerate(zip(trace.truths, trace.preds)):
            if y != p:
                i = t % len(ds)
                lo, hi = min(y, p), max(y, p)
                touched[i][lo - 1 : hi - 1] = True
        for pos, i in enumerate(model.support_index):
            nz = model.coefficients[pos] != 0
            assert np.all(touched[i][nz])


class TestStructureLevelOracle:
    def test_atom_and_structure_duals_induce_the_same_scores(self, rng):
        # both dual forms must agree as score functions after training
        for trial in range(4):
            ds = random_ranked_dataset(rng, 15, 3, 4)
            kern = Kernel("rbf", gamma=1.0)
            atom, _ = dual_fit_online(ds, kern, 2)
            struct = StructureDual(4, kern).fit(ds, 2)
            for ex in ds:
                s_atom = atom.scores(ex.features)
                s_struct = struct.scores(ex.features)
                # atom scores are anchored at rank 1 = 0; align the two
                assert np.allclose(
                    s_atom - s_atom[0], s_struct - s_struct[0], atol=1e-9
                )
