"""Feature learner: a one-hidden-layer network fit as a least-squares
regressor.

The network is trained on the continuous targets with full-batch
gradient descent; after training, the hidden activations become the new
input representation for the ordinal learners (the caller appends the
-1 bias slot and renormalizes).  Early stopping keeps the parameters of
the best validation MAE seen, not the last epoch's.
"""

import numpy as np


def _act(name, a):
    if name == "tanh":
        return np.tanh(a)
    return np.maximum(a, 0.0)  # relu


def _act_grad(name, a):
    if name == "tanh":
        t = np.tanh(a)
        return 1.0 - t * t
    return (a > 0.0).astype(np.float64)


class MLPRegressor:
    """input -> H hidden units (tanh or relu) -> scalar linear readout."""

    def __init__(self, input_dim, hidden, activation="tanh", seed=0):
        if hidden < 1:
            raise ValueError("need at least one hidden unit")
        if activation not in ("tanh", "relu"):
            raise ValueError(f"unknown activation {activation!r}")
        self.input_dim = int(input_dim)
        self.hidden = int(hidden)
        self.activation = activation
        rng = np.random.default_rng(seed)
        s1 = 1.0 / np.sqrt(self.input_dim)
        s2 = 1.0 / np.sqrt(self.hidden)
        self.w_in = rng.uniform(-s1, s1, size=(self.input_dim, self.hidden))
        self.b_in = rng.uniform(-s1, s1, size=self.hidden)
        self.w_out = rng.uniform(-s2, s2, size=self.hidden)
        self.b_out = float(rng.uniform(-s2, s2))

    # -- parameter packing (snapshots, serialization, gradient checks) --

    def get_params(self):
        return np.concatenate([self.w_in.ravel(), self.b_in, self.w_out, [self.b_out]])

    def set_params(self, flat):
        flat = np.asarray(flat, dtype=np.float64)
        d, h = self.input_dim, self.hidden
        if flat.shape != (d * h + 2 * h + 1,):
            raise ValueError("parameter vector has the wrong length")
        self.w_in = flat[: d * h].reshape(d, h).copy()
        self.b_in = flat[d * h : d * h + h].copy()
        self.w_out = flat[d * h + h : d * h + 2 * h].copy()
        self.b_out = float(flat[-1])

    # -- forward / backward --

    def hidden_activations(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.input_dim:
            raise ValueError(f"input has {X.shape[1]} features, model expects {self.input_dim}")
        return _act(self.activation, X @ self.w_in + self.b_in)

    def predict(self, X):
        return self.hidden_activations(X) @ self.w_out + self.b_out

    def loss_and_gradients(self, X, y):
        """Mean squared error with its analytic parameter gradients."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        y = np.asarray(y, dtype=np.float64)
        a = X @ self.w_in + self.b_in
        h = _act(self.activation, a)
        pred = h @ self.w_out + self.b_out
        resid = pred - y
        loss = float(np.mean(resid**2))

        dpred = 2.0 * resid / X.shape[0]
        g_w_out = h.T @ dpred
        g_b_out = float(np.sum(dpred))
        da = (dpred[:, None] * self.w_out[None, :]) * _act_grad(self.activation, a)
        g_w_in = X.T @ da
        g_b_in = da.sum(axis=0)
        grads = np.concatenate([g_w_in.ravel(), g_b_in, g_w_out, [g_b_out]])
        return loss, grads


def mlp_train(
    train,
    validation,
    hidden,
    lr=0.001,
    patience=100,
    activation="tanh",
    seed=0,
    max_epochs=20000,
    batch_size=None,
):
    """Gradient descent until the validation MAE stalls.

    `train` and `validation` are (features, targets) pairs.  Training is
    full batch unless `batch_size` is set.  Stops once `patience`
    consecutive epochs bring no validation improvement (patience 0 means
    no training at all) or at `max_epochs`, and returns the model at the
    best validation MAE seen.  Raises on a non-finite loss, naming the
    epoch.
    """
    X, y = (np.asarray(a, dtype=np.float64) for a in train)
    Xv, yv = (np.asarray(a, dtype=np.float64) for a in validation)
    if X.shape[0] == 0 or Xv.shape[0] == 0:
        raise ValueError("train and validation splits must be nonempty")
    if lr <= 0:
        raise ValueError("lr must be positive")
    model = MLPRegressor(X.shape[1], hidden, activation=activation, seed=seed)

    best_mae = float(np.mean(np.abs(model.predict(Xv) - yv)))
    best_params = model.get_params()
    stall = 0
    epoch = 0
    rng = np.random.default_rng(seed)
    while stall < patience and epoch < max_epochs:
        epoch += 1
        if batch_size is None:
            loss, grads = model.loss_and_gradients(X, y)
            if not np.isfinite(loss):
                raise RuntimeError(f"training diverged (non-finite loss) at epoch {epoch}")
            model.set_params(model.get_params() - lr * grads)
        else:
            order = rng.permutation(X.shape[0])
            for start in range(0, X.shape[0], batch_size):
                idx = order[start : start + batch_size]
                loss, grads = model.loss_and_gradients(X[idx], y[idx])
                if not np.isfinite(loss):
                    raise RuntimeError(f"training diverged (non-finite loss) at epoch {epoch}")
                model.set_params(model.get_params() - lr * grads)
        mae = float(np.mean(np.abs(model.predict(Xv) - yv)))
        if mae < best_mae - 1e-12:
            best_mae = mae
            best_params = model.get_params()
            stall = 0
        else:
            stall += 1
    model.set_params(best_params)
    return model


def mlp_embed(model, X):
    """Hidden-layer representation of raw inputs (one row per input)."""
    return model.hidden_activations(X)
