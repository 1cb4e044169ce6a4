"""Generic online structured perceptron.

The framework has four hot spots: the weight vector, the feasible-output
set Y(x), the feature map Phi(x, y), and the argmax solver.  A
`StructuredProblem` bundles the last three; the trainer below owns the
weights.  Two update rules ship: the vanilla unit step and the
loss-sensitive passive-aggressive step.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import LossFn, absolute_loss


class StructuredProblem:
    """Problem instantiation: outputs, feature map, and argmax solver.

    Subclasses must set `dim` (the weight/feature dimension) and may
    override `scores` or `argmax_solve` with faster exact equivalents.
    `tie_rule` states how score ties are broken: "lowest" picks the
    smallest output, "highest" the largest.
    """

    dim = None
    tie_rule = "lowest"

    def outputs(self, x):
        """Finite list of feasible outputs for input x."""
        raise NotImplementedError

    def feature_map(self, x, y):
        """Dense Phi(x, y) of length `dim`."""
        raise NotImplementedError

    def feature_diff(self, x, y, yhat):
        """Phi(x, y) - Phi(x, yhat)."""
        return self.feature_map(x, y) - self.feature_map(x, yhat)

    def scores(self, w, x):
        """w . Phi(x, y) for every feasible y, in `outputs` order."""
        return np.array([float(np.dot(w, self.feature_map(x, y))) for y in self.outputs(x)])

    def argmax_solve(self, w, x, cost=None):
        """Maximizer of w . Phi(x, y) (+ cost[y] when given) over outputs.

        `cost` is an array aligned with `outputs(x)`, used for
        margin-rescaled decoding at training time.
        """
        outs = self.outputs(x)
        if len(outs) == 0:
            raise ValueError("empty feasible output set")
        vals = self.scores(w, x)
        if cost is not None:
            vals = vals + cost
        return outs[pick_argmax(vals, self.tie_rule)]


def pick_argmax(values, tie_rule="lowest"):
    """Index of the maximum; ties go to the first or last position."""
    values = np.asarray(values)
    if tie_rule == "lowest":
        return int(np.argmax(values))
    if tie_rule == "highest":
        return values.size - 1 - int(np.argmax(values[::-1]))
    raise ValueError(f"unknown tie rule {tie_rule!r}")


@dataclass(frozen=True)
class UpdateRule:
    """Vanilla (unit step) or passive-aggressive (loss-sensitive step)."""

    kind: str
    loss: LossFn = None

    def __post_init__(self):
        if self.kind not in ("vanilla", "passive-aggressive"):
            raise ValueError(f"unknown update rule {self.kind!r}")
        if self.kind == "passive-aggressive" and self.loss is None:
            raise ValueError("passive-aggressive rule needs a loss function")


@dataclass
class TrainTrace:
    """Per-visit record of an online run.

    The cumulative columns are nondecreasing; `losses` holds the trace
    loss (absolute rank distance unless configured otherwise), which is
    what the bound harness sums.
    """

    truths: list = field(default_factory=list)
    preds: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    losses: list = field(default_factory=list)
    cum_loss: list = field(default_factory=list)
    cum_sq_loss: list = field(default_factory=list)

    def record(self, y, yhat, step, loss):
        self.truths.append(y)
        self.preds.append(yhat)
        self.steps.append(float(step))
        self.losses.append(float(loss))
        prev = self.cum_loss[-1] if self.cum_loss else 0.0
        prev_sq = self.cum_sq_loss[-1] if self.cum_sq_loss else 0.0
        self.cum_loss.append(prev + float(loss))
        self.cum_sq_loss.append(prev_sq + float(loss) ** 2)

    def __len__(self):
        return len(self.preds)

    def mistakes(self):
        return sum(1 for y, p in zip(self.truths, self.preds) if y != p)


def sp_predict(problem, w, x):
    """Decode argmax_y w . Phi(x, y); deterministic under the tie rule."""
    return problem.argmax_solve(w, x)


def sp_update_vanilla(problem, w, x, y, yhat):
    """One perceptron step: w + Phi(x, y) - Phi(x, yhat)."""
    return w + problem.feature_diff(x, y, yhat)


def sp_step_pa(problem, w, x, y, yhat, loss):
    """Passive-aggressive step size.

    tau = (w.Phi(x,yhat) - w.Phi(x,y) + loss(y,yhat)) / ||Phi(x,y) - Phi(x,yhat)||^2

    After applying w + tau * (Phi(x,y) - Phi(x,yhat)), the true output
    scores exactly loss(y, yhat) above the old prediction.
    """
    diff = problem.feature_diff(x, y, yhat)
    denom = float(np.dot(diff, diff))
    if denom == 0.0:
        raise ValueError("zero feature difference: Phi(x,y) == Phi(x,yhat)")
    return (-float(np.dot(w, diff)) + float(loss(y, yhat))) / denom


def sp_train_online(
    problem,
    rule,
    stream,
    epochs=1,
    averaging=False,
    cost_augment=None,
    shrinkage=1.0,
    shuffle_seed=None,
    w0=None,
    trace_loss=absolute_loss,
):
    """Run the online structured perceptron over `stream` for `epochs` passes.

    On each visit the example is decoded (with margin-rescaled decoding
    argmax_y [w.Phi(x,y) + scale*loss(y_true, y)] when `cost_augment`
    = (loss, scale) is given) and the rule's update is applied on
    mistakes.  Weights change only when yhat != y.

    `averaging` additionally returns the uniform average of the weight
    vector after every example visit (lazy accumulator; exact).
    `shrinkage` < 1 multiplies w by that factor before each update.
    `shuffle_seed`, if set, reshuffles the stream each epoch.

    Returns (final weights, averaged weights or None, TrainTrace).
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    examples = list(stream)
    w = np.zeros(problem.dim) if w0 is None else np.array(w0, dtype=np.float64)
    trace = TrainTrace()
    rng = np.random.default_rng(shuffle_seed) if shuffle_seed is not None else None

    lazy = shrinkage == 1.0
    shadow = np.zeros_like(w)  # sum of (visit-1) * delta, for lazy averaging
    naive_sum = np.zeros_like(w)
    visit = 0

    for _ in range(epochs):
        order = rng.permutation(len(examples)) if rng is not None else range(len(examples))
        for i in order:
            ex = examples[i]
            x, y = ex.features, ex.rank
            visit += 1
            if cost_augment is not None:
                loss_fn, scale = cost_augment
                cost = scale * np.array([float(loss_fn(y, k)) for k in problem.outputs(x)])
                yhat = problem.argmax_solve(w, x, cost=cost)
            else:
                yhat = problem.argmax_solve(w, x)

            step = 0.0
            if yhat != y:
                if rule.kind == "vanilla":
                    step = 1.0
                else:
                    step = sp_step_pa(problem, w, x, y, yhat, rule.loss)
                delta = step * problem.feature_diff(x, y, yhat)
                if shrinkage != 1.0:
                    w = shrinkage * w
                w = w + delta
                if averaging and lazy:
                    shadow = shadow + (visit - 1) * delta
            trace.record(y, yhat, step, trace_loss(y, yhat))
            if averaging and not lazy:
                naive_sum = naive_sum + w

    averaged = None
    if averaging:
        averaged = (w - shadow / visit) if lazy else naive_sum / visit
    return w, averaged, trace
