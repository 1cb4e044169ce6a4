"""Separability checks, planted-margin generators, and the bound harness.

Rank separability: unit-norm per-level vectors w_2..w_r such that every
example satisfies sgn(y - k) w_k . x >= delta for k = 2..r, where an
item of rank y counts as a positive for its own level (sgn(0) = +1:
rank k does satisfy "rank >= k").  Level 1 solves a trivial task and is
pinned to zero, so it is omitted from both the condition and the norm.

Generators plant a separator first and rejection-sample consistent
examples, so every output is separable by construction and re-verified
before use.  The harness trains a learner on a planted problem and
checks the worst-case cumulative-loss caps (ledger fields bound_T1,
bound_C1, bound_C3, bound_C4) at every prefix of the run.
"""

import io
from dataclasses import dataclass, field

import numpy as np

from .core import TOL, RankedDataset, RankedExample, WeightStack
from .cusum import CuSumProblem, cusum_fit_online, cusum_fit_pa
from .engine import UpdateRule, sp_train_online
from .prank import PRankProblem, prank_fit_online, prank_margin_check
from .core import LossFn

REJECTION_BUDGET_PER_EXAMPLE = 1000


def level_sign(y, k):
    """+1 when rank y satisfies the level-k task (y >= k), else -1."""
    return 1.0 if y >= k else -1.0


@dataclass
class PlantedProblem:
    """A dataset together with the separator that was planted in it.

    `margin` is the certified margin (generation parameter); the exact
    empirical minimum slack is recorded separately and is never smaller.
    `radius` is the exact max ||x|| over the generated set.
    """

    dataset: RankedDataset
    planted_weights: WeightStack
    margin: float
    radius: float
    family: str
    empirical_margin: float
    planted_direction: np.ndarray = None  # prank family only
    planted_thresholds: np.ndarray = None  # prank family only


@dataclass
class SeparabilityReport:
    ok: bool
    worst_example: int
    worst_level: int
    worst_slack: float

    def __bool__(self):
        return self.ok


def check_rank_separable(dataset, weights, delta):
    """Evaluate the per-level margin condition; report the worst witness.

    `weights` must be a unit-norm WeightStack to certify separability;
    an off-unit stack may still be *rejected* (the condition fails on
    its own), but a passing off-unit stack raises instead of returning
    a bogus certificate.
    """
    slacks = dataset.feature_matrix() @ weights.levels.T  # (n, r) responses
    worst = (None, None, np.inf)
    for i, ex in enumerate(dataset):
        for k in range(2, dataset.rank_count + 1):
            s = level_sign(ex.rank, k) * slacks[i, k - 1]
            if s < worst[2]:
                worst = (i, k, s)
    ok = bool(worst[2] >= delta)
    if ok and abs(weights.norm() - 1.0) > TOL:
        raise ValueError(f"weights are not unit norm (||w|| = {weights.norm()})")
    return SeparabilityReport(ok, worst[0], worst[1], float(worst[2]))


@dataclass
class LossAugmentedReport:
    separable: bool
    r_aug: float
    worst_example: int = None
    worst_output: int = None


def check_loss_augmented(dataset, problem, wbar, loss):
    """Check loss-augmented separability of `dataset` under `problem`.

    Verifies, over every (example, wrong output) pair,
        (a) ||dPhi||^2 <= loss(y, y') * R_aug^2
        (b) wbar . dPhi >= loss(y, y')
    and returns the smallest R_aug that satisfies (a) when (b) holds.
    A violated (b) is reported in the result, not raised.
    """
    wbar = np.asarray(wbar, dtype=np.float64)
    if abs(np.linalg.norm(wbar) - 1.0) > TOL:
        raise ValueError("wbar must be unit norm")
    r2 = 0.0
    separable = True
    worst = (None, None)
    for i, ex in enumerate(dataset):
        x, y = ex.features, ex.rank
        for yp in problem.outputs(x):
            if yp == y:
                continue
            dphi = problem.feature_diff(x, y, yp)
            l = float(loss(y, yp))
            if float(np.dot(wbar, dphi)) < l - 1e-12:
                separable = False
                worst = (i, yp)
            if l <= 0.0:
                if float(np.dot(dphi, dphi)) > 0.0:
                    return LossAugmentedReport(False, np.inf, i, yp)
                continue
            r2 = max(r2, float(np.dot(dphi, dphi)) / l)
    return LossAugmentedReport(separable, float(np.sqrt(r2)), *worst)


def _sample_ball(rng, dim, radius):
    """Uniform draw from the `dim`-ball of the given radius."""
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return v * radius * rng.random() ** (1.0 / dim)


def generate_rank_separable(seed, n, d, r, delta, radius):
    """Plant a unit-norm level stack and sample examples it separates.

    Inputs are x = (z, -1) with ||x|| <= radius (so radius must exceed
    the bias norm 1); a draw is kept only if its level responses form a
    clean prefix pattern with slack >= delta at every level, and its
    label is the rank consistent with that pattern.  Raises when the
    rejection budget (1000 draws per requested example) runs out.
    """
    if delta <= 0 or r < 2 or d < 2:
        raise ValueError("need delta > 0, r >= 2, d >= 2")
    if radius <= 1.0:
        raise ValueError("radius must exceed 1: ||x|| includes the trailing -1 bias")
    rng = np.random.default_rng(seed)
    z_radius = np.sqrt(radius**2 - 1.0)

    # correlated random directions per level with tiered bias components:
    # a fully i.i.d. stack leaves most ranks with almost no feasible
    # region, while a shared component plus a threshold-like ladder keeps
    # every rank reachable without collapsing to one common direction
    shared = rng.standard_normal(d - 1)
    shared /= np.linalg.norm(shared)
    levels = np.zeros((r, d))
    for k in range(1, r):
        own = rng.standard_normal(d - 1)
        v = shared + 0.7 * own / np.linalg.norm(own)
        levels[k, :-1] = v / np.linalg.norm(v)
    levels[1:, -1] = np.linspace(-0.3, 0.3, r - 1) * z_radius + 0.03 * rng.standard_normal(r - 1)
    levels /= np.linalg.norm(levels)
    stack = WeightStack(r, d, levels)

    feats, ranks = [], []
    budget = REJECTION_BUDGET_PER_EXAMPLE * n
    # hair of acceptance slack so re-checks with different summation
    # order cannot flip a knife-edge draw
    gate = delta * (1.0 + 1e-9)
    while len(feats) < n:
        if budget == 0:
            raise RuntimeError(
                f"rejection budget exhausted after accepting {len(feats)}/{n}: "
                f"margin {delta} too large for this geometry"
            )
        budget -= 1
        z = _sample_ball(rng, d - 1, z_radius)
        x = np.concatenate([z, [-1.0]])
        q = levels[1:] @ x  # responses of levels 2..r
        above = q >= gate
        below = q <= -gate
        y = 1
        while y - 1 < r - 1 and above[y - 1]:
            y += 1
        if not (np.all(above[: y - 1]) and np.all(below[y - 1 :])):
            continue
        feats.append(x)
        ranks.append(y)

    dataset = RankedDataset.from_arrays(np.array(feats), ranks, rank_count=r)
    report = check_rank_separable(dataset, stack, delta)
    assert report.ok, "generator output failed its own separability check"
    return PlantedProblem(
        dataset=dataset,
        planted_weights=stack,
        margin=delta,
        radius=dataset.max_norm(),
        family="rank-separable",
        # exact minimum slack, measured with the checker's own arithmetic
        empirical_margin=report.worst_slack,
    )


def generate_prank_separable(seed, n, d, r, delta, radius):
    """Plant a shared direction with sorted thresholds and sample from it.

    The normalization ||(u, b_2..b_r)|| = 1 counts the direction once;
    the -inf sentinel threshold carries no mass.  Labels come from the
    threshold interval containing u . z, kept only with two-sided slack
    >= delta (one-sided at the extreme ranks).
    """
    if delta <= 0 or r < 2 or d < 2:
        raise ValueError("need delta > 0, r >= 2, d >= 2")
    if radius <= 1.0:
        raise ValueError("radius must exceed 1: ||x|| includes the trailing -1 bias")
    rng = np.random.default_rng(seed)
    z_radius = np.sqrt(radius**2 - 1.0)

    u_raw = rng.standard_normal(d - 1)
    u_raw /= np.linalg.norm(u_raw)
    if r == 2:
        cuts_raw = np.array([0.0])
    else:
        cuts_raw = np.linspace(-0.8 * z_radius, 0.8 * z_radius, r - 1)
    norm = np.linalg.norm(np.concatenate([u_raw, cuts_raw]))
    u = u_raw / norm
    cuts = cuts_raw / norm  # b_2..b_r in normalized units
    # raw-unit margin, slightly inflated so the normalized re-check
    # cannot flip on rounding
    margin_raw = delta * norm * (1.0 + 1e-9)

    feats, ranks = [], []
    budget = REJECTION_BUDGET_PER_EXAMPLE * n
    min_slack = np.inf
    while len(feats) < n:
        if budget == 0:
            raise RuntimeError(
                f"rejection budget exhausted after accepting {len(feats)}/{n}: "
                f"margin {delta} too large for this geometry"
            )
        budget -= 1
        z = _sample_ball(rng, d - 1, z_radius)
        a = float(np.dot(u_raw, z))
        y = 1 + int(np.searchsorted(cuts_raw, a, side="right"))
        lo_ok = y == 1 or a >= cuts_raw[y - 2] + margin_raw
        hi_ok = y == r or a <= cuts_raw[y - 1] - margin_raw
        if not (lo_ok and hi_ok):
            continue
        feats.append(np.concatenate([z, [-1.0]]))
        ranks.append(y)
        a_n = float(np.dot(u, z))
        slacks = []
        if y > 1:
            slacks.append(a_n - cuts[y - 2])
        if y < r:
            slacks.append(cuts[y - 1] - a_n)
        min_slack = min(min_slack, min(slacks)) if slacks else min_slack

    dataset = RankedDataset.from_arrays(np.array(feats), ranks, rank_count=r)
    thresholds = np.concatenate([[-np.inf], cuts])
    levels = np.zeros((r, d))
    for k in range(2, r + 1):
        levels[k - 1] = np.concatenate([u, [cuts[k - 2]]])
    assert prank_margin_check(dataset, u, thresholds, delta)
    return PlantedProblem(
        dataset=dataset,
        planted_weights=WeightStack(r, d, levels),
        margin=delta,
        radius=dataset.max_norm(),
        family="prank-separable",
        empirical_margin=min_slack,
        planted_direction=u,
        planted_thresholds=thresholds,
    )


# ---------------------------------------------------------------------------
# bound harness
# ---------------------------------------------------------------------------

LEARNERS = ("cusum-vanilla", "cusum-pa", "prank", "engine-generic")


@dataclass
class BoundLedger:
    """Running loss counters next to the theoretical bound constants.

    `cumulative_loss` sums the absolute rank loss |y - yhat| per visit;
    `cumulative_squared_loss` sums the square of the cap loss (the
    delta-scaled absolute loss for unit-step learners, delta-scaled 0-1
    for the passive-aggressive one).  The bound fields are computed once
    from the planted problem's (R, delta, r) and the loss-augmented
    radius; they never depend on anything the learner did.
    """

    cumulative_loss: np.ndarray
    cumulative_squared_loss: np.ndarray
    bound_T1: float
    bound_C1: float
    bound_C3: float
    bound_C4: float


@dataclass
class BoundCheck:
    name: str
    bound: float
    passed: bool
    violating_step: int = None  # first prefix index breaking the bound


@dataclass
class VerifyResult:
    separable: bool
    ledger: BoundLedger = None
    checks: list = field(default_factory=list)
    trace: object = None
    message: str = ""

    @property
    def all_passed(self):
        return self.separable and all(c.passed for c in self.checks)


def _prefix_check(name, prefix_sums, bound):
    bad = np.nonzero(prefix_sums > bound + TOL)[0]
    if bad.size:
        return BoundCheck(name, float(bound), False, int(bad[0]))
    return BoundCheck(name, float(bound), True)


def verify_bounds(problem, learner, epochs):
    """Train `learner` on a planted problem and check every applicable bound
    at every prefix of the run.

    Refuses to assert anything (returns a "not separable" result) when
    the problem fails its own separability check first.
    """
    if learner not in LEARNERS:
        raise ValueError(f"unknown learner {learner!r}; pick one of {LEARNERS}")
    ds = problem.dataset
    delta, r = problem.margin, ds.rank_count
    R = problem.radius

    if problem.family == "prank-separable":
        sep = prank_margin_check(ds, problem.planted_direction, problem.planted_thresholds, delta)
    else:
        sep = check_rank_separable(ds, problem.planted_weights, delta).ok
    if not sep:
        return VerifyResult(separable=False, message="not separable at the stated margin")

    abs_loss = LossFn("scaled-absolute", delta)  # delta * |y - y'|
    zo_loss = LossFn("scaled-zero-one", delta)  # delta * 1[y != y']

    if learner in ("cusum-vanilla", "cusum-pa", "engine-generic"):
        sp = CuSumProblem(r, ds.dim)
        wbar = problem.planted_weights.levels.ravel()
    else:
        sp = PRankProblem(r, ds.dim)
        wbar = np.concatenate([problem.planted_direction, problem.planted_thresholds[1:]])

    if learner == "cusum-vanilla":
        _, trace = cusum_fit_online(ds, epochs)
    elif learner == "cusum-pa":
        _, trace = cusum_fit_pa(ds, epochs, delta)
    elif learner == "prank":
        _, trace = prank_fit_online(ds, epochs)
    else:
        _, _, trace = sp_train_online(sp, UpdateRule("vanilla"), ds, epochs=epochs)

    truths = np.array(trace.truths)
    preds = np.array(trace.preds)
    abs_prefix = np.cumsum(np.abs(truths - preds))
    mistake_prefix = np.cumsum(truths != preds)

    cap_loss = zo_loss if learner == "cusum-pa" else abs_loss
    aug = check_loss_augmented(ds, sp, wbar, cap_loss)
    cap_sq = np.array([cap_loss(y, p) ** 2 for y, p in zip(truths, preds)])
    ledger = BoundLedger(
        cumulative_loss=abs_prefix.astype(np.float64),
        cumulative_squared_loss=np.cumsum(cap_sq),
        bound_T1=aug.r_aug**2,
        bound_C1=R**2 / delta**2,
        bound_C3=R**2 / delta**2,
        bound_C4=R**2 / delta**4,
    )

    checks = []
    cap_prefix = np.cumsum([cap_loss(y, p) for y, p in zip(truths, preds)])
    if learner in ("cusum-vanilla", "engine-generic"):
        checks.append(_prefix_check("T1", cap_prefix, ledger.bound_T1))
        checks.append(_prefix_check("C1", mistake_prefix, ledger.bound_C1))
        checks.append(_prefix_check("C3", abs_prefix, ledger.bound_C3))
    elif learner == "cusum-pa":
        checks.append(_prefix_check("T2", ledger.cumulative_squared_loss, ledger.bound_T1))
        if delta <= 1.0:
            checks.append(_prefix_check("C4", abs_prefix, ledger.bound_C4))
    else:  # prank
        # derived constant: (r-1)(max||z||^2 + 1)/delta^2 = (r-1) R^2/delta^2,
        # using ||x||^2 = ||z||^2 + 1 exactly
        prank_const = (r - 1) * R**2 / delta**2
        checks.append(_prefix_check("T1", cap_prefix, ledger.bound_T1))
        checks.append(_prefix_check("C-prank", abs_prefix, prank_const))

    return VerifyResult(separable=True, ledger=ledger, checks=checks, trace=trace)


def ledger_to_csv(result):
    """CSV export of a verification run: one row per online step."""
    led = result.ledger
    buf = io.StringIO()
    buf.write("step,cumulative_loss,cumulative_squared_loss,bound_T1,bound_C1,bound_C3,bound_C4\n")
    for t in range(len(led.cumulative_loss)):
        buf.write(
            f"{t + 1},{led.cumulative_loss[t]:.17g},{led.cumulative_squared_loss[t]:.17g},"
            f"{led.bound_T1:.17g},{led.bound_C1:.17g},{led.bound_C3:.17g},{led.bound_C4:.17g}\n"
        )
    return buf.getvalue()


def d0_dataset():
    """The four-point fixture that is rank separable but not by any
    shared-direction threshold model."""
    feats = np.array(
        [
            [0.0, 0.0, -1.0],
            [0.0, 1.0, -1.0],
            [1.0, 1.0, -1.0],
            [1.0, 0.0, -1.0],
        ]
    )
    return RankedDataset.from_arrays(feats, [1, 2, 2, 3], rank_count=3)


def d0_separator():
    """A hand-built level stack separating the fixture with raw margin 0.5."""
    levels = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 1.0, 0.5],
            [1.0, -1.0, 0.5],
        ]
    )
    return WeightStack(3, 3, levels)
