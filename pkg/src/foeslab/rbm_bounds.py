"""Tight extremal-probability bounds for RBM joint and visible models.

For the joint score f(x, h) = x.theta_v + h.theta_h + sum x_i h_j w_ji on
{-1,+1} variables, the extremes over one block have closed forms: with
a(h) = sum_i |theta_v_i + sum_j h_j w_ji| and
b(x) = sum_j |theta_h_j + sum_i x_i w_ji|,

    max_x f(x, h) = h.theta_h + a(h),   min_x f(x, h) = h.theta_h - a(h),
    max_h f(x, h) = x.theta_v + b(x),   min_h f(x, h) = x.theta_v - b(x).

From these come the report quantities: B = max_h a(h), C = min_h a(h),
the joint LREP (exactly 2 max_h [h.theta_h + a(h)] sandwich), and the
visible-range quantity a_n = max_x [x.theta_v + b(x)] - min_x [...], which
tracks the marginal model's LREP to within n_hidden * ln 2.

One caution, enforced by the assertions and the tests: a_n is NOT bounded
below by max{C, B - 2|theta_h|_1}. That lower bound holds for the variant
that takes both extremes along the hidden axis first
(a_n_hidden_first = max_h[h.theta_h + a(h)] - max_h[h.theta_h - a(h)]),
which upper-bounds a_n but can exceed the marginal LREP by far more than
n_hidden * ln 2. The two are distinct quantities; conflating them produces
false inequalities (see tests/test_rbm_bounds.py for a counterexample).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_ENUMERATION_BUDGET, OutcomeSpace
from .metrics import lrep as lrep_report
from .zoo import RbmParams, make_rbm_marginal, rbm_joint_score

_TOL = 1e-9


def f_theta(params: RbmParams, x, h) -> float:
    """Joint score of one (visible, hidden) configuration in {-1,+1}."""
    x = np.asarray(x, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if x.shape != (params.n_visible,) or h.shape != (params.n_hidden,):
        raise ValueError("x and h must match the parameter shapes")
    if not (np.all(np.abs(x) == 1.0) and np.all(np.abs(h) == 1.0)):
        raise ValueError("components must lie in {-1, +1}")
    return float(rbm_joint_score(params, x[None, :], h[None, :])[0])


def visible_absum(params: RbmParams, h: np.ndarray) -> np.ndarray:
    """a(h) = sum_i |theta_v_i + sum_j h_j w_ji|, rowwise over h."""
    h = np.atleast_2d(np.asarray(h, dtype=np.float64))
    return np.abs(params.visible[None, :] + h @ params.interaction).sum(axis=1)


def hidden_absum(params: RbmParams, x: np.ndarray) -> np.ndarray:
    """b(x) = sum_j |theta_h_j + sum_i x_i w_ji|, rowwise over x."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if params.n_hidden == 0:
        return np.zeros(x.shape[0])
    return np.abs(params.hidden[None, :] + x @ params.interaction.T).sum(axis=1)


def visible_extremes_by_hidden(params: RbmParams, h) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form (min over x, max over x) of f(., h), rowwise over h."""
    h = np.atleast_2d(np.asarray(h, dtype=np.float64))
    center = h @ params.hidden
    a = visible_absum(params, h)
    return center - a, center + a


def hidden_extremes_by_visible(params: RbmParams, x) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form (min over h, max over h) of f(x, .), rowwise over x."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    center = x @ params.visible
    b = hidden_absum(params, x)
    return center - b, center + b


@dataclass(frozen=True)
class RbmBoundsReport:
    """Extremal-bound quantities for one RBM parameter set.

    Fields needing an enumeration beyond the budget are None rather than
    failing the whole report: b_n, c_n, lrep_joint and the hidden-first
    quantities need 2^n_hidden; a_n and lrep_marginal need 2^n_visible.
    """

    n_visible: int
    n_hidden: int
    visible_l1: float
    hidden_l1: float
    interaction_l1: float
    n_h_log2: float
    a_n: float | None
    b_n: float | None
    c_n: float | None
    lrep_joint: float | None
    lrep_marginal: float | None
    a_n_hidden_first: float | None
    lower_witness: float | None  # 2 a(h*) at the h minimizing a(h) - h.theta_h


def bounds_report(params: RbmParams,
                  budget: int = DEFAULT_ENUMERATION_BUDGET) -> RbmBoundsReport:
    """Compute the bound quantities, asserting every proven inequality.

    Asserted (tolerance 1e-9 for float noise): B >= |theta_v|_1; the joint
    sandwich 2B + 2|theta_h|_1 >= joint LREP >= 2 max{B, |theta_h|_1};
    2B >= a_n_hidden_first >= a_n; a_n_hidden_first >= max{C, B - 2|theta_h|_1};
    |marginal LREP - a_n| <= n_hidden ln 2. The lower chain links are NOT
    asserted for a_n itself (they can fail; see the module docstring).
    """
    n, nh = params.n_visible, params.n_hidden
    hidden_ok = 2**nh <= budget
    visible_ok = 2**n <= budget

    b_n = c_n = lrep_joint = a_hidden_first = lower_witness = None
    if hidden_ok:
        hspace = OutcomeSpace(max(nh, 1), (-1, 1))
        hall = hspace.all_outcomes(budget) if nh else np.zeros((1, 0))
        a_vals = visible_absum(params, hall)
        centers = hall @ params.hidden if nh else np.zeros(1)
        b_n = float(a_vals.max())
        c_n = float(a_vals.min())
        lower_profile = centers - a_vals
        hi_all = float((centers + a_vals).max())
        lrep_joint = hi_all - float(lower_profile.min())
        a_hidden_first = hi_all - float(lower_profile.max())
        h_star = int(np.argmin(a_vals - centers))
        lower_witness = float(2.0 * a_vals[h_star])

    a_n = lrep_marginal = None
    if visible_ok:
        xspace = OutcomeSpace(n, (-1, 1))
        xall = xspace.all_outcomes(budget)
        phi = xall @ params.visible.astype(np.float64) + hidden_absum(params, xall)
        a_n = float(phi.max() - phi.min())
        lrep_marginal = lrep_report(make_rbm_marginal(params, budget=budget)).lrep

    report = RbmBoundsReport(
        n_visible=n, n_hidden=nh,
        visible_l1=params.visible_l1, hidden_l1=params.hidden_l1,
        interaction_l1=params.interaction_l1,
        n_h_log2=nh * math.log(2.0),
        a_n=a_n, b_n=b_n, c_n=c_n,
        lrep_joint=lrep_joint, lrep_marginal=lrep_marginal,
        a_n_hidden_first=a_hidden_first, lower_witness=lower_witness,
    )
    _assert_proven(report)
    return report


def _assert_proven(r: RbmBoundsReport) -> None:
    if r.b_n is not None:
        assert r.b_n >= r.visible_l1 - _TOL, "B >= |theta_v|_1 violated"
        assert 2 * r.b_n + 2 * r.hidden_l1 >= r.lrep_joint - _TOL
        assert r.lrep_joint >= 2 * max(r.b_n, r.hidden_l1) - _TOL
        assert r.a_n_hidden_first <= 2 * r.b_n + _TOL
        assert (r.a_n_hidden_first
                >= max(r.c_n, r.b_n - 2 * r.hidden_l1) - _TOL)
        assert r.a_n_hidden_first >= r.lower_witness - _TOL
        assert r.lower_witness >= r.c_n - _TOL
    if r.a_n is not None:
        if r.b_n is not None:
            assert 2 * r.b_n >= r.a_n - _TOL
            assert r.a_n_hidden_first >= r.a_n - _TOL
        assert abs(r.lrep_marginal - r.a_n) <= r.n_h_log2 + _TOL, \
            "marginal LREP must track a_n within n_hidden ln 2"


STABILITY_CONDITION_KEYS = (
    "visible_range_rate",        # a_n / N: drives the visible model
    "joint_drive_rate",          # max{|theta_h|_1, B} / N: drives the joint model
    "visible_excess_rate",       # (|theta_v|_1 - 2|theta_h|_1) / N
    "hidden_l1_rate",            # |theta_h|_1 / N
    "visible_related_l1_rate",   # (|theta_v|_1 + |theta_vh|_1) / N
    "total_l1_rate",             # |theta|_1 / N
)


@dataclass(frozen=True)
class StabilityConditions:
    """Finite-N trend report for the per-size bound rates along a path.

    ``verdicts`` maps each key in STABILITY_CONDITION_KEYS to a PathVerdict
    over the listed rates; ``hidden_ratio_growing`` flags a strictly
    increasing n_hidden / n_visible ratio along the path, the regime in
    which joint and marginal behavior can no longer be read together.
    """

    ns: tuple
    rates: dict
    verdicts: dict
    hidden_ratios: tuple
    hidden_ratio_growing: bool


def stability_conditions(params_path,
                         thresholds=None,
                         budget: int = DEFAULT_ENUMERATION_BUDGET
                         ) -> StabilityConditions:
    """Evaluate the bound rates along a path of RbmParams and report trends.

    Each rate is classified with the same heuristic as the path verdicts:
    strictly increasing and ending above the level threshold reads as a
    growth flag, a range below the flatness threshold as bounded.
    """
    from .metrics import PathThresholds, PathVerdict

    if thresholds is None:
        thresholds = PathThresholds()
    params_path = list(params_path)
    if len(params_path) < 3:
        raise ValueError("a stability path needs at least 3 entries")
    ns = [p.n_visible for p in params_path]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("visible counts must be strictly increasing")

    rates = {key: [] for key in STABILITY_CONDITION_KEYS}
    hidden_ratios = []
    for p in params_path:
        r = bounds_report(p, budget=budget)
        n = p.n_visible
        hidden_ratios.append(p.n_hidden / n)
        rates["visible_range_rate"].append(
            r.a_n / n if r.a_n is not None else math.nan)
        rates["joint_drive_rate"].append(
            max(r.hidden_l1, r.b_n) / n if r.b_n is not None else math.nan)
        rates["visible_excess_rate"].append((r.visible_l1 - 2 * r.hidden_l1) / n)
        rates["hidden_l1_rate"].append(r.hidden_l1 / n)
        rates["visible_related_l1_rate"].append(
            (r.visible_l1 + r.interaction_l1) / n)
        rates["total_l1_rate"].append(
            (r.visible_l1 + r.hidden_l1 + r.interaction_l1) / n)

    def classify(ys: list[float]) -> PathVerdict:
        arr = np.asarray(ys, dtype=np.float64)
        narr = np.asarray(ns, dtype=np.float64)
        slope = float(((narr - narr.mean()) * (arr - arr.mean())).sum()
                      / ((narr - narr.mean()) ** 2).sum())
        if np.all(np.diff(arr) > 0) and arr[-1] > thresholds.level:
            verdict = "empirically-unstable"
        elif arr.max() - arr.min() < thresholds.flatness:
            verdict = "empirically-stable"
        else:
            verdict = "inconclusive"
        return PathVerdict(ns=tuple(ns), scaled_lreps=tuple(float(y) for y in arr),
                           trend_slope=slope, verdict=verdict)

    verdicts = {key: classify(vals) for key, vals in rates.items()}
    ratios = np.asarray(hidden_ratios)
    growing = bool(ratios.size >= 2 and np.all(np.diff(ratios) > 0))
    return StabilityConditions(
        ns=tuple(ns),
        rates={k: tuple(v) for k, v in rates.items()},
        verdicts=verdicts,
        hidden_ratios=tuple(hidden_ratios),
        hidden_ratio_growing=growing,
    )
