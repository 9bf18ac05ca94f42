"""Instability and degeneracy diagnostics, computed exactly by enumeration.

The central quantity is the log-ratio of extremal probabilities (LREP),
log[max_x P(x) / min_x P(x)]; a model sequence whose LREP grows faster
than the variable count N is the unstable regime every diagnostic here
probes. The module also computes the largest single-flip log-ratio, modal
sets and their mass, standardized log-probabilities, a stability bound for
fixed-dimension linear families, a closed-form lower bound for graph
models, and a finite-N trend classifier for parameter paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import FoesModel, UniformModelError
from .zoo import GraphModelSpec, LinearExpFamily, graph_statistics

# Outcomes whose log-probability falls within this distance below a modal
# threshold still count as members. Keeps exact ties (which arise for
# integer-valued statistics at round parameter values) deterministic
# instead of letting the last float ulp decide membership.
MODAL_TIE_TOL = 1e-9


@dataclass(frozen=True)
class InstabilityReport:
    """LREP diagnostics for one model instance.

    ``lrep`` is always >= 0, with equality exactly for uniform models.
    ``delta_n`` (the largest one-flip log-ratio) is filled by
    ``instability_report``; ``lrep`` alone leaves it None. Argmax/argmin
    ties break toward the lowest outcome index.
    """

    lrep: float
    scaled_lrep: float
    n_variables: int
    argmax_index: int
    argmin_index: int
    argmax_outcome: tuple
    argmin_outcome: tuple
    delta_n: float | None = None


def lrep(model: FoesModel) -> InstabilityReport:
    """Log-ratio of extremal probabilities, from full enumeration.

    Computed on unnormalized scores; the normalizer cancels in the ratio.
    """
    scores = model.scores()
    imax = int(np.argmax(scores))
    imin = int(np.argmin(scores))
    value = float(scores[imax] - scores[imin])
    n = model.n_variables
    return InstabilityReport(
        lrep=value,
        scaled_lrep=value / n,
        n_variables=n,
        argmax_index=imax,
        argmin_index=imin,
        argmax_outcome=tuple(int(v) for v in model.space.decode(imax)),
        argmin_outcome=tuple(int(v) for v in model.space.decode(imin)),
    )


def delta_n(model: FoesModel) -> float:
    """Largest log-probability ratio over outcome pairs one flip apart.

    Scans all ordered pairs differing in exactly one component; by pair
    symmetry the maximum signed log-ratio equals the maximum absolute one.
    Zero exactly for uniform models.
    """
    scores = model.scores()
    k = model.space.alphabet_size
    n = model.n_variables
    if k == 1:
        return 0.0
    best = 0.0
    for i in range(n):
        # digit i has stride k^i in the little-endian index; grouping by
        # (high, low) isolates the k outcomes differing only at variable i
        block = scores.reshape(k ** (n - 1 - i), k, k**i)
        spread = block.max(axis=1) - block.min(axis=1)
        best = max(best, float(spread.max()))
    return best


def instability_report(model: FoesModel) -> InstabilityReport:
    """LREP report with the one-flip log-ratio filled in."""
    base = lrep(model)
    return InstabilityReport(**{**base.__dict__, "delta_n": delta_n(model)})


@dataclass(frozen=True)
class ModalSet:
    """Outcomes whose log-probability clears a convex max/min threshold.

    ``threshold`` is (1-epsilon) * max log P + epsilon * min log P;
    members are the outcomes above it (ties within MODAL_TIE_TOL included,
    so a uniform model yields the full space). The argmax outcome is
    always a member and ``mass`` is the members' exact total probability.
    """

    epsilon: float
    threshold: float
    members: np.ndarray  # sorted outcome indices
    mass: float

    @property
    def n_members(self) -> int:
        return int(self.members.size)

    def member_mask(self, n_outcomes: int) -> np.ndarray:
        mask = np.zeros(n_outcomes, dtype=bool)
        mask[self.members] = True
        return mask


def modal_set(model: FoesModel, epsilon: float) -> ModalSet:
    """Modal set of ``model`` at level ``epsilon`` in (0, 1)."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    logp = model.log_probs()
    threshold = (1.0 - epsilon) * logp.max() + epsilon * logp.min()
    members = np.flatnonzero(logp > threshold - MODAL_TIE_TOL)
    mass = float(np.exp(logp[members]).sum())
    return ModalSet(epsilon=epsilon, threshold=float(threshold),
                    members=members, mass=mass)


def standardized_log_prob(model: FoesModel, outcome) -> float:
    """Position of an outcome's log-probability within the model's range.

    Returns (log P(x) - min log P) / (max log P - min log P) in [0, 1]:
    1 at an argmax outcome, 0 at an argmin outcome. Raises
    UniformModelError when the range is zero.
    """
    scores = model.scores()
    lo, hi = float(scores.min()), float(scores.max())
    if hi == lo:
        raise UniformModelError("standardized log-probability needs a "
                                "non-uniform model (zero denominator)")
    val = (float(model.score(np.asarray(outcome))) - lo) / (hi - lo)
    return min(1.0, max(0.0, val))


def g_distance(model_a: FoesModel, model_b: FoesModel) -> float:
    """Max over outcomes of the standardized log-probability gap.

    Both models must be non-uniform and share the same outcome space.
    Symmetric, zero on identical models, and satisfies the triangle
    inequality (it is a sup-distance of [0,1]-valued profiles).
    """
    if (model_a.space.n_variables != model_b.space.n_variables
            or model_a.space.alphabet != model_b.space.alphabet):
        raise ValueError("models live on different outcome spaces")
    profiles = []
    for model in (model_a, model_b):
        scores = model.scores()
        lo, hi = float(scores.min()), float(scores.max())
        if hi == lo:
            raise UniformModelError("g_distance needs non-uniform models")
        profiles.append((scores - lo) / (hi - lo))
    return float(np.abs(profiles[0] - profiles[1]).max())


def check_prop1_condition(model: LinearExpFamily,
                          extremes: tuple[np.ndarray, np.ndarray] | None = None
                          ) -> float:
    """Stability-bound value max_i |theta_i| (U_i - L_i) / N.

    ``extremes`` are the per-statistic (max, min) vectors; computed by
    enumeration when omitted. A parameter path along which this value stays
    bounded yields a stable model sequence; compare it across path entries.
    """
    if extremes is None:
        extremes = model.statistic_extremes()
    u, l = (np.asarray(extremes[0], dtype=np.float64),
            np.asarray(extremes[1], dtype=np.float64))
    return float(np.max(np.abs(model.params) * (u - l)) / model.n_variables)


def _graph_bound_branches(spec: GraphModelSpec) -> tuple[float, float]:
    """Size-scaled |log P(x_i)/P(x_0)| for the complete graph (branch 1)
    and the balanced complete-bipartite graph (branch 2), x_0 = empty."""
    n = spec.n_nodes
    n_edges = spec.n_edges
    pairs = spec.edge_index
    half = set(range(n // 2))
    complete = np.ones((1, n_edges))
    bipartite = np.array([[1.0 if (a in half) != (b in half) else 0.0
                           for a, b in pairs]])
    theta = np.asarray(spec.params, dtype=np.float64)
    g_complete = graph_statistics(spec, complete)[0]
    g_bipartite = graph_statistics(spec, bipartite)[0]
    branch1 = abs(float(theta @ g_complete)) / n_edges
    branch2 = abs(float(theta @ g_bipartite)) / n_edges
    return branch1, branch2


def graph_lower_bound(spec: GraphModelSpec) -> float:
    """Closed-form lower bound on the size-scaled LREP of a graph model.

    For an even node count n, evaluating the score at the empty graph, the
    complete graph and the balanced complete-bipartite graph gives

        (n-2) * max{ |t2 + t3/3 + t1/(n-2)|,
                     n/(4(n-1)) * |t2 + 2*t1/(n-2)| }.

    Both branches are cross-checked against direct statistic evaluation at
    those three configurations (they agree to 1e-10 by construction). The
    bound is positive whenever |t2| + |t3| > 0 except on a thin set, so it
    certifies instability for essentially all 2-star/triangle parameters.
    """
    n = spec.n_nodes
    if n % 2 != 0:
        raise ValueError("closed-form bound implemented for even node "
                         "counts only")
    t1, t2, t3 = spec.params
    branch1 = abs(t2 + t3 / 3.0 + t1 / (n - 2.0))
    branch2 = n / (4.0 * (n - 1.0)) * abs(t2 + 2.0 * t1 / (n - 2.0))
    direct1, direct2 = _graph_bound_branches(spec)
    assert abs((n - 2.0) * branch1 - direct1) <= 1e-10 * max(1.0, direct1)
    assert abs((n - 2.0) * branch2 - direct2) <= 1e-10 * max(1.0, direct2)
    return (n - 2.0) * max(branch1, branch2)


@dataclass(frozen=True)
class ParameterPath:
    """A family of parameter vectors indexed by strictly increasing N.

    ``model_family`` builds the model for one entry: a callable taking
    (n_variables, params) and returning a FoesModel. ``entries`` holds
    (n_variables, params) pairs, at least three of them.
    """

    model_family: Callable[[int, np.ndarray], FoesModel]
    entries: tuple

    def __post_init__(self):
        if len(self.entries) < 3:
            raise ValueError("a parameter path needs at least 3 entries")
        ns = [n for n, _ in self.entries]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("entry sizes must be strictly increasing")

    def models(self) -> list[FoesModel]:
        return [self.model_family(n, params) for n, params in self.entries]


@dataclass(frozen=True)
class PathThresholds:
    """Heuristic cutoffs for the finite-N path verdict.

    ``flatness`` bounds the range of scaled LREP for a stable call;
    ``level`` is the last scaled LREP an increasing sequence must exceed
    for an unstable call.
    """

    flatness: float = 0.1
    level: float = 5.0


@dataclass(frozen=True)
class PathVerdict:
    """Scaled-LREP trajectory along a path plus a heuristic verdict.

    The verdict is a finite-N surrogate for an asymptotic property and is
    deterministic given the trajectory and thresholds: "empirically-unstable"
    for a strictly increasing trajectory ending above ``level``,
    "empirically-stable" when the trajectory's range stays below
    ``flatness``, otherwise "inconclusive".
    """

    ns: tuple
    scaled_lreps: tuple
    trend_slope: float
    verdict: str


def classify_path(path: ParameterPath,
                  thresholds: PathThresholds = PathThresholds()) -> PathVerdict:
    """Scaled LREP at each path entry plus the heuristic trend verdict."""
    ns = np.array([n for n, _ in path.entries], dtype=np.float64)
    ys = np.array([lrep(m).scaled_lrep for m in path.models()])
    slope = float(((ns - ns.mean()) * (ys - ys.mean())).sum()
                  / ((ns - ns.mean()) ** 2).sum())
    if np.all(np.diff(ys) > 0) and ys[-1] > thresholds.level:
        verdict = "empirically-unstable"
    elif ys.max() - ys.min() < thresholds.flatness:
        verdict = "empirically-stable"
    else:
        verdict = "inconclusive"
    return PathVerdict(ns=tuple(int(n) for n in ns),
                       scaled_lreps=tuple(float(y) for y in ys),
                       trend_slope=slope, verdict=verdict)
