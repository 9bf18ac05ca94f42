"""Concrete FOES model constructors.

Covers linear exponential families (iid Bernoulli, iid multinomial, the
edge/2-star/triangle random-graph model), restricted Boltzmann machines
(joint and analytically-marginalized visible models on {-1,+1} variables),
and small deep Boltzmann machines marginalized by full enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    BudgetExceededError,
    FoesModel,
    OutcomeSpace,
)

GRAPH_TERMS = ("edges", "two_stars", "triangles")


class LinearExpFamily(FoesModel):
    """FOES model with score theta . g(x) for a statistic vector g.

    ``stat_fn`` maps an (m, n_variables) outcome array to an (m, k) matrix
    of sufficient-statistic values; ``params`` is the length-k coefficient
    vector (the natural parameter map is the identity; curved maps are not
    supported).
    """

    def __init__(
        self,
        space: OutcomeSpace,
        stat_fn: Callable[[np.ndarray], np.ndarray],
        params,
        family: str = "linear-exp",
        budget: int = DEFAULT_ENUMERATION_BUDGET,
    ):
        params = np.atleast_1d(np.asarray(params, dtype=np.float64))
        if params.ndim != 1 or params.size < 1:
            raise ValueError("params must be a nonempty vector")
        if not np.all(np.isfinite(params)):
            raise ValueError("params must be finite")
        self.stat_fn = stat_fn
        self.params = params
        self._stat_values = None

        def score_fn(outcomes: np.ndarray) -> np.ndarray:
            g = np.asarray(stat_fn(outcomes), dtype=np.float64)
            if g.ndim == 1:
                g = g[:, None]
            if g.shape[1] != params.size:
                raise ValueError(
                    f"statistic dimension {g.shape[1]} != params length {params.size}"
                )
            return g @ params

        super().__init__(space, score_fn, family=family, budget=budget)

    @property
    def n_params(self) -> int:
        return self.params.size

    def statistic_values(self) -> np.ndarray:
        """(n_outcomes, k) matrix of statistic values, enumerated and cached."""
        if self._stat_values is None:
            g = np.asarray(self.stat_fn(self.space.all_outcomes(self.budget)),
                           dtype=np.float64)
            if g.ndim == 1:
                g = g[:, None]
            self._stat_values = g
        return self._stat_values

    def statistic_extremes(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-statistic (max, min) over the whole space, by enumeration."""
        g = self.statistic_values()
        return g.max(axis=0), g.min(axis=0)

    def with_params(self, params) -> "LinearExpFamily":
        """Same family and statistics, different coefficient vector."""
        return LinearExpFamily(self.space, self.stat_fn, params,
                               family=self.family, budget=self.budget)


def make_uniform(n: int, alphabet_size: int = 2,
                 budget: int = DEFAULT_ENUMERATION_BUDGET) -> FoesModel:
    """Equi-probability model on {0..alphabet_size-1}^n."""
    space = OutcomeSpace(n, tuple(range(alphabet_size)))
    return FoesModel(space, lambda x: np.zeros(x.shape[0]), family="uniform",
                     budget=budget)


def make_bernoulli(n: int, theta: float,
                   budget: int = DEFAULT_ENUMERATION_BUDGET) -> LinearExpFamily:
    """iid Bernoulli model on {0,1}^n with log-odds parameter theta.

    Score is theta * sum(x); the per-variable success probability is
    logistic(theta).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    space = OutcomeSpace(n, (0, 1))
    return LinearExpFamily(space, lambda x: x.sum(axis=1, dtype=np.float64),
                           [theta], family="bernoulli", budget=budget)


def make_multinomial(n: int, thetas,
                     budget: int = DEFAULT_ENUMERATION_BUDGET) -> LinearExpFamily:
    """iid multinomial model on {1..k}^n with one log-weight per category.

    Category log-probability differences equal theta_i - theta_j; adding a
    constant to all thetas leaves the model unchanged.
    """
    thetas = np.asarray(thetas, dtype=np.float64)
    k = thetas.size
    if k < 2:
        raise ValueError("multinomial needs at least 2 categories")
    space = OutcomeSpace(n, tuple(range(1, k + 1)))

    def stat_fn(outcomes: np.ndarray) -> np.ndarray:
        # count of category j per outcome row; symbols are 1-based
        return np.stack(
            [(outcomes == j).sum(axis=1) for j in range(1, k + 1)], axis=1
        ).astype(np.float64)

    return LinearExpFamily(space, stat_fn, thetas, family="multinomial",
                           budget=budget)


@dataclass(frozen=True)
class GraphModelSpec:
    """Random-graph model on the N = n(n-1)/2 edge indicators of n nodes.

    Edge variable i corresponds to the i-th node pair in lexicographic
    order (0,1),(0,2),...,(n-2,n-1). ``active_terms`` selects which of the
    edge, 2-star and triangle counts enter the score; inactive parameters
    are fixed at 0.
    """

    n_nodes: int
    params: tuple = (0.0, 0.0, 0.0)  # (theta_edges, theta_two_stars, theta_triangles)
    active_terms: tuple = GRAPH_TERMS

    def __post_init__(self):
        if self.n_nodes < 3:
            raise ValueError("graph model needs at least 3 nodes")
        if len(self.params) != 3:
            raise ValueError("params must be (theta1, theta2, theta3)")
        unknown = set(self.active_terms) - set(GRAPH_TERMS)
        if unknown:
            raise ValueError(f"unknown graph terms: {sorted(unknown)}")
        for term, theta in zip(GRAPH_TERMS, self.params):
            if term not in self.active_terms and theta != 0.0:
                raise ValueError(f"inactive term {term!r} must keep parameter 0")

    @property
    def n_edges(self) -> int:
        return self.n_nodes * (self.n_nodes - 1) // 2

    @property
    def edge_index(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(self.n_nodes), 2))

    def incidence(self) -> np.ndarray:
        """(n_edges, n_nodes) 0/1 matrix: edge rows, endpoint columns."""
        inc = np.zeros((self.n_edges, self.n_nodes), dtype=np.float64)
        for e, (a, b) in enumerate(self.edge_index):
            inc[e, a] = 1.0
            inc[e, b] = 1.0
        return inc

    def triangle_edges(self) -> np.ndarray:
        """(n_triples, 3) edge indices of each node triple's three edges."""
        pos = {pair: e for e, pair in enumerate(self.edge_index)}
        triples = [
            (pos[(a, b)], pos[(a, c)], pos[(b, c)])
            for a, b, c in itertools.combinations(range(self.n_nodes), 3)
        ]
        return np.asarray(triples, dtype=np.int64)


def graph_statistics(spec: GraphModelSpec, outcomes: np.ndarray) -> np.ndarray:
    """(m, 3) matrix of (edge, 2-star, triangle) counts per outcome row.

    2-stars are unordered pairs of distinct edges sharing a node, counted
    as sum_v C(deg(v), 2); triangles are node triples whose three edges are
    all present.
    """
    x = outcomes.astype(np.float64)
    g1 = x.sum(axis=1)
    deg = x @ spec.incidence()
    g2 = (deg * (deg - 1.0) / 2.0).sum(axis=1)
    tri = spec.triangle_edges()
    if tri.size:
        g3 = (x[:, tri[:, 0]] * x[:, tri[:, 1]] * x[:, tri[:, 2]]).sum(axis=1)
    else:
        g3 = np.zeros(x.shape[0])
    return np.stack([g1, g2, g3], axis=1)


def make_graph_model(spec: GraphModelSpec,
                     budget: int = DEFAULT_ENUMERATION_BUDGET) -> LinearExpFamily:
    """Exponential random-graph model with edge/2-star/triangle terms."""
    term_cols = [GRAPH_TERMS.index(t) for t in spec.active_terms]
    params = [spec.params[c] for c in term_cols]
    space = OutcomeSpace(spec.n_edges, (0, 1))

    def stat_fn(outcomes: np.ndarray) -> np.ndarray:
        return graph_statistics(spec, outcomes)[:, term_cols]

    return LinearExpFamily(space, stat_fn, params, family="graph", budget=budget)


def graph_statistic_extremes(spec: GraphModelSpec,
                             budget: int = DEFAULT_ENUMERATION_BUDGET) -> dict:
    """Exact per-statistic (max, min) over all graphs, by enumeration."""
    model = make_graph_model(spec, budget=budget)
    u, l = model.statistic_extremes()
    return {term: (float(u[i]), float(l[i]))
            for i, term in enumerate(spec.active_terms)}


@dataclass(frozen=True)
class RbmParams:
    """Parameters of a restricted Boltzmann machine on {-1,+1} variables.

    ``interaction`` has shape (n_hidden, n_visible); entry (j, i) couples
    hidden unit j with visible unit i. ``n_hidden = 0`` yields an
    independence model for the visibles.
    """

    visible: np.ndarray
    hidden: np.ndarray
    interaction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "visible",
                           np.atleast_1d(np.asarray(self.visible, dtype=np.float64)))
        object.__setattr__(self, "hidden",
                           np.asarray(self.hidden, dtype=np.float64).reshape(-1))
        inter = np.asarray(self.interaction, dtype=np.float64)
        inter = inter.reshape(self.hidden.size, self.visible.size)
        object.__setattr__(self, "interaction", inter)
        if self.visible.size < 1:
            raise ValueError("need at least one visible variable")
        for name in ("visible", "hidden", "interaction"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} parameters must be finite")

    @property
    def n_visible(self) -> int:
        return self.visible.size

    @property
    def n_hidden(self) -> int:
        return self.hidden.size

    def __neg__(self) -> "RbmParams":
        return RbmParams(-self.visible, -self.hidden, -self.interaction)

    def transpose(self) -> "RbmParams":
        """Swap the visible and hidden roles (interaction transposed)."""
        return RbmParams(self.hidden.copy(), self.visible.copy(),
                         self.interaction.T.copy())

    @property
    def visible_l1(self) -> float:
        return float(np.abs(self.visible).sum())

    @property
    def hidden_l1(self) -> float:
        return float(np.abs(self.hidden).sum())

    @property
    def interaction_l1(self) -> float:
        return float(np.abs(self.interaction).sum())


def rbm_joint_score(params: RbmParams, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Joint score x.theta_v + h.theta_h + sum_ij x_i h_j w_ji, rowwise."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    h = np.atleast_2d(np.asarray(h, dtype=np.float64))
    return (x @ params.visible + h @ params.hidden
            + ((x @ params.interaction.T) * h).sum(axis=1))


def make_rbm_joint(params: RbmParams,
                   budget: int = DEFAULT_ENUMERATION_BUDGET) -> FoesModel:
    """Joint RBM model over {-1,+1}^(n_visible + n_hidden).

    Outcome vectors concatenate the visibles first, then the hiddens.
    """
    n, nh = params.n_visible, params.n_hidden
    space = OutcomeSpace(n + nh, (-1, 1))

    def score_fn(outcomes: np.ndarray) -> np.ndarray:
        return rbm_joint_score(params, outcomes[:, :n], outcomes[:, n:])

    return FoesModel(space, score_fn, family="rbm_joint", budget=budget)


def _log2cosh(z: np.ndarray) -> np.ndarray:
    # log(2 cosh z) = |z| + log1p(exp(-2|z|)), overflow-free
    az = np.abs(z)
    return az + np.log1p(np.exp(-2.0 * az))


def make_rbm_marginal(params: RbmParams,
                      budget: int = DEFAULT_ENUMERATION_BUDGET) -> FoesModel:
    """Visible RBM model on {-1,+1}^n_visible, hiddens summed out analytically.

    Score is x.theta_v + sum_j log(2 cosh(theta_h_j + sum_i x_i w_ji)),
    which equals the log of the brute-force hidden sum of the joint model.
    """

    def score_fn(outcomes: np.ndarray) -> np.ndarray:
        x = outcomes.astype(np.float64)
        base = x @ params.visible
        if params.n_hidden == 0:
            return base
        z = params.hidden[None, :] + x @ params.interaction.T
        return base + _log2cosh(z).sum(axis=1)

    space = OutcomeSpace(params.n_visible, (-1, 1))
    return FoesModel(space, score_fn, family="rbm_marginal", budget=budget)


@dataclass(frozen=True)
class DbmParams:
    """Parameters of a deep Boltzmann machine with M stacked hidden layers.

    ``visible_bias`` has length N; ``hidden_biases[i]`` has the length of
    hidden layer i+1. ``couplings[0]`` has shape (n_h1, N) and couples the
    first hidden layer to the visibles; ``couplings[i]`` has shape
    (n_hi, n_h(i+1)) and couples consecutive hidden layers.
    """

    visible_bias: np.ndarray
    hidden_biases: tuple
    couplings: tuple

    def __post_init__(self):
        object.__setattr__(self, "visible_bias",
                           np.atleast_1d(np.asarray(self.visible_bias, dtype=np.float64)))
        object.__setattr__(self, "hidden_biases",
                           tuple(np.atleast_1d(np.asarray(a, dtype=np.float64))
                                 for a in self.hidden_biases))
        object.__setattr__(self, "couplings",
                           tuple(np.asarray(g, dtype=np.float64) for g in self.couplings))
        m = len(self.hidden_biases)
        if m < 1:
            raise ValueError("need at least one hidden layer")
        if len(self.couplings) != m:
            raise ValueError("need one coupling matrix per hidden layer")
        sizes = self.layer_sizes
        if self.couplings[0].shape != (sizes[1], sizes[0]):
            raise ValueError("couplings[0] must have shape (n_h1, n_visible)")
        for i in range(1, m):
            if self.couplings[i].shape != (sizes[i], sizes[i + 1]):
                raise ValueError(
                    f"couplings[{i}] must have shape (n_h{i}, n_h{i + 1})"
                )

    @property
    def layer_sizes(self) -> tuple:
        return (self.visible_bias.size,) + tuple(a.size for a in self.hidden_biases)

    def __neg__(self) -> "DbmParams":
        return DbmParams(-self.visible_bias,
                         tuple(-a for a in self.hidden_biases),
                         tuple(-g for g in self.couplings))


def make_dbm_marginal(params: DbmParams,
                      budget: int = DEFAULT_ENUMERATION_BUDGET) -> FoesModel:
    """Visible DBM model, hidden layers summed out by full enumeration."""
    sizes = params.layer_sizes
    n = sizes[0]
    total = sum(sizes)
    if 2**total > budget:
        raise BudgetExceededError(
            f"2^{total} joint outcomes exceed the enumeration budget {budget}"
        )
    hidden_total = total - n
    hspace = OutcomeSpace(max(hidden_total, 1), (-1, 1))
    if hidden_total == 0:
        hall = np.zeros((1, 0))
    else:
        hall = hspace.all_outcomes(budget).astype(np.float64)
    # split the flat hidden enumeration into per-layer blocks
    splits = np.cumsum(sizes[1:])[:-1]
    layers = np.split(hall, splits, axis=1) if hidden_total else []

    # per-hidden-configuration constant: biases plus layer-to-layer terms
    const = np.zeros(hall.shape[0])
    for h, a in zip(layers, params.hidden_biases):
        const += h @ a
    for i in range(1, len(layers)):
        const += ((layers[i - 1] @ params.couplings[i]) * layers[i]).sum(axis=1)

    def score_fn(outcomes: np.ndarray) -> np.ndarray:
        x = outcomes.astype(np.float64)
        base = x @ params.visible_bias
        if not layers:
            return base
        cross = layers[0] @ params.couplings[0] @ x.T  # (n_hidden_conf, m)
        joint = const[:, None] + cross
        m = joint.max(axis=0)
        return base + m + np.log(np.exp(joint - m[None, :]).sum(axis=0))

    space = OutcomeSpace(n, (-1, 1))
    return FoesModel(space, score_fn, family="dbm_marginal", budget=budget)
