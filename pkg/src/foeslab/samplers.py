"""Gibbs and Metropolis-Hastings machinery with mixing diagnostics.

Exactness is the point: the models are small enough to enumerate, so a
chain's empirical occupancy can be compared against the exact distribution
in total variation, full-conditional ratios can be checked against joint
ratios, and the one-sweep transition kernel can be applied to the exact
distribution analytically. Unstable models show up here as entrapment:
chains fall into a modal set and the conditional ratios observed along the
way grow with the model's size-scaled extremal log-ratio.

All randomness flows through numpy's Philox counter-based generator keyed
by the 64-bit config seed, so traces are reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FoesModel, UniformModelError
from .metrics import modal_set
from .zoo import LinearExpFamily


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(stream)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class ChainConfig:
    """Length, burn-in, seed and start state of one chain.

    ``init_outcome`` is an outcome vector, or None for a uniform random
    start. ``n_sweeps`` must exceed ``burn_in``.
    """

    n_sweeps: int
    burn_in: int = 0
    seed: int = 0
    init_outcome: tuple | None = None

    def __post_init__(self):
        if not self.n_sweeps > self.burn_in >= 0:
            raise ValueError("need n_sweeps > burn_in >= 0")


@dataclass(frozen=True)
class MixingReport:
    """Summary of one Gibbs run against the exact distribution.

    ``tv_distance`` compares post-burn-in occupancy with the exact
    probabilities; ``max_transition_log_ratio`` is the largest spread of
    log full-conditional probabilities observed in any site update;
    ``mode_escape_time`` counts sweeps from first entering the epsilon
    modal set until first leaving it (None when the chain never enters or
    never leaves); ``modal_occupancy`` is the post-burn-in fraction of
    sweeps spent inside the modal set. ``trace`` holds the outcome index
    after each sweep when requested, else None.
    """

    tv_distance: float
    max_transition_log_ratio: float
    mode_escape_time: int | None
    modal_occupancy: float
    epsilon: float
    n_sweeps: int
    burn_in: int
    trace: np.ndarray | None = None


def gibbs_full_conditional(model: FoesModel, outcome, index: int) -> np.ndarray:
    """P(X_index = v | rest) for each alphabet value v, in alphabet order.

    Conditionals are proportional to joint probabilities, so the log-ratio
    of two conditional values equals the log-ratio of the two completed
    outcomes' joint probabilities.
    """
    outcome = np.asarray(outcome)
    n = model.n_variables
    if not 0 <= index < n:
        raise ValueError(f"variable index {index} out of range [0, {n})")
    k = model.space.alphabet_size
    completions = np.repeat(outcome[None, :], k, axis=0)
    completions[:, index] = model.space.alphabet
    scores = model.score(completions)
    m = scores.max()
    w = np.exp(scores - m)
    return w / w.sum()


def run_gibbs(model: FoesModel, config: ChainConfig, epsilon: float = 0.1,
              random_scan: bool = False, keep_trace: bool = False) -> MixingReport:
    """Systematic-scan Gibbs sampler with exact mixing diagnostics.

    One sweep updates every variable once (in index order, or in a random
    order per sweep when ``random_scan``); the state after each sweep is
    one sample. Deterministic given the config seed.
    """
    scores = model.scores()
    logp = model.log_probs()
    mset = modal_set(model, epsilon)
    in_modal = mset.member_mask(model.space.n_outcomes)
    k = model.space.alphabet_size
    n = model.n_variables
    strides = [k**i for i in range(n)]
    rng = _rng(config.seed)

    if config.init_outcome is None:
        idx = int(rng.integers(model.space.n_outcomes))
    else:
        idx = model.space.encode(np.asarray(config.init_outcome))

    trace = np.empty(config.n_sweeps, dtype=np.int64)
    max_ratio = 0.0
    entry_sweep = 0 if in_modal[idx] else None
    escape_time = None

    for sweep in range(1, config.n_sweeps + 1):
        order = rng.permutation(n) if random_scan else range(n)
        for i in order:
            stride = strides[i]
            digit = (idx // stride) % k
            base = idx - digit * stride
            cand = base + stride * np.arange(k)
            s = scores[cand]
            max_ratio = max(max_ratio, float(s.max() - s.min()))
            w = np.exp(s - s.max())
            w /= w.sum()
            digit = int(np.searchsorted(np.cumsum(w), rng.random(), side="right"))
            digit = min(digit, k - 1)
            idx = base + digit * stride
        trace[sweep - 1] = idx
        if entry_sweep is None and in_modal[idx]:
            entry_sweep = sweep
        elif entry_sweep is not None and escape_time is None and not in_modal[idx]:
            escape_time = sweep - entry_sweep

    kept = trace[config.burn_in:]
    occupancy = float(in_modal[kept].mean())
    counts = np.bincount(kept, minlength=model.space.n_outcomes)
    emp = counts / kept.size
    tv = 0.5 * float(np.abs(emp - np.exp(logp)).sum())

    return MixingReport(
        tv_distance=tv,
        max_transition_log_ratio=max_ratio,
        mode_escape_time=escape_time,
        modal_occupancy=occupancy,
        epsilon=epsilon,
        n_sweeps=config.n_sweeps,
        burn_in=config.burn_in,
        trace=trace if keep_trace else None,
    )


def apply_gibbs_sweep(model: FoesModel, dist: np.ndarray) -> np.ndarray:
    """Apply one exact systematic-scan Gibbs sweep to a distribution.

    Composes the per-site transition kernels in index order; each site
    kernel leaves the model's exact distribution invariant, so the full
    sweep does too.
    """
    scores = model.scores()
    k = model.space.alphabet_size
    n = model.n_variables
    dist = np.asarray(dist, dtype=np.float64).copy()
    for i in range(n):
        shape = (k ** (n - 1 - i), k, k**i)
        block = scores.reshape(shape)
        m = block.max(axis=1, keepdims=True)
        cond = np.exp(block - m)
        cond /= cond.sum(axis=1, keepdims=True)
        marg = dist.reshape(shape).sum(axis=1, keepdims=True)
        dist = (marg * cond).reshape(-1)
    return dist


@dataclass(frozen=True)
class MhResult:
    """Trace of a random-walk Metropolis-Hastings run over parameters.

    ``thetas`` has shape (n_steps + 1, k) including the start point;
    ``proposals`` holds every proposed point (accepted or not) and
    ``log_alphas`` the log acceptance ratio of each proposal (clipped at 0
    when computing the accept probability, stored unclipped).
    """

    thetas: np.ndarray
    proposals: np.ndarray
    accepted: np.ndarray
    log_alphas: np.ndarray

    @property
    def acceptance_rate(self) -> float:
        return float(self.accepted.mean())


def run_param_mh(model_family, data_outcome, config: ChainConfig,
                 theta0, step_size: float = 0.5,
                 log_prior=None) -> MhResult:
    """Random-walk MH over a model family's parameter vector.

    ``model_family`` maps a parameter vector to a FoesModel; the likelihood
    of ``data_outcome`` is evaluated exactly by enumeration at every
    proposal. The proposal is an isotropic Gaussian step (symmetric, so the
    proposal ratio cancels in the acceptance probability); ``log_prior``
    defaults to flat.
    """
    if config.n_sweeps < 1:
        raise ValueError("need at least one step")
    if log_prior is None:
        log_prior = lambda theta: 0.0
    rng = _rng(config.seed)
    theta = np.atleast_1d(np.asarray(theta0, dtype=np.float64)).copy()

    def log_post(th: np.ndarray) -> float:
        model = model_family(th)
        idx = model.space.encode(np.asarray(data_outcome))
        return float(model.log_probs()[idx]) + float(log_prior(th))

    current = log_post(theta)
    thetas = [theta.copy()]
    proposals = np.empty((config.n_sweeps, theta.size))
    accepted = np.zeros(config.n_sweeps, dtype=bool)
    log_alphas = np.empty(config.n_sweeps)
    for step in range(config.n_sweeps):
        proposal = theta + step_size * rng.standard_normal(theta.size)
        proposals[step] = proposal
        cand = log_post(proposal)
        log_alpha = cand - current
        log_alphas[step] = log_alpha
        if np.log(rng.random()) < min(0.0, log_alpha):
            theta = proposal
            current = cand
            accepted[step] = True
        thetas.append(theta.copy())
    return MhResult(thetas=np.asarray(thetas), proposals=proposals,
                    accepted=accepted, log_alphas=log_alphas)


def expected_standardized_log_prob(model: FoesModel) -> float:
    """Exact expectation of the standardized log-probability position.

    The statistic (log P(X) - min log P) / LREP lies in [0, 1]; under a
    strongly concentrated model its expectation approaches 1.
    """
    scores = model.scores()
    lo, hi = float(scores.min()), float(scores.max())
    if hi == lo:
        raise UniformModelError("statistic undefined for a uniform model")
    g = (scores - lo) / (hi - lo)
    return float(np.exp(model.log_probs()) @ g)


def expected_statistic(model: LinearExpFamily) -> np.ndarray:
    """Exact mean of the sufficient-statistic vector under the model."""
    p = np.exp(model.log_probs())
    return p @ model.statistic_values()


def normalized_score(model: LinearExpFamily) -> float:
    """Mean statistic rescaled to [0, 1] by its extremes (one-parameter).

    Returns (E g(X) - min g) / (max g - min g); the likelihood equation for
    a one-parameter family solves E g = g(x), so values pinned near 0 or 1
    mean optimization targets are reachable only from extreme outcomes.
    """
    if model.n_params != 1:
        raise ValueError("normalized score is defined for one-parameter models")
    mu = float(expected_statistic(model)[0])
    u, l = model.statistic_extremes()
    u, l = float(u[0]), float(l[0])
    if u == l:
        raise UniformModelError("statistic has zero range")
    return (mu - l) / (u - l)
