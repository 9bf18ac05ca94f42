"""Parameter-sign-reversal checks and modal-mass degeneracy trends.

A family has reciprocal probabilities under sign reversal (PSR) when
P_theta(x) * P_{-theta}(x) is the same for every outcome x, equal to
max_y P_theta(y) * min_y P_{-theta}(y). PSR forces the extremal log-ratio
to be identical under theta and -theta, and makes the modal set under
theta and the modal complement under -theta soak up mass together as a
family slides into degeneracy. Everything here is verified exhaustively
over the enumerated space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import ParameterPath, lrep, modal_set

PSR_TOL = 1e-9


@dataclass(frozen=True)
class PsrReport:
    """Exhaustive sign-reversal check for one family at one parameter.

    ``max_violation`` is the largest |log[P_theta(x) P_-theta(x)] -
    log[max P_theta * min P_-theta]| over all outcomes; ``holds`` means it
    stays within PSR_TOL (the identity is exact in algebra for every model
    family here, so the tolerance covers float noise only). When the
    condition holds, the two extremal log-ratios agree to the same
    tolerance.
    """

    holds: bool
    max_violation: float
    lrep_theta: float
    lrep_neg_theta: float


def check_psr(model_family, theta) -> PsrReport:
    """Verify reciprocal probabilities under sign reversal, exhaustively.

    ``model_family`` maps a parameter object to a FoesModel and must accept
    the negated parameter (arrays and the parameter dataclasses here all
    support unary minus).
    """
    model_pos = model_family(theta)
    model_neg = model_family(_negate(theta))
    logp_pos = model_pos.log_probs()
    logp_neg = model_neg.log_probs()
    product = logp_pos + logp_neg
    target = logp_pos.max() + logp_neg.min()
    max_violation = float(np.abs(product - target).max())
    return PsrReport(
        holds=max_violation <= PSR_TOL,
        max_violation=max_violation,
        lrep_theta=lrep(model_pos).lrep,
        lrep_neg_theta=lrep(model_neg).lrep,
    )


def _negate(theta):
    if isinstance(theta, (int, float)):
        return -theta
    if isinstance(theta, np.ndarray):
        return -theta
    if isinstance(theta, (list, tuple)):
        return type(theta)(-t for t in theta)
    return -theta  # parameter dataclasses define __neg__


def sign_reversal_masses(model_family, theta, epsilon: float
                         ) -> tuple[float, float]:
    """Modal mass under theta and complement mass under -theta.

    Builds the epsilon modal set M of the theta model and returns
    (P_theta(M), P_-theta(complement of M)), both exact. Raises when the
    family fails the sign-reversal check at this parameter.
    """
    report = check_psr(model_family, theta)
    if not report.holds:
        raise ValueError(
            f"sign-reversal condition violated (max violation "
            f"{report.max_violation:.3e}); masses are only paired under it"
        )
    model_pos = model_family(theta)
    model_neg = model_family(_negate(theta))
    mset = modal_set(model_pos, epsilon)
    mask = mset.member_mask(model_pos.space.n_outcomes)
    p_neg = np.exp(model_neg.log_probs())
    return mset.mass, float(p_neg[~mask].sum())


def degeneracy_trend(path: ParameterPath, epsilon: float) -> list[float]:
    """Exact modal-set mass at each entry of a parameter path.

    For a path whose size-scaled extremal log-ratio diverges, these masses
    approach 1; at desk scale the approach need not be monotone because the
    threshold interacts with integer-valued statistics.
    """
    return [modal_set(model, epsilon).mass for model in path.models()]


def complement_inclusion_holds(model_family, theta, epsilon: float) -> bool:
    """Exhaustively check M(1-eps) under -theta sits inside the complement
    of M(eps) under theta.

    This inclusion is what transfers modal mass under theta to complement
    mass under -theta for sign-reversal families.
    """
    model_pos = model_family(theta)
    model_neg = model_family(_negate(theta))
    m_pos = modal_set(model_pos, epsilon)
    m_neg = modal_set(model_neg, 1.0 - epsilon)
    pos_mask = m_pos.member_mask(model_pos.space.n_outcomes)
    return bool(np.all(~pos_mask[m_neg.members]))
