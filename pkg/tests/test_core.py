"""Outcome-space encoding, normalization and replication invariants."""

import math

import numpy as np
import pytest

from foeslab import (
    BudgetExceededError,
    FoesModel,
    OutcomeSpace,
    enumerate_log_probs,
    log_sum_exp,
    make_bernoulli,
    make_graph_model,
    make_multinomial,
    make_rbm_joint,
    make_rbm_marginal,
    make_uniform,
    replicate,
    GraphModelSpec,
    RbmParams,
)
from foeslab.metrics import lrep

ZOO_SMALL = [
    make_uniform(3, 2),
    make_bernoulli(2, 1.0),
    make_bernoulli(3, -2.7),
    make_multinomial(2, [1.0, 0.0, -1.0]),
    make_graph_model(GraphModelSpec(3, params=(0.5, 1.3, -0.2))),
    make_rbm_marginal(RbmParams([0.9, -1.1], [0.4], [[0.6, -0.3]])),
    make_rbm_joint(RbmParams([0.9], [0.4], [[0.6]])),
]


class TestLogSumExp:
    def test_singleton_exact(self):
        assert log_sum_exp([0.0]) == 0.0
        assert log_sum_exp([-17.25]) == -17.25

    def test_equal_terms(self):
        assert log_sum_exp([math.log(2), math.log(2)]) == pytest.approx(
            math.log(4), abs=1e-15)

    def test_no_overflow(self):
        assert log_sum_exp([1000.0, 1000.0]) == pytest.approx(
            1000.0 + math.log(2), abs=1e-12)
        assert log_sum_exp([-1000.0, -1000.0]) == pytest.approx(
            -1000.0 + math.log(2), abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            log_sum_exp([])


class TestOutcomeSpace:
    @pytest.mark.parametrize("n,alphabet", [
        (10, (0, 1)), (6, (1, 2, 3)), (4, (-1, 1)), (3, (0, 1, 2, 3)),
    ])
    def test_encode_decode_roundtrip_all_indices(self, n, alphabet):
        space = OutcomeSpace(n, alphabet)
        outcomes = space.all_outcomes()
        for index in range(space.n_outcomes):
            vec = space.decode(index)
            assert np.array_equal(vec, outcomes[index])
            assert space.encode(vec) == index

    def test_little_endian(self):
        # index 1 changes variable 0, the least significant digit
        space = OutcomeSpace(3, (0, 1))
        assert list(space.decode(0)) == [0, 0, 0]
        assert list(space.decode(1)) == [1, 0, 0]
        assert list(space.decode(2)) == [0, 1, 0]
        assert list(space.decode(4)) == [0, 0, 1]

    def test_validation(self):
        with pytest.raises(ValueError):
            OutcomeSpace(0, (0, 1))
        with pytest.raises(ValueError):
            OutcomeSpace(2, ())
        with pytest.raises(ValueError):
            OutcomeSpace(2, (1, 1))

    def test_budget(self):
        space = OutcomeSpace(40, (0, 1))
        with pytest.raises(BudgetExceededError):
            space.check_budget()
        with pytest.raises(BudgetExceededError):
            OutcomeSpace(5, (0, 1)).check_budget(budget=2**4)
        OutcomeSpace(4, (0, 1)).check_budget(budget=2**4)


class TestEnumeration:
    def test_uniform_log_probs(self):
        logp = enumerate_log_probs(make_uniform(3, 2))
        np.testing.assert_allclose(logp, -3 * math.log(2), atol=1e-12)

    def test_bernoulli_zero_parameter_is_uniform(self):
        logp = enumerate_log_probs(make_bernoulli(2, 0.0))
        np.testing.assert_allclose(logp, -2 * math.log(2), atol=1e-12)

    def test_bernoulli_single_variable_closed_form(self):
        logp = enumerate_log_probs(make_bernoulli(1, 1.0))
        expected = np.array([-math.log(1 + math.e), 1 - math.log(1 + math.e)])
        np.testing.assert_allclose(logp, expected, atol=1e-12)

    @pytest.mark.parametrize("model", ZOO_SMALL, ids=lambda m: m.family)
    def test_normalization(self, model):
        total = np.exp(enumerate_log_probs(model)).sum()
        assert abs(total - 1.0) <= 1e-10

    def test_budget_exceeded_is_hard_error(self):
        with pytest.raises(BudgetExceededError):
            make_bernoulli(40, 1.0).scores()

    def test_nonfinite_score_rejected(self):
        space = OutcomeSpace(2, (0, 1))
        bad = FoesModel(space, lambda x: np.where(x.sum(1) > 1, -np.inf, 0.0))
        with pytest.raises(ValueError, match="non-finite"):
            bad.scores()

    def test_wrong_width_outcome_rejected(self):
        model = make_bernoulli(5, 1.0)
        with pytest.raises(ValueError, match="width"):
            model.score([1, 0, 1])
        with pytest.raises(ValueError):
            model.space.encode([0, 1, 2, 0, 0])


class TestConcurrentReads:
    def test_shared_model_lazy_caches_are_consistent(self):
        # models are immutable; lazy enumeration from many threads must
        # always land on the same table and normalizer
        from concurrent.futures import ThreadPoolExecutor

        for _ in range(5):
            model = make_rbm_marginal(
                RbmParams([0.9, -1.1, 0.4], [0.4, -0.2], np.ones((2, 3))))
            with ThreadPoolExecutor(max_workers=8) as pool:
                results = list(pool.map(
                    lambda _: (model.log_normalizer, model.log_probs()),
                    range(16)))
            base_psi, base_logp = results[0]
            for psi, logp in results[1:]:
                assert psi == base_psi
                np.testing.assert_array_equal(logp, base_logp)


class TestReplicate:
    def test_identity_replication(self):
        model = make_bernoulli(3, 0.7)
        rep = replicate(model, 1)
        np.testing.assert_array_equal(rep.log_probs(), model.log_probs())

    def test_uniform_stays_uniform(self):
        rep = replicate(make_uniform(2, 2), 2)
        np.testing.assert_allclose(rep.log_probs(), -4 * math.log(2), atol=1e-12)

    def test_block_additivity(self):
        model = make_multinomial(2, [0.4, -0.2])
        rep = replicate(model, 3)
        rng = np.random.default_rng(5)
        for _ in range(20):
            blocks = [model.space.decode(rng.integers(model.space.n_outcomes))
                      for _ in range(3)]
            joint = np.concatenate(blocks)
            expected = sum(model.log_prob(b) for b in blocks)
            assert rep.log_prob(joint) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("model", ZOO_SMALL, ids=lambda m: m.family)
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_scaled_lrep_invariant(self, model, m):
        if model.space.n_outcomes**m > 2**20:
            pytest.skip("replicated space too large for this sweep")
        base = lrep(model).scaled_lrep
        rep = lrep(replicate(model, m)).scaled_lrep
        if m <= 2:
            # doubling is exact in IEEE-754, so the ratio is bitwise equal
            assert rep == base
        else:
            # the threefold sum may round its last ulp
            assert rep == pytest.approx(base, abs=0, rel=1e-15)

    def test_invalid_count(self):
        with pytest.raises(ValueError):
            replicate(make_uniform(2, 2), 0)
