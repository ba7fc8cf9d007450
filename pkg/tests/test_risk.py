import math

import numpy as np
import pytest

from ilnlab.distributions import (Dataset, FiniteDistribution, NoiseModel,
                                  SyntheticDistribution, noisy_posterior,
                                  sample_dataset)
from ilnlab.hypotheses import (FiniteSignSpace, LinearBallSpace,
                               LinearHypothesis, SignTableHypothesis,
                               SolverConfig)
from ilnlab.losses import LossSpec
from ilnlab.minimax import build_construction
from ilnlab.risk import (MCRiskEstimate, RiskGapResult, empirical_risk,
                         exact_risk, mc_risk, risk_gap_experiment)
from ilnlab.verify import clean_noisy_gap_enumeration_check

ZERO_ONE = LossSpec("zero_one")


def bayes_table(dist):
    table = {p: (1 if e >= 0.5 else -1)
             for p, e in zip(dist.support, dist.posterior)}
    return SignTableHypothesis(table, FiniteSignSpace(dist.support))


class TestExactRisk:
    def test_bayes_risk_on_construction(self):
        dist = build_construction(0.4).clean_distribution("+")
        h = bayes_table(dist)
        assert exact_risk(h, dist, None, ZERO_ONE) == pytest.approx(
            0.28125, abs=1e-15)

    def test_deterministic_match_is_zero(self):
        dist = FiniteDistribution(("a", "b"), (0.5, 0.5), (1.0, 0.0))
        h = SignTableHypothesis({"a": 1, "b": -1},
                                FiniteSignSpace(("a", "b")))
        assert exact_risk(h, dist, None, ZERO_ONE) == 0.0

    def test_clean_minus_noisy_on_construction(self):
        pair = build_construction(0.4)
        dist = pair.clean_distribution("+")
        noise = pair.noise_model("+")
        h = SignTableHypothesis({"a": 1, "b": 1, "c": -1},
                                FiniteSignSpace(("a", "b", "c")))
        clean = exact_risk(h, dist, None, ZERO_ONE)
        noisy = exact_risk(h, dist, noise, ZERO_ONE)
        assert clean - noisy == pytest.approx(-0.09375, abs=1e-15)

    def test_noise_equals_transformed_posterior(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            k = int(rng.integers(2, 6))
            points = [f"p{i}" for i in range(k)]
            mass = rng.dirichlet(np.ones(k))
            eta = rng.uniform(0, 1, size=k)
            dist = FiniteDistribution(points, mass / mass.sum(), eta)
            rp = rng.uniform(0, 0.4, size=k)
            rm = rng.uniform(0, 0.4, size=k)
            noise = NoiseModel.table(
                {p: (rp[i], rm[i]) for i, p in enumerate(points)},
                rho_bound=float((rp + rm).max()))
            transformed = dist.with_posterior(noisy_posterior(eta, rp, rm))
            h = SignTableHypothesis(
                {p: int(s) for p, s in zip(points, rng.choice((-1, 1), k))},
                FiniteSignSpace(points))
            for spec in (ZERO_ONE, LossSpec("hinge")):
                via_noise = exact_risk(h, dist, noise, spec)
                via_transform = exact_risk(h, transformed, None, spec)
                assert abs(via_noise - via_transform) <= 1e-12

    def test_requires_finite_distribution(self):
        dist = SyntheticDistribution(means=[[0.0]], variances=[1.0],
                                     weights=[1.0], radius=1.0, slope=[1.0])
        space = LinearBallSpace(dim=1, x_star=1.0, w_star=1.0)
        h = LinearHypothesis(weights=[0.5], space=space)
        with pytest.raises(TypeError):
            exact_risk(h, dist, None, ZERO_ONE)


class TestEmpiricalRisk:
    def test_all_correct(self):
        x = np.array(["a", "b"])
        y = np.array([1, -1])
        data = Dataset(x=x, y=y, y_tilde=y, seed=0, config_digest="t")
        h = SignTableHypothesis({"a": 1, "b": -1},
                                FiniteSignSpace(("a", "b")))
        assert empirical_risk(h, data, ZERO_ONE, "clean") == 0.0

    def test_one_of_three_wrong(self):
        x = np.array(["a", "a", "a"])
        y = np.array([1, 1, -1])
        data = Dataset(x=x, y=y, y_tilde=y, seed=0, config_digest="t")
        h = SignTableHypothesis({"a": 1}, FiniteSignSpace(("a",)))
        assert empirical_risk(h, data, ZERO_ONE, "clean") == pytest.approx(1 / 3)

    def test_logistic_at_zero_score(self):
        space = LinearBallSpace(dim=1, x_star=1.0, w_star=1.0)
        h = LinearHypothesis(weights=[0.0], space=space)
        data = Dataset(x=np.array([[0.5], [-0.5]]), y=np.array([1, -1]),
                       y_tilde=np.array([1, -1]), seed=0, config_digest="t")
        assert empirical_risk(h, data, LossSpec("logistic"),
                              "clean") == pytest.approx(math.log(2))

    def test_empty_rejected(self):
        data = Dataset(x=np.zeros((0, 1)), y=np.zeros(0, dtype=int),
                       y_tilde=np.zeros(0, dtype=int), seed=0,
                       config_digest="t")
        h = LinearHypothesis(weights=[0.0],
                             space=LinearBallSpace(dim=1, x_star=1, w_star=1))
        with pytest.raises(ValueError):
            empirical_risk(h, data, ZERO_ONE, "clean")

    def test_concentrates_around_exact_risk(self):
        # Hoeffding at delta = 0.01 must cover in at least 99% of 500 trials
        dist = FiniteDistribution(("a", "b", "c"), (0.25, 0.5, 0.25),
                                  (0.9, 0.4, 0.2))
        h = bayes_table(dist)
        target = exact_risk(h, dist, None, ZERO_ONE)
        n = 400
        radius = math.sqrt(math.log(2 / 0.01) / (2 * n))
        hits = 0
        for seed in range(500):
            data = sample_dataset(dist, NoiseModel.rcn(0.0), n, seed=seed)
            emp = empirical_risk(h, data, ZERO_ONE, "clean")
            hits += abs(emp - target) <= radius
        assert hits >= 495


class TestMCRisk:
    @staticmethod
    def _dist(slope, intercept=0.0):
        return SyntheticDistribution(means=[[0.0, 0.0]], variances=[1.0, 1.0],
                                     weights=[1.0], radius=1.0, slope=slope,
                                     intercept=intercept)

    def test_ci_width_zero_one(self):
        dist = self._dist([1.0, 0.0])
        space = LinearBallSpace(dim=2, x_star=1.0, w_star=1.0)
        h = LinearHypothesis(weights=[1.0, 0.0], space=space)
        est = mc_risk(h, dist, None, ZERO_ONE, 10 ** 6, 0.05, seed=0)
        assert isinstance(est, MCRiskEstimate)
        assert est.ci_half_width == pytest.approx(
            math.sqrt(math.log(40) / (2 * 10 ** 6)), abs=1e-12)

    def test_constant_hypothesis_matches_label_marginal(self):
        # constant eta makes P(Y = -1) available in closed form
        q = 0.3
        dist = self._dist([0.0, 0.0], intercept=math.log((1 - q) / q))
        space = LinearBallSpace(dim=2, x_star=1.0, w_star=1.0)
        # zero weights give score 0 everywhere, classified +1 by the tie-break
        h = LinearHypothesis(weights=[0.0, 0.0], space=space)
        est = mc_risk(h, dist, None, ZERO_ONE, 10 ** 6, 0.05, seed=3)
        assert abs(est.estimate - q) <= est.ci_half_width

    def test_zero_noise_channels_agree(self):
        dist = self._dist([1.0, -0.5])
        space = LinearBallSpace(dim=2, x_star=1.0, w_star=1.0)
        h = LinearHypothesis(weights=[0.6, 0.2], space=space)
        a = mc_risk(h, dist, None, ZERO_ONE, 10 ** 5, 0.05, seed=8)
        b = mc_risk(h, dist, NoiseModel.rcn(0.0), ZERO_ONE, 10 ** 5, 0.05,
                    seed=8)
        assert a.estimate == b.estimate

    def test_validation(self):
        dist = self._dist([1.0, 0.0])
        space = LinearBallSpace(dim=2, x_star=1.0, w_star=1.0)
        h = LinearHypothesis(weights=[1.0, 0.0], space=space)
        with pytest.raises(ValueError):
            mc_risk(h, dist, None, ZERO_ONE, 0, 0.05, seed=0)
        with pytest.raises(ValueError):
            mc_risk(h, dist, None, ZERO_ONE, 10, 1.5, seed=0)


class TestRiskGapResult:
    def test_gap_identity_enforced(self):
        with pytest.raises(ValueError):
            RiskGapResult(clean_risk_of_clean_erm=0.1,
                          clean_risk_of_noisy_erm=0.3, gap=0.1,
                          clean_risk01_of_clean_erm=0.0,
                          clean_risk01_of_noisy_erm=0.0, gap01=0.0,
                          bound_theorem1=1.0, g_delta=0.1, C=1.0, rho=0.1,
                          n=10, seed=0, solver_tol=0.0, eval_ci=0.0,
                          delta=0.05)


class TestRiskGapExperiment:
    def test_zero_noise_finite_gap_exactly_zero(self):
        pair = build_construction(0.4)
        dist = pair.clean_distribution("+")
        result = risk_gap_experiment(dist, NoiseModel.rcn(0.0),
                                     FiniteSignSpace(("a", "b", "c")),
                                     ZERO_ONE, SolverConfig(), 200, 0.05,
                                     seed=1)
        assert result.gap == 0.0
        assert result.gap01 == 0.0

    def test_construction_within_theorem_bound(self):
        pair = build_construction(0.4)
        dist = pair.clean_distribution("+")
        result = risk_gap_experiment(dist, pair.noise_model("+"),
                                     FiniteSignSpace(("a", "b", "c")),
                                     ZERO_ONE, SolverConfig(), 10 ** 4, 0.05,
                                     seed=3)
        assert result.C == 1.0
        assert result.rho == pytest.approx(0.2)
        assert result.gap <= result.bound_theorem1

    def test_linear_logistic_within_bound(self):
        dist = SyntheticDistribution(means=[[0.2, 0.0]], variances=[0.7, 0.7],
                                     weights=[1.0], radius=1.0,
                                     slope=[2.0, -1.0])
        space = LinearBallSpace(dim=2, x_star=1.0, w_star=1.0)
        result = risk_gap_experiment(dist, NoiseModel.ccn(0.15, 0.15), space,
                                     LossSpec("logistic"), SolverConfig(),
                                     1000, 0.05, seed=5, mc_draws=10 ** 5)
        assert result.C == 2.0
        assert result.gap <= result.bound_theorem1
        assert result.eval_ci > 0.0

    def test_finite_space_requires_zero_one(self):
        pair = build_construction(0.4)
        dist = pair.clean_distribution("+")
        with pytest.raises(ValueError):
            risk_gap_experiment(dist, pair.noise_model("+"),
                                FiniteSignSpace(("a", "b", "c")),
                                LossSpec("hinge"), SolverConfig(), 100, 0.05,
                                seed=0)


class TestLemma2Enumeration:
    def test_worst_sign_table_within_mean_sum_bound(self):
        report = clean_noisy_gap_enumeration_check(trials=200, seed=0)
        assert report.ok
        assert report.failures == 0
