"""ilnlab: a verification lab for binary classification under instance- and
label-dependent label noise.

Submodules: distributions, losses, hypotheses, risk, bounds, minimax,
harness, verify, cli.
"""

from . import bounds, distributions, harness, hypotheses, losses, minimax, \
    risk, verify
from .bounds import BoundReport, bound, g_delta
from .distributions import (Dataset, FiniteDistribution, NoiseModel,
                            SyntheticDistribution, check_anchor, check_margin,
                            check_noise_bound, noisy_posterior, sample_dataset)
from .hypotheses import (FiniteSignSpace, LinearBallSpace, RKHSBallSpace,
                         SolverConfig, erm_convex, erm_zero_one_finite,
                         predict)
from .losses import LossSpec, gap_constant, loss_eval
from .minimax import (ConstructionPair, bayes_risk01, build_construction,
                      estimator_excess_sum, verify_indistinguishable)
from .risk import (RiskGapResult, empirical_risk, exact_risk, mc_risk,
                   risk_gap_experiment)

__version__ = "0.1.0"
