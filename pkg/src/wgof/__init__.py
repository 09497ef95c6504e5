"""Goodness-of-fit tests based on semi-discrete Wasserstein distances."""
from .distributions import (Gaussian, GaussianMixture, EllipticalT, Margin, MetaCopula, Product, SkewT,
                            TargetDistribution, Univariate, from_config, make_boomerang, max_stable_gumbel)
from .copulas import CopulaSpec
from .errors import (ConfigurationError, CvfIOError, DegenerateSampleError, DomainError, NumericError,
                     UnsupportedOperationError, WgofError)
from .gof import (GofTestResult, test_group_family, test_hybrid, test_parametric_bootstrap, test_simple,
                  normality_test, elliptical_test)
from .measures import DiscreteMeasure
from .transport import SolverConfig, estimate_wpp, sag_solve

__version__ = "0.1.0"
