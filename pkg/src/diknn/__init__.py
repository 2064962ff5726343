"""k-nearest-neighbor estimators of entropy, mutual information and
directed information for paired time series."""

from .di import DIEstimate, di_gov, di_ksg, di_rate_linear_theory, estimate_di
from .entropy import EntropyEstimate, entropy_kl, entropy_naive
from .errors import InsufficientDataError, NumericalError, UsageError
from .experiment import ExperimentSpec, run_experiment
from .generators import GeneratorSpec, gen_henon, gen_linear, gen_quadratic, gen_sigmoid
from .knn import embed, knn_distance, lp_distance, range_count, unit_ball_volume
from .mi import MIEstimate, mi_3kl, mi_gov, mi_ksg
from .order import OrderSelection, estimate_order, knn_predict_next
from .series import SeriesPair, parse_csv, read_csv, write_csv
from .significance import SignificanceReport, shuffle_surrogate, significance_test

__version__ = "0.1.0"
