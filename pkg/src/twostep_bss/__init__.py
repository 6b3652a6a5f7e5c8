from ._errors import (BssError, ParseError, ShapeError, TooShortError,
                      UnsupportedFormatError, ArityError, DegenerateInputError,
                      DegenerateEntropyError, EvaluationError, TrivialKernelError,
                      NoValidKernelError, TrivialLagError, LagRangeError,
                      MixingError, ConfigError)
from ._signal import (TimeSeriesSet, DerivativeSet, derivative, integral,
                      load_csv, save_csv, load_wav, save_wav, load_signal,
                      save_signal)
from ._whitening import (WhiteningResult, whiten, apply_rotation,
                         rotation_matrix, sample_covariance)
from ._separation import SeparationResult, rotation_angle
from ._objectives import (Orientation, ObjectiveTag, ObjectiveKind,
                          ObjectiveValue, eval_objective, marginal_entropy,
                          o3_tilde_raw, contrast_reference, default_bins)
from ._search import (AngleGrid, ObjectiveCurve, brute_force_search,
                      separate_by_search, angle_error, normalize_curve)
from ._spectral import (SpectrumSet, KernelKind, KernelSpec, SpectralCovariance,
                        HeuristicScan, dft, spectral_covariance, f1_statistic,
                        f1_curve, kernel_shift_grid, ftpca_fixed, derivative_pca,
                        heuristic_search, source_statistics)
from ._baselines import LagSet, lagged_covariance, amuse, sobi, joint_offdiag
from ._harness import (SourceKind, SourceSpec, Method, MethodSettings,
                       TrialRecord, BenchConfig, BenchRow, BenchTable,
                       generate_sources, standardize, random_mixing, add_noise,
                       true_rotation, run_method, run_trial, parse_config,
                       load_config, run_bench, write_trials_csv,
                       write_aggregate_csv)
from ._timing import Stopwatch, RunningStats, format_duration
try:
    from ._trio import run_bench_async, run_bench_parallel
except ImportError:
    pass
from ._version import __version__

def _metadata_fix():
    # don't do this for Sphinx case because it breaks "bysource" member ordering
    import sys  # pylint: disable=import-outside-toplevel
    if 'sphinx' in sys.modules:
        return

    for name, value in globals().items():
        if not name.startswith('_') and hasattr(value, '__module__'):
            try:
                value.__module__ = __name__
            except (AttributeError, TypeError):
                pass

_metadata_fix()
