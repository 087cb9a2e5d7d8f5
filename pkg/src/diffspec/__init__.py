"""Autocorrelation and diffraction toolkit for one-dimensional aperiodic order.

Builds substitution fixed-point windows and quasiperiodic point sets,
pushes them through sliding-block factors, and estimates their
diffraction: Bragg peak detection over candidate frequencies, Fejer
densities on the circle, exact extinction tests for the silver-mean
chain, and the property suites tying the routes together.
"""

from .correlation import (
    CorrelationSeq,
    PointCorrelation,
    autocorr_pointset,
    autocorr_symbolic,
    autocorr_via_spectral_inner,
    regularised_autocorr,
    tent_autoconv,
)
from .delone import (
    BumpFunction,
    Cluster,
    ClusterFrequency,
    PointSet1D,
    cluster_frequency,
    enumerate_k_clusters,
    locator_set,
    smooth_comb,
    tent_ft,
)
from .errors import DiffspecError
from .factors import (
    BlockMap,
    EquivarianceReport,
    apply_block_map,
    compose,
    identity_map,
    indicator_block_map,
    verify_factor_equivariance,
    xor_map,
)
from .modelset import (
    FourierModuleElement,
    InflationReport,
    QuadraticInt,
    inflate_factor,
    intensity_at,
    is_extinct,
    module_box,
    silver_mean_chain,
    verify_inflation_identity,
    weighted_silver_comb,
)
from .spectral import (
    Atom,
    MeasureOnGrid,
    SpectralEstimate,
    UniformGrid,
    detect_atoms,
    fejer_density,
    intensity_estimate,
    intensity_ratios,
    kronecker_candidates,
    maximal_measure_mix,
    nu_family,
    regularised_diffraction,
    sobol_candidates,
    spectral_distribution,
)
from .subshift import (
    SubstitutionRule,
    SymbolicWindow,
    build_frequency_table,
    dictionary,
    fixed_point_window,
    letter_frequencies_pf,
    parse_rule,
    rule_by_name,
    word_frequency_empirical,
)
from .verify import SUITE_NAMES, SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "BlockMap",
    "BumpFunction",
    "Cluster",
    "ClusterFrequency",
    "CorrelationSeq",
    "DiffspecError",
    "EquivarianceReport",
    "FourierModuleElement",
    "InflationReport",
    "MeasureOnGrid",
    "PointCorrelation",
    "PointSet1D",
    "QuadraticInt",
    "SpectralEstimate",
    "SubstitutionRule",
    "SuiteReport",
    "SUITE_NAMES",
    "SymbolicWindow",
    "UniformGrid",
    "apply_block_map",
    "autocorr_pointset",
    "autocorr_symbolic",
    "autocorr_via_spectral_inner",
    "build_frequency_table",
    "cluster_frequency",
    "compose",
    "detect_atoms",
    "dictionary",
    "enumerate_k_clusters",
    "fejer_density",
    "fixed_point_window",
    "identity_map",
    "indicator_block_map",
    "inflate_factor",
    "intensity_at",
    "intensity_estimate",
    "intensity_ratios",
    "is_extinct",
    "kronecker_candidates",
    "letter_frequencies_pf",
    "locator_set",
    "maximal_measure_mix",
    "module_box",
    "nu_family",
    "parse_rule",
    "regularised_autocorr",
    "regularised_diffraction",
    "rule_by_name",
    "run_suite",
    "silver_mean_chain",
    "smooth_comb",
    "sobol_candidates",
    "spectral_distribution",
    "tent_autoconv",
    "tent_ft",
    "verify_factor_equivariance",
    "verify_inflation_identity",
    "weighted_silver_comb",
    "word_frequency_empirical",
]
