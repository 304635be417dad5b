"""Desk-scale simulator for filter-based estimation of molecular response.

Builds second-quantized model Hamiltonians and dipoles, maps them to qubit
operators, constructs smoothed spectral-window polynomials, and simulates
the measurement protocol that localizes spectral lines and estimates
windowed transition amplitudes, from which first- and third-order
susceptibilities are assembled.  An exact sum-over-states oracle computed
from the same eigensystems backs every simulated quantity.
"""

from .errors import (InputError, ResourceError, RespsimError,
                     StatisticalFailure)
from .operators import (DenseOperator, FermionOperator, PauliOperator,
                        build_dipole, build_hamiltonian, eta_dipole_norm,
                        jordan_wigner, lcu_one_norm, number_operator,
                        validate_two_body_symmetry)
from .models import (ModelSpec, load_fcidump_like, make_hubbard_dimer,
                     make_random_model, spatial_to_spin, spin_to_spatial,
                     write_fcidump_like)
from .spectra import (SpectralData, SusceptibilityResult, alpha1, alpha3,
                      alpha3_terms, chi1_time, diagonalize,
                      nested_window_amplitude, r_pathway_fd, r_pathways,
                      window_amplitude)
from .chebfilter import (ChebyshevFilter, ErfPolynomial, apply_filter_eigvals,
                         apply_filter_matrix, build_erf_poly, build_indicator,
                         chebyshev_grid, choose_k, degree_estimate,
                         erf_chebyshev_coefficients, jump_error_integral)
from .blockenc import (BlockEncoding, EncodingChain, amplification_rounds,
                       chain_product, encode_lcu, filtered_chain,
                       shift_encoding, success_probability)
from .estimate import (BinSearchConfig, HadamardChannel, SearchTrace,
                       WindowEstimate, binary_search_1d, binary_search_nd,
                       channel_from_chain, clear_caches, estimate_box,
                       estimate_window, imaginary_part_channel,
                       inequality_test, lcu_hadamard_distribution,
                       sample_hadamard, sort_bins)
from .assemble import (CostInputs, ResponseTable, assemble_alpha1,
                       assemble_alpha3, cost_report, qpe_baseline_report,
                       run_pipeline)

__version__ = "0.1.0"

__all__ = [
    "InputError", "ResourceError", "RespsimError", "StatisticalFailure",
    "DenseOperator", "FermionOperator", "PauliOperator", "build_dipole",
    "build_hamiltonian", "eta_dipole_norm", "jordan_wigner", "lcu_one_norm",
    "number_operator", "validate_two_body_symmetry",
    "ModelSpec", "load_fcidump_like", "make_hubbard_dimer",
    "make_random_model", "spatial_to_spin", "spin_to_spatial",
    "write_fcidump_like",
    "SpectralData", "SusceptibilityResult", "alpha1", "alpha3",
    "alpha3_terms", "chi1_time", "diagonalize", "nested_window_amplitude",
    "r_pathway_fd", "r_pathways", "window_amplitude",
    "ChebyshevFilter", "ErfPolynomial", "apply_filter_eigvals",
    "apply_filter_matrix", "build_erf_poly", "build_indicator",
    "chebyshev_grid", "choose_k", "degree_estimate",
    "erf_chebyshev_coefficients", "jump_error_integral",
    "BlockEncoding", "EncodingChain", "amplification_rounds",
    "chain_product", "encode_lcu", "filtered_chain", "shift_encoding",
    "success_probability",
    "BinSearchConfig", "HadamardChannel", "SearchTrace", "WindowEstimate",
    "binary_search_1d", "binary_search_nd", "channel_from_chain",
    "clear_caches", "estimate_box", "estimate_window",
    "imaginary_part_channel", "inequality_test",
    "lcu_hadamard_distribution", "sample_hadamard", "sort_bins",
    "CostInputs", "ResponseTable", "assemble_alpha1", "assemble_alpha3",
    "cost_report", "qpe_baseline_report", "run_pipeline",
]
