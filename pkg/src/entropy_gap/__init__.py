"""Entropy inequalities and the Markov-operator trace criterion, checked numerically."""

from .errors import *  # noqa: F401,F403
from .linalg_core import (
    eig_hermitian,
    expm_hermitian,
    lift_to_full,
    logm_psd,
    matrix_function_psd,
    partial_trace,
    schatten_norm,
    sqrtm_psd,
    support_contained,
    tensor,
)
from .quantum_states import (
    MultipartiteState,
    QuantumChannel,
    apply_adjoint,
    apply_channel,
    load_state,
    markov_state_classical_c,
    random_channel,
    random_density_hs,
    random_markov_classical_c,
    random_pure,
    save_state,
    validate,
)
from .entropy_functionals import (
    cmi,
    relative_entropy,
    renyi_relative_entropy,
    root_overlap,
    von_neumann_entropy,
)
from .markov_analysis import (
    MarkovReport,
    check_markov_trace_theorem,
    markov_operator,
    petz_reconstruction,
    ruskai_log_residual,
    scan_trace_statistic,
    trace_of_markov_operator,
)
from .inequality_suites import (
    ChainVerdict,
    berta_identity,
    berta_identity_general,
    check_bipartite_chain,
    check_cmi_chain,
    check_golden_thompson,
    check_marginal_monotonicity,
    check_monotonicity_gap,
    check_norm_sandwich,
    check_sigma_substate_chain,
    check_substate_chain,
    check_super_ssa,
    check_two_marginal_chain,
)

__version__ = "0.1.0"
