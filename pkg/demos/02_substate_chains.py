"""Lower bounds on relative entropy: the four-link substate chain and its relatives.

    python3 demos/02_substate_chains.py
"""

import numpy as np

from entropy_gap import quantum_states as qs
from entropy_gap.inequality_suites import (
    check_bipartite_chain,
    check_monotonicity_gap,
    check_norm_sandwich,
    check_substate_chain,
)


def show(v):
    print(f"{v.name}: {'pass' if v.passed else 'FAIL'}")
    for label, value in v.links:
        print(f"    {value:>12.6g}  {label}")


rng = np.random.default_rng(7)
rho = qs.random_density_hs(3, rng)
sigma = qs.random_density_hs(3, rng)
sub = sigma.with_matrix(0.9 * sigma.matrix, qs.SUBSTATE)

# S(rho||sigma) >= -2 ln Tr sqrt(rho) sqrt(sigma) >= ||sqrt rho - sqrt sigma||_2^2 >= ||rho - sigma||_1^2 / 4
show(check_substate_chain(rho, sub))

# Orthogonal pure states: the first two links are infinite, the norms are not.
show(check_substate_chain(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))

show(check_norm_sandwich(qs.random_psd(3, rng), qs.random_psd(3, rng)))

# Data processing, with a lower bound on how much relative entropy a channel destroys.
phi = qs.random_channel(3, 2, 2, rng)
show(check_monotonicity_gap(rho, sigma, phi))

# Tracing out B: the loss is bounded by the chain for X = exp(log sigma_AB - log sigma_A + log rho_A).
show(check_bipartite_chain(qs.random_density_hs((2, 3), rng), qs.random_density_hs((2, 3), rng)))
