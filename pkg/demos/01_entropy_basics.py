"""Entropies of small states, and the two ways to compute a conditional mutual information.

    python3 demos/01_entropy_basics.py
"""

import math

import numpy as np

from entropy_gap import MultipartiteState, cmi, markov_operator, random_density_hs
from entropy_gap.entropy_functionals import relative_entropy, renyi_relative_entropy, von_neumann_entropy

# A biased qubit: S = -(3/4) ln(3/4) - (1/4) ln(1/4).
rho = MultipartiteState(np.diag([0.75, 0.25]).astype(complex), (2,))
print(f"S(diag(3/4, 1/4))          = {von_neumann_entropy(rho):.6f}")

# Relative entropy reduces to the KL divergence for commuting states
# and is infinite when the supports do not nest.
pure0 = np.diag([1.0, 0.0])
print(f"S(|0><0| || I/2)           = {relative_entropy(pure0, np.eye(2) / 2):.6f}  (ln 2 = {math.log(2):.6f})")
print(f"S(|0><0| || |1><1|)        = {relative_entropy(pure0, np.diag([0.0, 1.0]))}")
print(f"D_1/2(|0><0| || I/2)       = {renyi_relative_entropy(pure0, np.eye(2) / 2, 0.5):.6f}")

# GHZ: every two-party marginal is classically correlated, I(A:B|C) = ln 2.
psi = np.zeros(8)
psi[[0, 7]] = 1 / math.sqrt(2)
ghz = MultipartiteState(np.outer(psi, psi), (2, 2, 2))
print(f"I(A:B|C) for GHZ           = {cmi(ghz):.6f}")

# For a full-rank state the CMI is also a relative entropy to the Markov operator.
rho3 = random_density_hs((2, 2, 2), seed=1)
M = markov_operator(rho3)
print(f"random state: entropy form = {cmi(rho3):.12f}")
print(f"              S(rho || M)  = {relative_entropy(rho3, M):.12f}")
print(f"              Tr M         = {np.trace(M).real:.12f}")
