"""The exact identity behind strong subadditivity, and the inequalities that follow from it.

    python3 demos/03_super_ssa_and_berta.py
"""

import numpy as np

from entropy_gap import quantum_states as qs
from entropy_gap.inequality_suites import (
    berta_verdict,
    check_golden_thompson,
    check_marginal_monotonicity,
    check_super_ssa,
    check_two_marginal_chain,
)

rng = np.random.default_rng(3)
rho = qs.random_density_hs((2, 2, 2), rng)
sigma = qs.random_density_hs((2, 2, 2), rng)

v = berta_verdict(rho, sigma)
lhs, rhs = v.values
print("identity  S(rho || exp(log s_AC + log s_BC - log s_C))")
print("          = I(A:B|C) + S_AC + S_BC - S_C")
print(f"          {lhs:.15f}\n          {rhs:.15f}   residual {abs(lhs - rhs):.1e}")

v = check_super_ssa(rho, sigma)
print(f"\nsuper-SSA: {v.values[0]:.6f} >= {v.values[1]:.6f} >= 0   ({'pass' if v.passed else 'FAIL'})")
print(f"           I(A:B|C) = {v.metadata['cmi']:.6f}")

v = check_marginal_monotonicity(rho, sigma)
print(f"(S_AC + S_BC)/2 = {v.values[0]:.6f} >= S_C = {v.values[1]:.6f}")

# Equality: with rho = sigma Markov, the left side vanishes and so does every term on the right.
markov = qs.random_markov_classical_c((2, 2, 2), rng)
v = check_super_ssa(markov, markov)
print(f"\nMarkov rho = sigma: S(rho||X) = {v.values[0]:.2e}, equality branch checked: {v.metadata['equality_branch']}")

v = check_two_marginal_chain(rho)
m = v.metadata
print("\ntwo-marginal chain:", ", ".join(f"{x:.4f}" for x in v.values))
print(f"certificate: Tr X = {m['trace_X']:.4f} <= Tr rho_AC rho_BC = {m['trace_rho_AC_rho_BC']:.4f}"
      f" = Tr rho_C^2 = {m['purity_C']:.4f} <= 1")

x, y = 0.8, 1.3
v = check_golden_thompson(x * qs.PAULI_Z, y * qs.PAULI_X)
print(f"\nGolden-Thompson, A = {x} Z, B = {y} X:")
print(f"    Tr e^A e^B   = {v.values[0]:.6f}  (2 cosh x cosh y = {2 * np.cosh(x) * np.cosh(y):.6f})")
print(f"    Tr e^(A+B)   = {v.values[1]:.6f}  (2 cosh |(x, y)| = {2 * np.cosh(np.hypot(x, y)):.6f})")
