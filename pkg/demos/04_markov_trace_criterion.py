"""When does Tr exp(log rho_AC + log rho_BC - log rho_C) equal one?

Markov states satisfy it, generic states fall short, and commuting states
satisfy it too even when rho itself carries conditional information.

    python3 demos/04_markov_trace_criterion.py
"""

import numpy as np

from entropy_gap import quantum_states as qs
from entropy_gap.markov_analysis import check_markov_trace_theorem, scan_trace_statistic


def summarize(title, rho):
    r = check_markov_trace_theorem(rho)
    res = ", ".join(f"{k} {v:.1e}" for k, v in r.reconstruction_residuals.items())
    print(f"{title}")
    print(f"    Tr M = {r.trace_M:.12f}  verdict {r.verdict}")
    print(f"    cmi(rho) = {r.cmi_rho:.3e}  cmi(M) = {r.cmi_M:.3e}  ||M - rho||_1 = {r.markov_distance:.3e}")
    print(f"    reconstruction residuals: {res}")


rng = np.random.default_rng(11)
summarize("classical-C Markov state", qs.random_markov_classical_c((2, 2, 3), rng))
summarize("Hilbert-Schmidt random state", qs.random_density_hs((2, 2, 2), rng))
summarize("commuting state (Tr M = 1 but rho is not Markov)", qs.random_diagonal_state((2, 2, 2), rng))

s = scan_trace_statistic((2, 2, 2), 500, seed=42, ensemble="markov-classical-c")
print(f"\nscan markov-classical-c: |Tr M - 1| <= {max(abs(s.min - 1), abs(s.max - 1)):.1e} on {s.n_samples} samples")

s = scan_trace_statistic((2, 2, 2), 500, seed=42)
print(f"scan hs: min {s.min:.6f}  mean {s.mean:.6f}  max {s.max:.6f}")
peak = max(c for _, c in s.histogram)
for edge, count in s.histogram:
    print(f"    {edge:.6f} {'#' * int(40 * count / peak)}")
