"""Acceptance suite: one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``. Sample ``i`` of every criterion is
drawn from ``default_rng(seed ^ i)``.
"""

import math
import time

import numpy as np
import pytest

from entropy_gap import cli
from entropy_gap import inequality_suites as iq
from entropy_gap import linalg_core as la
from entropy_gap import markov_analysis as ma
from entropy_gap import quantum_states as qs
from entropy_gap.batch import sample_rng
from entropy_gap.entropy_functionals import cmi, relative_entropy, renyi_relative_entropy

pytestmark = pytest.mark.slow


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    print(line)
    return line


@pytest.fixture
def emit(capsys):
    def _emit(*args):
        with capsys.disabled():
            print()
            report(*args)

    return _emit


def ghz_state():
    psi = np.zeros(8)
    psi[0] = psi[7] = 1 / math.sqrt(2)
    return qs.MultipartiteState(np.outer(psi, psi), (2, 2, 2))


# --- criteria ----------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    worst = 0.0
    for dims, n, seed in (((2, 2, 2), 1000, 101), ((2, 3, 2), 500, 102)):
        dA, dB, dC = dims
        for i in range(n):
            rng = sample_rng(seed, i)
            rho, sigma = qs.random_density_hs(dims, rng), qs.random_density_hs(dims, rng)
            worst = max(worst, iq.berta_identity(rho, sigma))
            quad = (qs.random_density_hs(d, rng) for d in (dA * dC, dB * dC, dC))
            worst = max(worst, iq.berta_identity_general(rho, *quad))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 30
    return ok, f"max |LHS - RHS| = {worst:.2e}, {elapsed:.1f} s"


def criterion_2():
    worst_gap, fails = 0.0, 0
    worst_eq = 0.0
    for i in range(1000):
        rng = sample_rng(201, i)
        d = (2, 3, 4)[i % 3]
        rho = qs.random_density_hs(d, rng)
        s = qs.random_density_hs(d, rng)
        v = iq.check_substate_chain(rho, s.with_matrix(0.9 * s.matrix, qs.SUBSTATE), 1e-8)
        fails += not v.passed
        worst_gap = min(worst_gap, v.worst_gap)
        eq = iq.check_substate_chain(rho, rho.with_matrix(rho.matrix, qs.SUBSTATE), 1e-8)
        worst_eq = max(worst_eq, max(abs(x) for x in eq.values))
    ok = fails == 0 and worst_eq <= 1e-10
    return ok, f"{fails} chain failures, worst gap {worst_gap:.2e}, equality-case max link {worst_eq:.2e}"


def criterion_3():
    fails, worst_rhs, worst_gap = 0, math.inf, math.inf
    for i in range(500):
        rng = sample_rng(301, i)
        rho, sigma = qs.random_density_hs(2, rng), qs.random_density_hs(2, rng)
        phi = qs.random_channel(2, 2, 2, rng)
        v = iq.check_monotonicity_gap(rho, sigma, phi, 1e-8)
        gap, rhs = v.values
        worst_rhs = min(worst_rhs, gap - rhs)
        worst_gap = min(worst_gap, gap)
        fails += not (gap >= rhs - 1e-8 and gap >= -1e-8)
    return fails == 0, f"min(gap - RHS) = {worst_rhs:.2e}, min gap = {worst_gap:.2e}"


def criterion_4():
    fails, min_cmi = 0, math.inf
    for i in range(1000):
        rng = sample_rng(401, i)
        rho, sigma = qs.random_density_hs((2, 2, 2), rng), qs.random_density_hs((2, 2, 2), rng)
        fails += not iq.check_super_ssa(rho, sigma, 1e-8).passed
        min_cmi = min(min_cmi, cmi(rho))
    ghz_err = abs(cmi(ghz_state()) - math.log(2))
    ok = fails == 0 and min_cmi >= -1e-9 and ghz_err <= 1e-9
    return ok, f"{fails} super-SSA failures, min cmi {min_cmi:.2e}, |cmi(GHZ) - ln 2| = {ghz_err:.1e}"


def criterion_5():
    worst = {"trace": 0.0, "dist": 0.0, "petz": 0.0, "log": 0.0}
    markov_fails = 0
    for i in range(200):
        rng = sample_rng(501, i)
        rho = qs.random_markov_classical_c((2, 2, 2 + i % 2), rng)
        r = ma.check_markov_trace_theorem(rho, tol=1e-9)
        worst["trace"] = max(worst["trace"], abs(r.trace_M - 1))
        worst["dist"] = max(worst["dist"], r.markov_distance)
        worst["petz"] = max(worst["petz"], r.reconstruction_residuals[ma.C_CONDITIONED])
        worst["log"] = max(worst["log"], r.log_residual)
        markov_fails += r.verdict != ma.MARKOV
    limits = {"trace": 1e-9, "dist": 1e-7, "petz": 1e-7, "log": 1e-6}
    ok_markov = markov_fails == 0 and all(worst[k] <= limits[k] for k in limits)

    max_trace, non_markov_fails = 0.0, 0
    for i in range(1000):
        r = ma.check_markov_trace_theorem(qs.random_density_hs((2, 2, 2), sample_rng(502, i)), tol=1e-9)
        max_trace = max(max_trace, r.trace_M)
        non_markov_fails += not (r.trace_M <= 1 + 1e-9 and r.verdict == ma.NOT_MARKOV)
    ok = ok_markov and non_markov_fails == 0
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return ok, f"Markov side: {detail}; random side: max Tr M {max_trace:.6f}, {non_markov_fails} failures"


def criterion_6():
    chain_fails = cert_fails = 0
    for i in range(1000):
        v = iq.check_two_marginal_chain(qs.random_density_hs((2, 2, 2), sample_rng(601, i)), 1e-8, 1e-10)
        m = v.metadata
        chain_fails += any(g < -1e-8 for g in v.gaps)
        cert_fails += not (
            m["trace_X"] <= m["trace_rho_AC_rho_BC"] + 1e-10
            and abs(m["trace_rho_AC_rho_BC"] - m["purity_C"]) <= 1e-10
            and m["purity_C"] <= 1 + 1e-10
        )
    gt_fails, worst_gt = 0, math.inf
    for i in range(1000):
        rng = sample_rng(602, i)
        v = iq.check_golden_thompson(qs.random_hermitian(4, rng), qs.random_hermitian(4, rng), 1e-9)
        gt_fails += not v.passed
        worst_gt = min(worst_gt, v.gaps[0])
    worst_eq = 0.0
    for i in range(100):
        rng = sample_rng(603, i)
        U = qs.random_unitary(4, rng)
        A = U @ np.diag(rng.normal(size=4)) @ U.conj().T
        B = U @ np.diag(rng.normal(size=4)) @ U.conj().T
        worst_eq = max(worst_eq, abs(iq.check_golden_thompson(la.hermitize(A), la.hermitize(B)).gaps[0]))
    ok = chain_fails == cert_fails == gt_fails == 0 and worst_eq <= 1e-10
    return ok, (
        f"{chain_fails} chain / {cert_fails} certificate failures; "
        f"GT min gap {worst_gt:.2e}, commuting max |gap| {worst_eq:.1e}"
    )


def _overlap_eigen(rho, sigma):
    # Tr sqrt(rho) sqrt(sigma) = sum_ij sqrt(l_i m_j) |<u_i|v_j>|^2
    l, U = np.linalg.eigh(rho)
    m, V = np.linalg.eigh(sigma)
    W = np.abs(U.conj().T @ V) ** 2
    return float(np.sqrt(np.clip(l, 0, None)) @ W @ np.sqrt(np.clip(m, 0, None)))


def criterion_7():
    worst_cmi = 0.0
    for i in range(1000):
        rho = qs.random_density_hs((2, 2, 2), sample_rng(701, i))
        M = ma.markov_operator(rho)
        worst_cmi = max(worst_cmi, abs(cmi(rho) - relative_entropy(rho, M)))
    worst_renyi = 0.0
    for i in range(500):
        rng = sample_rng(702, i)
        d = int(rng.integers(2, 6))
        rho, sigma = qs.random_density_hs(d, rng), qs.random_density_hs(d, rng)
        target = -2 * math.log(_overlap_eigen(rho.matrix, sigma.matrix))
        worst_renyi = max(worst_renyi, abs(renyi_relative_entropy(rho, sigma, 0.5) - target))
    ok = worst_cmi <= 1e-9 and worst_renyi <= 1e-10
    return ok, f"max CMI disagreement {worst_cmi:.1e}, max Renyi disagreement {worst_renyi:.1e}"


def criterion_8():
    mismatched = []
    for suite in cli.SUITES:
        runs = [
            cli.to_json(cli.cmd_verify(cli.RunConfig(suite=suite, n_samples=8, seed=801, workers=w))[0])
            for w in (1, 1, 4)
        ]
        if len(set(runs)) != 1:
            mismatched.append(suite)
        csvs = {
            cli.to_csv(cli.cmd_verify(cli.RunConfig(suite=suite, n_samples=8, seed=801, workers=w))[0])
            for w in (1, 3)
        }
        if len(csvs) != 1:
            mismatched.append(suite + " (csv)")
    scans = {cli.to_json(cli.cmd_scan((2, 2, 2), 50, 42, workers=w)) for w in (1, 4)}
    if len(scans) != 1:
        mismatched.append("scan command")
    return not mismatched, f"{len(cli.SUITES)} suites checked, mismatches: {mismatched or 'none'}"


CRITERIA = [
    (1, "Berta identity, both forms", criterion_1),
    (2, "substate chain and equality case", criterion_2),
    (3, "monotonicity gap under qubit channels", criterion_3),
    (4, "super-SSA, SSA and GHZ value", criterion_4),
    (5, "Markov trace criterion pipeline", criterion_5),
    (6, "two-marginal chain, certificate, Golden-Thompson", criterion_6),
    (7, "cross-computation consistency", criterion_7),
    (8, "byte-identical reports across worker counts", criterion_8),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, emit):
    ok, detail = fn()
    emit(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    t0 = time.perf_counter()
    results = [fn() for _, _, fn in CRITERIA]
    for (number, title, _), (ok, detail) in zip(CRITERIA, results):
        report(number, title, ok, detail)
    print(f"total {time.perf_counter() - t0:.1f} s")
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
