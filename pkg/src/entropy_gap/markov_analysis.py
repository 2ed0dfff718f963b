"""Markov operator ``M = exp(log rho_AC + log rho_BC - log rho_C)`` and friends.

``M`` is always a substate. When its trace equals one it is a Markov state
and coincides with its Petz reconstruction. The functions here compute
``M``, its trace, the log-sum residual that characterizes vanishing
conditional mutual information, three Petz-type reconstructions, and a
Monte-Carlo scanner for the set ``{rho : Tr M = 1}``.

Every logarithm and inverse root requires a full-rank argument after the
support cutoff; otherwise :class:`~entropy_gap.errors.SupportDeficient` is
raised.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import linalg_core as la
from .batch import ordered_map, sample_rng
from .entropy_functionals import cmi
from .errors import DimensionMismatch, SupportDeficient
from .quantum_states import (
    MultipartiteState,
    random_density_hs,
    random_diagonal_state,
    random_markov_classical_c,
    state_to_dict,
)

AC, BC, C, AB, B, ABC = (0, 2), (1, 2), (2,), (0, 1), (1,), (0, 1, 2)

MARKOV = "Markov"
NOT_MARKOV = "NotMarkov"
INDETERMINATE = "Indeterminate"

C_CONDITIONED = "c-conditioned"
PAPER_LITERAL_I = "paper-literal-i"
PAPER_LITERAL_II = "paper-literal-ii"
RECONSTRUCTION_FORMS = (C_CONDITIONED, PAPER_LITERAL_I, PAPER_LITERAL_II)


def _tripartite(rho) -> MultipartiteState:
    if not isinstance(rho, MultipartiteState):
        raise TypeError("expected a MultipartiteState with three subsystems")
    if rho.n_subsystems != 3:
        raise DimensionMismatch(f"expected three subsystems, got dims {rho.dims}")
    return rho


def marginal(rho: MultipartiteState, keep: Sequence[int]) -> np.ndarray:
    if tuple(keep) == ABC:
        return rho.matrix
    return la.partial_trace(rho.matrix, rho.dims, keep)


def lifted_log(M, dims, occupied, what: str) -> np.ndarray:
    """``log M`` (full rank required) embedded into the full space."""
    la.require_full_rank(M, what)
    return la.lift_to_full(la.logm_psd(M), dims, occupied)


def lifted_power(M, dims, occupied, power: float, what: str) -> np.ndarray:
    if power < 0:
        la.require_full_rank(M, what)
    return la.lift_to_full(la.matrix_function_psd(M, lambda x: x**power), dims, occupied)


def exp_log_sum(dims, terms) -> np.ndarray:
    """``exp(sum_k c_k log X_k)`` with each ``X_k`` lifted from its subsystems.

    ``terms`` is an iterable of ``(coefficient, matrix, occupied, name)``.
    """
    D = int(np.prod(dims))
    H = np.zeros((D, D), dtype=complex)
    for coef, M, occ, name in terms:
        H += coef * lifted_log(M, dims, occ, name)
    return la.expm_hermitian(H)


def markov_exponent_terms(sigma_ac, sigma_bc, sigma_c):
    return [
        (1.0, sigma_ac, AC, "AC marginal"),
        (1.0, sigma_bc, BC, "BC marginal"),
        (-1.0, sigma_c, C, "C marginal"),
    ]


def markov_operator(rho) -> np.ndarray:
    """``exp(log rho_AC + log rho_BC - log rho_C)`` on the full space."""
    rho = _tripartite(rho)
    return exp_log_sum(
        rho.dims,
        markov_exponent_terms(marginal(rho, AC), marginal(rho, BC), marginal(rho, C)),
    )


def trace_of_markov_operator(rho) -> float:
    return float(np.trace(markov_operator(rho)).real)


def ruskai_log_residual(rho) -> float:
    """``||log rho_ABC + log rho_C - log rho_AC - log rho_BC||_2``."""
    rho = _tripartite(rho)
    d = rho.dims
    R = (
        lifted_log(rho.matrix, d, ABC, "ABC state")
        + lifted_log(marginal(rho, C), d, C, "C marginal")
        - lifted_log(marginal(rho, AC), d, AC, "AC marginal")
        - lifted_log(marginal(rho, BC), d, BC, "BC marginal")
    )
    return la.schatten_norm(R, 2)


def petz_reconstruction(rho, form: str = C_CONDITIONED) -> np.ndarray:
    """Petz-type sandwich ``X^1/2 Y^-1/2 Z Y^-1/2 X^1/2`` built from marginals.

    ``form`` selects the marginals ``(X, Y, Z)``:

    * ``"c-conditioned"``: ``(rho_AC, rho_C, rho_BC)``, exact on Markov
      states ``A - C - B``;
    * ``"paper-literal-i"``: ``(rho_AB, rho_B, rho_BC)``;
    * ``"paper-literal-ii"``: ``(rho_BC, rho_B, rho_AB)``.
    """
    rho = _tripartite(rho)
    plan = {
        C_CONDITIONED: (AC, C, BC),
        PAPER_LITERAL_I: (AB, B, BC),
        PAPER_LITERAL_II: (BC, B, AB),
    }
    try:
        outer, middle, inner = plan[form]
    except KeyError:
        raise ValueError(f"unknown reconstruction form {form!r}") from None
    d = rho.dims
    X = lifted_power(marginal(rho, outer), d, outer, 0.5, "outer marginal")
    Y = lifted_power(marginal(rho, middle), d, middle, -0.5, "conditioning marginal")
    Z = la.lift_to_full(marginal(rho, inner), d, inner)
    K = X @ Y
    return la.hermitize(K @ Z @ K.conj().T)


@dataclass
class MarkovReport:
    trace_M: float
    cmi_rho: float
    cmi_M: float
    markov_distance: float  # ||M - rho||_1
    log_residual: float
    reconstruction_residuals: dict[str, float | None]
    verdict: str
    theorem_holds: bool
    tol: float
    residual_tol: float
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def check_markov_trace_theorem(
    rho, tol: float = 1e-9, residual_tol: float = 1e-7
) -> MarkovReport:
    """Evaluate the trace criterion ``Tr M = 1`` and everything it implies.

    ``|Tr M - 1| <= tol`` gives verdict ``Markov``: ``M`` itself is then a
    Markov state. The implied statements (``M`` equals the C-conditioned
    reconstruction, ``M`` has zero conditional mutual information) are
    checked at ``residual_tol`` and ``theorem_holds`` records the outcome.

    The verdict is about ``M``, not ``rho``: every commuting ``rho`` has
    ``Tr M = 1`` while its own CMI may be positive. ``cmi_rho``,
    ``markov_distance`` and ``log_residual`` describe ``rho`` and are
    reported only. The two literal reconstruction forms are likewise never
    gating. A trace within ``(tol, 10 tol]`` of one gives ``Indeterminate``.
    """
    rho = _tripartite(rho)
    M = markov_operator(rho)
    tr = float(np.trace(M).real)
    M_state = MultipartiteState(la.hermitize(M / tr), rho.dims, rho.labels)
    residuals: dict[str, float | None] = {}
    notes = []
    for form in RECONSTRUCTION_FORMS:
        try:
            residuals[form] = la.schatten_norm(M - petz_reconstruction(rho, form), 1)
        except SupportDeficient as exc:
            residuals[form] = None
            notes.append(f"{form}: {exc}")
    try:
        log_res = ruskai_log_residual(rho)
    except SupportDeficient as exc:
        log_res = float("nan")
        notes.append(f"log residual: {exc}")

    report = MarkovReport(
        trace_M=tr,
        cmi_rho=cmi(rho),
        cmi_M=cmi(M_state),
        markov_distance=la.schatten_norm(M - rho.matrix, 1),
        log_residual=log_res,
        reconstruction_residuals=residuals,
        verdict=NOT_MARKOV,
        theorem_holds=True,
        tol=tol,
        residual_tol=residual_tol,
        notes=notes,
    )
    dev = abs(tr - 1.0)
    if dev <= tol:
        report.verdict = MARKOV
        checks = {
            "c-conditioned reconstruction": residuals[C_CONDITIONED] <= residual_tol,
            "normalized M has zero CMI": report.cmi_M <= residual_tol,
        }
        failed = [k for k, ok in checks.items() if not ok]
        report.theorem_holds = not failed
        notes.extend(f"failed: {k}" for k in failed)
    elif dev <= 10 * tol:
        report.verdict = INDETERMINATE
    if tr > 1.0 + tol:
        report.theorem_holds = False
        notes.append("Tr M exceeds 1: substate property violated")
    return report


# --- scanner ------------------------------------------------------------------

ENSEMBLES = ("hs", "markov-classical-c", "diagonal")


def draw_state(dims, rng, ensemble: str = "hs") -> MultipartiteState:
    if ensemble == "hs":
        return random_density_hs(dims, rng)
    if ensemble == "markov-classical-c":
        return random_markov_classical_c(dims, rng)
    if ensemble == "diagonal":
        return random_diagonal_state(dims, rng)
    raise ValueError(f"unknown ensemble {ensemble!r}")


@dataclass
class ScanSummary:
    dims: list[int]
    n_samples: int
    seed: int
    ensemble: str
    min: float
    max: float
    mean: float
    histogram: list[list[float]]  # [[left edge, count], ...]
    top_states: list[dict]
    top_traces: list[float]

    def to_dict(self) -> dict:
        return asdict(self)


def scan_trace_statistic(
    dims,
    n_samples: int,
    seed: int,
    ensemble: str = "hs",
    bins: int = 10,
    top_k: int = 3,
    workers: int = 1,
) -> ScanSummary:
    """Sample states, compute ``Tr M`` for each and summarize.

    Sample ``i`` is drawn from ``seed XOR i``, so the summary does not depend
    on ``workers``. ``top_states`` holds the ``top_k`` samples closest to
    ``Tr M = 1`` in the state-file schema.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    dims = tuple(int(x) for x in dims)

    def one(i):
        rho = draw_state(dims, sample_rng(seed, i), ensemble)
        return rho, trace_of_markov_operator(rho)

    results = ordered_map(one, range(n_samples), workers)
    traces = np.array([t for _, t in results])
    counts, edges = np.histogram(traces, bins=bins)
    order = np.argsort(np.abs(traces - 1.0), kind="stable")[:top_k]
    return ScanSummary(
        dims=list(dims),
        n_samples=n_samples,
        seed=int(seed),
        ensemble=ensemble,
        min=float(traces.min()),
        max=float(traces.max()),
        mean=float(traces.mean()),
        histogram=[[float(e), int(c)] for e, c in zip(edges[:-1], counts)],
        top_states=[state_to_dict(results[i][0]) for i in order],
        top_traces=[float(traces[i]) for i in order],
    )
