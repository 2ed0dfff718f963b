"""Numerical verifiers for the entropy inequality chains and identities.

Each ``check_*`` function evaluates every link of one chain
``L_0 >= L_1 >= ... >= L_k`` and returns a :class:`ChainVerdict` with the
link values, the consecutive gaps ``L_i - L_{i+1}`` and a pass flag. Links
are always stored in descending order; chains stated in ascending order are
reversed. Identity checks return the absolute residual.

Tolerances are absolute and grow linearly with the total dimension ``d``
once ``d > 8`` (see :func:`scaled_tol`).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linalg_core as la
from .entropy_functionals import cmi, neg2_log, relative_entropy, root_overlap, von_neumann_entropy
from .errors import DimensionMismatch, InvalidState, NotHermitian
from .markov_analysis import (
    AC,
    BC,
    C,
    exp_log_sum,
    marginal,
    markov_exponent_terms,
)
from .quantum_states import STATE, SUBSTATE, MultipartiteState, as_state, validate

TOL_IDENTITY = 1e-8
TOL_INEQUALITY = 1e-8


def scaled_tol(tol: float, d: int) -> float:
    """``tol`` multiplied by ``d / 8`` for total dimension ``d > 8``."""
    return tol * max(1.0, d / 8.0)


@dataclass
class ChainVerdict:
    name: str
    links: list[tuple[str, float]]
    gaps: list[float]
    passed: bool
    tol: float
    kind: str = "chain"  # or "identity"
    metadata: dict = field(default_factory=dict)
    reasons: list[str] = field(default_factory=list)

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.links]

    @property
    def worst_gap(self) -> float:
        """Most negative gap (chains) or largest absolute gap (identities)."""
        if not self.gaps:
            return 0.0
        if self.kind == "identity":
            return max(abs(g) for g in self.gaps)
        return min(self.gaps)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["links"] = [[label, value] for label, value in self.links]
        return d


def _gap(upper: float, lower: float) -> float:
    if math.isinf(upper):
        return 0.0 if math.isinf(lower) else math.inf
    if math.isinf(lower):
        return -math.inf
    return upper - lower


def make_verdict(
    name: str,
    links,
    tol: float,
    kind: str = "chain",
    metadata: dict | None = None,
    extra_checks: dict[str, bool] | None = None,
) -> ChainVerdict:
    """Build a verdict from descending ``(label, value)`` links.

    A chain passes iff every gap is ``>= -tol``; ``+inf`` links are allowed as
    a prefix only. An identity passes iff every gap is within ``tol`` in
    absolute value. ``extra_checks`` are side conditions that must all hold.
    """
    links = [(label, float(v)) for label, v in links]
    gaps = [_gap(a, b) for (_, a), (_, b) in zip(links, links[1:])]
    reasons = []
    for i, g in enumerate(gaps):
        bad = abs(g) > tol if kind == "identity" else g < -tol
        if bad:
            reasons.append(f"{links[i][0]} vs {links[i + 1][0]}: gap {g:.3e}")
    for label, ok in (extra_checks or {}).items():
        if not ok:
            reasons.append(label)
    return ChainVerdict(
        name=name,
        links=links,
        gaps=gaps,
        passed=not reasons,
        tol=tol,
        kind=kind,
        metadata=dict(metadata or {}),
        reasons=reasons,
    )


def _state(x, kind=STATE, what="state", dims=None) -> MultipartiteState:
    s = as_state(x, dims=dims, kind=kind)
    if s.kind != kind:
        s = s.with_matrix(s.matrix, kind)
    diag = validate(s, 1e-8)
    if not diag.passed:
        raise InvalidState(f"{what}: {', '.join(diag.reasons)}")
    return s


def _tripartite(x, what="state") -> MultipartiteState:
    s = _state(x, what=what)
    if s.n_subsystems != 3:
        raise DimensionMismatch(f"{what} must have three subsystems, got dims {s.dims}")
    return s


def substate_links(rho: np.ndarray, X: np.ndarray, first: tuple[str, float]):
    """The four links ``first >= -2 ln Tr sqrt(rho) sqrt(X) >= ||.||_2^2 >= ||.||_1^2 / 4``."""
    sr, sx = la.sqrtm_psd(rho), la.sqrtm_psd(X)
    return [
        first,
        ("-2 ln Tr sqrt(rho) sqrt(X)", neg2_log(root_overlap(rho, X))),
        ("||sqrt(rho) - sqrt(X)||_2^2", la.schatten_norm(sr - sx, 2) ** 2),
        ("||rho - X||_1^2 / 4", 0.25 * la.schatten_norm(rho - X, 1) ** 2),
    ]


def check_substate_chain(rho, sigma, tol: float = TOL_INEQUALITY) -> ChainVerdict:
    """``S(rho||sigma) >= -2 ln Tr sqrt(rho) sqrt(sigma) >= ||sqrt(rho) - sqrt(sigma)||_2^2
    >= ||rho - sigma||_1^2 / 4`` for a state ``rho`` and a substate ``sigma``."""
    r = _state(rho, what="rho")
    s = _state(sigma, SUBSTATE, what="sigma")
    tol = scaled_tol(tol, r.dim)
    S = relative_entropy(r, s, check=False)
    links = substate_links(r.matrix, s.matrix, ("S(rho||sigma)", S))
    return make_verdict(
        "substate", links, tol, metadata={"d": r.dim, "trace_sigma": s.trace()}
    )


def check_norm_sandwich(M, N, tol: float = TOL_INEQUALITY) -> ChainVerdict:
    """``||sqrt M - sqrt N||_2^2 <= ||M - N||_1 <= ||sqrt M - sqrt N||_2 ||sqrt M + sqrt N||_2``.

    Stored in descending order.
    """
    M, N = la.as_square(M), la.as_square(N)
    sM, sN = la.sqrtm_psd(M), la.sqrtm_psd(N)
    diff2 = la.schatten_norm(sM - sN, 2)
    links = [
        ("||sqrt M - sqrt N||_2 ||sqrt M + sqrt N||_2", diff2 * la.schatten_norm(sM + sN, 2)),
        ("||M - N||_1", la.schatten_norm(M - N, 1)),
        ("||sqrt M - sqrt N||_2^2", diff2**2),
    ]
    return make_verdict("norm-sandwich", links, scaled_tol(tol, M.shape[0]), metadata={"d": M.shape[0]})


def check_monotonicity_gap(rho, sigma, phi, tol: float = TOL_INEQUALITY) -> ChainVerdict:
    """``S(rho||sigma) - S(Phi rho||Phi sigma) >=
    -2 ln Tr sqrt(rho) sqrt(exp(log sigma + Phi*(log Phi rho) - Phi*(log Phi sigma)))``.

    The gap itself must also be nonnegative (data processing).
    """
    r = _state(rho, what="rho")
    s = _state(sigma, what="sigma")
    tol = scaled_tol(tol, r.dim)
    pr, ps = phi(r.matrix), phi(s.matrix)
    for M, what in ((r.matrix, "rho"), (s.matrix, "sigma"), (pr, "Phi(rho)"), (ps, "Phi(sigma)")):
        la.require_full_rank(M, what)
    gap = relative_entropy(r, s, check=False) - relative_entropy(pr, ps, check=False)
    H = la.logm_psd(s.matrix) + phi.adjoint(la.logm_psd(pr)) - phi.adjoint(la.logm_psd(ps))
    X = la.expm_hermitian(la.hermitize(H))
    links = [
        ("S(rho||sigma) - S(Phi rho||Phi sigma)", gap),
        ("-2 ln Tr sqrt(rho) sqrt(X)", neg2_log(root_overlap(r.matrix, X))),
    ]
    return make_verdict(
        "monotonicity",
        links,
        tol,
        metadata={"d_in": phi.d_in, "d_out": phi.d_out, "trace_X": float(np.trace(X).real)},
        extra_checks={"data processing: gap >= -tol": gap >= -tol},
    )


def as_bipartite(x, what: str = "state", dims=None) -> MultipartiteState:
    s = _state(x, what=what, dims=dims)
    if s.n_subsystems == 2:
        return s
    if s.n_subsystems > 2:
        # group everything after the first factor into B
        return MultipartiteState(s.matrix, (s.dims[0], s.dim // s.dims[0]), ("A", "B"))
    raise DimensionMismatch(f"{what} needs at least two subsystems, got {s.dims}")


def check_bipartite_chain(rho_AB, sigma_AB, tol: float = TOL_INEQUALITY, dims=None) -> ChainVerdict:
    """``S(rho_AB||sigma_AB) - S(rho_A||sigma_A)`` bounded below by the substate chain
    for ``X = exp(log sigma_AB - log sigma_A + log rho_A)``."""
    r = as_bipartite(rho_AB, "rho_AB", dims)
    s = as_bipartite(sigma_AB, "sigma_AB", dims)
    if r.dims != s.dims:
        raise DimensionMismatch(f"dims differ: {r.dims} vs {s.dims}")
    tol = scaled_tol(tol, r.dim)
    rA = la.partial_trace(r.matrix, r.dims, (0,))
    sA = la.partial_trace(s.matrix, s.dims, (0,))
    X = exp_log_sum(
        r.dims,
        [
            (1.0, s.matrix, (0, 1), "sigma_AB"),
            (-1.0, sA, (0,), "sigma_A"),
            (1.0, rA, (0,), "rho_A"),
        ],
    )
    gap = relative_entropy(r, s, check=False) - relative_entropy(rA, sA, check=False)
    links = substate_links(r.matrix, X, ("S(rho_AB||sigma_AB) - S(rho_A||sigma_A)", gap))
    return make_verdict(
        "bipartite", links, tol, metadata={"dims": list(r.dims), "trace_X": float(np.trace(X).real)}
    )


def check_cmi_chain(rho_ABC, tol: float = TOL_INEQUALITY) -> ChainVerdict:
    """``I(A:B|C) >= -2 ln Tr sqrt(rho) sqrt(M) >= ... `` with the Markov operator ``M``.

    The first link is ``S(rho_ABC || M)``; the entropy-difference value of
    the conditional mutual information is kept in ``metadata["cmi"]`` and
    the two must agree.
    """
    r = _tripartite(rho_ABC)
    la.require_full_rank(r.matrix, "rho_ABC")
    tol = scaled_tol(tol, r.dim)
    M = exp_log_sum(
        r.dims, markov_exponent_terms(marginal(r, AC), marginal(r, BC), marginal(r, C))
    )
    rel = relative_entropy(r, M, check=False)
    links = substate_links(r.matrix, M, ("I(A:B|C) = S(rho||M)", rel))
    ent = cmi(r)
    return make_verdict(
        "cmi",
        links,
        tol,
        metadata={"dims": list(r.dims), "cmi": ent, "trace_M": float(np.trace(M).real)},
        extra_checks={"entropy-difference CMI agrees": abs(ent - rel) <= tol},
    )


def _berta_terms(rho: MultipartiteState, s_ac, t_bc, w_c):
    X = exp_log_sum(rho.dims, markov_exponent_terms(s_ac, t_bc, w_c))
    lhs = relative_entropy(rho, X, check=False)
    parts = {
        "cmi": cmi(rho),
        "S(rho_AC||sigma_AC)": relative_entropy(marginal(rho, AC), s_ac, check=False),
        "S(rho_BC||tau_BC)": relative_entropy(marginal(rho, BC), t_bc, check=False),
        "S(rho_C||omega_C)": relative_entropy(marginal(rho, C), w_c, check=False),
    }
    rhs = (
        parts["cmi"]
        + parts["S(rho_AC||sigma_AC)"]
        + parts["S(rho_BC||tau_BC)"]
        - parts["S(rho_C||omega_C)"]
    )
    return lhs, rhs, parts, X


def _local_state(x, dim: int, what: str) -> np.ndarray:
    M = _state(x, what=what).matrix
    if M.shape[0] != dim:
        raise DimensionMismatch(f"{what} has dimension {M.shape[0]}, expected {dim}")
    la.require_full_rank(M, what)
    return M


def berta_verdict_general(rho_ABC, sigma_AC, tau_BC, omega_C, tol: float = TOL_IDENTITY) -> ChainVerdict:
    """Identity ``S(rho || exp(log sigma_AC + log tau_BC - log omega_C))
    = I(A:B|C) + S(rho_AC||sigma_AC) + S(rho_BC||tau_BC) - S(rho_C||omega_C)``."""
    r = _tripartite(rho_ABC)
    la.require_full_rank(r.matrix, "rho_ABC")
    dA, dB, dC = r.dims
    s_ac = _local_state(sigma_AC, dA * dC, "sigma_AC")
    t_bc = _local_state(tau_BC, dB * dC, "tau_BC")
    w_c = _local_state(omega_C, dC, "omega_C")
    lhs, rhs, parts, _ = _berta_terms(r, s_ac, t_bc, w_c)
    return make_verdict(
        "berta-general",
        [("S(rho||exp(...))", lhs), ("I + S_AC + S_BC - S_C", rhs)],
        scaled_tol(tol, r.dim),
        kind="identity",
        metadata={"dims": list(r.dims), **parts},
    )


def berta_identity_general(rho_ABC, sigma_AC, tau_BC, omega_C, tol: float = TOL_IDENTITY) -> float:
    """Absolute residual of the general identity; see :func:`berta_verdict_general`."""
    return abs(berta_verdict_general(rho_ABC, sigma_AC, tau_BC, omega_C, tol).gaps[0])


def berta_verdict(rho_ABC, sigma_ABC, tol: float = TOL_IDENTITY) -> ChainVerdict:
    """The identity with ``sigma_AC, sigma_BC, sigma_C`` all marginals of ``sigma_ABC``."""
    s = _tripartite(sigma_ABC, "sigma_ABC")
    v = berta_verdict_general(rho_ABC, marginal(s, AC), marginal(s, BC), marginal(s, C), tol)
    v.name = "berta"
    return v


def berta_identity(rho_ABC, sigma_ABC, tol: float = TOL_IDENTITY) -> float:
    return abs(berta_verdict(rho_ABC, sigma_ABC, tol).gaps[0])


def check_marginal_monotonicity(rho_ABC, sigma_ABC, tol: float = TOL_INEQUALITY) -> ChainVerdict:
    """``(S(rho_AC||sigma_AC) + S(rho_BC||sigma_BC)) / 2 >= S(rho_C||sigma_C)``."""
    r = _tripartite(rho_ABC, "rho_ABC")
    s = _tripartite(sigma_ABC, "sigma_ABC")
    s_ac = relative_entropy(marginal(r, AC), marginal(s, AC), check=False)
    s_bc = relative_entropy(marginal(r, BC), marginal(s, BC), check=False)
    s_c = relative_entropy(marginal(r, C), marginal(s, C), check=False)
    links = [("(S_AC + S_BC) / 2", 0.5 * (s_ac + s_bc)), ("S(rho_C||sigma_C)", s_c)]
    return make_verdict(
        "marginal-mono",
        links,
        scaled_tol(tol, r.dim),
        metadata={"S_AC": s_ac, "S_BC": s_bc},
    )


def _sigma_markov_operator(s: MultipartiteState) -> np.ndarray:
    return exp_log_sum(
        s.dims, markov_exponent_terms(marginal(s, AC), marginal(s, BC), marginal(s, C))
    )


def check_super_ssa(rho_ABC, sigma_ABC, tol: float = TOL_INEQUALITY) -> ChainVerdict:
    """``S(rho || exp(log sigma_AC + log sigma_BC - log sigma_C))
    >= I(A:B|C) + S(rho_AC||sigma_AC) / 2 + S(rho_BC||sigma_BC) / 2 >= 0``.

    When the left side is within ``tol`` of zero the equality consequences
    are checked as well: ``||rho - X||_1 <= sqrt(2 tol)`` and the three
    right-hand terms each below ``tol``.
    """
    r = _tripartite(rho_ABC, "rho_ABC")
    s = _tripartite(sigma_ABC, "sigma_ABC")
    la.require_full_rank(r.matrix, "rho_ABC")
    la.require_full_rank(s.matrix, "sigma_ABC")
    tol = scaled_tol(tol, r.dim)
    X = _sigma_markov_operator(s)
    lhs = relative_entropy(r, X, check=False)
    I = cmi(r)
    s_ac = relative_entropy(marginal(r, AC), marginal(s, AC), check=False)
    s_bc = relative_entropy(marginal(r, BC), marginal(s, BC), check=False)
    rhs = I + 0.5 * s_ac + 0.5 * s_bc
    meta = {"dims": list(r.dims), "cmi": I, "S_AC": s_ac, "S_BC": s_bc, "equality_branch": False}
    extra = {}
    if lhs <= tol:
        dist = la.schatten_norm(r.matrix - X, 1)
        meta.update(equality_branch=True, trace_distance_to_X=dist)
        extra = {
            "equality: ||rho - X||_1 <= sqrt(2 tol)": dist <= math.sqrt(2 * tol),
            "equality: cmi <= tol": I <= tol,
            "equality: S_AC <= tol": s_ac <= tol,
            "equality: S_BC <= tol": s_bc <= tol,
        }
    links = [("S(rho||X)", lhs), ("I + S_AC/2 + S_BC/2", rhs), ("zero", 0.0)]
    return make_verdict("super-ssa", links, tol, metadata=meta, extra_checks=extra)


def check_sigma_substate_chain(rho_ABC, sigma_ABC, tol: float = TOL_INEQUALITY) -> ChainVerdict:
    """Substate chain for ``X = exp(log sigma_AC + log sigma_BC - log sigma_C)``,
    with the precheck ``Tr X <= 1 + tol`` recorded."""
    r = _tripartite(rho_ABC, "rho_ABC")
    s = _tripartite(sigma_ABC, "sigma_ABC")
    la.require_full_rank(r.matrix, "rho_ABC")
    tol = scaled_tol(tol, r.dim)
    X = _sigma_markov_operator(s)
    tr = float(np.trace(X).real)
    links = substate_links(r.matrix, X, ("S(rho||X)", relative_entropy(r, X, check=False)))
    return make_verdict(
        "sigma-substate",
        links,
        tol,
        metadata={"dims": list(r.dims), "trace_X": tr},
        extra_checks={"Tr X <= 1 + tol": tr <= 1.0 + tol},
    )


def check_two_marginal_chain(
    rho_ABC, tol: float = TOL_INEQUALITY, certificate_tol: float = 1e-10
) -> ChainVerdict:
    """``S(AC) + S(BC) - S(ABC) >= -2 ln Tr sqrt(rho) sqrt(X) >= ...`` with
    ``X = exp(log rho_AC + log rho_BC)``.

    Also records the substate certificate
    ``Tr X <= Tr exp(log rho_AC) exp(log rho_BC) = Tr rho_AC rho_BC = Tr rho_C^2 <= 1``.
    """
    r = _tripartite(rho_ABC, "rho_ABC")
    la.require_full_rank(r.matrix, "rho_ABC")
    tol = scaled_tol(tol, r.dim)
    d = r.dims
    r_ac, r_bc, r_c = marginal(r, AC), marginal(r, BC), marginal(r, C)
    X = exp_log_sum(d, [(1.0, r_ac, AC, "rho_AC"), (1.0, r_bc, BC, "rho_BC")])
    first = (
        von_neumann_entropy(MultipartiteState(r_ac, (d[0], d[2])))
        + von_neumann_entropy(MultipartiteState(r_bc, (d[1], d[2])))
        - von_neumann_entropy(r)
    )
    links = substate_links(r.matrix, X, ("S(AC) + S(BC) - S(ABC)", first))

    tr_x = float(np.trace(X).real)
    L_ac, L_bc = la.lift_to_full(r_ac, d, AC), la.lift_to_full(r_bc, d, BC)
    tr_product = float(np.trace(L_ac @ L_bc).real)
    purity_c = float(np.trace(r_c @ r_c).real)
    certificate = {
        "Tr X <= Tr rho_AC rho_BC": tr_x <= tr_product + certificate_tol,
        "Tr rho_AC rho_BC = Tr rho_C^2": abs(tr_product - purity_c) <= certificate_tol,
        "Tr rho_C^2 <= 1": purity_c <= 1.0 + certificate_tol,
    }
    return make_verdict(
        "two-marginal",
        links,
        tol,
        metadata={
            "dims": list(d),
            "trace_X": tr_x,
            "trace_rho_AC_rho_BC": tr_product,
            "purity_C": purity_c,
            "relative_entropy_form": relative_entropy(r, X, check=False),
        },
        extra_checks=certificate,
    )


def check_golden_thompson(A, B, tol: float = 1e-9) -> ChainVerdict:
    """``Tr e^A e^B >= Tr e^(A+B)`` for Hermitian ``A`` and ``B``."""
    A, B = la.as_square(A), la.as_square(B)
    if not (la.is_hermitian(A) and la.is_hermitian(B)):
        raise NotHermitian("Golden-Thompson needs Hermitian arguments")
    eA, eB = la.expm_hermitian(A), la.expm_hermitian(B)
    links = [
        ("Tr e^A e^B", float(np.trace(eA @ eB).real)),
        ("Tr e^(A+B)", float(np.trace(la.expm_hermitian(la.hermitize(A + B))).real)),
    ]
    return make_verdict("golden-thompson", links, tol, metadata={"d": A.shape[0]})
