"""Scalar entropic functionals, all in nats.

Relative entropies return a plain ``float`` that may be ``math.inf``.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg_core as la
from .errors import DimensionMismatch, InvalidAlpha, InvalidState, NotPSD
from .quantum_states import STATE, SUBSTATE, MultipartiteState, validate

#: Multiply a value in nats by this to display it in bits.
NATS_TO_BITS = 1.0 / math.log(2.0)

#: Verification slack for inequalities that are exact in exact arithmetic.
EPS_SSA = 1e-9

_STATE_TOL = 1e-8


def _matrix(x) -> np.ndarray:
    return x.matrix if isinstance(x, MultipartiteState) else la.as_square(x)


def _check(x, kind: str, what: str) -> np.ndarray:
    M = _matrix(x)
    s = x if isinstance(x, MultipartiteState) else MultipartiteState(M, (M.shape[0],))
    diag = validate(s.with_matrix(M, kind), _STATE_TOL)
    if not diag.passed:
        raise InvalidState(f"{what}: {', '.join(diag.reasons)}")
    return M


def _xlogx(w: np.ndarray, cutoff: float) -> float:
    w = w[w > cutoff]
    return float(np.sum(w * np.log(w)))


def von_neumann_entropy(rho) -> float:
    """``-Tr rho log rho`` over the support eigenvalues."""
    M = _check(rho, STATE, "rho")
    w = np.linalg.eigvalsh(la.hermitize(M))
    val = -_xlogx(w, la.default_cutoff(w))
    return 0.0 if val == 0.0 else val


def relative_entropy(rho, sigma, check: bool = True) -> float:
    """Umegaki relative entropy ``Tr rho (log rho - log sigma)``.

    ``sigma`` may be a substate. Returns ``math.inf`` when the support of
    ``rho`` is not contained in the support of ``sigma``. The two traces
    ``Tr rho log rho`` and ``Tr rho log sigma`` are evaluated separately in
    the respective eigenbases.
    """
    if check:
        R = _check(rho, STATE, "rho")
        S = _check(sigma, SUBSTATE, "sigma")
    else:
        R, S = _matrix(rho), _matrix(sigma)
    if R.shape != S.shape:
        raise DimensionMismatch(f"shapes {R.shape} and {S.shape} differ")
    if not la.support_contained(R, S):
        return math.inf
    wr = np.linalg.eigvalsh(la.hermitize(R))
    ws, U, cutoff, mask = la.psd_eigen(S)
    # Tr rho log sigma = sum_j log(mu_j) <v_j| rho |v_j>
    V = U[:, mask]
    weights = np.einsum("ij,ik,kj->j", V.conj(), R, V).real
    return _xlogx(wr, la.default_cutoff(wr)) - float(np.dot(weights, np.log(ws[mask])))


def root_overlap(rho, sigma) -> float:
    """``Tr sqrt(rho) sqrt(sigma)``."""
    R, S = _matrix(rho), _matrix(sigma)
    return float(np.trace(la.sqrtm_psd(R) @ la.sqrtm_psd(S)).real)


def neg2_log(x: float) -> float:
    """``-2 ln x`` with ``x <= 0`` mapped to ``+inf``."""
    return math.inf if x <= 0.0 else -2.0 * math.log(x)


def renyi_relative_entropy(rho, sigma, alpha: float) -> float:
    """Petz-Renyi divergence ``ln Tr[rho^a sigma^(1-a)] / (a - 1)`` for ``a`` in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha}")
    R = _check(rho, STATE, "rho")
    S = _check(sigma, SUBSTATE, "sigma")
    q = np.trace(
        la.matrix_function_psd(R, lambda x: x**alpha)
        @ la.matrix_function_psd(S, lambda x: x ** (1.0 - alpha))
    ).real
    if q <= 0.0:
        return math.inf
    return float(math.log(q) / (alpha - 1.0))


def _entropy_unchecked(M: np.ndarray) -> float:
    w = np.linalg.eigvalsh(la.hermitize(M))
    if w[0] < -la.default_cutoff(w) - 1e-12:
        raise NotPSD("marginal has a negative eigenvalue")
    return -_xlogx(w, la.default_cutoff(w))


def cmi(rho, dims=None) -> float:
    """``I(A:B|C) = S(AC) + S(BC) - S(ABC) - S(C)`` for a tripartite state.

    ``dims`` is required when ``rho`` is a bare array.
    """
    if isinstance(rho, MultipartiteState):
        M, dims = rho.matrix, rho.dims
    else:
        if dims is None:
            raise DimensionMismatch("dims are required for a bare matrix")
        M = la.as_square(rho)
    if len(dims) != 3:
        raise DimensionMismatch(f"conditional mutual information needs 3 subsystems, got {dims}")
    _check(MultipartiteState(M, dims), STATE, "rho")
    s_ac = _entropy_unchecked(la.partial_trace(M, dims, (0, 2)))
    s_bc = _entropy_unchecked(la.partial_trace(M, dims, (1, 2)))
    s_c = _entropy_unchecked(la.partial_trace(M, dims, (2,)))
    s_abc = _entropy_unchecked(M)
    return s_ac + s_bc - s_abc - s_c


def marginal_entropies(rho: MultipartiteState) -> dict[str, float]:
    """Entropies of all marginals of a tripartite state keyed by label string."""
    M, dims = rho.matrix, rho.dims
    out = {}
    for keep in [(0, 1, 2), (0, 1), (0, 2), (1, 2), (0,), (1,), (2,)]:
        key = "".join(rho.labels[k] for k in keep)
        sub = M if len(keep) == 3 else la.partial_trace(M, dims, keep)
        out[key] = _entropy_unchecked(sub)
    return out


__all__ = [
    "EPS_SSA",
    "NATS_TO_BITS",
    "cmi",
    "marginal_entropies",
    "neg2_log",
    "relative_entropy",
    "renyi_relative_entropy",
    "root_overlap",
    "von_neumann_entropy",
]
