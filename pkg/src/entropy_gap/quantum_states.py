"""Density matrices, substates, Kraus channels and seeded generators.

Random generators accept anything :func:`numpy.random.default_rng` accepts
(an integer seed, a ``SeedSequence`` or an existing ``Generator``). Integer
seeds always go through PCG64, so samples are identical across platforms.
"""

from __future__ import annotations

import json
import os
import string
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg_core as la
from .errors import (
    DimensionMismatch,
    InfeasibleShape,
    InvalidDistribution,
    InvalidState,
)

STATE = "state"
SUBSTATE = "substate"

DEFAULT_LABELS = string.ascii_uppercase


def _dims_tuple(d) -> tuple[int, ...]:
    if isinstance(d, (int, np.integer)):
        return (int(d),)
    return tuple(int(x) for x in d)


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """A (sub)normalized density matrix on a tensor product of subsystems."""

    matrix: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...] = ()
    kind: str = STATE

    def __post_init__(self):
        matrix = la.as_square(self.matrix)
        dims = _dims_tuple(self.dims)
        if int(np.prod(dims)) != matrix.shape[0]:
            raise DimensionMismatch(
                f"dims {dims} inconsistent with matrix of dimension {matrix.shape[0]}"
            )
        labels = tuple(self.labels) or tuple(DEFAULT_LABELS[: len(dims)])
        if len(labels) != len(dims):
            raise DimensionMismatch("one label per subsystem is required")
        if self.kind not in (STATE, SUBSTATE):
            raise ValueError(f"kind must be {STATE!r} or {SUBSTATE!r}")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def subsystem_indices(self, which) -> tuple[int, ...]:
        """Translate labels (``"AC"``, ``["A", "C"]``) or integers to indices."""
        if isinstance(which, str):
            which = list(which)
        out = []
        for w in np.atleast_1d(np.asarray(which, dtype=object)):
            if isinstance(w, str):
                if w not in self.labels:
                    raise DimensionMismatch(f"unknown subsystem label {w!r}")
                out.append(self.labels.index(w))
            else:
                out.append(int(w))
        return tuple(sorted(out))

    def marginal(self, keep) -> MultipartiteState:
        idx = self.subsystem_indices(keep)
        return MultipartiteState(
            la.partial_trace(self.matrix, self.dims, idx),
            tuple(self.dims[i] for i in idx),
            tuple(self.labels[i] for i in idx),
            self.kind,
        )

    def with_matrix(self, matrix, kind: str | None = None) -> MultipartiteState:
        return MultipartiteState(matrix, self.dims, self.labels, kind or self.kind)


@dataclass
class StateDiagnostics:
    hermiticity_residual: float
    min_eigenvalue: float
    trace: float
    trace_deviation: float
    dims_consistent: bool
    passed: bool
    reasons: list[str] = field(default_factory=list)


def as_state(obj, dims=None, kind: str = STATE) -> MultipartiteState:
    """Coerce an array (or pass through a MultipartiteState)."""
    if isinstance(obj, MultipartiteState):
        return obj
    M = la.as_square(obj)
    return MultipartiteState(M, dims if dims is not None else (M.shape[0],), kind=kind)


def validate(state, tol: float = 1e-10) -> StateDiagnostics:
    """Diagnose Hermiticity, positivity, trace and dimension consistency.

    Never raises; ``passed`` is True iff every check is within ``tol``.
    """
    if isinstance(state, MultipartiteState):
        M, dims, kind = state.matrix, state.dims, state.kind
    else:
        M, dims, kind = np.asarray(state, dtype=complex), None, STATE
    reasons = []
    dims_ok = M.ndim == 2 and M.shape[0] == M.shape[1]
    if dims_ok and dims is not None:
        dims_ok = int(np.prod(dims)) == M.shape[0]
    if not dims_ok:
        reasons.append("dimension mismatch")
        return StateDiagnostics(np.nan, np.nan, np.nan, np.nan, False, False, reasons)

    herm = float(np.linalg.norm(M - M.conj().T))
    min_eig = float(np.linalg.eigvalsh(la.hermitize(M))[0])
    tr = float(np.trace(M).real)
    if kind == STATE:
        dev = abs(tr - 1.0)
    else:
        dev = max(0.0, tr - 1.0)
    if herm > tol:
        reasons.append("not Hermitian")
    if min_eig < -tol:
        reasons.append("negative eigenvalue")
    if dev > tol:
        reasons.append("trace not 1" if kind == STATE else "trace exceeds 1")
    return StateDiagnostics(herm, min_eig, tr, dev, True, not reasons, reasons)


def require_valid(state, tol: float = 1e-8, what: str = "state") -> None:
    diag = validate(state, tol)
    if not diag.passed:
        raise InvalidState(f"invalid {what}: {', '.join(diag.reasons)}")


# --- generators ----------------------------------------------------------


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density_hs(d, seed=None, labels: Sequence[str] = ()) -> MultipartiteState:
    """Hilbert-Schmidt random state ``G G^dagger / Tr(G G^dagger)``.

    ``d`` is either a total dimension or a tuple of subsystem dimensions.
    """
    dims = _dims_tuple(d)
    D = int(np.prod(dims))
    if D < 1:
        raise ValueError("dimension must be at least 1")
    rng = np.random.default_rng(seed)
    G = _ginibre(rng, D, D)
    W = G @ G.conj().T
    return MultipartiteState(la.hermitize(W / np.trace(W).real), dims, tuple(labels))


def random_pure(d, seed=None, labels: Sequence[str] = ()) -> MultipartiteState:
    dims = _dims_tuple(d)
    D = int(np.prod(dims))
    rng = np.random.default_rng(seed)
    psi = _ginibre(rng, D, 1)[:, 0]
    psi /= np.linalg.norm(psi)
    return MultipartiteState(np.outer(psi, psi.conj()), dims, tuple(labels))


def random_psd(d: int, seed=None) -> np.ndarray:
    """Unnormalized Wishart matrix ``G G^dagger`` (trace not fixed)."""
    rng = np.random.default_rng(seed)
    G = _ginibre(rng, d, d)
    return la.hermitize(G @ G.conj().T)


def random_hermitian(d: int, seed=None) -> np.ndarray:
    """GUE-type Hermitian matrix ``(G + G^dagger) / 2``."""
    rng = np.random.default_rng(seed)
    return la.hermitize(_ginibre(rng, d, d))


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar unitary via QR with the phase correction of Mezzadri."""
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(_ginibre(rng, d, d))
    ph = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * ph


def random_diagonal_state(d, seed=None) -> MultipartiteState:
    """Diagonal state with a flat-Dirichlet spectrum (a classical distribution)."""
    dims = _dims_tuple(d)
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(int(np.prod(dims))))
    return MultipartiteState(np.diag(p).astype(complex), dims)


def random_rank_deficient(dims, seed=None) -> MultipartiteState:
    """Pure state on the first subsystem tensored with an HS state on the rest.

    Only meant for exercising support handling.
    """
    dims = _dims_tuple(dims)
    if len(dims) < 2:
        raise DimensionMismatch("need at least two subsystems")
    rng = np.random.default_rng(seed)
    a = random_pure(dims[0], rng)
    b = random_density_hs(dims[1:], rng)
    return MultipartiteState(la.tensor(a.matrix, b.matrix), dims)


def markov_state_classical_c(p, rhos_A, rhos_B, dims=None) -> MultipartiteState:
    """``sum_c p_c rho_A^c (x) rho_B^c (x) |c><c|`` in global order (A, B, C)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
        raise InvalidDistribution("p must be a nonempty probability vector")
    if len(rhos_A) != p.size or len(rhos_B) != p.size:
        raise DimensionMismatch("need one rho_A and one rho_B per classical value")
    mats_A = [as_state(r).matrix for r in rhos_A]
    mats_B = [as_state(r).matrix for r in rhos_B]
    dA, dB, dC = mats_A[0].shape[0], mats_B[0].shape[0], p.size
    if any(m.shape[0] != dA for m in mats_A) or any(m.shape[0] != dB for m in mats_B):
        raise DimensionMismatch("all rho_A (resp. rho_B) must share a dimension")
    if dims is not None and tuple(dims) != (dA, dB, dC):
        raise DimensionMismatch(f"dims {tuple(dims)} != {(dA, dB, dC)}")
    for m in mats_A + mats_B:
        require_valid(m, 1e-10)
    out = np.zeros((dA * dB * dC,) * 2, dtype=complex)
    for c in range(dC):
        proj = np.zeros((dC, dC))
        proj[c, c] = 1.0
        out += p[c] * la.tensor(mats_A[c], mats_B[c], proj)
    return MultipartiteState(out, (dA, dB, dC), ("A", "B", "C"))


def random_markov_classical_c(dims, seed=None) -> MultipartiteState:
    """Classical-C Markov state with HS components and Dirichlet weights."""
    dA, dB, dC = _dims_tuple(dims)
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(dC))
    rhos_A = [random_density_hs(dA, rng) for _ in range(dC)]
    rhos_B = [random_density_hs(dB, rng) for _ in range(dC)]
    return markov_state_classical_c(p, rhos_A, rhos_B)


# --- channels --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map in Kraus form."""

    kraus: tuple[np.ndarray, ...]
    d_in: int
    d_out: int

    def __post_init__(self):
        ks = tuple(np.asarray(K, dtype=complex) for K in self.kraus)
        if not ks:
            raise InfeasibleShape("a channel needs at least one Kraus operator")
        for K in ks:
            if K.shape != (self.d_out, self.d_in):
                raise DimensionMismatch(
                    f"Kraus operator of shape {K.shape}, expected {(self.d_out, self.d_in)}"
                )
        object.__setattr__(self, "kraus", ks)

    @classmethod
    def from_kraus(cls, kraus) -> QuantumChannel:
        kraus = [np.asarray(K, dtype=complex) for K in kraus]
        d_out, d_in = kraus[0].shape
        return cls(tuple(kraus), d_in, d_out)

    def completeness_residual(self) -> float:
        S = sum(K.conj().T @ K for K in self.kraus)
        return float(np.linalg.norm(S - np.eye(self.d_in)))

    def __call__(self, rho) -> np.ndarray:
        return apply_channel(self, rho)

    def adjoint(self, X) -> np.ndarray:
        return apply_adjoint(self, X)


def apply_channel(phi: QuantumChannel, rho) -> np.ndarray:
    rho = as_state(rho).matrix
    if rho.shape[0] != phi.d_in:
        raise DimensionMismatch(f"channel input dimension {phi.d_in}, got {rho.shape[0]}")
    return la.hermitize(sum(K @ rho @ K.conj().T for K in phi.kraus))


def apply_adjoint(phi: QuantumChannel, X) -> np.ndarray:
    """Heisenberg-picture map ``X -> sum_i K_i^dagger X K_i``."""
    X = la.as_square(X)
    if X.shape[0] != phi.d_out:
        raise DimensionMismatch(f"adjoint input dimension {phi.d_out}, got {X.shape[0]}")
    return sum(K.conj().T @ X @ K for K in phi.kraus)


def random_channel(d_in: int, d_out: int, n_kraus: int, seed=None) -> QuantumChannel:
    """Kraus operators sliced from a random isometry ``C^d_in -> C^(n_kraus d_out)``."""
    if n_kraus < 1 or n_kraus * d_out < d_in:
        raise InfeasibleShape(
            f"n_kraus * d_out = {n_kraus * d_out} must be >= d_in = {d_in}"
        )
    rng = np.random.default_rng(seed)
    V, R = np.linalg.qr(_ginibre(rng, n_kraus * d_out, d_in))
    V = V * (np.diagonal(R) / np.abs(np.diagonal(R)))
    return QuantumChannel(
        tuple(V[i * d_out : (i + 1) * d_out] for i in range(n_kraus)), d_in, d_out
    )


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel((np.eye(d, dtype=complex),), d, d)


def unitary_channel(U) -> QuantumChannel:
    U = np.asarray(U, dtype=complex)
    return QuantumChannel((U,), U.shape[1], U.shape[0])


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def depolarizing_channel(p: float) -> QuantumChannel:
    """Qubit depolarizing channel; ``p = 1`` is completely depolarizing."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    k0 = np.sqrt(1 - 3 * p / 4) * PAULI_I
    ks = [np.sqrt(p / 4) * P for P in (PAULI_X, PAULI_Y, PAULI_Z)]
    return QuantumChannel((k0, *ks), 2, 2)


# --- state files -------------------------------------------------------------


def state_to_dict(state: MultipartiteState) -> dict:
    flat = state.matrix.reshape(-1)
    return {
        "dims": list(state.dims),
        "labels": list(state.labels),
        "kind": state.kind,
        "matrix": [[float(z.real), float(z.imag)] for z in flat],
    }


def state_from_dict(payload: dict) -> MultipartiteState:
    """Parse the JSON state schema; rejects non-square or dims-inconsistent data.

    ``matrix`` is either a flat row-major list of ``[re, im]`` pairs or a list
    of rows of such pairs.
    """
    try:
        dims = _dims_tuple(payload["dims"])
        entries = np.asarray(payload["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidState(f"malformed state payload: {exc}") from exc
    kind = payload.get("kind", STATE)
    if entries.ndim == 3 and entries.shape[2] == 2:
        if entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"matrix rows form shape {entries.shape[:2]}")
        M = entries[..., 0] + 1j * entries[..., 1]
    elif entries.ndim == 2 and entries.shape[1] == 2:
        n = int(round(np.sqrt(entries.shape[0])))
        if n * n != entries.shape[0]:
            raise DimensionMismatch(f"{entries.shape[0]} entries do not form a square matrix")
        M = (entries[:, 0] + 1j * entries[:, 1]).reshape(n, n)
    else:
        raise InvalidState("matrix must be a list of [re, im] pairs")
    return MultipartiteState(M, dims, tuple(payload.get("labels", ())), kind)


def save_state(state: MultipartiteState, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")


def load_state(path) -> MultipartiteState:
    with open(os.fspath(path)) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidState(f"{path}: not valid JSON ({exc})") from exc
    return state_from_dict(payload)
