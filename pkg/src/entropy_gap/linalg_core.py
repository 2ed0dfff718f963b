"""Dense Hermitian linear algebra.

Every matrix function in the package goes through a single Hermitian
eigendecomposition. Functions of positive semidefinite matrices act on the
support only: eigenvalues at or below the support cutoff are sent to zero,
whatever the function would have returned there.

Subsystem index convention: subsystem 0 is the most significant factor of
the Kronecker product, so a row index of ``A (x) B`` is ``i_A * d_B + i_B``.
"""

from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    SupportDeficient,
)

#: Relative eigenvalue threshold used for the default support cutoff.
CUTOFF_SCALE = 2.0**-45

#: Default tolerance on ``||H - H^dagger||_2`` relative to ``max(1, ||H||_2)``.
HERMITICITY_TOL = 1e-10


class HermitianEigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns


class SupportInfo(NamedTuple):
    projector: np.ndarray
    rank: int
    cutoff: float


def as_square(A) -> np.ndarray:
    """Return ``A`` as a complex square array, rejecting non-finite entries."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def hermitize(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.conj().T)


def is_hermitian(A, tol: float = HERMITICITY_TOL) -> bool:
    A = np.asarray(A)
    scale = max(1.0, np.linalg.norm(A))
    return bool(np.linalg.norm(A - A.conj().T) <= tol * scale)


def eig_hermitian(H, hermiticity_tol: float = HERMITICITY_TOL) -> HermitianEigenSystem:
    """Eigendecomposition of a Hermitian matrix after symmetrization.

    Raises:
        NotHermitian: if ``||H - H^dagger||_2 > hermiticity_tol * max(1, ||H||_2)``.
        ConvergenceFailure: if LAPACK does not converge.
    """
    H = as_square(H)
    if not is_hermitian(H, hermiticity_tol):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    try:
        w, U = np.linalg.eigh(hermitize(H))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return HermitianEigenSystem(w, U)


def default_cutoff(eigenvalues: np.ndarray) -> float:
    """Absolute support threshold ``d * max|lambda| * 2**-45``."""
    if eigenvalues.size == 0:
        return 0.0
    return eigenvalues.size * float(np.max(np.abs(eigenvalues))) * CUTOFF_SCALE


def _from_eigen(w: np.ndarray, U: np.ndarray) -> np.ndarray:
    return hermitize((U * w) @ U.conj().T)


def psd_eigen(A, support_cutoff: float | None = None):
    """Eigensystem of a PSD matrix plus the cutoff and support mask.

    Returns ``(eigenvalues, eigenvectors, cutoff, mask)`` where ``mask`` marks
    eigenvalues strictly above the cutoff.
    """
    w, U = eig_hermitian(A)
    cutoff = default_cutoff(w) if support_cutoff is None else float(support_cutoff)
    if w.size and w[0] < -cutoff:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} below -cutoff {cutoff:.3e}")
    return w, U, cutoff, w > cutoff


def matrix_function_psd(
    A, f: Callable[[np.ndarray], np.ndarray], support_cutoff: float | None = None
) -> np.ndarray:
    """Apply ``f`` to the support eigenvalues of a PSD matrix.

    Eigenvalues at or below the cutoff are mapped to 0, so ``log`` and
    ``x**-0.5`` are well defined and vanish on the kernel.
    """
    w, U, _, mask = psd_eigen(A, support_cutoff)
    fw = np.zeros_like(w)
    if np.any(mask):
        fw[mask] = f(w[mask])
    return _from_eigen(fw, U)


def sqrtm_psd(A, support_cutoff: float | None = None) -> np.ndarray:
    return matrix_function_psd(A, np.sqrt, support_cutoff)


def logm_psd(A, support_cutoff: float | None = None) -> np.ndarray:
    return matrix_function_psd(A, np.log, support_cutoff)


def inv_sqrtm_psd(A, support_cutoff: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse square root on the support."""
    return matrix_function_psd(A, lambda x: x**-0.5, support_cutoff)


def expm_hermitian(H) -> np.ndarray:
    w, U = eig_hermitian(H)
    return _from_eigen(np.exp(w), U)


def support_info(A, cutoff: float | None = None) -> SupportInfo:
    w, U, cutoff, mask = psd_eigen(A, cutoff)
    V = U[:, mask]
    return SupportInfo(hermitize(V @ V.conj().T), int(mask.sum()), cutoff)


def rank_psd(A, cutoff: float | None = None) -> int:
    return support_info(A, cutoff).rank


def require_full_rank(A, what: str = "operator", cutoff: float | None = None) -> None:
    """Raise SupportDeficient unless ``A`` is PSD with full rank after the cutoff."""
    r = rank_psd(A, cutoff)
    d = np.asarray(A).shape[0]
    if r < d:
        raise SupportDeficient(f"{what} has rank {r} < {d}")


def tensor(*factors) -> np.ndarray:
    """Kronecker product, leftmost factor most significant."""
    out = np.ones((1, 1), dtype=complex)
    for F in factors:
        out = np.kron(out, np.asarray(F, dtype=complex))
    return out


def _check_dims(M: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"subsystem dimensions must be positive: {dims}")
    if int(np.prod(dims)) != M.shape[0]:
        raise DimensionMismatch(
            f"dims {dims} multiply to {int(np.prod(dims))}, matrix has dimension {M.shape[0]}"
        )
    return dims


def _normalize_index_set(idx, n: int) -> tuple[int, ...]:
    if isinstance(idx, (int, np.integer)):
        idx = (int(idx),)
    out = tuple(sorted(set(int(i) for i in idx)))
    if not out:
        raise DimensionMismatch("index set must be nonempty")
    if out[0] < 0 or out[-1] >= n:
        raise DimensionMismatch(f"subsystem indices {out} out of range for {n} subsystems")
    return out


def partial_trace(M, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem not in ``keep``.

    Kept subsystems stay in their original (ascending) order.
    """
    M = as_square(M)
    dims = _check_dims(M, dims)
    n = len(dims)
    keep = _normalize_index_set(keep, n)
    T = M.reshape(dims + dims)
    # einsum labels: row index k, column index n + k; traced pairs share a label
    row = list(range(n))
    col = [n + k if k in keep else k for k in range(n)]
    out = [k for k in keep] + [n + k for k in keep]
    dk = int(np.prod([dims[k] for k in keep]))
    return np.einsum(T, row + col, out).reshape(dk, dk)


def lift_to_full(M, dims: Sequence[int], occupied) -> np.ndarray:
    """Embed an operator on the ``occupied`` subsystems into the full space.

    ``M`` acts on the occupied subsystems in ascending order; identity is put
    on every other factor.
    """
    M = as_square(M)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    occupied = _normalize_index_set(occupied, n)
    d_occ = int(np.prod([dims[k] for k in occupied]))
    if M.shape[0] != d_occ:
        raise DimensionMismatch(
            f"operator of dimension {M.shape[0]} does not match occupied dims "
            f"{[dims[k] for k in occupied]}"
        )
    rest = [k for k in range(n) if k not in occupied]
    d_rest = int(np.prod([dims[k] for k in rest])) if rest else 1
    full = np.kron(M, np.eye(d_rest))
    order = list(occupied) + rest
    local = [dims[k] for k in order]
    perm = [order.index(k) for k in range(n)]
    T = full.reshape(local + local).transpose(perm + [n + p for p in perm])
    D = int(np.prod(dims))
    return T.reshape(D, D)


def schatten_norm(A, p: int = 1) -> float:
    """Schatten 1-norm (trace norm) or 2-norm (Frobenius norm)."""
    A = np.asarray(A, dtype=complex)
    if p == 2:
        return float(np.linalg.norm(A, "fro"))
    if p != 1:
        raise ValueError("only p = 1 and p = 2 are supported")
    if A.size == 0:
        return 0.0
    if is_hermitian(A, 1e-14):
        return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(A)))))
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def support_contained(rho, sigma, cutoff: float = 1e-10) -> bool:
    """True iff ``supp(rho)`` lies inside ``supp(sigma)``.

    Measured as the trace norm of ``rho`` compressed to the kernel of
    ``sigma``, relative to ``Tr rho``.
    """
    rho = as_square(rho)
    psd_eigen(rho)
    P = support_info(sigma).projector
    Q = np.eye(P.shape[0]) - P
    leak = schatten_norm(hermitize(Q @ rho @ Q), 1)
    return bool(leak <= cutoff * abs(np.trace(rho).real))
