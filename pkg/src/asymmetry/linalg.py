"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Anything
exposing ``__array__`` (for instance :class:`asymmetry.quantum.DensityOperator`)
is accepted wherever a matrix is expected.

Composite systems use the A-major flattening convention: for ``A (x) B`` the
index ``(i_A, i_B)`` maps to ``i_A * d_B + i_B``, which is what ``numpy.kron``
produces.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidState, NotHermitian, NotPSD, ValidationError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
SUPPORT_TOL = 1e-12


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # columns


def as_matrix(M, *, square: bool = False) -> np.ndarray:
    """Coerce ``M`` to a finite 2-D complex array."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    if square and A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    A = as_matrix(M, square=True)
    dev = np.abs(A - A.conj().T).max(initial=0.0)
    if dev > tol:
        raise NotHermitian(f"max |H - H^dagger| = {dev:.3e} exceeds {tol:g}")
    return A


def hermitian_eig(H, tol: float = HERMITIAN_TOL) -> HermitianEig:
    A = check_hermitian(H, tol)
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    return HermitianEig(w, V)


def _psd_spectrum(H, tol: float = PSD_TOL) -> HermitianEig:
    w, V = hermitian_eig(H)
    if w.size and w[0] < -tol:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is below -{tol:g}")
    return HermitianEig(np.clip(w, 0.0, None), V)


def matrix_power(H, s: float) -> np.ndarray:
    """``H**s`` for positive semidefinite ``H`` via its eigendecomposition.

    Eigenvalues in ``[-1e-10, 0)`` are clipped to zero. The power is taken on
    the support only, where the support is eigenvalues above ``1e-12``: rounding
    noise in a kernel would otherwise blow up under small positive ``s`` and
    under any negative ``s``.
    """
    w, V = _psd_spectrum(H)
    support = w > SUPPORT_TOL
    ws = np.zeros_like(w)
    ws[support] = w[support] ** s
    return (V * ws) @ V.conj().T


def trace_norm(M) -> float:
    A = as_matrix(M, square=True)
    return float(np.linalg.svd(A, compute_uv=False).sum())


def entropy_of_spectrum(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) if p.size else 0.0


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, ``-tr(rho log2 rho)``."""
    try:
        w, _ = _psd_spectrum(rho)
    except NotPSD as exc:
        raise InvalidState(str(exc)) from exc
    except NotHermitian as exc:
        raise InvalidState(str(exc)) from exc
    if abs(w.sum() - 1.0) > 1e-10:
        raise InvalidState(f"trace {w.sum():.12g} is not 1")
    return max(entropy_of_spectrum(w), 0.0)


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def kron_all(mats: Sequence) -> np.ndarray:
    out = np.eye(1, dtype=np.complex128)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def partial_trace(M, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem whose index is not in ``keep``."""
    A = as_matrix(M, square=True)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != A.shape[0]:
        raise DimensionMismatch(f"subsystem dims {dims} do not match matrix size {A.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatch(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    T = A.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # Trace highest axes first so lower axis numbers stay valid.
    nrow = n
    for k in sorted(traced, reverse=True):
        T = np.trace(T, axis1=k, axis2=k + nrow)
        nrow -= 1
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return T.reshape(d_keep, d_keep)


def unitary_from_generator(L, theta: float) -> np.ndarray:
    """``exp(-i theta L)`` for Hermitian ``L``."""
    w, V = hermitian_eig(L)
    return (V * np.exp(-1j * theta * w)) @ V.conj().T


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (Z + Z.conj().T)
