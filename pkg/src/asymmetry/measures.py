"""Asymmetry measures and the information quantities they are built from.

All logarithms are base 2, so entropies and divergences are in bits.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import linalg
from .errors import InvalidOrder, NumericalInconsistency, ValidationError, ZeroAsymmetry
from .groups import GroupDensity, Representation
from .quantum import DensityOperator, as_state, twirl_operator, uniform_twirl_operator, validate_state

NEGATIVITY_GUARD = 1e-9
KERNEL_TOL = 1e-12


@dataclass
class MeasureResult:
    name: str
    value: float
    digest: str = ""
    parameters: dict[str, Any] = field(default_factory=dict)
    tolerance: float = NEGATIVITY_GUARD

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "digest": self.digest,
            "parameters": self.parameters,
            "tolerance": self.tolerance,
        }


def state_digest(rho) -> str:
    """SHA-256 of the state's entries rounded to 12 significant digits.

    Entries below ``1e-12`` of the largest one are zeroed first so rounding
    noise does not change the digest.
    """
    M = np.array(rho, dtype=np.complex128)
    scale = max(np.abs(M).max(initial=0.0), 1e-300)
    M.real[np.abs(M.real) < 1e-12 * scale] = 0.0
    M.imag[np.abs(M.imag) < 1e-12 * scale] = 0.0
    text = ";".join(f"{z.real:.12g},{z.imag:.12g}" for z in M.reshape(-1))
    return hashlib.sha256(f"{M.shape}|{text}".encode()).hexdigest()[:16]


def _guard_nonnegative(name: str, value: float) -> float:
    if value < -NEGATIVITY_GUARD:
        raise NumericalInconsistency(f"{name} came out negative ({value:.3e})")
    return max(value, 0.0)


def expectation(rho, A) -> float:
    return float(np.real(np.trace(np.asarray(rho) @ A)))


def variance(rho, L) -> float:
    """``tr(rho L^2) - tr(rho L)^2``."""
    L = np.asarray(L)
    return expectation(rho, L @ L) - expectation(rho, L) ** 2


def characteristic_function(rho, R: Representation, elements: Sequence) -> np.ndarray:
    """``tr(rho U(g))`` for each element."""
    rho = as_state(rho)
    if rho.dim != R.dim:
        raise linalg.DimensionMismatch(f"state dim {rho.dim} != representation dim {R.dim}")
    return np.array([np.trace(rho.matrix @ R.unitary(g)) for g in elements], dtype=np.complex128)


def noether_moments(rho, L, k_max: int) -> np.ndarray:
    """``(tr(rho L), ..., tr(rho L^k_max))``."""
    if not 1 <= k_max <= 12:
        raise ValidationError("k_max must lie in 1..12")
    rho = as_state(rho)
    L = linalg.check_hermitian(L)
    out = np.empty(k_max)
    P = np.eye(L.shape[0], dtype=np.complex128)
    for k in range(k_max):
        P = P @ L
        m = np.trace(rho.matrix @ P)
        if abs(m.imag) > 1e-10 * max(1.0, abs(m.real)):
            raise NumericalInconsistency(f"moment {k + 1} has imaginary part {m.imag:.3e}")
        out[k] = m.real
    return out


def holevo_asymmetry(rho, R: Representation, p: GroupDensity | None = None) -> float:
    """``S(G_p(rho)) - S(rho)``; ``p=None`` means the exact uniform twirl."""
    rho = as_state(rho)
    if rho.dim != R.dim:
        raise linalg.DimensionMismatch(f"state dim {rho.dim} != representation dim {R.dim}")
    twirled = uniform_twirl_operator(rho.matrix, R) if p is None else twirl_operator(rho.matrix, R, p)
    gap = linalg.von_neumann_entropy(validate_state(twirled)) - linalg.von_neumann_entropy(rho)
    return _guard_nonnegative("holevo asymmetry", gap)


def commutator_asymmetry(rho, L) -> float:
    """Trace norm of ``[rho, L]``."""
    rho = as_state(rho)
    L = linalg.check_hermitian(L)
    return linalg.trace_norm(linalg.commutator(rho.matrix, L))


def trace_distance_asymmetry(rho, R: Representation, g) -> float:
    """``|| rho - U(g) rho U(g)^+ ||_1``."""
    rho = as_state(rho)
    if rho.dim != R.dim:
        raise linalg.DimensionMismatch(f"state dim {rho.dim} != representation dim {R.dim}")
    U = R.unitary(g)
    return linalg.trace_norm(rho.matrix - U @ rho.matrix @ U.conj().T)


def _check_order(s: float) -> None:
    if not np.isfinite(s) or s <= 0 or s == 1:
        raise InvalidOrder(f"order s must lie in (0,1) or (1,inf), got {s}")


def renyi_divergence(rho1, rho2, s: float) -> float:
    """Relative Renyi entropy ``log2 tr(rho1^s rho2^(1-s)) / (s-1)``; may be ``inf``."""
    _check_order(s)
    rho1, rho2 = as_state(rho1), as_state(rho2)
    if rho1.dim != rho2.dim:
        raise linalg.DimensionMismatch("states have different dimensions")
    if s > 1:
        w2, V2 = np.linalg.eigh(rho2.matrix)
        K = V2[:, w2 <= KERNEL_TOL]
        if K.size and np.abs(K.conj().T @ rho1.matrix @ K).max() > KERNEL_TOL:
            return float("inf")
    q = float(np.real(np.trace(linalg.matrix_power(rho1.matrix, s) @ linalg.matrix_power(rho2.matrix, 1 - s))))
    if q <= KERNEL_TOL:
        return float("inf")
    return _guard_nonnegative("renyi divergence", float(np.log2(q) / (s - 1)))


def renyi_asymmetry(rho, R: Representation, g, s: float) -> float:
    """Relative Renyi entropy between ``rho`` and its image under ``g``."""
    rho = as_state(rho)
    U = R.unitary(g)
    return renyi_divergence(rho, validate_state(U @ rho.matrix @ U.conj().T), s)


def skew_information(rho, L, s: float = 0.5) -> float:
    """Wigner-Yanase-Dyson skew information ``tr(rho L^2) - tr(rho^s L rho^(1-s) L)``.

    Orders above 1 are accepted; ``rho^(1-s)`` is then taken on the support of ``rho``.
    """
    _check_order(s)
    if s > 1:
        warnings.warn("skew information with s > 1 is nonnegative only under support conditions", stacklevel=2)
    rho = as_state(rho)
    L = linalg.check_hermitian(L)
    a = linalg.matrix_power(rho.matrix, s)
    b = linalg.matrix_power(rho.matrix, 1 - s)
    value = expectation(rho, L @ L) - float(np.real(np.trace(a @ L @ b @ L)))
    return _guard_nonnegative("skew information", value)


def cramer_rao_bound_value(rho, N) -> float:
    """The quantity ``1 / (4 S_{N,1/2}(rho))``."""
    skew = skew_information(rho, N, 0.5)
    if skew <= 1e-12:
        raise ZeroAsymmetry("state is phase symmetric; the bound is +inf")
    return 1.0 / (4.0 * skew)
