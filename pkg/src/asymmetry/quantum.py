"""Density operators, Kraus channels, twirling and symmetric channels."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    GroupMismatch,
    InvalidDilation,
    NotHermitian,
    NotPSD,
    TraceNotOne,
    ValidationError,
)
from .groups import FINITE, SU2, U1, FiniteGroup, GroupDensity, Representation, left_regular_representation

STATE_TOL = 1e-10
COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Construct through :func:`validate_state`; the constructor itself trusts its input.
    """

    matrix: np.ndarray
    label: str = ""

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_pure(self, tol: float = 1e-9) -> bool:
        return float(np.linalg.eigvalsh(self.matrix)[-1]) >= 1 - tol


def validate_state(M, label: str = "") -> DensityOperator:
    A = linalg.as_matrix(M, square=True)
    dev = np.abs(A - A.conj().T).max(initial=0.0)
    if dev > STATE_TOL:
        raise NotHermitian(f"state is not Hermitian (max deviation {dev:.3e})")
    A = 0.5 * (A + A.conj().T)
    w, V = np.linalg.eigh(A)
    if w[0] < -STATE_TOL:
        raise NotPSD(f"state has eigenvalue {w[0]:.3e} < 0")
    tr = float(w.sum())
    if abs(tr - 1.0) > STATE_TOL:
        raise TraceNotOne(f"state has trace {tr:.12g}")
    if w[0] < 0:
        A = (V * np.clip(w, 0.0, None)) @ V.conj().T
    return DensityOperator(A, label)


def as_state(rho) -> DensityOperator:
    return rho if isinstance(rho, DensityOperator) else validate_state(rho)


def pure_state(vec, label: str = "") -> DensityOperator:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    v = v / np.linalg.norm(v)
    return validate_state(np.outer(v, v.conj()), label)


def maximally_mixed(d: int) -> DensityOperator:
    return DensityOperator(np.eye(d, dtype=np.complex128) / d, "maximally-mixed")


def random_pure_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_state(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Reduced state of a random pure state on ``d x rank`` (``rank`` defaults to ``d``)."""
    r = d if rank is None else rank
    psi = random_pure_vector(d * r, rng).reshape(d, r)
    return validate_state(psi @ psi.conj().T)


def random_mixed_state(d: int, rng: np.random.Generator, deficient_fraction: float = 0.1) -> DensityOperator:
    """Mostly full-rank states with a fraction of rank-deficient ones mixed in."""
    if d > 1 and rng.random() < deficient_fraction:
        return random_state(d, rng, rank=int(rng.integers(1, d)))
    return random_state(d, rng)


# --------------------------------------------------------------------------
# channels


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple[np.ndarray, ...]
    input_dim: int
    output_dim: int
    label: str = ""

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.kraus)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.output_dim, self.input_dim):
                raise DimensionMismatch(
                    f"Kraus operator shape {k.shape} != ({self.output_dim}, {self.input_dim})"
                )
        object.__setattr__(self, "kraus", ops)
        dev = np.abs(sum(k.conj().T @ k for k in ops) - np.eye(self.input_dim)).max()
        if dev > COMPLETENESS_TOL:
            raise ValidationError(f"Kraus completeness violated by {dev:.3e}")

    @classmethod
    def from_kraus(cls, ops: Sequence, label: str = "") -> "KrausChannel":
        ops = [np.asarray(k, dtype=np.complex128) for k in ops]
        return cls(tuple(ops), ops[0].shape[1], ops[0].shape[0], label)

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.complex128)
        if X.shape != (self.input_dim, self.input_dim):
            raise DimensionMismatch(f"input shape {X.shape} does not match channel input dim {self.input_dim}")
        return sum(k @ X @ k.conj().T for k in self.kraus)

    def superoperator(self) -> np.ndarray:
        """Matrix acting on row-major vec(X): ``sum_k K (x) conj(K)``."""
        return sum(np.kron(k, k.conj()) for k in self.kraus)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=np.complex128),), d, d, "identity")


def unitary_channel(U) -> KrausChannel:
    U = np.asarray(U, dtype=np.complex128)
    return KrausChannel((U,), U.shape[1], U.shape[0], "unitary")


def dephasing_channel(d: int) -> KrausChannel:
    """Complete dephasing in the computational basis."""
    ops = []
    for i in range(d):
        P = np.zeros((d, d), dtype=np.complex128)
        P[i, i] = 1.0
        ops.append(P)
    return KrausChannel(tuple(ops), d, d, "dephasing")


def apply_channel(E: KrausChannel, rho) -> DensityOperator:
    rho = as_state(rho)
    if rho.dim != E.input_dim:
        raise DimensionMismatch(f"state dim {rho.dim} != channel input dim {E.input_dim}")
    return validate_state(E(rho.matrix))


# --------------------------------------------------------------------------
# twirling


def twirl_operator(X, R: Representation, p: GroupDensity) -> np.ndarray:
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (R.dim, R.dim):
        raise DimensionMismatch(f"operator shape {X.shape} does not match representation dim {R.dim}")
    out = np.zeros_like(X)
    for g, w in zip(p.elements, p.weights):
        if w == 0:
            continue
        U = R.unitary(g)
        out += w * (U @ X @ U.conj().T)
    return out


def twirl(rho, R: Representation, p: GroupDensity) -> DensityOperator:
    return validate_state(twirl_operator(as_state(rho).matrix, R, p))


def eigenspace_projectors(L, rel_tol: float = 1e-9) -> list[np.ndarray]:
    """Spectral projectors of ``L``; eigenvalues closer than ``rel_tol * range`` are merged."""
    w, V = linalg.hermitian_eig(L)
    span = max(float(w[-1] - w[0]), 1.0) if w.size else 1.0
    groups: list[list[int]] = [[0]]
    for i in range(1, w.size):
        if w[i] - w[groups[-1][-1]] > rel_tol * span:
            groups.append([i])
        else:
            groups[-1].append(i)
    return [V[:, g] @ V[:, g].conj().T for g in groups]


def dephasing_twirl_operator(X, L) -> np.ndarray:
    X = np.asarray(X, dtype=np.complex128)
    return sum(P @ X @ P for P in eigenspace_projectors(L))


def dephasing_twirl(rho, L) -> DensityOperator:
    """Exact twirl over the one-parameter group generated by ``L``."""
    return validate_state(dephasing_twirl_operator(as_state(rho).matrix, L))


def uniform_twirl_operator(X, R: Representation) -> np.ndarray:
    """Exact Haar/uniform twirl without quadrature."""
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (R.dim, R.dim):
        raise DimensionMismatch(f"operator shape {X.shape} does not match representation dim {R.dim}")
    if R.kind == FINITE:
        return sum(U @ X @ U.conj().T for U in R.matrices) / len(R.matrices)
    if R.kind == U1:
        return dephasing_twirl_operator(X, R.generators["n"])
    return R.project_to_commutant(X)


def uniform_twirl(rho, R: Representation) -> DensityOperator:
    return validate_state(uniform_twirl_operator(as_state(rho).matrix, R))


# --------------------------------------------------------------------------
# symmetric channels


def _check_elements(R: Representation, n_samples: int = 8) -> list:
    elems = R.elements_for_checks(np.random.default_rng(12345), n_samples)
    if R.is_lie:
        # finite rotations about each generator axis on top of the random sample
        for key in R.generators:
            if R.kind == U1:
                elems.append(0.7)
            else:
                axis = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[key]
                elems.append((axis, 0.7))
    return elems


def covariance_deviation(
    E: KrausChannel, R_in: Representation, R_out: Representation | None = None, elements=None
) -> float:
    """Largest entry of ``E(U X U^+) - V E(X) V^+`` over all matrix units ``X`` and checked ``g``.

    Linearity makes the matrix-unit sweep exhaustive over inputs.
    """
    R_out = R_in if R_out is None else R_out
    if E.input_dim != R_in.dim or E.output_dim != R_out.dim:
        raise DimensionMismatch(
            f"channel {E.input_dim}->{E.output_dim} vs representations {R_in.dim}->{R_out.dim}"
        )
    S = E.superoperator()
    elements = _check_elements(R_in) if elements is None else elements
    dev = 0.0
    for g in elements:
        U, V = R_in.unitary(g), R_out.unitary(g)
        lhs = S @ np.kron(U, U.conj())
        rhs = np.kron(V, V.conj()) @ S
        dev = max(dev, float(np.abs(lhs - rhs).max()))
    if R_in.is_lie and R_out.is_lie:
        # infinitesimal version: [S, ad_L] intertwines for every generator
        for key in R_in.generators:
            A, B = R_in.generators[key], R_out.generators[key]
            ad_in = np.kron(A, np.eye(R_in.dim)) - np.kron(np.eye(R_in.dim), A.conj())
            ad_out = np.kron(B, np.eye(R_out.dim)) - np.kron(np.eye(R_out.dim), B.conj())
            dev = max(dev, float(np.abs(S @ ad_in - ad_out @ S).max()))
    return dev


def is_symmetric_channel(
    E: KrausChannel, R: Representation, tol: float = 1e-9, R_out: Representation | None = None
) -> tuple[bool, float]:
    dev = covariance_deviation(E, R, R_out)
    return dev <= tol, dev


def random_commutant_hermitian(R: Representation, rng: np.random.Generator) -> np.ndarray:
    B = R.commutant_basis
    c = rng.standard_normal(B.shape[1]) + 1j * rng.standard_normal(B.shape[1])
    X = (B @ c).reshape(R.dim, R.dim)
    return 0.5 * (X + X.conj().T)


def random_symmetric_unitary(R: Representation, seed=None, scale: float = 1.0) -> np.ndarray:
    """``exp(i scale H)`` for a random Hermitian ``H`` commuting with every ``U(g)``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    H = random_commutant_hermitian(R, rng)
    return linalg.unitary_from_generator(H, -scale)


def commutes_with_rep(X, R: Representation, tol: float) -> float:
    dev = 0.0
    for C in R.constraint_operators:
        dev = max(dev, float(np.abs(X @ C - C @ X).max()))
    for g in _check_elements(R):
        U = R.unitary(g)
        dev = max(dev, float(np.abs(X @ U - U @ X).max()))
    return dev


@dataclass(frozen=True, eq=False)
class SymmetricDilation:
    system_rep: Representation
    ancilla_rep: Representation
    ancilla_state: DensityOperator
    unitary: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        from .groups import tensor_representation

        if self.system_rep.kind != self.ancilla_rep.kind:
            raise InvalidDilation("system and ancilla representations belong to different groups")
        if self.ancilla_state.dim != self.ancilla_rep.dim:
            raise InvalidDilation("ancilla state dimension does not match ancilla representation")
        d = self.system_rep.dim * self.ancilla_rep.dim
        V = np.asarray(self.unitary, dtype=np.complex128)
        if V.shape != (d, d) or np.abs(V.conj().T @ V - np.eye(d)).max() > self.tol:
            raise InvalidDilation("dilation unitary is not a unitary on system (x) ancilla")
        dev = commutes_with_rep(self.ancilla_state.matrix, self.ancilla_rep, self.tol)
        if dev > self.tol:
            raise InvalidDilation(f"ancilla state is not symmetric (deviation {dev:.3e})")
        joint = tensor_representation(self.system_rep, self.ancilla_rep)
        dev = commutes_with_rep(V, joint, self.tol)
        if dev > self.tol:
            raise InvalidDilation(f"dilation unitary is not symmetric (deviation {dev:.3e})")


def symmetric_dilation_channel(D: SymmetricDilation) -> KrausChannel:
    """``E(X) = tr_anc[V (X (x) sigma) V^+]`` in Kraus form."""
    ds, da = D.system_rep.dim, D.ancilla_rep.dim
    mu, B = np.linalg.eigh(D.ancilla_state.matrix)
    V4 = D.unitary.reshape(ds, da, ds, da)
    ops = []
    for j in range(da):
        if mu[j] <= 1e-15:
            continue
        # (I (x) <a_i|) V (I (x) |b_j>) for each output ancilla basis vector a_i
        Vb = np.einsum("sapb,b->sap", V4, B[:, j])
        for i in range(da):
            ops.append(np.sqrt(mu[j]) * Vb[:, i, :])
    return KrausChannel(tuple(ops), ds, ds, "symmetric-dilation")


@lru_cache(maxsize=32)
def joint_representation(system_rep: Representation, ancilla_rep: Representation) -> Representation:
    """Cached ``system (x) ancilla`` so its commutant basis is computed once."""
    from .groups import tensor_representation

    return tensor_representation(system_rep, ancilla_rep)


def random_symmetric_dilation(
    system_rep: Representation, ancilla_rep: Representation, rng: np.random.Generator, scale: float = 1.0
) -> SymmetricDilation:
    sigma = validate_state(uniform_twirl_operator(random_mixed_state(ancilla_rep.dim, rng).matrix, ancilla_rep))
    V = random_symmetric_unitary(joint_representation(system_rep, ancilla_rep), rng, scale)
    return SymmetricDilation(system_rep, ancilla_rep, sigma, V, tol=1e-8)


def random_symmetric_channel(
    system_rep: Representation, ancilla_rep: Representation, rng: np.random.Generator, scale: float = 1.0
) -> KrausChannel:
    return symmetric_dilation_channel(random_symmetric_dilation(system_rep, ancilla_rep, rng, scale))


def encoder_channel(
    G: FiniteGroup, R_reg: Representation, T: Representation, rho_target
) -> KrausChannel:
    """Measure in the group-element basis and prepare ``T(g) rho T(g)^+``.

    Normalized without a ``1/|G|`` factor so the map is trace preserving and sends
    ``|e><e|`` to ``rho_target`` exactly.
    """
    rho_target = as_state(rho_target)
    if R_reg.kind != FINITE or T.kind != FINITE:
        raise GroupMismatch("encoder channel needs finite-group representations")
    ref = left_regular_representation(G)
    if R_reg.dim != G.order or any(np.abs(a - b).max() > 1e-12 for a, b in zip(R_reg.matrices, ref.matrices)):
        raise GroupMismatch("R_reg is not the left regular representation of G")
    if not np.array_equal(T.group.table, G.table):
        raise GroupMismatch("target representation belongs to a different group")
    if rho_target.dim != T.dim:
        raise DimensionMismatch("target state dimension does not match target representation")
    lam, W = np.linalg.eigh(rho_target.matrix)
    ops = []
    for g in range(G.order):
        bra = np.zeros((1, G.order), dtype=np.complex128)
        bra[0, g] = 1.0
        for k in range(T.dim):
            if lam[k] <= 1e-15:
                continue
            ket = T.matrices[g] @ W[:, k : k + 1]
            ops.append(np.sqrt(lam[k]) * ket @ bra)
    return KrausChannel(tuple(ops), G.order, T.dim, "encoder")


# --------------------------------------------------------------------------
# serialization


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(rows) -> np.ndarray:
    try:
        A = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix is not a nested array of [re, im] pairs: {exc}") from exc
    if A.ndim != 3 or A.shape[2] != 2:
        raise ValidationError(f"matrix must have shape (rows, cols, 2), got {A.shape}")
    return A[..., 0] + 1j * A[..., 1]


def state_to_dict(rho: DensityOperator) -> dict[str, Any]:
    doc = {"dim": rho.dim, "matrix": matrix_to_json(rho.matrix)}
    if rho.label:
        doc["label"] = rho.label
    return doc


def state_from_dict(doc: dict[str, Any]) -> DensityOperator:
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise ValidationError("state document needs a 'matrix' field")
    M = matrix_from_json(doc["matrix"])
    if "dim" in doc and M.shape != (int(doc["dim"]), int(doc["dim"])):
        raise DimensionMismatch(f"declared dim {doc['dim']} but matrix has shape {M.shape[:2]}")
    return validate_state(M, str(doc.get("label", "")))


def channel_to_dict(E: KrausChannel) -> dict[str, Any]:
    return {
        "input_dim": E.input_dim,
        "output_dim": E.output_dim,
        "kraus": [matrix_to_json(k) for k in E.kraus],
    }


def channel_from_dict(doc: dict[str, Any]) -> KrausChannel:
    try:
        din, dout = int(doc["input_dim"]), int(doc["output_dim"])
        ops = tuple(matrix_from_json(k) for k in doc["kraus"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed channel document: {exc}") from exc
    return KrausChannel(ops, din, dout)
