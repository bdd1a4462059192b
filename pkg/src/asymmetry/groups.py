"""Finite groups, unitary representations and normalized densities over groups.

Three kinds of representation are supported:

``finite``
    Elements are integer indices into a :class:`FiniteGroup` multiplication table.
``u1``
    Elements are phases ``phi``; ``U(phi) = exp(i phi N)`` for a number operator ``N``.
``su2``
    Elements are ``(axis, theta)`` pairs; ``U = exp(-i theta J.n)``. Integer-spin
    representations are the SO(3) ones, half-integer ones are genuine SU(2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Sequence

import numpy as np

from . import linalg
from .errors import GroupMismatch, InvalidGroup, InvalidSpin, ValidationError

FINITE, U1, SU2 = "finite", "u1", "su2"


# --------------------------------------------------------------------------
# finite groups


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    labels: tuple[str, ...]
    identity: int = 0

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        validate_table(t, self.labels, self.identity)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == self.identity, axis=1)

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    @cached_property
    def generating_set(self) -> tuple[int, ...]:
        """A small set of elements generating the group, chosen greedily."""
        gens: list[int] = []
        span = {self.identity}
        for g in range(self.order):
            if g in span:
                continue
            gens.append(g)
            span = self._closure(gens)
            if len(span) == self.order:
                break
        return tuple(gens)

    def _closure(self, gens: Sequence[int]) -> set[int]:
        span = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = int(self.table[a, g])
                    if b not in span:
                        span.add(b)
                        new.append(b)
            frontier = new
        return span

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "labels": list(self.labels),
            "table": self.table.tolist(),
            "identity": self.identity,
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "FiniteGroup":
        try:
            order = int(doc["order"])
            table = np.asarray(doc["table"], dtype=np.int64)
            labels = doc.get("labels") or [str(i) for i in range(order)]
            identity = int(doc.get("identity", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGroup(f"malformed group document: {exc}") from exc
        if table.shape != (order, order):
            raise InvalidGroup(f"table shape {table.shape} does not match order {order}")
        return cls(table, tuple(labels), identity)

    @classmethod
    def from_json(cls, text: str) -> "FiniteGroup":
        return cls.from_dict(json.loads(text))


def validate_table(table: np.ndarray, labels: Sequence[str], identity: int) -> None:
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
        raise InvalidGroup(f"multiplication table must be square, got {table.shape}")
    n = table.shape[0]
    if len(labels) != n:
        raise InvalidGroup(f"{len(labels)} labels for a group of order {n}")
    if not 0 <= identity < n:
        raise InvalidGroup(f"identity index {identity} out of range")
    if table.min() < 0 or table.max() >= n:
        raise InvalidGroup("table entries out of range")
    expected = np.arange(n)
    for axis in (0, 1):
        if not np.all(np.sort(table, axis=axis) == (expected[:, None] if axis == 0 else expected)):
            raise InvalidGroup("table is not a Latin square")
    if not (np.array_equal(table[identity], expected) and np.array_equal(table[:, identity], expected)):
        raise InvalidGroup("identity element does not act trivially")
    # (ab)c == a(bc), exhaustively
    lhs = table[table[:, :, None], np.arange(n)[None, None, :]]
    rhs = table[np.arange(n)[:, None, None], table[None, :, :]]
    if not np.array_equal(lhs, rhs):
        raise InvalidGroup("table is not associative")


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidGroup("cyclic group order must be positive")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, tuple(str(i) for i in range(n)), 0)


# --------------------------------------------------------------------------
# representations


@dataclass(frozen=True, eq=False)
class Representation:
    kind: str
    dim: int
    group: FiniteGroup | None = None
    matrices: tuple[np.ndarray, ...] = ()
    generators: dict[str, np.ndarray] = field(default_factory=dict)
    label: str = ""

    # -- element map -------------------------------------------------------

    def unitary(self, g) -> np.ndarray:
        if self.kind == FINITE:
            return self.matrices[int(g)]
        if self.kind == U1:
            return linalg.unitary_from_generator(self.generators["n"], -float(g))
        axis, theta = g
        return linalg.unitary_from_generator(self.axis_generator(axis), float(theta))

    def axis_generator(self, axis) -> np.ndarray:
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        return n[0] * self.generators["x"] + n[1] * self.generators["y"] + n[2] * self.generators["z"]

    @property
    def identity(self):
        if self.kind == FINITE:
            return self.group.identity
        if self.kind == U1:
            return 0.0
        return ((0.0, 0.0, 1.0), 0.0)

    def compose(self, g, h):
        """The element ``gh``."""
        if self.kind == FINITE:
            return self.group.mul(g, h)
        if self.kind == U1:
            return float(g) + float(h)
        return su2_from_matrix(su2_matrix(g) @ su2_matrix(h))

    def inverse(self, g):
        if self.kind == FINITE:
            return self.group.inverse(g)
        if self.kind == U1:
            return -float(g)
        axis, theta = g
        return (tuple(axis), -float(theta))

    def elements_for_checks(self, rng: np.random.Generator | None = None, n: int = 16) -> list:
        """All elements of a finite group, otherwise ``n`` sampled elements."""
        if self.kind == FINITE:
            return list(range(self.group.order))
        rng = rng if rng is not None else np.random.default_rng(0)
        return [self.random_element(rng) for _ in range(n)]

    def random_element(self, rng: np.random.Generator):
        if self.kind == FINITE:
            return int(rng.integers(self.group.order))
        if self.kind == U1:
            return float(rng.uniform(0, 2 * np.pi))
        v = rng.standard_normal(3)
        return (tuple(v / np.linalg.norm(v)), float(rng.uniform(0, 4 * np.pi)))

    # -- structure ---------------------------------------------------------

    @property
    def is_lie(self) -> bool:
        return self.kind in (U1, SU2)

    @property
    def constraint_operators(self) -> list[np.ndarray]:
        """Operators whose joint commutant is the commutant of the representation."""
        if self.kind == FINITE:
            return [self.matrices[g] for g in self.group.generating_set]
        return list(self.generators.values())

    @cached_property
    def commutant_basis(self) -> np.ndarray:
        """Hilbert-Schmidt orthonormal basis of the commutant, as columns of vec(X).

        Row-major vectorization: ``vec(X C - C X) = (I (x) C^T - C (x) I) vec(X)``.
        """
        d = self.dim
        eye = np.eye(d)
        gram = np.zeros((d * d, d * d), dtype=np.complex128)
        for C in self.constraint_operators:
            ad = np.kron(eye, C.T) - np.kron(C, eye)
            gram += ad.conj().T @ ad
        w, V = np.linalg.eigh(gram)
        cutoff = 1e-8 * max(1.0, float(w[-1]) if w.size else 1.0)
        return V[:, w < cutoff]

    def project_to_commutant(self, X) -> np.ndarray:
        """Exact uniform twirl, as the orthogonal projection onto the commutant."""
        B = self.commutant_basis
        v = np.asarray(X, dtype=np.complex128).reshape(-1)
        return (B @ (B.conj().T @ v)).reshape(self.dim, self.dim)

    @property
    def spread(self) -> float:
        """Largest eigenvalue gap of the phase generator (``N`` or ``J_z``)."""
        key = "n" if self.kind == U1 else "z"
        w = np.linalg.eigvalsh(self.generators[key])
        return float(w[-1] - w[0])


def _finite_rep(G: FiniteGroup, matrices, label: str) -> Representation:
    return Representation(FINITE, matrices[0].shape[0], G, tuple(matrices), {}, label)


def left_regular_representation(G: FiniteGroup) -> Representation:
    n = G.order
    mats = []
    for g in range(n):
        U = np.zeros((n, n), dtype=np.complex128)
        U[G.table[g, :], np.arange(n)] = 1.0  # |h> -> |gh>
        mats.append(U)
    return _finite_rep(G, mats, f"left-regular({n})")


def right_regular_representation(G: FiniteGroup) -> Representation:
    n = G.order
    mats = []
    for g in range(n):
        U = np.zeros((n, n), dtype=np.complex128)
        U[G.table[:, G.inverse(g)], np.arange(n)] = 1.0  # |h> -> |h g^-1>
        mats.append(U)
    return _finite_rep(G, mats, f"right-regular({n})")


def cyclic_generator_representation(G: FiniteGroup, L) -> Representation:
    """Representation of ``Z_n`` with ``U(k) = exp(-2 pi i k L / n)``.

    Used for phase representations of a cyclic group and for restricting a Lie
    representation to the cyclic subgroup of rotations about one axis.
    """
    n = G.order
    if not np.array_equal(G.table, cyclic_group(n).table):
        raise GroupMismatch("cyclic_generator_representation needs the cyclic group table")
    L = linalg.check_hermitian(L)
    mats = [linalg.unitary_from_generator(L, 2 * np.pi * k / n) for k in range(n)]
    top = linalg.unitary_from_generator(L, 2 * np.pi)
    if np.abs(top - np.eye(L.shape[0])).max() > 1e-9:
        raise ValidationError("exp(-2 pi i L) != I, so this is not a representation of Z_n")
    return _finite_rep(G, mats, f"cyclic-phase({n})")


def charge_operator(R: Representation) -> np.ndarray:
    """Hermitian ``L`` with spectrum in ``0..n-1`` and ``U(k) = exp(-2 pi i k L / n)`` on ``Z_n``.

    Built from the exact eigenprojectors ``P_q = (1/n) sum_k w^(qk) U(k)``, ``w = exp(2 pi i / n)``.
    """
    if R.kind != FINITE or not np.array_equal(R.group.table, cyclic_group(R.group.order).table):
        raise GroupMismatch("charge_operator needs a representation of the cyclic group table")
    n = R.group.order
    L = np.zeros((R.dim, R.dim), dtype=np.complex128)
    for q in range(1, n):
        L += q * sum(np.exp(2j * np.pi * q * k / n) * R.matrices[k] for k in range(n)) / n
    return (L + L.conj().T) / 2


def spin_operators(j: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    twoj = 2 * j
    if twoj < 0 or abs(twoj - round(twoj)) > 1e-12:
        raise InvalidSpin(f"spin must be a nonnegative half-integer, got {j}")
    j = round(twoj) / 2
    m = j - np.arange(int(round(twoj)) + 1)  # j, j-1, ..., -j
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(np.complex128)
    jx = 0.5 * (jp + jp.conj().T)
    jy = -0.5j * (jp - jp.conj().T)
    jz = np.diag(m).astype(np.complex128)
    return jx, jy, jz


def spin_j_representation(j: float) -> Representation:
    jx, jy, jz = spin_operators(j)
    return Representation(SU2, jz.shape[0], None, (), {"x": jx, "y": jy, "z": jz}, f"spin-{j:g}")


def u1_number_representation(spectrum: Sequence[int]) -> Representation:
    spectrum = [int(s) for s in spectrum]
    if not spectrum:
        raise ValidationError("spectrum must be nonempty")
    N = np.diag(np.asarray(spectrum, dtype=float)).astype(np.complex128)
    return Representation(U1, len(spectrum), None, (), {"n": N}, f"u1{tuple(spectrum)}")


def trivial_representation(kind: str, dim: int, group: FiniteGroup | None = None) -> Representation:
    if kind == FINITE:
        return _finite_rep(group, [np.eye(dim, dtype=np.complex128)] * group.order, f"trivial({dim})")
    Z = np.zeros((dim, dim), dtype=np.complex128)
    gens = {"n": Z} if kind == U1 else {"x": Z, "y": Z, "z": Z}
    return Representation(kind, dim, None, (), gens, f"trivial({dim})")


def tensor_representation(R1: Representation, R2: Representation) -> Representation:
    if R1.kind != R2.kind:
        raise GroupMismatch(f"cannot tensor a {R1.kind} rep with a {R2.kind} rep")
    label = f"{R1.label}*{R2.label}"
    if R1.kind == FINITE:
        if R1.group is not R2.group and not np.array_equal(R1.group.table, R2.group.table):
            raise GroupMismatch("finite representations of different groups")
        mats = [np.kron(a, b) for a, b in zip(R1.matrices, R2.matrices)]
        return _finite_rep(R1.group, mats, label)
    I1, I2 = np.eye(R1.dim), np.eye(R2.dim)
    gens = {k: np.kron(R1.generators[k], I2) + np.kron(I1, R2.generators[k]) for k in R1.generators}
    return Representation(R1.kind, R1.dim * R2.dim, None, (), gens, label)


# --------------------------------------------------------------------------
# SU(2) element helpers

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def su2_matrix(g) -> np.ndarray:
    axis, theta = g
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * sum(c * p for c, p in zip(n, _PAULI))


def su2_from_matrix(u: np.ndarray):
    """Axis-angle pair ``(axis, theta)`` with ``theta`` in ``[0, 4 pi)``."""
    c = float(np.real(np.trace(u)) / 2)
    v = np.array([float(np.imag(np.trace(u @ p))) / -2 for p in _PAULI])  # = sin(theta/2) n
    s = float(np.linalg.norm(v))
    if s < 1e-14:
        return ((0.0, 0.0, 1.0), 0.0 if c > 0 else 2 * np.pi)
    theta = 2 * np.arctan2(s, c)
    return (tuple(v / s), float(theta))


def euler_element(alpha: float, beta: float, gamma: float):
    """``exp(-i alpha J_z) exp(-i beta J_y) exp(-i gamma J_z)`` as an axis-angle pair."""
    z = su2_matrix(((0, 0, 1), alpha))
    y = su2_matrix(((0, 1, 0), beta))
    z2 = su2_matrix(((0, 0, 1), gamma))
    return su2_from_matrix(z @ y @ z2)


# --------------------------------------------------------------------------
# densities


@dataclass(frozen=True, eq=False)
class GroupDensity:
    elements: tuple
    weights: np.ndarray
    label: str = ""
    exact: bool = True

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if len(self.elements) != w.size:
            raise ValidationError("one weight per support element required")
        if np.any(w < 0):
            raise ValidationError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValidationError(f"weights sum to {w.sum():.15g}, not 1")


def minimal_phase_grid(spread: float) -> int:
    """Smallest M such that an M-point phase grid averages every e^{i phi k}, |k| <= spread, exactly."""
    return int(np.floor(spread + 1e-9)) + 1


def _phase_grid(M: int) -> np.ndarray:
    return 2 * np.pi * np.arange(M) / M


def uniform_density(R: Representation, resolution: int = 1) -> GroupDensity:
    """Uniform (Haar) density.

    Finite groups get exact weights ``1/|G|``. For U(1) the grid size is raised to the
    minimal exact size when ``resolution`` is too small. SU(2) uses a product rule:
    uniform grids in the two ``J_z`` Euler angles and Gauss-Legendre nodes in ``cos(beta)``.
    """
    if R.kind == FINITE:
        n = R.group.order
        return GroupDensity(tuple(range(n)), np.full(n, 1.0 / n), "uniform")
    M = max(int(resolution), minimal_phase_grid(R.spread))
    if R.kind == U1:
        return GroupDensity(tuple(float(p) for p in _phase_grid(M)), np.full(M, 1.0 / M), f"uniform:{M}")
    nb = max(int(resolution), minimal_phase_grid(R.spread) + 1)
    x, wb = np.polynomial.legendre.leggauss(nb)
    elements, weights = [], []
    for a, (cb, w), c in product(_phase_grid(M), zip(x, wb), _phase_grid(M)):
        elements.append(euler_element(a, float(np.arccos(cb)), c))
        weights.append(w / 2 / M / M)
    weights = np.asarray(weights)
    return GroupDensity(tuple(elements), weights / weights.sum(), f"haar-euler:{M}x{nb}x{M}")


def subgroup_density_z_axis(R: Representation, resolution: int = 1) -> GroupDensity:
    """Uniform density over rotations about the z axis, zero elsewhere."""
    if R.kind != SU2:
        raise GroupMismatch("z-axis density needs an SU(2) representation")
    M = max(int(resolution), minimal_phase_grid(R.spread))
    elements = tuple(((0.0, 0.0, 1.0), float(t)) for t in _phase_grid(M))
    return GroupDensity(elements, np.full(M, 1.0 / M), f"z-axis:{M}")


def point_density(g) -> GroupDensity:
    return GroupDensity((g,), np.ones(1), "point")
