import numpy as np
import pytest

from asymmetry import experiments, groups, linalg, quantum
from asymmetry.errors import (
    DimensionMismatch,
    GroupMismatch,
    InvalidDilation,
    NotHermitian,
    NotPSD,
    TraceNotOne,
    ValidationError,
)

from conftest import PAULI_X, random_matrix

PLUS_X = np.array([1, 1]) / np.sqrt(2)


def random_channel(din, dout, rng, n_kraus=3):
    # isometry from Ginibre, split into Kraus blocks
    n_kraus = max(n_kraus, -(-din // dout))
    Z = random_matrix(dout * n_kraus, rng, din)
    Q, _ = np.linalg.qr(Z)
    return quantum.KrausChannel(tuple(Q[k * dout:(k + 1) * dout] for k in range(n_kraus)), din, dout)


def test_validate_state():
    assert quantum.validate_state(np.eye(2) / 2).dim == 2
    with pytest.raises(NotPSD):
        quantum.validate_state(np.diag([2.0, -1.0]))
    with pytest.raises(NotHermitian):
        quantum.validate_state(np.array([[0.5, 0.5], [0, 0.5]]))
    with pytest.raises(TraceNotOne):
        quantum.validate_state(np.eye(2))
    assert quantum.pure_state(PLUS_X).is_pure()
    clipped = quantum.validate_state(np.diag([1.0 + 5e-11, -5e-11]))
    assert np.linalg.eigvalsh(clipped.matrix).min() >= 0


def test_kraus_completeness_enforced():
    with pytest.raises(ValidationError):
        quantum.KrausChannel((np.eye(2) * 0.9,), 2, 2)
    with pytest.raises(DimensionMismatch):
        quantum.KrausChannel((np.eye(2),), 3, 2)


def test_apply_channel_examples(rng):
    rho = quantum.random_state(3, rng)
    assert np.abs(quantum.apply_channel(quantum.identity_channel(3), rho).matrix - rho.matrix).max() < 1e-15
    out = quantum.apply_channel(quantum.dephasing_channel(2), quantum.pure_state(PLUS_X))
    assert np.abs(out.matrix - np.eye(2) / 2).max() < 1e-15
    with pytest.raises(DimensionMismatch):
        quantum.apply_channel(quantum.identity_channel(2), rho)


def test_apply_channel_preserves_trace_and_positivity(rng):
    for _ in range(200):
        din, dout = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        E = random_channel(din, dout, rng, int(rng.integers(1, 4)))
        out = E(quantum.random_state(din, rng).matrix)
        assert abs(np.trace(out) - 1) < 1e-9
        assert np.linalg.eigvalsh(0.5 * (out + out.conj().T)).min() > -1e-9


def test_twirl_examples():
    G = groups.cyclic_group(2)
    R = groups.left_regular_representation(G)
    out = quantum.twirl(np.diag([1.0, 0.0]), R, groups.uniform_density(R))
    # (|0><0| + X|0><0|X) / 2
    assert np.abs(out.matrix - np.eye(2) / 2).max() < 1e-15
    sym = quantum.validate_state(np.eye(2) / 2)
    p = groups.GroupDensity((0, 1), np.array([0.3, 0.7]))
    assert np.abs(quantum.twirl(sym, R, p).matrix - sym.matrix).max() < 1e-15


def test_spin_example_sigma_twirls_to_maximally_mixed():
    rho, sigma = experiments.spin_example_states()
    R = experiments.spin_example_rep()
    p = groups.subgroup_density_z_axis(R)
    assert np.abs(quantum.twirl(sigma, R, p).matrix - np.eye(4) / 4).max() < 1e-12
    assert np.abs(quantum.twirl(rho, R, p).matrix - rho.matrix).max() < 1e-12


def test_dephasing_twirl(rng):
    Lz = PAULI_X * 0 + np.diag([0.5, -0.5])
    out = quantum.dephasing_twirl(quantum.pure_state(PLUS_X), Lz)
    assert np.abs(out.matrix - np.eye(2) / 2).max() < 1e-15
    L = np.diag([0.0, 1.0, 1.0, 3.0]).astype(complex)
    U = linalg.random_unitary(4, rng)
    L = U @ L @ U.conj().T  # degenerate spectrum in a random basis
    for _ in range(20):
        rho = quantum.random_state(4, rng)
        out = quantum.dephasing_twirl(rho, L).matrix
        assert np.abs(out @ L - L @ out).max() < 1e-10
    N = groups.u1_number_representation([0, 1, 1, 3])
    rho = quantum.random_state(4, rng)
    p = groups.uniform_density(N)  # minimal exact grid
    exact = quantum.dephasing_twirl(rho, N.generators["n"]).matrix
    assert np.abs(quantum.twirl(rho, N, p).matrix - exact).max() < 1e-12
    with pytest.raises(NotHermitian):
        quantum.dephasing_twirl(rho, np.triu(np.ones((4, 4))))


@pytest.mark.parametrize("name", ["z8", "u1", "su2"])
def test_uniform_twirl_idempotent_and_symmetric(name, rng):
    R = experiments.group_instance(name).system
    for _ in range(10):
        rho = quantum.random_state(R.dim, rng)
        t = quantum.uniform_twirl(rho, R).matrix
        assert np.abs(quantum.uniform_twirl(t, R).matrix - t).max() < 1e-9
        for g in R.elements_for_checks(rng, 8):
            U = R.unitary(g)
            assert np.abs(U @ t @ U.conj().T - t).max() < 1e-9


def test_is_symmetric_channel_examples():
    spin1 = groups.spin_j_representation(1)
    twirl_kraus = []
    # uniform twirl over the z-rotation subgroup as a channel
    p = groups.subgroup_density_z_axis(spin1)
    U1 = groups.u1_number_representation([1, 0, -1])
    Kraus = tuple(np.sqrt(w) * U1.unitary(g[1]) for g, w in zip(p.elements, p.weights))
    E = quantum.KrausChannel(Kraus, 3, 3)
    ok, dev = quantum.is_symmetric_channel(E, U1)
    assert ok and dev < 1e-9
    ok, _ = quantum.is_symmetric_channel(quantum.identity_channel(3), spin1)
    assert ok
    Rz = quantum.unitary_channel(spin1.unitary(((0, 0, 1), 0.9)))
    ok, dev = quantum.is_symmetric_channel(Rz, spin1)
    assert not ok and dev > 0.1
    with pytest.raises(DimensionMismatch):
        quantum.is_symmetric_channel(quantum.identity_channel(2), spin1)


def test_finite_twirl_channel_is_symmetric():
    G = groups.cyclic_group(5)
    R = groups.left_regular_representation(G)
    E = quantum.KrausChannel(tuple(U / np.sqrt(5) for U in R.matrices), 5, 5)
    ok, dev = quantum.is_symmetric_channel(E, R)
    assert ok and dev < 1e-9


def test_random_symmetric_unitary():
    triv = groups.trivial_representation(groups.U1, 3)
    V = quantum.random_symmetric_unitary(triv, 1)
    assert np.abs(V.conj().T @ V - np.eye(3)).max() < 1e-10
    assert np.abs(V - np.diag(np.diag(V))).max() > 1e-3  # generic, not constrained
    irrep = groups.spin_j_representation(1.5)
    assert irrep.commutant_basis.shape[1] == 1
    V = quantum.random_symmetric_unitary(irrep, 2)
    assert np.abs(V - V[0, 0] * np.eye(4)).max() < 1e-10 and abs(abs(V[0, 0]) - 1) < 1e-10
    for name in ("z8", "u1", "su2"):
        R = experiments.group_instance(name).joint
        V = quantum.random_symmetric_unitary(R, 3)
        assert quantum.commutes_with_rep(V, R, 1e-9) < 1e-9


def test_commutant_dimensions():
    # Z_8 regular: commutant is the right regular algebra, dimension 8
    assert experiments.group_instance("z8").system.commutant_basis.shape[1] == 8
    # spin-1/2 (x) spin-1/2 = spin 0 + spin 1
    assert experiments.group_instance("su2").system.commutant_basis.shape[1] == 2
    # U(1) nondegenerate spectrum: diagonal matrices
    assert experiments.group_instance("u1").system.commutant_basis.shape[1] == 4


def test_dilation_identity():
    half = groups.spin_j_representation(0.5)
    D = quantum.SymmetricDilation(half, half, quantum.maximally_mixed(2), np.eye(4))
    E = quantum.symmetric_dilation_channel(D)
    assert np.abs(E.superoperator() - np.eye(4)).max() < 1e-12


def test_dilation_validation():
    half = groups.spin_j_representation(0.5)
    with pytest.raises(InvalidDilation):
        quantum.SymmetricDilation(half, half, quantum.pure_state([1, 0]), np.eye(4))
    with pytest.raises(InvalidDilation):
        swapish = np.kron(half.unitary(((1, 0, 0), 0.4)), np.eye(2))
        quantum.SymmetricDilation(half, half, quantum.maximally_mixed(2), swapish)


@pytest.mark.parametrize("system,ancilla", [
    ("regular:5", "z_n:5"),
    ("u1:0,1,2", "u1:0,1"),
    ("su2:0.5", "su2:1"),
    ("tensor:su2:0.5*su2:1", "su2:0.5"),
    ("su2:1.5", "su2:0.5"),
])
def test_dilation_channels_are_symmetric(system, ancilla, rng):
    from asymmetry.cli import parse_group

    Rs, Ra = parse_group(system), parse_group(ancilla)
    for _ in range(50):
        E = quantum.random_symmetric_channel(Rs, Ra, rng)
        assert np.abs(sum(k.conj().T @ k for k in E.kraus) - np.eye(Rs.dim)).max() < 1e-9
        ok, dev = quantum.is_symmetric_channel(E, Rs, 1e-8)
        assert ok, dev


def test_encoder_channel():
    G = groups.cyclic_group(8)
    R = groups.left_regular_representation(G)
    T = groups.cyclic_generator_representation(G, groups.spin_j_representation(1).generators["z"])
    rng = np.random.default_rng(5)
    target = quantum.random_state(3, rng)
    E = quantum.encoder_channel(G, R, T, target)
    basis = np.eye(8)
    assert np.abs(E(np.outer(basis[0], basis[0])) - target.matrix).max() < 1e-10
    for g in range(8):
        expected = T.unitary(g) @ target.matrix @ T.unitary(g).conj().T
        assert np.abs(E(np.outer(basis[g], basis[g])) - expected).max() < 1e-10
    ok, dev = quantum.is_symmetric_channel(E, R, 1e-9, R_out=T)
    assert ok, dev
    # covariance at the operator level: E(G(X)) = G(E(X))
    for _ in range(10):
        X = random_matrix(8, rng)
        lhs = E(quantum.uniform_twirl_operator(X, R))
        rhs = quantum.uniform_twirl_operator(E(X), T)
        assert np.abs(lhs - rhs).max() < 1e-9
    with pytest.raises(GroupMismatch):
        quantum.encoder_channel(G, groups.right_regular_representation(groups.cyclic_group(3)), T, target)


def test_serialization_roundtrip(rng):
    rho = quantum.random_state(3, rng)
    assert np.abs(quantum.state_from_dict(quantum.state_to_dict(rho)).matrix - rho.matrix).max() == 0
    E = random_channel(2, 3, rng)
    E2 = quantum.channel_from_dict(quantum.channel_to_dict(E))
    assert np.abs(E2.superoperator() - E.superoperator()).max() == 0
    with pytest.raises(ValidationError):
        quantum.state_from_dict({"dim": 2, "matrix": [[1, 0], [0, 0]]})
    with pytest.raises(ValidationError):
        quantum.channel_from_dict({"input_dim": 2})
