"""Scripted numerical demonstrations, each producing a pass/fail report."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from . import groups, linalg, measures, quantum
from .errors import NotPure, UnknownInstance, ValidationError
from .groups import FINITE, SU2, U1, Representation


def round12(x):
    """Round floats to 12 significant digits for reports; ``inf`` becomes a string."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        if np.isnan(x):
            return "nan"
        return float(f"{x:.12g}")
    if isinstance(x, complex):
        return [round12(x.real), round12(x.imag)]
    if isinstance(x, dict):
        return {k: round12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round12(v) for v in x]
    if isinstance(x, np.ndarray):
        return round12(x.tolist())
    return x


@dataclass
class Check:
    description: str
    expected: Any
    actual: Any
    tolerance: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return round12(
            {
                "description": self.description,
                "expected": self.expected,
                "actual": self.actual,
                "tolerance": self.tolerance,
                "passed": self.passed,
            }
        )


@dataclass
class ExperimentReport:
    name: str
    seed: int | None = None
    checks: list[Check] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, description: str, expected, actual, tolerance: float, passed: bool | None = None) -> Check:
        if passed is None:
            passed = bool(np.all(np.abs(np.asarray(actual) - np.asarray(expected)) <= tolerance))
        c = Check(description, expected, actual, tolerance, bool(passed))
        self.checks.append(c)
        return c

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.name,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "values": round12(self.values),
        }


# --------------------------------------------------------------------------
# spin-1/2 (x) Q example


def spin_example_states() -> tuple[quantum.DensityOperator, quantum.DensityOperator]:
    s = 1 / np.sqrt(2)
    up, dn = np.array([1, 0]), np.array([0, 1])
    px, mx = np.array([s, s]), np.array([s, -s])
    q1, q2 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])

    def mix(a, b):
        return 0.5 * np.kron(np.outer(a, a.conj()), q1) + 0.5 * np.kron(np.outer(b, b.conj()), q2)

    return quantum.validate_state(mix(up, dn), "rho"), quantum.validate_state(mix(px, mx), "sigma")


def spin_example_rep() -> Representation:
    return groups.tensor_representation(groups.spin_j_representation(0.5), groups.trivial_representation(SU2, 2))


def spin_example_report() -> ExperimentReport:
    rep = ExperimentReport("spin-example")
    rho, sigma = spin_example_states()
    R = spin_example_rep()

    for axis in "xyz":
        L = R.generators[axis]
        diff = measures.noether_moments(rho, L, 4) - measures.noether_moments(sigma, L, 4)
        rep.check(f"Noether moments k=1..4 agree for J_{axis} (x) I", [0.0] * 4, diff, 1e-10)

    p = groups.subgroup_density_z_axis(R)
    g_rho, g_sigma = measures.holevo_asymmetry(rho, R, p), measures.holevo_asymmetry(sigma, R, p)
    rep.check("Holevo asymmetry (z-axis density) of rho", 0.0, g_rho, 1e-9)
    rep.check("Holevo asymmetry (z-axis density) of sigma", 1.0, g_sigma, 1e-9)

    Lz = R.generators["z"]
    f_rho, f_sigma = measures.commutator_asymmetry(rho, Lz), measures.commutator_asymmetry(sigma, Lz)
    rep.check("commutator asymmetry for J_z (x) I of rho", 0.0, f_rho, 1e-9)
    rep.check("commutator asymmetry for J_z (x) I of sigma", 1.0, f_sigma, 1e-9)

    # rotation about y by pi/2 on the spin factor only
    U = np.kron(linalg.unitary_from_generator(groups.spin_operators(0.5)[1], np.pi / 2), np.eye(2))
    dist = linalg.trace_norm(U @ rho.matrix @ U.conj().T - sigma.matrix)
    rep.check("non-symmetric y rotation by pi/2 maps rho to sigma", 0.0, dist, 1e-10)
    ok, dev = quantum.is_symmetric_channel(quantum.unitary_channel(U), R)
    rep.check("that rotation is not rotationally symmetric", "not symmetric", dev, 1e-9, passed=not ok)

    rep.values.update(holevo_rho=g_rho, holevo_sigma=g_sigma, commutator_rho=f_rho, commutator_sigma=f_sigma)
    return rep


# --------------------------------------------------------------------------
# characteristic-function triviality


def triviality_demo(n: int, seed: int = 0) -> ExperimentReport:
    if not 2 <= n <= 12:
        raise ValidationError("triviality_demo needs 2 <= n <= 12")
    rep = ExperimentReport(f"triviality:{n}", seed)
    rng = np.random.default_rng(seed)
    G = groups.cyclic_group(n)
    R = groups.left_regular_representation(G)
    e = np.zeros(n)
    e[G.identity] = 1.0
    e_state = quantum.pure_state(e, "|e><e|")
    twirled = quantum.uniform_twirl(e_state, R)

    elements = list(range(n))
    chi_e = measures.characteristic_function(e_state, R, elements)
    chi_t = measures.characteristic_function(twirled, R, elements)
    rep.check("characteristic functions of |e><e| and its twirl agree", 0.0, float(np.abs(chi_e - chi_t).max()), 1e-10)

    gamma_e = measures.holevo_asymmetry(e_state, R)
    gamma_t = measures.holevo_asymmetry(twirled, R)
    rep.check("Holevo asymmetry of |e><e| is log2 n", float(np.log2(n)), gamma_e, 1e-9)
    rep.check("Holevo asymmetry of the twirled state is 0", 0.0, gamma_t, 1e-9)

    T = groups.cyclic_generator_representation(G, np.diag(np.arange(n, dtype=float)))
    target = quantum.random_state(n, rng)
    E = quantum.encoder_channel(G, R, T, target)
    err = float(np.abs(E(e_state.matrix) - target.matrix).max())
    rep.check("encoder channel maps |e><e| to the random target", 0.0, err, 1e-9)
    ok, dev = quantum.is_symmetric_channel(E, R, 1e-9, R_out=T)
    rep.check("encoder channel is covariant", 0.0, dev, 1e-9)

    rep.values.update(
        holevo_gap=gamma_e - gamma_t,
        max_char_diff=float(np.abs(chi_e - chi_t).max()),
        # the encoder omits a 1/|G| prefactor; with it, tr E(|e><e|) would be 1/n
        encoder_trace=float(np.real(np.trace(E(e_state.matrix)))),
        encoder_trace_with_group_prefactor=1.0 / n,
    )
    return rep


# --------------------------------------------------------------------------
# group instances and monotonicity


@dataclass(frozen=True, eq=False)
class GroupInstance:
    name: str
    system: Representation
    ancilla: Representation
    joint: Representation
    generator: np.ndarray | None  # None for finite groups
    element: Any  # fixed element for the trace-distance and Renyi measures


@lru_cache(maxsize=None)
def group_instance(name: str) -> GroupInstance:
    if name == "z8":
        G = groups.cyclic_group(8)
        system = groups.left_regular_representation(G)
        ancilla = groups.cyclic_generator_representation(G, np.diag([0.0, 1.0, 3.0]))
        gen, element = None, 1
    elif name == "u1":
        system = groups.u1_number_representation(range(4))
        ancilla = groups.u1_number_representation(range(3))
        gen, element = system.generators["n"], 0.7
    elif name == "su2":
        half = groups.spin_j_representation(0.5)
        system = groups.tensor_representation(half, half)
        ancilla = groups.tensor_representation(half, half)
        gen, element = system.generators["z"], ((0.0, 0.0, 1.0), 0.7)
    else:
        raise UnknownInstance(f"unknown group instance {name!r}; expected one of z8, u1, su2")
    joint = quantum.joint_representation(system, ancilla)
    return GroupInstance(name, system, ancilla, joint, gen, element)


INSTANCES = ("z8", "u1", "su2")


def parse_measure_id(measure: str) -> tuple[str, float | None]:
    base, _, arg = measure.partition("@")
    s = float(arg) if arg else None
    if base not in ("holevo", "commutator", "trace-distance", "skew", "renyi"):
        raise UnknownInstance(f"unknown measure {measure!r}")
    if base in ("skew", "renyi") and s is None:
        s = 0.5
    return base, s


def measure_function(inst: GroupInstance, measure: str) -> Callable[[Any], float]:
    """A state function for ``measure`` on ``inst``.

    Generator-based measures are undefined for finite groups and raise
    :class:`UnknownInstance` there.
    """
    base, s = parse_measure_id(measure)
    R = inst.system
    if base == "holevo":
        return lambda rho: measures.holevo_asymmetry(rho, R)
    if base == "trace-distance":
        return lambda rho: measures.trace_distance_asymmetry(rho, R, inst.element)
    if base == "renyi":
        return lambda rho: measures.renyi_asymmetry(rho, R, inst.element, s)
    if inst.generator is None:
        raise UnknownInstance(f"{base} needs a Lie-group generator; {inst.name} is finite")
    if base == "commutator":
        return lambda rho: measures.commutator_asymmetry(rho, inst.generator)
    return lambda rho: measures.skew_information(rho, inst.generator, s)


def instance_measures(name: str) -> tuple[str, ...]:
    """Measures checked on an instance; finite groups use the Renyi orbit measure in place of skew information."""
    common = ("holevo", "trace-distance")
    if group_instance(name).generator is None:
        return common + ("renyi@0.25", "renyi@0.5", "renyi@0.75")
    return common + ("commutator", "skew@0.25", "skew@0.5", "skew@0.75")


def random_symmetric_pair(inst: GroupInstance, rng: np.random.Generator):
    # log-uniform coupling strength so that near-identity channels are exercised too
    scale = 10 ** rng.uniform(-3, 0.5)
    E = quantum.random_symmetric_channel(inst.system, inst.ancilla, rng, scale)
    rho = quantum.random_mixed_state(inst.system.dim, rng)
    return E, rho


def monotonicity_suite(instance: str, measure: str, trials: int = 100, seed: int = 0) -> ExperimentReport:
    inst = group_instance(instance)
    f = measure_function(inst, measure)
    rep = ExperimentReport(f"monotonicity:{instance}:{measure}:{trials}", seed)
    worst = -np.inf
    before, after = [], []
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        E, rho = random_symmetric_pair(inst, rng)
        a, b = f(rho), f(quantum.apply_channel(E, rho))
        before.append(a)
        after.append(b)
        worst = max(worst, b - a)
    rep.check(f"{measure} never increases under {trials} random symmetric channels", "<= 0", worst, 1e-8,
              passed=worst <= 1e-8)
    rep.values.update(max_violation=worst, mean_before=float(np.mean(before)), mean_after=float(np.mean(after)))
    return rep


# --------------------------------------------------------------------------
# amplifier bound


def entropy_change_sides(E: quantum.KrausChannel, rho, R: Representation) -> tuple[float, float]:
    """``(S(sigma) - S(rho), S(G(sigma)) - S(G(rho)))`` for ``sigma = E(rho)`` and the uniform twirl ``G``."""
    sigma = quantum.apply_channel(E, rho)
    S = linalg.von_neumann_entropy
    lhs = S(sigma) - S(rho)
    rhs = S(quantum.uniform_twirl(sigma, R)) - S(quantum.uniform_twirl(rho, R))
    return lhs, rhs


def amplifier_bound_check(trials: int = 100, seed: int = 0) -> ExperimentReport:
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    rep = ExperimentReport(f"amplifier:{trials}", seed)
    inst = group_instance("u1")
    worst = np.inf
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        E, rho = random_symmetric_pair(inst, rng)
        lhs, rhs = entropy_change_sides(E, rho, inst.system)
        worst = min(worst, lhs - rhs)
    rep.check(f"entropy change bounded below by twirled entropy change ({trials} U(1) trials)", ">= 0", worst,
              1e-8, passed=worst >= -1e-8)

    half = groups.spin_j_representation(0.5)
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(trials + 1)[-1])
    dev = 0.0
    for _ in range(20):
        S_twirled = linalg.von_neumann_entropy(quantum.uniform_twirl(quantum.random_mixed_state(2, rng), half))
        dev = max(dev, abs(S_twirled - 1.0))
    rep.check("uniform rotation twirl of any spin-1/2 state has entropy 1 bit (20 states)", 0.0, dev, 1e-9)
    rep.values.update(min_slack=worst, spin_half_max_deviation=dev)
    return rep


# --------------------------------------------------------------------------
# pure-state interconversion


@dataclass
class InterconversionResult:
    equal: bool
    max_deviation: float
    equal_up_to_character: bool
    character_deviation: float


def _interconversion_elements(R: Representation) -> tuple[list, Callable[[int, int], int | None]]:
    if R.kind == FINITE:
        return list(range(R.group.order)), R.group.mul
    if R.kind == U1:
        M = 64
        return [2 * np.pi * k / M for k in range(M)], lambda a, b: (a + b) % M
    rng = np.random.default_rng(2024)
    return [R.random_element(rng) for _ in range(64)], lambda a, b: None


def pure_state_interconversion(psi1, psi2, R: Representation, tol: float = 1e-9) -> InterconversionResult:
    """Compare characteristic functions of two pure states (vectors or density matrices).

    ``equal`` is strict entrywise equality of ``tr(rho U(g))``. The second verdict
    allows the two functions to differ by a one-dimensional character of the group,
    i.e. a ratio of unit modulus that is multiplicative on the sampled elements.
    """
    psi1, psi2 = (quantum.pure_state(p) if np.ndim(p) == 1 else quantum.as_state(p) for p in (psi1, psi2))
    for p in (psi1, psi2):
        if not p.is_pure():
            raise NotPure("both states must be pure")
    elements, mul = _interconversion_elements(R)
    c1 = measures.characteristic_function(psi1, R, elements)
    c2 = measures.characteristic_function(psi2, R, elements)
    strict = float(np.abs(c1 - c2).max())

    char_dev = float(np.abs(np.abs(c1) - np.abs(c2)).max())
    defined = np.abs(c1) > 1e-6
    ratio = np.where(defined, c2 / np.where(defined, c1, 1.0), np.nan)
    n = len(elements)
    for a in range(n):
        for b in range(n):
            ab = mul(a, b)
            if ab is None or not (defined[a] and defined[b] and defined[ab]):
                continue
            char_dev = max(char_dev, float(abs(ratio[a] * ratio[b] - ratio[ab])))
    if R.kind == SU2:
        char_dev = max(char_dev, strict)  # SU(2) has no nontrivial 1-d characters
    return InterconversionResult(strict <= tol, strict, char_dev <= tol, char_dev)


def interconversion_report() -> ExperimentReport:
    rep = ExperimentReport("interconversion")
    R = groups.u1_number_representation([0, 1, 2])
    s = 1 / np.sqrt(2)
    a = quantum.pure_state([s, s, 0])
    cases = [
        ("global phase", a, quantum.pure_state(np.exp(0.3j) * np.array([s, s, 0])), True, True),
        ("|0>+|1> vs |0>+|2>", a, quantum.pure_state([s, 0, s]), False, False),
        ("|0>+|1> vs |1>+|2>", a, quantum.pure_state([0, s, s]), False, True),
    ]
    for label, x, y, strict_expected, char_expected in cases:
        res = pure_state_interconversion(x, y, R)
        rep.check(f"{label}: strict equality", strict_expected, res.equal, 0.0,
                  passed=res.equal == strict_expected)
        rep.check(f"{label}: equality up to a character", char_expected, res.equal_up_to_character, 0.0,
                  passed=res.equal_up_to_character == char_expected)
        rep.values[label] = {"max_deviation": res.max_deviation, "character_deviation": res.character_deviation}
    return rep
