"""Atom-cavity protocol simulation.

Resonant Jaynes-Cummings pulses and classical Ramsey rotations are the only
two primitives. Out of them this module builds the probe-atom readout of the
dichotomic field observable, the generation of the entangled two-cavity
state from an entangled atom pair, seeded Monte Carlo Bell runs, the
detector-efficiency threshold and a timing-error sensitivity sweep.

Conventions: atom index 0 is the ground state |down>, index 1 the excited
state |up>. All pulses are written in the interaction picture with the
dimensionless area gt; free-evolution phases are never tracked. A resonant
pulse of area gt maps

    |up, n>   ->  cos(gt sqrt(n+1)) |up, n>   - sin(gt sqrt(n+1)) |down, n+1>
    |down, n> ->  cos(gt sqrt(n))   |down, n> + sin(gt sqrt(n))   |up, n-1>

and a Ramsey zone with angle theta and phase phi maps

    |up>   ->  cos(theta/2) |up>  - exp(+i phi) sin(theta/2) |down>
    |down> ->  exp(-i phi) sin(theta/2) |up> + cos(theta/2) |down>.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bell import BellConfig, DichotomicParams
from .fields import EntangledGbsParams, entangled_gbs_state
from .fock import (
    DEFAULT_N_MAX,
    RandomStream,
    StateVector,
    TwoCavityState,
    _unit_amplitudes,
)

ATOM_DOWN = 0
ATOM_UP = 1

#: Pulse area of a half Rabi cycle on the one-photon transition; transfers
#: |up, 0> fully to |down, 1> and back.
PROBE_PULSE_AREA = math.pi / 2.0

#: Detector efficiency above which the Bell violation survives without the
#: fair-sampling assumption, for maximally entangled states: 2/(sqrt(2)+1).
ALPHA_THRESHOLD = 2.0 / (math.sqrt(2.0) + 1.0)


@dataclass(frozen=True)
class AtomFieldState:
    """Joint pure state of one two-level atom and one cavity mode.

    amplitudes[a, n] with atom index a (0 = down, 1 = up) and photon
    number n.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _unit_amplitudes(self.amplitudes, 2)
        if amps.shape[0] != 2 or amps.shape[1] < 2:
            raise ValueError("expected shape (2, n_max + 1) with n_max >= 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.shape[1] - 1

    @classmethod
    def from_field(cls, field: StateVector, atom: int = ATOM_DOWN) -> "AtomFieldState":
        if atom not in (ATOM_DOWN, ATOM_UP):
            raise ValueError(f"atom index must be 0 (down) or 1 (up), got {atom!r}")
        amps = np.zeros((2, field.n_max + 1), dtype=complex)
        amps[atom] = field.amplitudes
        return cls(amps)


@dataclass(frozen=True)
class RamseyParams:
    """Rotation angle theta in [0, pi] and field phase phi of a Ramsey zone."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")


@lru_cache(maxsize=128)
def _jc_matrix(gt: float, n_max: int) -> np.ndarray:
    """Unitary of a resonant pulse of area gt, flattened over (atom, photon).

    The uppermost excited level |up, n_max> has no partner inside the
    cutoff; its column is left as identity and jc_evolve refuses states
    that populate it.
    """
    dim = 2 * (n_max + 1)
    mat = np.zeros((dim, dim), dtype=complex)

    def idx(atom: int, n: int) -> int:
        return atom * (n_max + 1) + n

    for n in range(n_max + 1):
        angle = gt * math.sqrt(n)
        mat[idx(ATOM_DOWN, n), idx(ATOM_DOWN, n)] = math.cos(angle)
        if n >= 1:
            mat[idx(ATOM_UP, n - 1), idx(ATOM_DOWN, n)] = math.sin(angle)
        if n < n_max:
            angle = gt * math.sqrt(n + 1)
            mat[idx(ATOM_UP, n), idx(ATOM_UP, n)] = math.cos(angle)
            mat[idx(ATOM_DOWN, n + 1), idx(ATOM_UP, n)] = -math.sin(angle)
        else:
            mat[idx(ATOM_UP, n), idx(ATOM_UP, n)] = 1.0
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=128)
def _jc_tensor(gt: float, n_max: int) -> np.ndarray:
    d = n_max + 1
    tens = _jc_matrix(gt, n_max).reshape(2, d, 2, d).copy()
    tens.setflags(write=False)
    return tens


def _ramsey_matrix(theta: float, phi: float) -> np.ndarray:
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    return np.array(
        [[c, -cmath.exp(1j * phi) * s], [cmath.exp(-1j * phi) * s, c]], dtype=complex
    )


def jc_evolve(state: AtomFieldState, gt: float) -> AtomFieldState:
    """Resonant Jaynes-Cummings pulse of area gt on an atom-cavity pair."""
    if abs(state.amplitudes[ATOM_UP, state.n_max]) > 1e-12:
        raise ValueError(
            "state populates |up, n_max>; raise n_max so the pulse cannot leak"
        )
    flat = _jc_matrix(float(gt), state.n_max) @ state.amplitudes.ravel()
    return AtomFieldState(flat.reshape(2, state.n_max + 1))


def ramsey_rotate(state: AtomFieldState, params: RamseyParams) -> AtomFieldState:
    """Classical Ramsey rotation of the atomic part; the field is untouched."""
    return AtomFieldState(_ramsey_matrix(params.theta, params.phi) @ state.amplitudes)


def _mixing_angle(p: float) -> float:
    # cos(theta/2) = sqrt(p) picks the rotation that maps the Bernoulli
    # basis pair onto the bare atomic states.
    return 2.0 * math.acos(math.sqrt(min(max(p, 0.0), 1.0)))


def probe_measure(field: StateVector, d: DichotomicParams, rng: RandomStream):
    """Measure the dichotomic observable F_p(phi) with a probe atom.

    A ground-state atom crosses the cavity for a half Rabi cycle, which
    swaps the field qubit onto the atom and leaves the cavity in vacuum.
    A Ramsey zone with cos(theta/2) = sqrt(p) and phase -phi then rotates
    the atomic state so that detecting |up> corresponds to the +1 outcome
    (field was in |p, phi>) and |down> to -1. Returns (outcome, post_field);
    the collapsed cavity state is the vacuum in both branches, up to the
    branch's global phase.
    """
    tail = float(np.linalg.norm(field.amplitudes[2:]))
    if tail > 1e-10:
        raise ValueError(f"field has weight {tail**2:.3e} above one photon")
    state = AtomFieldState.from_field(field, ATOM_DOWN)
    state = jc_evolve(state, PROBE_PULSE_AREA)
    state = ramsey_rotate(state, RamseyParams(_mixing_angle(d.p), -d.phi))
    p_up = float(np.sum(np.abs(state.amplitudes[ATOM_UP]) ** 2))
    got_up = rng.uniform() < p_up
    branch = state.amplitudes[ATOM_UP if got_up else ATOM_DOWN]
    post_field = StateVector.normalized(branch)
    return (1 if got_up else -1), post_field


@dataclass(frozen=True)
class InitialAtomPair:
    """Entangled atom pair (|up down> + eta |down up>) / sqrt(1 + eta^2)."""

    eta: float

    @property
    def norm_const(self) -> float:
        return 1.0 / math.sqrt(1.0 + self.eta**2)


@dataclass(frozen=True)
class GenerationResult:
    """Outcome of the state-generation protocol.

    field is the two-cavity state conditioned on both atoms ending in the
    ground state; atom_probabilities[a1, a2] are the final atomic
    populations (all weight sits at (down, down) for an exact half cycle).
    """

    field: TwoCavityState
    atom_probabilities: np.ndarray


def _apply_single_axis(state: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, state, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _apply_atom_field(
    state: np.ndarray, u4: np.ndarray, atom_axis: int, field_axis: int
) -> np.ndarray:
    out = np.tensordot(u4, state, axes=([2, 3], [atom_axis, field_axis]))
    return np.moveaxis(out, [0, 1], [atom_axis, field_axis])


def _generation_joint(
    pair: InitialAtomPair,
    p1: float,
    theta1: float,
    p2: float,
    theta2: float,
    gt: float,
    phase_referenced: bool,
    n_max: int,
) -> np.ndarray:
    """Joint amplitudes (atom1, atom2, field1, field2) after the protocol.

    Each atom crosses its Ramsey zone with cos(theta_j/2) = sqrt(p_j) and
    phase -theta_j, then its cavity for a pulse of area gt. With
    phase_referenced the relative phase of the initial atomic superposition
    is locked to the two field phases, exp(i (theta2 - theta1)); the pulse
    applied to an excited atom imprints a phase exp(-i theta_j) on its
    branch, so this referencing is what makes the two branches interfere
    with the plain real weight eta. With equal field phases it is the
    identity.
    """
    d = n_max + 1
    state = np.zeros((2, 2, d, d), dtype=complex)
    rel = cmath.exp(1j * (theta2 - theta1)) if phase_referenced else 1.0
    state[ATOM_UP, ATOM_DOWN, 0, 0] = pair.norm_const
    state[ATOM_DOWN, ATOM_UP, 0, 0] = pair.norm_const * pair.eta * rel
    state = _apply_single_axis(state, _ramsey_matrix(_mixing_angle(p1), -theta1), 0)
    state = _apply_single_axis(state, _ramsey_matrix(_mixing_angle(p2), -theta2), 1)
    u4 = _jc_tensor(float(gt), n_max)
    state = _apply_atom_field(state, u4, 0, 2)
    state = _apply_atom_field(state, u4, 1, 3)
    return state


def generate_entangled_gbs(
    pair: InitialAtomPair,
    p1: float,
    theta1: float,
    p2: float,
    theta2: float,
    n_max: int = DEFAULT_N_MAX,
    gt: float = PROBE_PULSE_AREA,
    phase_referenced: bool = True,
) -> GenerationResult:
    """Run the generation protocol and return the conditioned field state.

    For gt = pi/2 both atoms end in the ground state with probability one
    and the cavities carry the entangled two-cavity Bernoulli state with
    parameters (p1, theta1, p2, theta2) and weight eta, up to a global
    phase.
    """
    joint = _generation_joint(pair, p1, theta1, p2, theta2, gt, phase_referenced, n_max)
    probs = np.sum(np.abs(joint) ** 2, axis=(2, 3))
    ground = joint[ATOM_DOWN, ATOM_DOWN]
    weight = float(np.linalg.norm(ground))
    if weight**2 < 1e-15:
        raise RuntimeError("ground-ground branch carries no weight; nothing to condition on")
    probs.setflags(write=False)
    return GenerationResult(field=TwoCavityState(ground / weight), atom_probabilities=probs)


@dataclass(frozen=True)
class ExperimentConfig:
    """Seeded Monte Carlo Bell run: state, settings, shot budget, detectors."""

    bell: BellConfig
    shots: int
    seed: int
    detector_efficiency: float = 1.0
    fair_sampling: bool = True
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        if not 0.0 <= self.detector_efficiency <= 1.0:
            raise ValueError("detector efficiency must lie in [0, 1]")
        if self.detector_efficiency < 1.0 and not self.fair_sampling:
            raise ValueError(
                "lossy detectors are implemented only with fair-sampling conditioning"
            )


@dataclass(frozen=True)
class SettingEstimate:
    """Correlation estimate at one pair of measurement angles."""

    phi_a: float
    phi_b: float
    correlation: float
    std_error: float
    shots: int
    retained: int


@dataclass(frozen=True)
class BellEstimate:
    """Monte Carlo estimate of the Bell function with its standard error."""

    s_b_hat: float
    std_error: float
    settings: tuple[SettingEstimate, ...]
    discarded_shots: int


def _probe_outcome_probabilities(
    joint: np.ndarray, p: float, phi_a: float, phi_b: float, gt: float
) -> np.ndarray:
    """Joint probe-atom outcome probabilities for one pair of settings.

    ``joint`` holds (atom1, atom2, field1, field2) amplitudes straight from
    the generation stage; the generation atoms are kept in the sum, which
    is the same as tracing them out, so no conditioning on their state is
    assumed. Fresh ground-state probes cross the cavities and their Ramsey
    zones exactly as in probe_measure. Returns probs[q1, q2] over the probe
    indices (0 = down = outcome -1, 1 = up = outcome +1).
    """
    d = joint.shape[-1]
    full = np.zeros((2, 2, 2, 2, d, d), dtype=complex)
    full[:, :, ATOM_DOWN, ATOM_DOWN, :, :] = joint
    u4 = _jc_tensor(float(gt), d - 1)
    full = _apply_atom_field(full, u4, 2, 4)
    full = _apply_atom_field(full, u4, 3, 5)
    theta = _mixing_angle(p)
    full = _apply_single_axis(full, _ramsey_matrix(theta, -phi_a), 2)
    full = _apply_single_axis(full, _ramsey_matrix(theta, -phi_b), 3)
    return np.sum(np.abs(full) ** 2, axis=(0, 1, 4, 5))


def _correlation_from_probs(probs: np.ndarray) -> float:
    return float(probs[1, 1] + probs[0, 0] - probs[0, 1] - probs[1, 0])


def run_bell_experiment(cfg: ExperimentConfig) -> BellEstimate:
    """Simulate the full Bell test and estimate S_B.

    For each of the four angle settings the entangled state is generated,
    both cavities are probed, and the +-1 outcome product is recorded over
    cfg.shots shots. The outcome distribution per setting is fixed by the
    protocol unitaries; shot i of setting s consumes draws 3i..3i+2 of the
    stream substream(seed -> s), so results are reproducible and
    independent of evaluation order. With detector efficiency below one,
    each atom is detected independently with probability alpha and only
    coincidences are kept (fair sampling); draws for undetected shots are
    still consumed, so the same seed yields nested results across alpha.
    """
    bell_cfg = cfg.bell
    if abs(bell_cfg.p - 0.5) > 1e-12:
        warnings.warn(
            f"Bell violation is maximal at p = 1/2; running with p = {bell_cfg.p}",
            stacklevel=2,
        )
    joint = _generation_joint(
        InitialAtomPair(bell_cfg.eta),
        bell_cfg.p,
        bell_cfg.theta,
        bell_cfg.p,
        bell_cfg.theta,
        gt=PROBE_PULSE_AREA,
        phase_referenced=True,
        n_max=cfg.n_max,
    )
    settings = (
        (bell_cfg.phi1, bell_cfg.phi2),
        (bell_cfg.phi1, bell_cfg.phi2_prime),
        (bell_cfg.phi1_prime, bell_cfg.phi2),
        (bell_cfg.phi1_prime, bell_cfg.phi2_prime),
    )
    alpha = cfg.detector_efficiency
    master = RandomStream(cfg.seed)
    products = np.array([1.0, -1.0, -1.0, 1.0])  # (down,down), (down,up), (up,down), (up,up)
    estimates = []
    discarded = 0
    for index, (phi_a, phi_b) in enumerate(settings):
        probs = _probe_outcome_probabilities(joint, bell_cfg.p, phi_a, phi_b, PROBE_PULSE_AREA)
        flat = np.clip(probs.ravel(), 0.0, None)
        cumulative = np.cumsum(flat / flat.sum())
        draws = master.substream(index).uniforms(3 * cfg.shots).reshape(cfg.shots, 3)
        outcomes = products[np.minimum(np.searchsorted(cumulative, draws[:, 0], side="right"), 3)]
        if alpha < 1.0:
            detected = (draws[:, 1] < alpha) & (draws[:, 2] < alpha)
            outcomes = outcomes[detected]
        retained = outcomes.size
        discarded += cfg.shots - retained
        if retained == 0:
            raise RuntimeError(f"zero retained shots at setting {index}; cannot estimate")
        correlation = float(outcomes.mean())
        std_error = math.sqrt(max(1.0 - correlation**2, 0.0) / retained)
        estimates.append(
            SettingEstimate(
                phi_a=phi_a,
                phi_b=phi_b,
                correlation=correlation,
                std_error=std_error,
                shots=cfg.shots,
                retained=retained,
            )
        )
    c11, c12, c21, c22 = (e.correlation for e in estimates)
    s_b_hat = abs(c11 - c12) + abs(c21 + c22)
    std_error = math.sqrt(sum(e.std_error**2 for e in estimates))
    return BellEstimate(
        s_b_hat=s_b_hat,
        std_error=std_error,
        settings=tuple(estimates),
        discarded_shots=discarded,
    )


@dataclass(frozen=True)
class DetectionReport:
    """Detector-efficiency verdict for a loophole-free violation."""

    alpha: float
    alpha_threshold: float
    violable: bool
    note: str


def detection_threshold_check(alpha: float) -> DetectionReport:
    """Compare a detector efficiency with the no-fair-sampling threshold.

    For maximally entangled states the Bell violation survives without the
    fair-sampling assumption only for alpha strictly above 2/(sqrt(2)+1),
    about 0.8284. Below that, discarded non-coincidences could in principle
    hide a local model.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return DetectionReport(
        alpha=alpha,
        alpha_threshold=ALPHA_THRESHOLD,
        violable=alpha > ALPHA_THRESHOLD,
        note=(
            "threshold for dropping the fair-sampling assumption with "
            "maximally entangled states"
        ),
    )


@dataclass(frozen=True)
class SensitivityRow:
    """Fidelity and exact Bell value at one relative timing error."""

    epsilon: float
    fidelity: float
    s_b: float


def timing_sensitivity(cfg: ExperimentConfig, relative_errors) -> list[SensitivityRow]:
    """Propagate a pulse-timing error through generation and probing.

    Every pulse area becomes (pi/2)(1 + epsilon), modeling a velocity or
    timing offset of the atoms. For each epsilon the row reports the
    fidelity of the generated state against the ideal one (including the
    requirement that the atoms end in the ground state) and the
    operator-exact Bell value of the perturbed protocol at the configured
    angles. No sampling is involved. The sweep is symmetric under
    epsilon -> -epsilon.
    """
    bell_cfg = cfg.bell
    target = entangled_gbs_state(
        EntangledGbsParams(
            p1=bell_cfg.p, p2=bell_cfg.p,
            theta1=bell_cfg.theta, theta2=bell_cfg.theta,
            eta=bell_cfg.eta,
        ),
        cfg.n_max,
    )
    settings = (
        (bell_cfg.phi1, bell_cfg.phi2),
        (bell_cfg.phi1, bell_cfg.phi2_prime),
        (bell_cfg.phi1_prime, bell_cfg.phi2),
        (bell_cfg.phi1_prime, bell_cfg.phi2_prime),
    )
    rows = []
    for epsilon in relative_errors:
        eps = float(epsilon)
        if abs(eps) >= 0.5:
            raise ValueError(f"relative timing error {eps!r} outside (-0.5, 0.5)")
        gt = PROBE_PULSE_AREA * (1.0 + eps)
        joint = _generation_joint(
            InitialAtomPair(bell_cfg.eta),
            bell_cfg.p,
            bell_cfg.theta,
            bell_cfg.p,
            bell_cfg.theta,
            gt=gt,
            phase_referenced=True,
            n_max=cfg.n_max,
        )
        overlap = np.vdot(target.amplitudes, joint[ATOM_DOWN, ATOM_DOWN])
        fid = float(abs(overlap) ** 2)
        corr = [
            _correlation_from_probs(
                _probe_outcome_probabilities(joint, bell_cfg.p, phi_a, phi_b, gt)
            )
            for phi_a, phi_b in settings
        ]
        s_b = abs(corr[0] - corr[1]) + abs(corr[2] + corr[3])
        rows.append(SensitivityRow(epsilon=eps, fidelity=fid, s_b=s_b))
    return rows
