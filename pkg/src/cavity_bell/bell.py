"""Dichotomic field observable and the CHSH Bell function.

The observable F_p(phi) = |p,phi><p,phi| - |1-p,pi+phi><1-p,pi+phi| assigns
+1 to a Bernoulli state and -1 to its orthogonal partner. Measuring it in
both cavities of the entangled state at four phase settings gives a CHSH
combination

    S_B = |C(phi1, phi2) - C(phi1, phi2')| + |C(phi1', phi2) + C(phi1', phi2')|

bounded by 2 classically and by 2 sqrt(2) quantum mechanically. The degree
of entanglement G = 2|eta|/(1+eta^2) controls how far the bound is broken.

Sign conventions, fixed against the operator oracle: the correlation at
p = 1/2 is 2 eta/(1+eta^2) sin(phi1-theta) sin(phi2-theta)
- cos(phi1-theta) cos(phi2-theta), with the signed weight, so negative eta
flips the sin-product term. The closed Bell forms below carry eta's sign
through that weight rather than through a separate branch choice.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .binomial import GbsParams, gbs_state, orthogonal_partner
from .fields import EntangledGbsParams, entangled_gbs_state
from .fock import (
    DEFAULT_N_MAX,
    FieldOperator,
    StateVector,
    TwoCavityState,
    expectation,
    joint,
)

PRESETS = ("maximal", "wide")

# Violation thresholds on G: below these the preset cannot push S_B past 2.
G_MIN_MAXIMAL = math.sqrt(2.0) - 1.0
G_MIN_WIDE = 1.0 / 3.0

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class DichotomicParams:
    """Measurement setting (p, phi) selecting the Bernoulli basis pair."""

    p: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")


@dataclass(frozen=True)
class GbsBasisMatrix:
    """Matrix of F_p(phi') in the basis {|p,phi>, |1-p,pi+phi>}.

    The observable squares to one on this block, so f11^2 + |f12|^2 = 1 and
    the diagonal is (f11, -f11).
    """

    f11: float
    f12: complex

    def __post_init__(self):
        defect = abs(self.f11**2 + abs(self.f12) ** 2 - 1.0)
        if defect > 1e-12:
            raise ValueError(f"block is not unitary-involutive, defect {defect:.3e}")


@dataclass(frozen=True)
class BellConfig:
    """Full configuration of one Bell evaluation.

    p and theta select the measured basis family and the state phase, eta
    the entanglement weight, and the four angles are the two settings per
    cavity entering the CHSH combination.
    """

    p: float
    theta: float
    eta: float
    phi1: float
    phi2: float
    phi1_prime: float
    phi2_prime: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")

    @property
    def angles(self) -> tuple[float, float, float, float]:
        return (self.phi1, self.phi2, self.phi1_prime, self.phi2_prime)


def dichotomic_operator(d: DichotomicParams, n_max: int = DEFAULT_N_MAX) -> FieldOperator:
    """F_p(phi) as a dense Fock-space matrix.

    On the {|0>, |1>} block it reads (2p-1)(|1><1| - |0><0|)
    + 2 sqrt(p(1-p)) (exp(i phi)|1><0| + h.c.); levels above one photon are
    outside both basis states and carry zeros.
    """
    mat = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    diag = 2.0 * d.p - 1.0
    off = 2.0 * math.sqrt(d.p * (1.0 - d.p))
    mat[0, 0] = -diag
    mat[1, 1] = diag
    mat[1, 0] = off * cmath.exp(1j * d.phi)
    mat[0, 1] = off * cmath.exp(-1j * d.phi)
    return FieldOperator(mat)


def dichotomic_gbs_matrix(p: float, phi: float, phi_prime: float) -> GbsBasisMatrix:
    """Matrix elements of F_p(phi') in the basis pair defined at phase phi."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    delta = phi_prime - phi
    half = math.sin(0.5 * delta) ** 2
    f11 = 1.0 - 8.0 * p * (1.0 - p) * half
    f12 = 2.0 * math.sqrt(p * (1.0 - p)) * (
        2.0 * (1.0 - 2.0 * p) * half + 1j * math.sin(delta)
    )
    return GbsBasisMatrix(f11=f11, f12=f12)


def dichotomic_eigenstates(
    p: float, phi: float, phi_prime: float, n_max: int = DEFAULT_N_MAX
) -> tuple[StateVector, StateVector]:
    """Eigenstates of F_p(phi') expressed through the basis pair at phase phi.

    Returns (plus, minus) for eigenvalues +1 and -1. The +1 eigenstate is
    |p, phi'> up to a global phase. When the off-diagonal element vanishes
    (for instance phi' = phi) the rotated basis pair is returned directly.
    """
    block = dichotomic_gbs_matrix(p, phi, phi_prime)
    if abs(block.f12) < _DEGENERATE_TOL:
        base = GbsParams(p, phi_prime)
        return gbs_state(base, n_max), gbs_state(orthogonal_partner(base), n_max)
    e1 = gbs_state(GbsParams(p, phi), n_max).amplitudes
    e2 = gbs_state(orthogonal_partner(GbsParams(p, phi)), n_max).amplitudes
    mod = abs(block.f12)
    norm = math.hypot(mod, 1.0 - block.f11)
    phase = mod / block.f12  # exp(-i arg f12)
    plus = (mod * e1 + (1.0 - block.f11) * phase * e2) / norm
    minus = ((block.f11 - 1.0) * np.conj(phase) * e1 + mod * e2) / norm
    return StateVector(plus), StateVector(minus)


def degree_of_entanglement(eta: float) -> float:
    """G = 2|eta| / (1 + eta^2), from 0 (product) to 1 (maximally entangled)."""
    return 2.0 * abs(eta) / (1.0 + eta**2)


def eta_for_degree(g: float) -> float:
    """The weight eta in [0, 1] realizing a given degree of entanglement.

    Inverts G = 2 eta/(1+eta^2) choosing the root with |eta| <= 1; the
    other root is its reciprocal and describes the same amount of
    entanglement.
    """
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"degree of entanglement must lie in [0, 1], got {g!r}")
    if g == 0.0:
        return 0.0
    return (1.0 - math.sqrt(1.0 - g * g)) / g


def bell_correlation(config: BellConfig, phi_a: float, phi_b: float) -> float:
    """Closed-form correlation <F^1_p(phi_a) F^2_p(phi_b)> on the symmetric state.

    Valid for the state with p1 = p2 = p and theta1 = theta2 = theta:

        -1 + 8p(1-p) [ s1^2 + s2^2 - 8p(1-p) s1^2 s2^2
                       + eta/(1+eta^2) (4(1-2p)^2 s1^2 s2^2 + sin a1 sin a2) ]

    with a_j the angle relative to theta and s_j = sin(a_j / 2).
    """
    p, eta = config.p, config.eta
    a1 = phi_a - config.theta
    a2 = phi_b - config.theta
    s1 = math.sin(0.5 * a1) ** 2
    s2 = math.sin(0.5 * a2) ** 2
    k = 8.0 * p * (1.0 - p)
    weight = eta / (1.0 + eta**2)
    bracket = (
        s1
        + s2
        - k * s1 * s2
        + weight * (4.0 * (1.0 - 2.0 * p) ** 2 * s1 * s2 + math.sin(a1) * math.sin(a2))
    )
    return -1.0 + k * bracket


def dichotomic_pair_expectation(
    state: TwoCavityState, d1: DichotomicParams, d2: DichotomicParams
) -> float:
    """Operator-oracle correlation of F_{d1} x F_{d2} on an arbitrary joint state."""
    op = joint(dichotomic_operator(d1, state.n_max), dichotomic_operator(d2, state.n_max))
    return expectation(op, state).real


def bell_correlation_operator(
    config: BellConfig, phi_a: float, phi_b: float, n_max: int = DEFAULT_N_MAX
) -> float:
    """Correlation computed by building the state and the tensored operators."""
    params = EntangledGbsParams(
        p1=config.p, p2=config.p, theta1=config.theta, theta2=config.theta, eta=config.eta
    )
    state = entangled_gbs_state(params, n_max)
    return dichotomic_pair_expectation(
        state, DichotomicParams(config.p, phi_a), DichotomicParams(config.p, phi_b)
    )


def bell_function(config: BellConfig) -> float:
    """CHSH combination S_B from closed-form correlations."""
    c11 = bell_correlation(config, config.phi1, config.phi2)
    c12 = bell_correlation(config, config.phi1, config.phi2_prime)
    c21 = bell_correlation(config, config.phi1_prime, config.phi2)
    c22 = bell_correlation(config, config.phi1_prime, config.phi2_prime)
    return abs(c11 - c12) + abs(c21 + c22)


def bell_function_operator(config: BellConfig, n_max: int = DEFAULT_N_MAX) -> float:
    """S_B with every correlation taken from the operator oracle."""
    params = EntangledGbsParams(
        p1=config.p, p2=config.p, theta1=config.theta, theta2=config.theta, eta=config.eta
    )
    state = entangled_gbs_state(params, n_max)

    def corr(phi_a: float, phi_b: float) -> float:
        return dichotomic_pair_expectation(
            state, DichotomicParams(config.p, phi_a), DichotomicParams(config.p, phi_b)
        )

    c11 = corr(config.phi1, config.phi2)
    c12 = corr(config.phi1, config.phi2_prime)
    c21 = corr(config.phi1_prime, config.phi2)
    c22 = corr(config.phi1_prime, config.phi2_prime)
    return abs(c11 - c12) + abs(c21 + c22)


def bell_function_at_half(config: BellConfig) -> float:
    """Closed form of S_B at p = 1/2.

    Each correlation collapses to g sin a1 sin a2 - cos a1 cos a2 with the
    signed weight g = 2 eta/(1+eta^2); the two eta signs that are sometimes
    written as a +- branch are both covered by keeping g signed.
    """
    if abs(config.p - 0.5) > 1e-12:
        raise ValueError("closed form requires p = 1/2")
    g = 2.0 * config.eta / (1.0 + config.eta**2)
    a1 = config.phi1 - config.theta
    a1p = config.phi1_prime - config.theta
    b2 = config.phi2 - config.theta
    b2p = config.phi2_prime - config.theta
    term1 = g * math.sin(a1) * (math.sin(b2) - math.sin(b2p)) - math.cos(a1) * (
        math.cos(b2) - math.cos(b2p)
    )
    term2 = g * math.sin(a1p) * (math.sin(b2) + math.sin(b2p)) - math.cos(a1p) * (
        math.cos(b2) + math.cos(b2p)
    )
    return abs(term1) + abs(term2)


def angle_preset(kind: str, theta: float = 0.0, eta_sign: float = 1.0) -> tuple[float, float, float, float]:
    """Standard angle choices (phi1, phi2, phi1', phi2') for the Bell test.

    "maximal": quarter-pi ladder theta, theta+pi/4, theta+pi/2, theta+3pi/4,
    reaching S_B = sqrt(2)(1+G) with violation for G > sqrt(2)-1.
    "wide": phi1 = phi2 = theta, phi1' = theta+pi/3 and phi2' = theta-(2pi/3)
    for non-negative eta (mirrored for negative eta), reaching
    S_B = 7/4 + 3G/4 with the widest violation interval, G > 1/3.
    """
    if kind == "maximal":
        return (theta, theta + math.pi / 4.0, theta + math.pi / 2.0, theta + 3.0 * math.pi / 4.0)
    if kind == "wide":
        sign = -1.0 if eta_sign < 0.0 else 1.0
        return (theta, theta, theta + math.pi / 3.0, theta - sign * 2.0 * math.pi / 3.0)
    raise ValueError(f"unknown preset {kind!r}; choose from {PRESETS}")


def analytic_s_b(kind: str, g: float) -> float:
    """Preset Bell value as a function of the degree of entanglement."""
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"degree of entanglement must lie in [0, 1], got {g!r}")
    if kind == "maximal":
        return math.sqrt(2.0) * (1.0 + g)
    if kind == "wide":
        return 7.0 / 4.0 + 0.75 * g
    raise ValueError(f"unknown preset {kind!r}; choose from {PRESETS}")


def violation_threshold(kind: str) -> float:
    """Smallest degree of entanglement at which the preset reaches S_B = 2."""
    if kind == "maximal":
        return G_MIN_MAXIMAL
    if kind == "wide":
        return G_MIN_WIDE
    raise ValueError(f"unknown preset {kind!r}; choose from {PRESETS}")


def preset_config(kind: str, eta: float, p: float = 0.5, theta: float = 0.0) -> BellConfig:
    """BellConfig with preset angles at the given state parameters."""
    phi1, phi2, phi1p, phi2p = angle_preset(kind, theta, eta_sign=1.0 if eta >= 0 else -1.0)
    return BellConfig(
        p=p, theta=theta, eta=eta, phi1=phi1, phi2=phi2, phi1_prime=phi1p, phi2_prime=phi2p
    )


def bell_function_vs_p(
    theta: float, eta: float, angles: tuple[float, float, float, float], p_values
) -> np.ndarray:
    """S_B evaluated over a vector of p values at fixed angles."""
    out = np.empty(len(p_values))
    phi1, phi2, phi1p, phi2p = angles
    for i, p in enumerate(p_values):
        config = BellConfig(
            p=float(p), theta=theta, eta=eta,
            phi1=phi1, phi2=phi2, phi1_prime=phi1p, phi2_prime=phi2p,
        )
        out[i] = bell_function(config)
    return out


def optimal_p_scan(
    theta: float, eta: float, angles: tuple[float, float, float, float], step: float = 0.005
) -> float:
    """Grid-scan p in [0, 1] for the maximum of S_B.

    The step must divide the unit interval. Ties within 1e-12 of the
    maximum are broken towards p = 0.5; the scan is symmetric about that
    point, so this picks the physically distinguished optimum.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    count = round(1.0 / step)
    if abs(count * step - 1.0) > 1e-9:
        raise ValueError(f"step {step!r} does not divide [0, 1]")
    ps = np.linspace(0.0, 1.0, count + 1)
    values = bell_function_vs_p(theta, eta, angles, ps)
    best = float(values.max())
    candidates = [float(p) for p, v in zip(ps, values) if v >= best - 1e-12]
    return min(candidates, key=lambda p: (abs(p - 0.5), p))
