"""Electric-field statistics of the entangled two-cavity Bernoulli state.

The state under study superposes a Bernoulli state in each cavity with its
orthogonal partner in the other,

    |Psi> = (|p1, t1>|1-p2, pi+t2> + eta |1-p1, pi+t1>|p2, t2>) / sqrt(1+eta^2)

with a real entanglement weight eta. This module evaluates the mean field in
each cavity, the two-cavity field correlation and the covariance, both from
closed forms and from direct operator expectations, so each route checks the
other. Units: field operator a + a-dagger per cavity, i.e. the prefactor
sqrt(4 pi hbar omega / V) is set to 1 and the mode function to 1, which puts
the number-state covariance limits at exactly +-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .binomial import GbsParams, gbs_state, orthogonal_partner
from .fock import (
    DEFAULT_N_MAX,
    TwoCavityState,
    expectation,
    identity,
    joint,
    quadrature,
    tensor,
)


@dataclass(frozen=True)
class EntangledGbsParams:
    """Parameters (p1, p2, theta1, theta2, eta) of the two-cavity state.

    eta is any real number, including negative values; only eta^2 enters
    the normalization.
    """

    p1: float
    p2: float
    theta1: float
    theta2: float
    eta: float

    def __post_init__(self):
        for name in ("p1", "p2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    @property
    def norm_const(self) -> float:
        return 1.0 / math.sqrt(1.0 + self.eta**2)


def entangled_gbs_state(params: EntangledGbsParams, n_max: int = DEFAULT_N_MAX) -> TwoCavityState:
    """Construct |Psi> as an explicit joint amplitude matrix."""
    g1 = GbsParams(params.p1, params.theta1)
    g2 = GbsParams(params.p2, params.theta2)
    branch1 = tensor(gbs_state(g1, n_max), gbs_state(orthogonal_partner(g2), n_max))
    branch2 = tensor(gbs_state(orthogonal_partner(g1), n_max), gbs_state(g2, n_max))
    amps = params.norm_const * (branch1.amplitudes + params.eta * branch2.amplitudes)
    return TwoCavityState(amps)


def gbs_field_matrix_elements(g: GbsParams) -> tuple[float, complex]:
    """Matrix elements of a + a-dagger in the basis {|p,phi>, |1-p,pi+phi>}.

    Returns (e11, e12): the diagonal element in the state itself and the
    off-diagonal element towards the orthogonal partner. The remaining two
    follow from hermiticity and tracelessness on this two-state block.
    """
    e11 = 2.0 * math.sqrt(g.p * (1.0 - g.p)) * math.cos(g.phi)
    e12 = (2.0 * g.p - 1.0) * math.cos(g.phi) - 1j * math.sin(g.phi)
    return e11, e12


def field_expectation(params: EntangledGbsParams, cavity: int) -> float:
    """Mean field <E_j> in cavity 1 or 2.

    The two branches carry opposite single-cavity means, so the result is
    damped by (1 - eta^2)/(1 + eta^2) and vanishes at |eta| = 1. Cavity 2
    carries the opposite sign because the partner states swap roles there.
    """
    if cavity not in (1, 2):
        raise ValueError(f"cavity must be 1 or 2, got {cavity!r}")
    p = params.p1 if cavity == 1 else params.p2
    theta = params.theta1 if cavity == 1 else params.theta2
    sign = 1.0 if cavity == 1 else -1.0
    weight = (1.0 - params.eta**2) / (1.0 + params.eta**2)
    return sign * 2.0 * math.sqrt(p * (1.0 - p)) * weight * math.cos(theta)


def _f_h(params: EntangledGbsParams) -> tuple[float, float]:
    f = (2.0 * params.p1 - 1.0) * (2.0 * params.p2 - 1.0)
    h = 2.0 * math.sqrt(params.p1 * params.p2 * (1.0 - params.p1) * (1.0 - params.p2))
    return f, h


def field_correlation(params: EntangledGbsParams) -> float:
    """Two-cavity correlation <E_1 E_2>.

    Closed form 2 * (eta/(1+eta^2) * (f c1 c2 + s1 s2) - h c1 c2) with
    f = (2 p1 - 1)(2 p2 - 1), h = 2 sqrt(p1 p2 (1-p1)(1-p2)) and
    c_j = cos(theta_j), s_j = sin(theta_j).
    """
    f, h = _f_h(params)
    c1, c2 = math.cos(params.theta1), math.cos(params.theta2)
    s1, s2 = math.sin(params.theta1), math.sin(params.theta2)
    weight = params.eta / (1.0 + params.eta**2)
    return 2.0 * (weight * (f * c1 * c2 + s1 * s2) - h * c1 * c2)


@dataclass(frozen=True)
class FieldStats:
    """Field means, correlation and covariance for one parameter point."""

    e1: float
    e2: float
    e1e2: float
    covariance: float

    def __post_init__(self):
        # The four numbers must be mutually consistent; anything else means
        # a closed form went wrong upstream.
        if abs(self.covariance - (self.e1e2 - self.e1 * self.e2)) > 1e-12:
            raise ValueError("covariance is inconsistent with the moments")


def field_covariance(params: EntangledGbsParams) -> FieldStats:
    """Covariance <E_1 E_2> - <E_1><E_2> together with the moments.

    At |eta| = 1 the means vanish and the covariance equals the raw
    correlation. For eta = +1, p1 = p2 = 1/2 it reduces to
    -cos(theta1 + theta2); for eta = -1 to -cos(theta1 - theta2). The sign
    pairing was fixed against the operator oracle.
    """
    f, h = _f_h(params)
    c1, c2 = math.cos(params.theta1), math.cos(params.theta2)
    s1, s2 = math.sin(params.theta1), math.sin(params.theta2)
    eta = params.eta
    weight = eta / (1.0 + eta**2)
    damping = (1.0 - eta**2) / (1.0 + eta**2)
    covariance = 2.0 * (weight * (f * c1 * c2 + s1 * s2) - (1.0 - damping**2) * h * c1 * c2)
    e1 = field_expectation(params, 1)
    e2 = field_expectation(params, 2)
    return FieldStats(e1=e1, e2=e2, e1e2=field_correlation(params), covariance=covariance)


def field_expectation_operator(
    params: EntangledGbsParams, cavity: int, n_max: int = DEFAULT_N_MAX
) -> float:
    """Operator-oracle value of <E_j>: build the state, apply a + a-dagger."""
    if cavity not in (1, 2):
        raise ValueError(f"cavity must be 1 or 2, got {cavity!r}")
    state = entangled_gbs_state(params, n_max)
    if cavity == 1:
        op = joint(quadrature(n_max), identity(n_max))
    else:
        op = joint(identity(n_max), quadrature(n_max))
    return expectation(op, state).real


def field_correlation_operator(params: EntangledGbsParams, n_max: int = DEFAULT_N_MAX) -> float:
    """Operator-oracle value of <E_1 E_2>."""
    state = entangled_gbs_state(params, n_max)
    op = joint(quadrature(n_max), quadrature(n_max))
    return expectation(op, state).real
