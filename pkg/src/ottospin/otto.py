"""Cycle thermodynamics for the four-stroke engine.

Closed-form work, heats and efficiency as functions of the reservoir
parameters and the ramp transition probability, the work-extraction
condition, regime classification, the adiabatic baseline, and an
independent stroke-by-stroke evaluation from propagated states.

Sign conventions: work is negative when the engine extracts it, heat is
positive when absorbed by the working medium.  All energies are in h*Hz
(h=1 units).  The closed forms are evaluated with |beta_hot| explicit;
the equivalent signed-beta expressions are exercised in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, RegimeError
from .propagator import Propagator, RampProtocol, propagate, transition_probability
from .qspin import DensityMatrix, ReservoirSpec, gibbs_state

XI_MAX = 0.5
_XI_SLOP = 1e-9


class Regime(str, Enum):
    """Operating regime of a cycle point.

    ``SUPER_OTTO`` marks the region where finite-time driving pushes the
    efficiency at or above the quasi-static bound 1 - nu_cold/nu_hot;
    ``SUB_OTTO`` the region where it falls below; ``NOT_ENGINE`` points
    where no net work is extracted at the given transition probability.
    """

    NOT_ENGINE = "NotEngine"
    SUB_OTTO = "EngineSubOtto"
    SUPER_OTTO = "EngineSuperOtto"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class CyclePoint:
    """Reservoir pair plus ramp transition probability entering the closed forms."""

    cold: ReservoirSpec
    hot: ReservoirSpec
    xi: float

    def __post_init__(self):
        if self.cold.beta <= 0:
            raise DomainError("cold reservoir must have beta > 0 (p+ < 1/2)")
        if self.hot.beta >= 0:
            raise DomainError("hot reservoir must have beta < 0 (population inversion)")
        if self.hot.nu <= self.cold.nu:
            raise DomainError("hot frequency must exceed cold frequency")
        if not (0.0 <= self.xi <= XI_MAX + _XI_SLOP):
            raise DomainError(f"xi must lie in [0, 1/2], got {self.xi}")


def thermal_weights(point: CyclePoint) -> tuple[float, float]:
    """(tanh(beta_cold*nu_cold/2), tanh(|beta_hot|*nu_hot/2)).

    These equal 1-2p+ for the cold reservoir and 2p+-1 for the inverted
    hot reservoir; every cycle quantity depends on the temperatures only
    through this pair.
    """
    t_cold = math.tanh(0.5 * point.cold.beta * point.cold.nu)
    t_hot = math.tanh(0.5 * abs(point.hot.beta) * point.hot.nu)
    return t_cold, t_hot


def net_work(point: CyclePoint) -> float:
    """Average net work per cycle (h*Hz); negative when extracted."""
    t_cold, t_hot = thermal_weights(point)
    adiabatic = -0.5 * (point.hot.nu - point.cold.nu) * (t_cold + t_hot)
    friction = point.xi * (point.hot.nu * t_cold - point.cold.nu * t_hot)
    return adiabatic + friction


def heat_hot(point: CyclePoint) -> float:
    """Average heat absorbed from the inverted reservoir (h*Hz)."""
    t_cold, t_hot = thermal_weights(point)
    return 0.5 * point.hot.nu * (t_cold + t_hot) - point.xi * point.hot.nu * t_cold


def heat_cold(point: CyclePoint) -> float:
    """Average heat exchanged with the positive-temperature reservoir (h*Hz)."""
    t_cold, t_hot = thermal_weights(point)
    return -0.5 * point.cold.nu * (t_cold + t_hot) + point.xi * point.cold.nu * t_hot


def adiabatic_work(point: CyclePoint) -> float:
    """Net work of the quasi-static cycle with the same reservoirs (h*Hz)."""
    t_cold, t_hot = thermal_weights(point)
    return -0.5 * (point.hot.nu - point.cold.nu) * (t_cold + t_hot)


def inner_friction(point: CyclePoint) -> float:
    """Finite-time work excess over the adiabatic baseline; negative
    friction means faster driving extracts more work."""
    return net_work(point) - adiabatic_work(point)


def eta_otto(nu_cold: float, nu_hot: float) -> float:
    """Quasi-static efficiency bound 1 - nu_cold/nu_hot."""
    return 1.0 - nu_cold / nu_hot


@dataclass(frozen=True)
class EngineCondition:
    """Work-extraction verdict and the transition-probability bound behind it."""

    is_engine: bool
    xi_bound: float


def engine_condition(point: CyclePoint) -> EngineCondition:
    """Check whether net work is extracted at this point.

    Work extraction requires xi below
    (nu_hot - nu_cold)(t_cold + t_hot) / (2*(nu_hot*t_cold - nu_cold*t_hot))
    when the denominator is positive.  When it vanishes or is negative
    the friction term cannot spoil extraction, so the bound is infinite
    and the point is an engine for every xi.
    """
    t_cold, t_hot = thermal_weights(point)
    gain = 0.5 * (point.hot.nu - point.cold.nu) * (t_cold + t_hot)
    friction_rate = point.hot.nu * t_cold - point.cold.nu * t_hot
    if friction_rate <= 0.0:
        return EngineCondition(is_engine=True, xi_bound=math.inf)
    bound = gain / friction_rate
    return EngineCondition(is_engine=point.xi < bound, xi_bound=bound)


def regime(point: CyclePoint) -> Regime:
    """Classify the point: no engine, or engine below/at-or-above the
    quasi-static efficiency bound.

    The split follows the thermal weights: t_hot >= t_cold (equivalently
    |beta_hot|*nu_hot >= beta_cold*nu_cold) makes the efficiency ratio
    factor (1-2*xi*F)/(1-2*xi*G) <= 1 and hence eta >= eta_otto, with
    equality classified as SUPER_OTTO.
    """
    if not engine_condition(point).is_engine:
        return Regime.NOT_ENGINE
    t_cold, t_hot = thermal_weights(point)
    return Regime.SUPER_OTTO if t_hot >= t_cold else Regime.SUB_OTTO


def efficiency(point: CyclePoint) -> float:
    """Engine efficiency -W/Q_hot; only defined in the engine regime."""
    work = net_work(point)
    q_in = heat_hot(point)
    if not (work < 0.0 and q_in > 0.0):
        raise RegimeError(
            f"efficiency undefined outside the engine regime (W={work:.6g}, Q_hot={q_in:.6g})"
        )
    return -work / q_in


def efficiency_ratio_form(point: CyclePoint) -> float:
    """Efficiency as 1 - (nu_cold/nu_hot)*(1-2*xi*F)/(1-2*xi*G).

    F and G are the hot and cold thermal weights normalized by their
    sum.  Algebraically identical to -W/Q_hot; kept as an independent
    evaluation path for cross-checks.
    """
    t_cold, t_hot = thermal_weights(point)
    total = t_cold + t_hot
    f_weight = t_hot / total
    g_weight = t_cold / total
    ratio = (1.0 - 2.0 * point.xi * f_weight) / (1.0 - 2.0 * point.xi * g_weight)
    return 1.0 - (point.cold.nu / point.hot.nu) * ratio


@dataclass(frozen=True)
class CycleResult:
    """All per-cycle outputs.

    Energies are in h*Hz; ``efficiency`` is None outside the engine
    regime.  Construction enforces the first law, the friction/adiabatic
    split, and sign consistency of the regime label.
    """

    xi: float
    work: float
    q_hot: float
    q_cold: float
    efficiency: float | None
    eta_otto: float
    work_adiabatic: float
    inner_friction: float
    regime: Regime

    def __post_init__(self):
        scale = abs(self.q_hot) + abs(self.q_cold) + 1.0
        if abs(self.work + self.q_hot + self.q_cold) > 1e-10 * scale:
            raise DomainError("cycle result violates the first law")
        if abs(self.inner_friction - (self.work - self.work_adiabatic)) > 1e-12 * scale:
            raise DomainError("inner friction is inconsistent with the adiabatic split")
        if self.regime is not Regime.NOT_ENGINE:
            if not (self.work < 0.0 and self.q_hot > 0.0 and self.q_cold < 0.0):
                raise DomainError("engine regime label contradicts the energy-flow signs")


def _assemble_result(point: CyclePoint, work: float, q_hot_val: float, q_cold_val: float,
                     label: Regime) -> CycleResult:
    w_ad = adiabatic_work(point)
    eta = -work / q_hot_val if label is not Regime.NOT_ENGINE else None
    return CycleResult(
        xi=point.xi,
        work=work,
        q_hot=q_hot_val,
        q_cold=q_cold_val,
        efficiency=eta,
        eta_otto=eta_otto(point.cold.nu, point.hot.nu),
        work_adiabatic=w_ad,
        inner_friction=work - w_ad,
        regime=label,
    )


def closed_form_cycle(point: CyclePoint) -> CycleResult:
    """Evaluate the full cycle from the closed-form expressions."""
    return _assemble_result(point, net_work(point), heat_hot(point), heat_cold(point),
                            regime(point))


@dataclass(frozen=True)
class CycleStates:
    """The four stroke-endpoint states and the propagators linking them."""

    rho1: DensityMatrix
    rho2: DensityMatrix
    rho3: DensityMatrix
    rho4: DensityMatrix
    expansion: Propagator
    compression: Propagator


def evolve_cycle_states(cold: ReservoirSpec, hot: ReservoirSpec,
                        proto: RampProtocol) -> CycleStates:
    """Propagate the cycle: Gibbs resets at each reservoir, unitary ramps between."""
    _check_frequencies(cold, hot, proto)
    u = propagate(proto, "expansion")
    v = propagate(proto, "compression")
    rho1 = gibbs_state(proto.cold_hamiltonian(), cold.beta)
    rho3 = gibbs_state(proto.hot_hamiltonian(), hot.beta)
    rho2 = DensityMatrix(u.matrix @ rho1.mat @ u.matrix.conj().T)
    rho4 = DensityMatrix(v.matrix @ rho3.mat @ v.matrix.conj().T)
    return CycleStates(rho1=rho1, rho2=rho2, rho3=rho3, rho4=rho4,
                       expansion=u, compression=v)


def _check_frequencies(cold: ReservoirSpec, hot: ReservoirSpec, proto: RampProtocol) -> None:
    if not (cold.nu == proto.nu_cold and hot.nu == proto.nu_hot):
        raise DomainError("reservoir frequencies must match the ramp protocol")


def trace_cycle(cold: ReservoirSpec, hot: ReservoirSpec, proto: RampProtocol) -> CycleResult:
    """Evaluate the cycle stroke by stroke from energy expectation values.

    Work is the energy change across both unitary ramps and each heat is
    the energy change across its Gibbs reset.  No closed-form identity
    enters, which makes this the independent reference the closed forms
    are checked against.
    """
    states = evolve_cycle_states(cold, hot, proto)
    h_cold = proto.cold_hamiltonian()
    h_hot = proto.hot_hamiltonian()
    e1 = states.rho1.expectation(h_cold)
    e2 = states.rho2.expectation(h_hot)
    e3 = states.rho3.expectation(h_hot)
    e4 = states.rho4.expectation(h_cold)
    work = (e2 - e1) + (e4 - e3)
    q_hot_val = e3 - e2
    q_cold_val = e1 - e4
    hot_basis = proto.hot_basis()
    cold_basis = proto.cold_basis()
    xi = float(abs(hot_basis.plus.conj() @ states.expansion.matrix @ cold_basis.minus) ** 2)
    point = CyclePoint(cold=cold, hot=hot, xi=min(xi, XI_MAX + _XI_SLOP))
    if work < 0.0 and q_hot_val > 0.0:
        t_cold, t_hot = thermal_weights(point)
        label = Regime.SUPER_OTTO if t_hot >= t_cold else Regime.SUB_OTTO
    else:
        label = Regime.NOT_ENGINE
    return _assemble_result(point, work, q_hot_val, q_cold_val, label)


def cycle_from_protocol(cold: ReservoirSpec, hot: ReservoirSpec,
                        proto: RampProtocol) -> CycleResult:
    """Closed-form cycle with the transition probability taken from the ramp."""
    _check_frequencies(cold, hot, proto)
    xi = transition_probability(proto)
    return closed_form_cycle(CyclePoint(cold=cold, hot=hot, xi=min(xi, XI_MAX + _XI_SLOP)))
