"""Parameter sweeps, state fidelity, the bundled tomography regression
check, and the regime crossing finder.

Sweeps add no physics: each grid cell delegates to the otto/propagator
modules, cells are independent, and rows are emitted in deterministic
grid order.  Tables serialize to CSV and JSON with full round-trip float
precision; non-engine cells carry an empty efficiency value plus the
explicit regime label, never NaN.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import DomainError
from .otto import CyclePoint, Regime, closed_form_cycle, evolve_cycle_states, regime
from .propagator import RampProtocol, suggested_steps, transition_probability
from .qspin import DensityMatrix, ReservoirSpec, beta_from_population

_REFERENCE_RESOURCE = "tomography_reference.json"


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Regime):
        return value.value
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def _json_cell(value):
    if isinstance(value, Regime):
        return value.value
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


@dataclass(frozen=True)
class SweepTable:
    """Rectangular sweep output: named columns, rows in grid order, and
    the settings that produced them."""

    columns: tuple[str, ...]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise DomainError("sweep table rows must match the column count")

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_format_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "columns": list(self.columns),
            "metadata": {k: _json_cell(v) for k, v in self.metadata.items()},
            "rows": [[_json_cell(v) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _sorted_grid(values, name: str) -> np.ndarray:
    grid = np.sort(np.asarray(list(values), dtype=float))
    if grid.size == 0:
        raise DomainError(f"{name} must not be empty")
    if not np.all(np.isfinite(grid)):
        raise DomainError(f"{name} contains non-finite values")
    return grid


def _scaled_protocol(nu_cold: float, nu_hot: float, tau: float, steps: int) -> RampProtocol:
    return RampProtocol(nu_cold=nu_cold, nu_hot=nu_hot, tau=tau,
                        steps=suggested_steps(nu_hot, tau, base=steps))


def sweep_xi_vs_tau(proto_base: RampProtocol, tau_grid) -> SweepTable:
    """Transition probability against drive time.

    Step counts are scaled up per row when the base count cannot hold
    the drift target for a long ramp.
    """
    taus = _sorted_grid(tau_grid, "tau grid")
    if taus[0] <= 0 or taus[-1] > 1.0:
        raise DomainError("tau grid must lie within (0, 1] seconds")
    rows = []
    for tau in taus:
        proto = _scaled_protocol(proto_base.nu_cold, proto_base.nu_hot, float(tau),
                                 proto_base.steps)
        rows.append((float(tau), proto.steps, transition_probability(proto)))
    return SweepTable(
        columns=("tau_s", "steps", "xi"),
        rows=rows,
        metadata={"nu_cold_hz": proto_base.nu_cold, "nu_hot_hz": proto_base.nu_hot,
                  "base_steps": proto_base.steps},
    )


def region_map(p_cold_plus: float, nu_cold: float, nu_hot: float,
               p_hot_grid, xi_grid) -> SweepTable:
    """Regime label and efficiency over a (p_hot, xi) grid.

    Non-engine cells (xi at or above the work-extraction bound) carry an
    empty efficiency value.
    """
    cold = ReservoirSpec.from_population(nu_cold, p_cold_plus)
    p_grid = _sorted_grid(p_hot_grid, "p_hot grid")
    x_grid = _sorted_grid(xi_grid, "xi grid")
    if p_grid[0] <= 0.5 or p_grid[-1] >= 1.0:
        raise DomainError("p_hot grid must lie within (0.5, 1)")
    if x_grid[0] < 0.0 or x_grid[-1] > 0.5:
        raise DomainError("xi grid must lie within [0, 0.5]")
    rows = []
    for p_hot in p_grid:
        hot = ReservoirSpec.from_population(nu_hot, float(p_hot))
        for xi in x_grid:
            point = CyclePoint(cold=cold, hot=hot, xi=float(xi))
            label = regime(point)
            eta = None
            if label is not Regime.NOT_ENGINE:
                eta = closed_form_cycle(point).efficiency
            rows.append((float(p_hot), float(xi), label, eta))
    return SweepTable(
        columns=("p_hot_plus", "xi", "regime", "eta"),
        rows=rows,
        metadata={"p_cold_plus": p_cold_plus, "nu_cold_hz": nu_cold, "nu_hot_hz": nu_hot},
    )


def _efficiency_cells(cold: ReservoirSpec, hot: ReservoirSpec, xi: float):
    point = CyclePoint(cold=cold, hot=hot, xi=xi)
    result = closed_form_cycle(point)
    return result.efficiency, result.regime


def sweep_efficiency_vs_population(p_cold_plus: float, nu_cold: float, nu_hot: float,
                                   tau_list, p_hot_grid, steps: int = 4096) -> SweepTable:
    """Efficiency against hot-reservoir population, one curve per drive time.

    The transition probability is computed once per drive time; all
    curves meet the quasi-static bound where the two thermal weights
    match, so they intersect at the regime crossing.
    """
    cold = ReservoirSpec.from_population(nu_cold, p_cold_plus)
    taus = _sorted_grid(tau_list, "tau list")
    p_grid = _sorted_grid(p_hot_grid, "p_hot grid")
    if p_grid[0] <= 0.5 or p_grid[-1] >= 1.0:
        raise DomainError("p_hot grid must lie within (0.5, 1)")
    xis = [
        transition_probability(_scaled_protocol(nu_cold, nu_hot, float(tau), steps))
        for tau in taus
    ]
    n = len(taus)
    columns = (
        ["p_hot_plus"]
        + [f"xi_tau_{i}" for i in range(n)]
        + [f"eta_tau_{i}" for i in range(n)]
        + ["eta_otto"]
        + [f"regime_tau_{i}" for i in range(n)]
    )
    rows = []
    for p_hot in p_grid:
        hot = ReservoirSpec.from_population(nu_hot, float(p_hot))
        etas, labels = [], []
        for xi in xis:
            eta, label = _efficiency_cells(cold, hot, xi)
            etas.append(eta)
            labels.append(label)
        rows.append(tuple([float(p_hot)] + xis + etas + [1.0 - nu_cold / nu_hot] + labels))
    return SweepTable(
        columns=tuple(columns),
        rows=rows,
        metadata={"p_cold_plus": p_cold_plus, "nu_cold_hz": nu_cold, "nu_hot_hz": nu_hot,
                  "tau_list_s": [float(t) for t in taus], "steps": steps},
    )


def sweep_efficiency_vs_ratio(p_cold_plus: float, nu_cold: float, ratio_list,
                              tau: float, p_hot_grid, steps: int = 4096) -> SweepTable:
    """Efficiency against hot-reservoir population, one curve per
    frequency ratio nu_cold/nu_hot at fixed drive time."""
    cold = ReservoirSpec.from_population(nu_cold, p_cold_plus)
    ratios = _sorted_grid(ratio_list, "ratio list")
    if ratios[0] <= 0.0 or ratios[-1] >= 1.0:
        raise DomainError("frequency ratios must lie within (0, 1)")
    p_grid = _sorted_grid(p_hot_grid, "p_hot grid")
    if p_grid[0] <= 0.5 or p_grid[-1] >= 1.0:
        raise DomainError("p_hot grid must lie within (0.5, 1)")
    nu_hots = [nu_cold / float(r) for r in ratios]
    xis = [
        transition_probability(_scaled_protocol(nu_cold, nu_hot, tau, steps))
        for nu_hot in nu_hots
    ]
    n = len(ratios)
    columns = (
        ["p_hot_plus"]
        + [f"xi_ratio_{i}" for i in range(n)]
        + [f"eta_ratio_{i}" for i in range(n)]
        + [f"eta_otto_ratio_{i}" for i in range(n)]
        + [f"regime_ratio_{i}" for i in range(n)]
    )
    rows = []
    for p_hot in p_grid:
        etas, labels = [], []
        for nu_hot, xi in zip(nu_hots, xis):
            hot = ReservoirSpec.from_population(nu_hot, float(p_hot))
            eta, label = _efficiency_cells(cold, hot, xi)
            etas.append(eta)
            labels.append(label)
        otto_limits = [1.0 - nu_cold / nu_hot for nu_hot in nu_hots]
        rows.append(tuple([float(p_hot)] + xis + etas + otto_limits + labels))
    return SweepTable(
        columns=tuple(columns),
        rows=rows,
        metadata={"p_cold_plus": p_cold_plus, "nu_cold_hz": nu_cold, "tau_s": tau,
                  "ratios": [float(r) for r in ratios], "steps": steps},
    )


def fidelity(a, b) -> float:
    """Normalized overlap |Tr(a b^dag)| / sqrt(Tr a^2) / sqrt(Tr b^2).

    Symmetric, 1 exactly when the states coincide, and bounded by 1 for
    Hermitian inputs.  Accepts DensityMatrix values or plain 2x2 arrays.
    """
    am = a.mat if isinstance(a, DensityMatrix) else np.asarray(a, dtype=complex)
    bm = b.mat if isinstance(b, DensityMatrix) else np.asarray(b, dtype=complex)
    if am.shape != (2, 2) or bm.shape != (2, 2):
        raise DomainError("fidelity expects 2x2 matrices")
    purity_a = float(np.trace(am @ am).real)
    purity_b = float(np.trace(bm @ bm).real)
    if purity_a <= 0.0 or purity_b <= 0.0:
        raise DomainError("fidelity undefined for zero-purity input")
    overlap = abs(np.trace(am @ bm.conj().T))
    return float(overlap / (math.sqrt(purity_a) * math.sqrt(purity_b)))


@dataclass(frozen=True)
class FidelityPair:
    label: str
    experimental: DensityMatrix
    theoretical: DensityMatrix
    fidelity: float


@dataclass(frozen=True)
class FidelityReport:
    pairs: tuple[FidelityPair, ...]

    def __post_init__(self):
        for pair in self.pairs:
            if not (0.0 <= pair.fidelity <= 1.0 + 1e-12):
                raise DomainError(f"fidelity for {pair.label} outside [0, 1]")


@dataclass(frozen=True)
class ReferenceCheck:
    """Outcome of regenerating the bundled tomography reference set.

    ``failures`` lists every comparison outside tolerance; an
    out-of-tolerance result is reported here rather than raised.
    """

    report: FidelityReport
    entry_deviations: dict
    fidelity_deviations: dict
    entry_tolerance: float
    fidelity_tolerance: float
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _decode_matrix(cells) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in cells])


def load_reference_data() -> dict:
    """Parse the bundled tomography reference set."""
    raw = resources.files(__package__).joinpath("data", _REFERENCE_RESOURCE).read_text()
    data = json.loads(raw)
    for record in data["states"].values():
        record["experimental"] = _decode_matrix(record["experimental"])
        record["theory"] = _decode_matrix(record["theory"])
    return data


def tomography_reference_check(proto: RampProtocol | None = None,
                               p_cold_plus: float | None = None,
                               p_hot_plus: float | None = None,
                               entry_tolerance: float = 0.005,
                               fidelity_tolerance: float = 0.002) -> ReferenceCheck:
    """Regenerate the reference stroke states and compare against the
    bundled set, entrywise and by fidelity.

    Defaults reproduce the reference operating point (2 kHz, 3.6 kHz,
    200 us, populations 0.26 / 0.813).
    """
    data = load_reference_data()
    if proto is None:
        proto = RampProtocol(nu_cold=data["nu_cold_hz"], nu_hot=data["nu_hot_hz"],
                             tau=data["tau_s"])
    if p_cold_plus is None:
        p_cold_plus = data["p_cold_plus"]
    if p_hot_plus is None:
        p_hot_plus = data["p_hot_plus"]
    cold = ReservoirSpec.from_population(proto.nu_cold, p_cold_plus)
    hot = ReservoirSpec.from_population(proto.nu_hot, p_hot_plus)
    states = evolve_cycle_states(cold, hot, proto)
    regenerated = {"rho1": states.rho1, "rho2": states.rho2,
                   "rho3": states.rho3, "rho4": states.rho4}

    pairs = []
    entry_dev = {}
    fid_dev = {}
    failures = []
    for label, record in data["states"].items():
        theory = regenerated[label]
        entry_dev[label] = float(np.max(np.abs(theory.mat - record["theory"])))
        if entry_dev[label] > entry_tolerance:
            failures.append(
                f"{label}: regenerated state deviates from reference by "
                f"{entry_dev[label]:.4f} (> {entry_tolerance})"
            )
        value = fidelity(DensityMatrix(record["experimental"]), theory)
        fid_dev[label] = abs(value - record["fidelity"])
        if fid_dev[label] > fidelity_tolerance:
            failures.append(
                f"{label}: fidelity {value:.4f} differs from reference "
                f"{record['fidelity']:.4f} by {fid_dev[label]:.4f} (> {fidelity_tolerance})"
            )
        pairs.append(FidelityPair(label=label,
                                  experimental=DensityMatrix(record["experimental"]),
                                  theoretical=theory, fidelity=value))
    return ReferenceCheck(
        report=FidelityReport(pairs=tuple(pairs)),
        entry_deviations=entry_dev,
        fidelity_deviations=fid_dev,
        entry_tolerance=entry_tolerance,
        fidelity_tolerance=fidelity_tolerance,
        failures=tuple(failures),
    )


def find_crossing_population(p_cold_plus: float, nu_cold: float, nu_hot: float,
                             tolerance: float = 1e-10) -> float | None:
    """Hot-reservoir population where the two thermal weights match.

    Solves tanh(beta_cold*nu_cold/2) = tanh(|beta_hot|*nu_hot/2) for
    p_hot by bisection (the right side is strictly increasing in p_hot,
    so bisection converges unconditionally).  At the returned population
    the efficiency equals the quasi-static bound for every xi; returns
    None when no root lies inside (0.5, 1), and 0.5 in the degenerate
    p_cold = 1/2 limit.
    """
    if not (0.0 < p_cold_plus <= 0.5):
        raise DomainError("cold population must lie in (0, 0.5]")
    if not (0 < nu_cold < nu_hot):
        raise DomainError("frequencies must satisfy 0 < nu_cold < nu_hot")
    if p_cold_plus == 0.5:
        return 0.5
    target = math.tanh(0.5 * beta_from_population(p_cold_plus, nu_cold) * nu_cold)

    def gap(p_hot: float) -> float:
        beta_hot = beta_from_population(p_hot, nu_hot)
        return target - math.tanh(0.5 * abs(beta_hot) * nu_hot)

    lo, hi = 0.5 + 1e-12, 1.0 - 1e-12
    if gap(hi) > 0.0:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = gap(mid)
        if abs(value) <= tolerance and hi - lo <= 1e-12:
            return mid
        if value > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
