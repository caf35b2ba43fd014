import csv
import io
import json
import math

import numpy as np
import pytest

from ottospin import (
    DensityMatrix,
    DomainError,
    Regime,
    ReservoirSpec,
    engine_condition,
    fidelity,
    find_crossing_population,
    region_map,
    sweep_efficiency_vs_population,
    sweep_efficiency_vs_ratio,
    sweep_xi_vs_tau,
    tomography_reference_check,
)
from ottospin.otto import CyclePoint

NU_COLD = 2000.0
NU_HOT = 3600.0


def test_fidelity_identity_and_symmetry():
    rho = DensityMatrix(np.array([[0.7, 0.1 + 0.05j], [0.1 - 0.05j, 0.3]]))
    sigma = DensityMatrix(np.array([[0.4, -0.2j], [0.2j, 0.6]]))
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(rho, sigma) == pytest.approx(fidelity(sigma, rho), abs=1e-12)
    assert 0.0 <= fidelity(rho, sigma) <= 1.0 + 1e-12


def test_fidelity_orthogonal_pure_states():
    up = np.diag([1.0, 0.0]).astype(complex)
    down = np.diag([0.0, 1.0]).astype(complex)
    assert fidelity(up, down) == pytest.approx(0.0, abs=1e-15)


def test_fidelity_rejects_zero_purity():
    with pytest.raises(DomainError):
        fidelity(np.zeros((2, 2)), np.eye(2) / 2)


def test_reference_fidelities(reference_data, baseline_protocol):
    outcome = tomography_reference_check(proto=baseline_protocol)
    expected = {name: rec["fidelity"] for name, rec in reference_data["states"].items()}
    measured = {pair.label: pair.fidelity for pair in outcome.report.pairs}
    for name in ("rho1", "rho2", "rho3", "rho4"):
        assert measured[name] == pytest.approx(expected[name], abs=0.002)


def test_reference_check_passes(baseline_protocol):
    outcome = tomography_reference_check(proto=baseline_protocol)
    assert outcome.passed
    assert not outcome.failures
    assert max(outcome.entry_deviations.values()) <= 0.005


def test_reference_check_reports_mismatch_without_raising(baseline_protocol):
    outcome = tomography_reference_check(proto=baseline_protocol, p_hot_plus=0.65)
    assert not outcome.passed
    assert any("rho3" in failure for failure in outcome.failures)


def test_reference_fixtures_are_valid_states(reference_data):
    for record in reference_data["states"].values():
        rho = DensityMatrix(record["experimental"])
        assert abs(np.trace(rho.mat) - 1.0) < 1e-12


def test_crossing_value_and_scale_invariance():
    crossing = find_crossing_population(0.261, NU_COLD, NU_HOT)
    assert crossing == pytest.approx(1.0 - 0.261, abs=1e-9)
    rescaled = find_crossing_population(0.261, 3.0 * NU_COLD, 3.0 * NU_HOT)
    assert rescaled == pytest.approx(crossing, abs=1e-9)
    # Residual of the defining equation at the returned root.
    beta_cold = math.log(0.739 / 0.261) / NU_COLD
    beta_hot = math.log((1.0 - crossing) / crossing) / NU_HOT
    gap = math.tanh(0.5 * beta_cold * NU_COLD) - math.tanh(0.5 * abs(beta_hot) * NU_HOT)
    assert abs(gap) <= 1e-10


def test_crossing_other_population():
    assert find_crossing_population(0.4, NU_COLD, NU_HOT) == pytest.approx(0.6, abs=1e-9)


def test_crossing_degenerate_and_missing():
    assert find_crossing_population(0.5, NU_COLD, NU_HOT) == 0.5
    assert find_crossing_population(1e-13, NU_COLD, NU_HOT) is None


def test_crossing_matches_regime_flip():
    crossing = find_crossing_population(0.261, NU_COLD, NU_HOT)
    cold = ReservoirSpec.from_population(NU_COLD, 0.261)
    below = CyclePoint(cold=cold, hot=ReservoirSpec.from_population(NU_HOT, crossing - 1e-6),
                       xi=0.2)
    above = CyclePoint(cold=cold, hot=ReservoirSpec.from_population(NU_HOT, crossing + 1e-6),
                       xi=0.2)
    from ottospin import regime

    assert regime(below) is Regime.SUB_OTTO
    assert regime(above) is Regime.SUPER_OTTO


def test_sweep_xi_vs_tau(baseline_protocol):
    taus = np.linspace(100e-6, 400e-6, 13)
    table = sweep_xi_vs_tau(baseline_protocol, taus)
    assert len(table.rows) == 13
    xis = table.column("xi")
    assert all(x <= 0.5 + 1e-9 for x in xis)
    assert xis[0] > xis[-1]
    again = sweep_xi_vs_tau(baseline_protocol, taus)
    assert again.rows == table.rows


def test_sweep_xi_sudden_row(baseline_protocol):
    table = sweep_xi_vs_tau(baseline_protocol, [1e-12, 200e-6])
    assert table.rows[0][-1] == pytest.approx(0.5, abs=1e-6)


def test_sweep_xi_rejects_bad_grid(baseline_protocol):
    with pytest.raises(DomainError):
        sweep_xi_vs_tau(baseline_protocol, [0.5, 2.0])
    with pytest.raises(DomainError):
        sweep_xi_vs_tau(baseline_protocol, [])


def test_region_map_cells_follow_work_extraction_bound():
    p_grid = np.linspace(0.51, 0.99, 13)
    xi_grid = np.linspace(0.0, 0.5, 11)
    table = region_map(0.261, NU_COLD, NU_HOT, p_grid, xi_grid)
    assert table.columns == ("p_hot_plus", "xi", "regime", "eta")
    assert len(table.rows) == 13 * 11
    cold = ReservoirSpec.from_population(NU_COLD, 0.261)
    crossing = 1.0 - 0.261
    blank_shallow = blank_deep = 0
    for p_hot, xi, label, eta in table.rows:
        point = CyclePoint(cold=cold, hot=ReservoirSpec.from_population(NU_HOT, p_hot),
                           xi=xi)
        if label is Regime.NOT_ENGINE:
            assert eta is None
            assert not engine_condition(point).is_engine
            if p_hot < crossing:
                blank_shallow += 1
            else:
                blank_deep += 1
        else:
            assert eta is not None
            assert engine_condition(point).is_engine
    assert blank_shallow >= 1
    assert blank_deep == 0


def test_region_map_boundary_separates_regimes():
    table = region_map(0.261, NU_COLD, NU_HOT, [0.70, 0.75], [0.2])
    labels = table.column("regime")
    assert labels == [Regime.SUB_OTTO, Regime.SUPER_OTTO]


def test_eta_phot_sweep_structure_and_crossing(xi_at_tau):
    taus = [100e-6, 200e-6, 300e-6, 400e-6]
    p_grid = [0.55, 0.739, 0.95]
    table = sweep_efficiency_vs_population(0.261, NU_COLD, NU_HOT, taus, p_grid)
    assert table.columns == (
        "p_hot_plus",
        "xi_tau_0", "xi_tau_1", "xi_tau_2", "xi_tau_3",
        "eta_tau_0", "eta_tau_1", "eta_tau_2", "eta_tau_3",
        "eta_otto",
        "regime_tau_0", "regime_tau_1", "regime_tau_2", "regime_tau_3",
    )
    by_p = {row[0]: row for row in table.rows}
    otto_limit = 1.0 - NU_COLD / NU_HOT
    # All curves meet the quasi-static limit at the crossing population.
    crossing_row = by_p[0.739]
    for i in range(4):
        eta = crossing_row[table.columns.index(f"eta_tau_{i}")]
        assert eta == pytest.approx(otto_limit, abs=1e-6)
    # Deep side: the fastest drive wins.
    deep_row = by_p[0.95]
    assert (deep_row[table.columns.index("eta_tau_0")]
            > deep_row[table.columns.index("eta_tau_3")])
    # Shallow side at 100 us is outside the engine window: null marker.
    shallow_row = by_p[0.55]
    assert shallow_row[table.columns.index("eta_tau_0")] is None
    assert shallow_row[table.columns.index("regime_tau_0")] is Regime.NOT_ENGINE
    # The xi columns repeat the per-tau transition probabilities.
    assert shallow_row[table.columns.index("xi_tau_1")] == pytest.approx(
        xi_at_tau(200e-6), abs=1e-12)


def test_eta_ratio_sweep_matches_population_sweep_and_orders_ratios():
    p_grid = [0.55, 0.739, 0.9]
    ratios = [0.4, NU_COLD / NU_HOT, 0.7]
    ratio_table = sweep_efficiency_vs_ratio(0.261, NU_COLD, ratios, 200e-6, p_grid)
    phot_table = sweep_efficiency_vs_population(0.261, NU_COLD, NU_HOT, [200e-6], p_grid)
    idx = sorted(range(len(ratios)), key=lambda i: ratios[i]).index(1)
    for row_r, row_p in zip(ratio_table.rows, phot_table.rows):
        eta_ratio = row_r[ratio_table.columns.index(f"eta_ratio_{idx}")]
        eta_phot = row_p[phot_table.columns.index("eta_tau_0")]
        if eta_ratio is None or eta_phot is None:
            assert eta_ratio is None and eta_phot is None
        else:
            assert eta_ratio == pytest.approx(eta_phot, rel=1e-12)
    # Smaller frequency ratio gives pointwise larger efficiency where
    # both operate as engines.
    low = ratio_table.column("eta_ratio_0")
    high = ratio_table.column("eta_ratio_2")
    compared = 0
    for eta_low, eta_high in zip(low, high):
        if eta_low is not None and eta_high is not None:
            assert eta_low > eta_high
            compared += 1
    assert compared >= 1
    # Each curve reaches its own quasi-static limit at the crossing.
    crossing_row = ratio_table.rows[ratio_table.column("p_hot_plus").index(0.739)]
    for i, ratio in enumerate(sorted(ratios)):
        eta = crossing_row[ratio_table.columns.index(f"eta_ratio_{i}")]
        limit = crossing_row[ratio_table.columns.index(f"eta_otto_ratio_{i}")]
        assert limit == pytest.approx(1.0 - ratio, rel=1e-12)
        if eta is not None:
            assert eta == pytest.approx(limit, abs=1e-6)


def test_sweep_table_csv_round_trip(baseline_protocol):
    table = sweep_efficiency_vs_population(0.261, NU_COLD, NU_HOT, [100e-6],
                                           [0.52, 0.9])
    text = table.to_csv()
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    assert header == list(table.columns)
    for parsed, row in zip(reader, table.rows):
        for cell, value in zip(parsed, row):
            if value is None:
                assert cell == ""
            elif isinstance(value, Regime):
                assert cell == value.value
            elif isinstance(value, float):
                assert float(cell) == value
    assert table.to_csv() == text  # byte-identical rerun


def test_sweep_table_json_serialization(baseline_protocol):
    table = sweep_xi_vs_tau(baseline_protocol, [100e-6, 200e-6])
    payload = json.loads(table.to_json())
    assert payload["columns"] == list(table.columns)
    assert len(payload["rows"]) == 2
    assert payload["metadata"]["nu_cold_hz"] == NU_COLD


def test_region_map_rejects_bad_grids():
    with pytest.raises(DomainError):
        region_map(0.261, NU_COLD, NU_HOT, [0.4, 0.8], [0.1])
    with pytest.raises(DomainError):
        region_map(0.261, NU_COLD, NU_HOT, [0.6, 0.8], [0.1, 0.7])


def test_scaled_steps_for_long_ramps(baseline_protocol):
    table = sweep_xi_vs_tau(baseline_protocol, [5e-3])
    assert table.rows[0][1] > baseline_protocol.steps
