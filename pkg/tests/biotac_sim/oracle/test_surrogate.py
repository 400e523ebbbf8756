import math

import numpy as np
import pytest

from biotac_sim.calibration import apply_offset
from biotac_sim.oracle import (
    cycle_schedule,
    default_oracle_config,
    force_profile,
    generate_dataset,
    surrogate_response,
    temperature_at,
)
from biotac_sim.schema import (
    ELECTRODE_NAMES,
    CycleSpec,
    DriftParams,
    OracleConfig,
    PoseOffset,
)
from biotac_sim.sensor import contact_histogram, default_layout, select_contact_probes

# ----------- #
# Temperature #
# ----------- #


def test_temperature_at_tick_zero():
    drift = DriftParams(t0_counts=2000, t_inf_counts=2600, tau_ticks=1000)
    assert temperature_at(0, drift) == 2000.0


def test_temperature_asymptote():
    drift = DriftParams(t0_counts=2000, t_inf_counts=2600, tau_ticks=1000)
    assert abs(temperature_at(10_000, drift) - 2600.0) < 0.005 * 600


def test_temperature_one_time_constant():
    drift = DriftParams(t0_counts=2000, t_inf_counts=2600, tau_ticks=1000)
    assert temperature_at(1000, drift) == pytest.approx(2600 - 600 * math.exp(-1), abs=1e-9)
    assert temperature_at(1000, drift) == pytest.approx(2379.28, abs=0.01)


def test_temperature_is_monotone():
    values = temperature_at(np.arange(0, 5000, 50), DriftParams())
    assert np.all(np.diff(values) > 0)


def test_temperature_rejects_negative_tick():
    with pytest.raises(ValueError):
        temperature_at(-1, DriftParams())


# -------- #
# Response #
# -------- #


@pytest.fixture
def quiet():
    return OracleConfig(noise_std_counts=0.0)


def test_no_force_gives_base_levels(quiet):
    values = surrogate_response((8.0, 7.0, 0.0), (0.0, 0.0, 0.0), quiet.drift.t0_counts, quiet)
    assert [values[e] for e in ELECTRODE_NAMES] == quiet.electrode_base


def test_gaussian_footprint(quiet):
    layout = default_layout()
    p5 = np.asarray(layout.positions_mm[4])
    force = (0.0, 0.0, 2.0)
    t0 = quiet.drift.t0_counts
    base = quiet.electrode_base[4]
    at = surrogate_response(p5, force, t0, quiet)["e5"] - base
    lateral = p5 + np.array([3.0 * quiet.spatial_sigma_mm, 0.0, 0.0])
    off = surrogate_response(lateral, force, t0, quiet)["e5"] - base
    assert at / off == pytest.approx(math.exp(4.5), rel=1e-9)


def test_temperature_term_is_linear(quiet):
    point, force = (10.0, 0.0, -7.0), (0.0, 0.0, 1.0)
    low = surrogate_response(point, force, 2200.0, quiet)
    high = surrogate_response(point, force, 2300.0, quiet)
    for i, e in enumerate(ELECTRODE_NAMES):
        assert high[e] - low[e] == pytest.approx(100.0 * quiet.temp_coupling[i], abs=1e-9)


def test_tip_electrodes_respond_stronger(quiet):
    layout = default_layout()
    force = (0.0, 0.0, 2.0)
    t0 = quiet.drift.t0_counts
    tip = surrogate_response(layout.positions_mm[7], force, t0, quiet)["e8"] - quiet.electrode_base[7]
    side = surrogate_response(layout.positions_mm[0], force, t0, quiet)["e1"] - quiet.electrode_base[0]
    assert tip == pytest.approx(quiet.tip_fluid_factor * side)


def test_channels_stay_in_raw_range():
    config = OracleConfig(noise_std_counts=0.0, electrode_gain=[1e6] * 19)
    values = surrogate_response((2.0, 6.0622, -3.5), (0.0, 0.0, 50.0), 4000.0, config)
    assert max(values.values()) <= 4095.0
    assert min(values.values()) >= 0.0


# ---------- #
# Trajectory #
# ---------- #


def test_force_profile_ends_light():
    cycle = CycleSpec(center_mm=(8.0, 7.0, 0.0), peak_force_n=2.0, ramp_ticks=50, hold_ticks=30)
    profile = force_profile(cycle)
    assert len(profile) == cycle.length_ticks == 130
    assert profile.max() == 2.0
    assert profile[-1] == pytest.approx(0.04)


def test_cycles_start_on_position_updates():
    cycles = [CycleSpec(center_mm=(8.0, 7.0, 0.0), peak_force_n=1.0, hold_ticks=h) for h in (13, 7, 0)]
    spans = cycle_schedule(OracleConfig(cycles=cycles, gap_ticks=15))
    assert all(start % 10 == 0 for start, _ in spans)
    assert spans[0] == (20, 133)


def test_cycles_must_fit():
    cycles = [CycleSpec(center_mm=(8.0, 7.0, 0.0), peak_force_n=1.0)] * 3
    with pytest.raises(ValueError):
        cycle_schedule(OracleConfig(cycles=cycles, duration_ticks=300))


# ------- #
# Dataset #
# ------- #


def test_generation_is_deterministic():
    config = default_oracle_config(seed=5, n_cycles=4)
    assert generate_dataset(config).equals(generate_dataset(config))


def test_different_seeds_differ():
    a = generate_dataset(default_oracle_config(seed=5, n_cycles=4))
    b = generate_dataset(default_oracle_config(seed=6, n_cycles=4))
    assert not a.equals(b)


def test_no_cycles_is_base_plus_temperature():
    config = OracleConfig(noise_std_counts=0.0, duration_ticks=500)
    ds = generate_dataset(config)
    assert np.all(ds.forces == 0.0)
    assert np.all(ds.cycle_ids == -1)
    tdc = ds.channels(["tdc"])[:, 0]
    electrodes = ds.channels(ELECTRODE_NAMES)
    expected = np.asarray(config.electrode_base)[None, :] + np.asarray(config.temp_coupling)[
        None, :
    ] * (tdc - config.drift.t0_counts)[:, None]
    np.testing.assert_allclose(electrodes, expected, atol=1e-9)


def test_positions_hold_between_updates(desk_dataset):
    pos = desk_dataset.positions
    for start in range(0, len(pos) - 10, 10):
        assert np.all(pos[start : start + 10] == pos[start])


def test_histogram_follows_cycle_placement():
    layout = default_layout()
    placement = [1] * 10 + [7] * 15 + [12] * 5
    cycles = [
        CycleSpec(center_mm=tuple(layout.positions_mm[k - 1]), peak_force_n=2.0)
        for k in placement
    ]
    config = OracleConfig(cycles=cycles, duration_ticks=8000, noise_std_counts=1.0)
    ds = generate_dataset(config)

    probes = select_contact_probes(ds, 0.3, 2.0, "contact_start", layout.capsule)
    counts = contact_histogram(probes, layout)

    assert len(probes) == 30
    assert counts[0] == 10
    assert counts[6] == 15
    assert counts[11] == 5
    assert counts.sum() == 30


def test_pose_offset_only_moves_recorded_positions():
    offset = PoseOffset(translation_mm=(1.0, -0.5, 0.25), rotation=(0.0, 0.02, 0.0))
    clean_config = default_oracle_config(seed=2, n_cycles=3)
    clean = generate_dataset(clean_config)
    shifted = generate_dataset(clean_config.model_copy(update={"pose_offset": offset}))

    np.testing.assert_array_equal(clean.channels(ELECTRODE_NAMES), shifted.channels(ELECTRODE_NAMES))
    np.testing.assert_allclose(shifted.positions, apply_offset(offset, clean.positions), atol=1e-12)


def test_default_config_sizes_duration():
    config = default_oracle_config(seed=1, n_cycles=5)
    spans = cycle_schedule(config)
    assert config.duration_ticks == spans[-1][1] + 100
    assert len(config.cycles) == 5
    assert all(1.5 <= c.peak_force_n <= 4.0 for c in config.cycles)
