import math

import pytest
from pydantic import ValidationError

from biotac_sim.schema import (
    OUTPUT_CHANNELS,
    CalibrationReport,
    Capsule,
    ChannelSet,
    DriftParams,
    FoldResult,
    NetSpec,
    NetworkBSpec,
    PoseOffset,
    TransformerSpec,
    TTestReport,
    WindowSpec,
)


@pytest.fixture
def capsule():
    return Capsule(p0=(0.0, 0.0, 0.0), p1=(16.0, 0.0, 0.0), radius_mm=7.0)


# ------- #
# Capsule #
# ------- #


def test_capsule_distance_on_axis_midpoint(capsule):
    assert capsule.signed_distance((8.0, 0.0, 0.0)) == pytest.approx(-7.0)


def test_capsule_distance_on_surface(capsule):
    assert capsule.signed_distance((8.0, 7.0, 0.0)) == pytest.approx(0.0)
    assert capsule.signed_distance((23.0, 0.0, 0.0)) == pytest.approx(0.0)


def test_capsule_rejects_degenerate_axis():
    with pytest.raises(ValidationError):
        Capsule(p0=(1.0, 1.0, 1.0), p1=(1.0, 1.0, 1.0), radius_mm=2.0)


# ------------ #
# Channel sets #
# ------------ #


def test_channel_set_defaults():
    cs = ChannelSet()
    assert cs.names == OUTPUT_CHANNELS
    assert cs.electrode_mask == list(range(19))


def test_channel_set_rejects_unscored_channels():
    names = list(OUTPUT_CHANNELS[:-1]) + ["tac"]
    with pytest.raises(ValidationError):
        ChannelSet(names=names)


# -------------- #
# Oracle configs #
# -------------- #


def test_drift_must_rise():
    with pytest.raises(ValidationError):
        DriftParams(t0_counts=2600.0, t_inf_counts=2000.0)


def test_pose_offset_vector_round_trip():
    offset = PoseOffset(translation_mm=(1.0, -2.0, 0.5), rotation=(0.1, 0.0, -0.2))
    assert PoseOffset.from_vector(offset.as_vector()) == offset


def test_pose_offset_rejects_large_rotation():
    with pytest.raises(ValidationError):
        PoseOffset(rotation=(math.pi, 0.0, 0.0))


def test_calibration_report_must_not_worsen():
    with pytest.raises(ValidationError):
        CalibrationReport(initial_mean_dist_mm=1.0, final_mean_dist_mm=2.0, steps=10)


# ------- #
# Windows #
# ------- #


@pytest.mark.parametrize(
    "combo, size", [(1, 12), (2, 9), (3, 6), (4, 18), (5, 66), (6, 36), (7, 18), (8, 72)]
)
def test_window_input_sizes(combo, size):
    assert WindowSpec(combo=combo).input_size == size
    assert WindowSpec(combo=combo, include_temperature=True).input_size == size + 1


def test_window_combo_out_of_range():
    with pytest.raises(ValidationError):
        WindowSpec(combo=9)


def test_combo_8_timesteps():
    assert WindowSpec(combo=8).timesteps == tuple(range(-10, 11))


# ---------- #
# Net specs  #
# ---------- #


def test_net_spec_needs_matching_section():
    with pytest.raises(ValidationError):
        NetSpec(kind="transformer")
    assert NetSpec(kind="network_b", network_b=NetworkBSpec()).output_dim == 21


def test_transformer_heads_must_divide_embedding():
    with pytest.raises(ValidationError):
        TransformerSpec(embed_dim=10, n_heads=3)


# ------- #
# Results #
# ------- #


def test_fold_result_aggregates_are_channel_means():
    result = FoldResult.from_channel_errors(
        channels=["e1", "e2", "pdc"],
        channel_mae=[1.0, 3.0, 5.0],
        channel_norm_mae=[0.1, 0.3, 0.5],
        fold=0,
        family="gbt",
        combo=1,
        n_train=10,
        n_test=2,
    )
    assert result.mae_all == pytest.approx(3.0)
    assert result.mae_electrodes == pytest.approx(2.0)
    assert result.norm_mae_electrodes == pytest.approx(0.2)


def test_fold_result_rejects_inconsistent_aggregates():
    with pytest.raises(ValidationError):
        FoldResult(
            fold=0,
            family="gbt",
            combo=1,
            channels=["e1"],
            channel_mae=[1.0],
            channel_norm_mae=[0.1],
            mae_all=2.0,
            norm_mae_all=0.1,
            mae_electrodes=1.0,
            norm_mae_electrodes=0.1,
            n_train=1,
            n_test=1,
        )


def test_fold_result_rejects_unscored_channels():
    with pytest.raises(ValidationError):
        FoldResult.from_channel_errors(
            channels=["e1", "tac"],
            channel_mae=[1.0, 1.0],
            channel_norm_mae=[1.0, 1.0],
            fold=0,
            family="gbt",
            combo=1,
            n_train=1,
            n_test=1,
        )


def test_ttest_report_degrees_of_freedom():
    with pytest.raises(ValidationError):
        TTestReport(
            mean_diff=0.0,
            t_stat=0.0,
            df=3,
            p_value=0.5,
            k=3,
            n_train=1.0,
            n_test=1.0,
            test_train_ratio=1.0,
        )
