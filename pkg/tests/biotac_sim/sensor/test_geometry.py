import math

import numpy as np
import pytest
from pydantic import ValidationError

from biotac_sim.oracle import project_to_surface
from biotac_sim.schema import ElectrodeLayout
from biotac_sim.sensor import default_layout, load_layout, nearest_electrode, nearest_electrodes


@pytest.fixture
def layout():
    return default_layout()


def test_default_layout_has_19_electrodes_on_the_skin(layout):
    assert layout.positions.shape == (19, 3)
    dist = np.abs(layout.capsule.signed_distance(layout.positions))
    assert dist.max() <= 1.0


def test_load_layout_without_path_is_default(layout):
    assert load_layout() is layout


def test_load_layout_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_layout(tmp_path / "missing.json")


def test_layout_rejects_off_surface_electrode(layout):
    positions = [list(p) for p in layout.positions_mm]
    positions[0] = [2.0, 20.0, 0.0]
    with pytest.raises(ValidationError):
        ElectrodeLayout(positions_mm=positions, capsule=layout.capsule)


def test_point_at_electrode_position(layout):
    assert nearest_electrode(layout.positions_mm[6], layout) == 7
    for k in range(1, 20):
        assert nearest_electrode(layout.positions_mm[k - 1], layout) == k


def test_tie_resolves_to_lowest_index(layout):
    positions = [list(p) for p in layout.positions_mm]
    positions[3] = positions[2]
    tied = ElectrodeLayout(positions_mm=positions, capsule=layout.capsule)
    assert nearest_electrode(positions[2], tied) == 3


def test_histogram_matches_brute_force(layout):
    rng = np.random.default_rng(11)
    raw = rng.uniform([-8.0, -10.0, -10.0], [24.0, 10.0, 10.0], size=(1000, 3))
    points = project_to_surface(layout.capsule, raw)

    fast = nearest_electrodes(points, layout)

    slow = []
    for p in points:
        dists = [math.dist(p, e) for e in layout.positions_mm]
        slow.append(dists.index(min(dists)) + 1)
    assert fast.tolist() == slow
    assert np.array_equal(
        np.bincount(fast, minlength=20)[1:], np.bincount(slow, minlength=20)[1:]
    )
