"""Zone/block geometry: index mapping, cell boundaries, and block centres."""

import math

import numpy as np
import pytest

from zonecast import (
    BlockIndex,
    GridConfig,
    OutOfZoneError,
    ZoneIndex,
    block_centers,
    locate_block,
    locate_zone,
    resident_zone,
    zone_origin,
)


def test_default_grid_dimensions():
    g = GridConfig()
    assert g.zone_side == 100.0
    assert g.block_side == 5.0
    assert g.blocks_per_side == 20


def test_block_side_must_divide_zone_side():
    with pytest.raises(ValueError):
        GridConfig(zone_side=100.0, block_side=7.0)
    with pytest.raises(ValueError):
        GridConfig(zone_side=0.0, block_side=5.0)
    with pytest.raises(ValueError):
        GridConfig(zone_side=100.0, block_side=-5.0)
    # an exact integer ratio is accepted even when it is large
    assert GridConfig(zone_side=100.0, block_side=0.5).blocks_per_side == 200


def test_locate_zone_quadrants_and_negative_coordinates():
    g = GridConfig()
    assert locate_zone((0.0, 0.0), g) == ZoneIndex(0, 0)
    assert locate_zone((99.9, 99.9), g) == ZoneIndex(0, 0)
    assert locate_zone((100.0, 0.0), g) == ZoneIndex(1, 0)  # half-open cells
    assert locate_zone((0.0, 100.0), g) == ZoneIndex(0, 1)
    assert locate_zone((-0.1, -0.1), g) == ZoneIndex(-1, -1)
    assert locate_zone((250.0, -150.0), g) == ZoneIndex(2, -2)


def test_locate_zone_respects_origin():
    g = GridConfig(origin=(50.0, -50.0))
    assert locate_zone((50.0, -50.0), g) == ZoneIndex(0, 0)
    assert locate_zone((49.9, -50.0), g) == ZoneIndex(-1, 0)
    assert locate_zone((150.0, 49.9), g) == ZoneIndex(1, 0)


def test_locate_block_half_open_boundaries():
    g = GridConfig()
    z = ZoneIndex(0, 0)
    assert locate_block((0.0, 0.0), z, g) == BlockIndex(0, 0)
    assert locate_block((4.999, 4.999), z, g) == BlockIndex(0, 0)
    assert locate_block((5.0, 0.0), z, g) == BlockIndex(1, 0)
    assert locate_block((0.0, 5.0), z, g) == BlockIndex(0, 1)
    assert locate_block((97.5, 2.5), z, g) == BlockIndex(19, 0)
    # the zone's far edge belongs to the next zone, so inside this zone the
    # largest reachable block index is n-1 even for points arbitrarily close
    assert locate_block((99.999999, 99.999999), z, g) == BlockIndex(19, 19)


def test_locate_block_rejects_point_outside_zone():
    g = GridConfig()
    with pytest.raises(OutOfZoneError):
        locate_block((100.0, 0.0), ZoneIndex(0, 0), g)
    with pytest.raises(OutOfZoneError):
        locate_block((-0.001, 50.0), ZoneIndex(0, 0), g)
    # the same point is fine against its actual zone
    assert locate_block((100.0, 0.0), ZoneIndex(1, 0), g) == BlockIndex(0, 0)


def test_locate_block_in_negative_zone():
    g = GridConfig()
    z = ZoneIndex(-1, -1)
    assert locate_block((-100.0, -100.0), z, g) == BlockIndex(0, 0)
    assert locate_block((-0.001, -0.001), z, g) == BlockIndex(19, 19)
    assert locate_block((-52.5, -97.5), z, g) == BlockIndex(9, 0)


def test_resident_zone_matches_point_zone():
    g = GridConfig()
    assert resident_zone(None, (12.0, 34.0), g) == ZoneIndex(0, 0)
    # a previous zone does not pin the vehicle once its position has moved on
    assert resident_zone(ZoneIndex(0, 0), (112.0, 34.0), g) == ZoneIndex(1, 0)


def test_zone_origin_roundtrip():
    g = GridConfig(origin=(10.0, 20.0))
    assert zone_origin(ZoneIndex(0, 0), g) == (10.0, 20.0)
    assert zone_origin(ZoneIndex(2, -1), g) == (210.0, -80.0)
    # origin of the zone that contains a point is south-west of the point
    p = (345.6, -12.3)
    z = locate_zone(p, g)
    ox, oy = zone_origin(z, g)
    assert ox <= p[0] < ox + g.zone_side
    assert oy <= p[1] < oy + g.zone_side


def test_block_centers_row_major_from_south_west():
    g = GridConfig(zone_side=15.0, block_side=5.0)
    c = block_centers(ZoneIndex(0, 0), g)
    assert c.shape == (9, 2)
    # row-major: index r*n + c, row 0 is the southernmost row
    assert c[0].tolist() == [2.5, 2.5]
    assert c[1].tolist() == [7.5, 2.5]
    assert c[3].tolist() == [2.5, 7.5]
    assert c[8].tolist() == [12.5, 12.5]


def test_block_centers_agree_with_locate_block():
    g = GridConfig()
    z = ZoneIndex(3, -2)
    centers = block_centers(z, g)
    n = g.blocks_per_side
    rng = np.random.default_rng(7)
    for idx in rng.integers(0, n * n, size=40):
        x, y = centers[int(idx)]
        b = locate_block((float(x), float(y)), z, g)
        assert b.row * n + b.col == int(idx)


def test_block_centers_spacing_is_block_side():
    g = GridConfig()
    c = block_centers(ZoneIndex(0, 0), g)
    n = g.blocks_per_side
    xs = c[:n, 0]
    assert np.allclose(np.diff(xs), g.block_side)
    ys = c[::n, 1]
    assert np.allclose(np.diff(ys), g.block_side)
    assert math.isclose(c[0, 0], g.block_side / 2)
