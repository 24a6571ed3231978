import numpy as np
import pytest

from errors import AmbiguousDoorError, InputError, SegmentationError
from geometry import polygon_area
from glyphs import door_template
from models import Room
from raster import BinaryImage, Box
from segmentation import (
    DoorTemplate, build_adjacency, detect_doors, door_room_incidence, douglas_peucker, extract_rooms,
    extract_walls, moore_trace, partition_rooms, polygon_mask, room_area_sqft, simplify_contour
)


def test_extract_walls_keeps_thick_strokes():
    data = np.zeros((60, 60), dtype=bool)
    data[10:14, 5:55] = True        # wall, 4 px
    data[30, 5:55] = True           # thin line
    data[40:43, 5:55] = True        # 3 px bar
    walls = extract_walls(BinaryImage(data))
    assert walls.data[10:14, 5:55].all()
    assert walls.count() == 200


def test_walls_of_synthetic_plan(synthetic_plan):
    plan, truth = synthetic_plan
    walls = extract_walls(plan)
    difference = np.logical_xor(walls.data, truth.walls.data).sum()
    assert difference <= 0.01 * truth.walls.count()


def test_detect_doors(synthetic_plans):
    for plan, truth in synthetic_plans:
        doors = detect_doors(plan)
        assert [door.id for door in doors] == list(range(1, len(doors) + 1))
        assert [door.bbox for door in doors] == [door.bbox for door in truth.doors]
        assert [door.opening for door in doors] == [door.opening for door in truth.doors]
        assert all(door.score == pytest.approx(1.0) for door in doors)


def test_detect_rotated_door():
    glyph = np.rot90(door_template())
    data = np.zeros((80, 80), dtype=bool)
    data[20:20 + glyph.shape[0], 30:30 + glyph.shape[1]] = glyph

    door, = detect_doors(BinaryImage(data))
    assert door.footprint == Box(20, 30, 20 + glyph.shape[0] - 1, 30 + glyph.shape[1] - 1)
    # a counter-clockwise quarter turn brings the wall band to the left
    assert door.opening.left == 30
    assert door.opening.width == 4
    assert door.bbox.left == 28

    assert detect_doors(BinaryImage.blank(80, 80)) == []


def test_door_template():
    with pytest.raises(InputError):
        DoorTemplate(BinaryImage.blank(5, 5))
    with pytest.raises(InputError):
        DoorTemplate.default(scales=())
    # the symbol is not symmetric: all eight orientations differ
    assert len(DoorTemplate.default(scales=(1.0,)).oriented()) == 8


def test_extract_rooms(synthetic_plans):
    for plan, truth in synthetic_plans:
        walls = extract_walls(plan)
        rooms = extract_rooms(walls, detect_doors(plan))
        assert len(rooms) == len(truth.rooms)
        for room, expected in zip(rooms, truth.rooms):
            assert room.pixel_area == expected.rect.area
            assert room.bounds == expected.rect
            assert polygon_area(room.polygon) == pytest.approx(
                (expected.rect.width - 1) * (expected.rect.height - 1)
            )


def test_adjacency(synthetic_plans):
    for plan, truth in synthetic_plans:
        doors = detect_doors(plan)
        rooms = extract_rooms(extract_walls(plan), doors)
        adjacency = build_adjacency(rooms, doors)
        assert adjacency.neighbors == truth.adjacency()
        assert adjacency.door_rooms == {door.id: door.rooms for door in truth.doors}
        assert (adjacency.matrix == adjacency.matrix.T).all()
        assert not adjacency.matrix.diagonal().any()


def test_no_rooms():
    data = np.zeros((50, 50), dtype=bool)
    data[10:14, :] = True
    with pytest.raises(SegmentationError):
        extract_rooms(BinaryImage(data), [])


def test_small_regions_are_not_rooms():
    data = np.zeros((60, 100), dtype=bool)
    data[0:4, :] = data[-4:, :] = True
    data[:, 0:4] = data[:, -4:] = True
    data[:, 20:24] = True
    rooms = extract_rooms(BinaryImage(data), [], min_room_area=1000)
    assert len(rooms) == 1
    assert rooms[0].pixel_area == 52 * 72


def test_ambiguous_door():
    polygons = {
        1: [(0, 0), (10, 0), (10, 10), (0, 10)],
        2: [(12, 0), (20, 0), (20, 10), (12, 10)],
        3: [(0, 12), (20, 12), (20, 20), (0, 20)],
    }
    assert door_room_incidence(polygons, {1: Box(4, 10, 6, 12)}) == {1: (1, 2)}
    with pytest.raises(AmbiguousDoorError, match='Door 1'):
        door_room_incidence(polygons, {1: Box(10, 10, 12, 12)})


def test_moore_trace():
    mask = np.zeros((6, 6), dtype=bool)
    mask[1:4, 1:5] = True
    contour = moore_trace(mask)
    assert len(contour) == 10
    assert len(set(contour)) == 10
    assert contour[0] == (1, 1)
    assert moore_trace(np.zeros((3, 3), dtype=bool)) == []

    single = np.zeros((3, 3), dtype=bool)
    single[1, 1] = True
    assert moore_trace(single) == [(1, 1)]


def test_simplify_contour():
    assert douglas_peucker([(0, 0), (5, 0.5), (10, 0)], 1.0) == [(0, 0), (10, 0)]
    assert douglas_peucker([(0, 0), (5, 3), (10, 0)], 1.0) == [(0, 0), (5, 3), (10, 0)]

    mask = np.zeros((30, 40), dtype=bool)
    mask[5:25, 5:35] = True
    polygon = simplify_contour(moore_trace(mask))
    assert sorted(polygon) == [(5, 5), (5, 24), (34, 5), (34, 24)]


def test_polygon_mask_and_partition():
    polygon = [(2, 2), (7, 2), (7, 5), (2, 5)]
    mask = polygon_mask(polygon, Box(0, 0, 9, 9))
    assert mask.sum() == 6 * 4
    assert mask[2, 2] and mask[5, 7]

    data = np.ones((10, 10), dtype=bool)
    crop, = partition_rooms(BinaryImage(data), [Room(3, None, polygon, 1.0)])
    assert crop.id == 3
    assert crop.box == Box(2, 2, 5, 7)
    assert crop.offset == (2, 2)
    assert crop.image.count() == 24


def test_room_area():
    assert room_area_sqft(2550) == 25.5
    assert room_area_sqft(100, area_divisor=4) == 25
    with pytest.raises(InputError):
        room_area_sqft(-1)
