"""Walls, doors, rooms and their adjacency, recovered from a plan raster."""
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from PIL import Image, ImageDraw
from scipy import signal

from errors import AmbiguousDoorError, InputError, SegmentationError
from geometry import orient_ccw, polygon_bounds, polygon_intersects_box
from glyphs import door_template, orient, rescale, variants, wall_band, WALL_THICKNESS
from raster import BinaryImage, Box, Point, StructuringElement, box_sum, label_array, load_png, morph_array


DEFAULT_SCALES = (0.75, 1.0, 1.25, 1.5)


@dataclass(frozen=True)
class DoorTemplate:
    """Door symbol with its wall side up: the first `wall_rows` rows are wall."""

    glyph: BinaryImage
    scales: Tuple[float, ...] = DEFAULT_SCALES
    wall_rows: int = WALL_THICKNESS

    def __post_init__(self):
        if not self.glyph.count():
            raise InputError('Door template has no ink')
        if not self.scales or min(self.scales) <= 0:
            raise InputError(f'Door template scales have to be positive, got {self.scales}')

    @classmethod
    def default(cls, scales=DEFAULT_SCALES):
        return cls(BinaryImage(door_template()), tuple(scales))

    @classmethod
    def load(cls, path, scales=DEFAULT_SCALES, wall_rows=WALL_THICKNESS):
        return cls(load_png(path), tuple(scales), wall_rows)

    def oriented(self):
        """Every distinct (glyph, wall band) pair over scales and orientations."""
        marker = wall_band(self.glyph.shape, self.wall_rows)
        found = []
        for scale in self.scales:
            glyph, band = rescale(self.glyph.data, scale), rescale(marker, scale)
            for key, oriented in variants(glyph).items():
                oriented_band = orient(band, *key)
                if not any(
                    np.array_equal(oriented, g) and np.array_equal(oriented_band, b)
                    for g, b in found
                ):
                    found.append((oriented, oriented_band))
        return found


@dataclass(frozen=True)
class DoorCandidate:
    """A detected door symbol.

    `opening` is the wall-side strip of the symbol (the gap in the
    wall), `footprint` the whole matched symbol and `bbox` the
    footprint reaching `reach` px further on the wall side.
    """

    id: int
    bbox: Box
    centroid: Point
    opening: Box
    footprint: Box
    score: float = 1.0


@dataclass(frozen=True, eq=False)
class RoomRegion:
    id: int
    polygon: Tuple[Tuple[int, int], ...]
    pixel_area: int
    mask: BinaryImage

    @property
    def bounds(self) -> Box:
        ys, xs = np.nonzero(self.mask.data)
        return Box(int(ys.min()), int(xs.min()), int(ys.max()), int(xs.max()))


@dataclass(frozen=True, eq=False)
class Adjacency:
    """Door-room incidence, neighbour sets and AM_D (rooms in ascending id)."""

    room_ids: Tuple[int, ...]
    door_rooms: Dict[int, Tuple[int, ...]]
    neighbors: Dict[int, Tuple[int, ...]]
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class RoomCrop:
    id: int
    image: BinaryImage
    box: Box

    @property
    def offset(self) -> Tuple[int, int]:
        return self.box.left, self.box.top


def extract_walls(plan: BinaryImage, se_radius: int = 3, wall_min_thickness: int = 4) -> BinaryImage:
    """Ink of strokes at least `wall_min_thickness` thick.

    Thin strokes (door and decor symbols) vanish under opening with a
    square of the minimal thickness; closing the remainder and masking
    with the plan restores wall pixels lost at junctions.
    """
    thick = morph_array(plan.data, np.ones((wall_min_thickness, wall_min_thickness), dtype=bool), 'open')
    closed = morph_array(thick, StructuringElement(se_radius).footprint, 'close')
    return BinaryImage(closed & plan.data)


def _correlation_scores(plan: np.ndarray, glyph: np.ndarray) -> np.ndarray:
    """Normalized cross-correlation of `glyph` with every window of `plan`."""
    height, width = glyph.shape
    count = height * width
    template = glyph.astype(float)
    template -= template.mean()
    template_norm = np.sqrt((template ** 2).sum())

    numerator = signal.correlate(plan, template, mode='valid', method='fft')
    window_sums = box_sum(plan, height, width)
    variance = window_sums - window_sums ** 2 / count

    scores = np.zeros_like(numerator)
    valid = variance > 1e-6
    scores[valid] = numerator[valid] / (template_norm * np.sqrt(variance[valid]))
    return scores


def extend_toward(footprint: Box, band: Box, reach: int) -> Box:
    """Extend the footprint by `reach` px on the side of the wall band."""
    (fx, fy), (bx, by) = footprint.center, band.center
    top, left, bottom, right = footprint.top, footprint.left, footprint.bottom, footprint.right
    if abs(by - fy) >= abs(bx - fx):
        if by < fy:
            top -= reach
        else:
            bottom += reach
    else:
        if bx < fx:
            left -= reach
        else:
            right += reach
    return Box(top, left, bottom, right)


def detect_doors(plan: BinaryImage, template: DoorTemplate = None, score_min: float = 0.6, reach: int = 2) -> List[DoorCandidate]:
    """Find door symbols by correlation with the scaled and rotated template.

    Windows scoring at least `score_min` are suppressed greedily
    (strongest first) within half the width of an accepted match;
    survivors are numbered from 1 in raster order.
    """
    template = template or DoorTemplate.default()
    data = plan.data.astype(float)
    height, width = plan.shape

    candidates = []
    shapes = template.oriented()
    for index, (glyph, band) in enumerate(shapes):
        if glyph.shape[0] > height or glyph.shape[1] > width:
            continue
        scores = _correlation_scores(data, glyph)
        ys, xs = np.nonzero(scores >= score_min)
        for y, x in zip(ys.tolist(), xs.tolist()):
            candidates.append((-float(scores[y, x]), y, x, index))

    # (center, suppression radius, score, y, x, shape index)
    accepted = []
    for negative_score, y, x, index in sorted(candidates):
        glyph = shapes[index][0]
        cx, cy = x + (glyph.shape[1] - 1) / 2, y + (glyph.shape[0] - 1) / 2
        if any(
            max(abs(cx - other_x), abs(cy - other_y)) <= radius
            for (other_x, other_y), radius, *_ in accepted
        ):
            continue
        accepted.append(((cx, cy), max(glyph.shape) / 2, -negative_score, y, x, index))

    doors = []
    for *_, score, y, x, index in sorted(accepted, key=lambda match: (match[3], match[4])):
        glyph, band = shapes[index]
        footprint = Box(y, x, y + glyph.shape[0] - 1, x + glyph.shape[1] - 1)
        band_ys, band_xs = np.nonzero(band)
        opening = Box(y + int(band_ys.min()), x + int(band_xs.min()), y + int(band_ys.max()), x + int(band_xs.max()))
        doors.append(DoorCandidate(
            id=len(doors) + 1,
            bbox=extend_toward(footprint, opening, reach).clip(height, width),
            centroid=opening.center,
            opening=opening,
            footprint=footprint,
            score=score
        ))
    return doors


# clockwise neighbourhood (y grows downwards), starting West
MOORE_OFFSETS = [(-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1)]


def moore_trace(mask: np.ndarray) -> List[Tuple[int, int]]:
    """Outer boundary pixels (x, y) of the component holding the first ink pixel.

    The trace stops once a (pixel, backtrack) state repeats; the
    returned contour is exactly one turn around the component.
    """
    ys, xs = np.nonzero(mask)
    if not len(ys):
        return []
    height, width = mask.shape

    def ink(x, y):
        return 0 <= x < width and 0 <= y < height and mask[y, x]

    contour, states = [], {}
    # the West neighbour of the first pixel in raster order is background
    current, backtrack = (int(xs[0]), int(ys[0])), 0
    while (current, backtrack) not in states:
        states[(current, backtrack)] = len(contour)
        contour.append(current)
        for step in range(1, 9):
            direction = (backtrack + step) % 8
            dx, dy = MOORE_OFFSETS[direction]
            candidate = (current[0] + dx, current[1] + dy)
            if ink(*candidate):
                break
        else:
            return contour
        bx, by = MOORE_OFFSETS[(direction - 1) % 8]
        previous = (current[0] + bx, current[1] + by)
        backtrack = MOORE_OFFSETS.index((previous[0] - candidate[0], previous[1] - candidate[1]))
        current = candidate
    return contour[states[(current, backtrack)]:]


def douglas_peucker(points: Sequence[Tuple[float, float]], epsilon: float) -> List[Tuple[float, float]]:
    if len(points) < 3:
        return list(points)
    array = np.asarray(points, dtype=float)
    start, end = array[0], array[-1]
    segment = end - start
    length = float(np.linalg.norm(segment))
    relative = array - start
    if length == 0:
        distances = np.linalg.norm(relative, axis=1)
    else:
        distances = np.abs(segment[0] * relative[:, 1] - segment[1] * relative[:, 0]) / length
    split = int(np.argmax(distances))
    if distances[split] > epsilon:
        left = douglas_peucker(points[:split + 1], epsilon)
        right = douglas_peucker(points[split:], epsilon)
        return left[:-1] + right
    return [points[0], points[-1]]


def simplify_contour(contour: Sequence[Tuple[int, int]], epsilon: float = 2.0) -> List[Tuple[int, int]]:
    """Douglas-Peucker on a closed contour, split at its farthest point from the start."""
    if len(contour) < 4:
        return list(contour)
    array = np.asarray(contour, dtype=float)
    far = int(np.argmax(np.linalg.norm(array - array[0], axis=1)))
    first = douglas_peucker(list(contour[:far + 1]), epsilon)
    second = douglas_peucker(list(contour[far:]) + [contour[0]], epsilon)
    return first[:-1] + second[:-1]


def _room_polygon(mask: np.ndarray, epsilon: float) -> List[Tuple[int, int]]:
    polygon = simplify_contour(moore_trace(mask), epsilon)
    if len(polygon) < 3:
        ys, xs = np.nonzero(mask)
        box = Box(int(ys.min()), int(xs.min()), int(ys.max()), int(xs.max()))
        polygon = box.corners() if box.width > 1 and box.height > 1 else polygon
    return [(int(x), int(y)) for x, y in orient_ccw(polygon)] if len(polygon) >= 3 else polygon


def blocked_mask(walls: BinaryImage, doors: Sequence[DoorCandidate]) -> np.ndarray:
    """Walls with door openings closed."""
    blocked = np.array(walls.data)
    height, width = blocked.shape
    for door in doors:
        blocked[door.opening.clip(height, width).slices] = True
    return blocked


def extract_rooms(walls: BinaryImage, doors: Sequence[DoorCandidate], min_room_area: int = 400, epsilon: float = 2.0) -> List[RoomRegion]:
    """Enclosed regions of the plan once door openings are closed.

    Background reachable from the image border is the exterior; other
    background components of at least `min_room_area` pixels are the
    rooms, numbered from 1 in raster order of their first pixel.
    """
    free = ~blocked_mask(walls, doors)
    labels, count = label_array(free, connectivity=4)
    exterior = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]]))) - {0}
    areas = np.bincount(labels.ravel(), minlength=count + 1)

    rooms = []
    for label in range(1, count + 1):
        if label in exterior or areas[label] < min_room_area:
            continue
        mask = labels == label
        rooms.append(RoomRegion(
            id=len(rooms) + 1,
            polygon=tuple(_room_polygon(mask, epsilon)),
            pixel_area=int(areas[label]),
            mask=BinaryImage(mask)
        ))
    if not rooms:
        raise SegmentationError('No enclosed room was found in the plan')
    return rooms


def room_area_sqft(pixel_area: float, area_divisor: float = 100.0) -> float:
    """Pixel area in square feet, `area_divisor` px² making one ft²."""
    if pixel_area < 0:
        raise InputError(f'Pixel area cannot be negative, got {pixel_area}')
    return pixel_area / area_divisor


def door_room_incidence(polygons: Dict[int, Sequence[Point]], door_boxes: Dict[int, Box], dilation: int = 2) -> Dict[int, Tuple[int, ...]]:
    """Rooms touched by every door box grown by `dilation` px."""
    incidence = {}
    for door_id, box in sorted(door_boxes.items()):
        grown = box.dilate(dilation)
        rooms = tuple(
            room_id for room_id, polygon in sorted(polygons.items())
            if polygon_intersects_box(polygon, grown)
        )
        if len(rooms) > 2:
            raise AmbiguousDoorError(f'Door {door_id} touches more than two rooms: {", ".join(map(str, rooms))}')
        incidence[door_id] = rooms
    return incidence


def build_adjacency(rooms: Sequence[RoomRegion], doors: Sequence[DoorCandidate], dilation: int = 2) -> Adjacency:
    polygons = {room.id: room.polygon for room in rooms}
    incidence = door_room_incidence(polygons, {door.id: door.bbox for door in doors}, dilation)
    room_ids = tuple(sorted(polygons))
    index = {room_id: i for i, room_id in enumerate(room_ids)}
    matrix = np.zeros((len(room_ids), len(room_ids)), dtype=int)
    for door_rooms in incidence.values():
        if len(door_rooms) == 2:
            a, b = (index[room_id] for room_id in door_rooms)
            matrix[a, b] = matrix[b, a] = 1
    neighbors = {
        room_id: tuple(other for other in room_ids if matrix[index[room_id], index[other]])
        for room_id in room_ids
    }
    return Adjacency(room_ids, incidence, neighbors, matrix)


def polygon_mask(polygon: Sequence[Point], box: Box) -> np.ndarray:
    """Pixels of `box` inside the polygon or on its outline."""
    image = Image.new('1', (box.width, box.height), 0)
    shifted = [(x - box.left, y - box.top) for x, y in polygon]
    ImageDraw.Draw(image).polygon(shifted, fill=1, outline=1)
    return np.array(image, dtype=bool)


def partition_rooms(plan: BinaryImage, rooms: Sequence) -> List[RoomCrop]:
    """Crop the plan to every room's polygon bounds, blanking pixels outside the polygon."""
    crops = []
    for room in rooms:
        box = polygon_bounds(room.polygon).clip(plan.height, plan.width)
        data = plan.data[box.slices] & polygon_mask(room.polygon, box)
        crops.append(RoomCrop(room.id, BinaryImage(data), box))
    return crops
