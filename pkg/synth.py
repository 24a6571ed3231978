"""Synthetic floor plans with ground truth.

A plan is a 600 x 600 canvas with a 4 px outer wall, split recursively
into rectangular rooms by 4 px inner walls. Doors are placed on shared
walls so that every room can be reached, plus one door in the outer
wall; every room gets a label and decors drawn from the label's
policy. Symbols are stamped from the canonical bitmaps of
:mod:`glyphs`, so the pipeline reads them back exactly.

A corpus directory holds::

    plans/0001.png    plan raster
    plans/0001.json   its ground truth
    features.csv      LOFD row and label of every room
    split.txt         train/test assignment of the rows of features.csv
"""
import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from errors import GenerationFailedError, InputError
from geometry import box_polygon, polygon_centroid
from glyphs import DOOR_WIDTH, WALL_THICKNESS, decor_glyph, door_template, orient, wall_band, ORIENTATIONS
from lofd import FEATURE_COLUMNS, compute_lofd
from models import DecorClass, DecorInstance, RoomLabel
from multiprocess import Pool
from raster import BinaryImage, Box, save_png
from segmentation import extend_toward


# required classes with count ranges, optional classes with count ranges;
# a tuple of classes in place of a class means "one of them"
DECOR_POLICY = {
    RoomLabel.BEDROOM: (
        {DecorClass.BED: (1, 2)},
        {DecorClass.WARDROBE: (0, 2), DecorClass.CHAIR: (0, 1), DecorClass.TABLE: (0, 1)},
    ),
    RoomLabel.BATHROOM: (
        {DecorClass.TUB: (1, 1), DecorClass.TOILET: (1, 1), (DecorClass.SINK, DecorClass.TWIN_SINK): (1, 1)},
        {},
    ),
    RoomLabel.ENTRY: (
        {},
        {DecorClass.CHAIR: (0, 2), DecorClass.TABLE: (0, 1)},
    ),
    RoomLabel.KITCHEN: (
        {DecorClass.STOVE: (1, 1), DecorClass.LARGE_SINK: (1, 1)},
        {DecorClass.TABLE: (0, 1), DecorClass.CHAIR: (0, 2)},
    ),
    RoomLabel.HALL: (
        {DecorClass.SOFA: (1, 1)},
        {DecorClass.LARGE_SOFA: (0, 1), DecorClass.TABLE: (0, 1), DecorClass.CHAIR: (0, 2)},
    ),
}


@dataclass(frozen=True)
class PlanSpec:
    seed: int
    room_count: int = 5
    size: int = 600
    margin: int = 20
    wall: int = WALL_THICKNESS
    min_side: int = 110
    split_range: Tuple[float, float] = (0.35, 0.65)
    extra_door_probability: float = 0.2
    # free space kept between a door and the end of its wall
    door_margin: int = 30
    # free space around decors: to walls, to doors and to each other
    wall_clearance: int = 12
    door_clearance: int = 10
    decor_gap: int = 8
    placement_attempts: int = 500

    def __post_init__(self):
        if self.room_count not in {3, 4, 5}:
            raise InputError(f'room_count has to be 3, 4 or 5, got {self.room_count}')


@dataclass(frozen=True)
class GroundTruthRoom:
    id: int
    label: RoomLabel
    rect: Box
    decors: Tuple[DecorInstance, ...]

    @property
    def polygon(self):
        return box_polygon(self.rect)

    @property
    def pixel_area(self) -> int:
        return self.rect.area


@dataclass(frozen=True)
class GroundTruthDoor:
    id: int
    bbox: Box
    opening: Box
    footprint: Box
    rooms: Tuple[int, ...]
    entry: bool = False


@dataclass(frozen=True, eq=False)
class GroundTruth:
    seed: int
    size: int
    rooms: Tuple[GroundTruthRoom, ...]
    doors: Tuple[GroundTruthDoor, ...]
    walls: Optional[BinaryImage] = field(default=None, repr=False)

    @property
    def entry_door(self) -> GroundTruthDoor:
        return next(door for door in self.doors if door.entry)

    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        neighbors = {room.id: set() for room in self.rooms}
        for door in self.doors:
            if len(door.rooms) == 2:
                a, b = door.rooms
                neighbors[a].add(b)
                neighbors[b].add(a)
        return {room_id: tuple(sorted(others)) for room_id, others in neighbors.items()}

    def to_dict(self) -> dict:
        return {
            'seed': self.seed,
            'size': self.size,
            'rooms': [
                {
                    'id': room.id,
                    'label': room.label.name,
                    'rect': list(room.rect.as_xyxy()),
                    'pixel_area': room.pixel_area,
                    'decors': [
                        {'class': decor.cls.code, 'bbox': list(decor.bbox.as_xyxy())}
                        for decor in room.decors
                    ],
                }
                for room in self.rooms
            ],
            'doors': [
                {
                    'id': door.id,
                    'bbox': list(door.bbox.as_xyxy()),
                    'opening': list(door.opening.as_xyxy()),
                    'footprint': list(door.footprint.as_xyxy()),
                    'rooms': list(door.rooms),
                    'entry': door.entry,
                }
                for door in self.doors
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + '\n'

    @classmethod
    def from_dict(cls, data: dict) -> 'GroundTruth':
        try:
            rooms = tuple(
                GroundTruthRoom(
                    room['id'], RoomLabel[room['label']], Box.from_xyxy(*room['rect']),
                    tuple(
                        DecorInstance(DecorClass.from_code(decor['class']), Box.from_xyxy(*decor['bbox']))
                        for decor in room['decors']
                    )
                )
                for room in data['rooms']
            )
            doors = tuple(
                GroundTruthDoor(
                    door['id'], Box.from_xyxy(*door['bbox']), Box.from_xyxy(*door['opening']),
                    Box.from_xyxy(*door['footprint']), tuple(door['rooms']), door['entry']
                )
                for door in data['doors']
            )
            return cls(data['seed'], data['size'], rooms, doors)
        except (KeyError, TypeError) as error:
            raise InputError(f'Malformed ground truth: {error}')

    @classmethod
    def load(cls, path) -> 'GroundTruth':
        return cls.from_dict(json.loads(Path(path).read_text(encoding='utf-8')))


def split_rooms(spec: PlanSpec, rng) -> List[Box]:
    """Guillotine partition of the free interior into `room_count` rectangles.

    The largest rectangle is split across its longer side (the other
    side when that leaves a room narrower than `min_side`).
    """
    inner = spec.margin + spec.wall
    rects = [Box(inner, inner, spec.size - inner - 1, spec.size - inner - 1)]
    low, high = spec.split_range
    while len(rects) < spec.room_count:
        index = max(range(len(rects)), key=lambda i: (rects[i].area, -i))
        rect = rects.pop(index)
        vertical_first = rect.width >= rect.height
        for vertical in (vertical_first, not vertical_first):
            side = rect.width if vertical else rect.height
            # sizes of the first part leaving both parts at least min_side wide
            smallest = max(int(np.ceil(side * low)), spec.min_side)
            largest = min(int(side * high), side - spec.wall - spec.min_side)
            if smallest <= largest:
                first = int(rng.integers(smallest, largest + 1))
                if vertical:
                    parts = [
                        Box(rect.top, rect.left, rect.bottom, rect.left + first - 1),
                        Box(rect.top, rect.left + first + spec.wall, rect.bottom, rect.right),
                    ]
                else:
                    parts = [
                        Box(rect.top, rect.left, rect.top + first - 1, rect.right),
                        Box(rect.top + first + spec.wall, rect.left, rect.bottom, rect.right),
                    ]
                rects.extend(parts)
                break
        else:
            raise GenerationFailedError(
                f'Cannot split the plan into {spec.room_count} rooms at least {spec.min_side} px wide'
            )
    return sorted(rects, key=lambda rect: (rect.top, rect.left))


@dataclass(frozen=True)
class Wall:
    """A straight wall piece a door can be placed in.

    `inside` is the side (of the wall) facing the room the door swings into.
    """

    vertical: bool
    position: int
    start: int
    end: int
    inside: int


def shared_wall(a: Box, b: Box, spec: PlanSpec) -> Optional[Wall]:
    needed = DOOR_WIDTH + 2 * spec.wall + 2 * spec.door_margin
    if a.right + spec.wall + 1 == b.left or b.right + spec.wall + 1 == a.left:
        left, right = (a, b) if a.right < b.left else (b, a)
        start, end = max(a.top, b.top), min(a.bottom, b.bottom)
        if end - start + 1 >= needed:
            return Wall(True, left.right + 1, start, end, 1)
    if a.bottom + spec.wall + 1 == b.top or b.bottom + spec.wall + 1 == a.top:
        upper, lower = (a, b) if a.bottom < b.top else (b, a)
        start, end = max(a.left, b.left), min(a.right, b.right)
        if end - start + 1 >= needed:
            return Wall(False, upper.bottom + 1, start, end, 1)
    return None


def outer_walls(rect: Box, spec: PlanSpec) -> List[Wall]:
    """Pieces of the outer wall along a room, with the door swinging into the room."""
    inner = spec.margin + spec.wall
    far = spec.size - inner
    needed = DOOR_WIDTH + 2 * spec.wall + 2 * spec.door_margin
    walls = []
    if rect.top == inner and rect.width >= needed:
        walls.append(Wall(False, spec.margin, rect.left, rect.right, 1))
    if rect.bottom == far - 1 and rect.width >= needed:
        walls.append(Wall(False, far, rect.left, rect.right, -1))
    if rect.left == inner and rect.height >= needed:
        walls.append(Wall(True, spec.margin, rect.top, rect.bottom, 1))
    if rect.right == far - 1 and rect.height >= needed:
        walls.append(Wall(True, far, rect.top, rect.bottom, -1))
    return walls


# quarter turns of the door template putting its wall band at the
# top, bottom, left and right of the symbol
BAND_TOP, BAND_BOTTOM, BAND_LEFT, BAND_RIGHT = 0, 2, 1, 3


def stamp_door(plan: np.ndarray, wall: Wall, offset: int, mirror: bool, spec: PlanSpec) -> Tuple[Box, Box]:
    """Cut a doorway at `offset` along the wall and draw the door symbol.

    Returns (footprint, opening) boxes; the opening spans the wall band
    of the symbol including its jambs.
    """
    if wall.vertical:
        rotation = BAND_LEFT if wall.inside > 0 else BAND_RIGHT
    else:
        rotation = BAND_TOP if wall.inside > 0 else BAND_BOTTOM
    glyph = orient(door_template(), rotation, mirror)
    band = orient(wall_band(door_template().shape), rotation, mirror)
    band_ys, band_xs = np.nonzero(band)

    length = DOOR_WIDTH + 2 * spec.wall
    if wall.vertical:
        opening = Box(offset, wall.position, offset + length - 1, wall.position + spec.wall - 1)
        gap = Box(offset + spec.wall, wall.position, offset + length - spec.wall - 1, opening.right)
    else:
        opening = Box(wall.position, offset, wall.position + spec.wall - 1, offset + length - 1)
        gap = Box(wall.position, offset + spec.wall, opening.bottom, offset + length - spec.wall - 1)
    top, left = opening.top - int(band_ys.min()), opening.left - int(band_xs.min())
    footprint = Box(top, left, top + glyph.shape[0] - 1, left + glyph.shape[1] - 1)

    plan[gap.slices] = False
    plan[footprint.slices] |= glyph
    return footprint, opening


def place_door(plan, wall: Wall, rng, spec: PlanSpec) -> Tuple[Box, Box]:
    length = DOOR_WIDTH + 2 * spec.wall
    first = wall.start + spec.door_margin
    last = wall.end - spec.door_margin - length + 1
    offset = int(rng.integers(first, last + 1))
    return stamp_door(plan, wall, offset, bool(rng.integers(2)), spec)


def spanning_doors(rects: Sequence[Box], spec: PlanSpec, rng) -> List[Tuple[int, int]]:
    """Pairs of rooms to join: a random spanning tree and some extra pairs."""
    candidates = [
        (i, j) for i, j in combinations(range(len(rects)), 2)
        if shared_wall(rects[i], rects[j], spec)
    ]
    reached = {int(rng.integers(len(rects)))}
    chosen = []
    while len(reached) < len(rects):
        frontier = [(i, j) for i, j in candidates if (i in reached) != (j in reached)]
        if not frontier:
            raise GenerationFailedError('Rooms of the plan cannot be connected by doors')
        pair = frontier[int(rng.integers(len(frontier)))]
        chosen.append(pair)
        reached.update(pair)
    for pair in candidates:
        if pair not in chosen and rng.random() < spec.extra_door_probability:
            chosen.append(pair)
    return sorted(chosen)


def room_labels(count: int, rng) -> List[RoomLabel]:
    labels = list(RoomLabel)
    chosen = rng.choice(len(labels), size=count, replace=False)
    return [labels[i] for i in chosen]


def decor_counts(label: RoomLabel, rng) -> List[Tuple[DecorClass, bool]]:
    required, optional = DECOR_POLICY[label]
    classes = []
    for policy, is_required in ((required, True), (optional, False)):
        for choice, (low, high) in policy.items():
            count = int(rng.integers(low, high + 1))
            for _ in range(count):
                if isinstance(choice, tuple):
                    classes.append((choice[int(rng.integers(len(choice)))], is_required))
                else:
                    classes.append((choice, is_required))
    return classes


def place_decors(plan, rect: Box, label: RoomLabel, doors: Sequence[Box], spec: PlanSpec, rng) -> List[DecorInstance]:
    """Stamp the label's decors at free random places; required ones must fit."""
    usable = Box(
        rect.top + spec.wall_clearance, rect.left + spec.wall_clearance,
        rect.bottom - spec.wall_clearance, rect.right - spec.wall_clearance
    )
    keep_out = [door.dilate(spec.door_clearance) for door in doors]
    placed = []
    for decor_class, required in decor_counts(label, rng):
        rotation, mirror = ORIENTATIONS[int(rng.integers(len(ORIENTATIONS)))]
        glyph = orient(decor_glyph(decor_class), rotation, mirror)
        height, width = glyph.shape
        box = None
        for _ in range(spec.placement_attempts):
            if usable.height < height or usable.width < width:
                break
            top = int(rng.integers(usable.top, usable.bottom - height + 2))
            left = int(rng.integers(usable.left, usable.right - width + 2))
            attempt = Box(top, left, top + height - 1, left + width - 1)
            if any(attempt.intersects(other) for other in keep_out):
                continue
            if any(attempt.gap(other.bbox) <= spec.decor_gap for other in placed):
                continue
            box = attempt
            break
        if box is None:
            if required:
                raise GenerationFailedError(
                    f'No room for a {decor_class.title} in the {label.title} at {rect.as_xyxy()}'
                )
            continue
        plan[box.slices] |= glyph
        placed.append(DecorInstance(decor_class, box))
    return placed


def generate(spec: PlanSpec) -> Tuple[BinaryImage, GroundTruth]:
    rng = np.random.default_rng(spec.seed)
    plan = np.zeros((spec.size, spec.size), dtype=bool)

    outer = Box(spec.margin, spec.margin, spec.size - spec.margin - 1, spec.size - spec.margin - 1)
    plan[outer.slices] = True
    rects = split_rooms(spec, rng)
    for rect in rects:
        plan[rect.slices] = False
    walls = plan.copy()

    # (footprint, opening, rooms, entry)
    doors = []
    for i, j in spanning_doors(rects, spec, rng):
        footprint, opening = place_door(plan, shared_wall(rects[i], rects[j], spec), rng, spec)
        doors.append((footprint, opening, (i + 1, j + 1), False))

    exits = [(index, wall) for index, rect in enumerate(rects) for wall in outer_walls(rect, spec)]
    if not exits:
        raise GenerationFailedError('No room has an outer wall long enough for a door')
    index, wall = exits[int(rng.integers(len(exits)))]
    footprint, opening = place_door(plan, wall, rng, spec)
    doors.append((footprint, opening, (index + 1,), True))

    walls &= plan

    labels = room_labels(len(rects), rng)
    rooms = []
    for number, (rect, label) in enumerate(zip(rects, labels), 1):
        room_doors = [footprint for footprint, _, owners, _ in doors if number in owners]
        decors = place_decors(plan, rect, label, room_doors, spec, rng)
        rooms.append(GroundTruthRoom(number, label, rect, tuple(decors)))

    # doors numbered like the detector numbers them: by footprint position
    ordered = sorted(doors, key=lambda door: (door[0].top, door[0].left))
    truth_doors = tuple(
        GroundTruthDoor(
            number, extend_toward(footprint, opening, 2).clip(spec.size, spec.size),
            opening, footprint, tuple(sorted(owners)), entry
        )
        for number, (footprint, opening, owners, entry) in enumerate(ordered, 1)
    )
    truth = GroundTruth(spec.seed, spec.size, tuple(rooms), truth_doors, BinaryImage(walls))
    return BinaryImage(plan), truth


def room_count_of(index: int) -> int:
    """5, 4, 3, 5, 4, 3, ... for plans 1, 2, 3, ..."""
    return 5 - (index - 1) % 3


def plan_seed(seed: int, index: int) -> int:
    return seed * 100003 + index


def truth_features(truth: GroundTruth, mean_distance: bool = False) -> List[dict]:
    """LOFD row of every ground truth room, from its own decors."""
    rows = []
    for room in truth.rooms:
        x, y, _ = polygon_centroid(room.polygon)
        vector = compute_lofd((x, y), room.decors, mean_distance)
        row = {'plan': truth.seed, 'room': room.id}
        row.update(zip(FEATURE_COLUMNS, vector.as_array().tolist()))
        row['label'] = room.label.value
        rows.append(row)
    return rows


def generate_plan(seed: int, index: int, attempts: int = 20) -> Tuple[BinaryImage, GroundTruth]:
    """Plan `index` of a corpus; seeds of failed layouts are skipped over."""
    for attempt in range(attempts):
        try:
            return generate(PlanSpec(plan_seed(seed, index) + attempt * 7919, room_count_of(index)))
        except GenerationFailedError as error:
            failure = error
    raise GenerationFailedError(f'Plan {index}: {failure} (after {attempts} layouts)')


def _generate_item(index, seed, out_dir, mean_distance):
    plan, truth = generate_plan(seed, index)
    stem = Path(out_dir) / 'plans' / f'{index:04d}'
    save_png(plan, stem.with_suffix('.png'))
    stem.with_suffix('.json').write_text(truth.to_json(), encoding='utf-8')
    rows = truth_features(truth, mean_distance)
    for row in rows:
        row['plan'] = index
    return index, rows


def split_rows(count: int, seed: int, train_fraction: float = 0.7) -> List[str]:
    """Seeded shuffle of row indices; the first round(fraction * count) go to training."""
    order = np.random.default_rng(seed).permutation(count)
    train = set(order[:int(round(train_fraction * count))].tolist())
    return ['train' if index in train else 'test' for index in range(count)]


def generate_corpus(n: int, seed: int, out_dir, processes: int = 1, train_fraction: float = 0.7,
                    mean_distance: bool = False) -> pd.DataFrame:
    if n < 1:
        raise InputError(f'Corpus needs at least one plan, got {n}')
    out_dir = Path(out_dir)
    (out_dir / 'plans').mkdir(parents=True, exist_ok=True)

    results = Pool(processes).imap(_generate_item, list(range(1, n + 1)), shared_args=(seed, out_dir, mean_distance))
    rows = [row for _, plan_rows in sorted(results, key=lambda result: result[0]) for row in plan_rows]

    features = pd.DataFrame(rows, columns=['plan', 'room'] + FEATURE_COLUMNS + ['label'])
    features.to_csv(out_dir / 'features.csv', index=False, float_format='%.9f')

    split = split_rows(len(features), seed, train_fraction)
    lines = [f'{index}\t{part}' for index, part in enumerate(split)]
    (out_dir / 'split.txt').write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return features
