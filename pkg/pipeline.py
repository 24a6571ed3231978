"""From a plan raster to its semantic model, traversal and description.

The stages run in a fixed order: walls, doors, rooms and their
adjacency, the plan boundary and its entry door, decors of every room,
room labels from LOFD features, locations of rooms within the plan,
the traversal through all rooms and finally the sentences.
"""
import warnings
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from classifiers import RoomClassifier, load_model, predict
from config import Config
from decor import SignatureLibrary, classify_decors, default_library, load_library
from errors import UndefinedDirectionError
from geometry import BinScheme, bin_direction, contains_point, polygon_centroid, trace_boundary
from grammar import Description, describe, render
from lofd import compute_lofd
from models import DecorInstance, Door, Room, SemanticModel, to_xml
from navigation import TraversalPlan, find_entry, navigate, save_overlay
from raster import BinaryImage, Point, load_png
from segmentation import (
    DoorCandidate, DoorTemplate, RoomRegion, build_adjacency, detect_doors, door_room_incidence,
    extract_rooms, extract_walls, partition_rooms, room_area_sqft
)


@dataclass(frozen=True)
class Resources:
    """Everything a description needs besides the plan itself."""

    classifier: RoomClassifier
    library: SignatureLibrary
    template: DoorTemplate

    @classmethod
    def load(cls, model_path, config: Config = Config()) -> 'Resources':
        library = load_library(config.library) if config.library else default_library()
        if config.door_template:
            template = DoorTemplate.load(config.door_template, config.scales)
        else:
            template = DoorTemplate.default(config.scales)
        return cls(load_model(model_path), library, template)


@dataclass(frozen=True, eq=False)
class PlanDescription:
    plan: BinaryImage
    model: SemanticModel
    traversal: TraversalPlan
    description: Description

    @property
    def text(self) -> str:
        return render(self.description)

    @property
    def xml(self) -> bytes:
        return to_xml(self.model)

    def save(self, stem, overlay=None) -> List[Path]:
        """Write `<stem>.txt` and `<stem>.xml` (and the overlay PNG, if asked for)."""
        stem = Path(stem)
        files = [stem.with_suffix('.txt'), stem.with_suffix('.xml')]
        files[0].write_text(self.text, encoding='utf-8')
        files[1].write_bytes(self.xml)
        if overlay:
            save_overlay(self.plan, self.model, self.traversal, overlay)
            files.append(Path(overlay))
        return files


def boundary_points(walls: BinaryImage) -> List[Point]:
    """Outermost wall pixels of every row and column."""
    ys, xs = np.nonzero(walls.data)
    points = set()
    for axis, other in [(ys, xs), (xs, ys)]:
        order = np.lexsort((other, axis))
        first = np.unique(axis[order], return_index=True)[1]
        last = np.append(first[1:], len(order)) - 1
        for index in np.concatenate([first, last]):
            position = order[index]
            points.add((int(xs[position]), int(ys[position])))
    return sorted(points)


def plan_boundary(walls: BinaryImage, shrink_factor: float = 0.0):
    return trace_boundary(boundary_points(walls), shrink_factor)


def attach_doors(rooms: Sequence[RoomRegion], doors: Sequence[DoorCandidate], dilation: int = 2) -> List[DoorCandidate]:
    """Doors touching at least one room, renumbered from 1.

    A door belonging to no room is most likely a misdetection; it is
    dropped with a warning.
    """
    incidence = door_room_incidence(
        {room.id: room.polygon for room in rooms},
        {door.id: door.bbox for door in doors},
        dilation
    )
    kept = []
    for door in doors:
        if not incidence[door.id]:
            warnings.warn(f'Door {door.id} at {door.centroid} does not belong to any room; dropping it')
            continue
        kept.append(replace(door, id=len(kept) + 1))
    return kept


def room_decors(plan: BinaryImage, walls: BinaryImage, rooms: Sequence[RoomRegion], doors: Sequence[DoorCandidate],
                library: SignatureLibrary, config: Config, scheme: BinScheme):
    """Decor instances of every room with their directions from the room centroid."""
    wall_mask = np.array(walls.data)
    for door in doors:
        wall_mask[door.footprint.clip(*plan.shape).slices] = True
    wall_mask = BinaryImage(wall_mask)

    polygons = {room.id: room.polygon for room in rooms}
    decors = {}
    for crop in partition_rooms(plan, rooms):
        polygon = polygons[crop.id]
        x, y, _ = polygon_centroid(polygon)
        found = []
        for instance in classify_decors(
            crop.image, wall_mask.crop(crop.box), library, config.min_blob_area, config.merge_gap, crop.offset
        ):
            if not contains_point(polygon, instance.center):
                warnings.warn(f'{instance.cls.title} at {instance.center} lies outside of room {crop.id}; dropping it')
                continue
            found.append(DecorInstance(
                instance.cls, instance.bbox, instance.center, bin_direction((x, y), instance.center, scheme)
            ))
        decors[crop.id] = tuple(found)
    return decors


def locate(room: Room, plan_center: Point, scheme: BinScheme):
    """Direction of the room centroid from the plan centroid; None when they coincide."""
    x, y, _ = polygon_centroid(room.polygon)
    try:
        return bin_direction(plan_center, (x, y), scheme)
    except UndefinedDirectionError:
        return None


def analyse(plan: BinaryImage, resources: Resources, config: Config = Config()) -> Tuple[SemanticModel, BinScheme]:
    """Semantic model of a plan raster."""
    scheme = BinScheme.named(config.bin_scheme, config.cardinal_span)

    walls = extract_walls(plan, config.se_radius, config.wall_min_thickness)
    doors = detect_doors(plan, resources.template, config.door_score_min, config.door_reach)
    regions = extract_rooms(walls, doors, config.min_room_area)
    doors = attach_doors(regions, doors, config.door_dilation)
    adjacency = build_adjacency(regions, doors, config.door_dilation)

    decors = room_decors(plan, walls, regions, doors, resources.library, config, scheme)

    rooms = [
        Room(
            id=region.id,
            label=None,
            polygon=region.polygon,
            area_sqft=room_area_sqft(region.pixel_area, config.area_divisor),
            neighbors=adjacency.neighbors[region.id],
            decors=decors[region.id]
        )
        for region in regions
    ]
    model_doors = [
        Door(door.id, door.bbox, door.centroid, adjacency.door_rooms[door.id])
        for door in doors
    ]

    boundary = plan_boundary(walls, config.shrink_factor)
    _, entry_door = find_entry(rooms, model_doors, boundary, config.door_dilation)

    features = np.vstack([
        compute_lofd(polygon_centroid(room.polygon)[:2], room.decors, config.mean_distance).as_array()
        for room in rooms
    ])
    labels = predict(resources.classifier, features)

    plan_x, plan_y, _ = polygon_centroid(boundary)
    rooms = [
        replace(room, label=int(label), global_dir=locate(room, (plan_x, plan_y), scheme))
        for room, label in zip(rooms, labels)
    ]
    return SemanticModel(tuple(rooms), tuple(model_doors), entry_door), scheme


def describe_plan(plan: BinaryImage, resources: Resources, config: Config = Config()) -> PlanDescription:
    model, scheme = analyse(plan, resources, config)
    traversal = navigate(
        model, plan, config.door_dilation, config.max_corners, config.harris_k, config.corner_push
    )
    description = describe(model, traversal, scheme, config.step_pixels)
    return PlanDescription(plan, model, traversal, description)


def describe_file(path, resources: Resources, config: Config = Config()) -> PlanDescription:
    return describe_plan(load_png(path, config.threshold), resources, config)
