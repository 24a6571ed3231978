"""Proximity based sentence model turning a plan model into text.

The general description states the room count, then for every room
its name, area, neighbours, location in the plan and the decors it
holds. The navigation description narrates the traversal plan: steps
and directions along every route, the doors passed and the dead ends.
"""
import re
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from errors import RenderError
from geometry import BinScheme, Direction8, bin_direction, polygon_centroid
from models import DecorClass, Room, RoomLabel, SemanticModel
from navigation import TraversalPlan
from utils import join_words, round_half_up


GD_HEADER = 'GENERAL DESCRIPTION'
NV_HEADER = 'NAVIGATION'

DOOR_AND_ROOM = 'There is a door and a room'
TURN_BACK = 'You have to turn back'

_DIRECTION = '|'.join(direction.label for direction in Direction8)
_ROOM = '|'.join(label.title for label in RoomLabel)
_DECOR = '|'.join(decor_class.title for decor_class in DecorClass)
_CLAUSE = rf'\d+ (?:{_DECOR})s? at the (?:{_DIRECTION})'

RULES = {
    'S1': rf'This floor plan has \d+ rooms?',
    'S2': rf'There is (?:a|an) (?:{_ROOM})',
    'S3': r'It has an area of \d+\.\d{2} square feet',
    'S4': rf'Its neighboring (?:room is|rooms are) (?:{_ROOM})(?:(?:, (?:{_ROOM}))* and (?:{_ROOM}))?',
    'S5': rf'It is located in the (?:{_DIRECTION})',
    'S6': rf'This room has {_CLAUSE}(?:, {_CLAUSE})*',
    'S7': rf'Go \d+ steps? in (?:{_DIRECTION}) direction',
    'S8': DOOR_AND_ROOM,
    'S9': TURN_BACK,
}

RULE_PATTERNS = {rule: re.compile(rf'^{pattern}\.$') for rule, pattern in RULES.items()}


def matching_rules(sentence: str) -> List[str]:
    """Rules whose surface pattern a rendered sentence (with its period) matches."""
    return [rule for rule, pattern in RULE_PATTERNS.items() if pattern.match(sentence)]


@dataclass(frozen=True)
class Description:
    gd: Tuple[str, ...]
    nv: Tuple[str, ...] = ()


def determiner(word: str) -> str:
    return 'an' if word[0].lower() in 'aeiou' else 'a'


def plural(word: str, count: int) -> str:
    return word + 's' if count > 1 else word


def room_sentences(room: Room, model: SemanticModel, scheme: BinScheme) -> List[str]:
    if room.label is None:
        raise RenderError(f'Room {room.id} has no label')
    name = room.label.title
    sentences = [
        f'There is {determiner(name)} {name}',
        f'It has an area of {room.area_sqft:.2f} square feet',
    ]

    if room.neighbors:
        names = []
        for neighbor in room.neighbors:
            label = model.room(neighbor).label
            if label is None:
                raise RenderError(f'Room {neighbor} has no label')
            names.append(label.title)
        many = len(names) > 1
        sentences.append(
            f'Its neighboring {plural("room", len(names))} {"are" if many else "is"} {join_words(names)}'
        )

    if room.global_dir is not None:
        sentences.append(f'It is located in the {room.global_dir.label}')

    if room.decors:
        x, y, _ = polygon_centroid(room.polygon)
        clauses = []
        # classes in the order of their first instance
        for decor_class in dict.fromkeys(decor.cls for decor in room.decors):
            instances = [decor for decor in room.decors if decor.cls == decor_class]
            first = instances[0]
            direction = first.direction or bin_direction((x, y), first.center, scheme)
            clauses.append(
                f'{len(instances)} {plural(decor_class.title, len(instances))} at the {direction.label}'
            )
        sentences.append('This room has ' + ', '.join(clauses))
    return sentences


def synthesize_gd(model: SemanticModel, scheme: BinScheme = None) -> List[str]:
    """S1 once, then S2-S6 for every room in ascending id.

    S4 is left out for a room without neighbours, S5 when the room
    location is unknown and S6 for a room without decors.
    """
    scheme = scheme or BinScheme.nonuniform()
    count = len(model.rooms)
    sentences = [f'This floor plan has {count} {plural("room", count)}']
    for room in model.rooms:
        sentences.extend(room_sentences(room, model, scheme))
    return sentences


def steps(length: float, step_pixels: float = 10.0) -> int:
    """Steps to walk `length` px; at least one."""
    return max(1, round_half_up(length / step_pixels))


def walk_sentences(waypoints, scheme: BinScheme, step_pixels: float = 10.0) -> List[str]:
    sentences = []
    for start, end in zip(waypoints, waypoints[1:]):
        length = float(np.hypot(end[0] - start[0], end[1] - start[1]))
        if not length:
            continue
        count = steps(length, step_pixels)
        direction = bin_direction(start, end, scheme)
        sentences.append(f'Go {count} {plural("step", count)} in {direction.label} direction')
    return sentences


def synthesize_nv(plan: TraversalPlan, scheme: BinScheme = None, step_pixels: float = 10.0) -> List[str]:
    """S7 for every segment of every route.

    A route ending at the door of the next room is followed by S8. A
    route through a dead end (a room with a single door) is narrated up
    to its turnaround point and closed by S9; other rooms left by the
    door they were entered by are narrated both ways.
    """
    scheme = scheme or BinScheme.nonuniform()
    sentences = []
    last = len(plan.routes) - 1
    for i, route in enumerate(plan.routes):
        points = route.outbound if route.dead_end else route.waypoints
        sentences.extend(walk_sentences(points, scheme, step_pixels))
        if route.dead_end:
            sentences.append(TURN_BACK)
        elif i < last:
            sentences.append(DOOR_AND_ROOM)
    return sentences


def describe(model: SemanticModel, plan: TraversalPlan = None, scheme: BinScheme = None, step_pixels: float = 10.0) -> Description:
    gd = synthesize_gd(model, scheme)
    nv = synthesize_nv(plan, scheme, step_pixels) if plan else []
    return Description(tuple(gd), tuple(nv))


def render(description: Description) -> str:
    """Both sections, one period-terminated sentence per line.

    The navigation section is left out when it has no sentences.
    """
    lines = [GD_HEADER] + [sentence + '.' for sentence in description.gd]
    if description.nv:
        lines += ['', NV_HEADER] + [sentence + '.' for sentence in description.nv]
    return '\n'.join(lines) + '\n'


def strip_headers(text: str) -> str:
    """Text of a rendered description without its section headers."""
    return '\n'.join(
        line for line in text.splitlines()
        if line.strip() not in {GD_HEADER, NV_HEADER}
    )
