"""Semantic model of a floor plan and its XML representation.

The XML document is the interchange format between the image
front-end and the description back-end::

    <?xml version="1.0" encoding="UTF-8"?>
    <RoomDetails>
      <Room>
        <RoomID>1</RoomID>
        <RoomLabel>KITCHEN</RoomLabel>
        <RoomArea>125.44</RoomArea>
        <RoomCoordinates>24,24 135,24 135,135 24,135</RoomCoordinates>
        <RoomLocation>NW</RoomLocation>
        <RoomNeighbors>2 3</RoomNeighbors>
        <RoomDecors>
          <Decor class="stove" cx="51.5" cy="40.5" dir="NW" bbox="40,29,63,52"/>
        </RoomDecors>
      </Room>
      <Doors entry="1">
        <Door id="1" cx="90.5" cy="21.5" bbox="74,18,105,47" rooms="1"/>
      </Doors>
    </RoomDetails>

Rooms are written in ascending id, doors in ascending id; the output
is byte-identical for equal models.
"""
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Optional, Tuple
from xml.etree import ElementTree

import numpy as np

from errors import InputError, ParseError, SerializationError
from geometry import Direction8, contains_point, polygon_area
from raster import Box, Point
from utils import format_number


class RoomLabel(IntEnum):
    BEDROOM = 1
    BATHROOM = 2
    ENTRY = 3
    KITCHEN = 4
    HALL = 5

    @property
    def title(self) -> str:
        """Name used in sentences, e.g. 'bedroom'."""
        return self.name.lower()


class DecorClass(IntEnum):
    BED = 1
    SOFA = 2
    LARGE_SOFA = 3
    TABLE = 4
    CHAIR = 5
    SINK = 6
    TWIN_SINK = 7
    LARGE_SINK = 8
    TUB = 9
    STOVE = 10
    WARDROBE = 11
    TOILET = 12

    @property
    def title(self) -> str:
        """Name used in sentences, e.g. 'large sofa'."""
        return self.name.lower().replace('_', ' ')

    @property
    def code(self) -> str:
        """Name used in files, e.g. 'large_sofa'."""
        return self.name.lower()

    @classmethod
    def from_code(cls, code: str) -> 'DecorClass':
        return cls[code.upper()]


@dataclass(frozen=True)
class DecorInstance:
    cls: DecorClass
    bbox: Box
    center: Point = None
    direction: Optional[Direction8] = None

    def __post_init__(self):
        object.__setattr__(self, 'cls', DecorClass(self.cls))
        if self.center is None:
            object.__setattr__(self, 'center', self.bbox.center)


@dataclass(frozen=True)
class Door:
    id: int
    bbox: Box
    centroid: Point
    rooms: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'rooms', tuple(sorted(self.rooms)))


@dataclass(frozen=True)
class Room:
    id: int
    label: Optional[RoomLabel]
    polygon: Tuple[Point, ...]
    area_sqft: float
    neighbors: Tuple[int, ...] = ()
    decors: Tuple[DecorInstance, ...] = ()
    global_dir: Optional[Direction8] = None

    def __post_init__(self):
        object.__setattr__(self, 'polygon', tuple(tuple(vertex) for vertex in self.polygon))
        object.__setattr__(self, 'area_sqft', round(float(self.area_sqft), 2))
        object.__setattr__(self, 'neighbors', tuple(sorted(self.neighbors)))
        object.__setattr__(self, 'decors', tuple(self.decors))
        if self.label is not None:
            object.__setattr__(self, 'label', RoomLabel(self.label))


@dataclass(frozen=True)
class SemanticModel:
    rooms: Tuple[Room, ...] = ()
    doors: Tuple[Door, ...] = ()
    entry_door: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'rooms', tuple(sorted(self.rooms, key=lambda room: room.id)))
        object.__setattr__(self, 'doors', tuple(sorted(self.doors, key=lambda door: door.id)))

    @property
    def room_ids(self) -> List[int]:
        return [room.id for room in self.rooms]

    def room(self, room_id) -> Room:
        for room in self.rooms:
            if room.id == room_id:
                return room
        raise KeyError(room_id)

    def door(self, door_id) -> Door:
        for door in self.doors:
            if door.id == door_id:
                return door
        raise KeyError(door_id)

    def door_adjacency(self) -> np.ndarray:
        """AM_D over rooms in ascending id: 1 where a door joins two rooms."""
        index = {room_id: i for i, room_id in enumerate(self.room_ids)}
        adjacency = np.zeros((len(index), len(index)), dtype=int)
        for door in self.doors:
            if len(door.rooms) == 2:
                a, b = (index[room_id] for room_id in door.rooms)
                adjacency[a, b] = adjacency[b, a] = 1
        return adjacency

    def problems(self) -> List[str]:
        """Violated model invariants, described."""
        problems = []
        room_ids = self.room_ids
        if len(set(room_ids)) != len(room_ids):
            problems.append('room ids are not unique')
        door_ids = [door.id for door in self.doors]
        if len(set(door_ids)) != len(door_ids):
            problems.append('door ids are not unique')
        if self.entry_door is not None and self.entry_door not in door_ids:
            problems.append(f'entry door {self.entry_door} is not among the doors')
        known = set(room_ids)
        neighbors: Dict[int, set] = {room.id: set(room.neighbors) for room in self.rooms}
        for room in self.rooms:
            if len(room.polygon) < 3:
                problems.append(f'room {room.id} polygon has less than 3 vertices')
            elif polygon_area(room.polygon) == 0:
                problems.append(f'room {room.id} polygon has no area')
            if room.area_sqft <= 0:
                problems.append(f'room {room.id} has non-positive area')
            for other in room.neighbors:
                if other not in known or room.id not in neighbors[other]:
                    problems.append(f'neighbor relation of rooms {room.id} and {other} is not symmetric')
            for decor in room.decors:
                if not decor.bbox.contains(decor.center):
                    problems.append(f'{decor.cls.title} center lies outside of its box')
                if len(room.polygon) >= 3 and not contains_point(room.polygon, decor.center):
                    problems.append(f'{decor.cls.title} at {decor.center} lies outside room {room.id}')
        for door in self.doors:
            if len(door.rooms) not in {1, 2}:
                problems.append(f'door {door.id} belongs to {len(door.rooms)} rooms')
            for room_id in door.rooms:
                if room_id not in known:
                    problems.append(f'door {door.id} refers to unknown room {room_id}')
        return problems

    def validate(self):
        problems = self.problems()
        if problems:
            raise SerializationError('Invalid semantic model: ' + '; '.join(problems))


def _point(point: Point) -> str:
    return ','.join(format_number(value) for value in point)


def _box(box: Box) -> str:
    return ','.join(str(value) for value in box.as_xyxy())


def to_xml(model: SemanticModel) -> bytes:
    model.validate()
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if not model.rooms and not model.doors:
        lines.append('<RoomDetails/>')
        return ('\n'.join(lines) + '\n').encode('utf-8')

    def element(indent, tag, text):
        if text:
            return f'{"  " * indent}<{tag}>{text}</{tag}>'
        return f'{"  " * indent}<{tag}/>'

    lines.append('<RoomDetails>')
    for room in model.rooms:
        lines.append('  <Room>')
        lines.append(element(2, 'RoomID', str(room.id)))
        lines.append(element(2, 'RoomLabel', room.label.name if room.label is not None else ''))
        lines.append(element(2, 'RoomArea', f'{room.area_sqft:.2f}'))
        lines.append(element(2, 'RoomCoordinates', ' '.join(_point(vertex) for vertex in room.polygon)))
        lines.append(element(2, 'RoomLocation', room.global_dir.name if room.global_dir else ''))
        lines.append(element(2, 'RoomNeighbors', ' '.join(str(neighbor) for neighbor in room.neighbors)))
        if room.decors:
            lines.append('    <RoomDecors>')
            for decor in room.decors:
                x, y = decor.center
                direction = f' dir="{decor.direction.name}"' if decor.direction else ''
                lines.append(
                    f'      <Decor class="{decor.cls.code}" cx="{format_number(x)}" cy="{format_number(y)}"'
                    f'{direction} bbox="{_box(decor.bbox)}"/>'
                )
            lines.append('    </RoomDecors>')
        else:
            lines.append('    <RoomDecors/>')
        lines.append('  </Room>')
    if model.doors:
        entry = f' entry="{model.entry_door}"' if model.entry_door is not None else ''
        lines.append(f'  <Doors{entry}>')
        for door in model.doors:
            x, y = door.centroid
            rooms = ' '.join(str(room_id) for room_id in door.rooms)
            lines.append(
                f'    <Door id="{door.id}" cx="{format_number(x)}" cy="{format_number(y)}"'
                f' bbox="{_box(door.bbox)}" rooms="{rooms}"/>'
            )
        lines.append('  </Doors>')
    lines.append('</RoomDetails>')
    return ('\n'.join(lines) + '\n').encode('utf-8')


def _number(text: str, path: str):
    text = (text or '').strip()
    try:
        if any(character in text for character in '.eE'):
            return float(text)
        return int(text)
    except ValueError:
        raise ParseError(f'expected a number, got {text!r}', path)


def _integer(text: str, path: str) -> int:
    value = _number(text, path)
    if not isinstance(value, int):
        raise ParseError(f'expected an integer, got {text!r}', path)
    return value


def _parse_box(text: str, path: str) -> Box:
    values = [_integer(value, path) for value in (text or '').split(',')]
    if len(values) != 4:
        raise ParseError(f'expected "x0,y0,x1,y1", got {text!r}', path)
    box = Box.from_xyxy(*values)
    if box.width < 1 or box.height < 1:
        raise ParseError(f'box {text!r} is empty', path)
    return box


def _parse_point(text: str, path: str) -> Point:
    values = [_number(value, path) for value in text.split(',')]
    if len(values) != 2:
        raise ParseError(f'expected "x,y", got {text!r}', path)
    return tuple(values)


def _attribute(element, name, path, required=True):
    value = element.get(name)
    if value is None and required:
        raise ParseError(f'missing attribute "{name}"', path)
    return value


def _check_attributes(element, allowed, path):
    unknown = set(element.attrib) - set(allowed)
    if unknown:
        raise ParseError(f'unknown attributes: {", ".join(sorted(unknown))}', path)


def _enum(kind, text, path):
    try:
        return kind[text.strip().upper()]
    except KeyError:
        raise ParseError(f'unknown {kind.__name__} {text!r}', path)


def _direction(text, path) -> Direction8:
    try:
        return Direction8.from_code(text.strip().upper())
    except InputError as error:
        raise ParseError(str(error), path)


ROOM_ELEMENTS = ['RoomID', 'RoomLabel', 'RoomArea', 'RoomCoordinates', 'RoomLocation', 'RoomNeighbors', 'RoomDecors']
REQUIRED_ROOM_ELEMENTS = ['RoomID', 'RoomLabel', 'RoomArea', 'RoomCoordinates']


def _parse_decor(element, path) -> DecorInstance:
    _check_attributes(element, {'class', 'cx', 'cy', 'dir', 'bbox'}, path)
    try:
        decor_class = DecorClass.from_code(_attribute(element, 'class', path))
    except KeyError:
        raise ParseError(f'unknown decor class {element.get("class")!r}', path)
    center = (_number(_attribute(element, 'cx', path), path), _number(_attribute(element, 'cy', path), path))
    bbox_text = _attribute(element, 'bbox', path, required=False)
    bbox = _parse_box(bbox_text, path) if bbox_text else Box(
        int(center[1]), int(center[0]), int(center[1]), int(center[0])
    )
    direction = element.get('dir')
    return DecorInstance(
        decor_class, bbox, center,
        _direction(direction, path) if direction else None
    )


def _parse_room(element, number) -> Room:
    children = {}
    for child in element:
        path = f'Room/{child.tag}'
        if child.tag not in ROOM_ELEMENTS:
            raise ParseError(f'unknown element in room #{number}', path)
        if child.tag in children:
            raise ParseError(f'repeated element in room #{number}', path)
        if child.tag != 'RoomDecors' and len(child):
            raise ParseError(f'unexpected child elements in room #{number}', path)
        children[child.tag] = child

    for tag in REQUIRED_ROOM_ELEMENTS:
        if tag not in children:
            raise ParseError(f'missing element in room #{number}', f'Room/{tag}')

    def text(tag):
        child = children.get(tag)
        return (child.text or '').strip() if child is not None else ''

    room_id = _integer(text('RoomID'), 'Room/RoomID')
    label = _enum(RoomLabel, text('RoomLabel'), 'Room/RoomLabel') if text('RoomLabel') else None
    area = _number(text('RoomArea'), 'Room/RoomArea')
    polygon = [_parse_point(vertex, 'Room/RoomCoordinates') for vertex in text('RoomCoordinates').split()]
    if len(polygon) < 3:
        raise ParseError(f'room {room_id} needs at least 3 vertices', 'Room/RoomCoordinates')
    location = _direction(text('RoomLocation'), 'Room/RoomLocation') if text('RoomLocation') else None
    neighbors = [_integer(value, 'Room/RoomNeighbors') for value in text('RoomNeighbors').split()]

    decors = []
    for decor in children.get('RoomDecors', []):
        path = 'Room/RoomDecors/' + decor.tag
        if decor.tag != 'Decor':
            raise ParseError(f'unknown element in room {room_id}', path)
        decors.append(_parse_decor(decor, path))

    return Room(room_id, label, polygon, area, neighbors, decors, location)


def _parse_doors(element):
    _check_attributes(element, {'entry'}, 'Doors')
    entry = element.get('entry')
    doors = []
    for child in element:
        path = f'Doors/{child.tag}'
        if child.tag != 'Door':
            raise ParseError('unknown element', path)
        _check_attributes(child, {'id', 'cx', 'cy', 'bbox', 'rooms'}, path)
        doors.append(Door(
            id=_integer(_attribute(child, 'id', path), path),
            bbox=_parse_box(_attribute(child, 'bbox', path), path),
            centroid=(_number(_attribute(child, 'cx', path), path), _number(_attribute(child, 'cy', path), path)),
            rooms=[_integer(value, path) for value in _attribute(child, 'rooms', path).split()]
        ))
    return doors, (_integer(entry, 'Doors') if entry is not None else None)


def from_xml(data: bytes) -> SemanticModel:
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as error:
        raise ParseError(f'malformed XML: {error}', 'RoomDetails')
    if root.tag != 'RoomDetails':
        raise ParseError(f'unexpected root element <{root.tag}>', root.tag)

    rooms, doors, entry = [], [], None
    seen_rooms = set()
    has_doors = False
    for number, child in enumerate(root, 1):
        if child.tag == 'Room':
            room = _parse_room(child, len(rooms) + 1)
            if room.id in seen_rooms:
                raise ParseError(f'duplicate room id {room.id}', 'Room/RoomID')
            seen_rooms.add(room.id)
            rooms.append(room)
        elif child.tag == 'Doors' and not has_doors:
            has_doors = True
            doors, entry = _parse_doors(child)
        else:
            raise ParseError('unknown or repeated element', child.tag)

    door_ids = [door.id for door in doors]
    if len(set(door_ids)) != len(door_ids):
        raise ParseError('duplicate door id', 'Doors/Door')

    model = SemanticModel(rooms, doors, entry)
    problems = model.problems()
    if problems:
        raise ParseError('; '.join(problems), 'RoomDetails')
    return model
