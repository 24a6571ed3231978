"""Routes through a plan: door structure, room order and in-room paths.

Rooms are visited in depth-first order of the door adjacency graph,
starting from the room of the entry door. Inside a room a walker moves
between visibility graph vertices (door centroids and the corners of
obstacles, pushed off the ink), along the shortest path. When the next
room in order does not share a door with the current one, the walker
goes back through the rooms it came from.
"""
import heapq
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image, ImageDraw

from errors import DisconnectedPlanError, NoEntryError, OrphanDoorError, UnroutableRoomError
from geometry import contains_point, polygon_bounds, polygon_centroid, polygon_contains_box
from models import DecorInstance, Door, Room, SemanticModel
from raster import BinaryImage, Box, Point, harris_corners, label_array, to_pil
from segmentation import door_room_incidence, polygon_mask


DoorStructure = Dict[int, Tuple[int, ...]]


def build_door_structure(rooms: Sequence[Room], doors: Sequence[Door], dilation: int = 2) -> DoorStructure:
    """Ids of doors of every room; a shared door is listed under both rooms."""
    incidence = door_room_incidence(
        {room.id: room.polygon for room in rooms},
        {door.id: door.bbox for door in doors},
        dilation
    )
    orphans = [door_id for door_id, owners in incidence.items() if not owners]
    if orphans:
        raise OrphanDoorError(f'Doors {", ".join(map(str, orphans))} do not belong to any room')
    return {
        room.id: tuple(door_id for door_id, owners in sorted(incidence.items()) if room.id in owners)
        for room in sorted(rooms, key=lambda room: room.id)
    }


def door_owners(structure: DoorStructure) -> Dict[int, Tuple[int, ...]]:
    owners: Dict[int, List[int]] = {}
    for room_id, door_ids in sorted(structure.items()):
        for door_id in door_ids:
            owners.setdefault(door_id, []).append(room_id)
    return {door_id: tuple(rooms) for door_id, rooms in owners.items()}


def outer_doors(doors: Sequence[Door], structure: DoorStructure, boundary: Sequence[Point]) -> List[Door]:
    """Doors of a single room reaching beyond the plan boundary."""
    owners = door_owners(structure)
    return [
        door for door in sorted(doors, key=lambda door: door.id)
        if len(owners.get(door.id, ())) == 1 and not polygon_contains_box(boundary, door.bbox)
    ]


def find_entry(rooms: Sequence[Room], doors: Sequence[Door], boundary: Sequence[Point], dilation: int = 2) -> Tuple[int, int]:
    """(entry room id, entry door id): the outer door of the lowest id."""
    structure = build_door_structure(rooms, doors, dilation)
    candidates = outer_doors(doors, structure, boundary)
    if not candidates:
        raise NoEntryError('No door leads outside of the plan')
    door = candidates[0]
    return door_owners(structure)[door.id][0], door.id


def dfs_order(adjacency: np.ndarray, room_ids: Sequence[int], entry_room: int) -> Tuple[List[int], Dict[int, Optional[int]]]:
    """Preorder of rooms (neighbours in ascending id) and the parent of every room."""
    room_ids = list(room_ids)
    index = {room_id: i for i, room_id in enumerate(room_ids)}
    order = [entry_room]
    parents: Dict[int, Optional[int]] = {entry_room: None}
    stack = [entry_room]
    while stack:
        current = stack[-1]
        unvisited = [
            other for other in sorted(room_ids)
            if adjacency[index[current], index[other]] and other not in parents
        ]
        if not unvisited:
            stack.pop()
            continue
        child = unvisited[0]
        parents[child] = current
        order.append(child)
        stack.append(child)

    unreachable = sorted(set(room_ids) - set(order))
    if unreachable:
        raise DisconnectedPlanError(
            f'Rooms {", ".join(map(str, unreachable))} cannot be reached from room {entry_room}'
        )
    return order, parents


@dataclass(frozen=True, eq=False)
class Obstacles:
    """Pixels a walker cannot cross, in a window of the plan."""

    blocked: np.ndarray
    box: Box

    def free(self, point: Point) -> bool:
        position = self.local(point)
        return position is not None and not self.blocked[position]

    def visible(self, a: Point, b: Point) -> bool:
        """The segment sampled at 1 px steps hits no obstacle."""
        samples = int(np.ceil(np.hypot(b[0] - a[0], b[1] - a[1]))) + 1
        t = np.linspace(0, 1, max(samples, 2))
        xs = np.rint(a[0] + t * (b[0] - a[0])).astype(int) - self.box.left
        ys = np.rint(a[1] + t * (b[1] - a[1])).astype(int) - self.box.top
        height, width = self.blocked.shape
        if xs.min() < 0 or ys.min() < 0 or xs.max() >= width or ys.max() >= height:
            return False
        return not self.blocked[ys, xs].any()

    def local(self, point: Point) -> Optional[Tuple[int, int]]:
        """(row, column) of a point in the window, None outside of it."""
        x, y = int(round(point[0])) - self.box.left, int(round(point[1])) - self.box.top
        height, width = self.blocked.shape
        if 0 <= x < width and 0 <= y < height:
            return y, x
        return None

    def reachable(self, points: Sequence[Point]) -> np.ndarray:
        """Free pixels 4-connected to any of the free `points`."""
        labels, _ = label_array(~self.blocked, connectivity=4)
        seeds = set()
        for point in points:
            position = self.local(point)
            if position is not None and labels[position]:
                seeds.add(int(labels[position]))
        return np.isin(labels, sorted(seeds))

    def nearest_free(self, point: Point, allowed: np.ndarray = None) -> Point:
        free = ~self.blocked if allowed is None else allowed & ~self.blocked
        ys, xs = np.nonzero(free)
        if not len(xs):
            raise UnroutableRoomError('Room has no free pixel')
        distances = np.hypot(xs + self.box.left - point[0], ys + self.box.top - point[1])
        best = int(np.argmin(distances))
        return int(xs[best]) + self.box.left, int(ys[best]) + self.box.top


def room_obstacles(plan: BinaryImage, polygon: Sequence[Point], door_boxes: Sequence[Box], margin: int = 4) -> Obstacles:
    """Ink and everything outside of the room polygon, except within door boxes."""
    box = polygon_bounds(polygon).dilate(margin).clip(plan.height, plan.width)
    blocked = plan.data[box.slices] | ~polygon_mask(polygon, box)
    for door_box in door_boxes:
        if door_box.intersects(box):
            local = Box(
                max(door_box.top, box.top) - box.top, max(door_box.left, box.left) - box.left,
                min(door_box.bottom, box.bottom) - box.top, min(door_box.right, box.right) - box.left
            )
            blocked[local.slices] = False
    return Obstacles(blocked, box)


# outward diagonal of each corner of Box.corners(): TL, TR, BR, BL
CORNER_DIRECTIONS = [(-1, -1), (1, -1), (1, 1), (-1, 1)]


def decor_corners(decors: Sequence[DecorInstance], push: int = 3) -> List[Point]:
    points = []
    for decor in decors:
        for (x, y), (dx, dy) in zip(decor.bbox.corners(), CORNER_DIRECTIONS):
            points.append((x + push * dx, y + push * dy))
    return points


def push_off(mask: np.ndarray, x: int, y: int, push: int = 3, radius: int = 3) -> Optional[Point]:
    """Move a corner away from the centroid of the mask pixels around it."""
    top, left = max(0, y - radius), max(0, x - radius)
    ys, xs = np.nonzero(mask[top:y + radius + 1, left:x + radius + 1])
    if not len(xs):
        return None
    dx = int(np.sign(x - (xs.mean() + left)))
    dy = int(np.sign(y - (ys.mean() + top)))
    if not dx and not dy:
        return None
    return x + push * dx, y + push * dy


@dataclass(frozen=True, eq=False)
class VisibilityGraph:
    """Vertices V_L and weights AM_N (Euclidean length, 0 where not visible)."""

    vertices: Tuple[Point, ...]
    weights: np.ndarray

    def index(self, point: Point) -> int:
        return self.vertices.index(tuple(point))


def build_visibility_graph(
    obstacles: Obstacles, door_points: Sequence[Point],
    decors: Sequence[DecorInstance] = (), extra_points: Sequence[Point] = (),
    max_corners: int = 1000, harris_k: float = 0.04, push: int = 3
) -> VisibilityGraph:
    """Door centroids and `extra_points` come first, in the given order.

    Decor box corners and Harris corners of the obstacle mask follow,
    pushed `push` px away from the obstacles they belong to; corners
    landing on an obstacle are dropped.
    """
    fixed = [tuple(point) for point in list(door_points) + list(extra_points)]

    corners = decor_corners(decors, push)
    for x, y in harris_corners(BinaryImage(obstacles.blocked), max_corners, harris_k):
        pushed = push_off(obstacles.blocked, x, y, push)
        if pushed:
            corners.append((pushed[0] + obstacles.box.left, pushed[1] + obstacles.box.top))

    vertices = []
    for point in fixed:
        if point not in vertices:
            vertices.append(point)
    for point in corners:
        if point not in vertices and obstacles.free(point):
            vertices.append(point)

    count = len(vertices)
    weights = np.zeros((count, count))
    for i in range(count):
        for j in range(i + 1, count):
            if obstacles.visible(vertices[i], vertices[j]):
                a, b = vertices[i], vertices[j]
                weights[i, j] = weights[j, i] = np.hypot(b[0] - a[0], b[1] - a[1])
    return VisibilityGraph(tuple(vertices), weights)


def route_room(graph: VisibilityGraph, source: int, target: int) -> List[int]:
    """Vertex indices of the shortest path; equal lengths go to the smallest index sequence."""
    queue = [(0.0, (source,))]
    done = set()
    while queue:
        distance, path = heapq.heappop(queue)
        vertex = path[-1]
        if vertex == target:
            return list(path)
        if vertex in done:
            continue
        done.add(vertex)
        for other in np.nonzero(graph.weights[vertex])[0].tolist():
            if other not in done:
                heapq.heappush(queue, (round(distance + graph.weights[vertex, other], 9), path + (other,)))
    raise UnroutableRoomError(
        f'No path between {graph.vertices[source]} and {graph.vertices[target]}'
    )


@dataclass(frozen=True)
class Route:
    """Walk inside a room from the door it was entered by.

    A turned-back route (entered and left by the same door) goes to
    the room interior and returns; `turnaround` is the index of the
    interior waypoint. The walk ends inside the last room when
    `exit_door` is None. `dead_end` marks rooms with a single door.
    """

    room_id: int
    entry_door: int
    exit_door: Optional[int]
    waypoints: Tuple[Point, ...]
    revisit: bool = False
    turnaround: Optional[int] = None
    dead_end: bool = False

    @property
    def length(self) -> float:
        return sum(np.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(self.waypoints, self.waypoints[1:]))

    @property
    def outbound(self) -> Tuple[Point, ...]:
        """Waypoints up to the turnaround (all of them for a through route)."""
        if self.turnaround is None:
            return self.waypoints
        return self.waypoints[:self.turnaround + 1]


@dataclass(frozen=True)
class TraversalPlan:
    entry_room: int
    entry_door: int
    order: Tuple[int, ...]
    routes: Tuple[Route, ...]

    @property
    def door_sequence(self) -> List[int]:
        """Doors in the order they are first passed."""
        sequence = [self.entry_door]
        for route in self.routes:
            if route.exit_door is not None and route.exit_door not in sequence:
                sequence.append(route.exit_door)
        return sequence


class RoomRouter:
    """Builds and caches the visibility graph of every room on first use."""

    def __init__(self, model: SemanticModel, plan: BinaryImage, structure: DoorStructure,
                 max_corners: int = 1000, harris_k: float = 0.04, push: int = 3):
        self.model = model
        self.plan = plan
        self.structure = structure
        self.max_corners = max_corners
        self.harris_k = harris_k
        self.push = push
        self.graphs = {}
        self.interiors = {}

    def graph(self, room_id) -> VisibilityGraph:
        if room_id not in self.graphs:
            room = self.model.room(room_id)
            doors = [self.model.door(door_id) for door_id in self.structure[room_id]]
            obstacles = room_obstacles(self.plan, room.polygon, [door.bbox for door in doors])
            door_points = [door.centroid for door in doors]
            interior = self.interior(room, obstacles, door_points)
            self.interiors[room_id] = interior
            self.graphs[room_id] = build_visibility_graph(
                obstacles, door_points, room.decors, [interior],
                self.max_corners, self.harris_k, self.push
            )
        return self.graphs[room_id]

    @staticmethod
    def interior(room: Room, obstacles: Obstacles, door_points: Sequence[Point]) -> Point:
        """The free pixel closest to the room centroid that can be walked to from a door."""
        x, y, _ = polygon_centroid(room.polygon)
        centroid = (int(round(x)), int(round(y)))
        reachable = obstacles.reachable(door_points)
        if not reachable.any():
            raise UnroutableRoomError(f'Room {room.id} cannot be entered through its doors')
        inside = reachable & polygon_mask(room.polygon, obstacles.box)
        if inside.any():
            reachable = inside
        position = obstacles.local(centroid)
        if position is not None and reachable[position] and contains_point(room.polygon, centroid):
            return centroid
        return obstacles.nearest_free(centroid, reachable)

    def dead_end(self, room_id) -> bool:
        return len(self.structure[room_id]) == 1

    def route(self, room_id, entry_door, exit_door, revisit=False) -> Route:
        """Door to door; out and back for the same door; to the interior when `exit_door` is None."""
        graph = self.graph(room_id)
        start = graph.index(self.model.door(entry_door).centroid)
        turnaround = None
        if exit_door is None:
            path = route_room(graph, start, graph.index(self.interiors[room_id]))
        elif entry_door == exit_door:
            path = route_room(graph, start, graph.index(self.interiors[room_id]))
            path = path + path[-2::-1]
            turnaround = (len(path) - 1) // 2
        else:
            path = route_room(graph, start, graph.index(self.model.door(exit_door).centroid))
        return Route(
            room_id, entry_door, exit_door,
            tuple(graph.vertices[i] for i in path), revisit, turnaround, self.dead_end(room_id)
        )


def navigate(model: SemanticModel, plan: BinaryImage, dilation: int = 2,
             max_corners: int = 1000, harris_k: float = 0.04, push: int = 3) -> TraversalPlan:
    """Walk all rooms from the entry door, backtracking where needed.

    Between two rooms sharing several doors the lowest door id is
    used. Every room left through the door it was entered by gets an
    out-and-back route to its interior. So does the last room when it
    has a single door; otherwise the walk ends at its interior.
    """
    if model.entry_door is None:
        raise NoEntryError('The model has no entry door')
    structure = build_door_structure(model.rooms, model.doors, dilation)
    entry_room = door_owners(structure)[model.entry_door][0]
    order, parents = dfs_order(model.door_adjacency(), model.room_ids, entry_room)
    router = RoomRouter(model, plan, structure, max_corners, harris_k, push)

    def shared_door(a, b) -> Optional[int]:
        shared = set(structure[a]) & set(structure[b])
        return min(shared) if shared else None

    routes = []
    current, door_in, revisit = entry_room, model.entry_door, False
    for next_room in order[1:]:
        while shared_door(current, next_room) is None:
            parent = parents[current]
            door_out = shared_door(current, parent)
            routes.append(router.route(current, door_in, door_out, revisit))
            current, door_in, revisit = parent, door_out, True
        door_out = shared_door(current, next_room)
        routes.append(router.route(current, door_in, door_out, revisit))
        current, door_in, revisit = next_room, door_out, False
    routes.append(router.route(current, door_in, door_in if router.dead_end(current) else None, revisit))

    return TraversalPlan(entry_room, model.entry_door, tuple(order), tuple(routes))


def draw_overlay(plan: BinaryImage, model: SemanticModel, traversal: TraversalPlan) -> Image.Image:
    """The plan with routes, turn points marked 'T' and doors numbered in traversal order."""
    image = to_pil(plan).convert('RGB')
    draw = ImageDraw.Draw(image)
    for route in traversal.routes:
        points = [tuple(point) for point in route.outbound]
        if len(points) > 1:
            draw.line(points, fill=(220, 40, 40), width=2)
        for x, y in points[1:-1]:
            draw.text((x + 2, y - 10), 'T', fill=(220, 40, 40))
    for number, door_id in enumerate(traversal.door_sequence, 1):
        x, y = model.door(door_id).centroid
        draw.text((x + 3, y + 3), str(number), fill=(30, 60, 220))
    return image


def save_overlay(plan: BinaryImage, model: SemanticModel, traversal: TraversalPlan, path):
    draw_overlay(plan, model, traversal).save(str(path), format='PNG')
