"""Polygons, plan boundary and compass directions.

Coordinates are image pixels ``(x, y)``; for compass directions the
y axis is flipped so that North points to the top of the image.
"""
import heapq
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.spatial import Delaunay

from errors import DegenerateInputError, DegeneratePolygonError, InputError, UndefinedDirectionError
from raster import Box, Point


Polygon = List[Point]


class Direction8(Enum):
    N = 'North'
    NE = 'North East'
    E = 'East'
    SE = 'South East'
    S = 'South'
    SW = 'South West'
    W = 'West'
    NW = 'North West'

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_code(cls, code: str) -> 'Direction8':
        try:
            return cls[code]
        except KeyError:
            raise InputError(f'Unknown direction {code!r}, expected one of {", ".join(cls.__members__)}')


# directions counter-clockwise starting from East, 45 degrees apart
COMPASS = [Direction8.E, Direction8.NE, Direction8.N, Direction8.NW,
           Direction8.W, Direction8.SW, Direction8.S, Direction8.SE]


@dataclass(frozen=True)
class BinScheme:
    """Eight half-open angle intervals ``[start, start + width)`` covering the circle."""

    kind: str
    intervals: Tuple[Tuple[Direction8, float, float], ...]

    def __post_init__(self):
        total = sum(width for _, _, width in self.intervals)
        if len(self.intervals) != 8 or abs(total - 360) > 1e-9:
            raise InputError(f'Bins of {self.kind} scheme do not cover the circle')

    @classmethod
    def uniform(cls) -> 'BinScheme':
        return cls('uniform', tuple(
            (direction, i * 45 - 22.5, 45.0)
            for i, direction in enumerate(COMPASS)
        ))

    @classmethod
    def nonuniform(cls, cardinal_span: float = 60.0) -> 'BinScheme':
        """Cardinal sectors `cardinal_span` wide, diagonals fill the rest."""
        diagonal_span = 90 - cardinal_span
        intervals = []
        for i, direction in enumerate(COMPASS):
            if i % 2 == 0:
                intervals.append((direction, i * 45 - cardinal_span / 2, cardinal_span))
            else:
                intervals.append((direction, i * 45 - diagonal_span / 2, diagonal_span))
        return cls('nonuniform', tuple(intervals))

    @classmethod
    def named(cls, kind: str, cardinal_span: float = 60.0) -> 'BinScheme':
        if kind == 'uniform':
            return cls.uniform()
        if kind == 'nonuniform':
            return cls.nonuniform(cardinal_span)
        raise InputError(f'Unknown binning scheme {kind!r}')

    def direction(self, theta: float) -> Direction8:
        """Bin an angle given in degrees (0 = East, 90 = North)."""
        for direction, start, width in self.intervals:
            if (theta - start) % 360 < width:
                return direction
        # (theta - start) % 360 may round up to 360 for tiny negative offsets
        return self.intervals[0][0]


def angle(origin: Point, target: Point) -> float:
    """Angle of `target` seen from `origin`, degrees in [0, 360), North up."""
    dx = target[0] - origin[0]
    dy = origin[1] - target[1]
    if dx == 0 and dy == 0:
        raise UndefinedDirectionError(f'Direction from {origin} to itself is undefined')
    return math.degrees(math.atan2(dy, dx)) % 360


def bin_direction(origin: Point, target: Point, scheme: BinScheme) -> Direction8:
    return scheme.direction(angle(origin, target))


def signed_area(polygon: Sequence[Point]) -> float:
    points = np.asarray(polygon, dtype=float)
    x, y = points[:, 0], points[:, 1]
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)) / 2


def polygon_centroid(polygon: Sequence[Point]) -> Tuple[float, float, float]:
    """Centroid (x_c, y_c) and signed area A of a simple polygon.

    With a_i = x_i * y_{i+1} - x_{i+1} * y_i (indices cyclic):
    A = sum(a_i) / 2, x_c = sum(a_i * (x_i + x_{i+1})) / 6A and
    y_c likewise.
    """
    if len(polygon) < 3:
        raise DegeneratePolygonError(f'A polygon needs at least 3 vertices, got {len(polygon)}')
    points = np.asarray(polygon, dtype=float)
    x, y = points[:, 0], points[:, 1]
    next_x, next_y = np.roll(x, -1), np.roll(y, -1)
    cross = x * next_y - next_x * y
    area = cross.sum() / 2
    if abs(area) < 1e-9:
        raise DegeneratePolygonError(f'Polygon {list(polygon)[:4]}... has zero area')
    x_c = np.sum(cross * (x + next_x)) / (6 * area)
    y_c = np.sum(cross * (y + next_y)) / (6 * area)
    return float(x_c), float(y_c), float(area)


def orient_ccw(polygon: Sequence[Point]) -> Polygon:
    """Order vertices so that the signed area is positive."""
    polygon = list(polygon)
    if signed_area(polygon) < 0:
        polygon = polygon[:1] + polygon[:0:-1]
    return polygon


def on_segment(point: Point, start: Point, end: Point, tolerance=1e-9) -> bool:
    (px, py), (ax, ay), (bx, by) = point, start, end
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if abs(cross) > tolerance * max(1.0, math.hypot(bx - ax, by - ay)):
        return False
    return min(ax, bx) - tolerance <= px <= max(ax, bx) + tolerance and \
        min(ay, by) - tolerance <= py <= max(ay, by) + tolerance


def edges(polygon: Sequence[Point]):
    return zip(polygon, list(polygon[1:]) + list(polygon[:1]))


def contains_point(polygon: Sequence[Point], point: Point) -> bool:
    """Even-odd test; points on the boundary count as inside."""
    px, py = point
    inside = False
    for start, end in edges(polygon):
        if on_segment(point, start, end):
            return True
        (ax, ay), (bx, by) = start, end
        if (ay > py) != (by > py):
            crossing = ax + (py - ay) * (bx - ax) / (by - ay)
            if px < crossing:
                inside = not inside
    return inside


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    def orientation(p, q, r):
        value = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return (value > 0) - (value < 0)

    o1, o2 = orientation(a, b, c), orientation(a, b, d)
    o3, o4 = orientation(c, d, a), orientation(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b)) or (o2 == 0 and on_segment(d, a, b)) or
        (o3 == 0 and on_segment(a, c, d)) or (o4 == 0 and on_segment(b, c, d))
    )


def box_polygon(box: Box) -> Polygon:
    return box.corners()


def polygon_intersects_box(polygon: Sequence[Point], box: Box) -> bool:
    """Do the polygon and the (closed) box share at least one point?"""
    if any(box.contains(vertex) for vertex in polygon):
        return True
    rectangle = box_polygon(box)
    if any(contains_point(polygon, corner) for corner in rectangle):
        return True
    return any(
        segments_intersect(a, b, c, d)
        for a, b in edges(polygon)
        for c, d in edges(rectangle)
    )


def polygon_contains_box(polygon: Sequence[Point], box: Box) -> bool:
    return all(contains_point(polygon, corner) for corner in box.corners())


def polygon_bounds(polygon: Sequence[Point]) -> Box:
    points = np.asarray(polygon)
    x0, y0 = np.floor(points.min(axis=0)).astype(int)
    x1, y1 = np.ceil(points.max(axis=0)).astype(int)
    return Box.from_xyxy(int(x0), int(y0), int(x1), int(y1))


def _check_points(points: Iterable[Point]) -> np.ndarray:
    points = np.unique(np.asarray(list(points), dtype=float).reshape(-1, 2), axis=0)
    if len(points) < 3:
        raise DegenerateInputError(f'Boundary tracing needs at least 3 distinct points, got {len(points)}')
    if np.linalg.matrix_rank(points - points[0]) < 2:
        raise DegenerateInputError('Boundary tracing needs points which are not all collinear')
    return points


def trace_boundary(points: Iterable[Point], shrink_factor: float = 0.0) -> Polygon:
    """Boundary polygon enveloping all `points`.

    Starts from the convex hull of the Delaunay triangulation of the
    points and keeps removing the longest boundary edge longer than
    ``L_max - shrink_factor * (L_max - L_min)`` (edge lengths of the
    triangulation) as long as its removal keeps the boundary a simple
    polygon; ``shrink_factor=0`` yields the convex hull, larger values
    hug the points more closely.
    """
    if not 0 <= shrink_factor <= 1:
        raise InputError(f'shrink_factor has to be within [0, 1], got {shrink_factor}')
    points = _check_points(points)
    triangulation = Delaunay(points)

    def key(i, j):
        return (i, j) if tuple(points[i]) <= tuple(points[j]) else (j, i)

    def length(edge):
        return float(np.linalg.norm(points[edge[0]] - points[edge[1]]))

    edge_triangles = {}
    for number, simplex in enumerate(triangulation.simplices):
        a, b, c = (int(v) for v in simplex)
        for edge in [key(a, b), key(b, c), key(c, a)]:
            edge_triangles.setdefault(edge, set()).add(number)

    lengths = [length(edge) for edge in edge_triangles]
    threshold = max(lengths) - shrink_factor * (max(lengths) - min(lengths))

    boundary = {edge for edge, triangles in edge_triangles.items() if len(triangles) == 1}
    boundary_vertices = {vertex for edge in boundary for vertex in edge}

    def push(queue, edge):
        edge_length = length(edge)
        if edge_length > threshold:
            heapq.heappush(queue, (-edge_length, tuple(points[edge[0]]), tuple(points[edge[1]]), edge))

    queue = []
    for edge in boundary:
        push(queue, edge)

    while queue:
        *_, edge = heapq.heappop(queue)
        if edge not in boundary or len(edge_triangles[edge]) != 1:
            continue
        triangle = next(iter(edge_triangles[edge]))
        opposite = next(int(v) for v in triangulation.simplices[triangle] if int(v) not in edge)
        if opposite in boundary_vertices:
            # removal would pinch the boundary
            continue
        boundary.discard(edge)
        edge_triangles[edge].discard(triangle)
        boundary_vertices.add(opposite)
        for vertex in edge:
            new_edge = key(vertex, opposite)
            edge_triangles[new_edge].discard(triangle)
            boundary.add(new_edge)
            push(queue, new_edge)

    return orient_ccw([tuple(map(float, points[i])) for i in _walk(boundary, points)])


def _walk(boundary, points) -> List[int]:
    """Order boundary edges into a single cycle of vertex indices."""
    neighbours = {}
    for a, b in boundary:
        neighbours.setdefault(a, []).append(b)
        neighbours.setdefault(b, []).append(a)
    start = min(neighbours, key=lambda vertex: tuple(points[vertex]))
    cycle = [start]
    previous, current = None, start
    while True:
        candidates = sorted(neighbours[current], key=lambda vertex: tuple(points[vertex]))
        following = next(vertex for vertex in candidates if vertex != previous)
        if following == start:
            break
        cycle.append(following)
        previous, current = current, following
    return cycle


def polygon_area(polygon: Sequence[Point]) -> float:
    return abs(signed_area(polygon))
