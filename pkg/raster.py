"""Binary raster kernel shared by all pipeline stages.

Pixels outside of an image always read as background; the foreground
(``True``) is ink: walls, door glyphs and decor symbols.  Points are
``(x, y)`` tuples with ``x`` growing rightwards and ``y`` downwards.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

import numpy as np
from PIL import Image
from scipy import ndimage

from errors import DegenerateInputError, InputError


Point = Tuple[float, float]


@dataclass(frozen=True)
class Box:
    """Axis-aligned pixel rectangle; all four bounds are inclusive."""

    top: int
    left: int
    bottom: int
    right: int

    @property
    def width(self):
        return self.right - self.left + 1

    @property
    def height(self):
        return self.bottom - self.top + 1

    @property
    def area(self):
        return self.width * self.height

    @property
    def center(self) -> Point:
        return (self.left + self.right) / 2, (self.top + self.bottom) / 2

    @property
    def slices(self):
        return slice(self.top, self.bottom + 1), slice(self.left, self.right + 1)

    def corners(self) -> List[Point]:
        """Top-left, top-right, bottom-right and bottom-left corner pixels."""
        return [
            (self.left, self.top), (self.right, self.top),
            (self.right, self.bottom), (self.left, self.bottom)
        ]

    def contains(self, point: Point) -> bool:
        x, y = point
        return self.left <= x <= self.right and self.top <= y <= self.bottom

    def dilate(self, margin: int) -> 'Box':
        return Box(self.top - margin, self.left - margin, self.bottom + margin, self.right + margin)

    def clip(self, height, width) -> 'Box':
        return Box(max(self.top, 0), max(self.left, 0), min(self.bottom, height - 1), min(self.right, width - 1))

    def gap(self, other: 'Box') -> int:
        """Number of background pixels separating the boxes (0 if they touch or overlap)."""
        dx = max(other.left - self.right - 1, self.left - other.right - 1, 0)
        dy = max(other.top - self.bottom - 1, self.top - other.bottom - 1, 0)
        return max(dx, dy)

    def intersects(self, other: 'Box') -> bool:
        return not (
            other.left > self.right or self.left > other.right or
            other.top > self.bottom or self.top > other.bottom
        )

    def union(self, other: 'Box') -> 'Box':
        return Box(
            min(self.top, other.top), min(self.left, other.left),
            max(self.bottom, other.bottom), max(self.right, other.right)
        )

    def as_xyxy(self):
        return self.left, self.top, self.right, self.bottom

    @classmethod
    def from_xyxy(cls, x0, y0, x1, y1):
        return cls(top=y0, left=x0, bottom=y1, right=x1)

    @classmethod
    def from_slices(cls, slices):
        rows, columns = slices
        return cls(rows.start, columns.start, rows.stop - 1, columns.stop - 1)


class BinaryImage:
    """Immutable row-major occupancy raster (``True`` = ink)."""

    __slots__ = ('data',)

    def __init__(self, data):
        data = np.array(data, dtype=bool)
        if data.ndim != 2 or data.size == 0:
            raise DegenerateInputError(f'A binary image has to be a non-empty 2-D raster, got shape {data.shape}')
        data.setflags(write=False)
        object.__setattr__(self, 'data', data)

    def __setattr__(self, key, value):
        raise AttributeError('BinaryImage is immutable')

    def __reduce__(self):
        return BinaryImage, (np.array(self.data),)

    @classmethod
    def blank(cls, width, height):
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def width(self):
        return self.data.shape[1]

    @property
    def height(self):
        return self.data.shape[0]

    @property
    def shape(self):
        return self.data.shape

    def count(self) -> int:
        return int(self.data.sum())

    def crop(self, box: Box) -> 'BinaryImage':
        return BinaryImage(self.data[box.slices])

    def complement(self):
        return BinaryImage(~self.data)

    def __and__(self, other):
        return BinaryImage(self.data & other.data)

    def __or__(self, other):
        return BinaryImage(self.data | other.data)

    def __sub__(self, other):
        return BinaryImage(self.data & ~other.data)

    def __eq__(self, other):
        return isinstance(other, BinaryImage) and np.array_equal(self.data, other.data)

    __hash__ = None

    def __repr__(self):
        return f'<BinaryImage {self.width}x{self.height}, {self.count()} ink pixels>'


@dataclass(frozen=True, eq=False)
class LabelImage:
    """Connected component labels: 0 is background, components are 1..count."""

    labels: np.ndarray
    count: int

    @property
    def width(self):
        return self.labels.shape[1]

    @property
    def height(self):
        return self.labels.shape[0]

    def areas(self) -> np.ndarray:
        """Pixel count of every component, indexed by label - 1."""
        return np.bincount(self.labels.ravel(), minlength=self.count + 1)[1:]

    def boxes(self) -> List[Box]:
        return [Box.from_slices(slices) for slices in ndimage.find_objects(self.labels, self.count)]

    def mask(self, label) -> BinaryImage:
        return BinaryImage(self.labels == label)


@dataclass(frozen=True)
class StructuringElement:

    radius: int = 1
    shape: str = 'square'

    def __post_init__(self):
        if self.radius < 1:
            raise InputError(f'Structuring element radius has to be at least 1, got {self.radius}')
        if self.shape not in {'square', 'cross'}:
            raise InputError(f'Unknown structuring element shape: {self.shape!r}')

    @property
    def footprint(self) -> np.ndarray:
        size = 2 * self.radius + 1
        if self.shape == 'square':
            return np.ones((size, size), dtype=bool)
        footprint = np.zeros((size, size), dtype=bool)
        footprint[self.radius, :] = True
        footprint[:, self.radius] = True
        return footprint


MORPHOLOGICAL_OPERATIONS = ('erode', 'dilate', 'open', 'close')


def binarize(gray, threshold: int = 128) -> BinaryImage:
    """Ink is dark: a pixel is foreground iff its gray value < `threshold`."""
    gray = np.asarray(gray)
    if gray.size == 0:
        raise DegenerateInputError('Cannot binarize an empty raster')
    return BinaryImage(gray < threshold)


def _erode(data, footprint):
    return ndimage.binary_erosion(data, structure=footprint, border_value=0)


def _dilate(data, footprint):
    return ndimage.binary_dilation(data, structure=footprint, border_value=0)


def morph_array(data: np.ndarray, footprint: np.ndarray, op: str) -> np.ndarray:
    """Morphology of a boolean array with an arbitrary (also even sized) footprint."""
    if op == 'erode':
        return _erode(data, footprint)
    if op == 'dilate':
        return _dilate(data, footprint)
    if op == 'open':
        return _dilate(_erode(data, footprint), footprint)
    if op == 'close':
        # the dilation may reach past the border, keep it for the erosion
        margin = max(footprint.shape)
        padded = np.pad(data, margin)
        closed = _erode(_dilate(padded, footprint), footprint)
        return closed[margin:-margin, margin:-margin]
    raise InputError(f'Unknown morphological operation {op!r}, expected one of {MORPHOLOGICAL_OPERATIONS}')


def morph(img: BinaryImage, se: StructuringElement, op: str) -> BinaryImage:
    return BinaryImage(morph_array(img.data, se.footprint, op))


CONNECTIVITY_STRUCTURES = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


def label_array(data: np.ndarray, connectivity: int = 8) -> Tuple[np.ndarray, int]:
    if connectivity not in CONNECTIVITY_STRUCTURES:
        raise InputError(f'Connectivity has to be 4 or 8, got {connectivity}')
    labels, count = ndimage.label(data, structure=CONNECTIVITY_STRUCTURES[connectivity])
    if count:
        # renumber by the raster position of the first pixel
        flat = labels.ravel()
        found, first_index = np.unique(flat, return_index=True)
        order = found[1:][np.argsort(first_index[1:], kind='stable')]
        mapping = np.zeros(count + 1, dtype=labels.dtype)
        mapping[order] = np.arange(1, count + 1, dtype=labels.dtype)
        labels = mapping[labels]
    return labels, int(count)


def connected_components(img: BinaryImage, connectivity: int = 8) -> LabelImage:
    labels, count = label_array(img.data, connectivity)
    return LabelImage(labels, count)


def merge_boxes(boxes: List[Box], areas: List[int], merge_gap: int):
    """Merge boxes closer than `merge_gap` until no such pair is left."""
    groups = [[box, area] for box, area in zip(boxes, areas)]
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if groups[i][0].gap(groups[j][0]) <= merge_gap:
                    groups[i] = [groups[i][0].union(groups[j][0]), groups[i][1] + groups[j][1]]
                    del groups[j]
                    merged = True
                    break
            if merged:
                break
    return groups


def detect_blobs(img: BinaryImage, min_area: int = 30, merge_gap: int = 3) -> List[Box]:
    """Bounding boxes of ink blobs, nearby strokes joined into one blob.

    Components with less than `min_area` ink pixels are dropped first;
    the boxes of the others separated by at most `merge_gap`
    background pixels are merged. Sorted by (top, left).
    """
    components = connected_components(img, connectivity=8)
    if not components.count:
        return []
    kept = [(box, area) for box, area in zip(components.boxes(), components.areas().tolist()) if area >= min_area]
    groups = merge_boxes([box for box, _ in kept], [area for _, area in kept], merge_gap)
    return sorted((box for box, _ in groups), key=lambda box: (box.top, box.left))


def harris_response(img: BinaryImage, k: float = 0.04) -> np.ndarray:
    smoothed = ndimage.uniform_filter(img.data.astype(float), size=3, mode='constant')
    gradient_y, gradient_x = np.gradient(smoothed)
    window = dict(size=3, mode='constant')
    sxx = ndimage.uniform_filter(gradient_x * gradient_x, **window)
    syy = ndimage.uniform_filter(gradient_y * gradient_y, **window)
    sxy = ndimage.uniform_filter(gradient_x * gradient_y, **window)
    trace = sxx + syy
    return sxx * syy - sxy * sxy - k * trace * trace


def harris_corners(img: BinaryImage, max_n: int = 1000, k: float = 0.04, nms_radius: int = 3) -> List[Tuple[int, int]]:
    """Strongest Harris corners as (x, y), by descending response.

    Local maxima with a positive response are accepted greedily,
    skipping any candidate within `nms_radius` (Chebyshev) of an
    already accepted corner; equal responses are ordered by (y, x).
    """
    if max_n < 1:
        raise InputError(f'max_n has to be at least 1, got {max_n}')
    response = harris_response(img, k)
    peak = response.max()
    if peak <= 0:
        return []
    is_peak = (response == ndimage.maximum_filter(response, size=3, mode='constant', cval=-np.inf))
    ys, xs = np.nonzero(is_peak & (response > peak * 1e-6))
    candidates = sorted(zip(-response[ys, xs], ys.tolist(), xs.tolist()))

    corners = []
    for _, y, x in candidates:
        if all(max(abs(x - cx), abs(y - cy)) > nms_radius for cx, cy in corners):
            corners.append((x, y))
            if len(corners) == max_n:
                break
    return corners


def box_sum(data: np.ndarray, height: int, width: int) -> np.ndarray:
    """Sum of every `height` x `width` window; result[y, x] covers rows y..y+height-1."""
    integral = np.zeros((data.shape[0] + 1, data.shape[1] + 1))
    integral[1:, 1:] = np.cumsum(np.cumsum(data, axis=0), axis=1)
    return (
        integral[height:, width:] - integral[:-height, width:]
        - integral[height:, :-width] + integral[:-height, :-width]
    )


def load_gray(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise InputError(f'Image {path} does not exist')
    try:
        with Image.open(path) as image:
            return np.asarray(image.convert('L'))
    except OSError as error:
        raise InputError(f'Cannot read image {path}: {error}')


def load_png(path, threshold: int = 128) -> BinaryImage:
    return binarize(load_gray(path), threshold)


def to_pil(img: BinaryImage) -> Image.Image:
    return Image.fromarray(np.where(img.data, 0, 255).astype(np.uint8))


def save_png(img: BinaryImage, path):
    to_pil(img).save(path, format='PNG')
