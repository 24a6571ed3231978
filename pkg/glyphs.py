"""Canonical symbol bitmaps: the door symbol and the twelve decor models.

The same bitmaps are stamped into synthetic plans and used to build
the default signature library, so a symbol drawn by the generator is
classified exactly.

Decor symbols are built from 1 px outlines and bars at most 3 px
thick, with 3 px gaps between their parts: they survive closing with
a 3x3 square intact and vanish under opening with a 4x4 square (the
wall thickness test).
"""
from typing import Dict, List, Tuple

import numpy as np

from models import DecorClass


WALL_THICKNESS = 4
DOOR_WIDTH = 24


def canvas(height, width) -> np.ndarray:
    return np.zeros((height, width), dtype=bool)


def outline(array, top, left, height, width):
    array[top, left:left + width] = True
    array[top + height - 1, left:left + width] = True
    array[top:top + height, left] = True
    array[top:top + height, left + width - 1] = True
    return array


def bar(array, top, left, height, width):
    array[top:top + height, left:left + width] = True
    return array


def door_swing(width=DOOR_WIDTH) -> np.ndarray:
    """Door leaf along the left edge and a quarter arc, hinge in the top-left corner."""
    radius = width - 1
    ys, xs = np.mgrid[0:width, 0:width]
    swing = np.abs(np.hypot(xs, ys) - radius) <= 0.5
    swing[:, 0] = True
    return swing


def door_template(width=DOOR_WIDTH, wall=WALL_THICKNESS) -> np.ndarray:
    """Door symbol in a horizontal wall above it: jambs, opening and swing.

    The first `wall` rows are the wall band (the wall side of the
    symbol); the opening between the jambs is `width` px wide.
    """
    template = canvas(wall + width, width + 2 * wall)
    bar(template, 0, 0, wall, wall)
    bar(template, 0, wall + width, wall, wall)
    template[wall:, wall:wall + width] = door_swing(width)
    return template


def wall_band(template_shape, wall=WALL_THICKNESS) -> np.ndarray:
    """Marker of the wall-side rows of a door template of given shape."""
    marker = np.zeros(template_shape, dtype=bool)
    marker[:wall, :] = True
    return marker


def _bed():
    return outline(outline(canvas(40, 30), 0, 0, 40, 30), 4, 5, 6, 20)


def _sofa():
    return outline(bar(canvas(20, 36), 0, 0, 3, 36), 6, 0, 14, 36)


def _large_sofa():
    glyph = bar(canvas(20, 54), 0, 0, 3, 48)
    outline(glyph, 6, 0, 14, 48)
    return bar(glyph, 6, 51, 14, 3)


def _table():
    return outline(canvas(24, 24), 0, 0, 24, 24)


def _chair():
    return outline(bar(canvas(17, 12), 0, 0, 3, 12), 6, 0, 11, 12)


def _sink():
    glyph = outline(canvas(20, 20), 0, 0, 20, 20)
    outline(glyph, 4, 4, 7, 12)
    return bar(glyph, 14, 9, 2, 2)


def _twin_sink():
    glyph = outline(canvas(16, 40), 0, 0, 16, 40)
    outline(glyph, 4, 4, 8, 14)
    return outline(glyph, 4, 22, 8, 14)


def _large_sink():
    return outline(outline(canvas(20, 40), 0, 0, 20, 40), 4, 4, 12, 26)


def _tub():
    return outline(outline(canvas(48, 24), 0, 0, 48, 24), 4, 4, 40, 16)


def _stove():
    glyph = outline(canvas(24, 24), 0, 0, 24, 24)
    for top, left in [(4, 4), (4, 15), (15, 4), (15, 15)]:
        outline(glyph, top, left, 5, 5)
    return glyph


def _wardrobe():
    return bar(bar(canvas(9, 40), 0, 0, 3, 40), 6, 0, 3, 40)


def _toilet():
    glyph = bar(canvas(24, 16), 0, 0, 3, 16)
    outline(glyph, 6, 1, 18, 14)
    return outline(glyph, 10, 5, 10, 6)


DECOR_GLYPHS = {
    DecorClass.BED: _bed,
    DecorClass.SOFA: _sofa,
    DecorClass.LARGE_SOFA: _large_sofa,
    DecorClass.TABLE: _table,
    DecorClass.CHAIR: _chair,
    DecorClass.SINK: _sink,
    DecorClass.TWIN_SINK: _twin_sink,
    DecorClass.LARGE_SINK: _large_sink,
    DecorClass.TUB: _tub,
    DecorClass.STOVE: _stove,
    DecorClass.WARDROBE: _wardrobe,
    DecorClass.TOILET: _toilet,
}


def decor_glyph(decor_class: DecorClass) -> np.ndarray:
    return DECOR_GLYPHS[DecorClass(decor_class)]()


def orient(array: np.ndarray, rotation: int = 0, mirror: bool = False) -> np.ndarray:
    """Rotate by `rotation` quarter turns (counter-clockwise), mirroring first."""
    if mirror:
        array = np.fliplr(array)
    return np.ascontiguousarray(np.rot90(array, rotation % 4))


ORIENTATIONS: List[Tuple[int, bool]] = [
    (rotation, mirror) for mirror in (False, True) for rotation in range(4)
]


def rescale(array: np.ndarray, factor: float) -> np.ndarray:
    """Nearest-neighbour resampling."""
    height, width = array.shape
    new_height = max(1, int(round(height * factor)))
    new_width = max(1, int(round(width * factor)))
    rows = np.minimum((np.arange(new_height) / factor).astype(int), height - 1)
    columns = np.minimum((np.arange(new_width) / factor).astype(int), width - 1)
    return array[np.ix_(rows, columns)]


def variants(array: np.ndarray) -> Dict[Tuple[int, bool], np.ndarray]:
    """All distinct orientations (quarter turns and mirror) of a bitmap."""
    found = {}
    for rotation, mirror in ORIENTATIONS:
        oriented = orient(array, rotation, mirror)
        if not any(o.shape == oriented.shape and np.array_equal(o, oriented) for o in found.values()):
            found[(rotation, mirror)] = oriented
    return found
