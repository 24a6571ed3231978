"""Decor frequency and distance feature of a room (1 x 24).

For every decor class c the feature holds the number of instances
k_c and the summed Manhattan distance of their centers from the room
center, normalized by the largest single-instance distance M::

    dists[c] = sum(|x_i - x_0| + |y_i - y_0|) / M

With `mean_distance` the sum is divided by k_c * M instead, keeping
every distance within [0, 1] whatever the number of instances.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from models import DecorClass, DecorInstance
from raster import Point


DECOR_CLASSES = list(DecorClass)

FEATURE_COLUMNS = (
    [f'count_{decor_class.code}' for decor_class in DECOR_CLASSES] +
    [f'dist_{decor_class.code}' for decor_class in DECOR_CLASSES]
)

# counts are divided by this before training and prediction
COUNT_SCALE = 10.0


@dataclass(frozen=True)
class LOFDVector:
    counts: Tuple[int, ...]
    dists: Tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.array(list(self.counts) + list(self.dists), dtype=float)


def manhattan(a: Point, b: Point) -> float:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def compute_lofd(room_center: Point, decors: Sequence[DecorInstance], mean_distance: bool = False) -> LOFDVector:
    counts = np.zeros(len(DECOR_CLASSES), dtype=int)
    raw = np.zeros(len(DECOR_CLASSES))
    largest = 0.0
    for decor in decors:
        index = DecorClass(decor.cls).value - 1
        distance = manhattan(room_center, decor.center)
        counts[index] += 1
        raw[index] += distance
        largest = max(largest, distance)

    if largest == 0:
        dists = np.zeros(len(DECOR_CLASSES))
    elif mean_distance:
        dists = np.divide(raw, counts * largest, out=np.zeros_like(raw), where=counts > 0)
    else:
        dists = raw / largest
    return LOFDVector(tuple(counts.tolist()), tuple(dists.tolist()))


def scale_features(features) -> np.ndarray:
    """Bring both halves of LOFD rows to a comparable range."""
    features = np.array(features, dtype=float, ndmin=2)
    features[:, :len(DECOR_CLASSES)] /= COUNT_SCALE
    return features
