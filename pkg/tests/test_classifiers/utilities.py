import numpy as np


def toy_rooms(per_class=20, classes=(1, 2, 3, 4, 5), seed=0):
    """Separable LOFD rows: rooms of class c hold five decors of class 2c."""
    rng = np.random.default_rng(seed)
    features, labels = [], []
    for code in classes:
        for _ in range(per_class):
            row = np.zeros(24)
            row[2 * code - 1] = 5 + rng.integers(0, 3)
            row[12 + 2 * code - 1] = rng.uniform(0.5, 1)
            # a little clutter shared by all rooms
            row[0] = rng.integers(0, 2)
            features.append(row)
            labels.append(code)
    return np.array(features), np.array(labels)
