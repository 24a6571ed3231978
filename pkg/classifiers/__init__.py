"""Room classifiers working on LOFD features.

Every subclass of :class:`RoomClassifier` with a `name` registers
itself in `RoomClassifier.members`; the `classifier` setting selects
one of them by that name.
"""
from typing import Sequence

import numpy as np

from .classifier import RoomClassifier, DEFAULT_CLASSES, create_classifier, save_model, load_model
from .perceptron import Perceptron
from .svm import OneVsOneSVM


def train(
    features, labels, kind: str = 'linear-svm-ovo', seed: int = 1, epochs: int = 1000,
    learning_rate: float = 1.0, regularization: float = 0.001,
    classes: Sequence[int] = DEFAULT_CLASSES, validation_fraction: float = 0.0
) -> RoomClassifier:
    model = create_classifier(
        kind, classes=classes, seed=seed, epochs=epochs, learning_rate=learning_rate,
        regularization=regularization, validation_fraction=validation_fraction
    )
    return model.fit(features, labels)


def predict(model: RoomClassifier, features) -> np.ndarray:
    return model.predict(features)
