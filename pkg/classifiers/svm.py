from itertools import combinations
from typing import Dict

import numpy as np

from errors import ParseError
from .classifier import RoomClassifier


class OneVsOneSVM(RoomClassifier):
    """Linear SVMs, one per pair of classes, voting on the label.

    Each separator minimizes the regularized hinge loss by seeded
    mini-batch stochastic subgradient descent (step 1 / (lambda t),
    followed by projection onto the ball of radius 1 / sqrt(lambda)).
    The bias is learned as the weight of a constant feature.

    Votes are counted per class; ties go to the lowest class code.
    """

    name = 'linear-svm-ovo'
    batch_size = 64

    def __init__(self, classes=(1, 2, 3, 4, 5), seed: int = 1, dims: int = 24,
                 epochs: int = 1000, regularization: float = 0.001, **kwargs):
        super().__init__(classes, seed, dims)
        self.epochs = epochs
        self.regularization = regularization
        self.pairs = list(combinations(self.classes, 2))
        self.weights = np.zeros((len(self.pairs), dims + 1))

    @staticmethod
    def augment(features):
        return np.hstack([features, np.ones((len(features), 1))])

    def train_separator(self, features, targets, rng) -> np.ndarray:
        lambda_ = self.regularization
        weights = np.zeros(features.shape[1])
        radius = 1 / np.sqrt(lambda_)
        step = 0
        for _ in range(self.epochs):
            order = rng.permutation(len(features))
            for start in range(0, len(order), self.batch_size):
                batch = order[start:start + self.batch_size]
                step += 1
                eta = 1 / (lambda_ * step)
                x, y = features[batch], targets[batch]
                violators = y * (x @ weights) < 1
                weights *= 1 - eta * lambda_
                if violators.any():
                    weights += eta / len(batch) * (y[violators] @ x[violators])
                norm = np.linalg.norm(weights)
                if norm > radius:
                    weights *= radius / norm
        return weights

    def fit_scaled(self, features, labels):
        features = self.augment(features)
        rng = np.random.default_rng(self.seed)
        for index, (first, second) in enumerate(self.pairs):
            chosen = (labels == first) | (labels == second)
            targets = np.where(labels[chosen] == first, 1.0, -1.0)
            self.weights[index] = self.train_separator(features[chosen], targets, rng)

    def votes(self, features) -> np.ndarray:
        scores = self.augment(features) @ self.weights.T
        votes = np.zeros((len(features), len(self.classes)), dtype=int)
        for index, (first, second) in enumerate(self.pairs):
            winners = np.where(scores[:, index] >= 0, self.classes.index(first), self.classes.index(second))
            votes[np.arange(len(features)), winners] += 1
        return votes

    def predict_scaled(self, features):
        classes = np.array(self.classes)
        order = np.argsort(classes)
        # argmax picks the first maximum: the lowest code after sorting
        return classes[order][np.argmax(self.votes(features)[:, order], axis=1)]

    def parameters(self) -> Dict[str, np.ndarray]:
        return {'separators': self.weights}

    def set_parameters(self, parameters):
        weights = parameters.get('separators')
        if weights is None or weights.shape != self.weights.shape:
            raise ParseError(f'expected separators of shape {self.weights.shape}')
        self.weights = weights
