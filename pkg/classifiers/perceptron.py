from typing import Dict, Tuple

import numpy as np

from errors import ParseError
from .classifier import RoomClassifier


def sigmoid(x):
    return 1 / (1 + np.exp(-x))


def softmax(x):
    shifted = np.exp(x - x.max(axis=1, keepdims=True))
    return shifted / shifted.sum(axis=1, keepdims=True)


class Perceptron(RoomClassifier):
    """Multi-layer perceptron: 24 inputs, one logistic hidden layer, softmax output.

    Trained with full-batch gradient descent on the cross-entropy loss
    with an L2 penalty on the weights (not on the biases). When a
    validation fraction is given, that part of the training rows is
    held out and the weights of the epoch with the lowest validation
    loss are kept (`best_epoch`).
    """

    name = 'mlp'

    def __init__(self, classes=(1, 2, 3, 4, 5), seed: int = 1, dims: int = 24,
                 epochs: int = 1000, learning_rate: float = 1.0, regularization: float = 0.001,
                 validation_fraction: float = 0.0, hidden: int = 10, **kwargs):
        super().__init__(classes, seed, dims)
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.regularization = regularization
        self.validation_fraction = validation_fraction
        self.hidden = hidden
        self.best_epoch = None
        self.initialize(np.random.default_rng(seed))

    def initialize(self, rng):
        outputs = len(self.classes)
        self.w1 = rng.normal(0, 1 / np.sqrt(self.dims), (self.dims, self.hidden))
        self.b1 = np.zeros(self.hidden)
        self.w2 = rng.normal(0, 1 / np.sqrt(self.hidden), (self.hidden, outputs))
        self.b2 = np.zeros(outputs)

    def forward(self, features) -> Tuple[np.ndarray, np.ndarray]:
        hidden = sigmoid(features @ self.w1 + self.b1)
        return hidden, softmax(hidden @ self.w2 + self.b2)

    def one_hot(self, labels) -> np.ndarray:
        indices = np.array([self.classes.index(label) for label in labels])
        return np.eye(len(self.classes))[indices]

    def loss_and_gradient(self, features, labels) -> Tuple[float, Dict[str, np.ndarray]]:
        """Mean cross-entropy plus L2 penalty, and its gradient for each weight array."""
        targets = self.one_hot(labels)
        n = len(features)
        hidden, probabilities = self.forward(features)
        lambda_ = self.regularization

        loss = -np.sum(targets * np.log(np.clip(probabilities, 1e-300, None))) / n
        loss += lambda_ / 2 * (np.sum(self.w1 ** 2) + np.sum(self.w2 ** 2))

        output_error = (probabilities - targets) / n
        hidden_error = (output_error @ self.w2.T) * hidden * (1 - hidden)
        gradient = {
            'w1': features.T @ hidden_error + lambda_ * self.w1,
            'b1': hidden_error.sum(axis=0),
            'w2': hidden.T @ output_error + lambda_ * self.w2,
            'b2': output_error.sum(axis=0),
        }
        return float(loss), gradient

    def fit_scaled(self, features, labels):
        rng = np.random.default_rng(self.seed)
        self.initialize(rng)

        order = rng.permutation(len(features))
        held_out = int(len(features) * self.validation_fraction)
        validation, training = order[:held_out], order[held_out:]

        best_loss, best = np.inf, None
        for epoch in range(1, self.epochs + 1):
            _, gradient = self.loss_and_gradient(features[training], labels[training])
            for name, value in gradient.items():
                setattr(self, name, getattr(self, name) - self.learning_rate * value)
            if held_out:
                loss, _ = self.loss_and_gradient(features[validation], labels[validation])
                if loss < best_loss:
                    best_loss, best = loss, (epoch, self.parameters())

        if best:
            self.best_epoch, parameters = best
            self.set_parameters(parameters)
        else:
            self.best_epoch = self.epochs

    def predict_scaled(self, features):
        _, probabilities = self.forward(features)
        # equal probabilities resolve to the first (lowest) class
        return np.array(self.classes)[np.argmax(probabilities, axis=1)]

    def parameters(self) -> Dict[str, np.ndarray]:
        return {
            'w1': self.w1.copy(),
            'b1': self.b1.copy(),
            'w2': self.w2.copy(),
            'b2': self.b2.copy(),
        }

    def set_parameters(self, parameters):
        for name, current in self.parameters().items():
            value = parameters.get(name)
            if value is None or value.size != current.size:
                raise ParseError(f'expected {name} with {current.size} values')
            setattr(self, name, np.reshape(value, current.shape))
