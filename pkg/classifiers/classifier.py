from abc import abstractmethod
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Sequence

import numpy as np

from errors import InputError, ParseError, TrainingError
from lofd import scale_features
from models import RoomLabel
from utils import AbstractRegisteringType, abstract_property


DEFAULT_CLASSES = tuple(label.value for label in RoomLabel)


class RoomClassifier(metaclass=AbstractRegisteringType):
    """Maps LOFD rows (N x 24) to room label codes.

    Subclasses define `name` (used in configuration and in model
    files), learn their weights in `fit_scaled` and expose them as
    named arrays via `parameters`, so that every kind can be saved
    and loaded the same way.

    Counts are scaled (see :func:`lofd.scale_features`) identically
    before training and prediction.
    """

    def __init__(self, classes: Sequence[int] = DEFAULT_CLASSES, seed: int = 1, dims: int = 24):
        self.classes = tuple(int(code) for code in classes)
        self.seed = seed
        self.dims = dims

    @abstract_property
    def name(self) -> str:
        """Kind of the classifier, as in the `classifier` setting."""

    @abstractmethod
    def fit_scaled(self, features: np.ndarray, labels: np.ndarray):
        """Learn weights from scaled features."""

    @abstractmethod
    def predict_scaled(self, features: np.ndarray) -> np.ndarray:
        """Label codes of scaled features."""

    @abstractmethod
    def parameters(self) -> Dict[str, np.ndarray]:
        """Named weight arrays, in a stable order."""

    @abstractmethod
    def set_parameters(self, parameters: Dict[str, np.ndarray]):
        """Restore weights returned by `parameters`."""

    def fit(self, features, labels):
        features = scale_features(features)
        labels = np.asarray(labels, dtype=int)
        if len(features) != len(labels):
            raise TrainingError(f'Got {len(features)} feature rows but {len(labels)} labels')
        if features.shape[1] != self.dims:
            raise TrainingError(f'Expected {self.dims} feature columns, got {features.shape[1]}')
        if not np.all(np.isfinite(features)):
            raise TrainingError('Features contain non-finite values')
        unknown = set(labels.tolist()) - set(self.classes)
        if unknown:
            raise TrainingError(f'Unknown label codes: {sorted(unknown)}')
        missing = [code for code in self.classes if code not in set(labels.tolist())]
        if missing:
            names = ', '.join(_class_name(code) for code in missing)
            raise TrainingError(f'No training samples of class: {names}')
        self.fit_scaled(features, labels)
        return self

    def predict(self, features) -> np.ndarray:
        features = scale_features(features)
        if features.shape[1] != self.dims:
            raise InputError(f'Expected {self.dims} feature columns, got {features.shape[1]}')
        return self.predict_scaled(features)


def _class_name(code) -> str:
    try:
        return RoomLabel(code).title
    except ValueError:
        return str(code)


def create_classifier(kind: str, **kwargs) -> RoomClassifier:
    if kind not in RoomClassifier.members:
        raise InputError(
            f'Unknown classifier kind {kind!r}; '
            f'available: {", ".join(sorted(RoomClassifier.members))}'
        )
    return RoomClassifier.members[kind](**kwargs)


def save_model(model: RoomClassifier, path):
    """Plain text: header lines, then each weight array as rows of 9-decimal numbers."""
    lines = [
        f'kind {model.name}',
        f'seed {model.seed}',
        f'dims {model.dims}',
        'classes ' + ' '.join(str(code) for code in model.classes),
    ]
    for name, array in model.parameters().items():
        array = np.atleast_2d(array)
        lines.append(f'array {name} {array.shape[0]} {array.shape[1]}')
        lines.extend(' '.join(f'{value:.9f}' for value in row) for row in array)
    Path(path).write_text('\n'.join(lines) + '\n', encoding='utf-8')


def load_model(path) -> RoomClassifier:
    path = Path(path)
    if not path.is_file():
        raise InputError(f'Model file {path} does not exist')
    lines = path.read_text(encoding='utf-8').splitlines()
    position = 0

    def next_line(expected):
        nonlocal position
        if position >= len(lines):
            raise ParseError(f'unexpected end of file, expected {expected}', str(path))
        position += 1
        return position, lines[position - 1].split()

    header = {}
    for key in ['kind', 'seed', 'dims', 'classes']:
        number, fields = next_line(key)
        if not fields or fields[0] != key or len(fields) < 2:
            raise ParseError(f'expected "{key} ..." header', f'{path}:{number}')
        header[key] = fields[1:]

    try:
        model = create_classifier(
            header['kind'][0],
            seed=int(header['seed'][0]),
            dims=int(header['dims'][0]),
            classes=[int(code) for code in header['classes']]
        )
    except ValueError:
        raise ParseError('malformed model header', str(path))

    parameters = OrderedDict()
    while position < len(lines):
        number, fields = next_line('array')
        if not fields:
            continue
        if fields[0] != 'array' or len(fields) != 4:
            raise ParseError(f'expected "array name rows columns", got {" ".join(fields)!r}', f'{path}:{number}')
        name = fields[1]
        try:
            rows, columns = int(fields[2]), int(fields[3])
        except ValueError:
            raise ParseError(f'invalid shape of {name}', f'{path}:{number}')
        values = []
        for _ in range(rows):
            number, row = next_line(f'row of {name}')
            if len(row) != columns:
                raise ParseError(f'expected {columns} values in {name}', f'{path}:{number}')
            try:
                values.append([float(value) for value in row])
            except ValueError:
                raise ParseError(f'non-numeric value in {name}', f'{path}:{number}')
        parameters[name] = np.array(values).reshape(rows, columns)

    model.set_parameters(parameters)
    return model
