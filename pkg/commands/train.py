import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

import stats
from classifiers import DEFAULT_CLASSES, predict, save_model, train
from config import Config
from errors import InputError, ParseError
from lofd import FEATURE_COLUMNS
from models import RoomLabel
from synth import split_rows
from .command import Command, CommandResult


class TrainResult(CommandResult):

    columns = ['label', 'train', 'test'] + [f'as_{label.name.lower()}' for label in RoomLabel]


@dataclass
class ClassRow:
    """Counts of one true class; `as_<class>` columns hold its confusion matrix row."""

    label: str
    train: int
    test: int
    as_bedroom: int = 0
    as_bathroom: int = 0
    as_entry: int = 0
    as_kitchen: int = 0
    as_hall: int = 0


def read_features(path):
    """Feature matrix and labels of features.csv; rows of unknown labels are skipped."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f'Feature table {path} does not exist')
    try:
        table = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as error:
        raise ParseError(str(error), str(path))
    missing = [column for column in FEATURE_COLUMNS + ['label'] if column not in table.columns]
    if missing:
        raise ParseError(f'missing columns: {", ".join(missing)}', str(path))
    try:
        features = table[FEATURE_COLUMNS].to_numpy(dtype=float)
        labels = table['label'].to_numpy(dtype=float)
    except ValueError as error:
        raise ParseError(f'non-numeric value ({error})', str(path))
    if not np.all(np.isfinite(features)) or not np.all(np.isfinite(labels)):
        raise ParseError('empty or non-finite values', str(path))
    known = np.isin(labels, DEFAULT_CLASSES)
    if not known.all():
        warnings.warn(f'Skipping {int((~known).sum())} rows of {path} with unknown labels')
    return features, labels.astype(int), known


def read_split(path, count: int):
    """Train/test assignment of `count` rows, from lines "<row>\\t<train|test>"."""
    path = Path(path)
    assignment = {}
    for number, line in enumerate(path.read_text(encoding='utf-8').splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 2 or fields[1] not in {'train', 'test'} or not fields[0].isdigit():
            raise ParseError(f'expected "row train|test", got {line!r}', f'{path}:{number}')
        assignment[int(fields[0])] = fields[1]
    if sorted(assignment) != list(range(count)):
        raise ParseError(f'split does not cover rows 0-{count - 1} of the feature table', str(path))
    return np.array([assignment[row] == 'train' for row in range(count)])


class Train(Command):
    """Train a room classifier on a corpus of LOFD features.

    The corpus directory holds features.csv (as written by the synth
    command) and, optionally, split.txt assigning rows to the train
    and test part; without it a seeded split is drawn.
    """

    help = __doc__

    name = 'train'

    def __init__(self, corpus, model: str = None, kind: str = None, seed: int = None, epochs: int = None):
        """

        Args:
            corpus: directory with features.csv and split.txt
            model: where to write the model; default: <corpus>/model.txt
            kind: classifier kind (linear-svm-ovo or mlp); overrides the configuration
            seed: seed of the training; overrides the configuration
            epochs: number of epochs; overrides the configuration
        """
        self.corpus = Path(corpus)
        self.model = Path(model) if model else self.corpus / 'model.txt'
        self.overrides = dict(classifier=kind, seed=seed, epochs=epochs)

    def run(self, config: Config) -> TrainResult:
        config = config.override(**self.overrides)
        features, labels, known = read_features(self.corpus / 'features.csv')

        split_path = self.corpus / 'split.txt'
        if split_path.is_file():
            training = read_split(split_path, len(labels))
        else:
            training = np.array(split_rows(len(labels), config.seed, config.train_fraction)) == 'train'

        train_rows, test_rows = training & known, ~training & known
        if not test_rows.any():
            raise InputError('The corpus has no test rows')

        model = train(
            features[train_rows], labels[train_rows], config.classifier, config.seed, config.epochs,
            config.learning_rate, config.regularization, validation_fraction=config.validation_fraction
        )
        save_model(model, self.model)

        train_accuracy = stats.accuracy(labels[train_rows], predict(model, features[train_rows]))
        predicted = predict(model, features[test_rows])
        test_accuracy = stats.accuracy(labels[test_rows], predicted)
        low, high = stats.accuracy_interval(labels[test_rows], predicted)
        confusion = stats.confusion_matrix(labels[test_rows], predicted)
        train_counts = stats.class_counts(labels[train_rows])
        test_counts = stats.class_counts(labels[test_rows])

        rows = [
            ClassRow(
                label.title, int(train_counts[label.value]), int(test_counts[label.value]),
                *(int(confusion.loc[label.value, other.value]) for other in RoomLabel)
            )
            for label in RoomLabel
        ]

        lines = [
            f'Classifier: {model.name}',
            f'Train accuracy: {train_accuracy:.4f}',
            f'Test accuracy: {test_accuracy:.4f} (95% CI {low:.4f}-{high:.4f})',
        ]
        if hasattr(model, 'pairs'):
            lines.append(f'{len(model.pairs)} separators trained')
        if getattr(model, 'best_epoch', None) is not None:
            lines.append(f'Best validation performance at epoch {model.best_epoch}')

        result = TrainResult(rows, files=[str(self.model)], description='\n'.join(lines))
        result.test_accuracy = test_accuracy
        result.confusion = confusion
        return result
