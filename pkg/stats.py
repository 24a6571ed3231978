from typing import Sequence, Tuple

import numpy as np
import pandas as pd
from statsmodels.stats.proportion import proportion_confint

from classifiers import DEFAULT_CLASSES
from errors import InputError


def accuracy(true_labels, predicted_labels) -> float:
    true_labels = np.asarray(true_labels)
    predicted_labels = np.asarray(predicted_labels)
    if len(true_labels) != len(predicted_labels):
        raise InputError(f'Got {len(true_labels)} true labels but {len(predicted_labels)} predictions')
    if not len(true_labels):
        raise InputError('Accuracy of an empty set of predictions is undefined')
    return float(np.mean(true_labels == predicted_labels))


def accuracy_interval(true_labels, predicted_labels, alpha: float = 0.05) -> Tuple[float, float]:
    """Wilson score interval of the accuracy, at 1 - alpha confidence.

    Args:
        true_labels: label codes of the test rows
        predicted_labels: predicted label codes, in the same order
        alpha: significance level, 0.05 gives the 95% interval

    Returns: lower and upper bound of the interval
    """
    correct = int(round(accuracy(true_labels, predicted_labels) * len(true_labels)))
    low, high = proportion_confint(correct, len(true_labels), alpha=alpha, method='wilson')
    return float(low), float(high)


def confusion_matrix(true_labels, predicted_labels, classes: Sequence[int] = DEFAULT_CLASSES) -> pd.DataFrame:
    """Counts of (true, predicted) label pairs; rows are true labels.

    Every class gets a row and a column, even when absent from both.
    """
    matrix = pd.crosstab(
        pd.Series(np.asarray(true_labels, dtype=int), name='true'),
        pd.Series(np.asarray(predicted_labels, dtype=int), name='predicted')
    )
    return matrix.reindex(index=list(classes), columns=list(classes), fill_value=0).astype(int)


def class_counts(labels, classes: Sequence[int] = DEFAULT_CLASSES) -> pd.Series:
    counts = pd.Series(np.asarray(labels, dtype=int)).value_counts()
    return counts.reindex(list(classes), fill_value=0).astype(int)
