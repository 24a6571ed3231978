import pytest
from pytest import approx

from errors import InputError
from stats import accuracy, accuracy_interval, class_counts, confusion_matrix


def test_accuracy():
    assert accuracy([1, 2, 3, 4], [1, 2, 3, 5]) == 0.75
    with pytest.raises(InputError):
        accuracy([1, 2], [1])
    with pytest.raises(InputError):
        accuracy([], [])


def test_accuracy_interval():
    low, high = accuracy_interval([1] * 10, [1] * 8 + [2] * 2)
    assert low < 0.8 < high
    # Wilson interval for 8 of 10
    assert (low, high) == approx((0.4902, 0.9433), abs=1e-4)

    low, high = accuracy_interval([1] * 10, [1] * 10)
    assert high == approx(1.0)
    assert low < 1.0


def test_confusion_matrix():
    matrix = confusion_matrix([1, 1, 2, 5], [1, 2, 2, 1])
    assert list(matrix.index) == [1, 2, 3, 4, 5]
    assert list(matrix.columns) == [1, 2, 3, 4, 5]
    assert matrix.loc[1, 1] == 1
    assert matrix.loc[1, 2] == 1
    assert matrix.loc[5, 1] == 1
    assert matrix.loc[3].sum() == 0
    assert matrix.values.sum() == 4


def test_class_counts():
    counts = class_counts([1, 1, 4])
    assert counts.tolist() == [2, 0, 0, 1, 0]
