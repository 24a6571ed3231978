import numpy as np

from classifiers import OneVsOneSVM, predict, train
from .utilities import toy_rooms


def test_separators():
    model = train(*toy_rooms(per_class=5), kind='linear-svm-ovo', epochs=5)
    assert isinstance(model, OneVsOneSVM)
    assert len(model.pairs) == 10
    assert model.weights.shape == (10, 25)


def test_learns_separable_rooms():
    features, labels = toy_rooms()
    model = train(features, labels, kind='linear-svm-ovo', epochs=100)
    assert np.mean(predict(model, features) == labels) == 1.0

    held_out, truth = toy_rooms(per_class=5, seed=1)
    assert np.mean(predict(model, held_out) == truth) >= 0.9


def test_two_classes():
    features, labels = toy_rooms(classes=(1, 2))
    model = train(features, labels, kind='linear-svm-ovo', classes=(1, 2), epochs=50)
    assert model.pairs == [(1, 2)]
    assert predict(model, features).tolist() == labels.tolist()


def test_reproducible():
    features, labels = toy_rooms()
    first = train(features, labels, seed=7, epochs=20)
    second = train(features, labels, seed=7, epochs=20)
    assert np.array_equal(first.weights, second.weights)

    zero = np.zeros((1, 24))
    assert predict(first, zero).tolist() == predict(first, zero).tolist()


def test_ties_go_to_lowest_code():
    model = OneVsOneSVM()
    # untrained separators score 0, which votes for the first class of every pair
    assert predict(model, np.zeros((2, 24))).tolist() == [1, 1]

    # make every class win exactly two duels
    model.weights[:] = 0
    votes = {1: [2, 3], 2: [3, 4], 3: [4, 5], 4: [5, 1], 5: [1, 2]}
    for index, (first, second) in enumerate(model.pairs):
        model.weights[index, -1] = 1 if second in votes[first] else -1
    assert (model.votes(np.zeros((1, 24))) == 2).all()
    assert predict(model, np.zeros((1, 24))).tolist() == [1]
