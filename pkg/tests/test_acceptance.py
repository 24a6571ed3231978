"""Checks of the whole chain over synthetic corpora of up to 200 plans."""
import numpy as np
import pytest
from pytest import fixture

import stats
import synth
from classifiers import predict, train
from config import Config
from decor import default_library
from grammar import GD_HEADER, NV_HEADER, TURN_BACK, matching_rules
from lofd import FEATURE_COLUMNS
from navigation import build_door_structure, room_obstacles
from pipeline import Resources, describe_plan
from segmentation import DoorTemplate, detect_doors, extract_rooms, extract_walls


pytestmark = pytest.mark.slow

SEED = 11


def feature_table(plans):
    rows = [row for _, truth in plans for row in synth.truth_features(truth)]
    features = np.array([[row[column] for column in FEATURE_COLUMNS] for row in rows])
    labels = np.array([row['label'] for row in rows])
    return features, labels


def fit(features, labels, kind, config=Config()):
    return train(
        features, labels, kind, config.seed, config.epochs, config.learning_rate,
        config.regularization, validation_fraction=config.validation_fraction
    )


@fixture(scope='module')
def corpus():
    return [synth.generate_plan(SEED, index) for index in range(1, 201)]


@fixture(scope='module')
def resources(corpus):
    features, labels = feature_table(corpus)
    return Resources(fit(features, labels, 'linear-svm-ovo'), default_library(), DoorTemplate.default())


@fixture(scope='module')
def descriptions(corpus, resources):
    return [(describe_plan(plan, resources), truth) for plan, truth in corpus[:50]]


@pytest.mark.parametrize('kind', ['linear-svm-ovo', 'mlp'])
def test_classifier_accuracy(corpus, kind):
    features, labels = feature_table(corpus)
    training = np.array(synth.split_rows(len(labels), SEED)) == 'train'

    model = fit(features[training], labels[training], kind)
    accuracy = stats.accuracy(labels[~training], predict(model, features[~training]))
    assert accuracy >= 0.9


def test_segmentation_counts(corpus):
    for plan, truth in corpus[:100]:
        walls = extract_walls(plan)
        doors = detect_doors(plan)
        assert len(doors) == len(truth.doors)
        assert len(extract_rooms(walls, doors)) == len(truth.rooms)


def test_routes_are_collision_free(descriptions):
    for result, truth in descriptions:
        model = result.model
        structure = build_door_structure(model.rooms, model.doors)

        assert {route.room_id for route in result.traversal.routes} == set(model.room_ids)
        for route in result.traversal.routes:
            room = model.room(route.room_id)
            doors = [model.door(door_id).bbox for door_id in structure[room.id]]
            obstacles = room_obstacles(result.plan, room.polygon, doors)
            for a, b in zip(route.waypoints, route.waypoints[1:]):
                assert obstacles.visible(a, b), (room.id, a, b)
            assert route.dead_end == (len(structure[room.id]) == 1)


def test_sentences_follow_the_grammar(descriptions):
    for result, _ in descriptions:
        for line in result.text.splitlines():
            if line and line not in {GD_HEADER, NV_HEADER}:
                assert len(matching_rules(line)) == 1, line


def test_room_count_sentence(descriptions):
    for result, truth in descriptions:
        count = len(truth.rooms)
        assert result.description.gd[0] == f'This floor plan has {count} {"room" if count == 1 else "rooms"}'


def test_turn_back_only_after_dead_ends(descriptions):
    for result, _ in descriptions:
        routes = result.traversal.routes
        assert result.description.nv.count(TURN_BACK) == sum(route.dead_end for route in routes)
