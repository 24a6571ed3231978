import json
from collections import Counter

import numpy as np
import pandas as pd
import pytest

from errors import InputError
from lofd import FEATURE_COLUMNS
from models import DecorClass, RoomLabel
from synth import (
    DECOR_POLICY, GroundTruth, PlanSpec, generate_corpus, generate_plan, room_count_of, split_rows,
    truth_features
)


def test_room_counts(synthetic_plans):
    assert [len(truth.rooms) for _, truth in synthetic_plans] == [5, 4, 3]
    assert [room_count_of(index) for index in range(1, 7)] == [5, 4, 3, 5, 4, 3]
    with pytest.raises(InputError):
        PlanSpec(seed=1, room_count=6)


def test_generation_is_deterministic(synthetic_plan):
    plan, truth = synthetic_plan
    again, same_truth = generate_plan(1, 1)
    assert again == plan
    assert same_truth.to_dict() == truth.to_dict()

    other, _ = generate_plan(2, 1)
    assert other != plan


def test_layout(synthetic_plans):
    for plan, truth in synthetic_plans:
        assert plan.shape == (truth.size, truth.size)
        labels = [room.label for room in truth.rooms]
        assert len(set(labels)) == len(labels)

        for room in truth.rooms:
            # rooms are free of walls
            assert not truth.walls.crop(room.rect).count()
            for decor in room.decors:
                assert room.rect.contains((decor.bbox.left, decor.bbox.top))
                assert room.rect.contains((decor.bbox.right, decor.bbox.bottom))
            for a in room.decors:
                for b in room.decors:
                    assert a is b or not a.bbox.intersects(b.bbox)

        entries = [door for door in truth.doors if door.entry]
        assert len(entries) == 1
        assert len(entries[0].rooms) == 1
        assert all(len(door.rooms) == 2 for door in truth.doors if not door.entry)


def test_rooms_are_connected(synthetic_plans):
    for _, truth in synthetic_plans:
        neighbors = truth.adjacency()
        reached, stack = {truth.entry_door.rooms[0]}, [truth.entry_door.rooms[0]]
        while stack:
            for other in neighbors[stack.pop()]:
                if other not in reached:
                    reached.add(other)
                    stack.append(other)
        assert reached == {room.id for room in truth.rooms}


def test_decors_follow_policy(synthetic_plans):
    for _, truth in synthetic_plans:
        for room in truth.rooms:
            required, optional = DECOR_POLICY[room.label]
            counts = Counter(decor.cls for decor in room.decors)
            for choice, (low, high) in required.items():
                options = choice if isinstance(choice, tuple) else (choice,)
                assert low <= sum(counts[option] for option in options) <= high
            allowed = set(optional)
            for choice in required:
                allowed.update(choice if isinstance(choice, tuple) else (choice,))
            assert set(counts) <= allowed


def test_ground_truth_json(synthetic_plan):
    _, truth = synthetic_plan
    loaded = GroundTruth.from_dict(json.loads(truth.to_json()))
    assert loaded.to_dict() == truth.to_dict()
    assert loaded.rooms[0].decors == truth.rooms[0].decors

    with pytest.raises(InputError, match='Malformed ground truth'):
        GroundTruth.from_dict({'seed': 1, 'size': 600})


def test_truth_features(synthetic_plan):
    _, truth = synthetic_plan
    rows = truth_features(truth)
    assert [row['room'] for row in rows] == [room.id for room in truth.rooms]
    assert [row['label'] for row in rows] == [room.label.value for room in truth.rooms]
    for row, room in zip(rows, truth.rooms):
        assert row['count_bed'] == sum(decor.cls == DecorClass.BED for decor in room.decors)
        assert max(row[column] for column in FEATURE_COLUMNS[12:]) <= len(room.decors)


def test_split_rows():
    split = split_rows(10, seed=3)
    assert split.count('train') == 7
    assert split == split_rows(10, seed=3)
    assert split_rows(3, seed=1, train_fraction=0.5).count('train') == 2


def test_generate_corpus(tmpdir):
    out = tmpdir.join('corpus')
    features = generate_corpus(3, seed=1, out_dir=str(out))

    assert sorted(path.basename for path in out.join('plans').listdir()) == [
        '0001.json', '0001.png', '0002.json', '0002.png', '0003.json', '0003.png'
    ]
    assert len(features) == 5 + 4 + 3
    assert list(features.columns) == ['plan', 'room'] + FEATURE_COLUMNS + ['label']
    assert set(features['label']) <= {label.value for label in RoomLabel}

    saved = pd.read_csv(str(out.join('features.csv')))
    assert np.allclose(saved[FEATURE_COLUMNS].values, features[FEATURE_COLUMNS].values)

    lines = out.join('split.txt').read().splitlines()
    assert len(lines) == 12
    assert lines[0].split('\t')[0] == '0'
    assert {line.split('\t')[1] for line in lines} == {'train', 'test'}

    truth = GroundTruth.load(str(out.join('plans', '0002.json')))
    assert len(truth.rooms) == 4

    with pytest.raises(InputError):
        generate_corpus(0, seed=1, out_dir=str(out))
