from pytest import approx

from commands import Synth
from config import Config
from decor import default_library, load_library


def test_synth(tmpdir):
    out = tmpdir.join('corpus')
    result = Synth(3, seed=2, out=str(out)).run(Config())

    assert sum(row.rooms for row in result.scored_list) == 12
    assert sum(row.train for row in result.scored_list) == 8
    assert all(row.train + row.test == row.rooms for row in result.scored_list)
    assert result.description == 'Generated 3 plan(s) with 12 rooms, seed 2'

    assert result.files == [
        str(out.join(name)) for name in ['plans', 'features.csv', 'split.txt', 'library.txt', 'config.txt']
    ]
    assert len(out.join('plans').listdir()) == 6


def test_corpus_records_library_and_configuration(tmpdir):
    out = tmpdir.join('corpus')
    config = Config().override(merge_gap=2)
    Synth(1, seed=3, out=str(out)).run(config)

    assert Config.from_file(str(out.join('config.txt'))) == config.override(seed=3)

    library = load_library(str(out.join('library.txt')))
    expected = default_library()
    assert sorted(library.signatures) == sorted(expected.signatures)
    for decor_class, signature in expected.signatures.items():
        assert library.signatures[decor_class] == approx(signature, abs=1e-6)


def test_seed_from_configuration(tmpdir):
    first = Synth(1, out=str(tmpdir.join('a'))).run(Config().override(seed=5))
    assert first.description.endswith('seed 5')
    second = Synth(1, out=str(tmpdir.join('b'))).run(Config().override(seed=5))
    assert tmpdir.join('a', 'features.csv').read() == tmpdir.join('b', 'features.csv').read()
    assert [vars(row) for row in first.scored_list] == [vars(row) for row in second.scored_list]
