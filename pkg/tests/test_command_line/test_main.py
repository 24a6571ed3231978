from pathlib import Path

from commands import Command, Describe, Evaluate, Synth, Train
from config import Config

from .utilities import parsing_error
from .utilities import parsing_output
from .utilities import parse


def test_describe_arguments():
    opts = parse('describe first.png second.png --model model.txt --out descriptions')
    command = opts.command
    assert isinstance(command, Describe)
    assert command.images == ['first.png', 'second.png']
    assert command.model == 'model.txt'
    assert command.out == Path('descriptions')
    assert command.overlay is None
    assert command.processes is None


def test_train_arguments():
    opts = parse('train corpus --kind mlp --epochs 20')
    command = opts.command
    assert isinstance(command, Train)
    assert command.model == Path('corpus') / 'model.txt'
    assert command.overrides == {'classifier': 'mlp', 'seed': None, 'epochs': 20}


def test_eval_and_synth_arguments():
    command = parse('eval generated references --out scores.tsv').command
    assert isinstance(command, Evaluate)
    assert (command.candidates, command.references, command.out) == (
        Path('generated'), Path('references'), 'scores.tsv'
    )

    command = parse('synth 12 --seed 3').command
    assert isinstance(command, Synth)
    assert command.n == 12
    assert command.overrides == {'seed': 3, 'processes': None}


def test_configuration(tmpdir, monkeypatch):
    monkeypatch.delenv('SUGAMAN_CONFIG', raising=False)
    assert parse('synth 1').config == Config()

    path = tmpdir.join('sugaman.cfg')
    path.write('seed = 9\nclassifier = mlp\n')
    config = parse(f'--config {path} synth 1').config
    assert config.seed == 9
    assert config.classifier == 'mlp'

    monkeypatch.setenv('SUGAMAN_CONFIG', str(path))
    assert parse('synth 1').config.seed == 9


def test_invalid_arguments():
    with parsing_error(match='invalid choice'):
        parse('summarize plan.png')

    with parsing_error(match='unrecognized arguments: --modle'):
        parse('describe plan.png --modle model.txt')

    with parsing_error(match='invalid int value'):
        parse('synth many')


def test_general_help(capsys):

    with parsing_output(capsys) as text:
        parse('--help')

    for command in Command.members:
        assert command in text.std


def test_shows_usage_when_no_args(capsys):

    # if there are no arguments provided, the parser should
    # show the usage summary (and do not raise any errors)
    with parsing_output(capsys) as text:
        parse(None)

    assert 'usage' in text.err


def test_command_help(capsys):
    for command_line in ['train --help', '-h train']:
        with parsing_output(capsys, contains='Train a room classifier'):
            parse(command_line)

    with parsing_output(capsys, contains='classifier kind', does_not_contain='PNG images of floor plans'):
        parse('train -h')
