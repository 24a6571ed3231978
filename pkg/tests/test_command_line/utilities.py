from argparse import Namespace
from contextlib import contextmanager, redirect_stderr
from io import StringIO

import pytest

from command_line import CLI


def parse(command_line):
    """Parse a command line given as a string (split on spaces) or a list.

    Returns:
        Namespace with the constructed `command` and loaded `config`
    """
    if not command_line:
        command_line = []
    elif isinstance(command_line, str):
        command_line = command_line.split(' ')
    return CLI().parse_args(command_line)


@contextmanager
def parsing_output(capsys, contains=None, does_not_contain=None):
    """Expect the parser to print (help or usage) and exit."""
    text = Namespace()
    capsys.readouterr()
    with pytest.raises(SystemExit):
        yield text
    text.std, text.err = capsys.readouterr()
    if contains and contains not in text.std:
        raise AssertionError(f'{contains!r} not in {text.std!r}')
    if does_not_contain and does_not_contain in text.std:
        raise AssertionError(f'{does_not_contain!r} in {text.std!r}')


class UsageError(Exception):
    pass


@contextmanager
def parsing_error(match=None):
    """Expect a usage error (exit code 2); `match` is searched in the message."""
    stderr = StringIO()
    with redirect_stderr(stderr), pytest.raises(UsageError, match=match):
        try:
            yield
        except SystemExit as exit_exception:
            if exit_exception.code == 2:
                raise UsageError(stderr.getvalue())
            raise
