from abc import abstractmethod, ABC
from typing import Iterable

from config import Config
from utils import AbstractRegisteringType, abstract_property


class CommandResult(ABC):
    """Result of a command, displayed as a table.

    The result can include additional information for the end user
    (in `description` field), e.g. a summary of the run.

    The names of properties of the items in the `scored_list` which
    should be used for table creation ought to be enlisted in
    `columns` property.

    Files written by a command should be presented in `files` field
    of the result.
    """

    @abstract_property
    def columns(self) -> Iterable:
        """List with attributes of objects from `scored_list`,

        which will be used for summary table generation as columns.
        """

    def __init__(self, scored_list, files=None, description=''):
        self.scored_list = scored_list
        self.files = files or []
        self.description = description


class Command(metaclass=AbstractRegisteringType):
    """Defines a subcommand of the command line interface & its arguments.

    Simple arguments (like ``seed``) can be simply defined as
    arguments and keyword arguments of `__init__`.

    For example::

        class MyCommand(Command)
            def __init__(self, seed: int=None):
                pass

    For the simple arguments following information will be deduced:
        - type: will be retrieved from type annotations,
        - default: from keyword arguments,
        - help: will be retrieved from docstrings.

    Arguments needing more (like several values) are defined in the
    class body using :class:`~declarative_parser.Argument`.

    Keyword arguments left as None do not override the configuration;
    see :meth:`Config.override`.
    """

    @abstract_property
    def help(self) -> str:
        """Return string providing help for this command.

        The help message shows up when `./sugaman.py command_name -h`.
        Use help = __doc__
        """

    @abstract_property
    def name(self) -> str:
        """Return command name used in command line interface.

        The name should not include any spaces."""

    @abstractmethod
    def run(self, config: Config) -> CommandResult:
        """Performs the command and returns results object."""
