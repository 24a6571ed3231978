"""Subcommands of the command line interface.

Every subclass of :class:`Command` with a `name` registers itself in
`Command.members` and becomes available as a subcommand.
"""
from .command import Command, CommandResult
from .describe import Describe
from .evaluate import Evaluate
from .synthesize import Synth
from .train import Train

__all__ = [
    'Command',
    'CommandResult',
    'Describe',
    'Evaluate',
    'Synth',
    'Train',
]
