from declarative_parser import Parser, Argument
from declarative_parser.constructor_parser import ConstructorParser

from commands import Command
from config import Config, ENVIRONMENT_VARIABLE


class CLI(Parser):
    """The main parser, the one exposed directly to the user."""

    command_name = Argument(choices=Command.members, name='command', optional=False)

    config = Argument(
        help='Path to a configuration file with "key = value" lines. '
             f'Default: ${ENVIRONMENT_VARIABLE} if set, else built-in defaults.'
    )

    @staticmethod
    def create_command(name):
        # first - take an appropriate command class
        command = Command.members[name]

        # initialize parser for this command
        # (different commands require different arguments)
        command_parser = ConstructorParser(constructor=command)

        return command_parser

    def parse_args(self, args):
        help_args = {'-h', '--help'}

        if help_args.intersection(args):
            args_without_help = [
                arg
                for arg in args
                if arg not in help_args
            ]

            if len(args_without_help) != 0:

                name = args_without_help[0]

                commands = {
                    name: ConstructorParser(constructor=command)
                    for name, command in Command.members.items()
                }

                if name in commands:
                    return commands[name].parse_args(args_without_help[1:] + ['-h'])

        return super().parse_args(args)

    def produce(self, unknown_args):
        options = self.namespace

        command_parser = self.create_command(options.command)

        # parse arguments
        command_options, remaining_unknown_args = command_parser.parse_known_args(unknown_args)

        for argument in unknown_args[:]:
            if argument not in remaining_unknown_args:
                unknown_args.remove(argument)

        # and initialize the command with these arguments
        options.command = command_parser.constructor(**vars(command_options))
        options.config = Config.load(options.config)

        return options
