#!/usr/bin/env python3
import sys
import warnings

from command_line import CLI
from commands import Command, CommandResult
from errors import SugamanError


def render_text_table(command: Command, results: CommandResult):
    print(f'Results of {command.name} run')

    print(results.description)

    print('\t'.join(results.columns))

    for result in results.scored_list:
        for column in results.columns:
            v = getattr(result, column)
            print(v, end='\t')
        print()

    if results.files:
        print('There are additional output files in following locations:')
        print(results.files)


def run(argv):
    args = CLI().parse_args(argv[1:])
    results = args.command.run(args.config)
    render_text_table(args.command, results)
    return results


def show_warning(message, category, filename, lineno, file=None, line=None):
    print(f'warning: {message}', file=file or sys.stderr)


def main(argv=None):
    """Run the command line; pipeline errors end with their exit code."""
    warnings.showwarning = show_warning
    try:
        run(argv or sys.argv)
    except SugamanError as error:
        print(f'error [{error.category}]: {error}', file=sys.stderr)
        return error.exit_code
    except FileNotFoundError as error:
        print(f'error [invalid-input]: {error}', file=sys.stderr)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
