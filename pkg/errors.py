"""Exceptions raised by the pipeline stages.

Each error carries a short ``category`` (printed by the command line
front-end as ``error [category]: message``) and the process exit code
the front-end should use for it: 2 for problems with user input,
1 for failures of the pipeline itself.
"""


class SugamanError(Exception):
    category = 'pipeline'
    exit_code = 1


class InputError(SugamanError, ValueError):
    category = 'invalid-input'
    exit_code = 2


class ConfigError(InputError):
    category = 'invalid-config'


class ParseError(InputError):
    category = 'parse-error'

    def __init__(self, message, path=''):
        if path:
            message = f'{path}: {message}'
        super().__init__(message)
        self.path = path


class DegenerateInputError(InputError):
    category = 'degenerate-input'


class SerializationError(SugamanError):
    category = 'serialization-refused'


class SegmentationError(SugamanError):
    category = 'segmentation-failed'


class AmbiguousDoorError(SugamanError):
    category = 'ambiguous-door'


class IncompleteLibraryError(SugamanError):
    category = 'incomplete-library'


class TrainingError(SugamanError):
    category = 'training-error'


class DegeneratePolygonError(SugamanError):
    category = 'degenerate-polygon'


class UndefinedDirectionError(SugamanError):
    category = 'undefined-direction'


class OrphanDoorError(SugamanError):
    category = 'orphan-door'


class NoEntryError(SugamanError):
    category = 'no-entry'


class DisconnectedPlanError(SugamanError):
    category = 'disconnected-plan'


class UnroutableRoomError(SugamanError):
    category = 'unroutable-room'


class RenderError(SugamanError):
    category = 'render-error'


class GenerationFailedError(SugamanError):
    category = 'generation-failed'
