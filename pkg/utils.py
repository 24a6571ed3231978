from abc import ABCMeta, abstractmethod
from decimal import Decimal, ROUND_HALF_UP


class AbstractRegisteringType(ABCMeta):
    """Register all subclass with `name` but without abstract methods.

    Used by command and room classifier registries, so that a new
    command or classifier kind becomes available just by defining it.
    """

    def __init__(cls, name, bases, attributes):
        super().__init__(name, bases, attributes)

        if not hasattr(cls, 'members'):
            cls.members = {}

        if hasattr(cls, 'name') and not cls.__abstractmethods__:
            cls.members[cls.name] = cls


def abstract_property(method):
    return property(abstractmethod(method))


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves going up (2.5 -> 3)."""
    return int(Decimal(str(float(value))).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def format_number(value) -> str:
    """Shortest exact text for a coordinate: integers as-is, floats by repr."""
    if isinstance(value, int) or float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def join_words(words) -> str:
    """'a', 'a and b', 'a, b and c'."""
    words = list(words)
    if len(words) < 2:
        return ''.join(words)
    return ', '.join(words[:-1]) + ' and ' + words[-1]
