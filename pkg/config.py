"""Flat key = value configuration of every tunable of the pipeline.

A configuration file looks like::

    # walls
    se_radius = 3
    bin_scheme = uniform

Blank lines and ``#`` comments are ignored, unknown keys are rejected.
"""
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Tuple

from errors import ConfigError


ENVIRONMENT_VARIABLE = 'SUGAMAN_CONFIG'


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in {'1', 'true', 'yes', 'on'}:
        return True
    if lowered in {'0', 'false', 'no', 'off'}:
        return False
    raise ValueError(f'{text!r} is not a boolean')


@dataclass(frozen=True)
class Config:

    # raster and walls
    threshold: int = 128
    se_radius: int = 3
    wall_min_thickness: int = 4

    # doors
    door_score_min: float = 0.6
    door_reach: int = 2
    door_scales: str = '0.75,1.0,1.25,1.5'

    # rooms and decors
    min_room_area: int = 400
    min_blob_area: int = 30
    merge_gap: int = 3

    # units
    area_divisor: float = 100.0
    step_pixels: float = 10.0

    # geometry
    bin_scheme: str = 'nonuniform'
    cardinal_span: float = 60.0
    shrink_factor: float = 0.0

    # navigation
    max_corners: int = 1000
    harris_k: float = 0.04
    corner_push: int = 3
    door_dilation: int = 2

    # room classification
    mean_distance: bool = False
    classifier: str = 'linear-svm-ovo'
    seed: int = 1
    epochs: int = 1000
    learning_rate: float = 1.0
    regularization: float = 0.001
    train_fraction: float = 0.7
    validation_fraction: float = 0.15

    # runtime
    processes: int = 1

    # paths
    library: str = ''
    door_template: str = ''

    def __post_init__(self):
        if not 0 <= self.threshold <= 255:
            raise ConfigError(f'threshold has to be within 0-255, got {self.threshold}')
        for key in ['se_radius', 'wall_min_thickness', 'max_corners', 'epochs', 'processes']:
            if getattr(self, key) < 1:
                raise ConfigError(f'{key} has to be a positive integer, got {getattr(self, key)}')
        if self.bin_scheme not in {'uniform', 'nonuniform'}:
            raise ConfigError(f'bin_scheme has to be uniform or nonuniform, got {self.bin_scheme!r}')
        if not 0 < self.cardinal_span < 90:
            raise ConfigError(f'cardinal_span has to be within (0, 90), got {self.cardinal_span}')
        if not 0 <= self.shrink_factor <= 1:
            raise ConfigError(f'shrink_factor has to be within [0, 1], got {self.shrink_factor}')
        if not 0 < self.train_fraction < 1:
            raise ConfigError(f'train_fraction has to be within (0, 1), got {self.train_fraction}')
        if not 0 <= self.validation_fraction < 1:
            raise ConfigError(f'validation_fraction has to be within [0, 1), got {self.validation_fraction}')
        if self.area_divisor <= 0 or self.step_pixels <= 0:
            raise ConfigError('area_divisor and step_pixels have to be positive')
        # validates the list eagerly
        self.scales

    @property
    def scales(self) -> Tuple[float, ...]:
        try:
            scales = tuple(float(scale) for scale in self.door_scales.split(','))
        except ValueError:
            raise ConfigError(f'door_scales has to be a comma separated list of numbers, got {self.door_scales!r}')
        if not scales or min(scales) <= 0:
            raise ConfigError(f'door_scales have to be positive, got {self.door_scales!r}')
        return scales

    @classmethod
    def keys(cls):
        return [field.name for field in fields(cls)]

    @classmethod
    def convert(cls, key, text):
        """Convert text value of `key` to the type of the field."""
        field_types = {field.name: field.type for field in fields(cls)}
        if key not in field_types:
            raise ConfigError(f'Unknown configuration key: {key!r}')
        kind = field_types[key]
        converter = parse_bool if kind is bool else kind
        try:
            return converter(text.strip())
        except ValueError:
            raise ConfigError(f'Invalid value {text.strip()!r} for {key} (expected {kind.__name__})')

    @classmethod
    def from_text(cls, text: str, source='<config>'):
        values = {}
        for number, line in enumerate(text.splitlines(), 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ConfigError(f'{source}:{number}: expected "key = value", got {line!r}')
            key, value = (part.strip() for part in line.split('=', 1))
            try:
                values[key] = cls.convert(key, value)
            except ConfigError as error:
                raise ConfigError(f'{source}:{number}: {error}')
        return cls(**values)

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f'Configuration file {path} does not exist')
        return cls.from_text(path.read_text(encoding='utf-8'), source=str(path))

    @classmethod
    def load(cls, path=None):
        """Load from `path`, else from $SUGAMAN_CONFIG, else the defaults."""
        path = path or os.environ.get(ENVIRONMENT_VARIABLE)
        if path:
            return cls.from_file(path)
        return cls()

    def override(self, **values):
        """Return a copy with non-None `values` applied."""
        values = {key: value for key, value in values.items() if value is not None}
        unknown = set(values) - set(self.keys())
        if unknown:
            raise ConfigError(f'Unknown configuration keys: {", ".join(sorted(unknown))}')
        return replace(self, **values)

    def to_text(self) -> str:
        lines = []
        for key in self.keys():
            value = getattr(self, key)
            if isinstance(value, bool):
                value = str(value).lower()
            lines.append(f'{key} = {value}')
        return '\n'.join(lines) + '\n'
