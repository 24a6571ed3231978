from dataclasses import dataclass
from pathlib import Path
from typing import List

from declarative_parser import Argument

import multiprocess
from config import Config
from errors import InputError, SugamanError
from pipeline import Resources, describe_file
from .command import Command, CommandResult


class DescribeResult(CommandResult):

    columns = ['image', 'rooms', 'doors', 'entry_door', 'sentences']


@dataclass
class DescribedPlan:
    image: str
    rooms: int
    doors: int
    entry_door: int
    sentences: int
    files: List[Path]


def describe_image(image, resources: Resources, config: Config, out: Path, overlay):
    """Describe one plan; errors are returned rather than raised, for the pool."""
    image = Path(image)
    try:
        described = describe_file(image, resources, config)
        files = described.save(out / image.stem, overlay)
    except SugamanError as error:
        return type(error)(f'{image}: {error}')
    description = described.description
    return DescribedPlan(
        str(image), len(described.model.rooms), len(described.model.doors),
        described.model.entry_door, len(description.gd) + len(description.nv), files
    )


class Describe(Command):
    """Describe floor plan images in natural language.

    For every image a text description (general description and
    navigation) is written to <out>/<stem>.txt, and the semantic
    model of the plan to <out>/<stem>.xml.
    """

    help = __doc__

    name = 'describe'

    images = Argument(
        nargs='+',
        optional=False,
        help='PNG images of floor plans.'
    )

    def __init__(self, images, model: str = None, out: str = '.', overlay: str = None, processes: int = None):
        """

        Args:
            images: PNG images of floor plans
            model: room classifier trained with the train command
            out: directory for the descriptions and models
            overlay: PNG showing the routes; a directory when several images are described
            processes: number of processes to use; overrides the configuration
        """
        self.images = [images] if isinstance(images, str) else list(images)
        self.model = model
        self.out = Path(out)
        self.overlay = overlay
        self.processes = processes

    def overlays(self):
        if not self.overlay:
            return [None] * len(self.images)
        if len(self.images) == 1:
            return [Path(self.overlay)]
        directory = Path(self.overlay)
        directory.mkdir(parents=True, exist_ok=True)
        return [directory / (Path(image).stem + '.png') for image in self.images]

    def run(self, config: Config) -> DescribeResult:
        if not self.model:
            raise InputError('A room classifier model is required (--model)')
        config = config.override(processes=self.processes)
        missing = [image for image in self.images if not Path(image).is_file()]
        if missing:
            raise InputError(f'Missing images: {", ".join(missing)}')
        resources = Resources.load(self.model, config)
        self.out.mkdir(parents=True, exist_ok=True)

        pool = multiprocess.Pool(config.processes)
        results = pool.imap(
            _describe_with_overlay, list(zip(self.images, self.overlays())),
            shared_args=(resources, config, self.out), description='plans'
        )
        for result in results:
            if isinstance(result, SugamanError):
                raise result
        return DescribeResult(
            results,
            files=[str(path) for result in results for path in result.files],
            description=f'Described {len(results)} plan(s)'
        )


def _describe_with_overlay(item, resources, config, out):
    image, overlay = item
    return describe_image(image, resources, config, out, overlay)
