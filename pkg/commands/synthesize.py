from dataclasses import dataclass
from pathlib import Path

from config import Config
from decor import default_library, save_library
from models import RoomLabel
from synth import generate_corpus
from .command import Command, CommandResult


class SynthResult(CommandResult):

    columns = ['label', 'rooms', 'train', 'test']


@dataclass
class LabelRow:
    label: str
    rooms: int
    train: int
    test: int


class Synth(Command):
    """Generate a corpus of synthetic floor plans with ground truth.

    Plans have 5, 4 and 3 rooms in turn. The corpus directory gets
    plans/NNNN.png with plans/NNNN.json (ground truth), features.csv
    with the LOFD row and label of every room, and split.txt assigning
    the rows to the train or the test part. The signature library of
    the symbols drawn goes to library.txt and the effective
    configuration to config.txt; both can be passed back to describe.
    """

    help = __doc__

    name = 'synth'

    def __init__(self, n: int, seed: int = None, out: str = 'corpus', processes: int = None):
        """

        Args:
            n: number of plans
            seed: seed of the corpus; overrides the configuration
            out: corpus directory
            processes: number of processes to use; overrides the configuration
        """
        self.n = n
        self.out = Path(out)
        self.overrides = dict(seed=seed, processes=processes)

    def run(self, config: Config) -> SynthResult:
        config = config.override(**self.overrides)
        features = generate_corpus(
            self.n, config.seed, self.out, config.processes, config.train_fraction, config.mean_distance
        )
        save_library(default_library(), self.out / 'library.txt')
        (self.out / 'config.txt').write_text(config.to_text(), encoding='utf-8')

        parts = [line.split('\t')[1] for line in (self.out / 'split.txt').read_text(encoding='utf-8').splitlines()]
        features = features.assign(part=parts)

        rows = []
        for label, group in features.groupby('label'):
            rows.append(LabelRow(
                RoomLabel(int(label)).title, len(group),
                int((group['part'] == 'train').sum()), int((group['part'] == 'test').sum())
            ))
        return SynthResult(
            rows,
            files=[
                str(self.out / name)
                for name in ['plans', 'features.csv', 'split.txt', 'library.txt', 'config.txt']
            ],
            description=f'Generated {self.n} plan(s) with {len(features)} rooms, seed {config.seed}'
        )
