from pathlib import Path
from typing import List

from config import Config
from errors import InputError
from grammar import GD_HEADER, strip_headers
from metrics import REPORT_COLUMNS, MetricReport, evaluate_corpus, read_references
from .command import Command, CommandResult


class EvaluateResult(CommandResult):

    columns = REPORT_COLUMNS


class ReportRow:
    """Row of the metric table with unused columns shown as '-'."""

    def __init__(self, row):
        for column in REPORT_COLUMNS:
            value = getattr(row, column)
            if value is None:
                value = '-'
            elif isinstance(value, float):
                value = f'{value:.4f}'
            setattr(self, column, value)


def candidate_text(path) -> str:
    return strip_headers(Path(path).read_text(encoding='utf-8'))


def reference_texts(path) -> List[str]:
    """References of one plan.

    Rendered descriptions (starting with the section header) are split
    at every header; plain text files hold references separated by
    blank lines.
    """
    lines = Path(path).read_text(encoding='utf-8').splitlines()
    if not any(line.strip() == GD_HEADER for line in lines):
        return read_references(path)
    references, current = [], []
    for line in lines:
        if line.strip() == GD_HEADER and current:
            references.append(strip_headers('\n'.join(current)))
            current = []
        current.append(line)
    references.append(strip_headers('\n'.join(current)))
    return [reference for reference in references if reference.strip()]


def pair_files(candidates: Path, references: Path):
    """Candidate and reference files of the same name (*.txt)."""
    for directory in [candidates, references]:
        if not directory.is_dir():
            raise InputError(f'{directory} is not a directory')
    candidate_files = {path.name: path for path in candidates.glob('*.txt')}
    reference_files = {path.name: path for path in references.glob('*.txt')}
    unmatched = sorted(set(candidate_files) ^ set(reference_files))
    if unmatched:
        raise InputError(f'Files without a counterpart: {", ".join(unmatched)}')
    if not candidate_files:
        raise InputError(f'No descriptions (*.txt) in {candidates}')
    return [(candidate_files[name], reference_files[name]) for name in sorted(candidate_files)]


class Evaluate(Command):
    """Score candidate descriptions against reference descriptions.

    Files are paired by name; ROUGE-1/2/3, BLEU-1..4 and METEOR are
    averaged over the pairs (BLEU is also pooled over the corpus).
    """

    help = __doc__

    name = 'eval'

    def __init__(self, candidates, references, out: str = None):
        """

        Args:
            candidates: directory with candidate descriptions (*.txt)
            references: directory with reference descriptions of the same names
            out: optional path of a TSV copy of the table
        """
        self.candidates = Path(candidates)
        self.references = Path(references)
        self.out = out

    def evaluate(self) -> MetricReport:
        pairs = pair_files(self.candidates, self.references)
        return evaluate_corpus(
            [candidate_text(candidate) for candidate, _ in pairs],
            [reference_texts(reference) for _, reference in pairs]
        )

    def run(self, config: Config) -> EvaluateResult:
        report = self.evaluate()
        files = []
        if self.out:
            report.save(self.out)
            files.append(self.out)
        result = EvaluateResult(
            [ReportRow(row) for row in report.rows()],
            files=files,
            description=f'Scores averaged over {report.items} description(s)'
        )
        result.report = report
        return result
