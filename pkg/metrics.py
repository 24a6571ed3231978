"""Text similarity of generated descriptions to reference descriptions.

ROUGE-n (recall, precision and F1 of co-occurring n-grams), BLEU
(clipped n-gram precisions with brevity penalty) and METEOR (unigram
alignment scored by recall-weighted harmonic mean and fragmentation
penalty). Texts are compared as lowercase token sequences.
"""
import math
from collections import Counter
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from errors import ConfigError, InputError


TERMINAL_PUNCTUATION = '.,;:!?'

# alignments with at most this many matches are searched exhaustively
EXHAUSTIVE_MATCHES = 12
EXHAUSTIVE_CANDIDATES = 64


def tokenize(text: str) -> List[str]:
    """Lowercase whitespace tokens with trailing punctuation split off."""
    tokens = []
    for word in text.lower().split():
        trailing = []
        while word and word[-1] in TERMINAL_PUNCTUATION:
            trailing.append(word[-1])
            word = word[:-1]
        if word:
            tokens.append(word)
        tokens.extend(reversed(trailing))
    return tokens


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float


def harmonic_mean(a, b) -> float:
    return 2 * a * b / (a + b) if a + b else 0.0


def rouge_n(candidate: Sequence[str], references: Sequence[Sequence[str]], n: int = 1) -> RougeScore:
    """Co-occurring n-grams pooled over all references."""
    if n < 1:
        raise ConfigError(f'n has to be at least 1, got {n}')
    if not references:
        raise InputError('At least one reference is required')
    candidate_grams = ngrams(candidate, n)
    candidate_total = sum(candidate_grams.values())
    if not candidate_total:
        return RougeScore(0.0, 0.0, 0.0)

    matched = reference_total = 0
    for reference in references:
        reference_grams = ngrams(reference, n)
        reference_total += sum(reference_grams.values())
        matched += sum(min(count, candidate_grams[gram]) for gram, count in reference_grams.items())

    recall = matched / reference_total if reference_total else 0.0
    precision = matched / (candidate_total * len(references))
    return RougeScore(recall, precision, harmonic_mean(recall, precision))


def uniform_weights(n: int) -> Tuple[float, ...]:
    return tuple([1 / n] * n)


def _check_weights(weights, n):
    if len(weights) != n:
        raise ConfigError(f'Expected {n} BLEU weights, got {len(weights)}')
    if abs(sum(weights) - 1) > 1e-9:
        raise ConfigError(f'BLEU weights have to sum up to 1, got {sum(weights)}')


def closest_length(candidate_length: int, references: Sequence[Sequence[str]]) -> int:
    """Reference length closest to the candidate's; ties go to the shorter."""
    return min((abs(len(reference) - candidate_length), len(reference)) for reference in references)[1]


def clipped_counts(candidate, references, n) -> Tuple[int, int]:
    """(clipped matches, candidate n-grams): counts limited by the maximal reference count."""
    candidate_grams = ngrams(candidate, n)
    most = Counter()
    for reference in references:
        for gram, count in ngrams(reference, n).items():
            most[gram] = max(most[gram], count)
    clipped = sum(min(count, most[gram]) for gram, count in candidate_grams.items())
    return clipped, sum(candidate_grams.values())


def brevity_penalty(candidate_length, reference_length) -> float:
    if not candidate_length:
        return 0.0
    if candidate_length > reference_length:
        return 1.0
    return math.exp(1 - reference_length / candidate_length)


def _bleu_from_counts(counts, candidate_length, reference_length, weights) -> float:
    precisions = [clipped / total if total else 0.0 for clipped, total in counts]
    if min(precisions) == 0:
        return 0.0
    return brevity_penalty(candidate_length, reference_length) * math.exp(
        sum(weight * math.log(p) for weight, p in zip(weights, precisions))
    )


def bleu(candidate: Sequence[str], references: Sequence[Sequence[str]], n: int = 4, weights: Sequence[float] = None) -> float:
    weights = tuple(weights) if weights is not None else uniform_weights(n)
    _check_weights(weights, n)
    if not references:
        raise InputError('At least one reference is required')
    counts = [clipped_counts(candidate, references, order) for order in range(1, n + 1)]
    return _bleu_from_counts(counts, len(candidate), closest_length(len(candidate), references), weights)


def corpus_bleu(candidates, reference_sets, n: int = 4, weights: Sequence[float] = None) -> float:
    """BLEU of n-gram counts and lengths pooled over the whole corpus."""
    weights = tuple(weights) if weights is not None else uniform_weights(n)
    _check_weights(weights, n)
    pooled = np.zeros((n, 2), dtype=int)
    candidate_length = reference_length = 0
    for candidate, references in zip(candidates, reference_sets):
        for order in range(1, n + 1):
            pooled[order - 1] += clipped_counts(candidate, references, order)
        candidate_length += len(candidate)
        reference_length += closest_length(len(candidate), references)
    return _bleu_from_counts(pooled.tolist(), candidate_length, reference_length, weights)


@dataclass(frozen=True)
class MeteorScore:
    precision: float
    recall: float
    f1: float
    f_mean: float
    penalty: float
    score: float
    matches: int = 0
    chunks: int = 0


def _exhaustive_alignment(candidate, reference) -> Tuple[int, int]:
    """(matches, chunks) of the alignment with most matches, then fewest chunks."""
    positions: Dict[str, List[int]] = {}
    for j, token in enumerate(reference):
        positions.setdefault(token, []).append(j)
    matchable = [i for i, token in enumerate(candidate) if token in positions]

    @lru_cache(maxsize=None)
    def best(k, used, previous):
        # (matches, -chunks) from the k-th matchable candidate token on;
        # `previous` is the reference position matched by the token just
        # before it in the candidate, -2 when that one is unmatched
        if k == len(matchable):
            return 0, 0
        adjacent = k + 1 < len(matchable) and matchable[k + 1] == matchable[k] + 1
        result = best(k + 1, used, -2)
        for j in positions[candidate[matchable[k]]]:
            if used >> j & 1:
                continue
            matches, negative_chunks = best(k + 1, used | 1 << j, j if adjacent else -2)
            result = max(result, (matches + 1, negative_chunks - (0 if j == previous + 1 else 1)))
        return result

    matches, negative_chunks = best(0, 0, -2)
    best.cache_clear()
    return matches, -negative_chunks


def _greedy_alignment(candidate, reference) -> Tuple[int, int]:
    """(matches, chunks) aligning the longest common runs first."""
    equal = (np.array(candidate, dtype=object)[:, None] == np.array(reference, dtype=object)[None, :]).astype(bool)
    matches = chunks = 0
    while True:
        # runs[i, j]: length of the common run starting at candidate i, reference j
        runs = equal.astype(int)
        for i in range(len(candidate) - 2, -1, -1):
            runs[i, :-1] = np.where(equal[i, :-1], runs[i + 1, 1:] + 1, 0)
        i, j = np.unravel_index(np.argmax(runs), runs.shape)
        length = int(runs[i, j])
        if not length:
            return matches, chunks
        equal[i:i + length, :] = False
        equal[:, j:j + length] = False
        matches += length
        chunks += 1


def align(candidate: Sequence[str], reference: Sequence[str]) -> Tuple[int, int]:
    possible = sum((Counter(candidate) & Counter(reference)).values())
    if not possible:
        return 0, 0
    matchable = sum(1 for token in candidate if token in set(reference))
    if possible <= EXHAUSTIVE_MATCHES and matchable <= EXHAUSTIVE_CANDIDATES:
        return _exhaustive_alignment(tuple(candidate), tuple(reference))
    return _greedy_alignment(list(candidate), list(reference))


def meteor_single(candidate: Sequence[str], reference: Sequence[str]) -> MeteorScore:
    matches, chunks = align(candidate, reference)
    if not matches:
        return MeteorScore(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    precision = matches / len(candidate)
    recall = matches / len(reference)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    penalty = 0.5 * chunks / matches
    return MeteorScore(
        precision, recall, harmonic_mean(precision, recall), f_mean,
        penalty, f_mean * (1 - penalty), matches, chunks
    )


def meteor(candidate: Sequence[str], references) -> MeteorScore:
    """Score against one reference, or the best of several."""
    if references and isinstance(references[0], str):
        references = [references]
    if not references:
        raise InputError('At least one reference is required')
    scores = [meteor_single(candidate, reference) for reference in references]
    return max(scores, key=lambda score: score.score)


ROUGE_ORDERS = (1, 2, 3)
BLEU_ORDERS = (1, 2, 3, 4)


@dataclass
class MetricRow:
    """One line of the evaluation table; None where a column does not apply."""

    metric: str
    recall: float = None
    precision: float = None
    f_score: float = None
    penalty: float = None
    score: float = None


REPORT_COLUMNS = [field.name for field in fields(MetricRow)]


@dataclass
class MetricReport:
    rouge: Dict[int, RougeScore]
    bleu: Dict[int, float]
    corpus_bleu: Dict[int, float]
    meteor: MeteorScore
    items: int

    def rows(self) -> List[MetricRow]:
        rows = [
            MetricRow(f'ROUGE-{n}', score.recall, score.precision, score.f1)
            for n, score in self.rouge.items()
        ]
        rows += [MetricRow(f'BLEU-{n}', score=score) for n, score in self.bleu.items()]
        rows += [MetricRow(f'corpus BLEU-{n}', score=score) for n, score in self.corpus_bleu.items()]
        meteor = self.meteor
        rows.append(MetricRow('METEOR', meteor.recall, meteor.precision, meteor.f_mean, meteor.penalty, meteor.score))
        rows.append(MetricRow('METEOR F1', meteor.recall, meteor.precision, meteor.f1))
        return rows

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(row) for row in self.rows()], columns=REPORT_COLUMNS)

    def save(self, path):
        self.to_frame().to_csv(path, sep='\t', index=False, float_format='%.6f', na_rep='-')


def _mean(values):
    return float(np.mean(values)) if len(values) else 0.0


def evaluate_corpus(candidates: Sequence[str], reference_sets: Sequence[Sequence[str]]) -> MetricReport:
    """Per-item metrics averaged over the corpus; BLEU is also pooled."""
    if len(candidates) != len(reference_sets):
        raise InputError(
            f'Got {len(candidates)} candidates but {len(reference_sets)} reference sets'
        )
    candidate_tokens = [tokenize(text) for text in candidates]
    reference_tokens = [[tokenize(text) for text in references] for references in reference_sets]
    for number, references in enumerate(reference_tokens, 1):
        if not references:
            raise InputError(f'Item {number} has no reference')

    rouge = {}
    for n in ROUGE_ORDERS:
        scores = [rouge_n(c, refs, n) for c, refs in zip(candidate_tokens, reference_tokens)]
        rouge[n] = RougeScore(*(
            _mean([getattr(score, name) for score in scores]) for name in ['recall', 'precision', 'f1']
        ))

    item_bleu = {
        n: _mean([bleu(c, refs, n) for c, refs in zip(candidate_tokens, reference_tokens)])
        for n in BLEU_ORDERS
    }
    pooled_bleu = {n: corpus_bleu(candidate_tokens, reference_tokens, n) for n in BLEU_ORDERS}

    meteors = [meteor(c, refs) for c, refs in zip(candidate_tokens, reference_tokens)]
    meteor_mean = MeteorScore(*(
        _mean([getattr(score, name) for score in meteors])
        for name in ['precision', 'recall', 'f1', 'f_mean', 'penalty', 'score']
    ))
    return MetricReport(rouge, item_bleu, pooled_bleu, meteor_mean, len(candidates))


def read_references(path) -> List[str]:
    """Reference descriptions of a plan: blocks separated by blank lines."""
    text = Path(path).read_text(encoding='utf-8')
    blocks, current = [], []
    for line in text.splitlines():
        if line.strip():
            current.append(line.strip())
        elif current:
            blocks.append(' '.join(current))
            current = []
    if current:
        blocks.append(' '.join(current))
    return blocks
