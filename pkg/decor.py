"""Decor symbol classification by component area signatures.

A symbol's signature holds the areas of its three largest connected
components (after healing broken strokes) divided by the largest one;
a blob is assigned the class whose library signature is nearest.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Tuple

import numpy as np

from errors import DegenerateInputError, IncompleteLibraryError, InputError, ParseError
from glyphs import ORIENTATIONS, decor_glyph, orient, rescale
from models import DecorClass, DecorInstance
from raster import BinaryImage, Box, StructuringElement, detect_blobs, label_array, morph


class Signature(NamedTuple):
    r1: float
    r2: float
    r3: float

    def distance(self, other: 'Signature') -> float:
        return float(np.linalg.norm(np.subtract(self, other)))


def compute_signature(symbol: BinaryImage) -> Signature:
    if not symbol.count():
        raise DegenerateInputError('Cannot compute the signature of an empty symbol')
    healed = morph(symbol, StructuringElement(1), 'close')
    labels, count = label_array(healed.data, connectivity=8)
    areas = sorted(np.bincount(labels.ravel())[1:].tolist(), reverse=True)
    areas = (areas + [0, 0, 0])[:3]
    return Signature(*(area / areas[0] for area in areas))


@dataclass(frozen=True)
class SignatureLibrary:
    signatures: Dict[DecorClass, Signature]

    def __post_init__(self):
        missing = set(DecorClass) - set(self.signatures)
        if missing:
            raise IncompleteLibraryError(
                'Signature library lacks classes: ' +
                ', '.join(decor_class.code for decor_class in sorted(missing))
            )

    def classify(self, signature: Signature) -> DecorClass:
        """Nearest class; equal distances go to the lowest class code."""
        return min(
            sorted(self.signatures),
            key=lambda decor_class: (signature.distance(self.signatures[decor_class]), decor_class)
        )

    def min_separation(self) -> float:
        classes = sorted(self.signatures)
        return min(
            self.signatures[a].distance(self.signatures[b])
            for i, a in enumerate(classes) for b in classes[i + 1:]
        )


def build_library(samples: Iterable[Tuple[DecorClass, BinaryImage]]) -> SignatureLibrary:
    """Per-class mean of sample signatures."""
    collected: Dict[DecorClass, List[Signature]] = {}
    for decor_class, image in samples:
        collected.setdefault(DecorClass(decor_class), []).append(compute_signature(image))
    return SignatureLibrary({
        decor_class: Signature(*np.mean(signatures, axis=0).tolist())
        for decor_class, signatures in collected.items()
    })


def canonical_samples() -> List[Tuple[DecorClass, BinaryImage]]:
    """Ten samples per class: eight orientations and two double-size copies."""
    samples = []
    for decor_class in DecorClass:
        glyph = decor_glyph(decor_class)
        for rotation, mirror in ORIENTATIONS:
            samples.append((decor_class, BinaryImage(orient(glyph, rotation, mirror))))
        for rotation in (0, 1):
            samples.append((decor_class, BinaryImage(rescale(orient(glyph, rotation), 2))))
    return samples


def default_library() -> SignatureLibrary:
    return build_library(canonical_samples())


def classify_decors(
    room_crop: BinaryImage, wall_mask: BinaryImage, library: SignatureLibrary,
    min_area: int = 30, merge_gap: int = 3, offset: Tuple[int, int] = (0, 0)
) -> List[DecorInstance]:
    """Decor instances among the non-wall blobs of a room crop.

    `wall_mask` covers the same area as the crop; boxes of returned
    instances are shifted by `offset` (x, y) into plan coordinates.
    """
    symbols = room_crop - wall_mask
    instances = []
    dx, dy = offset
    for box in detect_blobs(symbols, min_area, merge_gap):
        decor_class = library.classify(compute_signature(symbols.crop(box)))
        plan_box = Box(box.top + dy, box.left + dx, box.bottom + dy, box.right + dx)
        instances.append(DecorInstance(decor_class, plan_box))
    return instances


def save_library(library: SignatureLibrary, path):
    lines = [
        f'{decor_class.value} ' + ' '.join(f'{ratio:.6f}' for ratio in library.signatures[decor_class])
        for decor_class in sorted(library.signatures)
    ]
    Path(path).write_text('\n'.join(lines) + '\n', encoding='utf-8')


def load_library(path) -> SignatureLibrary:
    path = Path(path)
    if not path.is_file():
        raise InputError(f'Signature library {path} does not exist')
    signatures = {}
    for number, line in enumerate(path.read_text(encoding='utf-8').splitlines(), 1):
        if not line.strip():
            continue
        location = f'{path}:{number}'
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(f'expected "class_code r1 r2 r3", got {line!r}', location)
        try:
            decor_class = DecorClass(int(fields[0]))
            ratios = [float(value) for value in fields[1:]]
        except ValueError:
            raise ParseError(f'invalid library entry {line!r}', location)
        if decor_class in signatures:
            raise ParseError(f'repeated class code {decor_class.value}', location)
        signatures[decor_class] = Signature(*ratios)
    return SignatureLibrary(signatures)
