import numpy as np
import pytest
from pytest import approx

from decor import (
    Signature, SignatureLibrary, build_library, classify_decors, compute_signature, default_library,
    load_library, save_library
)
from errors import DegenerateInputError, IncompleteLibraryError, InputError, ParseError
from glyphs import ORIENTATIONS, decor_glyph, orient, rescale, variants
from models import DecorClass
from raster import BinaryImage, Box


@pytest.fixture(scope='module')
def library():
    return default_library()


def test_signature():
    # outer outline of 136 px and inner outline of 48 px
    signature = compute_signature(BinaryImage(decor_glyph(DecorClass.BED)))
    assert signature == approx((1.0, 48 / 136, 0.0))

    with pytest.raises(DegenerateInputError):
        compute_signature(BinaryImage.blank(4, 4))


def test_signatures_ignore_orientation():
    for decor_class in DecorClass:
        glyph = decor_glyph(decor_class)
        reference = compute_signature(BinaryImage(glyph))
        for rotation, mirror in ORIENTATIONS:
            assert compute_signature(BinaryImage(orient(glyph, rotation, mirror))) == approx(reference)


def test_library_separates_classes(library):
    assert set(library.signatures) == set(DecorClass)
    assert library.min_separation() > 0.05


def test_canonical_glyphs_are_recognized(library):
    for decor_class in DecorClass:
        for glyph in variants(decor_glyph(decor_class)).values():
            assert library.classify(compute_signature(BinaryImage(glyph))) == decor_class
        enlarged = rescale(decor_glyph(decor_class), 2)
        assert library.classify(compute_signature(BinaryImage(enlarged))) == decor_class


def test_classify_ties_go_to_lowest_code():
    signatures = {decor_class: Signature(1.0, 0.5, 0.0) for decor_class in DecorClass}
    library = SignatureLibrary(signatures)
    assert library.classify(Signature(1.0, 0.5, 0.0)) == DecorClass.BED


def test_incomplete_library():
    with pytest.raises(IncompleteLibraryError, match='toilet'):
        build_library([(DecorClass.BED, BinaryImage(decor_glyph(DecorClass.BED)))])


def test_classify_decors(library):
    crop = np.zeros((100, 120), dtype=bool)
    stove = decor_glyph(DecorClass.STOVE)
    toilet = orient(decor_glyph(DecorClass.TOILET), 1)
    crop[10:10 + stove.shape[0], 10:10 + stove.shape[1]] = stove
    crop[50:50 + toilet.shape[0], 60:60 + toilet.shape[1]] = toilet
    walls = np.zeros_like(crop)
    walls[:, :4] = True
    crop |= walls

    instances = classify_decors(BinaryImage(crop), BinaryImage(walls), library, offset=(200, 300))
    assert [instance.cls for instance in instances] == [DecorClass.STOVE, DecorClass.TOILET]
    assert instances[0].bbox == Box(310, 210, 333, 233)
    assert instances[1].bbox == Box(350, 260, 350 + toilet.shape[0] - 1, 260 + toilet.shape[1] - 1)


def test_library_file(tmpdir, library):
    path = str(tmpdir.join('library.txt'))
    save_library(library, path)
    loaded = load_library(path)
    for decor_class, signature in library.signatures.items():
        assert loaded.signatures[decor_class] == approx(signature, abs=1e-6)


@pytest.mark.parametrize('content, error', [
    ('1 1.0 0.5\n', ParseError),
    ('13 1.0 0.5 0.0\n', ParseError),
    ('1 1.0 0.5 x\n', ParseError),
    ('1 1.0 0.5 0.0\n1 1.0 0.5 0.0\n', ParseError),
    ('1 1.0 0.5 0.0\n', IncompleteLibraryError),
])
def test_malformed_library(tmpdir, content, error):
    path = tmpdir.join('library.txt')
    path.write(content)
    with pytest.raises(error):
        load_library(str(path))


def test_missing_library(tmpdir):
    with pytest.raises(InputError, match='does not exist'):
        load_library(str(tmpdir.join('library.txt')))
