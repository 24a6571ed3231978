import numpy as np
import pytest

from errors import DegenerateInputError, InputError
from raster import (
    BinaryImage, Box, StructuringElement, binarize, connected_components, detect_blobs,
    harris_corners, load_png, morph, save_png
)


def square_image(size=20, top=5, left=5, side=10):
    data = np.zeros((size, size), dtype=bool)
    data[top:top + side, left:left + side] = True
    return BinaryImage(data)


def test_box():
    box = Box(top=2, left=3, bottom=5, right=10)
    assert box.width == 8
    assert box.height == 4
    assert box.area == 32
    assert box.center == (6.5, 3.5)
    assert box.corners() == [(3, 2), (10, 2), (10, 5), (3, 5)]
    assert box.contains((3, 5))
    assert not box.contains((11, 5))
    assert box.dilate(1) == Box(1, 2, 6, 11)
    assert Box(-3, -3, 50, 50).clip(20, 30) == Box(0, 0, 19, 29)
    assert Box.from_xyxy(*box.as_xyxy()) == box
    assert Box.from_slices(box.slices) == box


def test_box_gap():
    a = Box(0, 0, 4, 4)
    assert a.gap(Box(0, 5, 4, 9)) == 0
    assert a.gap(Box(0, 8, 4, 9)) == 3
    assert a.gap(Box(2, 2, 3, 3)) == 0
    assert a.intersects(Box(4, 4, 6, 6))
    assert not a.intersects(Box(5, 5, 6, 6))
    assert a.union(Box(5, 5, 6, 6)) == Box(0, 0, 6, 6)


def test_binary_image():
    image = square_image()
    assert image.count() == 100
    assert image.shape == (20, 20)
    with pytest.raises(AttributeError):
        image.data = None
    with pytest.raises(ValueError):
        image.data[0, 0] = True
    assert (image - image).count() == 0
    assert (image | image.complement()).count() == 400
    assert image.crop(Box(5, 5, 6, 6)).count() == 4

    with pytest.raises(DegenerateInputError):
        BinaryImage(np.zeros((0, 3)))


def test_binarize():
    gray = np.array([[0, 127, 128, 255]])
    assert binarize(gray).data.tolist() == [[True, True, False, False]]
    assert binarize(gray, threshold=1).data.tolist() == [[True, False, False, False]]


def test_morph():
    image = square_image()
    se = StructuringElement(1)

    eroded = morph(image, se, 'erode')
    assert eroded.count() == 64
    dilated = morph(image, se, 'dilate')
    assert dilated.count() == 144

    # opening and closing do not change a square
    assert morph(image, se, 'open') == image
    assert morph(image, se, 'close') == image

    # closing fills a one pixel gap
    data = np.array(image.data)
    data[10, :] = False
    assert morph(BinaryImage(data), se, 'close') == image

    with pytest.raises(InputError):
        morph(image, se, 'blur')
    with pytest.raises(InputError):
        StructuringElement(0)


def test_cross_structuring_element():
    assert StructuringElement(1, 'cross').footprint.sum() == 5


def test_connected_components():
    data = np.zeros((5, 5), dtype=bool)
    data[0, 0] = data[1, 1] = True
    data[4, 4] = True

    components = connected_components(BinaryImage(data), connectivity=8)
    assert components.count == 2
    assert components.areas().tolist() == [2, 1]
    # labels follow the raster order of first pixels
    assert components.labels[0, 0] == 1
    assert components.labels[4, 4] == 2

    assert connected_components(BinaryImage(data), connectivity=4).count == 3

    with pytest.raises(InputError):
        connected_components(BinaryImage(data), connectivity=6)


def test_detect_blobs():
    data = np.zeros((40, 40), dtype=bool)
    data[2:8, 2:8] = True          # 36 px
    data[2:8, 10:16] = True        # 36 px, 2 px apart from the first
    data[30:32, 30:32] = True      # 4 px, too small

    blobs = detect_blobs(BinaryImage(data), min_area=30, merge_gap=3)
    assert blobs == [Box(2, 2, 7, 15)]

    blobs = detect_blobs(BinaryImage(data), min_area=30, merge_gap=1)
    assert blobs == [Box(2, 2, 7, 7), Box(2, 10, 7, 15)]

    assert detect_blobs(BinaryImage.blank(5, 5)) == []


def test_specks_do_not_grow_blobs():
    data = np.zeros((40, 40), dtype=bool)
    data[10:20, 10:20] = True      # 100 px
    data[22:24, 22:24] = True      # 4 px speck, 2 px off the corner
    assert detect_blobs(BinaryImage(data), min_area=30, merge_gap=3) == [Box(10, 10, 19, 19)]

    # small strokes 2 px apart are not summed into a blob
    data = np.zeros((40, 40), dtype=bool)
    data[22:24, 10:24] = True      # 28 px
    data[26:28, 10:20] = True      # 20 px
    assert detect_blobs(BinaryImage(data), min_area=30, merge_gap=3) == []


def test_harris_corners():
    corners = harris_corners(square_image(size=40, top=10, left=10, side=20), max_n=10)
    assert len(corners) >= 4
    square_corners = [(10, 10), (29, 10), (29, 29), (10, 29)]
    for cx, cy in square_corners:
        assert any(abs(x - cx) <= 3 and abs(y - cy) <= 3 for x, y in corners)

    assert harris_corners(BinaryImage.blank(10, 10)) == []
    assert len(harris_corners(square_image(size=40, top=10, left=10, side=20), max_n=2)) == 2

    with pytest.raises(InputError):
        harris_corners(square_image(), max_n=0)


def test_png(tmpdir):
    image = square_image()
    path = str(tmpdir.join('square.png'))
    save_png(image, path)
    assert load_png(path) == image

    with pytest.raises(InputError, match='does not exist'):
        load_png(str(tmpdir.join('missing.png')))
