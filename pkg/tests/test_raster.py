import numpy as np
import pytest

from maxproto.raster import Raster, load_image, png_decode, png_encode, resize_nearest


def test_flat_fill_and_dims():
    r = Raster.flat(4, 3, (10, 20, 30))
    assert (r.width, r.height) == (4, 3)
    assert (r.pixels == np.array([10, 20, 30], dtype=np.uint8)).all()


def test_equality_is_pixelwise():
    a = Raster.flat(2, 2, (1, 2, 3))
    b = Raster.flat(2, 2, (1, 2, 3))
    c = Raster.flat(2, 2, (1, 2, 4))
    assert a == b
    assert a != c
    assert a != Raster.flat(3, 2, (1, 2, 3))


def test_png_round_trip_exact():
    rng = np.random.default_rng(7)
    px = rng.integers(0, 256, size=(13, 9, 3), dtype=np.uint8)
    data = png_encode(px)
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert (png_decode(data) == px).all()


def test_png_encoding_deterministic():
    px = np.arange(5 * 4 * 3, dtype=np.uint8).reshape(5, 4, 3)
    assert png_encode(px) == png_encode(px.copy())


def test_crop_bounds_checked():
    r = Raster.flat(10, 10, (0, 0, 0))
    sub = r.crop(2, 3, 4, 5)
    assert (sub.width, sub.height) == (4, 5)
    with pytest.raises(ValueError):
        r.crop(8, 8, 4, 4)
    with pytest.raises(ValueError):
        r.crop(0, 0, 0, 1)


def test_crop_reads_correct_region():
    px = np.zeros((4, 4, 3), dtype=np.uint8)
    px[1, 2] = (9, 9, 9)
    sub = Raster(px).crop(2, 1, 1, 1)
    assert (sub.pixels[0, 0] == (9, 9, 9)).all()


def test_base64_round_trip():
    r = Raster.flat(3, 3, (200, 100, 50))
    assert Raster.from_base64_png(r.to_base64_png()) == r


def test_load_image(tmp_path):
    r = Raster.flat(6, 2, (5, 6, 7))
    p = tmp_path / "img.png"
    p.write_bytes(r.to_png_bytes())
    assert load_image(p) == r


def test_resize_nearest():
    px = np.zeros((2, 2, 3), dtype=np.uint8)
    px[0, 0] = (255, 0, 0)
    big = resize_nearest(Raster(px), 4, 4)
    assert (big.width, big.height) == (4, 4)
    assert (big.pixels[0, 0] == (255, 0, 0)).all()
    assert (big.pixels[1, 1] == (255, 0, 0)).all()
    assert (big.pixels[3, 3] == (0, 0, 0)).all()


def test_raster_rejects_bad_shapes():
    with pytest.raises(ValueError):
        Raster(np.zeros((3, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        Raster(np.zeros((0, 3, 3), dtype=np.uint8))
