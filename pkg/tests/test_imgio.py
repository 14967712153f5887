import hashlib
import os

import numpy as np
import pytest
from PIL import Image

from semiconvex_pdhg import imgio


def test_pgm_roundtrip_8bit(tmp_path):
    u = np.random.default_rng(0).random((1, 13, 17))
    path = imgio.write_image(u, tmp_path / "a.pgm")
    back = imgio.read_image(path)
    assert back.shape == u.shape
    assert np.max(np.abs(back - u)) <= 1 / 510 + 1e-12


def test_pgm_roundtrip_16bit(tmp_path):
    u = np.random.default_rng(1).random((1, 9, 11))
    back = imgio.read_image(imgio.write_image(u, tmp_path / "a.pgm", bits=16))
    assert np.max(np.abs(back - u)) <= 1 / 131070 + 1e-12


def test_ppm_and_png_roundtrips(tmp_path):
    rng = np.random.default_rng(2)
    rgb = rng.random((3, 6, 5))
    gray = rng.random((1, 6, 5))
    for u, name, bits, bound in [(rgb, "c.ppm", 8, 1 / 510), (rgb, "c.png", 8, 1 / 510),
                                 (gray, "g.png", 8, 1 / 510), (gray, "g16.png", 16, 1 / 131070)]:
        back = imgio.read_image(imgio.write_image(u, tmp_path / name, bits=bits))
        assert back.shape == u.shape
        assert np.max(np.abs(back - u)) <= bound + 1e-12, name


def test_png_read_via_pillow_matches(tmp_path):
    arr = (np.arange(20, dtype=np.uint8) * 12).reshape(4, 5)
    Image.fromarray(arr, mode="L").save(tmp_path / "p.png")
    assert np.allclose(imgio.read_image(tmp_path / "p.png")[0], arr / 255.0)


def test_write_clamps_and_rounds_half_up(tmp_path):
    u = np.array([[[-0.5, 0.5 / 255, 1.5 / 255, 2.0]]])
    path = imgio.write_image(u, tmp_path / "r.pgm")
    raw = open(path, "rb").read()
    assert raw.endswith(bytes([0, 1, 2, 255]))


def test_pnm_header_with_comments(tmp_path):
    data = b"P5\n# a comment\n3 1\n# another\n255\n" + bytes([0, 128, 255])
    (tmp_path / "c.pgm").write_bytes(data)
    assert np.allclose(imgio.read_image(tmp_path / "c.pgm")[0, 0], [0, 128 / 255, 1])


def test_bad_magic_and_truncation(tmp_path):
    (tmp_path / "bad.pgm").write_bytes(b"P2\n2 2\n255\n0 0 0 0\n")
    with pytest.raises(ValueError):
        imgio.read_image(tmp_path / "bad.pgm")
    (tmp_path / "short.pgm").write_bytes(b"P5\n4 4\n255\n" + bytes(10))
    with pytest.raises(ValueError):
        imgio.read_image(tmp_path / "short.pgm")
    (tmp_path / "hdr.pgm").write_bytes(b"P5\n4")
    with pytest.raises(ValueError):
        imgio.read_image(tmp_path / "hdr.pgm")
    (tmp_path / "x.txt").write_bytes(b"hello")
    with pytest.raises(ValueError):
        imgio.read_image(tmp_path / "x.txt")
    with pytest.raises(ValueError):
        imgio.write_image(np.zeros((1, 2, 2)), tmp_path / "a.jpg")
    with pytest.raises(ValueError):
        imgio.write_image(np.zeros((3, 2, 2)), tmp_path / "a.pgm")


def test_atomic_write_leaves_no_temp_files(tmp_path):
    imgio.write_image(np.zeros((1, 3, 3)), tmp_path / "a.pgm")
    imgio.write_text(tmp_path / "t.csv", "x\n")
    assert sorted(os.listdir(tmp_path)) == ["a.pgm", "t.csv"]


def test_noise_properties():
    u = np.full((1, 1000, 1000), 0.5)
    assert np.array_equal(imgio.add_gaussian_noise(u, 0.0, 3), u)
    a = imgio.add_gaussian_noise(u, 0.05, 3)
    b = imgio.add_gaussian_noise(u, 0.05, 3)
    assert np.array_equal(a, b)
    # 0.05 noise around 0.5 is essentially never clamped
    assert abs(np.std(a - u) - 0.05) <= 0.01 * 0.05
    assert a.min() >= 0 and a.max() <= 1
    with pytest.raises(ValueError):
        imgio.add_gaussian_noise(u, -1.0)


def test_sorted_intensity_curve():
    c = np.full((3, 4, 4), 0.3)
    assert np.allclose(imgio.sorted_intensity_curve(c), 0.3)
    two = np.zeros((3, 4, 4))
    two[:, :, :1] = 1.0
    curve = imgio.sorted_intensity_curve(two)
    assert np.all(curve[:12] == 0) and np.all(curve[12:] == 1)
    with pytest.raises(ValueError):
        imgio.sorted_intensity_curve(np.zeros((1, 4, 4)))
    text = imgio.curve_csv(curve)
    assert text.splitlines()[0] == "index,intensity" and len(text.splitlines()) == 17


def test_plateau_fraction():
    v = np.array([0.3, 0.31, 0.5, 0.9, 0.95])
    assert imgio.plateau_fraction(v, (0.3, 0.9)) == pytest.approx(3 / 5)


def test_cracktip_generator():
    f, known = imgio.make_cracktip_mask(127)
    assert f.shape == known.shape == (1, 127, 127)
    assert f.min() >= 0 and f.max() <= 1
    # known exactly on the frame, unknown inside
    inner = np.zeros((127, 127), bool)
    inner[2:-2, 2:-2] = True
    assert np.array_equal(~known[0], inner)
    # jump across the slit on the left edge, continuity on the right edge
    c = 63
    assert f[0, c - 1, 0] - f[0, c + 1, 0] > 0.8
    assert abs(f[0, c - 1, -1] - f[0, c + 1, -1]) < 0.05
    f2, k2 = imgio.make_cracktip_mask(127)
    assert hashlib.sha256(f.tobytes()).digest() == hashlib.sha256(f2.tobytes()).digest()
    assert np.array_equal(known, k2)
    with pytest.raises(ValueError):
        imgio.make_cracktip_mask(128)


def test_synthetic_images_are_deterministic_and_in_range():
    for gen in (imgio.synthetic_image, imgio.synthetic_color_image):
        a, b = gen(32), gen(32)
        assert np.array_equal(a, b) and a.min() >= 0 and a.max() <= 1
    assert imgio.synthetic_color_image(16).shape == (3, 16, 16)
