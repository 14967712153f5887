"""Image and trace I/O, synthetic inputs and seeded noise.

Images are float arrays of shape ``(k, h, w)`` with values in ``[0, 1]``.
Supported files: binary PGM (``P5``, 8 or 16 bit), binary PPM (``P6``, 8 bit)
and PNG (8/16-bit gray, 8-bit RGB). Every file is written to a temporary
name in the target directory and renamed into place.
"""
from dataclasses import dataclass, field
import math
import os
import tempfile

import numpy as np
from PIL import Image

__all__ = [
    "RunArtifacts",
    "read_image",
    "write_image",
    "write_text",
    "add_gaussian_noise",
    "sorted_intensity_curve",
    "plateau_fraction",
    "make_cracktip_mask",
    "synthetic_image",
    "synthetic_color_image",
    "step_edge",
    "disk_image",
]


@dataclass
class RunArtifacts:
    out_dir: str
    images: dict = field(default_factory=dict)
    trace: str = ""
    extra: dict = field(default_factory=dict)


def _atomic_write(path, data):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text(path, text):
    _atomic_write(path, text.encode("utf-8"))


def _pnm_header(data):
    """Parse a binary PNM header; returns (magic, width, height, maxval, offset)."""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise ValueError("truncated PNM header")
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    magic = tokens[0]
    if magic not in (b"P5", b"P6"):
        raise ValueError("unsupported PNM magic %r" % magic)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise ValueError("malformed PNM header")
    if not (width > 0 and height > 0 and 0 < maxval < 65536):
        raise ValueError("invalid PNM dimensions or maxval")
    # exactly one whitespace byte separates header and raster
    return magic.decode(), width, height, maxval, pos + 1


def _read_pnm(data):
    magic, width, height, maxval, offset = _pnm_header(data)
    channels = 3 if magic == "P6" else 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * channels
    if len(data) - offset < count * dtype.itemsize:
        raise ValueError("truncated PNM raster")
    raw = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
    img = raw.reshape(height, width, channels).astype(float) / maxval
    return np.ascontiguousarray(np.moveaxis(img, -1, 0))


def read_image(path):
    """Read a PGM/PPM/PNG file into a ``(k, h, w)`` array scaled to ``[0, 1]``."""
    path = os.fspath(path)
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P5", b"P6"):
        return _read_pnm(data)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        img = Image.open(path)
        img.load()
        if img.mode in ("I;16", "I;16B", "I"):
            arr = np.asarray(img, dtype=float) / 65535.0
            return arr[None]
        if img.mode == "L":
            return np.asarray(img, dtype=float)[None] / 255.0
        if img.mode in ("RGB", "RGBA"):
            arr = np.asarray(img.convert("RGB"), dtype=float) / 255.0
            return np.ascontiguousarray(np.moveaxis(arr, -1, 0))
        raise ValueError("unsupported PNG mode %r" % img.mode)
    raise ValueError("unsupported image format: %s" % path)


def quantize(u, bits=8):
    """Clamp to ``[0, 1]`` and round half up to integers in ``[0, 2^bits - 1]``."""
    maxval = (1 << bits) - 1
    return np.floor(np.clip(u, 0.0, 1.0) * maxval + 0.5).astype(np.uint16 if bits > 8 else np.uint8)


def write_image(u, path, bits=8):
    """Write ``u`` (``(k, h, w)`` or ``(h, w)``) as PGM/PPM or PNG by suffix."""
    path = os.fspath(path)
    u = np.asarray(u, dtype=float)
    if u.ndim == 2:
        u = u[None]
    if u.shape[0] not in (1, 3):
        raise ValueError("can only write 1- or 3-channel images")
    if bits not in (8, 16):
        raise ValueError("bits must be 8 or 16")
    k, h, w = u.shape
    q = quantize(np.moveaxis(u, 0, -1), bits)
    ext = os.path.splitext(path)[1].lower()
    if ext in (".pgm", ".ppm", ".pnm"):
        if (ext == ".pgm" and k != 1) or (ext == ".ppm" and k != 3):
            raise ValueError("channel count %d does not fit %s" % (k, ext))
        magic = "P5" if k == 1 else "P6"
        header = ("%s\n%d %d\n%d\n" % (magic, w, h, (1 << bits) - 1)).encode("ascii")
        raster = q.astype(">u2").tobytes() if bits == 16 else q.tobytes()
        _atomic_write(path, header + raster)
    elif ext == ".png":
        if k == 3:
            if bits != 8:
                raise ValueError("RGB PNG output is 8 bit only")
            img = Image.fromarray(q, mode="RGB")
        elif bits == 16:
            img = Image.fromarray(q[..., 0].astype(np.uint16))
        else:
            img = Image.fromarray(q[..., 0], mode="L")
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".png")
        os.close(fd)
        try:
            img.save(tmp, format="PNG")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        raise ValueError("unsupported output format %r" % ext)
    return path


def add_gaussian_noise(u, std, seed=0):
    """``u`` plus seeded Gaussian noise, clamped to ``[0, 1]``.

    ``seed`` may be an integer or a ``numpy.random.Generator``.
    """
    if std < 0:
        raise ValueError("noise std must be nonnegative")
    u = np.asarray(u, dtype=float)
    if std == 0:
        return u.copy()
    rng = np.random.default_rng(seed)
    return np.clip(u + std * rng.standard_normal(u.shape), 0.0, 1.0)


def sorted_intensity_curve(u):
    """Channel-mean intensities of a color image, sorted ascending."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 3 or u.shape[0] != 3:
        raise ValueError("expected a (3, h, w) color image")
    return np.sort(u.mean(axis=0).ravel())


def curve_csv(curve):
    lines = ["index,intensity"]
    lines += ["%d,%r" % (i, float(v)) for i, v in enumerate(curve)]
    return "\n".join(lines) + "\n"


def plateau_fraction(values, levels, tol=0.02):
    """Fraction of ``values`` within ``tol`` of one of ``levels``."""
    values = np.asarray(values, dtype=float).ravel()
    near = np.zeros(values.shape, dtype=bool)
    for level in levels:
        near |= np.abs(values - level) <= tol
    return float(near.mean())


def make_cracktip_mask(n=127, border=2):
    """Synthetic cracktip inpainting instance on an ``n x n`` grid.

    The data is the classic crack-tip profile
    ``f = 1/2 + 1/2 sqrt(r / R) sin(phi / 2)`` around the center pixel, with
    the angle ``phi`` in ``(-pi, pi]`` so that ``f`` jumps across the
    horizontal slit running from the center to the left edge. ``R`` is the
    center-to-corner distance, so ``f`` stays in ``[0, 1]``. Only a frame of
    ``border`` pixels is known; the interior is the inpainting region.

    Returns ``(f, known)`` as ``(1, n, n)`` arrays. ``f`` holds the profile
    everywhere; only its known part enters the inpainting model.
    """
    if n % 2 == 0 or n < 3:
        raise ValueError("cracktip grid size must be odd and >= 3, got %d" % n)
    if not 1 <= border < (n - 1) // 2:
        raise ValueError("border must be between 1 and (n-1)/2")
    c = (n - 1) // 2
    i, j = np.mgrid[0:n, 0:n]
    x = (j - c).astype(float)
    y = (c - i).astype(float)
    r = np.hypot(x, y)
    phi = np.arctan2(y, x)
    # the slit itself (y = 0, x < 0) belongs to the upper side, phi = pi
    f = 0.5 + 0.5 * np.sqrt(r / (c * math.sqrt(2.0))) * np.sin(0.5 * phi)
    known = np.zeros((n, n), dtype=bool)
    known[:border, :] = known[-border:, :] = True
    known[:, :border] = known[:, -border:] = True
    return f[None], known[None]


def step_edge(n=32, low=0.2, high=0.8, channels=1):
    """Vertical step edge: left half ``low``, right half ``high``."""
    u = np.full((channels, n, n), low)
    u[:, :, n // 2:] = high
    return u


def disk_image(n=64, inside=0.8, outside=0.2, radius=None):
    radius = n / 4 if radius is None else radius
    i, j = np.mgrid[0:n, 0:n]
    c = (n - 1) / 2
    u = np.where((i - c) ** 2 + (j - c) ** 2 <= radius ** 2, inside, outside)
    return u[None].astype(float)


def synthetic_image(n=64):
    """Deterministic gray test scene: ramp background, square, disk, bar."""
    i, j = np.mgrid[0:n, 0:n] / max(n - 1, 1)
    u = 0.15 + 0.3 * j
    u = np.where((np.abs(i - 0.3) < 0.15) & (np.abs(j - 0.3) < 0.15), 0.85, u)
    u = np.where((i - 0.68) ** 2 + (j - 0.62) ** 2 < 0.2 ** 2, 0.55, u)
    u = np.where((np.abs(i - 0.15) < 0.05) & (j > 0.55), 0.05, u)
    return u[None]


def synthetic_color_image(n=64):
    """Deterministic color scene whose channel means spread over ``[0, 1]``."""
    i, j = np.mgrid[0:n, 0:n] / max(n - 1, 1)
    r = 0.1 + 0.8 * j
    g = 0.2 + 0.6 * i
    b = 0.5 + 0.3 * np.sin(3.0 * (i + j))
    disk = (i - 0.35) ** 2 + (j - 0.6) ** 2 < 0.18 ** 2
    square = (np.abs(i - 0.72) < 0.14) & (np.abs(j - 0.28) < 0.14)
    r = np.where(disk, 0.95, np.where(square, 0.15, r))
    g = np.where(disk, 0.85, np.where(square, 0.3, g))
    b = np.where(disk, 0.8, np.where(square, 0.35, b))
    return np.clip(np.stack([r, g, b]), 0.0, 1.0)
