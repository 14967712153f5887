"""Linear operators used by the splitting models.

Images are stored planar: an image with ``k`` channels on an ``h x w`` grid is
an array of shape ``(k, h, w)``. A gradient field of such an image has shape
``(d, k, h, w)`` where ``d`` is the number of spatial axes, so the per-pixel
``d x k`` block of a field ``g`` is ``g[:, :, i, j]``.

Every operator exposes ``forward``, ``adjoint`` and a certified upper bound
``norm_bound`` on its operator norm.
"""
import math

import numpy as np

__all__ = [
    "LinearMap",
    "Identity",
    "MatrixOperator",
    "Gradient",
    "GaussianConvolution",
    "ChannelMean",
    "Stack",
    "grad_forward",
    "grad_adjoint",
    "gaussian_kernel",
    "gaussian_convolve",
    "channel_mean",
    "stack",
    "op_norm_estimate",
]


class LinearMap:
    """Base class for a linear map between arrays of fixed shapes."""

    domain_shape = ()
    range_shape = ()
    norm_bound = 0.0

    def forward(self, x):
        raise NotImplementedError

    def adjoint(self, y):
        raise NotImplementedError

    def __call__(self, x):
        return self.forward(x)

    def __repr__(self):
        return "%s(%s -> %s, |K| <= %.6g)" % (
            type(self).__name__, self.domain_shape, self.range_shape, self.norm_bound)


class Identity(LinearMap):
    def __init__(self, shape):
        self.domain_shape = self.range_shape = tuple(shape)
        self.norm_bound = 1.0

    def forward(self, x):
        return np.array(x, dtype=float, copy=True)

    def adjoint(self, y):
        return np.array(y, dtype=float, copy=True)


class MatrixOperator(LinearMap):
    """Dense matrix acting on 1-D vectors; used by the analytic toy problems."""

    def __init__(self, matrix):
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        m, n = self.matrix.shape
        self.domain_shape = (n,)
        self.range_shape = (m,)
        self.norm_bound = float(np.linalg.norm(self.matrix, 2))

    def forward(self, x):
        return self.matrix @ x

    def adjoint(self, y):
        return self.matrix.T @ y


def grad_forward(u):
    """Forward differences of ``u`` along every axis but the first.

    ``u`` has shape ``(k, *spatial)``; the result has shape
    ``(d, k, *spatial)``. The difference at the last index of each axis is
    zero (replicate boundary).
    """
    u = np.asarray(u, dtype=float)
    d = u.ndim - 1
    g = np.zeros((d,) + u.shape)
    if d == 2:
        np.subtract(u[:, 1:, :], u[:, :-1, :], out=g[0, :, :-1, :])
        np.subtract(u[:, :, 1:], u[:, :, :-1], out=g[1, :, :, :-1])
        return g
    for axis in range(d):
        a = axis + 1
        hi = [slice(None)] * u.ndim
        lo = [slice(None)] * u.ndim
        hi[a] = slice(1, None)
        lo[a] = slice(None, -1)
        g[axis][tuple(lo)] = u[tuple(hi)] - u[tuple(lo)]
    return g


def grad_adjoint(g):
    """Exact adjoint of :func:`grad_forward` (the negative divergence)."""
    g = np.asarray(g, dtype=float)
    out = np.zeros(g.shape[1:])
    if g.shape[0] == 2 and g.ndim == 4:
        p, r = g[0, :, :-1, :], g[1, :, :, :-1]
        out[:, :-1, :] -= p
        out[:, 1:, :] += p
        out[:, :, :-1] -= r
        out[:, :, 1:] += r
        return out
    for axis in range(g.shape[0]):
        p = np.moveaxis(g[axis], axis + 1, 0).copy()
        p[-1] = 0.0
        o = np.moveaxis(out, axis + 1, 0)
        o -= p
        o[1:] += p[:-1]
    return out


class Gradient(LinearMap):
    """Forward-difference gradient on planar images.

    If ``channel`` is given the operator differentiates only that channel of
    a multi-channel image and its range has a single channel.
    """

    def __init__(self, shape, channel=None):
        self.domain_shape = tuple(shape)
        self.channel = channel
        d = len(shape) - 1
        k = 1 if channel is not None else shape[0]
        self.range_shape = (d, k) + tuple(shape[1:])
        self.norm_bound = math.sqrt(4 * d)

    def forward(self, x):
        if self.channel is None:
            return grad_forward(x)
        return grad_forward(x[self.channel:self.channel + 1])

    def adjoint(self, y):
        if self.channel is None:
            return grad_adjoint(y)
        out = np.zeros(self.domain_shape)
        out[self.channel] = grad_adjoint(y)[0]
        return out


def gaussian_kernel(std, shape):
    """Normalized Gaussian kernel wrapped periodically onto ``shape``.

    The kernel is truncated at radius ``ceil(4 * std)`` and renormalized to
    sum one. Taps falling outside a small grid wrap around and accumulate.
    The origin sits at index ``(0, 0)``, as needed for FFT convolution.
    """
    if std <= 0:
        raise ValueError("kernel std must be positive, got %r" % std)
    radius = int(math.ceil(4 * std))
    t = np.arange(-radius, radius + 1)
    w1 = np.exp(-0.5 * (t / std) ** 2)
    w2 = np.outer(w1, w1)
    w2 /= w2.sum()
    h, w = shape
    kernel = np.zeros((h, w))
    rows = np.mod(t, h)
    cols = np.mod(t, w)
    np.add.at(kernel, (rows[:, None], cols[None, :]), w2)
    return kernel


class GaussianConvolution(LinearMap):
    """Periodic convolution of every channel with a Gaussian kernel.

    The kernel is even, so the operator is self-adjoint, and nonnegative with
    unit mass, so its norm is at most one.
    """

    def __init__(self, shape, std):
        self.domain_shape = self.range_shape = tuple(shape)
        self.std = float(std)
        self.kernel = gaussian_kernel(std, shape[-2:])
        # even kernel: transfer function is real up to rounding
        self.transfer = np.fft.fft2(self.kernel).real
        self.norm_bound = 1.0

    def forward(self, x):
        return np.fft.ifft2(np.fft.fft2(x) * self.transfer).real

    def adjoint(self, y):
        return self.forward(y)


def gaussian_convolve(u, std):
    u = np.asarray(u, dtype=float)
    return GaussianConvolution(u.shape, std).forward(u)


class ChannelMean(LinearMap):
    """Average of the three color channels, ``(3, h, w) -> (1, h, w)``."""

    def __init__(self, shape):
        if shape[0] != 3:
            raise ValueError("channel mean needs exactly 3 channels, got %d" % shape[0])
        self.domain_shape = tuple(shape)
        self.range_shape = (1,) + tuple(shape[1:])
        self.norm_bound = 1.0 / math.sqrt(3.0)

    def forward(self, x):
        return np.mean(x, axis=0, keepdims=True)

    def adjoint(self, y):
        return np.repeat(np.asarray(y, dtype=float) / 3.0, 3, axis=0)


def channel_mean(u):
    u = np.asarray(u, dtype=float)
    return ChannelMean(u.shape).forward(u)


class Stack(LinearMap):
    """Vertical concatenation ``x -> (K_1 x, ..., K_m x)``.

    The range is a flat vector holding the raveled component outputs one
    after another; :meth:`split` recovers the component-shaped blocks.
    """

    def __init__(self, ops):
        ops = list(ops)
        if not ops:
            raise ValueError("cannot stack an empty list of operators")
        shape = ops[0].domain_shape
        for op in ops[1:]:
            if op.domain_shape != shape:
                raise ValueError("domain mismatch: %s vs %s" % (op.domain_shape, shape))
        self.ops = ops
        self.domain_shape = shape
        sizes = [int(np.prod(op.range_shape)) for op in ops]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        self.range_shape = (int(self.offsets[-1]),)
        self.norm_bound = math.sqrt(sum(op.norm_bound ** 2 for op in ops))

    def split(self, y):
        return [y[a:b].reshape(op.range_shape)
                for op, a, b in zip(self.ops, self.offsets[:-1], self.offsets[1:])]

    def concat(self, parts):
        return np.concatenate([np.ravel(p) for p in parts])

    def forward(self, x):
        return self.concat([op.forward(x) for op in self.ops])

    def adjoint(self, y):
        parts = self.split(y)
        out = self.ops[0].adjoint(parts[0])
        for op, p in zip(self.ops[1:], parts[1:]):
            out = out + op.adjoint(p)
        return out


def stack(ops):
    return Stack(ops)


def op_norm_estimate(op, iterations=200, seed=0):
    """Power-iteration estimate of ``|K|`` from below.

    Runs ``iterations`` steps of power iteration on ``K^T K`` from a seeded
    random start and returns ``|K x| / |x|`` for the final iterate, which
    never exceeds the true norm.
    """
    if iterations < 1:
        raise ValueError("need at least one iteration")
    if int(np.prod(op.domain_shape)) == 0:
        raise ValueError("operator has an empty domain")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(op.domain_shape)
    x /= np.linalg.norm(x)
    for _ in range(iterations):
        y = op.adjoint(op.forward(x))
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0
        x = y / ny
    return float(np.linalg.norm(op.forward(x)) / np.linalg.norm(x))
