"""Proximal operators for both sides of the splitting.

Every scalar or pointwise prox here solves

    argmin_x  |x - z|^2 / (2 tau) + phi(x)

exactly (closed form or finite candidate enumeration). The function-level
API mirrors the math; the ``*Term`` classes bundle a prox with its energy,
its semiconvexity modulus and, where it exists, its gradient.
"""
from dataclasses import dataclass
import math

import numpy as np

from .linops import gaussian_kernel

KINK_RADIUS = 1e-6


def _check_semiconvex_step(tau, modulus):
    if tau <= 0:
        raise ValueError("prox weight must be positive, got %r" % tau)
    if modulus > 0 and 1.0 / tau <= modulus:
        raise ValueError(
            "prox weight %g too large: need 1/tau > %g for a well-posed subproblem"
            % (tau, modulus))


def _pick_least(candidates, objectives):
    """Candidate with the smallest objective; smallest candidate on ties."""
    best = objectives.min(axis=0)
    chosen = np.where(objectives == best, candidates, np.inf)
    return chosen.min(axis=0)


def block_norm(z):
    """Frobenius norm of each per-pixel ``d x k`` block of a gradient field."""
    return np.sqrt(np.sum(z * z, axis=(0, 1), keepdims=True))


def _radial(z, rho_new, rho):
    scale = np.divide(rho_new, rho, out=np.zeros_like(rho), where=rho > 0)
    return scale * z


# ---------------------------------------------------------------------------
# data terms (G side)

def prox_l2_box(v, tau, c, f, box=(0.0, 1.0)):
    """Prox of ``c/2 |u - f|^2`` plus the indicator of ``box``.

    ``box=None`` drops the range constraint.
    """
    v = np.asarray(v, dtype=float)
    f = np.asarray(f, dtype=float)
    if v.shape != f.shape:
        raise ValueError("shape mismatch: %s vs %s" % (v.shape, f.shape))
    if tau <= 0 or c < 0:
        raise ValueError("need tau > 0 and c >= 0")
    u = (v + tau * c * f) / (1.0 + tau * c)
    if box is not None:
        u = np.clip(u, box[0], box[1])
    return u


def prox_inpaint(v, f, known_mask):
    """Pin known pixels (mask true) to the data, leave the rest free."""
    v = np.asarray(v, dtype=float)
    f = np.asarray(f, dtype=float)
    known_mask = np.asarray(known_mask, dtype=bool)
    if not (v.shape == f.shape == known_mask.shape):
        raise ValueError("shape mismatch: %s, %s, %s" % (v.shape, f.shape, known_mask.shape))
    return np.where(known_mask, f, v)


def deconv_transfer(shape, kernel_std=None, kernel=None):
    """Real transfer function of a periodic even kernel on the last two axes."""
    if kernel is None:
        kernel = gaussian_kernel(kernel_std, shape[-2:])
    return np.fft.fft2(kernel).real


def prox_deconv_quadratic(v, tau, kernel_std, f, kernel=None, transfer=None):
    """Prox of ``|k * u - f|^2`` under periodic boundary, solved with the FFT.

    Solves ``(1/tau + 2 |k^|^2) u^ = v^/tau + 2 conj(k^) f^``. ``kernel``
    (origin at index 0) or a precomputed ``transfer`` override ``kernel_std``.
    """
    if tau <= 0:
        raise ValueError("prox weight must be positive, got %r" % tau)
    v = np.asarray(v, dtype=float)
    f = np.asarray(f, dtype=float)
    if transfer is None:
        transfer = deconv_transfer(v.shape, kernel_std, kernel)
    num = np.fft.fft2(v) / tau + 2.0 * transfer * np.fft.fft2(f)
    return np.fft.ifft2(num / (1.0 / tau + 2.0 * transfer ** 2)).real


# ---------------------------------------------------------------------------
# regularizers (F side)

def prox_shrink_sharpen(z, inv_sigma, omega):
    """Blockwise prox of ``|g|_2 - omega/2 |g|^2`` with weight ``1/sigma``.

    Per pixel the minimizer of ``sigma/2 |g - z|^2 + |g| - omega/2 |g|^2`` is
    ``max(0, (sigma rho - 1)/(sigma - omega)) z / rho`` with ``rho = |z|``.
    ``omega = 0`` gives plain shrinkage.
    """
    sigma = 1.0 / inv_sigma
    if sigma <= omega:
        raise ValueError("need sigma > omega, got sigma=%g omega=%g" % (sigma, omega))
    z = np.asarray(z, dtype=float)
    rho = block_norm(z)
    rho_new = np.maximum(0.0, (sigma * rho - 1.0) / (sigma - omega))
    return _radial(z, rho_new, rho)


@dataclass(frozen=True)
class TruncQuadParams:
    """Parameters of the C^1 spline-smoothed truncated quadratic.

    ``eps0`` is relative: the transition half width is
    ``eps = eps0 * sqrt(lam / alpha)``.
    """

    alpha: float
    lam: float
    eps0: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.lam > 0 and 0 < self.eps0 < 1):
            raise ValueError("need alpha > 0, lam > 0 and 0 < eps0 < 1, got %r" % (self,))

    @property
    def knee(self):
        return math.sqrt(self.lam / self.alpha)

    @property
    def eps(self):
        return self.eps0 * self.knee

    @property
    def s1(self):
        return self.knee - self.eps

    @property
    def s2(self):
        return self.knee + self.eps

    @property
    def A(self):
        return -self.alpha / (4.0 * self.eps)

    @property
    def B(self):
        return -self.alpha * (2.0 * self.knee + self.eps) / (4.0 * self.eps)

    @property
    def C(self):
        return self.lam

    @property
    def omega(self):
        return semiconvexity_modulus(self)


def semiconvexity_modulus(p):
    """Smallest ``omega`` making ``R + omega/2 t^2`` convex (equals ``-2B``)."""
    return p.alpha * (2.0 + p.eps0) / (2.0 * p.eps0)


def rms_eval(t, p):
    """Smoothed truncated quadratic: ``alpha t^2``, cubic spline, then ``lam``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("rms_eval is defined for t >= 0")
    s2 = p.s2
    x = t - s2
    # Horner form; float powers are slow in numpy
    spline = (p.A * x + p.B) * x * x + p.C
    return np.where(t < p.s1, p.alpha * t * t, np.where(t <= s2, spline, p.lam))


def rms_derivative(t, p):
    t = np.asarray(t, dtype=float)
    x = t - p.s2
    spline = (3.0 * p.A * x + 2.0 * p.B) * x
    return np.where(t < p.s1, 2.0 * p.alpha * t, np.where(t <= p.s2, spline, 0.0))


def scalar_prox_rms(t_in, tau, p):
    """Global minimizer over ``t >= 0`` of ``(t - t_in)^2/(2 tau) + R(t)``.

    Candidates: the quadratic-branch stationary point, the spline-branch
    stationary points, the constant-branch point and both knots.
    """
    _check_semiconvex_step(tau, semiconvexity_modulus(p))
    t_in = np.asarray(t_in, dtype=float)
    s1, s2 = p.s1, p.s2
    inv = 1.0 / tau

    quad = np.clip(t_in / (1.0 + 2.0 * p.alpha * tau), 0.0, s1)

    # spline branch in x = t - s2:  3A x^2 + (2B + 1/tau) x + (s2 - t_in)/tau = 0
    a = 3.0 * p.A
    b = 2.0 * p.B + inv
    c = (s2 - t_in) * inv
    disc = b * b - 4.0 * a * c
    disc = np.where((disc < 0) & (disc > -1e-12 * (b * b + np.abs(4.0 * a * c))), 0.0, disc)
    ok = disc >= 0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    qq = -0.5 * (b + np.copysign(sq, b))
    with np.errstate(divide="ignore", invalid="ignore"):
        x1 = qq / a
        x2 = np.where(qq != 0, c / qq, x1)
    lo, hi = s1 - s2, 0.0
    x1 = np.where(ok, np.clip(x1, lo, hi), lo)
    x2 = np.where(ok, np.clip(x2, lo, hi), lo)

    const = np.maximum(t_in, s2)
    shape = t_in.shape
    cands = np.stack([quad, x1 + s2, x2 + s2, const,
                      np.broadcast_to(s1, shape), np.broadcast_to(s2, shape)])
    objs = 0.5 * inv * (cands - t_in) ** 2 + rms_eval(cands, p)
    return _pick_least(cands, objs)


def prox_trunc_quad_smooth(z, inv_sigma, p):
    """Blockwise prox of ``R(|g|_2)`` via the radial reduction."""
    z = np.asarray(z, dtype=float)
    rho = block_norm(z)
    return _radial(z, scalar_prox_rms(rho, inv_sigma, p), rho)


def sparse_square_modulus(w):
    return 2.0 * w


def sparse_square_eval(g, w, r, e):
    return w * np.abs((g - r) ** 2 - e)


def prox_sparse_square(z, tau, w, r, e):
    """Pointwise minimizer of ``(g - z)^2/(2 tau) + w |(g - r)^2 - e|``."""
    if e <= 0:
        raise ValueError("need e > 0, got %r" % e)
    _check_semiconvex_step(tau, sparse_square_modulus(w))
    z = np.asarray(z, dtype=float)
    inv = 1.0 / tau
    root = math.sqrt(e)
    outer = (z * inv + 2.0 * w * r) / (inv + 2.0 * w)
    inner = (z * inv - 2.0 * w * r) / (inv - 2.0 * w)
    # each stationary point only counts inside its own piece
    outer = np.where(np.abs(outer - r) >= root, outer, r + root)
    inner = np.where(np.abs(inner - r) <= root, inner, r + root)
    shape = z.shape
    cands = np.stack([outer, inner,
                      np.broadcast_to(r - root, shape), np.broadcast_to(r + root, shape)])
    objs = 0.5 * inv * (cands - z) ** 2 + sparse_square_eval(cands, w, r, e)
    return _pick_least(cands, objs)


def prox_binary_concave(z, tau, lam):
    """Prox of ``-lam (2g - 1)^2`` plus the indicator of ``[0, 1]``."""
    if 8.0 * lam * tau >= 1.0:
        raise ValueError("need 8 lam tau < 1, got lam=%g tau=%g" % (lam, tau))
    z = np.asarray(z, dtype=float)
    return np.clip((z - 4.0 * lam * tau) / (1.0 - 8.0 * lam * tau), 0.0, 1.0)


def scalar_prox_oracle(phi, z, tau, lo, hi):
    """Brute-force scalar prox on ``[lo, hi]`` for testing.

    Grid search with step ``(hi - lo) * 1e-4`` followed by ternary search on
    the bracket around the best grid point down to width 1e-8. ``phi`` must
    accept numpy arrays.
    """
    if not hi > lo:
        raise ValueError("invalid interval [%r, %r]" % (lo, hi))
    n = 10001
    grid = np.linspace(lo, hi, n)

    def obj(t):
        return 0.5 / tau * (t - z) ** 2 + phi(t)

    i = int(np.argmin(obj(grid)))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n - 1)]
    while b - a > 1e-8:
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        if obj(m1) <= obj(m2):
            b = m2
        else:
            a = m1
    t = 0.5 * (a + b)
    # keep the grid point if refinement went astray
    return float(t if obj(t) <= obj(grid[i]) else grid[i])


# ---------------------------------------------------------------------------
# terms

class ProxTerm:
    """A function term with energy, prox and semiconvexity modulus.

    ``strong_convexity`` is the constant ``c`` for convex terms (0 if none).
    ``gradient`` returns ``(grad, smooth)`` where ``smooth`` marks entries at
    which the term is differentiable with margin ``KINK_RADIUS``.
    """

    modulus = 0.0
    strong_convexity = 0.0

    def energy(self, x):
        raise NotImplementedError

    def prox(self, z, tau):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError("%s has no gradient" % type(self).__name__)


class ZeroTerm(ProxTerm):
    def energy(self, x):
        return 0.0

    def prox(self, z, tau):
        return np.array(z, dtype=float, copy=True)

    def gradient(self, x):
        return np.zeros_like(x, dtype=float), np.ones(np.shape(x), dtype=bool)


class QuadraticTerm(ProxTerm):
    """``weight/2 |x|^2``; a negative weight gives a concave term."""

    def __init__(self, weight):
        self.weight = float(weight)
        self.modulus = max(0.0, -self.weight)
        self.strong_convexity = max(0.0, self.weight)

    def energy(self, x):
        return 0.5 * self.weight * float(np.vdot(x, x))

    def prox(self, z, tau):
        _check_semiconvex_step(tau, self.modulus)
        return np.asarray(z, dtype=float) / (1.0 + tau * self.weight)

    def gradient(self, x):
        return self.weight * np.asarray(x, dtype=float), np.ones(np.shape(x), dtype=bool)


class L2BoxTerm(ProxTerm):
    """``c/2 |u - f|^2`` with an optional box constraint."""

    def __init__(self, c, f, box=(0.0, 1.0)):
        self.c = float(c)
        self.f = np.asarray(f, dtype=float)
        self.box = box
        self.strong_convexity = self.c

    def energy(self, u):
        if self.box is not None and (np.any(u < self.box[0]) or np.any(u > self.box[1])):
            return np.inf
        return 0.5 * self.c * float(np.sum((u - self.f) ** 2))

    def prox(self, z, tau):
        return prox_l2_box(z, tau, self.c, self.f, self.box)


class InpaintTerm(ProxTerm):
    """Indicator pinning ``u`` to ``f`` where ``known`` is true."""

    def __init__(self, f, known):
        self.f = np.asarray(f, dtype=float)
        self.known = np.asarray(known, dtype=bool)

    def energy(self, u):
        return 0.0 if np.array_equal(u[self.known], self.f[self.known]) else np.inf

    def prox(self, z, tau):
        return prox_inpaint(z, self.f, self.known)


class DeconvTerm(ProxTerm):
    """``|k * u - f|^2`` for a periodic Gaussian kernel."""

    def __init__(self, f, kernel_std):
        self.f = np.asarray(f, dtype=float)
        self.kernel_std = float(kernel_std)
        self.transfer = deconv_transfer(self.f.shape, kernel_std)

    def blur(self, u):
        return np.fft.ifft2(np.fft.fft2(u) * self.transfer).real

    def energy(self, u):
        return float(np.sum((self.blur(u) - self.f) ** 2))

    def prox(self, z, tau):
        return prox_deconv_quadratic(z, tau, self.kernel_std, self.f, transfer=self.transfer)


class ShrinkSharpenTerm(ProxTerm):
    """``|g|_{2,1} - omega/2 |g|_{2,2}^2`` on gradient fields."""

    def __init__(self, omega=0.0):
        self.omega = float(omega)
        self.modulus = self.omega

    def energy(self, g):
        return float(np.sum(block_norm(g))) - 0.5 * self.omega * float(np.sum(g * g))

    def prox(self, z, tau):
        return prox_shrink_sharpen(z, tau, self.omega)

    def gradient(self, g):
        rho = block_norm(g)
        unit = np.divide(g, rho, out=np.zeros_like(g), where=rho > 0)
        smooth = np.broadcast_to(rho > KINK_RADIUS, g.shape)
        return unit - self.omega * g, smooth


class TruncQuadTerm(ProxTerm):
    """``sum_x R(|g(x)|_2)`` with the smoothed truncated quadratic ``R``."""

    def __init__(self, params):
        self.params = params
        self.modulus = semiconvexity_modulus(params)

    def energy(self, g):
        return float(np.sum(rms_eval(block_norm(g), self.params)))

    def prox(self, z, tau):
        return prox_trunc_quad_smooth(z, tau, self.params)

    def gradient(self, g):
        rho = block_norm(g)
        scale = np.divide(rms_derivative(rho, self.params), rho,
                          out=np.full_like(rho, 2.0 * self.params.alpha), where=rho > 0)
        return scale * g, np.ones(g.shape, dtype=bool)


class SparseSquareTerm(ProxTerm):
    """``w * sum |(g - r)^2 - e|``, nonsmooth at ``g = r +- sqrt(e)``."""

    def __init__(self, w, r, e):
        if e <= 0:
            raise ValueError("need e > 0, got %r" % e)
        self.w, self.r, self.e = float(w), float(r), float(e)
        self.modulus = sparse_square_modulus(self.w)

    def energy(self, g):
        return float(np.sum(sparse_square_eval(g, self.w, self.r, self.e)))

    def prox(self, z, tau):
        return prox_sparse_square(z, tau, self.w, self.r, self.e)

    def gradient(self, g):
        d = g - self.r
        root = math.sqrt(self.e)
        smooth = np.abs(np.abs(d) - root) > KINK_RADIUS
        return self.w * np.sign(d * d - self.e) * 2.0 * d, smooth


class BinaryConcaveTerm(ProxTerm):
    """``-lam sum (2g - 1)^2`` plus the indicator of ``[0, 1]``; ``8 lam``-semiconvex."""

    def __init__(self, lam):
        if lam <= 0:
            raise ValueError("need lam > 0, got %r" % lam)
        self.lam = float(lam)
        self.modulus = 8.0 * self.lam

    def energy(self, g):
        if np.any(g < 0) or np.any(g > 1):
            return np.inf
        return -self.lam * float(np.sum((2.0 * g - 1.0) ** 2))

    def prox(self, z, tau):
        return prox_binary_concave(z, tau, self.lam)

    def gradient(self, g):
        smooth = (g > KINK_RADIUS) & (g < 1.0 - KINK_RADIUS)
        return -4.0 * self.lam * (2.0 * g - 1.0), smooth


class BlockTerm(ProxTerm):
    """Separable sum of terms over the blocks of a :class:`~.linops.Stack` range."""

    def __init__(self, stack, terms):
        if len(stack.ops) != len(terms):
            raise ValueError("need one term per stacked operator")
        self.stack = stack
        self.terms = list(terms)
        self.modulus = max(t.modulus for t in self.terms)

    def energy(self, y):
        return sum(t.energy(p) for t, p in zip(self.terms, self.stack.split(y)))

    def prox(self, z, tau):
        _check_semiconvex_step(tau, self.modulus)
        return self.stack.concat(
            [t.prox(p, tau) for t, p in zip(self.terms, self.stack.split(z))])

    def gradient(self, y):
        parts = [t.gradient(p) for t, p in zip(self.terms, self.stack.split(y))]
        return (self.stack.concat([g for g, _ in parts]),
                self.stack.concat([np.broadcast_to(m, g.shape) for g, m in parts]))
