"""Ready-made splittings ``G(u) + F(Ku)`` for the imaging experiments."""
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from . import linops
from .prox import (
    BinaryConcaveTerm,
    BlockTerm,
    DeconvTerm,
    InpaintTerm,
    L2BoxTerm,
    ShrinkSharpenTerm,
    SparseSquareTerm,
    TruncQuadParams,
    TruncQuadTerm,
)
from .solver import StepSchedule, StopRule, check_steps, solve

logger = logging.getLogger(__name__)


@dataclass
class Model:
    """A splitting ``G(u) + F(Ku)``.

    ``omega`` is the semiconvexity modulus of ``F`` and ``c`` a certified
    strong-convexity constant of ``G`` (0 if none). ``u0`` is the default
    starting point. ``regime`` names the step-size regime the model is meant
    to run in: ``"theorem"`` or ``"well_defined"``.
    """

    name: str
    K: linops.LinearMap
    F: object
    G: object
    omega: float
    c: float
    f: np.ndarray
    u0: np.ndarray
    regime: str = "theorem"
    info: dict = field(default_factory=dict)

    def energy(self, u):
        return self.G.energy(u) + self.F.energy(self.K.forward(u))

    @property
    def norm_K(self):
        return self.K.norm_bound

    def default_steps(self, theta=1.0):
        """Constant steps ``sigma = 2 omega``, ``tau = 1/(sigma |K|^2)``.

        For ``omega = 0`` (a convex ``F``) the usual balanced choice
        ``sigma = tau = 1/|K|`` is used instead.
        """
        L = self.norm_K
        sigma = 2.0 * self.omega if self.omega > 0 else 1.0 / L
        return StepSchedule.constant(sigma, 1.0 / (sigma * L * L), theta)

    def check(self, schedule, strict=False):
        return check_steps(schedule.sigma, schedule.tau, self.omega, self.norm_K, strict)


def _as_image(f):
    f = np.asarray(f, dtype=float)
    if f.ndim == 2:
        f = f[None]
    if f.ndim != 3 or not np.all(np.isfinite(f)):
        raise ValueError("expected a finite (k, h, w) or (h, w) image, got shape %s" % (f.shape,))
    return f


def build_denoise_sharpen(f, c=30.0, omega_frac=0.7):
    """Vector TV denoising with a backward-diffusion sharpening term.

    ``c/2 |u - f|^2 + |grad u|_{2,1} - omega/2 |grad u|^2 + box`` with
    ``omega = omega_frac * c / |grad|^2`` so that ``c > omega |K|^2``.
    """
    if c <= 0:
        raise ValueError("need c > 0")
    if not 0.0 <= omega_frac < 1.0:
        raise ValueError("omega_frac must lie in [0, 1), got %r" % omega_frac)
    f = _as_image(f)
    K = linops.Gradient(f.shape)
    omega = omega_frac * c / K.norm_bound ** 2
    return Model("denoise-sharpen", K, ShrinkSharpenTerm(omega), L2BoxTerm(c, f),
                 omega, c, f, f.copy(), info={"omega_frac": omega_frac})


def illumination_omega(c, omega_frac, norm_K):
    """Nonconvex weight ``omega_frac * c / |K|^2``, inside the convex regime."""
    return omega_frac * c / norm_K ** 2


def build_illumination(f, c, omega, r=0.6, e=0.09):
    """Color TV denoising plus ``omega/2 |(mean(u) - r)^2 - e|_1``.

    ``K`` stacks the gradient of each channel and the channel mean; ``F``
    acts blockwise with plain shrinkage on the gradient blocks.
    """
    if e <= 0:
        raise ValueError("need e > 0, got %r" % e)
    if omega < 0 or c <= 0:
        raise ValueError("need c > 0 and omega >= 0")
    f = _as_image(f)
    if f.shape[0] != 3:
        raise ValueError("illumination correction needs a 3-channel image")
    ops = [linops.Gradient(f.shape, channel=ch) for ch in range(3)]
    ops.append(linops.ChannelMean(f.shape))
    K = linops.Stack(ops)
    terms = [ShrinkSharpenTerm(0.0) for _ in range(3)]
    terms.append(SparseSquareTerm(0.5 * omega, r, e))
    F = BlockTerm(K, terms)
    return Model("illum", K, F, L2BoxTerm(c, f), F.modulus, c, f, f.copy(),
                 info={"r": r, "e": e, "weight": omega})


def build_ms_denoise(f, params=TruncQuadParams(10.0, 0.1, 0.5)):
    """Smoothed Mumford-Shah denoising ``sum R(|grad u|) + sum (u - f)^2``.

    The data term has no range constraint; written as ``c/2 |u - f|^2`` it
    has ``c = 2``.
    """
    f = _as_image(f)
    K = linops.Gradient(f.shape)
    F = TruncQuadTerm(params)
    return Model("ms-denoise", K, F, L2BoxTerm(2.0, f, box=None), F.modulus, 2.0, f,
                 f.copy(), info={"params": params})


def build_ms_inpaint(f, known_mask, params=TruncQuadParams(96.82, 0.5, 0.9)):
    """Smoothed Mumford-Shah inpainting; ``known_mask`` true pins ``u = f``.

    ``G`` is an indicator, so there is no strong convexity and only the
    well-definedness regime applies.
    """
    f = _as_image(f)
    known = np.asarray(known_mask, dtype=bool)
    if known.ndim == 2:
        known = np.broadcast_to(known, f.shape).copy()
    if known.shape != f.shape:
        raise ValueError("mask shape %s does not match image %s" % (known.shape, f.shape))
    K = linops.Gradient(f.shape)
    F = TruncQuadTerm(params)
    return Model("ms-inpaint", K, F, InpaintTerm(f, known), F.modulus, 0.0, f,
                 np.where(known, f, 0.0), regime="well_defined",
                 info={"params": params, "known": known})


def build_dithering(f, lam=0.01, kernel_std=1.75):
    """Dithering as deconvolution with a binarizing concave penalty.

    ``G(u) = |k * u - f|^2`` and ``F(u) = -lam sum (2u - 1)^2 + box`` with
    ``K`` the identity; ``F`` is ``8 lam``-semiconvex.
    """
    if lam <= 0:
        raise ValueError("need lam > 0, got %r" % lam)
    f = _as_image(f)
    if f.shape[0] != 1:
        raise ValueError("dithering needs a single-channel image")
    K = linops.Identity(f.shape)
    F = BinaryConcaveTerm(lam)
    return Model("dither", K, F, DeconvTerm(f, kernel_std), F.modulus, 0.0, f,
                 np.zeros_like(f), info={"lam": lam, "kernel_std": kernel_std})


class FlowDiverged(RuntimeError):
    """An inner solve of a flow diverged; ``partial`` holds the finished steps."""

    def __init__(self, step, partial):
        super().__init__("inner solve diverged at outer step %d" % step)
        self.step = step
        self.partial = partial


def flow_iterate(builder, f0, outer_steps, schedule=None, stop=StopRule(), theta=1.0):
    """Iterate a model, replacing the data with the previous solution.

    ``builder`` maps a data image to a :class:`Model`. Returns the list of
    outer solutions ``[u^1, ..., u^outer_steps]``. ``schedule`` defaults to
    each model's :meth:`Model.default_steps`.
    """
    if outer_steps < 1:
        raise ValueError("need at least one outer step")
    out = []
    f = _as_image(f0)
    for k in range(outer_steps):
        model = builder(f)
        steps = schedule if schedule is not None else model.default_steps(theta)
        state, trace = solve(model, steps, stop, record_energy=False)
        if trace.diverged:
            raise FlowDiverged(k, out)
        logger.debug("flow step %d: %d inner iterations (%s)", k, len(trace), trace.stop_reason)
        out.append(state.u)
        f = state.u
    return out


def theorem_condition(model):
    """``c > omega |K|^2``: strong convexity of ``G`` dominates ``F``."""
    return model.c > model.omega * model.norm_K ** 2 and not math.isclose(model.c, 0.0)
