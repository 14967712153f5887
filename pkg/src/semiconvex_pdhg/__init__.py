"""Primal-dual hybrid gradient for ``G(u) + F(Ku)`` with semiconvex ``F``.

Modules
-------
linops  linear operators with certified norm bounds
prox    proximal maps with energies and semiconvexity moduli
solver  the iteration, step-size schedules, traces, criticality check
models  the imaging models (denoise+sharpen, illumination, Mumford-Shah, dithering)
toy     closed-form toy problems and the rate check
imgio   image/trace I/O, synthetic inputs, seeded noise
cli     the ``pdhg`` command
"""
from .linops import (ChannelMean, GaussianConvolution, Gradient, Identity, LinearMap,
                     MatrixOperator, Stack, op_norm_estimate)
from .prox import TruncQuadParams, scalar_prox_oracle, semiconvexity_modulus
from .solver import (ConvergenceTrace, PrimalDualState, StepSchedule, StopRule,
                     check_critical, check_steps, pdhg_step, solve)
from .models import (Model, build_denoise_sharpen, build_dithering, build_illumination,
                     build_ms_denoise, build_ms_inpaint, flow_iterate)

__version__ = "0.1.0"

__all__ = [
    "LinearMap", "Identity", "MatrixOperator", "Gradient", "GaussianConvolution",
    "ChannelMean", "Stack", "op_norm_estimate",
    "TruncQuadParams", "semiconvexity_modulus", "scalar_prox_oracle",
    "PrimalDualState", "StepSchedule", "StopRule", "ConvergenceTrace",
    "pdhg_step", "solve", "check_steps", "check_critical",
    "Model", "build_denoise_sharpen", "build_illumination", "build_ms_denoise",
    "build_ms_inpaint", "build_dithering", "flow_iterate",
]
