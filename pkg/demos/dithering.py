"""
Dithering as deconvolution with a binarizing penalty
====================================================

We look for a binary image whose blurred version matches a gray image. The
penalty -lambda (2u - 1)^2 on [0, 1] is concave and pushes pixels to the
ends of the interval.
"""
import os

import numpy as np

from semiconvex_pdhg import imgio, models
from semiconvex_pdhg.solver import StopRule, check_critical, solve

out = "demo-out/dithering"
os.makedirs(out, exist_ok=True)

f = imgio.synthetic_image(64)
m = models.build_dithering(f, lam=0.01, kernel_std=1.75)
steps = m.default_steps()
rng = np.random.default_rng(0)
u0 = (rng.random(f.shape) > 0.5).astype(float)

state, trace = solve(m, steps, StopRule(max_iter=500, tol=1e-6), u0=u0)
binary = np.mean(np.minimum(np.abs(state.u), np.abs(state.u - 1)) <= 0.05)
print("%d iterations, %.1f%% of pixels binary, critical=%s"
      % (len(trace), 100 * binary, check_critical(state, m, steps.tau).critical))
imgio.write_image(f, os.path.join(out, "input.pgm"))
imgio.write_image(state.u, os.path.join(out, "dithered.pgm"))
