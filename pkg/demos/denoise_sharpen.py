"""
Denoising with a sharpening term
================================

TV denoising with an extra concave term -omega/2 |grad u|^2 that rewards
large gradients. With c > omega |grad|^2 the whole energy stays strongly
convex, and with sigma = 2 omega the method converges. Applying the model
repeatedly to its own output gives an enhanced TV flow.
"""
import os

import numpy as np

from semiconvex_pdhg import imgio, models
from semiconvex_pdhg.solver import StopRule, solve

out = "demo-out/denoise_sharpen"
os.makedirs(out, exist_ok=True)

clean = imgio.synthetic_image(64)
noisy = imgio.add_gaussian_noise(clean, 0.1, seed=0)

# omega_frac sets omega as a fraction of the largest admissible value c/|K|^2
for frac in (0.0, 0.7):
    m = models.build_denoise_sharpen(noisy, c=30.0, omega_frac=frac)
    u, trace = solve(m, m.default_steps(), StopRule(max_iter=3000, tol=1e-6))
    err = np.sqrt(np.mean((u.u - clean) ** 2))
    print("omega_frac=%.1f  omega=%.3f  %4d iterations (%s)  rms error %.4f"
          % (frac, m.omega, len(trace), trace.stop_reason, err))
    imgio.write_image(u.u, os.path.join(out, "result_%02d.pgm" % int(10 * frac)))
imgio.write_image(noisy, os.path.join(out, "noisy.pgm"))

# The flow: each outer step denoises the previous result. Plain TV loses
# contrast at every step; the sharpening term slows that down.
for frac in (0.0, 0.7):
    builder = lambda f, frac=frac: models.build_denoise_sharpen(f, 30.0, frac)
    jumps = [u[0, 32, 40] - u[0, 32, 20] for u in models.flow_iterate(builder, noisy, 4)]
    print("flow omega_frac=%.1f, edge jump per step: %s"
          % (frac, " ".join("%.3f" % j for j in jumps)))
