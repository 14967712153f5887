"""
Color denoising with illumination correction
============================================

The data term pulls each pixel towards the observed color; the channel mean
is pushed towards either of two brightness levels by a nonconvex penalty
that is flat near r - sqrt(e) and r + sqrt(e). The sorted intensities of the
result show how many pixels land on those plateaus.
"""
import os

from semiconvex_pdhg import imgio, models
from semiconvex_pdhg.solver import StopRule, solve

out = "demo-out/illumination"
os.makedirs(out, exist_ok=True)

f = imgio.add_gaussian_noise(imgio.synthetic_color_image(64), 0.1, seed=0)
probe = models.build_illumination(f, 30.0, 0.0)
levels = (0.6 - 0.3, 0.6 + 0.3)

for frac in (0.0, 0.95):
    omega = models.illumination_omega(30.0, frac, probe.norm_K)
    m = models.build_illumination(f, 30.0, omega, r=0.6, e=0.09)
    # 2000 steps is enough to see the trend; the CLI runs longer
    state, trace = solve(m, m.default_steps(), StopRule(max_iter=2000, tol=1e-6))
    curve = imgio.sorted_intensity_curve(state.u)
    print("omega=%.4f: %.2f%% of samples near %.1f or %.1f" % (
        omega, 100 * imgio.plateau_fraction(curve, levels), *levels))
    imgio.write_image(state.u, os.path.join(out, "result_omega%03d.ppm" % int(100 * frac)))
    imgio.write_text(os.path.join(out, "curve_%03d.csv" % int(100 * frac)),
                     imgio.curve_csv(curve))
