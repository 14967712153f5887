"""
Mumford-Shah denoising depends on where you start
=================================================

The truncated quadratic edge penalty is nonconvex, so different starting
points can end at different critical points. We run the same model from the
noisy input and from zero and compare.
"""
import numpy as np

from semiconvex_pdhg import imgio, models
from semiconvex_pdhg.prox import TruncQuadParams
from semiconvex_pdhg.solver import StopRule, check_critical, solve

f = imgio.add_gaussian_noise(imgio.synthetic_image(64), 0.1, seed=0)
m = models.build_ms_denoise(f, TruncQuadParams(alpha=10.0, lam=0.1, eps0=0.5))
steps = m.default_steps()
print("omega=%.3f sigma=%.3f tau=%.5f" % (m.omega, steps.sigma, steps.tau))

results = {}
for name, u0 in (("input", f.copy()), ("zero", np.zeros_like(f))):
    state, trace = solve(m, steps, StopRule(max_iter=5000, tol=1e-6), u0=u0)
    rep = check_critical(state, m, steps.tau)
    results[name] = state.u
    print("start=%-5s %4d iterations, energy %.4f, critical=%s"
          % (name, len(trace), m.energy(state.u), rep.critical))

print("max difference between the two results: %.3f"
      % np.max(np.abs(results["input"] - results["zero"])))
