"""
Why sigma must be at least twice the semiconvexity modulus
==========================================================

Two tiny problems where everything is known in closed form. The first is
scalar: G(u) = c/2 u^2, F(g) = -g^2/2 and K = 1, so F is 1-semiconvex and
the energy is strongly convex for c > 1. With theta = 0 one step of the
method is a 2x2 linear map, and its eigenvalues decide everything.
"""
import numpy as np

from semiconvex_pdhg import toy

c, tau = 100.0, 1.0
for sigma in (1.5, 2.0, 3.0):
    A = toy.divergence_matrix(sigma, tau, c)
    d1, d2 = toy.eigvals_2x2(A)
    print("sigma=%.1f  eigenvalues %+.4f %+.4f  radius %.4f"
          % (sigma, d1, d2, toy.spectral_radius(A)))

# Below 2 the negative eigenvalue leaves the unit disk. Starting on its
# eigenvector, the solver's iterates track A^n z0 and blow up with
# alternating sign.
A = toy.divergence_matrix(1.5, tau, c)
z0 = toy.eigvec_2x2(A, toy.eigvals_2x2(A)[1])
tr = toy.run_toy_prop(1.5, tau, c, z0, 60)
print("\nsigma=1.5: matches A^n z0 to %.1e, diverged=%s after %d steps"
      % (tr.max_rel_error, tr.diverged, len(tr) - 1))
for n in (0, 5, 10, 20):
    print("  n=%2d  g=%+.3e  u=%+.3e" % (n, tr.g[n][0], tr.u[n][0]))

# At sigma = 2 the same start contracts, but slowly: the radius is 0.98.
tr = toy.run_toy_prop(2.0, tau, c, z0, 1000)
u = np.abs([x[0] for x in tr.u])
print("sigma=2.0: |u^n| <= 1e-8 first at n=%d" % np.argmax(u <= 1e-8))

# The second toy has K = (1, 1)^T and starts at u = 0. The primal variable
# never moves, while g^n is a geometric sequence with ratio -1/(sigma - 1):
# it only converges for sigma > 2, even though u is always exact.
print()
for sigma in (1.5, 3.0):
    tr = toy.run_toy_example(sigma, [-1.0, 1.0], 40)
    print("vector toy sigma=%.1f: |g^1|=%.3f |g^20|=%.3e  u stays 0: %s  diverged: %s"
          % (sigma, tr.norms()[1], tr.norms()[20], all(np.all(x == 0) for x in tr.u),
             tr.diverged))
