"""
Watching the O(1/n) rate
========================

For denoise+sharpen with sigma = 2 omega the distance to the minimizer
satisfies |u^n - u_hat|^2 <= C / n. We compute u_hat with a long run and
look at n |u^n - u_hat|^2 over a window.
"""
from semiconvex_pdhg import cli

u_hat = None
for theta in (0.0, 1.0):
    rep, u_hat = cli.rate_experiment(size=32, theta=theta, reference_iter=20000,
                                     window=(10, 2000), u_hat=u_hat)
    print("theta=%.0f  C_10=%.3e  sup C_n=%.3e  bounded by 3 C_10: %s"
          % (theta, rep.start, rep.sup, rep.bounded))
    for n in (10, 100, 1000, 2000):
        print("   n=%5d  C_n=%.3e" % (n, rep.C[n - 10]))
