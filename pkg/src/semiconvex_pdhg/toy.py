"""Closed-form toy problems for the primal-dual iteration.

Two linear examples with a concave ``F`` whose iterates obey explicit
recurrences, and a rate check for the theorem regime.

Scalar toy: ``G(u) = c/2 u^2``, ``F(g) = -1/2 g^2``, ``K = 1`` and
``theta = 0``. With ``q^n = -g^n`` the step reduces to ``z^{n+1} = A z^n``
for ``z = (g, u)``, see :func:`divergence_matrix`.

Vector toy: ``K = (1, 1)^T``, same ``F`` and ``G``, ``u^0 = 0``. For a
start ``q^0`` orthogonal to ``(1, 1)`` the primal iterate stays at zero and
``g^{n+1} = (-1)^n (sigma - 1)^{-(n+1)} q^0``.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .linops import Identity, MatrixOperator
from .models import Model
from .prox import QuadraticTerm
from .solver import StepSchedule, StopRule, solve

__all__ = [
    "ToyTrace",
    "RateReport",
    "divergence_matrix",
    "eigvals_2x2",
    "eigvec_2x2",
    "spectral_radius",
    "toy_prop_model",
    "toy_example_model",
    "run_toy_prop",
    "run_toy_example",
    "rate_check",
]


@dataclass
class ToyTrace:
    """Iterates ``g^n, u^n`` for ``n = 0..N`` and the two verdicts."""

    g: list = field(default_factory=list)
    u: list = field(default_factory=list)
    diverged: bool = False
    matched_closed_form: bool = False
    max_rel_error: float = 0.0

    def __len__(self):
        return len(self.u)

    def norms(self):
        """``|(g^n, u^n)|`` for every stored step."""
        return np.array([math.hypot(np.linalg.norm(g), np.linalg.norm(u))
                         for g, u in zip(self.g, self.u)])


def divergence_matrix(sigma, tau, c):
    """Matrix ``A`` with ``(g^{n+1}, u^{n+1}) = A (g^n, u^n)`` for the scalar toy."""
    if sigma <= 1:
        raise ValueError("the scalar toy needs sigma > 1, got %r" % sigma)
    if tau <= 0:
        raise ValueError("need tau > 0, got %r" % tau)
    s1 = sigma - 1.0
    it = 1.0 / tau
    return np.array([
        [-1.0 / s1, sigma / s1],
        [-1.0 / ((it + c) * s1), it / (it + c) + sigma / ((it + c) * s1)],
    ])


def eigvals_2x2(A):
    """Eigenvalues ``tr/2 +- sqrt((tr/2)^2 - det)``, larger first.

    A complex pair is returned as ``(re, im)``, i.e. the eigenvalues are
    ``re +- i im``.
    """
    A = np.asarray(A, dtype=float)
    if A.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    half = 0.5 * (A[0, 0] + A[1, 1])
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    disc = half * half - det
    if disc < 0:
        return float(half), math.sqrt(-disc)
    root = math.sqrt(disc)
    return float(half + root), float(half - root)


def spectral_radius(A):
    A = np.asarray(A, dtype=float)
    half = 0.5 * (A[0, 0] + A[1, 1])
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    if half * half - det < 0:
        return math.sqrt(det)
    return float(max(abs(d) for d in eigvals_2x2(A)))


def eigvec_2x2(A, d):
    """Unit eigenvector of ``A`` for the real eigenvalue ``d``.

    Sign convention: the first nonzero component is positive.
    """
    A = np.asarray(A, dtype=float)
    M = A - d * np.eye(2)
    # a null vector of M is orthogonal to its (dominant) row
    row = M[0] if np.linalg.norm(M[0]) >= np.linalg.norm(M[1]) else M[1]
    if np.linalg.norm(row) == 0:
        v = np.array([1.0, 0.0])
    else:
        v = np.array([-row[1], row[0]])
    v /= np.linalg.norm(v)
    first = v[np.flatnonzero(v)[0]]
    return v if first > 0 else -v


def toy_prop_model(c):
    K = Identity((1,))
    return Model("toy-prop", K, QuadraticTerm(-1.0), QuadraticTerm(c), 1.0, c,
                 np.zeros(1), np.zeros(1))


def toy_example_model(c=3.0):
    K = MatrixOperator([[1.0], [1.0]])
    return Model("toy-example", K, QuadraticTerm(-1.0), QuadraticTerm(c), 1.0, c,
                 np.zeros(1), np.zeros(1))


def _collect(model, schedule, n, u0, q0, g0, blowup):
    out = ToyTrace(g=[np.array(g0, dtype=float)], u=[np.array(u0, dtype=float)])

    def grab(prev, state, steps):
        out.g.append(state.g.copy())
        out.u.append(state.u.copy())

    # tol = 0: never stop on small increments, the toys are read step by step
    _, trace = solve(model, schedule, StopRule(max_iter=n, tol=0.0, blowup=blowup),
                     u0=u0, q0=q0, g0=g0, callback=grab, record_energy=False)
    out.diverged = trace.diverged
    return out


def _rel_err(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def run_toy_prop(sigma, tau, c, z0, n, rtol=1e-10, blowup=1e12):
    """Run the solver on the scalar toy from ``z0 = (g^0, u^0)``.

    The dual start is ``q^0 = -g^0`` so that ``q^0`` is the gradient of
    ``F`` at ``g^0``. The trace is compared with ``A^n z^0``; the largest
    relative deviation is stored and ``matched_closed_form`` is set when it
    stays below ``rtol``.
    """
    A = divergence_matrix(sigma, tau, c)
    z0 = np.asarray(z0, dtype=float)
    if z0.shape != (2,):
        raise ValueError("z0 must be a 2-vector (g0, u0)")
    model = toy_prop_model(c)
    tr = _collect(model, StepSchedule.constant(sigma, tau, theta=0.0), n,
                  u0=z0[1:], q0=-z0[:1], g0=z0[:1], blowup=blowup)
    z = z0.copy()
    worst = 0.0
    for k in range(1, len(tr)):
        z = A @ z
        worst = max(worst, _rel_err([tr.g[k][0], tr.u[k][0]], z))
    tr.max_rel_error = worst
    tr.matched_closed_form = worst <= rtol
    return tr


def example_closed_form(sigma, q0, n):
    """``g^n = (-1)^(n-1) (sigma - 1)^(-n) q^0`` for ``n >= 1``."""
    return (-1.0) ** (n - 1) * (sigma - 1.0) ** (-n) * np.asarray(q0, dtype=float)


def run_toy_example(sigma, q0, n, c=3.0, tau=None, rtol=1e-12, blowup=1e12):
    """Run the solver on the vector toy with ``u^0 = 0``, ``g^0 = 0``.

    ``matched_closed_form`` requires ``u^n = 0`` exactly and ``g^n`` within
    ``rtol`` of the closed form for every completed step.
    """
    if sigma <= 1:
        raise ValueError("the vector toy needs sigma > 1, got %r" % sigma)
    if c <= 2:
        raise ValueError("the vector toy needs c > 2, got %r" % c)
    q0 = np.asarray(q0, dtype=float)
    if q0.shape != (2,):
        raise ValueError("q0 must be a 2-vector")
    model = toy_example_model(c)
    if tau is None:
        tau = 1.0 / (sigma * model.norm_K ** 2)
    tr = _collect(model, StepSchedule.constant(sigma, tau, theta=0.0), n,
                  u0=np.zeros(1), q0=q0, g0=np.zeros(2), blowup=blowup)
    worst = 0.0
    u_zero = True
    for k in range(1, len(tr)):
        u_zero = u_zero and bool(np.all(tr.u[k] == 0.0))
        worst = max(worst, _rel_err(tr.g[k], example_closed_form(sigma, q0, k)))
    tr.max_rel_error = worst
    tr.matched_closed_form = u_zero and worst <= rtol
    return tr


@dataclass
class RateReport:
    """``C_n = n |u^n - u_hat|^2`` over a window ``[n0, n1]``."""

    n: np.ndarray
    C: np.ndarray
    start: float
    sup: float
    ratio: float
    bounded: bool
    factor: float = 3.0

    def as_dict(self):
        return {"rate_start": self.start, "rate_sup": self.sup,
                "rate_ratio": self.ratio, "rate_bounded": self.bounded}


def rate_check(iterates, u_hat, window=(10, 5000), factor=3.0):
    """Empirical ``C/n`` check.

    ``iterates`` yields ``u^0, u^1, ...`` (a list or a generator; it is
    consumed only up to the window end). ``bounded`` holds when the largest
    ``C_n`` in the window is at most ``factor`` times ``C_{n0}``; ``ratio``
    is that quotient (``inf`` when ``C_{n0}`` is 0 but a later ``C_n`` is not).
    """
    n0, n1 = window
    if not 0 <= n0 <= n1:
        raise ValueError("empty rate window %r" % (window,))
    u_hat = np.asarray(u_hat, dtype=float)
    ns, cs = [], []
    for n, u in enumerate(iterates):
        if n < n0:
            continue
        if n > n1:
            break
        err = np.asarray(u, dtype=float) - u_hat
        ns.append(n)
        cs.append(n * float(np.vdot(err, err)))
    if not ns or ns[0] != n0:
        raise ValueError("iterates do not reach the rate window start %d" % n0)
    C = np.array(cs)
    start = C[0]
    finite = bool(np.all(np.isfinite(C)))
    sup = float(C.max()) if finite else math.inf
    if sup == 0.0:
        ratio = 1.0
    else:
        ratio = sup / start if start > 0 else math.inf
    bounded = finite and sup <= factor * start
    return RateReport(np.array(ns), C, float(start), sup, ratio, bounded, factor)
