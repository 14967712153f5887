"""Primal-dual iteration for ``G(u) + F(Ku)`` with semiconvex ``F``.

One step maps ``(u, u_bar, g, q)`` to the next iterate::

    g     <- prox_{F/sigma}(K u_bar + q / sigma)
    q     <- q + sigma (K u_bar - g)
    u     <- prox_{tau G}(u - tau K^T q)
    u_bar <- u + theta (u - u_prev)

The g-subproblem is strongly convex as long as ``sigma > omega``, the
semiconvexity modulus of ``F``. After every step ``q`` is a subgradient of
``F`` at ``g``.
"""
from dataclasses import dataclass, field
import csv
import io
import math
import time

import numpy as np

__all__ = [
    "PrimalDualState",
    "StepSchedule",
    "StepReport",
    "StepSizeError",
    "StopRule",
    "TraceRecord",
    "ConvergenceTrace",
    "CriticalReport",
    "pdhg_step",
    "adaptive_update",
    "check_steps",
    "diagnostics",
    "dual_residual",
    "check_critical",
    "iterate",
    "solve",
]

_REL = 1e-12


class StepSizeError(ValueError):
    """Step sizes outside the requested convergence regime."""


@dataclass
class PrimalDualState:
    u: np.ndarray
    u_prev: np.ndarray
    u_bar: np.ndarray
    g: np.ndarray
    q: np.ndarray
    iter: int = 0

    @classmethod
    def initial(cls, K, u0, q0=None, g0=None):
        """Start at ``u0`` with ``u_bar = u_prev = u0``; ``q0`` defaults to zero."""
        u0 = np.array(u0, dtype=float)
        g0 = K.forward(u0) if g0 is None else np.array(g0, dtype=float)
        q0 = np.zeros(K.range_shape) if q0 is None else np.array(q0, dtype=float)
        return cls(u=u0, u_prev=u0.copy(), u_bar=u0.copy(), g=g0, q=q0)

    def is_finite(self):
        return all(np.all(np.isfinite(a)) for a in (self.u, self.g, self.q))

    def max_norm(self):
        return max(float(np.linalg.norm(a)) for a in (self.u, self.g, self.q))


def pdhg_step(state, K, F, G, sigma, tau, theta):
    """One iteration; returns a new state and leaves ``state`` untouched."""
    Ku_bar = K.forward(state.u_bar)
    g = F.prox(Ku_bar + state.q / sigma, 1.0 / sigma)
    q = state.q + sigma * (Ku_bar - g)
    u = G.prox(state.u - tau * K.adjoint(q), tau)
    u_bar = u + theta * (u - state.u)
    return PrimalDualState(u=u, u_prev=state.u, u_bar=u_bar, g=g, q=q, iter=state.iter + 1)


def adaptive_update(sigma, tau, gamma, sigma_freeze):
    """Accelerated step rule ``theta = 1/sqrt(1 + 2 gamma tau)``.

    Returns ``(sigma_next, tau_next, theta)``. Once ``sigma`` has reached
    ``sigma_freeze`` the steps stay fixed and ``theta = 1``.
    """
    if sigma >= sigma_freeze:
        return sigma, tau, 1.0
    theta = 1.0 / math.sqrt(1.0 + 2.0 * gamma * tau)
    return sigma / theta, tau * theta, theta


class StepSchedule:
    """Constant ``(sigma, tau, theta)`` or the adaptive rule with a freeze.

    Iterating a schedule yields ``(sigma_n, tau_n, theta_n)`` for
    ``n = 0, 1, ...``; every iteration starts afresh.
    """

    def __init__(self, mode, sigma, tau, theta=1.0, gamma=0.0, sigma_freeze=math.inf):
        if mode not in ("constant", "adaptive"):
            raise ValueError("unknown schedule mode %r" % mode)
        if sigma <= 0 or tau <= 0:
            raise ValueError("step sizes must be positive")
        if not 0.0 <= theta <= 1.0:
            raise ValueError("theta must lie in [0, 1], got %r" % theta)
        self.mode = mode
        self.sigma = float(sigma)
        self.tau = float(tau)
        self.theta = float(theta)
        self.gamma = float(gamma)
        self.sigma_freeze = float(sigma_freeze)

    @classmethod
    def constant(cls, sigma, tau, theta=1.0):
        return cls("constant", sigma, tau, theta)

    @classmethod
    def adaptive(cls, gamma, sigma0, tau0, sigma_freeze):
        if gamma < 0:
            raise ValueError("gamma must be nonnegative")
        return cls("adaptive", sigma0, tau0, gamma=gamma, sigma_freeze=sigma_freeze)

    def __iter__(self):
        sigma, tau = self.sigma, self.tau
        while True:
            if self.mode == "constant":
                yield sigma, tau, self.theta
                continue
            sigma_next, tau_next, theta = adaptive_update(sigma, tau, self.gamma, self.sigma_freeze)
            yield sigma, tau, theta
            sigma, tau = sigma_next, tau_next

    def __repr__(self):
        if self.mode == "constant":
            return "StepSchedule.constant(sigma=%g, tau=%g, theta=%g)" % (
                self.sigma, self.tau, self.theta)
        return "StepSchedule.adaptive(gamma=%g, sigma0=%g, tau0=%g, sigma_freeze=%g)" % (
            self.gamma, self.sigma, self.tau, self.sigma_freeze)


@dataclass(frozen=True)
class StepReport:
    well_defined: bool
    theorem_regime: bool
    g_convergence_regime: bool

    def as_dict(self):
        return {"well_defined": self.well_defined, "theorem_regime": self.theorem_regime,
                "g_convergence_regime": self.g_convergence_regime}


def check_steps(sigma, tau, omega, norm_K, strict=False):
    """Classify constant step sizes.

    * ``well_defined``: ``sigma > omega``, the g-subproblem has a unique
      solution.
    * ``theorem_regime``: ``sigma >= 2 omega`` and ``tau sigma |K|^2 <= 1``.
    * ``g_convergence_regime``: additionally ``sigma > 2 omega``.

    Comparisons allow a relative slack of 1e-12 so that step sizes computed
    as ``sigma = 2 omega, tau = 1/(sigma |K|^2)`` land inside. With
    ``strict=True`` a step pair outside the theorem regime raises
    :class:`StepSizeError`.
    """
    if min(sigma, tau, omega, norm_K) < 0:
        raise ValueError("step sizes, modulus and operator norm must be nonnegative")
    well_defined = sigma > omega
    coupling_ok = tau * sigma * norm_K ** 2 <= 1.0 + _REL
    theorem = sigma >= 2.0 * omega * (1.0 - _REL) and coupling_ok and sigma > 0
    g_conv = sigma > 2.0 * omega * (1.0 + _REL) and coupling_ok
    report = StepReport(well_defined, theorem, g_conv)
    if strict and not theorem:
        raise StepSizeError(
            "steps outside the convergence regime: sigma=%g (need >= %g), "
            "tau*sigma*|K|^2=%g (need <= 1)" % (sigma, 2 * omega, tau * sigma * norm_K ** 2))
    return report


@dataclass(frozen=True)
class StopRule:
    """Stop after ``max_iter`` steps, when ``max(du, dq) / (1 + |u|) <= tol``,
    or when an iterate becomes non-finite or exceeds ``blowup`` in norm."""

    max_iter: int = 10000
    tol: float = 1e-6
    blowup: float = 1e12


@dataclass(frozen=True)
class TraceRecord:
    iter: int
    du: float
    dq: float
    residual: float
    energy: float
    sigma: float
    tau: float
    theta: float
    wall_ms: float = 0.0


CSV_HEADER = ("iter", "du", "dq", "residual", "energy", "sigma", "tau", "theta", "wall_ms")


@dataclass
class ConvergenceTrace:
    records: list = field(default_factory=list)
    diverged: bool = False
    stop_reason: str = ""

    def __len__(self):
        return len(self.records)

    def append(self, record):
        self.records.append(record)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def to_csv(self, timing=False):
        """CSV text; wall times are written as 0 unless ``timing`` is set so
        that equal runs give byte-identical files."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.records:
            w.writerow([r.iter] + [repr(float(v)) for v in (
                r.du, r.dq, r.residual, r.energy, r.sigma, r.tau, r.theta)]
                + [repr(float(r.wall_ms)) if timing else "0"])
        return buf.getvalue()


def diagnostics(prev, state, K, sigma, tau, theta, energy=None, wall_ms=0.0):
    """Trace record for the step ``prev -> state``.

    The constraint residual ``|g - K u|`` is recomputed from ``u`` rather than
    read off the q-update.
    """
    du = float(np.linalg.norm(state.u - prev.u))
    dq = float(np.linalg.norm(state.q - prev.q))
    residual = float(np.linalg.norm(state.g - K.forward(state.u)))
    e = float(energy(state.u)) if energy is not None else math.nan
    return TraceRecord(state.iter, du, dq, residual, e, float(sigma), float(tau),
                       float(theta), float(wall_ms))


def dual_residual(state, F):
    """``|q - grad F(g)| / (1 + |q|)`` over the entries where ``F`` is smooth."""
    grad, smooth = F.gradient(state.g)
    diff = np.where(smooth, state.q - grad, 0.0)
    return float(np.linalg.norm(diff) / (1.0 + np.linalg.norm(state.q)))


def _rms(a):
    a = np.asarray(a)
    return float(np.linalg.norm(a) / math.sqrt(max(a.size, 1)))


@dataclass(frozen=True)
class CriticalReport:
    constraint: float
    primal: float
    dual: float
    critical: bool

    def as_dict(self):
        return {"constraint_residual": self.constraint, "primal_residual": self.primal,
                "dual_residual": self.dual, "critical": self.critical}


def check_critical(state, model, tau, tol=1e-4):
    """A-posteriori criticality check of the last iterate.

    Residuals (root-mean-square over entries, so ``tol`` does not depend on
    the image size):

    * constraint ``g - K u``,
    * primal ``(u_prev - u) / tau``, which bounds the distance of ``-K^T q``
      to the subdifferential of ``G`` at ``u``,
    * dual ``q - grad F(g)`` at entries where ``F`` is differentiable.
    """
    constraint = _rms(state.g - model.K.forward(state.u))
    primal = _rms((state.u_prev - state.u) / tau)
    try:
        grad, smooth = model.F.gradient(state.g)
        dual = _rms(np.where(smooth, state.q - grad, 0.0))
    except NotImplementedError:
        dual = math.nan
    critical = constraint <= tol and primal <= tol and (math.isnan(dual) or dual <= tol)
    return CriticalReport(constraint, primal, dual, critical)


def iterate(model, schedule, u0=None, q0=None, g0=None):
    """Endless generator of ``(state, (sigma, tau, theta))`` after each step."""
    state = PrimalDualState.initial(model.K, model.u0 if u0 is None else u0, q0, g0)
    for sigma, tau, theta in schedule:
        state = pdhg_step(state, model.K, model.F, model.G, sigma, tau, theta)
        yield state, (sigma, tau, theta)


def solve(model, schedule, stop=StopRule(), u0=None, q0=None, g0=None,
          callback=None, record_energy=True):
    """Run the iteration until ``stop`` fires.

    ``model`` needs ``K``, ``F``, ``G``, ``u0`` and ``energy``. ``callback``,
    if given, is called as ``callback(prev, state, steps)`` after every step.
    Returns the final state and the trace; a blow-up sets ``trace.diverged``
    instead of raising.
    """
    state = PrimalDualState.initial(model.K, model.u0 if u0 is None else u0, q0, g0)
    trace = ConvergenceTrace()
    if stop.max_iter <= 0:
        trace.stop_reason = "max_iter"
        return state, trace
    energy = model.energy if record_energy else None
    t0 = time.perf_counter()
    steps = iter(schedule)
    while True:
        sigma, tau, theta = next(steps)
        prev = state
        with np.errstate(over="ignore", invalid="ignore"):
            state = pdhg_step(prev, model.K, model.F, model.G, sigma, tau, theta)
            rec = diagnostics(prev, state, model.K, sigma, tau, theta, energy,
                              1e3 * (time.perf_counter() - t0))
        trace.append(rec)
        if callback is not None:
            callback(prev, state, (sigma, tau, theta))
        if not state.is_finite() or state.max_norm() > stop.blowup:
            trace.diverged = True
            trace.stop_reason = "diverged"
            break
        if max(rec.du, rec.dq) / (1.0 + np.linalg.norm(state.u)) <= stop.tol:
            trace.stop_reason = "converged"
            break
        if state.iter >= stop.max_iter:
            trace.stop_reason = "max_iter"
            break
    return state, trace

