"""Command line front end: ``pdhg <experiment> [options]``.

Every run prints a summary of ``key=value`` lines on stdout and writes its
images, the convergence trace (``trace.csv``) and ``summary.txt`` to
``--out-dir``. Options can also come from a JSON run file (``--config``);
flags given on the command line win. Exit codes: 0 ok, 2 bad
configuration, 3 diverged, 4 I/O failure.
"""
import argparse
from dataclasses import dataclass, fields, replace
import json
import logging
import math
import os
import sys
import time

import numpy as np

from . import imgio, models, toy
from .prox import TruncQuadParams
from .solver import StepSchedule, StepSizeError, StopRule, check_critical, check_steps, solve

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_IO = 0, 2, 3, 4

EXPERIMENTS = ("denoise-sharpen", "illum", "ms-denoise", "ms-inpaint", "dither",
               "toy-prop", "toy-example", "rate-check")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """All knobs of one run; ``None`` means "experiment default"."""

    experiment: str = ""
    seed: int = 0
    out_dir: str = "pdhg-out"
    input: str = None
    mask: str = None
    size: int = None
    noise: float = None
    format: str = "pnm"
    max_iter: int = 10000
    tol: float = 1e-6
    init: str = None
    theta: float = 1.0
    sigma: float = None
    tau: float = None
    adaptive_gamma: float = None
    sigma0: float = None
    tau0_rule: str = "reciprocal"
    allow_unsafe: bool = False
    timing: bool = False
    # model parameters
    c: float = None
    omega_frac: float = None
    r: float = 0.6
    e: float = 0.09
    alpha: float = None
    lam: float = None
    eps0: float = None
    kernel_std: float = 1.75
    border: int = 2
    outer_steps: int = 1
    baseline: bool = False
    # toys
    steps: int = None
    q0: str = "-1,1"
    start: str = "eig2"
    reference_iter: int = 100000
    window: str = "10,5000"


_DEFAULTS = {
    "denoise-sharpen": dict(size=64, noise=0.1, c=30.0, omega_frac=0.7, init="input"),
    "illum": dict(size=64, noise=0.1, c=30.0, omega_frac=0.95, init="input"),
    "ms-denoise": dict(size=64, noise=0.1, alpha=10.0, lam=0.1, eps0=0.5, init="input"),
    "ms-inpaint": dict(size=127, noise=0.0, alpha=96.82, lam=0.5, eps0=0.9, init="zero",
                       adaptive_gamma=2.0, sigma0=None),
    "dither": dict(size=64, noise=0.0, lam=0.01, init="random", max_iter=500),
    "toy-prop": dict(sigma=1.5, tau=1.0, c=100.0, steps=60, theta=0.0),
    "toy-example": dict(sigma=1.5, c=3.0, steps=60, theta=0.0),
    "rate-check": dict(size=32, noise=0.1, c=30.0, omega_frac=0.7, theta=1.0),
}


def defaults(experiment):
    """Default :class:`RunConfig` of an experiment (the reference parameters of each experiment)."""
    if experiment not in _DEFAULTS:
        raise ConfigError("unknown experiment %r" % experiment)
    return replace(RunConfig(experiment=experiment), **_DEFAULTS[experiment])


def load_run_file(path):
    """Fields of a JSON run file; unknown keys are an error."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("run file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError("unknown config fields: %s" % ", ".join(unknown))
    return data


def _floats(text, n=None):
    try:
        vals = [float(x) for x in str(text).split(",")]
    except ValueError:
        raise ConfigError("expected comma separated numbers, got %r" % text)
    if n is not None and len(vals) != n:
        raise ConfigError("expected %d numbers, got %r" % (n, text))
    return vals


# ---------------------------------------------------------------------------
# inputs

def _load_input(cfg, rng, color=False):
    """Clean and observed image; synthetic when no ``--input`` is given."""
    if cfg.input:
        clean = imgio.read_image(cfg.input)
    elif color:
        clean = imgio.synthetic_color_image(cfg.size)
    else:
        clean = imgio.synthetic_image(cfg.size)
    if color and clean.shape[0] != 3:
        raise ConfigError("this experiment needs a color image")
    if not color and clean.shape[0] == 3 and cfg.experiment in ("dither", "ms-inpaint"):
        clean = clean.mean(axis=0, keepdims=True)
    noise = cfg.noise or 0.0
    observed = imgio.add_gaussian_noise(clean, noise, rng) if noise > 0 else clean
    return clean, observed


def _initial(cfg, model, rng):
    if cfg.init in (None, "input"):
        return model.f.copy() if cfg.experiment != "ms-inpaint" else model.u0
    if cfg.init == "zero":
        return np.zeros_like(model.f)
    if cfg.init == "random":
        u = rng.random(model.f.shape)
        # dithering starts from a binary image
        return (u > 0.5).astype(float) if cfg.experiment == "dither" else u
    raise ConfigError("unknown init %r" % cfg.init)


def _schedule(cfg, model):
    """Step schedule and its regime check; raises ConfigError when unsafe."""
    L2 = model.norm_K ** 2
    w = model.omega
    if cfg.adaptive_gamma is not None:
        if cfg.adaptive_gamma <= 0:
            raise ConfigError("adaptive gamma must be positive")
        if w <= 0:
            raise ConfigError("the adaptive schedule needs omega > 0")
        s0 = cfg.sigma0 if cfg.sigma0 is not None else 1.05 * w
        if cfg.tau0_rule == "reciprocal":
            t0 = 1.0 / (s0 * L2)
        elif cfg.tau0_rule == "literal":
            t0 = L2 / s0
        else:
            raise ConfigError("tau0 rule must be 'reciprocal' or 'literal'")
        rep = check_steps(s0, t0, w, model.norm_K)
        if not rep.well_defined:
            raise ConfigError("sigma0=%g does not exceed omega=%g" % (s0, w))
        return StepSchedule.adaptive(cfg.adaptive_gamma, s0, t0, 2.0 * w), rep
    base = model.default_steps(cfg.theta)
    sigma = cfg.sigma if cfg.sigma is not None else base.sigma
    tau = cfg.tau if cfg.tau is not None else 1.0 / (sigma * L2)
    try:
        sched = StepSchedule.constant(sigma, tau, cfg.theta)
    except ValueError as exc:
        raise ConfigError(str(exc))
    strict = model.regime == "theorem" and not cfg.allow_unsafe
    try:
        rep = check_steps(sigma, tau, w, model.norm_K, strict=strict)
    except StepSizeError as exc:
        raise ConfigError("%s (pass --allow-unsafe to run anyway)" % exc)
    if not rep.well_defined and not cfg.allow_unsafe:
        raise ConfigError("sigma=%g does not exceed omega=%g" % (sigma, w))
    return sched, rep


def _build(cfg, observed):
    name = cfg.experiment
    if name == "denoise-sharpen":
        return models.build_denoise_sharpen(observed, cfg.c, cfg.omega_frac)
    if name == "illum":
        probe = models.build_illumination(observed, cfg.c, 0.0, cfg.r, cfg.e)
        omega = models.illumination_omega(cfg.c, cfg.omega_frac, probe.norm_K)
        return models.build_illumination(observed, cfg.c, omega, cfg.r, cfg.e)
    if name == "ms-denoise":
        return models.build_ms_denoise(observed, TruncQuadParams(cfg.alpha, cfg.lam, cfg.eps0))
    if name == "dither":
        return models.build_dithering(observed, cfg.lam, cfg.kernel_std)
    raise ConfigError("no model for %r" % name)


# ---------------------------------------------------------------------------
# runs

class Summary(dict):
    def lines(self):
        out = []
        for k, v in self.items():
            if isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = repr(v)
            out.append("%s=%s" % (k, v))
        return out


def _ext(cfg, channels):
    if cfg.format == "png":
        return ".png"
    if cfg.format != "pnm":
        raise ConfigError("format must be 'pnm' or 'png'")
    return ".ppm" if channels == 3 else ".pgm"


def _solve_and_report(cfg, model, u0, summary, schedule, report):
    stop = StopRule(max_iter=cfg.max_iter, tol=cfg.tol)
    t0 = time.perf_counter()
    state, trace = solve(model, schedule, stop, u0=u0)
    wall = 1e3 * (time.perf_counter() - t0)
    tau = trace.records[-1].tau if trace.records else schedule.tau
    crit = check_critical(state, model, tau)
    summary.update(omega=float(model.omega), sigma=float(schedule.sigma),
                   tau=float(schedule.tau), theta=float(schedule.theta),
                   well_defined=report.well_defined, theorem_regime=report.theorem_regime)
    summary.update(iterations=len(trace), stop_reason=trace.stop_reason,
                   diverged=trace.diverged, energy=float(model.energy(state.u)),
                   split_energy=float(model.G.energy(state.u) + model.F.energy(state.g)))
    summary.update(crit.as_dict())
    summary["wall_ms"] = round(wall, 1)
    return state, trace


def _run_model(cfg, arts, summary):
    rng = np.random.default_rng(cfg.seed)
    color = cfg.experiment == "illum"
    clean, observed = _load_input(cfg, rng, color)
    model = _build(cfg, observed)
    ext = _ext(cfg, observed.shape[0])
    schedule, report = _schedule(cfg, model)
    u0 = _initial(cfg, model, rng)
    summary.update(experiment=cfg.experiment, seed=cfg.seed, init=cfg.init)

    if cfg.experiment == "denoise-sharpen" and cfg.outer_steps > 1:
        builder = lambda f: models.build_denoise_sharpen(f, cfg.c, cfg.omega_frac)
        try:
            outs = models.flow_iterate(builder, observed, cfg.outer_steps, schedule,
                                       StopRule(cfg.max_iter, cfg.tol), cfg.theta)
        except models.FlowDiverged as exc:
            summary.update(diverged=True, outer_completed=exc.step)
            return EXIT_DIVERGED
        for k, u in enumerate(outs, 1):
            arts.images["flow_%02d" % k] = _write(arts, "flow_%02d%s" % (k, ext), u)
        summary.update(outer_steps=len(outs), diverged=False,
                       contrast=float(outs[-1].max() - outs[-1].min()))
        return EXIT_OK

    state, trace = _solve_and_report(cfg, model, u0, summary, schedule, report)
    arts.images["input"] = _write(arts, "input" + ext, observed)
    arts.images["result"] = _write(arts, "result" + ext, state.u)
    arts.trace = _write_text(arts, "trace.csv", trace.to_csv(timing=cfg.timing))

    if cfg.experiment == "dither":
        u = state.u
        summary["binary_fraction"] = float(np.mean(np.minimum(np.abs(u), np.abs(u - 1)) <= 0.05))
        arts.images["threshold"] = _write(arts, "threshold" + ext, (u > 0.5).astype(float))
    if cfg.experiment == "illum":
        curve = imgio.sorted_intensity_curve(state.u)
        levels = (cfg.r - math.sqrt(cfg.e), cfg.r + math.sqrt(cfg.e))
        summary["plateau_fraction"] = imgio.plateau_fraction(curve, levels)
        arts.extra["curve"] = _write_text(arts, "curve.csv", imgio.curve_csv(curve))
        if cfg.baseline:
            base = models.build_illumination(observed, cfg.c, 0.0, cfg.r, cfg.e)
            bstate, _ = solve(base, base.default_steps(cfg.theta),
                              StopRule(cfg.max_iter, cfg.tol), record_energy=False)
            bcurve = imgio.sorted_intensity_curve(bstate.u)
            summary["baseline_plateau_fraction"] = imgio.plateau_fraction(bcurve, levels)
            arts.extra["baseline_curve"] = _write_text(arts, "baseline_curve.csv",
                                                       imgio.curve_csv(bcurve))
    return EXIT_DIVERGED if trace.diverged else EXIT_OK


def _run_ms_inpaint(cfg, arts, summary):
    if cfg.input:
        f = imgio.read_image(cfg.input)[:1]
        if not cfg.mask:
            raise ConfigError("--input for ms-inpaint needs --mask")
        known = imgio.read_image(cfg.mask)[:1] > 0.5
    else:
        f, known = imgio.make_cracktip_mask(cfg.size, cfg.border)
    model = models.build_ms_inpaint(f, known, TruncQuadParams(cfg.alpha, cfg.lam, cfg.eps0))
    schedule, report = _schedule(cfg, model)
    rng = np.random.default_rng(cfg.seed)
    u0 = np.where(known, f, _initial(cfg, model, rng))
    summary.update(experiment=cfg.experiment, seed=cfg.seed, init=cfg.init,
                   unknown_pixels=int((~known).sum()))
    ext = _ext(cfg, 1)
    state, trace = _solve_and_report(cfg, model, u0, summary, schedule, report)
    if schedule.mode == "adaptive":
        sig = trace.column("sigma")
        frozen = np.flatnonzero(sig >= schedule.sigma_freeze)
        summary["freeze_iter"] = int(frozen[0]) + 1 if frozen.size else -1
    arts.images["input"] = _write(arts, "input" + ext, np.where(known, f, 0.0))
    arts.images["result"] = _write(arts, "result" + ext, state.u)
    arts.trace = _write_text(arts, "trace.csv", trace.to_csv(timing=cfg.timing))
    return EXIT_DIVERGED if trace.diverged else EXIT_OK


def _toy_csv(tr):
    lines = ["n,g_norm,u_norm"]
    for n, (g, u) in enumerate(zip(tr.g, tr.u)):
        lines.append("%d,%r,%r" % (n, float(np.linalg.norm(g)), float(np.linalg.norm(u))))
    return "\n".join(lines) + "\n"


def _run_toy_prop(cfg, arts, summary):
    try:
        A = toy.divergence_matrix(cfg.sigma, cfg.tau, cfg.c)
    except ValueError as exc:
        raise ConfigError(str(exc))
    d1, d2 = toy.eigvals_2x2(A)
    complex_pair = toy.spectral_radius(A) != max(abs(d1), abs(d2))
    if cfg.start in ("eig1", "eig2") and not complex_pair:
        z0 = toy.eigvec_2x2(A, d1 if cfg.start == "eig1" else d2)
    elif cfg.start in ("eig1", "eig2"):
        raise ConfigError("complex eigenvalues: give an explicit --start g0,u0")
    else:
        z0 = np.array(_floats(cfg.start, 2))
    tr = toy.run_toy_prop(cfg.sigma, cfg.tau, cfg.c, z0, cfg.steps)
    norms = tr.norms()
    summary.update(experiment=cfg.experiment, sigma=cfg.sigma, tau=cfg.tau, c=cfg.c,
                   d1=float(d1), d2=float(d2), spectral_radius=toy.spectral_radius(A),
                   iterations=len(tr) - 1, diverged=tr.diverged,
                   matched_closed_form=tr.matched_closed_form,
                   max_rel_error=tr.max_rel_error, final_norm=float(norms[-1]),
                   max_norm=float(norms.max()))
    arts.trace = _write_text(arts, "trace.csv", _toy_csv(tr))
    return EXIT_DIVERGED if tr.diverged else EXIT_OK


def _run_toy_example(cfg, arts, summary):
    try:
        tr = toy.run_toy_example(cfg.sigma, _floats(cfg.q0, 2), cfg.steps, c=cfg.c,
                                 tau=cfg.tau)
    except ValueError as exc:
        raise ConfigError(str(exc))
    norms = tr.norms()
    summary.update(experiment=cfg.experiment, sigma=cfg.sigma, c=cfg.c,
                   iterations=len(tr) - 1, diverged=tr.diverged,
                   matched_closed_form=tr.matched_closed_form,
                   max_rel_error=tr.max_rel_error,
                   u_identically_zero=all(np.all(u == 0) for u in tr.u),
                   final_g_norm=float(norms[-1]))
    arts.trace = _write_text(arts, "trace.csv", _toy_csv(tr))
    return EXIT_DIVERGED if tr.diverged else EXIT_OK


def rate_experiment(size=32, c=30.0, omega_frac=0.7, theta=1.0, noise=0.1, seed=0,
                    reference_iter=100000, window=(10, 5000), u_hat=None):
    """Denoise+sharpen ``C/n`` experiment; returns ``(report, u_hat)``.

    ``u_hat`` comes from a ``reference_iter``-step run unless supplied, so
    one reference can serve several ``theta``.
    """
    from .solver import iterate
    f = imgio.add_gaussian_noise(imgio.synthetic_image(size), noise, seed)
    model = models.build_denoise_sharpen(f, c, omega_frac)
    if u_hat is None:
        u_hat = reference_solution(model, reference_iter)
    sched = model.default_steps(theta)

    def us():
        yield model.u0
        for state, _ in iterate(model, sched):
            yield state.u

    return toy.rate_check(us(), u_hat, window), u_hat


def reference_solution(model, n, theta=1.0, sigma_factor=2.2):
    """``u^n`` after ``n`` constant steps with ``sigma = sigma_factor * omega``.

    A factor above 2 also makes ``g`` converge, which gives a far more
    accurate limit than the boundary choice ``sigma = 2 omega``.
    """
    from .solver import iterate
    if model.omega > 0:
        sigma = sigma_factor * model.omega
        sched = StepSchedule.constant(sigma, 1.0 / (sigma * model.norm_K ** 2), theta)
    else:
        sched = model.default_steps(theta)
    state = None
    for state, _ in iterate(model, sched):
        if state.iter >= n:
            break
    return state.u


def _run_rate_check(cfg, arts, summary):
    n0, n1 = (int(x) for x in _floats(cfg.window, 2))
    if not 0 < n0 <= n1:
        raise ConfigError("bad rate window %r" % cfg.window)
    if not 0 < cfg.omega_frac < 1:
        raise ConfigError("omega_frac must lie in (0, 1)")
    report, _ = rate_experiment(cfg.size, cfg.c, cfg.omega_frac, cfg.theta, cfg.noise,
                                cfg.seed, cfg.reference_iter, (n0, n1))
    summary.update(experiment=cfg.experiment, theta=cfg.theta, window_start=n0,
                   window_end=n1, reference_iter=cfg.reference_iter)
    summary.update(report.as_dict())
    lines = ["n,C"] + ["%d,%r" % (n, float(v)) for n, v in zip(report.n, report.C)]
    arts.trace = _write_text(arts, "rate.csv", "\n".join(lines) + "\n")
    return EXIT_OK


def _write(arts, name, u):
    return imgio.write_image(u, os.path.join(arts.out_dir, name))


def _write_text(arts, name, text):
    path = os.path.join(arts.out_dir, name)
    imgio.write_text(path, text)
    return path


_RUNNERS = {
    "toy-prop": _run_toy_prop,
    "toy-example": _run_toy_example,
    "rate-check": _run_rate_check,
    "ms-inpaint": _run_ms_inpaint,
}


def run(cfg, stream=None):
    """Execute ``cfg``; prints the summary and returns ``(exit_code, artifacts)``."""
    stream = sys.stdout if stream is None else stream
    arts = imgio.RunArtifacts(out_dir=cfg.out_dir)
    summary = Summary()
    try:
        if cfg.experiment not in EXPERIMENTS:
            raise ConfigError("unknown experiment %r" % cfg.experiment)
        if cfg.max_iter < 0 or cfg.tol < 0:
            raise ConfigError("max_iter and tol must be nonnegative")
        runner = _RUNNERS.get(cfg.experiment, _run_model)
        with np.errstate(over="ignore", invalid="ignore"):
            code = runner(cfg, arts, summary)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG, arts
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO, arts
    except ValueError as exc:
        # model constructors reject bad parameters with ValueError
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG, arts
    summary["exit_code"] = code
    text = "\n".join(summary.lines()) + "\n"
    stream.write(text)
    try:
        imgio.write_text(os.path.join(arts.out_dir, "summary.txt"), text)
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO, arts
    return code, arts


# ---------------------------------------------------------------------------
# argument parsing

def _parser():
    common = argparse.ArgumentParser(add_help=False)
    a = common.add_argument
    a("--config", help="JSON run file; command line flags take precedence")
    a("--seed", type=int)
    a("--out-dir")
    a("--input", help="input image (PGM/PPM/PNG); synthetic if omitted")
    a("--mask", help="known-pixel mask for ms-inpaint (white = known)")
    a("--size", type=int, help="size of the synthetic input")
    a("--noise", type=float, help="std of the added Gaussian noise")
    a("--format", choices=("pnm", "png"))
    a("--max-iter", type=int)
    a("--tol", type=float)
    a("--init", choices=("input", "zero", "random"))
    a("--theta", type=float)
    a("--sigma", type=float)
    a("--tau", type=float)
    a("--adaptive-gamma", type=float, help="use the accelerated schedule with this gamma")
    a("--sigma0", type=float, help="initial sigma of the adaptive schedule")
    a("--tau0-rule", choices=("reciprocal", "literal"),
      help="tau0 = 1/(sigma0 |grad|^2) (default) or |grad|^2/sigma0")
    a("--allow-unsafe", action="store_const", const=True,
      help="run outside the convergence regime")
    a("--timing", action="store_const", const=True, help="write wall times to the trace")
    a("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pdhg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="experiment", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("denoise-sharpen", "TV denoising with a sharpening term")
    s.add_argument("--c", type=float)
    s.add_argument("--omega-frac", type=float)
    s.add_argument("--outer-steps", type=int, help="> 1 runs the enhanced TV flow")

    s = add("illum", "color denoising with illumination correction")
    s.add_argument("--c", type=float)
    s.add_argument("--omega-frac", type=float)
    s.add_argument("--r", type=float)
    s.add_argument("--e", type=float)
    s.add_argument("--baseline", action="store_const", const=True,
                   help="also run the omega = 0 model and report its plateau fraction")

    for name, help_ in (("ms-denoise", "piecewise smooth Mumford-Shah denoising"),
                        ("ms-inpaint", "Mumford-Shah inpainting (cracktip)")):
        s = add(name, help_)
        s.add_argument("--alpha", type=float)
        s.add_argument("--lambda", dest="lam", type=float)
        s.add_argument("--eps0", type=float)
        if name == "ms-inpaint":
            s.add_argument("--border", type=int)

    s = add("dither", "dithering by deconvolution with a binarizing penalty")
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--kernel-std", type=float)

    s = add("toy-prop", "scalar divergence toy")
    s.add_argument("--c", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--start", help="eig1, eig2 or 'g0,u0'")

    s = add("toy-example", "two-dimensional g-divergence toy")
    s.add_argument("--c", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--q0", help="dual start 'a,b'")

    s = add("rate-check", "empirical C/n rate on denoise+sharpen")
    s.add_argument("--c", type=float)
    s.add_argument("--omega-frac", type=float)
    s.add_argument("--reference-iter", type=int)
    s.add_argument("--window", help="'n0,n1'")
    return p


def parse_config(argv):
    """Merge experiment defaults, the run file and the flags (in that order)."""
    args = _parser().parse_args(argv)
    cfg = defaults(args.experiment)
    if args.config:
        data = load_run_file(args.config)
        if data.get("experiment", cfg.experiment) != cfg.experiment:
            raise ConfigError("run file is for experiment %r" % data["experiment"])
        cfg = replace(cfg, **data)
    flags = {k: v for k, v in vars(args).items()
             if v is not None and k not in ("config", "verbose")}
    cfg = replace(cfg, **flags)
    return cfg, args.verbose


def main(argv=None):
    try:
        cfg, verbose = parse_config(argv)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except (TypeError, json.JSONDecodeError) as exc:
        print("error: bad run file: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    code, _ = run(cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
