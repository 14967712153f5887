import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semiconvex_pdhg import prox as P
from semiconvex_pdhg.linops import GaussianConvolution
from semiconvex_pdhg.prox import TruncQuadParams, scalar_prox_oracle

import oracle_cases

MS = TruncQuadParams(10.0, 0.1, 0.5)
CRACK = TruncQuadParams(96.82, 0.5, 0.9)


# ---------------------------------------------------------------------------
# oracle sanity

def test_oracle_zero_function_returns_z():
    assert scalar_prox_oracle(lambda t: 0.0 * t, 0.3, 0.7, -1, 1) == pytest.approx(0.3, abs=1e-8)


@pytest.mark.parametrize("z", [-2.0, -0.4, 0.1, 0.9, 3.0])
def test_oracle_reproduces_soft_thresholding(z):
    tau = 0.5
    expect = math.copysign(max(abs(z) - tau, 0.0), z)
    assert scalar_prox_oracle(np.abs, z, tau, -5, 5) == pytest.approx(expect, abs=1e-6)


def test_oracle_rejects_empty_interval():
    with pytest.raises(ValueError):
        scalar_prox_oracle(np.abs, 0.0, 1.0, 1.0, 1.0)


# ---------------------------------------------------------------------------
# data-side proxes

def test_l2_box_examples():
    v = np.array([0.0, 0.25, 1.0])
    assert np.array_equal(P.prox_l2_box(v, 1.0, 0.0, np.zeros(3)), v)
    assert P.prox_l2_box(np.array([2.0]), 1.0, 1.0, np.zeros(1))[0] == 1.0


def test_l2_box_shape_mismatch():
    with pytest.raises(ValueError):
        P.prox_l2_box(np.zeros(3), 1.0, 1.0, np.zeros(4))


def test_inpaint_examples():
    rng = np.random.default_rng(0)
    v, f = rng.random((2, 1, 4, 4))
    assert np.array_equal(P.prox_inpaint(v, f, np.ones_like(v, bool)), f)
    assert np.array_equal(P.prox_inpaint(v, f, np.zeros_like(v, bool)), v)
    mask = rng.random(v.shape) < 0.5
    out = P.prox_inpaint(v, f, mask)
    assert np.array_equal(out[mask], f[mask]) and np.array_equal(out[~mask], v[~mask])
    with pytest.raises(ValueError):
        P.prox_inpaint(v, f, mask[:, :2])


def _blur_matrix(shape, std):
    op = GaussianConvolution(shape, std)
    n = int(np.prod(shape))
    return np.array([op.forward(e.reshape(shape)).ravel() for e in np.eye(n)]).T


def test_deconv_matches_dense_solve():
    rng = np.random.default_rng(1)
    shape = (1, 8, 8)
    v, f = rng.random((2,) + shape)
    tau = 0.8
    B = _blur_matrix(shape, 1.75)
    # normal equations of (1/(2 tau))|u - v|^2 + |B u - f|^2
    M = np.eye(64) / tau + 2 * B.T @ B
    expect = np.linalg.solve(M, v.ravel() / tau + 2 * B.T @ f.ravel())
    out = P.prox_deconv_quadratic(v, tau, 1.75, f)
    assert np.max(np.abs(out.ravel() - expect)) <= 1e-8


def test_deconv_first_order_residual():
    rng = np.random.default_rng(2)
    shape = (1, 16, 12)
    v, f = rng.random((2,) + shape)
    tau = 3.0
    op = GaussianConvolution(shape, 1.75)
    u = P.prox_deconv_quadratic(v, tau, 1.75, f)
    grad = (u - v) / tau + 2 * op.adjoint(op.forward(u) - f)
    assert np.linalg.norm(grad) <= 1e-8 * (1 + np.linalg.norm(v) / tau)


def test_deconv_delta_kernel_fixed_point():
    f = np.random.default_rng(3).random((1, 6, 6))
    delta = np.zeros((6, 6))
    delta[0, 0] = 1.0
    out = P.prox_deconv_quadratic(f, 1.0, None, f, kernel=delta)
    assert np.allclose(out, f, atol=1e-14)


def test_deconv_rejects_bad_tau():
    with pytest.raises(ValueError):
        P.prox_deconv_quadratic(np.zeros((1, 4, 4)), 0.0, 1.0, np.zeros((1, 4, 4)))


# ---------------------------------------------------------------------------
# regularizer proxes: closed forms

def test_shrink_sharpen_reduces_to_shrinkage():
    rng = np.random.default_rng(4)
    z = rng.standard_normal((2, 1, 5, 5))
    sigma = 2.0
    rho = np.sqrt((z ** 2).sum(axis=(0, 1), keepdims=True))
    expect = np.maximum(0, rho - 1 / sigma) * z / rho
    assert np.allclose(P.prox_shrink_sharpen(z, 1 / sigma, 0.0), expect, atol=1e-15)


def test_shrink_sharpen_dead_zone():
    z = np.zeros((2, 1, 1, 1))
    z[0, 0, 0, 0] = 0.3
    assert np.all(P.prox_shrink_sharpen(z, 1 / 3.0, 1.0) == 0)  # rho = 0.3 <= 1/sigma
    rho_star = scalar_prox_oracle(lambda t: t - 0.5 * t * t, 0.3, 1 / 3.0, 0.0, 1.3)
    assert rho_star == pytest.approx(0.0, abs=1e-6)


def test_shrink_sharpen_rejects_sigma_below_omega():
    with pytest.raises(ValueError):
        P.prox_shrink_sharpen(np.ones((2, 1, 2, 2)), 1.0, 1.0)


def test_rms_values():
    assert P.rms_eval(0.0, MS) == 0.0
    assert P.rms_eval(MS.s2, MS) == pytest.approx(MS.lam, abs=1e-15)
    assert np.all(P.rms_eval(np.array([MS.s2, MS.s2 + 1e-3, 5.0, 1e6]), MS) == MS.lam)
    with pytest.raises(ValueError):
        P.rms_eval(-0.1, MS)


def test_trunc_quad_constants():
    k = math.sqrt(MS.lam / MS.alpha)
    eps = MS.eps0 * k
    assert MS.s1 == pytest.approx(k - eps) and MS.s2 == pytest.approx(k + eps)
    assert MS.A == pytest.approx(-MS.alpha / (4 * eps))
    assert MS.B == pytest.approx(-MS.alpha * (2 * k + eps) / (4 * eps))
    assert MS.C == MS.lam


@pytest.mark.parametrize("bad", [(0.0, 0.1, 0.5), (1.0, 0.0, 0.5), (1.0, 1.0, 0.0), (1.0, 1.0, 1.0)])
def test_trunc_quad_params_validated(bad):
    with pytest.raises(ValueError):
        TruncQuadParams(*bad)


def test_semiconvexity_modulus_values():
    assert P.semiconvexity_modulus(MS) == pytest.approx(25.0, abs=1e-12)
    assert P.semiconvexity_modulus(CRACK) == pytest.approx(155.99, abs=5e-3)
    small = TruncQuadParams(1.0, 1.0, 1e-4)
    assert P.semiconvexity_modulus(small) == pytest.approx(1.0 / 1e-4, rel=1e-3)


@pytest.mark.parametrize("p", [MS, CRACK, TruncQuadParams(3.0, 2.0, 0.2)])
def test_modulus_equals_numerical_second_derivative_minimum(p):
    # independent route: smallest second difference of R on a fine grid
    h = p.s2 * 1e-4
    t = np.arange(h, 2 * p.s2, h)
    d2 = (P.rms_eval(t + h, p) - 2 * P.rms_eval(t, p) + P.rms_eval(t - h, p)) / h ** 2
    assert -d2.min() == pytest.approx(P.semiconvexity_modulus(p), rel=1e-3)
    assert np.all(d2 + P.semiconvexity_modulus(p) >= -1e-6 * P.semiconvexity_modulus(p))


@pytest.mark.parametrize("p", [MS, CRACK])
def test_rms_continuity_at_knots(p):
    h = 1e-9
    for s in (p.s1, p.s2):
        assert abs(P.rms_eval(s + h, p) - P.rms_eval(s - h, p)) <= 1e-6
        dl = P.rms_derivative(s - h, p)
        dr = P.rms_derivative(s + h, p)
        assert abs(dl - dr) <= 1e-6
        # numerical derivative from either side
        k = 1e-7
        left = (P.rms_eval(s, p) - P.rms_eval(s - k, p)) / k
        right = (P.rms_eval(s + k, p) - P.rms_eval(s, p)) / k
        assert abs(left - right) <= 1e-4


def test_scalar_prox_rms_simple_cases():
    tau = 0.5 / MS.omega
    assert P.scalar_prox_rms(0.0, tau, MS) == 0.0
    t = MS.s2 + 1.0
    assert P.scalar_prox_rms(t, tau, MS) == t
    with pytest.raises(ValueError):
        P.scalar_prox_rms(0.5, 1 / MS.omega, MS)


def test_trunc_quad_prox_radial_cases():
    tau = 0.5 / MS.omega
    z = np.zeros((2, 1, 2, 2))
    assert np.all(P.prox_trunc_quad_smooth(z, tau, MS) == 0)
    z[:, 0, 0, 0] = [3.0, 4.0]
    out = P.prox_trunc_quad_smooth(z, tau, MS)
    assert np.array_equal(out[:, 0, 0, 0], [3.0, 4.0])


def test_sparse_square_simple_cases():
    z = np.array([-0.3, 0.2, 1.4])
    assert np.array_equal(P.prox_sparse_square(z, 0.5, 0.0, 0.6, 0.09), z)
    kink = np.array([0.6 + 0.3])
    assert P.prox_sparse_square(kink, 0.2, 1.0, 0.6, 0.09)[0] == pytest.approx(0.9, abs=1e-15)
    with pytest.raises(ValueError):
        P.prox_sparse_square(z, 0.2, 1.0, 0.6, 0.0)
    with pytest.raises(ValueError):
        P.prox_sparse_square(z, 0.5, 1.0, 0.6, 0.09)  # 1/tau = 2w


def test_binary_concave_examples():
    assert P.prox_binary_concave(np.array([0.5]), 3.0, 0.01)[0] == pytest.approx(0.5, abs=1e-15)
    assert P.prox_binary_concave(np.array([1.0]), 6.25, 0.01)[0] == 1.0
    with pytest.raises(ValueError):
        P.prox_binary_concave(np.array([1.0]), 12.5, 0.01)


# ---------------------------------------------------------------------------
# oracle equivalence on random instances (1000 each)

@pytest.mark.parametrize("name", sorted(oracle_cases.BUILDERS))
def test_oracle_equivalence(name):
    arg_tol = 1e-5 if name in ("rms_ms", "rms_crack", "trunc_quad_radial", "sparse_square") else 1e-6
    worst_arg, worst_obj = oracle_cases.compare(oracle_cases.BUILDERS[name]())
    assert worst_arg <= arg_tol
    assert worst_obj <= 1e-8


# ---------------------------------------------------------------------------
# modulus certification and Lipschitz bounds for every term

def _terms():
    return [
        (P.ShrinkSharpenTerm(2.0), (2, 1, 3, 3), 1.0),
        (P.ShrinkSharpenTerm(0.0), (2, 3, 2, 2), 1.0),
        (P.TruncQuadTerm(MS), (2, 1, 3, 3), 3 * MS.s2),
        (P.TruncQuadTerm(CRACK), (2, 1, 2, 2), 3 * CRACK.s2),
        (P.SparseSquareTerm(1.5, 0.6, 0.09), (5,), 1.0),
        (P.BinaryConcaveTerm(0.01), (6,), None),
        (P.QuadraticTerm(-1.0), (3,), 1.0),
        (P.QuadraticTerm(2.0), (3,), 1.0),
    ]


@pytest.mark.parametrize("term,shape,scale", _terms())
def test_modulus_certified_on_random_sections(term, shape, scale):
    rng = np.random.default_rng(20)
    w = term.modulus
    h = 1e-3
    for _ in range(100):
        if scale is None:  # box-constrained: stay in the interior
            x0 = rng.uniform(0.2, 0.8, shape)
            d = rng.standard_normal(shape)
            d *= 0.1 / np.abs(d).max()
            ts = np.linspace(-1, 1, 41)
        else:
            x0 = rng.standard_normal(shape) * scale
            d = rng.standard_normal(shape)
            d /= np.linalg.norm(d)
            ts = np.linspace(-2 * scale, 2 * scale, 41)
        vals = []
        for t in ts:
            for s in (-h, 0.0, h):
                x = x0 + (t + s) * d
                vals.append(term.energy(x) + 0.5 * w * float(np.vdot(x, x)))
        v = np.array(vals).reshape(-1, 3)
        d2 = (v[:, 0] - 2 * v[:, 1] + v[:, 2]) / h ** 2
        assert d2.min() >= -1e-6 * max(1.0, np.abs(v).max())


@pytest.mark.parametrize("term,shape,scale", _terms())
def test_prox_lipschitz_in_convexified_metric(term, shape, scale):
    rng = np.random.default_rng(21)
    w = term.modulus
    tau = 1.0 / (2 * w) if w > 0 else 0.7
    bound = 1.0 / (1.0 - tau * w)
    s = 1.0 if scale is None else scale
    for _ in range(200):
        z1 = rng.standard_normal(shape) * s
        z2 = z1 + rng.standard_normal(shape) * s * rng.uniform(1e-3, 1)
        p1, p2 = term.prox(z1, tau), term.prox(z2, tau)
        assert np.linalg.norm(p1 - p2) <= bound * np.linalg.norm(z1 - z2) * (1 + 1e-9)


@settings(max_examples=200, deadline=None)
@given(t=st.floats(0, 2), frac=st.floats(1.01, 10))
def test_scalar_prox_rms_is_fixed_point_stationary(t, frac):
    # the output satisfies the first-order condition on its branch
    tau = 1.0 / (MS.omega * frac)
    s = float(P.scalar_prox_rms(t, tau, MS))
    g = (s - t) / tau + float(P.rms_derivative(s, MS))
    if s > 0:
        assert abs(g) <= 1e-7 * (1 + t / tau)
    else:
        assert g >= -1e-9


def test_block_term_prox_and_energy():
    from semiconvex_pdhg.linops import ChannelMean, Gradient, Stack
    shape = (3, 4, 4)
    K = Stack([Gradient(shape, channel=c) for c in range(3)] + [ChannelMean(shape)])
    terms = [P.ShrinkSharpenTerm(0.0)] * 3 + [P.SparseSquareTerm(0.5, 0.6, 0.09)]
    F = P.BlockTerm(K, terms)
    assert F.modulus == 1.0
    y = np.random.default_rng(22).standard_normal(K.range_shape)
    parts = K.split(y)
    assert F.energy(y) == pytest.approx(sum(t.energy(p) for t, p in zip(terms, parts)))
    out = K.split(F.prox(y, 0.3))
    for t, p, o in zip(terms, parts, out):
        assert np.array_equal(o, t.prox(p, 0.3))
