import numpy as np
import pytest

from semiconvex_pdhg import toy


def test_divergence_matrix_examples():
    A = toy.divergence_matrix(2.0, 1.0, 10.0)
    assert A[0, 0] == -1.0
    A = toy.divergence_matrix(1.5, 1.0, 10.0)
    assert np.allclose(A, [[-2, 3], [-2 / 11, 4 / 11]], atol=1e-15)
    big = toy.divergence_matrix(1.5, 1.0, 1e12)
    assert abs(big[1, 0]) < 1e-11 and abs(big[1, 1]) < 1e-11
    with pytest.raises(ValueError):
        toy.divergence_matrix(1.0, 1.0, 10.0)
    with pytest.raises(ValueError):
        toy.divergence_matrix(1.5, 0.0, 10.0)


def test_eigvals_examples():
    assert toy.eigvals_2x2(np.eye(2)) == (1.0, 1.0)
    assert toy.eigvals_2x2(np.diag([2.0, 3.0])) == (3.0, 2.0)
    d1, d2 = toy.eigvals_2x2(toy.divergence_matrix(1.5, 1.0, 10.0))
    assert d2 == pytest.approx(-1.741, abs=5e-4)
    assert abs(d2) > 1
    re, im = toy.eigvals_2x2([[0.0, -1.0], [1.0, 0.0]])
    assert (re, im) == (0.0, 1.0)
    assert toy.spectral_radius([[0.0, -2.0], [2.0, 0.0]]) == pytest.approx(2.0)


@pytest.mark.parametrize("sigma,tau,c", [(1.5, 1.0, 100.0), (2.0, 1.0, 100.0), (3.0, 0.2, 5.0),
                                         (1.2, 0.5, 2.0)])
def test_eigvals_agree_with_numpy(sigma, tau, c):
    A = toy.divergence_matrix(sigma, tau, c)
    ours = sorted(toy.eigvals_2x2(A))
    ref = sorted(np.linalg.eigvals(A).real)
    assert np.allclose(ours, ref, rtol=1e-12, atol=1e-14)


def test_eigvec_sign_convention():
    A = toy.divergence_matrix(1.5, 1.0, 100.0)
    for d in toy.eigvals_2x2(A):
        v = toy.eigvec_2x2(A, d)
        assert np.linalg.norm(A @ v - d * v) <= 1e-12
        assert v[np.flatnonzero(v)[0]] > 0
        assert np.linalg.norm(v) == pytest.approx(1.0)


@pytest.mark.parametrize("sigma,tau,c", [(1.5, 1.0, 100.0), (2.0, 1.0, 100.0), (3.0, 0.3, 4.0),
                                         (1.2, 2.0, 1.5), (1.8, 0.1, 50.0)])
def test_solver_matches_matrix_powers(sigma, tau, c):
    tr = toy.run_toy_prop(sigma, tau, c, np.array([0.7, -0.4]), 30, blowup=1e300)
    assert len(tr) == 31
    assert tr.matched_closed_form and tr.max_rel_error <= 1e-10


def test_divergence_dichotomy():
    grid = [(1.5, 1.0, 100.0), (1.3, 0.5, 20.0), (2.5, 1.0, 100.0), (3.0, 0.2, 5.0)]
    for sigma, tau, c in grid:
        A = toy.divergence_matrix(sigma, tau, c)
        rho = toy.spectral_radius(A)
        assert abs(rho - 1) > 1e-3  # radius exactly one excluded
        d = max(toy.eigvals_2x2(A), key=abs)
        tr = toy.run_toy_prop(sigma, tau, c, toy.eigvec_2x2(A, d), 400)
        if rho > 1:
            assert tr.diverged
        else:
            assert not tr.diverged and tr.norms()[-1] < tr.norms()[0]


def test_prop_eigenvector_start_grows():
    A = toy.divergence_matrix(1.5, 1.0, 100.0)
    d1, d2 = toy.eigvals_2x2(A)
    tr = toy.run_toy_prop(1.5, 1.0, 100.0, toy.eigvec_2x2(A, d2), 60)
    assert np.any(tr.norms()[:61] >= 1e6)
    assert tr.diverged


def test_example_closed_form_values():
    tr = toy.run_toy_example(3.0, [-1.0, 1.0], 30)
    assert np.allclose(tr.g[1], [-0.5, 0.5], atol=0)
    ratios = tr.norms()[2:] / tr.norms()[1:-1]
    assert np.allclose(ratios, 0.5, rtol=1e-12)
    assert tr.matched_closed_form and not tr.diverged
    assert all(np.all(u == 0) for u in tr.u)


def test_example_divergence_at_small_sigma():
    tr = toy.run_toy_example(1.5, [-1.0, 1.0], 60)
    ratios = tr.norms()[2:] / tr.norms()[1:-1]
    assert np.allclose(ratios, 2.0, rtol=1e-12)
    assert tr.diverged and tr.matched_closed_form


def test_example_dichotomy_around_two():
    for sigma in (1.3, 1.9, 2.1, 4.0):
        tr = toy.run_toy_example(sigma, [-1.0, 1.0], 400)
        assert tr.diverged == (sigma < 2)
        if sigma > 2:
            assert tr.norms()[-1] < 1e-6


def test_example_validation():
    with pytest.raises(ValueError):
        toy.run_toy_example(1.0, [-1, 1], 5)
    with pytest.raises(ValueError):
        toy.run_toy_example(3.0, [-1, 1], 5, c=2.0)
    with pytest.raises(ValueError):
        toy.run_toy_example(3.0, [1.0, 1.0, 1.0], 5)


def test_rate_check_cases():
    # scalar theorem-regime toy: u_hat = 0 analytically
    A = toy.divergence_matrix(2.0, 0.5, 4.0)
    tr = toy.run_toy_prop(2.0, 0.5, 4.0, np.array([0.3, 1.0]), 200)
    rep = toy.rate_check([u[0] for u in tr.u], 0.0, (10, 200))
    assert rep.bounded and toy.spectral_radius(A) < 1

    zero = toy.rate_check([np.zeros(3)] * 20, np.zeros(3), (5, 19))
    assert zero.bounded and np.all(zero.C == 0)

    grow = toy.rate_check([np.full(2, 2.0 ** n) for n in range(40)], np.zeros(2), (10, 39))
    assert not grow.bounded and grow.sup > 3 * grow.start


def test_rate_check_validation():
    with pytest.raises(ValueError):
        toy.rate_check([np.zeros(1)] * 5, 0.0, (3, 2))
    with pytest.raises(ValueError):
        toy.rate_check([np.zeros(1)] * 5, 0.0, (10, 20))


def test_rate_check_consumes_generator_lazily():
    def endless():
        n = 1
        while True:
            yield np.array([1.0 / n])
            n += 1

    rep = toy.rate_check(endless(), np.zeros(1), (10, 100))
    assert rep.bounded and len(rep.C) == 91
