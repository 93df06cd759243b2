import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardy_spectra.jacobi import (
    JacobiParams,
    TridiagonalWindow,
    apply_factorized,
    apply_jacobi,
    bisect_eigenvalues,
    c_alpha,
    inverse_residual,
    jacobi_matvec,
    jacobi_params,
    jacobi_params_closed_form,
    kernel_column,
    sturm_count,
    sturm_counts,
    truncated_top_eigs,
)
from hardy_spectra.kernel import kernel_matrix
from hardy_spectra.special import zeta

# 40-digit evaluations of a(n), b(n), c(n) straight from the defining powers
FROZEN = [
    (2.0, 3, -2.8504607575990666316, 5.127032967032967033, 0.015384615384615384615),
    (0.7, 1000, -714999.97142857512742, 1428571.5428571754049, 0.045077399032209279408),
    (7.0, 50, -181.56381447436902907, 359.46155005735233191, 6.6504826747247882985e-24),
]


@pytest.mark.parametrize("alpha,n,a,b,c", FROZEN)
def test_parameters_against_high_precision(alpha, n, a, b, c):
    got = jacobi_params(alpha, n)
    assert got == pytest.approx((a, b, c), rel=1e-13)


def test_parameters_half():
    for n in (1, 2, 3):
        a, b, c = jacobi_params(0.5, n)
        assert a == pytest.approx(-n * (n + 1), rel=1e-14)
        assert b == pytest.approx(2 * n * n, rel=1e-14)
        assert c == pytest.approx(1.0, rel=1e-14)


def test_parameters_first_row():
    for alpha in (0.1, 1.0, 9.0):
        assert c_alpha(alpha, 1) == 1.0
    assert jacobi_params(1.0, 1)[0] == pytest.approx(-(2**1.5) / 3, rel=1e-15)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0, 2.0, 7.0])
def test_closed_forms_agree(alpha):
    params = JacobiParams(alpha)
    worst = 0.0
    for n in range(1, 1001):
        a_ref, b_ref = jacobi_params_closed_form(alpha, n)
        worst = max(worst, abs(params.a(n) / a_ref - 1), abs(params.b(n) / b_ref - 1))
    assert worst <= 1e-12


def test_c_alpha_large_n_stable():
    # 1/(n^{2a} - (n-1)^{2a}) ~ n^{1-2a}/(2a) for large n
    n = 1e9
    assert c_alpha(1.5, n) * 3.0 * n**2 == pytest.approx(1.0, rel=1e-8)
    with pytest.raises(ValueError):
        c_alpha(1.0, 0)


@pytest.mark.parametrize("alpha", [0.25, 1.0, 3.3, 12.0])
def test_power_solutions_annihilated(alpha):
    for sign in (1.0, -1.0):
        def x(n):
            return float(n) ** (-0.5 - sign * alpha)

        for n in (2, 3, 10, 100, 1000):
            a_prev = jacobi_params(alpha, n - 1)[0]
            a_n, b_n, _ = jacobi_params(alpha, n)
            scale = abs(a_prev * x(n - 1)) + abs(b_n * x(n)) + abs(a_n * x(n + 1))
            assert abs(apply_jacobi(alpha, x, n)) <= 1e-12 * scale


def test_apply_jacobi_tridiagonal():
    e5 = np.zeros(10)
    e5[4] = 1.0
    for n in (2, 3, 8, 9):
        assert apply_jacobi(1.3, e5, n) == 0.0
    assert apply_jacobi(1.3, e5, 5) == pytest.approx(jacobi_params(1.3, 5)[1])
    with pytest.raises(ValueError):
        apply_jacobi(1.3, e5, 1)


def test_factorized_examples():
    assert np.allclose(apply_factorized(0.5, [1.0], 4), [2.0, -2.0, 0.0, 0.0], atol=1e-14)
    with pytest.raises(ValueError):
        apply_factorized(0.5, [0, 0, 0, 1.0], 4)


@pytest.mark.parametrize("alpha", [0.5, 2.0, 6.0])
def test_factorized_power_to_unit_vector(alpha):
    out = apply_factorized(alpha, lambda n: n ** (-0.5 - alpha), 40)
    target = np.zeros(40)
    target[0] = 1.0
    assert np.max(np.abs(out - target)) <= 1e-12


def test_factorized_matches_three_term(rng):
    for _ in range(100):
        alpha = rng.uniform(0.1, 8.0)
        x = np.zeros(rng.integers(1, 30))
        x[rng.integers(0, x.size)] = 1.0
        x += rng.uniform(-1, 1, x.size) * (rng.random(x.size) < 0.5)
        N_out = x.size + 1
        direct = jacobi_matvec(alpha, x, N_out)
        fact = apply_factorized(alpha, x, N_out)
        assert np.allclose(fact, direct, rtol=1e-12, atol=1e-12 * np.max(np.abs(direct)))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("j", [1, 3, 10])
def test_inverse_identity(alpha, j):
    assert inverse_residual(alpha, j) <= 1e-9


def test_kernel_column_matches_matrix():
    assert np.allclose(kernel_column(2.0, 3, np.arange(1, 11)), kernel_matrix(2.0, 10)[:, 2], rtol=1e-15)


@pytest.mark.parametrize("alpha", [0.2, 1.0, 4.0, 15.0])
def test_truncation_inverse_is_tridiagonal(alpha):
    N = 60
    inv = TridiagonalWindow.kernel_inverse(alpha, N).dense()
    assert np.allclose(kernel_matrix(alpha, N) @ inv, np.eye(N), atol=1e-10)


def test_jacobi_window_differs_in_last_entry_only():
    J = TridiagonalWindow.jacobi(2.0, 30)
    T = TridiagonalWindow.kernel_inverse(2.0, 30)
    assert np.array_equal(J.a, T.a)
    assert np.array_equal(J.b[:-1], T.b[:-1])
    assert T.b[-1] < J.b[-1]


@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0, 3.0, 20.0])
def test_sturm_positivity(alpha):
    for window in (TridiagonalWindow.jacobi(alpha, 200), TridiagonalWindow.kernel_inverse(alpha, 200)):
        assert sturm_count(window, 0.0) == 0
        assert sturm_count(window, -1.0) == 0
        big = float(np.max(window.b) + 2 * np.max(np.abs(window.a))) + 1.0
        assert sturm_count(window, big) == 200


def test_sturm_counts_match_eigvalsh():
    window = TridiagonalWindow.jacobi(3.0, 80)
    ev = np.linalg.eigvalsh(window.dense())
    probes = np.linspace(ev.min() - 1, ev.max() + 1, 37)
    assert np.array_equal(sturm_counts(window, probes), np.searchsorted(ev, probes))
    got = bisect_eigenvalues(window, [0, 5, 79])
    assert np.allclose(got, ev[[0, 5, 79]], rtol=1e-13)


def test_truncated_top_eigs_methods_agree():
    for alpha in (0.7, 2.0, 8.0):
        dense = truncated_top_eigs(alpha, 400, 3, "dense")
        assert np.allclose(truncated_top_eigs(alpha, 400, 3, "tridiagonal"), dense, rtol=1e-10)
        assert np.allclose(truncated_top_eigs(alpha, 400, 3, "sturm"), dense, rtol=1e-10)


def test_truncated_top_eigs_examples():
    assert truncated_top_eigs(3.0, 1, 1)[0] == 1.0
    top4 = truncated_top_eigs(4.0, 1000, 1)[0]
    assert zeta(9.0) - 5e-3 <= top4 <= zeta(5.0)
    with pytest.raises(ValueError):
        truncated_top_eigs(1.0, 100, 11)
    with pytest.raises(ValueError):
        truncated_top_eigs(1.0, 100, 2, "qr")


def test_half_truncation_value():
    # brute force: dense symmetric eigensolver on the matrix built from the closed form
    N = 1000
    idx = np.arange(1, N + 1, dtype=float)
    mat = 1.0 / np.maximum(idx[:, None], idx[None, :])
    brute = np.linalg.eigvalsh(mat)[-1]
    value = truncated_top_eigs(0.5, N, 1)[0]
    assert value == pytest.approx(brute, rel=1e-12)
    assert value == pytest.approx(3.0558637, abs=1e-6)
    assert value < 4.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 30.0), st.integers(1, 400))
def test_parameter_signs(alpha, n):
    a, b, c = jacobi_params(alpha, n)
    assert a < 0 < b and c > 0
