import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardy_spectra.kernel import (
    DiagonalLimit,
    KernelEntryRule,
    TruncatedKernel,
    diff_norm_bound_check,
    integral_form,
    kernel_entry,
    kernel_matrix,
    power_top_eigenvalues,
    quadratic_form,
    top_eigenvalues,
)
from hardy_spectra.special import zeta


@pytest.mark.parametrize("alpha", [0.3, 1.0, 7.0])
def test_entry_diagonal(alpha):
    assert kernel_entry(alpha, 1, 1) == 1.0
    assert kernel_entry(alpha, 4, 4) == pytest.approx(0.25, rel=1e-15)


def test_entry_closed_form_and_symmetry():
    assert kernel_entry(1.0, 1, 2) == pytest.approx(math.sqrt(2) / 4, rel=1e-15)
    assert kernel_entry(3.0, 5, 2) == kernel_entry(3.0, 2, 5)


def test_entry_large_alpha_no_overflow():
    value = kernel_entry(50.0, 10_000, 9_999)
    direct = math.exp(49.5 * (math.log(10_000) + math.log(9_999)) - 100 * math.log(10_000))
    assert np.isfinite(value) and value == pytest.approx(direct, rel=1e-12)
    assert np.all(np.isfinite(kernel_matrix(50.0, 300)))


def test_entry_validation():
    with pytest.raises(ValueError):
        kernel_entry(-1.0, 1, 1)
    with pytest.raises(ValueError):
        kernel_entry(1.0, 0, 1)
    with pytest.raises(ValueError):
        KernelEntryRule(1.0)(np.array([0.0]), np.array([1.0]))


def test_matrix_matches_rule():
    rule = KernelEntryRule(2.0)
    idx = np.arange(1, 8, dtype=float)
    assert np.allclose(kernel_matrix(2.0, 7), rule(idx[:, None], idx[None, :]), rtol=1e-15)
    tk = TruncatedKernel.build(2.0, 7)
    assert not tk.matrix.flags.writeable


def test_diagonal_limit():
    d = DiagonalLimit(4)
    assert np.allclose(d.matrix, np.diag([1, 1 / 2, 1 / 3, 1 / 4]))


def test_quadratic_form_examples():
    e1 = np.array([1.0])
    assert quadratic_form(1.0, e1) == 1.0
    pair = np.array([1.0, 1.0])
    assert quadratic_form(1.0, pair) == pytest.approx(1.5 + 2**-0.5, abs=1e-14)
    for alpha in (0.5, 2.0):
        assert quadratic_form(alpha, pair) == pytest.approx(1.5 + 2 ** (0.5 - alpha), abs=1e-14)
    assert quadratic_form(1.0, np.zeros(5)) == 0.0


def test_integral_form_examples(rng):
    assert integral_form(1.0, np.array([1.0])) == pytest.approx(1.0, abs=1e-10)
    assert integral_form(1.0, np.array([1.0, 1.0])) == pytest.approx(1.5 + 2**-0.5, abs=1e-10)
    x = rng.uniform(-1, 1, 5)
    assert abs(integral_form(2.0, x) - quadratic_form(2.0, x)) <= 1e-9


def test_form_identity_random_supports(rng):
    for alpha in (0.5, 1.0, 2.0, 5.0):
        for _ in range(5):
            x = np.zeros(30)
            idx = rng.choice(30, size=rng.integers(1, 9), replace=False)
            x[idx] = rng.uniform(-1, 1, idx.size)
            q = quadratic_form(alpha, x)
            assert q >= 0.0
            assert abs(q - integral_form(alpha, x)) <= 1e-8 * (1 + q)


def test_form_rejects_matrices():
    with pytest.raises(ValueError):
        quadratic_form(1.0, np.ones((2, 2)))


def test_diff_norm_bound():
    value, bound, ok = diff_norm_bound_check(1.0, 500)
    assert ok and value <= 2.0 and bound == 2.0
    value, bound, ok = diff_norm_bound_check(4.0, 500)
    assert ok and value <= 0.5
    vals = [diff_norm_bound_check(1.0, N)[0] for N in (100, 200, 400)]
    assert vals[0] <= vals[1] <= vals[2]


def test_truncation_monotone_and_bounded():
    for alpha in (0.5, 2.0, 6.0):
        tops = [top_eigenvalues(kernel_matrix(alpha, N), 1)[0] for N in (50, 100, 200, 400, 800)]
        assert all(a <= b + 1e-13 for a, b in zip(tops, tops[1:]))
        assert tops[-1] <= max(2 / alpha, zeta(1 + alpha))


def test_power_iteration_matches_eigh():
    mat = kernel_matrix(3.0, 60)
    ref = np.linalg.eigvalsh(mat)[::-1][:3]
    assert np.allclose(power_top_eigenvalues(mat, 3, rtol=1e-14), ref, rtol=1e-8)


def test_top_eigenvalues_sparse_path():
    mat = kernel_matrix(4.0, 800)
    ref = np.linalg.eigvalsh(mat)[::-1][:3]
    assert np.allclose(top_eigenvalues(mat, 3), ref, rtol=1e-12)
    with pytest.raises(ValueError):
        top_eigenvalues(np.eye(2), 3)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 20.0), st.lists(st.floats(-1, 1), min_size=1, max_size=12))
def test_quadratic_form_nonnegative(alpha, values):
    assert quadratic_form(alpha, np.array(values)) >= -1e-12
