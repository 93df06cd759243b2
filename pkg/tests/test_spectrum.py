import numpy as np
import pytest

from hardy_spectra.special import zeta
from hardy_spectra.spectrum import (
    count_eigenvalues,
    counting_lower_bound,
    find_eigenvalues,
    operator_norm,
    scan_grid,
    sweep,
    sweep_grid,
    threshold_alpha1,
    worker_count,
)

ALPHA1 = 1.5179906  # regression value of the emergence threshold, not an external constant


@pytest.fixture(scope="module")
def reports():
    return {a: find_eigenvalues(a) for a in (2.0, 4.0, 8.0, 12.0)}


@pytest.mark.parametrize("alpha,count", [(0.1, 0), (0.5, 0), (1.0, 0)])
def test_no_eigenvalues_for_small_alpha(alpha, count):
    report = find_eigenvalues(alpha, oracle=None)
    assert report.count == count
    assert report.eigenvalues == ()
    assert report.norm == pytest.approx(2.0 / alpha, abs=1e-12)


@pytest.mark.parametrize("alpha", [2.0, 9.0])
def test_eigenvalues_present(alpha):
    assert count_eigenvalues(alpha) >= 1


def test_counting_lower_bound():
    assert counting_lower_bound(9.0) == 2  # k = 1, 2 satisfy k < 9/4
    assert counting_lower_bound(4.0) == 0
    assert counting_lower_bound(4.01) == 1
    for alpha in (4.5, 9.0, 12.0, 17.0):
        assert count_eigenvalues(alpha) >= counting_lower_bound(alpha)


def test_large_alpha_eigenvalues_near_reciprocals(reports):
    report = reports[12.0]
    for j, lam in enumerate(report.lambda_K, start=1):
        assert abs(lam - 1.0 / j) <= 2.0 / 12.0


def test_reports_ordered_and_above_band(reports):
    for alpha, report in reports.items():
        lam = report.lambda_K
        assert np.all(np.diff(lam) < 0)
        assert np.all(lam > 2.0 / alpha + 1e-10)
        for e in report.eigenvalues:
            assert 0 < e.s < alpha
            assert e.lambda_J * e.lambda_K == pytest.approx(1.0, rel=1e-14)
        assert report.warnings == ()


def test_two_oracle_agreement(reports):
    for alpha, report in reports.items():
        k = report.count
        full = np.array(report.oracle[:k])
        half = np.array(report.oracle_half[:k])
        assert np.max(np.abs(report.lambda_K - full)) <= 1e-3
        # one Richardson step in 1/N over N = 2000, 4000
        assert np.max(np.abs(report.lambda_K - (2 * full - half))) <= 1e-4
        # the step with the actual N^(-2s) rate is sharper still
        assert report.oracle_gap_richardson <= 1e-6


def test_truncations_approach_from_below(reports):
    for report in reports.values():
        k = report.count
        assert np.all(np.array(report.oracle[:k]) <= report.lambda_K + 1e-8)
        assert np.all(np.array(report.oracle_half[:k]) <= np.array(report.oracle[:k]) + 1e-10)


def test_oracle_methods_agree():
    dense = find_eigenvalues(4.0, trunc_n=1000, oracle="dense")
    tri = find_eigenvalues(4.0, trunc_n=1000, oracle="tridiagonal")
    assert np.allclose(dense.oracle, tri.oracle, atol=1e-10)


def test_report_dict_is_plain():
    d = find_eigenvalues(0.5).to_dict()
    assert d["count"] == 0
    assert d["ac_band"] == [0.0, 4.0]
    assert d["oracle_gap"] is None


def test_norm_examples():
    assert operator_norm(0.5) == pytest.approx(4.0, abs=1e-12)
    assert zeta(9.0) <= operator_norm(4.0) <= zeta(5.0)
    assert abs(operator_norm(50.0) - 1.0) <= 0.04


def test_norm_sandwich(rng):
    for alpha in np.sort(rng.uniform(0.05, 20.0, size=30)):
        norm = operator_norm(alpha)
        lower = max(2 / alpha, zeta(1 + 2 * alpha)) - 1e-8
        upper = max(2 / alpha, zeta(1 + alpha)) + 1e-8
        assert lower <= norm <= upper, alpha


def test_count_monotone():
    counts = [count_eigenvalues(a) for a in np.arange(0.5, 12.01, 0.5)]
    assert all(x <= y for x, y in zip(counts, counts[1:]))
    assert counts[-1] >= 2


def test_scan_grid_shape():
    grid = scan_grid(4.0)
    assert grid[0] == pytest.approx(1e-4)
    assert grid[-1] == pytest.approx(4.0 - 1e-4)
    assert np.max(np.diff(grid)) <= 0.01 + 1e-12
    assert np.all(np.diff(grid) > 0)


def test_sweep_grid_exact_points():
    grid = sweep_grid(0.05, 12.0, 0.05)
    assert len(grid) == 240
    assert grid[0] == 0.05 and grid[-1] == 12.0
    with pytest.raises(ValueError):
        sweep_grid(2.0, 1.0, 0.1)


def test_sweep_rows():
    rows = sweep(0.5, 4.0, 0.25, oracle="tridiagonal", workers=2)
    assert [r.alpha for r in rows] == sweep_grid(0.5, 4.0, 0.25)
    width = max(r.count for r in rows)
    for r in rows:
        assert r.band_top == 2.0
        assert all(v > 2.0 for v in r.eigenvalues)
        if r.alpha <= 1.0:
            assert r.count == 0
    for j in range(width):
        col = [r.eigenvalues[j] for r in rows if r.count > j]
        assert all(x <= y + 1e-9 for x, y in zip(col, col[1:]))


def test_sweep_serial_matches_parallel():
    a = sweep(1.5, 2.5, 0.5, oracle=None, workers=1)
    b = sweep(1.5, 2.5, 0.5, oracle=None, workers=3)
    assert a == b


def test_threshold():
    a1 = threshold_alpha1()
    assert 1.0 < a1 < 2.0
    assert a1 == pytest.approx(ALPHA1, abs=1e-5)
    assert count_eigenvalues(a1 - 0.05) == 0
    assert count_eigenvalues(a1 + 0.05) >= 1


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("HARDY_SPECTRA_THREADS", "1")
    assert worker_count() == 1
    monkeypatch.setenv("HARDY_SPECTRA_THREADS", "many")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.delenv("HARDY_SPECTRA_THREADS")
    assert worker_count() >= 1


@pytest.mark.parametrize("alpha", [0.0, -1.0, float("nan"), float("inf")])
def test_invalid_alpha(alpha):
    with pytest.raises(ValueError):
        find_eigenvalues(alpha)
