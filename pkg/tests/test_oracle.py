"""Finite-difference eigensolver: textbook limits, cross-checks, guards."""

import numpy as np
import pytest

from conftest import BENCH_ENERGIES, BENCH_PRINTED
from heun_sextic import (
    ConvergenceFailureError,
    Discretization,
    DomainError,
    DomainWarning,
    PotentialCoeffs,
    QesParams,
    auto_box,
    fd_eigenvalues,
    qes_discretization,
    qes_sextic_coeffs,
    solve_spectrum_qes,
    sturm_count,
)


def test_harmonic_limit_odd_levels():
    # V = x^2 on (0, L): odd-sector levels 3, 7, 11 in units 2m = hbar = 1
    coeffs = PotentialCoeffs(v_m2=0.0, v_2=1.0, v_4=0.0, v_6=0.0)
    d = Discretization(x_min=0.0, x_max=12.0, n_points=4000, parity="odd")
    res = fd_eigenvalues(coeffs, d, 3)
    np.testing.assert_allclose(res.eigenvalues, [3.0, 7.0, 11.0], atol=1e-4)


def test_harmonic_limit_inner_dirichlet_box():
    # a Dirichlet wall at x_min biases levels by O(x_min), so keep it tiny
    coeffs = PotentialCoeffs(v_m2=0.0, v_2=1.0, v_4=0.0, v_6=0.0)
    d = Discretization(x_min=1e-6, x_max=12.0, n_points=4000)
    res = fd_eigenvalues(coeffs, d, 3)
    np.testing.assert_allclose(res.eigenvalues, [3.0, 7.0, 11.0], atol=1e-4)


def test_benchmark_potential_lowest_four(bench_qes):
    coeffs = qes_sextic_coeffs(bench_qes)
    box = qes_discretization(coeffs, 2.0, 4)
    res = fd_eigenvalues(coeffs, box, 4)
    np.testing.assert_allclose(res.eigenvalues, BENCH_PRINTED, atol=1e-3)
    np.testing.assert_allclose(res.eigenvalues, BENCH_ENERGIES, atol=1e-3)
    assert all(b > 0 for b in res.error_bars)
    assert np.all(np.diff(res.eigenvalues) > 0)
    assert res.warnings == ()


def test_levels_beyond_solvable_set():
    # M = 1, a = 1, s = 1: the two solvable levels are -sqrt(32), sqrt(32);
    # the solver also reports the levels above them
    qes = QesParams(a=1.0, b=0.0, s=1.0, M=1)
    coeffs = qes_sextic_coeffs(qes)
    box = qes_discretization(coeffs, 2.0, 4)
    res = fd_eigenvalues(coeffs, box, 4)
    want = np.sqrt(32.0)
    np.testing.assert_allclose(res.eigenvalues[:2], [-want, want], atol=1e-3)
    assert res.eigenvalues[2] > want
    assert res.eigenvalues[3] > res.eigenvalues[2]


def test_parity_sectors_match_solvable_levels():
    # s = 1/4 (even sector) and s = 3/4 (odd sector) have v_m2 = 0
    for s, parity in ((0.25, "even"), (0.75, "odd")):
        qes = QesParams(a=1.0, b=0.0, s=s, M=2)
        coeffs = qes_sextic_coeffs(qes)
        assert coeffs.v_m2 == 0.0
        box = auto_box(coeffs, 3, parity=parity)
        res = fd_eigenvalues(coeffs, box, 3)
        want = solve_spectrum_qes(qes).energies
        for n in range(3):
            allowed = max(1e-3, 5.0 * res.error_bars[n])
            assert abs(res.eigenvalues[n] - want[n]) <= allowed


def test_small_gamma_needs_origin_exponent():
    # 1/4 < s < 1/2: plain inner Dirichlet converges to the wrong branch
    qes = QesParams(a=1.0, b=0.0, s=0.3, M=1)
    coeffs = qes_sextic_coeffs(qes)
    want = solve_spectrum_qes(qes).energies

    pinned = qes_discretization(coeffs, 2.0 * qes.s, 2)
    assert pinned.origin_exponent == pytest.approx(2.0 * qes.s - 0.5)
    res = fd_eigenvalues(coeffs, pinned, 2)
    for n in range(2):
        allowed = max(1e-3, 5.0 * res.error_bars[n])
        assert abs(res.eigenvalues[n] - want[n]) <= allowed

    from dataclasses import replace

    plain = replace(pinned, origin_exponent=None)
    bad = fd_eigenvalues(coeffs, plain, 2)
    worst = max(abs(bad.eigenvalues[n] - want[n]) for n in range(2))
    assert worst > 1e-2  # order-one branch error, not a resolution issue


def test_grid_convergence_second_order(bench_qes):
    coeffs = qes_sextic_coeffs(bench_qes)
    box = qes_discretization(coeffs, 2.0, 4, n_points=1000)
    res = fd_eigenvalues(coeffs, box, 4)
    for n in range(4):
        ratio = abs(res.raw_coarse[n] - BENCH_ENERGIES[n]) / abs(
            res.raw_fine[n] - BENCH_ENERGIES[n]
        )
        assert 2.5 <= ratio <= 6.0


def test_richardson_combination_is_consistent(bench_qes):
    coeffs = qes_sextic_coeffs(bench_qes)
    box = qes_discretization(coeffs, 2.0, 2, n_points=1200)
    res = fd_eigenvalues(coeffs, box, 2)
    for n in range(2):
        extrap = (4.0 * res.raw_fine[n] - res.raw_coarse[n]) / 3.0
        assert res.eigenvalues[n] == pytest.approx(extrap, rel=1e-14)
        bar = abs(res.raw_coarse[n] - res.raw_fine[n]) / 3.0
        assert res.error_bars[n] == pytest.approx(bar, rel=1e-12, abs=1e-15)


def test_sturm_count_monotone_and_complete():
    rng = np.random.default_rng(13)
    n = 40
    diag = rng.uniform(-4.0, 4.0, n)
    off = rng.uniform(0.05, 1.5, n - 1)
    mat = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    eigs = np.linalg.eigvalsh(mat)
    lams = np.linspace(eigs[0] - 1.0, eigs[-1] + 1.0, 37)
    counts = [sturm_count(diag, off, lam) for lam in lams]
    assert counts == sorted(counts)
    assert counts[0] == 0
    assert counts[-1] == n
    for lam, count in zip(lams, counts):
        assert count == int(np.sum(eigs < lam))


def test_sturm_count_shape_guard():
    with pytest.raises(DomainError):
        sturm_count(np.ones(4), np.ones(4), 0.0)


def test_auto_box_benchmark_band(bench_qes):
    box = auto_box(qes_sextic_coeffs(bench_qes), 4)
    assert 3.2 <= box.x_max <= 4.5
    assert box.x_min == pytest.approx(box.x_max / 2000.0)
    assert box.n_points == 4000


def test_auto_box_pure_sextic():
    box = auto_box(PotentialCoeffs(0.0, 0.0, 0.0, 1.0), 1)
    assert 1.5 <= box.x_max <= 4.5
    assert box.parity == "odd"
    assert box.x_min == 0.0


def test_auto_box_deep_double_well_is_wider():
    deep = auto_box(PotentialCoeffs(0.0, -500.0, 0.0, 1.0), 1)
    pure = auto_box(PotentialCoeffs(0.0, 0.0, 0.0, 1.0), 1)
    assert deep.x_max > pure.x_max


def test_auto_box_guards():
    with pytest.raises(DomainError):
        auto_box(PotentialCoeffs(0.0, 1.0, 0.0, 0.0), 1)  # v_6 = 0
    with pytest.raises(DomainError):
        auto_box(PotentialCoeffs(0.0, 0.0, 0.0, 1.0), 0)
    with pytest.raises(DomainError):
        auto_box(PotentialCoeffs(0.0, 0.0, 0.0, 1.0), 1, parity="none")


def test_auto_box_sweep_exhaustion():
    # a barely confining well never clears the decay margin inside the sweep
    with pytest.raises(ConvergenceFailureError):
        auto_box(PotentialCoeffs(0.0, 0.0, 0.0, 1e-13), 1)


def test_truncated_box_warns(bench_qes):
    coeffs = qes_sextic_coeffs(bench_qes)
    d = Discretization(x_min=1e-3, x_max=2.0, n_points=800)
    with pytest.warns(DomainWarning):
        res = fd_eigenvalues(coeffs, d, 4)
    assert res.warnings
    assert "x_max" in res.warnings[0]


def test_discretization_invariants():
    with pytest.raises(DomainError):
        Discretization(x_min=-0.1, x_max=1.0)
    with pytest.raises(DomainError):
        Discretization(x_min=2.0, x_max=1.0)
    with pytest.raises(DomainError):
        Discretization(x_min=0.0, x_max=1.0, n_points=50)
    with pytest.raises(DomainError):
        Discretization(x_min=0.0, x_max=1.0, parity="sideways")
    with pytest.raises(DomainError):
        Discretization(x_min=0.5, x_max=1.0, parity="even")
    with pytest.raises(DomainError):
        Discretization(x_min=0.0, x_max=1.0, parity="odd", origin_exponent=1.0)


def test_fd_eigenvalues_guards(bench_qes):
    coeffs = qes_sextic_coeffs(bench_qes)
    good = Discretization(x_min=1e-3, x_max=3.5, n_points=400)
    with pytest.raises(DomainError):
        fd_eigenvalues(coeffs, good, 0)
    with pytest.raises(DomainError):
        fd_eigenvalues(coeffs, good, 101)  # k > n_points / 4
    with pytest.raises(DomainError):
        fd_eigenvalues(coeffs, Discretization(x_min=0.0, x_max=3.5), 2)
    with pytest.raises(DomainError):
        fd_eigenvalues(
            coeffs, Discretization(x_min=0.0, x_max=3.5, parity="odd"), 2
        )


def test_qes_discretization_cases(bench_qes):
    coeffs = qes_sextic_coeffs(bench_qes)
    box = qes_discretization(coeffs, 2.0, 4)
    assert box.parity == "none"
    assert box.origin_exponent == pytest.approx(1.5)

    even_coeffs = qes_sextic_coeffs(QesParams(a=1.0, b=0.0, s=0.25, M=1))
    even = qes_discretization(even_coeffs, 0.5, 2)
    assert even.parity == "even"
    assert even.origin_exponent is None

    odd_coeffs = qes_sextic_coeffs(QesParams(a=1.0, b=0.0, s=0.75, M=1))
    odd = qes_discretization(odd_coeffs, 1.5, 2)
    assert odd.parity == "odd"

    with pytest.raises(DomainError):
        qes_discretization(coeffs, 0.4, 2)
