"""Self-contained property suite bundling the cross-checks of every module.

Each check compares two independent routes to the same quantity (recurrence
vs closed forms, analytic derivatives vs the equation, polynomial roots vs a
symmetric-tridiagonal companion, series spectra vs the finite-difference
solver) and reports a measured worst case against its threshold. The suite
is deterministic: all random draws come from one seeded generator.

``run_suite`` returns a plain dict ready for JSON emission; the CLI ``verify``
command is a thin wrapper around it. The ``inject_wrong_centrifugal`` switch
deliberately mis-sets the x^-2 coefficient to (gamma - 1/2)(gamma - 5/2) in
the residual check, demonstrating that the suite catches the error (the
correct coefficient is (gamma - 1/2)(gamma - 3/2); see the params module).
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass, replace

import numpy as np

from .oracle import auto_box, fd_eigenvalues, qes_discretization, sturm_count
from .params import BheParams, QesParams, qes_sextic_coeffs, qes_to_bhe
from .recurrence import (
    coefficient_sequence,
    recurrence_coeffs,
    termination_polynomial,
)
from .spectrum import (
    closed_form_energies,
    solve_spectrum,
    solve_spectrum_qes,
    verify_symmetry,
)
from .wavefunction import (
    build_wavefunction,
    closed_form_wavefunction,
    count_nodes,
    hermite_identity_check,
    proportionality_check,
    schrodinger_residual,
)

__all__ = ["CheckResult", "run_suite", "DEFAULT_TOL"]

#: Default verification tolerance (residual and proportionality checks).
DEFAULT_TOL = 1e-8

_SEED = 20260815

#: Reference parameters of the benchmark well (gamma=2, delta=0, eps=-16,
#: alpha=48), i.e. a=1, b=0, s=1, M=3.
_BENCH_QES = QesParams(a=1.0, b=0.0, s=1.0, M=3)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one property check."""

    name: str
    passed: bool
    measure: float
    threshold: float
    detail: str

    def __post_init__(self) -> None:
        # plain builtins so the verdict dict serializes as-is
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "measure", float(self.measure))
        object.__setattr__(self, "threshold", float(self.threshold))


def _closed_form_termination(M: int, gamma: float, eps: float) -> np.ndarray:
    """Ascending coefficients of the termination polynomial, M <= 3."""
    if M == 0:
        return np.array([0.0, 1.0])
    if M == 1:
        return np.array([gamma * eps, 0.0, 1.0])
    if M == 2:
        return np.array([0.0, 2.0 * eps * (2.0 * gamma + 1.0), 0.0, 1.0])
    if M == 3:
        return np.array([
            9.0 * gamma * (gamma + 2.0) * eps**2,
            0.0,
            10.0 * eps * (gamma + 1.0),
            0.0,
            1.0,
        ])
    raise ValueError(f"no closed form for M = {M}")


def _check_hermite(tol: float) -> CheckResult:
    ts = np.linspace(-5.0, 5.0, 201)
    worst = 0.0
    for n in range(16):
        worst = max(worst, *hermite_identity_check(n, ts))
    return CheckResult(
        name="hermite-identities",
        passed=worst <= 1e-10,
        measure=worst,
        threshold=1e-10,
        detail="recurrence and derivative identities, n <= 15, t in [-5, 5]",
    )


def _check_recurrence_termination(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(10):
        gamma = rng.uniform(0.5, 6.0)
        eps = rng.uniform(-50.0, -0.5)
        M = int(rng.integers(0, 7))
        p = BheParams(gamma=gamma, delta=0.0, epsilon=eps, alpha=-M * eps)
        sp = solve_spectrum(p, M)
        for lv in sp.levels:
            c = np.array(lv.coefficients)
            q_m = recurrence_coeffs(M, p, lv.q_root).q_n
            acc = q_m * c[M]
            scale = abs(q_m * c[M])
            if M >= 1:
                p_m1 = recurrence_coeffs(M - 1, p, lv.q_root).p_n
                acc += p_m1 * c[M - 1]
                scale = max(scale, abs(p_m1 * c[M - 1]))
            worst = max(worst, abs(acc) / max(scale, 1.0))
    return CheckResult(
        name="recurrence-termination-consistency",
        passed=worst <= 1e-10,
        measure=worst,
        threshold=1e-10,
        detail="row M+1 of the recurrence closes at every solved q-root",
    )


def _check_termination_closed_forms(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(25):
        gamma = rng.uniform(0.5, 6.0)
        eps = rng.uniform(-50.0, -0.5)
        for M in range(4):
            p = BheParams(gamma=gamma, delta=0.0, epsilon=eps, alpha=-M * eps)
            got = np.array(termination_polynomial(M, p).coefficients)
            want = _closed_form_termination(M, gamma, eps)
            scale = np.maximum(np.abs(want), 1.0)
            worst = max(worst, float(np.max(np.abs(got - want) / scale)))
    return CheckResult(
        name="termination-closed-forms",
        passed=worst <= 1e-12,
        measure=worst,
        threshold=1e-12,
        detail="generated polynomials vs closed forms, M <= 3, 25 draws",
    )


def _jacobi_reference_poly(M: int, gamma: float, eps: float) -> np.ndarray:
    """Ascending char-poly coefficients from the equivalent symmetric matrix.

    The termination determinant is the characteristic polynomial of a
    tridiagonal matrix with zero diagonal and off-diagonal products
    P_{k-1} R_k; symmetrizing gives entries sqrt(-eps k (M-k+1) (M-k+gamma)).
    """
    n = M + 1
    off = np.array([
        math.sqrt(-eps * k * (M - k + 1) * (M - k + gamma)) for k in range(1, n)
    ])
    mat = np.diag(off, 1) + np.diag(off, -1)
    eig = np.linalg.eigvalsh(mat)
    return np.poly(eig)[::-1].real


def _check_termination_vs_jacobi(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(3):
        gamma = rng.uniform(0.5, 6.0)
        eps = rng.uniform(-20.0, -0.5)
        for M in (4, 5):
            p = BheParams(gamma=gamma, delta=0.0, epsilon=eps, alpha=-M * eps)
            got = np.array(termination_polynomial(M, p).coefficients)
            want = _jacobi_reference_poly(M, gamma, eps)
            scale = np.maximum(np.abs(want), 1.0)
            worst = max(worst, float(np.max(np.abs(got - want) / scale)))
    return CheckResult(
        name="termination-vs-tridiagonal",
        passed=worst <= 5e-6,
        measure=worst,
        threshold=5e-6,
        detail="M = 4, 5 polynomials vs symmetric-tridiagonal eigenvalues",
    )


def _check_spectrum_closed_forms(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        a = rng.uniform(0.1, 10.0)
        s = rng.uniform(0.25, 5.0)
        for M in (1, 2, 3):
            qp = QesParams(a=a, b=0.0, s=s, M=M)
            got = solve_spectrum_qes(qp).energies
            want = closed_form_energies(qp)
            scale = max(1.0, float(np.max(np.abs(want))))
            worst = max(worst, float(np.max(np.abs(got - want))) / scale)
    return CheckResult(
        name="spectrum-closed-forms",
        passed=worst <= 1e-10,
        measure=worst,
        threshold=1e-10,
        detail="recurrence energies vs closed forms, M in {1,2,3}, 50 draws",
    )


def _check_symmetry(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        gamma = rng.uniform(0.5, 6.0)
        eps = rng.uniform(-50.0, -0.5)
        for M in range(11):
            p = BheParams(gamma=gamma, delta=0.0, epsilon=eps, alpha=-M * eps)
            sp = solve_spectrum(p, M)
            rep = verify_symmetry(sp, tol=1e-10)
            scale = max(1.0, float(np.max(np.abs(sp.energies))))
            worst = max(worst, rep.worst_mismatch / scale)
    return CheckResult(
        name="spectrum-symmetry",
        passed=worst <= 1e-10,
        measure=worst,
        threshold=1e-10,
        detail="delta = 0 spectra symmetric under E -> -E, M <= 10",
    )


def _check_proportionality(tol: float) -> CheckResult:
    grid = np.linspace(0.05, 3.0, 400)
    worst = 0.0
    for M in range(4):
        qp = QesParams(a=1.0, b=0.0, s=1.0, M=M)
        sp = solve_spectrum_qes(qp)
        bhe = qes_to_bhe(qp)
        for lv in sp.levels:
            w = build_wavefunction(lv, bhe)
            cf = closed_form_wavefunction(qp, lv.n)
            _, dev = proportionality_check(w, cf, grid, tol=math.inf)
            worst = max(worst, dev)
    return CheckResult(
        name="wavefunction-proportionality",
        passed=worst <= tol,
        measure=worst,
        threshold=tol,
        detail="series wavefunctions vs closed forms, all levels, M <= 3",
    )


def _residual_cases(rng: np.random.Generator):
    yield _BENCH_QES
    for _ in range(12):
        yield QesParams(
            a=rng.uniform(0.5, 2.0),
            b=0.0,
            s=rng.uniform(0.25, 3.0),
            M=int(rng.integers(0, 7)),
        )


def _check_residual(
    rng: np.random.Generator, tol: float, inject_wrong_centrifugal: bool
) -> CheckResult:
    grid = np.linspace(0.05, 4.0, 320)
    worst = 0.0
    for qp in _residual_cases(rng):
        coeffs = qes_sextic_coeffs(qp)
        if inject_wrong_centrifugal:
            g = 2.0 * qp.s
            coeffs = replace(coeffs, v_m2=(g - 0.5) * (g - 2.5))
        sp = solve_spectrum_qes(qp)
        bhe = qes_to_bhe(qp)
        for lv in sp.levels:
            w = build_wavefunction(lv, bhe)
            worst = max(worst, schrodinger_residual(w, coeffs, grid))
    tag = " (wrong centrifugal form injected)" if inject_wrong_centrifugal else ""
    return CheckResult(
        name="schrodinger-residual",
        passed=worst <= tol,
        measure=worst,
        threshold=tol,
        detail=f"analytic second derivative vs (V - E) psi, M <= 6{tag}",
    )


def _check_wrong_centrifugal_control() -> CheckResult:
    qp = _BENCH_QES
    g = 2.0 * qp.s
    coeffs = replace(qes_sextic_coeffs(qp), v_m2=(g - 0.5) * (g - 2.5))
    sp = solve_spectrum_qes(qp)
    w = build_wavefunction(sp.levels[0], qes_to_bhe(qp))
    bad = schrodinger_residual(w, coeffs, np.linspace(0.05, 4.0, 320))
    return CheckResult(
        name="wrong-centrifugal-control",
        passed=bad > 1e-2,
        measure=bad,
        threshold=1e-2,
        detail="(gamma-1/2)(gamma-5/2) centrifugal form must fail the residual",
    )


def _check_nodes() -> CheckResult:
    grid = np.linspace(1e-2, 6.0, 3001)
    worst = 0
    for M in range(7):
        qp = QesParams(a=1.0, b=0.0, s=1.0, M=M)
        sp = solve_spectrum_qes(qp)
        bhe = qes_to_bhe(qp)
        for lv in sp.levels:
            nodes = count_nodes(build_wavefunction(lv, bhe), grid)
            worst = max(worst, abs(nodes - lv.n))
    return CheckResult(
        name="node-counts",
        passed=worst == 0,
        measure=float(worst),
        threshold=0.0,
        detail="level n has exactly n nodes on x > 0, M <= 6",
    )


def _check_oracle_agreement(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(6):
        a = rng.uniform(0.5, 2.0)
        s = rng.uniform(0.25, 3.0)
        for M in range(4):
            qp = QesParams(a=a, b=0.0, s=s, M=M)
            energies = solve_spectrum_qes(qp).energies
            coeffs = qes_sextic_coeffs(qp)
            box = qes_discretization(coeffs, 2.0 * qp.s, M + 1)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                res = fd_eigenvalues(coeffs, box, M + 1)
            for n in range(M + 1):
                allowed = max(1e-3, 5.0 * res.error_bars[n])
                err = abs(res.eigenvalues[n] - energies[n])
                worst = max(worst, err / allowed)
    return CheckResult(
        name="oracle-agreement",
        passed=worst <= 1.0,
        measure=worst,
        threshold=1.0,
        detail="finite-difference vs series energies, error over allowance",
    )


def _check_grid_convergence() -> CheckResult:
    coeffs = qes_sextic_coeffs(_BENCH_QES)
    exact = solve_spectrum_qes(_BENCH_QES).energies
    box = qes_discretization(coeffs, 2.0, 4, n_points=1000)
    res = fd_eigenvalues(coeffs, box, 4)
    ratios = [
        abs(res.raw_coarse[n] - exact[n]) / abs(res.raw_fine[n] - exact[n])
        for n in range(4)
    ]
    lo, hi = min(ratios), max(ratios)
    # second-order scheme: halving h divides the error by about 4
    passed = 2.5 <= lo and hi <= 6.0
    return CheckResult(
        name="oracle-grid-convergence",
        passed=passed,
        measure=hi if abs(hi - 4.0) > abs(lo - 4.0) else lo,
        threshold=4.0,
        detail="benchmark-well error ratio between h and h/2 grids",
    )


def _check_sturm(rng: np.random.Generator) -> CheckResult:
    n = 60
    diag = rng.uniform(-5.0, 5.0, n)
    off = rng.uniform(0.1, 2.0, n - 1)
    lams = np.sort(rng.uniform(-10.0, 10.0, 40))
    counts = [sturm_count(diag, off, lam) for lam in lams]
    violations = sum(1 for i in range(len(counts) - 1) if counts[i + 1] < counts[i])
    return CheckResult(
        name="sturm-count-monotonicity",
        passed=violations == 0 and counts[-1] <= n,
        measure=float(violations),
        threshold=0.0,
        detail="eigenvalue counts non-decreasing along a lambda sweep",
    )


def _check_auto_box() -> CheckResult:
    bench = auto_box(qes_sextic_coeffs(_BENCH_QES), 4)
    pure = auto_box(qes_sextic_coeffs(QesParams(a=1.0, b=0.0, s=0.75, M=0)), 1)
    ok = 3.2 <= bench.x_max <= 4.5 and 1.5 <= pure.x_max <= 4.5
    return CheckResult(
        name="auto-box",
        passed=ok,
        measure=bench.x_max,
        threshold=4.5,
        detail="box sizes land in the expected bands for reference wells",
    )


def run_suite(
    tol: "float | None" = None,
    inject_wrong_centrifugal: bool = False,
    seed: int = _SEED,
) -> dict:
    """Run every property check; returns a JSON-ready verdict dict.

    ``tol`` overrides the residual/proportionality tolerance (default 1e-8).
    A fixed seed keeps the draws, and therefore the output, reproducible.
    """
    if tol is None:
        tol = DEFAULT_TOL
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    checks = [
        _check_hermite(tol),
        _check_recurrence_termination(rng),
        _check_termination_closed_forms(rng),
        _check_termination_vs_jacobi(rng),
        _check_spectrum_closed_forms(rng),
        _check_symmetry(rng),
        _check_proportionality(tol),
        _check_residual(rng, tol, inject_wrong_centrifugal),
        _check_wrong_centrifugal_control(),
        _check_nodes(),
        _check_oracle_agreement(rng),
        _check_grid_convergence(),
        _check_sturm(rng),
        _check_auto_box(),
    ]
    elapsed = time.perf_counter() - start
    return {
        "tolerance": tol,
        "seed": seed,
        "all_passed": all(c.passed for c in checks),
        "runtime_seconds": elapsed,
        "checks": [asdict(c) for c in checks],
    }
