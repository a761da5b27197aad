"""Independent finite-difference eigensolver used to validate spectra.

The radial Schrodinger problem -psi'' + V psi = E psi is discretized with
the three-point second difference on a uniform grid, giving a symmetric
tridiagonal matrix. Eigenvalues are located by bisection on the Sturm
sequence count (LDL^T pivot signs); no dense eigensolver is involved. Each
result is computed on two grids (h and h/2), Richardson-extrapolated, and
reported with the error bar |E_h - E_{h/2}| / 3.

This module never imports the recurrence or spectrum machinery; it consumes
only potential coefficients plus boundary data, so agreement with the
closed-form spectra is a genuine cross-check.

Boundary handling
-----------------
The outer boundary is always Dirichlet in a box chosen so the potential wall
exceeds the highest requested level by a wide margin (``auto_box``). The
inner boundary defaults to Dirichlet at a small x_min > 0, with two
refinements:

* parity reductions for v_m2 = 0: "odd" solves with a Dirichlet node at
  x = 0, "even" uses a half-integer staggered grid with a mirror row, the
  two sectors of the corresponding full-line problem;
* an optional ``origin_exponent`` p replaces the inner Dirichlet row by the
  one-sided ratio psi(x_min) = psi(x_1) (x_min/x_1)^p, pinning the x^p
  behaviour of the target solution at the origin.

The exponent option matters because for -1/4 < v_m2 < 3/4 both solutions
x^(p+-), p+- = 1/2 +- sqrt(1/4 + v_m2), are normalizable at the origin and
plain Dirichlet truncation converges to the larger exponent only. Families
whose bound states carry the smaller exponent (gamma between 1/2 and 1,
i.e. s between 1/4 and 1/2) are then missed by order-one amounts that no
h-refinement error bar can expose; measured example: gamma = 0.6 well,
Dirichlet error 4.5e-1 with a 1.9e-7 error bar, exponent-pinned error
1.5e-2 with an honest 1.7e-2 error bar.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from numba import njit
from scipy.linalg import solve_banded

from .errors import ConvergenceFailureError, DomainError, DomainWarning
from .params import PotentialCoeffs, potential_eval

__all__ = [
    "BISECTION_TOL",
    "Discretization",
    "OracleResult",
    "sturm_count",
    "fd_eigenvalues",
    "auto_box",
]

#: Absolute bisection tolerance on eigenvalues before extrapolation.
BISECTION_TOL = 1e-12

_PARITIES = ("none", "even", "odd")


@dataclass(frozen=True)
class Discretization:
    """Uniform-grid setup: box, resolution, and inner-boundary treatment.

    ``n_points`` counts interior grid points of the coarse grid; the fine
    grid of the Richardson pair has 2 n_points + 1, which halves h exactly.
    ``parity`` selects the full-line sector reductions (v_m2 = 0 only) and
    forces x_min = 0. ``origin_exponent`` activates the power-law inner row.
    """

    x_min: float
    x_max: float
    n_points: int = 4000
    parity: str = "none"
    origin_exponent: "float | None" = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise DomainError("box limits must be finite")
        if not 0.0 <= self.x_min < self.x_max:
            raise DomainError(
                f"need 0 <= x_min < x_max, got [{self.x_min}, {self.x_max}]"
            )
        if self.n_points < 100:
            raise DomainError(f"n_points must be at least 100, got {self.n_points}")
        if self.parity not in _PARITIES:
            raise DomainError(f"parity must be one of {_PARITIES}")
        if self.parity != "none" and self.x_min != 0.0:
            raise DomainError("parity reductions require x_min = 0")
        if self.origin_exponent is not None:
            p = float(self.origin_exponent)
            if not math.isfinite(p):
                raise DomainError("origin_exponent must be finite")
            object.__setattr__(self, "origin_exponent", p)
            if self.parity != "none":
                raise DomainError("origin_exponent applies to the radial case only")


@dataclass(frozen=True)
class OracleResult:
    """Richardson-extrapolated eigenvalues with per-level error bars."""

    eigenvalues: tuple[float, ...]
    error_bars: tuple[float, ...]
    raw_coarse: tuple[float, ...]
    raw_fine: tuple[float, ...]
    discretization: Discretization
    warnings: tuple[str, ...] = ()


@njit(cache=True)
def _sturm_kernel(diag: np.ndarray, off2: np.ndarray, lam: float) -> int:
    count = 0
    d = diag[0] - lam
    if d < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        denom = d
        if denom == 0.0:
            denom = 1e-300
        d = (diag[i] - lam) - off2[i - 1] / denom
        if d < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_kernel(
    diag: np.ndarray, off2: np.ndarray, k: int, tol: float
) -> np.ndarray:
    n = diag.shape[0]
    lo = diag[0]
    hi = diag[0]
    for i in range(n):
        radius = 0.0
        if i > 0:
            radius += math.sqrt(off2[i - 1])
        if i < n - 1:
            radius += math.sqrt(off2[i])
        if diag[i] - radius < lo:
            lo = diag[i] - radius
        if diag[i] + radius > hi:
            hi = diag[i] + radius
    out = np.empty(k)
    for j in range(k):
        a = lo
        b = hi
        for _ in range(200):
            width = b - a
            # stop at the absolute tolerance or at float resolution
            if width <= tol or width <= 4e-16 * max(abs(a), abs(b)):
                break
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if _sturm_kernel(diag, off2, mid) >= j + 1:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
    return out


def sturm_count(diag: np.ndarray, off: np.ndarray, lam: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix below lam."""
    d = np.ascontiguousarray(diag, dtype=float)
    o = np.ascontiguousarray(off, dtype=float)
    if o.shape[0] != d.shape[0] - 1:
        raise DomainError("off-diagonal must have length len(diag) - 1")
    return int(_sturm_kernel(d, o * o, float(lam)))


def _assemble(coeffs: PotentialCoeffs, d: Discretization, n: int):
    """Tridiagonal (diag, off^2) for n interior points of the given setup."""
    if d.parity == "even":
        h = d.x_max / (n + 0.5)
        xs = (np.arange(n) + 0.5) * h
        diag = 2.0 / h**2 + potential_eval(coeffs, xs)
        diag[0] -= 1.0 / h**2  # mirror row: psi(-h/2) = psi(h/2)
    else:
        h = (d.x_max - d.x_min) / (n + 1)
        xs = d.x_min + h * np.arange(1, n + 1)
        diag = 2.0 / h**2 + potential_eval(coeffs, xs)
        if d.parity == "none" and d.origin_exponent is not None and d.x_min > 0.0:
            ratio = (d.x_min / xs[0]) ** d.origin_exponent
            diag[0] -= ratio / h**2
    off2 = np.full(n - 1, 1.0 / h**4)
    return np.ascontiguousarray(diag), np.ascontiguousarray(off2), xs, h


def _eigen_lowest(coeffs: PotentialCoeffs, d: Discretization, n: int, k: int):
    diag, off2, xs, h = _assemble(coeffs, d, n)
    return _bisect_kernel(diag, off2, k, BISECTION_TOL), diag, off2, xs, h


def _tail_amplitude(diag: np.ndarray, off2: np.ndarray, energy: float) -> float:
    """Relative eigenfunction amplitude at the outer boundary (inverse iteration)."""
    n = diag.shape[0]
    off = -np.sqrt(off2)
    shift = energy + 1e-9 * (1.0 + abs(energy))
    ab = np.zeros((3, n))
    ab[0, 1:] = off
    ab[1, :] = diag - shift
    ab[2, :-1] = off
    rng = np.random.default_rng(0)
    vec = rng.standard_normal(n)
    vec /= np.linalg.norm(vec)
    for _ in range(3):
        try:
            vec = solve_banded((1, 1), ab, vec)
        except np.linalg.LinAlgError:  # pragma: no cover - shifted, so unlikely
            return 0.0
        vec /= np.linalg.norm(vec)
    return float(abs(vec[-1]) / np.max(np.abs(vec)))


def fd_eigenvalues(coeffs: PotentialCoeffs, d: Discretization, k: int) -> OracleResult:
    """Lowest k eigenvalues of the discretized problem, extrapolated in h.

    Parameters
    ----------
    coeffs : PotentialCoeffs
        Potential description; v_m2 != 0 requires d.x_min > 0.
    d : Discretization
        Box, resolution and boundary treatment.
    k : int
        Number of eigenvalues, counted from the bottom.

    Returns
    -------
    OracleResult
        Extrapolated eigenvalues (4 E_fine - E_coarse)/3, error bars
        |E_coarse - E_fine|/3 floored at float resolution, both raw sets,
        and a warning entry when the top eigenfunction has not decayed at
        the outer boundary (also emitted as DomainWarning).
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if k > d.n_points // 4:
        raise DomainError(f"k = {k} too large for n_points = {d.n_points}")
    if coeffs.v_m2 != 0.0 and d.parity == "none" and d.x_min <= 0.0:
        raise DomainError("v_m2 != 0 requires x_min > 0")
    if coeffs.v_m2 != 0.0 and d.parity != "none":
        raise DomainError("parity reductions apply to v_m2 = 0 potentials only")

    n = d.n_points
    coarse, *_ = _eigen_lowest(coeffs, d, n, int(k))
    fine, diag_f, off2_f, _, _ = _eigen_lowest(coeffs, d, 2 * n + 1, int(k))
    extrap = (4.0 * fine - coarse) / 3.0
    bars = np.abs(coarse - fine) / 3.0
    bars = np.maximum(bars, 4e-16 * (1.0 + np.abs(extrap)))

    notes: list[str] = []
    tail = _tail_amplitude(diag_f, off2_f, float(fine[-1]))
    if tail > 1e-6:
        message = (
            f"eigenfunction {k - 1} has relative amplitude {tail:.2e} at "
            f"x_max = {d.x_max}; enlarge the box"
        )
        notes.append(message)
        warnings.warn(message, DomainWarning, stacklevel=2)

    return OracleResult(
        eigenvalues=tuple(float(v) for v in extrap),
        error_bars=tuple(float(v) for v in bars),
        raw_coarse=tuple(float(v) for v in coarse),
        raw_fine=tuple(float(v) for v in fine),
        discretization=d,
        warnings=tuple(notes),
    )


def _outer_crossing(xs: np.ndarray, values: np.ndarray, threshold: float) -> float:
    """Smallest sweep point beyond which values stay at or above threshold."""
    below = np.nonzero(values < threshold)[0]
    if below.size == 0:
        return float(xs[0])
    idx = below[-1] + 1
    if idx >= xs.size:
        raise ConvergenceFailureError(
            "potential never exceeds the requested wall height inside the sweep"
        )
    return float(xs[idx])


def auto_box(
    coeffs: PotentialCoeffs,
    k: int,
    parity: str = "odd",
    n_points: int = 4000,
) -> Discretization:
    """Choose a box for the lowest k levels of a confining (v_6 > 0) well.

    A coarse solve on a generous box estimates E_{k-1}; the production box
    then ends half a decade past the point where V clears that estimate by
    40, so the Dirichlet wall sits deep inside the forbidden region (the
    decay check in ``fd_eigenvalues`` re-validates this). For v_m2 != 0 the
    inner edge is x_max/2000; otherwise the requested parity reduction of
    the full-line problem is used. The returned setup always has
    origin_exponent = None; callers pinning a specific x^p origin behaviour
    set it afterwards via dataclasses.replace.
    """
    if coeffs.v_6 <= 0:
        raise DomainError(f"auto_box requires v_6 > 0, got {coeffs.v_6}")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if parity not in ("even", "odd"):
        raise DomainError("parity must be 'even' or 'odd'")

    sweep = np.geomspace(0.02, 200.0, 2000)
    values = potential_eval(coeffs, sweep)
    v_floor = float(np.min(values))

    x_big = max(_outer_crossing(sweep, values, v_floor + 1e4), 1.0)
    radial = coeffs.v_m2 != 0.0
    probe = Discretization(
        x_min=x_big / 2000.0 if radial else 0.0,
        x_max=x_big,
        n_points=600,
        parity="none" if radial else parity,
    )
    estimate, *_ = _eigen_lowest(coeffs, probe, probe.n_points, int(k))
    e_top = float(estimate[-1])

    x_req = _outer_crossing(sweep, values, e_top + 40.0)
    x_max = max(1.5 * x_req, 1.0)
    return Discretization(
        x_min=x_max / 2000.0 if radial else 0.0,
        x_max=x_max,
        n_points=n_points,
        parity="none" if radial else parity,
        origin_exponent=None,
    )


def qes_discretization(
    coeffs: PotentialCoeffs,
    gamma: float,
    k: int,
    n_points: int = 4000,
) -> Discretization:
    """Box plus boundary treatment matching a gamma-labelled radial family.

    Convenience used by the verification layers: gamma = 1/2 and 3/2 map to
    the even and odd sector reductions, any other gamma >= 1/2 to the radial
    box with the origin exponent pinned to gamma - 1/2.
    """
    if gamma < 0.5:
        raise DomainError(f"gamma must be at least 1/2, got {gamma}")
    if gamma in (0.5, 1.5):
        return auto_box(coeffs, k, parity="even" if gamma == 0.5 else "odd",
                        n_points=n_points)
    box = auto_box(coeffs, k, n_points=n_points)
    return replace(box, origin_exponent=gamma - 0.5)
