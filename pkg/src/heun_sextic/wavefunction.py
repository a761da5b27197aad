"""Analytic wavefunctions: Hermite-series assembly and validation helpers.

A level with expansion coefficients c_0..c_M becomes

    psi(x) = (x^2)^(gamma/2 - 1/4) exp(eps x^4/64 + delta x^2/8)
             * sum_n c_n H_n(s0 (x^2/4 + z0)),

with s0 = sqrt(-eps/2) and z0 = delta/eps (0 in the validated delta = 0
pipeline, where the Hermite argument reduces to sqrt(-eps/32) x^2).

Hermite polynomials are the physicists' family, evaluated with the upward
recurrence H_{n+1} = 2 t H_n - 2 n H_{n-1}; the derivative values used for
the exact second derivative are propagated through the differentiated
recurrence rather than re-derived from H'_n = 2 n H_{n-1}, so that identity
stays an independent check.

Everything downstream of the series is exact algebra: the second derivative
is assembled analytically (no finite differences), and the Schrodinger
residual max |psi'' - (V - E) psi| / (|V - E| max|psi| + 1) is the primary
internal consistency check for spectra and potentials together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    IncompatibleShapesError,
    UnresolvedNodesError,
    UnsupportedError,
)
from .params import BheParams, PotentialCoeffs, QesParams, potential_eval
from .spectrum import EigenLevel, closed_form_energies

__all__ = [
    "hermite_eval",
    "hermite_identity_check",
    "WavefunctionExpansion",
    "GridFunction",
    "build_wavefunction",
    "eval_wavefunction",
    "eval_wavefunction_d2",
    "schrodinger_residual",
    "count_nodes",
    "ClosedFormWavefunction",
    "closed_form_wavefunction",
    "proportionality_check",
]


def _hermite_table(nmax: int, t: np.ndarray) -> np.ndarray:
    """H_0..H_nmax stacked along axis 0, upward recurrence."""
    table = np.zeros((nmax + 1,) + t.shape)
    table[0] = 1.0
    if nmax >= 1:
        table[1] = 2.0 * t
    for n in range(1, nmax):
        table[n + 1] = 2.0 * t * table[n] - 2.0 * n * table[n - 1]
    return table


def hermite_eval(n: int, t: "float | np.ndarray") -> "float | np.ndarray":
    """Physicists' Hermite polynomial H_n(t), scalar or array t."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = _hermite_table(int(n), arr)[int(n)]
    return float(out[0]) if np.isscalar(t) else out.reshape(np.shape(t))


def hermite_identity_check(n: int, t: "float | np.ndarray") -> tuple[float, float]:
    """Relative residuals of the two structure identities at index n.

    First: the derivative relation H'_n = 2 n H_{n-1}, with H'_n obtained by
    differentiating the evaluation recurrence term by term. Second: the
    argument shift t H_n = n H_{n-1} + H_{n+1}/2. Residuals are normalized
    pointwise by (1 + max(|lhs|, |rhs|)) and the maximum over t is returned.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    table = _hermite_table(n + 1, arr)
    # d/dt of the recurrence: H'_{k+1} = 2 H_k + 2 t H'_k - 2 k H'_{k-1}
    dprev = np.zeros_like(arr)
    dcurr = np.zeros_like(arr)
    for k in range(0, n):
        dnext = 2.0 * table[k] + 2.0 * arr * dcurr - 2.0 * k * dprev
        dprev, dcurr = dcurr, dnext
    lhs1 = dcurr
    rhs1 = 2.0 * n * (table[n - 1] if n >= 1 else np.zeros_like(arr))
    res1 = np.abs(lhs1 - rhs1) / (1.0 + np.maximum(np.abs(lhs1), np.abs(rhs1)))
    lhs2 = arr * table[n]
    rhs2 = (n * table[n - 1] if n >= 1 else np.zeros_like(arr)) + 0.5 * table[n + 1]
    res2 = np.abs(lhs2 - rhs2) / (1.0 + np.maximum(np.abs(lhs2), np.abs(rhs2)))
    return float(np.max(res1)), float(np.max(res2))


@dataclass(frozen=True)
class WavefunctionExpansion:
    """Assembled Hermite-series wavefunction for one level."""

    gamma: float
    delta: float
    epsilon: float
    s0: float
    z0: float
    coefficients: tuple[float, ...]
    energy: float

    def __call__(self, x: "float | np.ndarray") -> "float | np.ndarray":
        return eval_wavefunction(self, x)


@dataclass(frozen=True)
class GridFunction:
    """Sampled function on a strictly increasing grid."""

    xs: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.xs) != len(self.values):
            raise DomainError("xs and values must have equal length")
        if len(self.xs) >= 2 and not np.all(np.diff(np.array(self.xs)) > 0):
            raise DomainError("grid must be strictly increasing")


def build_wavefunction(level: EigenLevel, p: BheParams) -> WavefunctionExpansion:
    """Attach the analytic prefactor data to a solved level."""
    if p.epsilon >= 0:
        raise DomainError(f"epsilon must be negative, got {p.epsilon}")
    if p.gamma < 0.5:
        raise DomainError(f"gamma must be at least 1/2, got {p.gamma}")
    s0 = math.sqrt(-p.epsilon / 2.0)
    z0 = p.delta / p.epsilon
    return WavefunctionExpansion(
        gamma=p.gamma,
        delta=p.delta,
        epsilon=p.epsilon,
        s0=s0,
        z0=z0,
        coefficients=tuple(level.coefficients),
        energy=level.energy,
    )


def _series_parts(w: WavefunctionExpansion, x: np.ndarray) -> tuple[np.ndarray, ...]:
    """Hermite series S and its first two x-derivatives on x > 0."""
    u = w.s0 * (x * x / 4.0 + w.z0)
    nmax = len(w.coefficients) - 1
    table = _hermite_table(nmax, u)
    s = np.zeros_like(x)
    s_u = np.zeros_like(x)
    s_uu = np.zeros_like(x)
    for k, c in enumerate(w.coefficients):
        s += c * table[k]
        if k >= 1:
            s_u += c * 2.0 * k * table[k - 1]
        if k >= 2:
            s_uu += c * 4.0 * k * (k - 1) * table[k - 2]
    du = w.s0 * x / 2.0
    ddu = w.s0 / 2.0
    return s, s_u * du, s_uu * du * du + s_u * ddu


def _prefactor_logderivs(
    w: WavefunctionExpansion, x: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Prefactor A, A'/A and (A'/A)' for A = (x^2)^g exp(eps x^4/64 + delta x^2/8)."""
    g = w.gamma / 2.0 - 0.25
    a_val = (x * x) ** g * np.exp(w.epsilon * x**4 / 64.0 + w.delta * x * x / 8.0)
    lg = 2.0 * g / x + w.epsilon * x**3 / 16.0 + w.delta * x / 4.0
    lg_p = -2.0 * g / (x * x) + 3.0 * w.epsilon * x * x / 16.0 + w.delta / 4.0
    return a_val, lg, lg_p


def eval_wavefunction(
    w: WavefunctionExpansion,
    x: "float | np.ndarray",
    extension: str = "radial",
) -> "float | np.ndarray":
    """Evaluate psi on the radial half-line, or extended to the full line.

    extension = "radial" demands x > 0. "even" evaluates psi(|x|), the
    natural extension for gamma = 1/2; "odd" evaluates sign(x) psi(|x|),
    matching gamma = 3/2. At x = 0 the extensions use the limiting value.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if extension == "radial":
        if np.any(arr <= 0):
            raise DomainError("radial evaluation requires x > 0")
        mag = arr
        sign = np.ones_like(arr)
    elif extension in ("even", "odd"):
        mag = np.abs(arr)
        sign = np.sign(arr) if extension == "odd" else np.ones_like(arr)
    else:
        raise DomainError(f"unknown extension {extension!r}")

    out = np.zeros_like(mag)
    pos = mag > 0
    if np.any(pos):
        xp = mag[pos]
        s, _, _ = _series_parts(w, xp)
        a_val, _, _ = _prefactor_logderivs(w, xp)
        out[pos] = a_val * s
    if np.any(~pos):
        # limit at the origin: prefactor -> 1 for gamma = 1/2, else 0
        if w.gamma == 0.5:
            u0 = np.array([w.s0 * w.z0])
            table = _hermite_table(len(w.coefficients) - 1, u0)
            s0val = sum(c * table[k][0] for k, c in enumerate(w.coefficients))
            out[~pos] = s0val
        else:
            out[~pos] = 0.0
    out = out * sign
    return float(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))


def eval_wavefunction_d2(
    w: WavefunctionExpansion, x: "float | np.ndarray"
) -> "float | np.ndarray":
    """Exact second derivative psi''(x) on x > 0."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr <= 0):
        raise DomainError("second derivative requires x > 0")
    s, s_x, s_xx = _series_parts(w, arr)
    a_val, lg, lg_p = _prefactor_logderivs(w, arr)
    out = a_val * ((lg * lg + lg_p) * s + 2.0 * lg * s_x + s_xx)
    return float(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))


def schrodinger_residual(
    w: WavefunctionExpansion,
    coeffs: PotentialCoeffs,
    grid: np.ndarray,
) -> float:
    """max over the grid of |psi'' - (V - E) psi| / (|V - E| max|psi| + 1)."""
    xs = np.asarray(grid, dtype=float)
    if xs.size == 0:
        raise DomainError("grid must be non-empty")
    if np.any(xs <= 0):
        raise DomainError("residual grid must satisfy x > 0")
    psi = eval_wavefunction(w, xs)
    d2 = eval_wavefunction_d2(w, xs)
    v_min_e = potential_eval(coeffs, xs) - w.energy
    denom = np.abs(v_min_e) * np.max(np.abs(psi)) + 1.0
    return float(np.max(np.abs(d2 - v_min_e * psi) / denom))


def count_nodes(w: WavefunctionExpansion, grid: np.ndarray, max_refine: int = 5) -> int:
    """Sign changes of psi strictly inside (grid[0], grid[-1]).

    The count is recomputed on uniform grids of doubling density spanning the
    same interval until two consecutive refinement levels agree; failure to
    stabilize within ``max_refine`` refinements raises UnresolvedNodesError.
    """
    xs = np.asarray(grid, dtype=float)
    if xs.size < 8:
        raise DomainError("node counting needs at least 8 grid points")
    if np.any(xs <= 0):
        raise DomainError("node counting grid must satisfy x > 0")

    def count_on(points: np.ndarray) -> int:
        vals = eval_wavefunction(w, points)
        signs = np.sign(vals)
        signs = signs[signs != 0]
        return int(np.sum(signs[1:] != signs[:-1]))

    lo, hi, n = float(xs[0]), float(xs[-1]), xs.size
    prev = count_on(xs)
    for _ in range(max_refine):
        n = 2 * n - 1
        curr = count_on(np.linspace(lo, hi, n))
        if curr == prev:
            return curr
        prev = curr
    raise UnresolvedNodesError(
        f"node count did not stabilize after {max_refine} refinements "
        f"(last count {prev})"
    )


@dataclass(frozen=True)
class ClosedFormWavefunction:
    """Explicit polynomial-times-prefactor wavefunction for b = 0, M <= 3.

    ``poly_x2`` is ascending in y = x^2; the full function is
    (x^2)^(s-1/4) exp(-a x^4/4) * poly(y).
    """

    a: float
    s: float
    M: int
    n: int
    energy: float
    poly_x2: tuple[float, ...]

    def __call__(self, x: "float | np.ndarray") -> "float | np.ndarray":
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(arr <= 0):
            raise DomainError("closed-form evaluation requires x > 0")
        y = arr * arr
        poly = np.zeros_like(arr)
        for coef in reversed(self.poly_x2):
            poly = poly * y + coef
        out = (arr * arr) ** (self.s - 0.25) * np.exp(-self.a * arr**4 / 4.0) * poly
        return float(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))


def closed_form_wavefunction(p: QesParams, n: int) -> ClosedFormWavefunction:
    """Explicit level-n wavefunction for b = 0 and M <= 3 (ascending n)."""
    if p.b != 0.0:
        raise UnsupportedError("closed-form wavefunctions require b = 0")
    if p.M > 3:
        raise UnsupportedError(f"closed-form wavefunctions cover M <= 3, got {p.M}")
    if not 0 <= n <= p.M:
        raise DomainError(f"level index n = {n} outside 0..{p.M}")
    energy = float(closed_form_energies(p)[n])
    a, s = p.a, p.s
    if p.M == 0:
        poly = (1.0,)
    elif p.M == 1:
        poly = (-energy / 4.0, a)
    elif p.M == 2:
        poly = (energy**2 / (32.0 * a) - 2.0 * s - 1.0, -energy / 4.0, a)
    else:
        poly = (
            -(energy**3) / (384.0 * a) + (7.0 * s + 5.0) * energy / 12.0,
            (energy**2 - 96.0 * a * (s + 1.0)) / 32.0,
            -a * energy / 4.0,
            a**2,
        )
    return ClosedFormWavefunction(
        a=a, s=s, M=p.M, n=int(n), energy=energy, poly_x2=poly
    )


def proportionality_check(
    wa,
    wb,
    grid: np.ndarray,
    tol: float = 1e-8,
    support_cut: float = 1e-3,
) -> tuple[float, float]:
    """Estimate the constant ratio wa/wb away from nodes and bound its drift.

    Both arguments are callables on x > 0. Points where either function is
    below ``support_cut`` of its own peak are excluded (nodes and deep
    tails). Returns (ratio, max relative deviation); deviation beyond
    ``tol`` raises IncompatibleShapesError.
    """
    xs = np.asarray(grid, dtype=float)
    va = np.asarray(wa(xs), dtype=float)
    vb = np.asarray(wb(xs), dtype=float)
    mask = (np.abs(va) > support_cut * np.max(np.abs(va))) & (
        np.abs(vb) > support_cut * np.max(np.abs(vb))
    )
    if not np.any(mask):
        raise IncompatibleShapesError("no shared support away from nodes")
    ratios = va[mask] / vb[mask]
    ratio = float(np.median(ratios))
    if ratio == 0.0:
        raise IncompatibleShapesError("degenerate ratio estimate 0")
    deviation = float(np.max(np.abs(ratios - ratio) / abs(ratio)))
    if deviation > tol:
        raise IncompatibleShapesError(
            f"functions deviate from proportionality by {deviation:.3e} "
            f"(tolerance {tol:.3e})"
        )
    return ratio, deviation
