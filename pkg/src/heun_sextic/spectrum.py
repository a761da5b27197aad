"""Bound-state spectrum from the termination polynomial.

Roots of the monic termination polynomial are located with the companion
matrix method and sharpened with one Newton step each. For delta = 0 the
energy of a root is E = -q; levels are reported in ascending energy order
with n = 0 the lowest, and each level carries its expansion coefficients
c_0..c_M (c_0 = 1).

For gamma > 0 all M+1 roots are in fact real and simple: the determinant
recursion is the characteristic recursion of a Jacobi (symmetric
tridiagonal) matrix with positive off-diagonal products
-eps k (M-k+1) (M-k+gamma). The real/simple guards below therefore only
fire on numerically degenerate input, and they fail loudly rather than
repair anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComplexRootsError, DomainError, MultipleRootError, UnsupportedError
from .params import BheParams, QesParams, qes_to_bhe
from .recurrence import (
    ExpansionConfig,
    TerminationPolynomial,
    coefficient_sequence,
    termination_polynomial,
)

__all__ = [
    "IMAG_FILTER_TOL",
    "DEGENERATE_ROOT_TOL",
    "EigenLevel",
    "Spectrum",
    "SymmetryReport",
    "solve_spectrum",
    "solve_spectrum_qes",
    "closed_form_energies",
    "verify_symmetry",
]

#: A root is accepted as real when |Im| <= IMAG_FILTER_TOL * (1 + |root|).
IMAG_FILTER_TOL = 1e-8

#: Roots closer than this (relative) are reported as multiple.
DEGENERATE_ROOT_TOL = 1e-8


@dataclass(frozen=True)
class EigenLevel:
    """One closed-form level: index, energy, q-root, expansion coefficients."""

    n: int
    energy: float
    q_root: float
    coefficients: tuple[float, ...]


@dataclass(frozen=True)
class Spectrum:
    """Ascending closed-form levels of one parameter set."""

    params: BheParams
    M: int
    levels: tuple[EigenLevel, ...]

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    @property
    def q_roots(self) -> np.ndarray:
        return np.array([lv.q_root for lv in self.levels])


def _real_roots(poly: TerminationPolynomial) -> np.ndarray:
    desc = np.array(poly.coefficients[::-1])
    raw = np.roots(desc)  # companion-matrix eigenvalues
    keep = np.abs(raw.imag) <= IMAG_FILTER_TOL * (1.0 + np.abs(raw))
    roots = raw[keep].real
    if roots.size < poly.degree:
        raise ComplexRootsError(
            f"only {roots.size} of {poly.degree} termination roots are real; "
            f"imaginary parts exceed the filter threshold"
        )
    # One Newton step per root; near-zero derivative would signal a multiple
    # root, which the separation check below reports properly.
    deriv = poly.deriv_eval(roots)
    step = np.where(deriv != 0.0, poly.eval(roots) / np.where(deriv == 0.0, 1.0, deriv), 0.0)
    roots = roots - step
    order = np.argsort(roots)
    roots = roots[order]
    for i in range(roots.size - 1):
        gap = roots[i + 1] - roots[i]
        scale = max(1.0, abs(roots[i]), abs(roots[i + 1]))
        if gap <= DEGENERATE_ROOT_TOL * scale:
            raise MultipleRootError(
                f"termination roots {roots[i]!r} and {roots[i+1]!r} are not "
                f"separated at relative tolerance {DEGENERATE_ROOT_TOL}"
            )
    return roots


def solve_spectrum(p: BheParams, M: int) -> Spectrum:
    """All M+1 closed-form levels for the reduced (delta = 0) pipeline.

    Requires gamma >= 1/2 (radial problems with wavefunctions vanishing at
    the origin, including the parity cases gamma = 1/2 and 3/2).
    """
    if p.gamma < 0.5:
        raise DomainError(
            f"gamma must be at least 1/2 for normalizable levels, got {p.gamma}"
        )
    cfg = ExpansionConfig.for_params(p)
    poly = termination_polynomial(M, p, cfg)  # validates delta, epsilon, alpha
    q_roots = _real_roots(poly)
    levels = []
    # E = -q - gamma delta / 2; delta = 0 in the validated pipeline.
    for n, q in enumerate(q_roots[::-1]):
        energy = -q - p.gamma * p.delta / 2.0
        coeffs = coefficient_sequence(p, q, cfg, N=M)
        levels.append(
            EigenLevel(
                n=n,
                energy=float(energy),
                q_root=float(q),
                coefficients=tuple(float(c) for c in coeffs),
            )
        )
    return Spectrum(params=p, M=int(M), levels=tuple(levels))


def solve_spectrum_qes(p: QesParams) -> Spectrum:
    """Convenience wrapper taking well-side parameters."""
    return solve_spectrum(qes_to_bhe(p), p.M)


def closed_form_energies(p: QesParams) -> np.ndarray:
    """Explicit energies for b = 0 and M <= 3, ascending.

    The closed forms are stated per level with sign and parity bookkeeping;
    they come out already ascending, which the tests assert, and this
    function sorts defensively so the documented order is unconditional.
    """
    if p.b != 0.0:
        raise UnsupportedError("closed-form energies require b = 0")
    if p.M > 3:
        raise UnsupportedError(f"closed-form energies cover M <= 3, got M = {p.M}")
    a, s = p.a, p.s
    if p.M == 0:
        energies = [0.0]
    elif p.M == 1:
        r = math.sqrt(32.0 * a * s)
        energies = [(-1.0) ** (n + 1) * r for n in range(2)]
    elif p.M == 2:
        r = math.sqrt(32.0 * a * (4.0 * s + 1.0))
        energies = [(n - 1.0) * r for n in range(3)]
    else:
        half = s + 0.5
        inner = math.sqrt(25.0 * half**2 - 9.0 * s * (s + 1.0))
        energies = [
            (-1.0) ** (n // 2 + 1)
            * math.sqrt(32.0 * a * (5.0 * half + (-1.0) ** ((n + 1) // 2) * inner))
            for n in range(4)
        ]
    return np.sort(np.array(energies))


@dataclass(frozen=True)
class SymmetryReport:
    """Result of the E -> -E pairing check for delta = 0 spectra."""

    passed: bool
    worst_mismatch: float
    pairs: tuple[tuple[int, int], ...]


def verify_symmetry(sp: Spectrum, tol: float = 1e-10) -> SymmetryReport:
    """Pair each level n with its mirror M-n and check E_n = -E_{M-n}.

    When M is even the middle level pairs with itself, forcing E = 0 there.
    The mismatch scale is max|E| (or 1 for an all-zero spectrum).
    """
    energies = sp.energies
    scale = max(float(np.max(np.abs(energies))), 1e-300) if energies.size else 1.0
    if energies.size and np.max(np.abs(energies)) == 0.0:
        scale = 1.0
    worst = 0.0
    pairs = []
    m_top = len(energies) - 1
    for i in range(len(energies)):
        j = m_top - i
        if j < i:
            break
        pairs.append((i, j))
        worst = max(worst, abs(energies[i] + energies[j]))
    return SymmetryReport(
        passed=bool(worst <= tol * scale),
        worst_mismatch=float(worst),
        pairs=tuple(pairs),
    )
