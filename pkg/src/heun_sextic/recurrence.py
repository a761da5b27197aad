"""Three-term recurrence for the Hermite-basis expansion and its termination.

Writing the solution of the equation-side ODE as a Hermite series
u(z) = sum_n c_n H_{alpha0+n}(s0 (z + z0)), the expansion coefficients obey

    0 = R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2}

with

    R_n = sqrt(-2/eps) (alpha0 + n) [alpha + (alpha0 + n - gamma) eps]
    Q_n = -/+ (1/eps) [alpha delta + (q + (alpha0 + n) delta) eps]
    P_n = (alpha + (alpha0 + n) eps) / sqrt(-2 eps)

where the upper sign in Q belongs to s0 = +sqrt(-eps/2). In the validated
pipeline (delta = 0, alpha0 = 0, alpha = -M eps) these collapse to

    R_n = sqrt(-2 eps) n (M - n + gamma),  Q_n = -q,
    P_n = sqrt(-eps/2) (M - n),

so P_M = 0 and the series terminates at degree M exactly when c_{M+1}(q) = 0.
Since only Q carries q (linearly, slope -1 for the upper sign), c_{M+1} is a
polynomial of degree M+1 in q. It is built here through the determinant-style
recursion

    D_n(q) = (q + t_{n-1}) D_{n-1}(q) - P_{n-2} R_{n-1} D_{n-2}(q),

with t_n the q-free part of -Q_n, over plain coefficient arrays; the leading
coefficient stays exactly 1, so the polynomial is monic by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularRecurrenceError, UnsupportedError
from .params import AccessoryParam, BheParams, _as_q

__all__ = [
    "ExpansionConfig",
    "RecurrenceCoeffs",
    "TerminationPolynomial",
    "recurrence_coeffs",
    "reduced_recurrence_coeffs",
    "coefficient_sequence",
    "termination_polynomial",
]


@dataclass(frozen=True)
class ExpansionConfig:
    """Expansion bookkeeping: Hermite index offset, sign of s0, argument shift.

    s0_sign = +1 selects s0 = +sqrt(-eps/2); -1 the mirrored branch. z0 is
    the argument shift, delta/eps for the general family and 0 in the
    reduced (delta = 0) pipeline.
    """

    alpha0: float = 0.0
    s0_sign: int = +1
    z0: float = 0.0

    def __post_init__(self) -> None:
        if self.s0_sign not in (+1, -1):
            raise DomainError(f"s0_sign must be +1 or -1, got {self.s0_sign}")
        if not (math.isfinite(self.alpha0) and math.isfinite(self.z0)):
            raise DomainError("alpha0 and z0 must be finite")

    @classmethod
    def for_params(cls, p: BheParams) -> "ExpansionConfig":
        z0 = p.delta / p.epsilon if p.epsilon != 0.0 else 0.0
        return cls(alpha0=0.0, s0_sign=+1, z0=z0)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficient triple (R_n, Q_n, P_n) at one index n."""

    r_n: float
    q_n: float
    p_n: float


def _require_confining(p: BheParams) -> None:
    if p.epsilon >= 0:
        raise DomainError(f"epsilon must be negative, got {p.epsilon}")


def recurrence_coeffs(
    n: int,
    p: BheParams,
    q: "float | AccessoryParam",
    cfg: "ExpansionConfig | None" = None,
) -> RecurrenceCoeffs:
    """General coefficients (R_n, Q_n, P_n) of the three-term relation."""
    _require_confining(p)
    if cfg is None:
        cfg = ExpansionConfig.for_params(p)
    qv = _as_q(q)
    k = cfg.alpha0 + n
    eps = p.epsilon
    r = math.sqrt(-2.0 / eps) * k * (p.alpha + (k - p.gamma) * eps)
    q_coef = -cfg.s0_sign * (p.alpha * p.delta + (qv + k * p.delta) * eps) / eps
    pc = (p.alpha + k * eps) / math.sqrt(-2.0 * eps)
    return RecurrenceCoeffs(r_n=r, q_n=q_coef, p_n=pc)


def reduced_recurrence_coeffs(
    n: int, gamma: float, epsilon: float, M: int, q: float
) -> RecurrenceCoeffs:
    """Reduced coefficients for delta = 0, alpha0 = 0, alpha = -M epsilon."""
    if epsilon >= 0:
        raise DomainError(f"epsilon must be negative, got {epsilon}")
    r = math.sqrt(-2.0 * epsilon) * n * (M - n + gamma)
    pc = math.sqrt(-epsilon / 2.0) * (M - n)
    return RecurrenceCoeffs(r_n=r, q_n=-q, p_n=pc)


def coefficient_sequence(
    p: BheParams,
    q: "float | AccessoryParam",
    cfg: "ExpansionConfig | None" = None,
    N: int = 0,
) -> np.ndarray:
    """Forward-solve c_0..c_N with the normalization c_0 = 1.

    Raises SingularRecurrenceError (carrying the index) if some R_n
    vanishes; nothing is regularized silently.
    """
    _require_confining(p)
    if cfg is None:
        cfg = ExpansionConfig.for_params(p)
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N}")
    qv = _as_q(q)
    c = np.zeros(N + 1)
    c[0] = 1.0
    for n in range(1, N + 1):
        rc_n = recurrence_coeffs(n, p, qv, cfg)
        if rc_n.r_n == 0.0:
            raise SingularRecurrenceError(n)
        acc = recurrence_coeffs(n - 1, p, qv, cfg).q_n * c[n - 1]
        if n >= 2:
            acc += recurrence_coeffs(n - 2, p, qv, cfg).p_n * c[n - 2]
        c[n] = -acc / rc_n.r_n
    return c


@dataclass(frozen=True)
class TerminationPolynomial:
    """Monic degree-(M+1) polynomial in q whose roots terminate the series.

    ``coefficients`` is ascending in powers of q. For delta = 0 the
    polynomial has pure parity: exactly the powers q^(M+1), q^(M-1), ... are
    populated, which is what makes the spectrum symmetric under E -> -E.
    """

    coefficients: tuple[float, ...]
    gamma: float
    epsilon: float
    M: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def eval(self, q: "float | np.ndarray") -> "float | np.ndarray":
        """Horner evaluation at q (scalar or array)."""
        arr = np.asarray(q, dtype=float)
        out = np.zeros_like(arr)
        for coef in reversed(self.coefficients):
            out = out * arr + coef
        return float(out) if np.isscalar(q) else out

    def deriv_eval(self, q: "float | np.ndarray") -> "float | np.ndarray":
        arr = np.asarray(q, dtype=float)
        out = np.zeros_like(arr)
        for k in range(self.degree, 0, -1):
            out = out * arr + k * self.coefficients[k]
        return float(out) if np.isscalar(q) else out


def termination_polynomial(
    M: int,
    p: BheParams,
    cfg: "ExpansionConfig | None" = None,
) -> TerminationPolynomial:
    """Build the termination polynomial for the reduced pipeline.

    Requires delta = 0 (the general engine exists but is unvalidated, so
    nonzero delta raises UnsupportedError), alpha0 = 0, the upper s0 branch,
    and alpha consistent with -M epsilon.
    """
    _require_confining(p)
    if cfg is None:
        cfg = ExpansionConfig.for_params(p)
    if not isinstance(M, (int, np.integer)) or M < 0:
        raise DomainError(f"M must be a non-negative integer, got {M!r}")
    if p.delta != 0.0:
        raise UnsupportedError(
            "termination polynomial is only validated for delta = 0"
        )
    if cfg.alpha0 != 0.0 or cfg.s0_sign != +1:
        raise DomainError(
            "termination polynomial requires alpha0 = 0 and the upper s0 branch"
        )
    target = -M * p.epsilon
    if abs(p.alpha - target) > 1e-9 * max(1.0, abs(target)):
        raise DomainError(
            f"alpha = {p.alpha} inconsistent with termination order M = {M} "
            f"(expected alpha = -M epsilon = {target})"
        )

    gamma, eps = p.gamma, p.epsilon
    # D_n = q D_{n-1} - P_{n-2} R_{n-1} D_{n-2}; ascending coefficient arrays.
    d_prev = np.zeros(1)            # D_{-1} = 0
    d_curr = np.ones(1)             # D_0 = 1
    for n in range(1, M + 2):
        shifted = np.concatenate([[0.0], d_curr])
        r_nm1 = math.sqrt(-2.0 * eps) * (n - 1) * (M - (n - 1) + gamma)
        p_nm2 = math.sqrt(-eps / 2.0) * (M - (n - 2))
        u = p_nm2 * r_nm1
        tail = np.zeros_like(shifted)
        tail[: d_prev.size] = u * d_prev
        d_next = shifted - tail
        d_prev, d_curr = d_curr, d_next
    # The recursion keeps the leading coefficient at exactly 1; the guard
    # below is a cheap invariant check, not a normalization.
    assert d_curr[-1] == 1.0
    return TerminationPolynomial(
        coefficients=tuple(float(c) for c in d_curr),
        gamma=gamma,
        epsilon=eps,
        M=int(M),
    )
