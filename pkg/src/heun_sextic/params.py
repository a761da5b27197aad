"""Parameter records and potential construction for the sextic-oscillator family.

Two equivalent parametrizations are used throughout.

* Well-side form (a, b, s, M), defining the radial potential
  V(x) = v_m2/x^2 + v_2 x^2 + v_4 x^4 + v_6 x^6 with
  v_m2 = (2s-1/2)(2s-3/2), v_2 = b^2 - 2a(2s+1+2M), v_4 = 2ab, v_6 = a^2.
  M counts the levels (M+1 of them) that come out in closed form.
* Equation-side form (gamma, delta, epsilon, alpha), the coefficient set of
  the underlying second-order ODE, related by gamma = 2s, delta = -4b,
  epsilon = -16a, alpha = 16aM.

Expressed through gamma, the x^-2 coefficient is (gamma-1/2)(gamma-3/2).
The superficially similar variant (gamma-1/2)(gamma-5/2) is wrong for this
family: with it the analytic wavefunctions no longer satisfy the Schrodinger
equation. The verification suite keeps a negative control that demonstrates
the failure; only the (gamma-1/2)(gamma-3/2) form appears in the library.

A one-parameter family of changes of variable dz/dx = z^m / sigma links the
ODE to Schrodinger problems. Each admissible m in {-1, -1/2, 0, 1/2, 1}
produces a five-term potential family; m = 1/2 with sigma = 1, x0 = 0 is the
sextic oscillator and is the only case the rest of the library solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotQesError

__all__ = [
    "TRANSFORM_M_VALUES",
    "M_DETECTION_TOL",
    "BheParams",
    "AccessoryParam",
    "QesParams",
    "PotentialCoeffs",
    "TransformCase",
    "PotentialTerm",
    "GeneratedPotential",
    "qes_to_bhe",
    "bhe_to_qes",
    "qes_sextic_coeffs",
    "potential_from_bhe",
    "sextic_coeffs_from_bhe",
    "potential_eval",
]

#: Admissible exponents m of the variable change dz/dx = z^m / sigma.
TRANSFORM_M_VALUES = (-1.0, -0.5, 0.0, 0.5, 1.0)

#: Absolute tolerance for recognising -alpha/epsilon as the integer M.
M_DETECTION_TOL = 1e-9


def _checked_float(value: object, name: str) -> float:
    try:
        out = float(value)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(out):
        raise DomainError(f"{name} must be finite, got {out!r}")
    return out


@dataclass(frozen=True)
class BheParams:
    """Equation-side parameter set (gamma, delta, epsilon, alpha).

    Construction only checks finiteness. Operations that need a confining
    well (epsilon < 0) or wavefunctions vanishing at the origin
    (gamma >= 1/2) validate those ranges themselves, so that purely formal
    uses such as potential generation stay available.
    """

    gamma: float
    delta: float
    epsilon: float
    alpha: float

    def __post_init__(self) -> None:
        for name in ("gamma", "delta", "epsilon", "alpha"):
            object.__setattr__(self, name, _checked_float(getattr(self, name), name))


@dataclass(frozen=True)
class AccessoryParam:
    """Accessory (spectral) parameter q of the equation-side form."""

    q: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", _checked_float(self.q, "q"))


def _as_q(q: "float | AccessoryParam") -> float:
    if isinstance(q, AccessoryParam):
        return q.q
    return _checked_float(q, "q")


@dataclass(frozen=True)
class QesParams:
    """Well-side parameter set (a, b, s, M) with a > 0 and integer M >= 0."""

    a: float
    b: float
    s: float
    M: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "s"):
            object.__setattr__(self, name, _checked_float(getattr(self, name), name))
        if self.a <= 0:
            raise DomainError(f"a must be positive, got {self.a}")
        m = self.M
        if isinstance(m, float) and not m.is_integer():
            raise DomainError(f"M must be an integer, got {m}")
        m = int(m)
        if m < 0:
            raise DomainError(f"M must be non-negative, got {m}")
        object.__setattr__(self, "M", m)


@dataclass(frozen=True)
class PotentialCoeffs:
    """Coefficients of V(x) = v_m2/x^2 + v_2 x^2 + v_4 x^4 + v_6 x^6."""

    v_m2: float
    v_2: float
    v_4: float
    v_6: float

    def __post_init__(self) -> None:
        for name in ("v_m2", "v_2", "v_4", "v_6"):
            object.__setattr__(self, name, _checked_float(getattr(self, name), name))


@dataclass(frozen=True)
class TransformCase:
    """Variable change dz/dx = z^m / sigma with z(x0-anchored) offset x0."""

    m: float
    sigma: float = 1.0
    x0: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", _checked_float(self.m, "m"))
        object.__setattr__(self, "sigma", _checked_float(self.sigma, "sigma"))
        object.__setattr__(self, "x0", _checked_float(self.x0, "x0"))
        if self.m not in TRANSFORM_M_VALUES:
            raise DomainError(
                f"m must be one of {TRANSFORM_M_VALUES}, got {self.m}"
            )
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    def z_of_x(self, x: "float | np.ndarray") -> "float | np.ndarray":
        """Evaluate the variable change z(x)."""
        arr = np.asarray(x, dtype=float)
        shifted = arr + self.x0
        if self.m == 1.0:
            out = np.exp(shifted / self.sigma)
        else:
            base = (1.0 - self.m) * shifted / self.sigma
            if np.any(base <= 0):
                raise DomainError("z(x) requires (1-m)(x+x0)/sigma > 0")
            out = base ** (1.0 / (1.0 - self.m))
        return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class PotentialTerm:
    """One generated potential term.

    ``coefficient * (x+x0)**exponent`` for power terms, or
    ``coefficient * exp(exponent * x)`` when ``is_exponential`` (the m = 1
    case, where the variable change is an exponential).
    """

    exponent: float
    coefficient: float
    is_exponential: bool = False


@dataclass(frozen=True)
class GeneratedPotential:
    """Potential family generated by one transform case.

    ``terms`` excludes the constant slot, which is reported as ``energy``:
    each admissible m sends exactly one of the five generated monomials to a
    constant, and that constant is the energy of the associated Schrodinger
    problem.
    """

    case: TransformCase
    terms: tuple[PotentialTerm, ...]
    energy: float

    def evaluate(self, x: "float | np.ndarray") -> "float | np.ndarray":
        """Evaluate V(x) by summing the generated terms."""
        arr = np.asarray(x, dtype=float)
        shifted = arr + self.case.x0
        total = np.zeros_like(arr)
        for term in self.terms:
            if term.is_exponential:
                total = total + term.coefficient * np.exp(term.exponent * arr)
            else:
                if np.any(shifted <= 0) and not float(term.exponent).is_integer():
                    raise DomainError("fractional powers need x + x0 > 0")
                if np.any(shifted == 0) and term.exponent < 0:
                    raise DomainError("negative powers need x + x0 != 0")
                total = total + term.coefficient * shifted**term.exponent
        return float(total) if np.isscalar(x) else total

    def to_sextic_coeffs(self) -> PotentialCoeffs:
        """Collapse the m = 1/2, sigma = 1, x0 = 0 case to PotentialCoeffs."""
        c = self.case
        if not (c.m == 0.5 and c.sigma == 1.0 and c.x0 == 0.0):
            raise DomainError(
                "sextic coefficients exist only for m = 1/2, sigma = 1, x0 = 0"
            )
        slots = {-2: 0.0, 2: 0.0, 4: 0.0, 6: 0.0}
        for term in self.terms:
            key = round(term.exponent)
            slots[key] = term.coefficient
        return PotentialCoeffs(slots[-2], slots[2], slots[4], slots[6])


def qes_to_bhe(p: QesParams) -> BheParams:
    """Map well-side parameters to the equation side.

    gamma = 2s, delta = -4b, epsilon = -16a, alpha = 16 a M.
    """
    if p.a <= 0:
        raise DomainError(f"a must be positive, got {p.a}")
    return BheParams(
        gamma=2.0 * p.s,
        delta=-4.0 * p.b,
        epsilon=-16.0 * p.a,
        alpha=16.0 * p.a * p.M,
    )


def bhe_to_qes(p: BheParams, tol: float = M_DETECTION_TOL) -> QesParams:
    """Invert the parameter map, recognising M = -alpha/epsilon as an integer.

    Raises DomainError for epsilon >= 0 and NotQesError when -alpha/epsilon
    is not a non-negative integer to within ``tol``.
    """
    if p.epsilon >= 0:
        raise DomainError(f"epsilon must be negative, got {p.epsilon}")
    m_float = -p.alpha / p.epsilon
    m_round = round(m_float)
    if abs(m_float - m_round) > tol or m_round < 0:
        raise NotQesError(
            f"-alpha/epsilon = {m_float!r} is not a non-negative integer "
            f"(tolerance {tol})"
        )
    return QesParams(a=-p.epsilon / 16.0, b=-p.delta / 4.0, s=p.gamma / 2.0, M=int(m_round))


def qes_sextic_coeffs(p: QesParams) -> PotentialCoeffs:
    """Sextic potential coefficients from well-side parameters."""
    return PotentialCoeffs(
        v_m2=(2.0 * p.s - 0.5) * (2.0 * p.s - 1.5),
        v_2=p.b**2 - 2.0 * p.a * (2.0 * p.s + 1.0 + 2.0 * p.M),
        v_4=2.0 * p.a * p.b,
        v_6=p.a**2,
    )


# Slot coefficients of the generated family: E - V = sigma^-2 * sum C_p z^p
# over p = 2m-2 .. 2m+2. The p = 0 slot is the energy.
def _slot_coefficients(p: BheParams, m: float, q: float) -> "list[tuple[float, float]]":
    gamma, delta, eps, alpha = p.gamma, p.delta, p.epsilon, p.alpha
    return [
        (2 * m - 2, -((gamma - m) / 2.0) * ((gamma + m) / 2.0 - 1.0)),
        (2 * m - 1, -(q + gamma * delta / 2.0)),
        (2 * m, alpha - eps / 2.0 - delta**2 / 4.0 - gamma * eps / 2.0),
        (2 * m + 1, -delta * eps / 2.0),
        (2 * m + 2, -(eps**2) / 4.0),
    ]


def potential_from_bhe(
    p: BheParams, case: TransformCase, q: "float | AccessoryParam" = 0.0
) -> GeneratedPotential:
    """Generate the potential family for one transform case.

    Returns the non-constant terms of V(x) together with the energy read off
    the constant slot. For m = 1/2 the accessory parameter only shifts the
    energy; for the other cases it enters a potential coefficient, which is
    why it is accepted here (default 0).
    """
    qv = _as_q(q)
    m, sigma, x0 = case.m, case.sigma, case.x0
    inv_s2 = 1.0 / sigma**2
    terms: list[PotentialTerm] = []
    energy = 0.0
    for zp, coeff in _slot_coefficients(p, m, qv):
        if zp == 0:
            energy = inv_s2 * coeff
            continue
        if m == 1.0:
            # z^p = exp(p x0/sigma) exp(p x/sigma)
            terms.append(
                PotentialTerm(
                    exponent=zp / sigma,
                    coefficient=-inv_s2 * coeff * math.exp(zp * x0 / sigma),
                    is_exponential=True,
                )
            )
        else:
            # z^p = kappa^(p w) (x+x0)^(p w), kappa = (1-m)/sigma, w = 1/(1-m)
            w = 1.0 / (1.0 - m)
            kappa = (1.0 - m) / sigma
            terms.append(
                PotentialTerm(
                    exponent=zp * w,
                    coefficient=-inv_s2 * coeff * kappa ** (zp * w),
                )
            )
    terms.sort(key=lambda t: t.exponent)
    return GeneratedPotential(case=case, terms=tuple(terms), energy=energy)


def sextic_coeffs_from_bhe(p: BheParams) -> PotentialCoeffs:
    """Sextic coefficients for the m = 1/2, sigma = 1, x0 = 0 case."""
    return potential_from_bhe(p, TransformCase(m=0.5)).to_sextic_coeffs()


def potential_eval(c: PotentialCoeffs, x: "float | np.ndarray") -> "float | np.ndarray":
    """Evaluate the sextic potential; x = 0 is rejected when v_m2 != 0."""
    arr = np.asarray(x, dtype=float)
    if c.v_m2 != 0.0 and np.any(arr == 0.0):
        raise DomainError("potential is singular at x = 0 for v_m2 != 0")
    x2 = arr * arr
    out = c.v_2 * x2 + c.v_4 * x2 * x2 + c.v_6 * x2 * x2 * x2
    if c.v_m2 != 0.0:
        out = out + c.v_m2 / x2
    return float(out) if np.isscalar(x) else out
