"""Solvable levels of the sextic oscillator via a terminating Hermite series.

The library maps well-side parameters (a, b, s, M) to equation-side
parameters (gamma, delta, epsilon, alpha), builds the three-term recurrence
for the Hermite-basis expansion coefficients, and turns the termination
condition into a monic polynomial in the accessory parameter q whose roots
give the M+1 solvable energies E = -q - gamma delta / 2. Wavefunctions are
assembled from the same coefficients and can be cross-checked against an
independent finite-difference eigensolver.
"""

from .errors import (
    ComplexRootsError,
    ConvergenceFailureError,
    DomainError,
    DomainWarning,
    HeunSexticError,
    IncompatibleShapesError,
    MultipleRootError,
    NotQesError,
    SingularRecurrenceError,
    UnresolvedNodesError,
    UnsupportedError,
)
from .params import (
    AccessoryParam,
    BheParams,
    GeneratedPotential,
    PotentialCoeffs,
    PotentialTerm,
    QesParams,
    TransformCase,
    bhe_to_qes,
    potential_eval,
    potential_from_bhe,
    qes_sextic_coeffs,
    qes_to_bhe,
    sextic_coeffs_from_bhe,
)
from .recurrence import (
    ExpansionConfig,
    RecurrenceCoeffs,
    TerminationPolynomial,
    coefficient_sequence,
    recurrence_coeffs,
    reduced_recurrence_coeffs,
    termination_polynomial,
)
from .spectrum import (
    EigenLevel,
    Spectrum,
    SymmetryReport,
    closed_form_energies,
    solve_spectrum,
    solve_spectrum_qes,
    verify_symmetry,
)
from .wavefunction import (
    ClosedFormWavefunction,
    WavefunctionExpansion,
    build_wavefunction,
    closed_form_wavefunction,
    count_nodes,
    eval_wavefunction,
    eval_wavefunction_d2,
    hermite_eval,
    hermite_identity_check,
    proportionality_check,
    schrodinger_residual,
)
from .oracle import (
    Discretization,
    OracleResult,
    auto_box,
    fd_eigenvalues,
    qes_discretization,
    sturm_count,
)
from .verify import run_suite

__version__ = "1.0.0"

__all__ = [
    "__version__",
    # errors
    "HeunSexticError",
    "DomainError",
    "NotQesError",
    "UnsupportedError",
    "SingularRecurrenceError",
    "ComplexRootsError",
    "MultipleRootError",
    "ConvergenceFailureError",
    "UnresolvedNodesError",
    "IncompatibleShapesError",
    "DomainWarning",
    # parameters and potentials
    "BheParams",
    "QesParams",
    "AccessoryParam",
    "PotentialCoeffs",
    "TransformCase",
    "PotentialTerm",
    "GeneratedPotential",
    "qes_to_bhe",
    "bhe_to_qes",
    "qes_sextic_coeffs",
    "sextic_coeffs_from_bhe",
    "potential_from_bhe",
    "potential_eval",
    # recurrence and termination
    "ExpansionConfig",
    "RecurrenceCoeffs",
    "TerminationPolynomial",
    "recurrence_coeffs",
    "reduced_recurrence_coeffs",
    "coefficient_sequence",
    "termination_polynomial",
    # spectra
    "EigenLevel",
    "Spectrum",
    "SymmetryReport",
    "solve_spectrum",
    "solve_spectrum_qes",
    "closed_form_energies",
    "verify_symmetry",
    # wavefunctions
    "WavefunctionExpansion",
    "ClosedFormWavefunction",
    "build_wavefunction",
    "eval_wavefunction",
    "eval_wavefunction_d2",
    "hermite_eval",
    "hermite_identity_check",
    "schrodinger_residual",
    "count_nodes",
    "closed_form_wavefunction",
    "proportionality_check",
    # independent eigensolver
    "Discretization",
    "OracleResult",
    "sturm_count",
    "fd_eigenvalues",
    "auto_box",
    "qes_discretization",
    # verification
    "run_suite",
]
