"""Shared fixtures: the reference well used throughout the docs and figures."""

import pytest

from heun_sextic import QesParams, qes_to_bhe

# full-precision energies of the reference well (a=1, b=0, s=1, M=3),
# confirmed by three routes: recurrence roots, closed forms, and the
# finite-difference solver
BENCH_ENERGIES = (
    -20.926277022672899,
    -6.4877523049475547,
    6.4877523049475547,
    20.926277022672899,
)

# rounded values as printed alongside the reference figure
BENCH_PRINTED = (-20.926, -6.488, 6.488, 20.926)


@pytest.fixture
def bench_qes():
    return QesParams(a=1.0, b=0.0, s=1.0, M=3)


@pytest.fixture
def bench_bhe(bench_qes):
    return qes_to_bhe(bench_qes)
