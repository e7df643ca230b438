import math

import numpy as np
import pytest

from quatcurves import (
    curvature_profile,
    fit_constants,
    fourier_curve,
    torus_curve,
    verify_mate,
)

# Canonical R^4 fixture: A=0.6, p=1, B=0.4, q=2 gives unit speed exactly.
TORUS = dict(A=0.6, p=1.0, B=0.4, q=2.0)
TORUS_K = math.sqrt(2.92)          # principal curvature
TORUS_R = 1.44 / TORUS_K           # torsion magnitude (intrinsic sign is negative)
TORUS_M = 2.0 / TORUS_K            # bitorsion K - k

TORUS2 = dict(A=0.4, p=2.0, B=0.2, q=3.0)
TORUS2_K = math.sqrt(5.8)


@pytest.fixture(scope="session")
def torus():
    return torus_curve(**TORUS)


@pytest.fixture(scope="session")
def torus2():
    return torus_curve(**TORUS2)


@pytest.fixture(scope="session")
def grid101():
    return np.linspace(0.0, 2.0 * math.pi, 101)


def associated_helix():
    """Spatial curve whose frame reproduces the torus fixture's R^4 frame.

    The tangent field of the torus fixture's frame projects onto a circular
    helix with axis e1; its integral is a trigonometric polynomial plus a
    linear drift, expressible in the fourier family.
    """
    amp = -1.64 / (3.0 * TORUS_K)
    drift = -0.48 / TORUS_K
    zeros = [0.0, 0.0, 0.0, 0.0]
    return fourier_curve(
        cos_coeffs=[zeros, [0.0, 0.0, 0.0, amp], zeros],
        sin_coeffs=[zeros, zeros, [0.0, 0.0, 0.0, amp]],
        linear=[drift, 0.0, 0.0],
    )


@pytest.fixture(scope="session")
def helix_assoc():
    return associated_helix()


@pytest.fixture(scope="session")
def torus_profile(torus, grid101):
    return curvature_profile(torus, grid101)


@pytest.fixture(scope="session")
def torus_constants(torus_profile):
    return fit_constants(torus_profile)


@pytest.fixture(scope="session")
def torus_report(torus, torus_constants, grid101):
    # One full oracle run shared by the bertrand and acceptance tests.
    return verify_mate(torus, torus_constants, grid101)
