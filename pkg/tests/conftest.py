import pytest

from ottospin import RampProtocol, transition_probability
from ottospin.analysis import load_reference_data

NU_COLD = 2000.0
NU_HOT = 3600.0
TAU = 200e-6


@pytest.fixture(scope="session")
def baseline_protocol():
    return RampProtocol(NU_COLD, NU_HOT, TAU)


@pytest.fixture(scope="session")
def xi_at_tau():
    """Memoized transition probabilities at the baseline frequencies."""
    cache = {}

    def get(tau, steps=4096):
        key = (tau, steps)
        if key not in cache:
            cache[key] = transition_probability(RampProtocol(NU_COLD, NU_HOT, tau, steps))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def reference_data():
    return load_reference_data()
