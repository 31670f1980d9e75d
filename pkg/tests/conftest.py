import pytest
from scipy.integrate import solve_ivp

from qssa import InitialState, RateConstants, derive_constants

SEGEL_RATES = RateConstants(4e6, 25.0, 15.0)
SEGEL_INIT = InitialState(1e-5, 1e-8)
REVERSE_INIT = InitialState(1e-5, 1e-2)

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def segel():
    return SEGEL_RATES, SEGEL_INIT, derive_constants(SEGEL_RATES, SEGEL_INIT)


@pytest.fixture
def reverse():
    return SEGEL_RATES, REVERSE_INIT, derive_constants(SEGEL_RATES, REVERSE_INIT)


def scipy_oracle(rates, init, t_eval, rtol=1e-12):
    """Independent reference: scipy's implicit Radau method on the full mass-action system."""
    k1, km1, k2 = rates.k1, rates.k_minus1, rates.k2

    def f(t, x):
        s, e, c, _ = x
        b = k1 * s * e
        return [-b + km1 * c, -b + (km1 + k2) * c, b - (km1 + k2) * c, k2 * c]

    def jac(t, x):
        s, e, _, _ = x
        return [
            [-k1 * e, -k1 * s, km1, 0],
            [-k1 * e, -k1 * s, km1 + k2, 0],
            [k1 * e, k1 * s, -(km1 + k2), 0],
            [0, 0, k2, 0],
        ]

    a1 = init.s0 + init.c0 + init.p0
    sol = solve_ivp(
        f, (0.0, float(t_eval[-1])), list(init.as_tuple()), method="Radau", jac=jac,
        t_eval=t_eval, rtol=rtol, atol=1e-16 * a1,
    )
    assert sol.success
    return sol.y


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
