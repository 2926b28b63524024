"""Shared fixtures: one reference setup in all three correlation regimes."""

import pytest

from twinfringes import CorrelationModel, ExperimentConfig, validate_config

# Pass/fail lines queued by the acceptance tests; replayed after capture
# ends so they always appear in the terminal report.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)

# Reference setup used throughout the suite: 1550/810 nm photon pair,
# 532 nm pump, 11.7 mm source separation, 150 mm lens.
REFERENCE = dict(
    lambda_a=1550e-9,
    lambda_b=810e-9,
    lambda_p=532e-9,
    d_a=11.7e-3,
    f0=150e-3,
    sigma_b=2.36e-2,
)

SIGMA_THETA = 9.37e-4


def make_config(model=CorrelationModel.GAUSSIAN_PARTIAL, **overrides):
    """Reference config in the given regime, with field overrides."""
    fields = dict(REFERENCE, correlation_model=model)
    if model is CorrelationModel.GAUSSIAN_PARTIAL:
        fields["sigma_theta"] = SIGMA_THETA
    fields.update(overrides)
    return validate_config(ExperimentConfig(**fields))


@pytest.fixture
def partial_cfg():
    return make_config()


@pytest.fixture
def maximal_cfg():
    return make_config(CorrelationModel.MAXIMAL)


@pytest.fixture
def uncorrelated_cfg():
    return make_config(CorrelationModel.UNCORRELATED)
