"""Shared fixtures: assembled scenarios are expensive, so they are built
once per session. Acceptance results are collected and printed as one
pass/fail line per criterion at the end of the run."""

import numpy as np
import pytest

from phasecert.criteria import certify, ground_truth
from phasecert.scenario import assemble_scenario, load_scenario

ACCEPTANCE_RESULTS = []


def record_acceptance(name: str, passed: bool, detail: str = ""):
    ACCEPTANCE_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        line = f"{status}  {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)


def _assembled(name):
    return assemble_scenario(load_scenario(name))


@pytest.fixture(scope="session")
def infbus_stable():
    return _assembled("infbus_stable")


@pytest.fixture(scope="session")
def infbus_unstable():
    return _assembled("infbus_unstable")


@pytest.fixture(scope="session")
def ieee14_stable():
    return _assembled("ieee14_stable")


@pytest.fixture(scope="session")
def ieee14_detuned():
    return _assembled("ieee14_detuned")


@pytest.fixture(scope="session")
def ieee14_retuned():
    return _assembled("ieee14_retuned")


@pytest.fixture(scope="session")
def all_fixture_names():
    return ["infbus_stable", "infbus_unstable", "ieee14_stable",
            "ieee14_detuned", "ieee14_retuned"]


@pytest.fixture(scope="session")
def certified_infbus_stable(infbus_stable):
    asm = infbus_stable
    return certify(asm.conv_models, asm.buses, asm.network, asm.transform_set(),
                   asm.grid(), scenario=asm.name)


@pytest.fixture(scope="session")
def ground_truths(infbus_stable, infbus_unstable, ieee14_stable,
                  ieee14_detuned, ieee14_retuned):
    out = {}
    for asm in (infbus_stable, infbus_unstable, ieee14_stable,
                ieee14_detuned, ieee14_retuned):
        out[asm.name] = ground_truth(asm.conv_models, asm.network)
    return out
