from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rkttn.fixtures import fixture_path
from rkttn.tableau_io import PolynomialMap, Tableau, parse_problem, parse_tableau

ACCEPTANCE_RESULTS: dict[str, str] = {}
ACCEPTANCE_TOLERANCES: dict[str, str] = {}


def load_tableau(name: str) -> Tableau:
    return parse_tableau(fixture_path(name).read_bytes(), name=name)


def load_problem(name: str) -> PolynomialMap:
    return parse_problem(fixture_path(name).read_bytes())


def random_tableau(rng: random.Random, s: int, explicit: bool = False) -> Tableau:
    def q():
        return Fraction(rng.randint(-5, 5), rng.randint(1, 4))

    A = [[q() if (not explicit or j < i) else Fraction(0) for j in range(s)] for i in range(s)]
    return Tableau.from_entries(A, [q() for _ in range(s)])


@pytest.fixture(scope="session")
def butcher6() -> Tableau:
    return load_tableau("butcher_s6.json")


@pytest.fixture(scope="session")
def rk4() -> Tableau:
    return load_tableau("rk4.json")


@pytest.fixture(scope="session")
def euler() -> Tableau:
    return load_tableau("euler.json")


@pytest.fixture(scope="session")
def riccati() -> PolynomialMap:
    return load_problem("riccati.json")


@pytest.fixture(scope="session")
def scalar_autonomized() -> PolynomialMap:
    return load_problem("scalar_riccati_autonomized.json")


@pytest.fixture(scope="session")
def generic2d() -> PolynomialMap:
    return load_problem("generic_2d.json")


@pytest.fixture(scope="session")
def linear() -> PolynomialMap:
    return load_problem("linear.json")


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance.py" in item.nodeid and item.function.__doc__:
            ACCEPTANCE_TOLERANCES[item.name] = item.function.__doc__


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        ACCEPTANCE_RESULTS[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and report.failed and "test_acceptance.py" in report.nodeid:
        ACCEPTANCE_RESULTS[report.nodeid.split("::")[-1]] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in sorted(ACCEPTANCE_RESULTS.items()):
        terminalreporter.write_line(f"{verdict}  {name}  [{ACCEPTANCE_TOLERANCES.get(name, '')}]")
