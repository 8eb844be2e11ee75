import json
import os
import sys

import pytest

import hysim
from hysim.acc import make_acc_program

sys.path.insert(0, os.path.dirname(__file__))

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
PROGRAMS_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "programs")


@pytest.fixture(scope="session")
def acc_source() -> str:
    return make_acc_program()


@pytest.fixture(scope="session")
def acc_program(acc_source):
    return hysim.parse(acc_source)


@pytest.fixture(scope="session")
def default_config():
    return hysim.SimConfig()


@pytest.fixture(scope="session")
def acc_results(acc_program, default_config):
    """The 7-run reference batch; simulated once per session."""
    return hysim.run_all(acc_program, default_config)


@pytest.fixture(scope="session")
def golden_hist():
    with open(os.path.join(DATA_DIR, "golden_acc_ct_hist.json")) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def cruise_path() -> str:
    return os.path.join(PROGRAMS_DIR, "cruise.lince")


@pytest.fixture(scope="session")
def acc_path() -> str:
    return os.path.join(PROGRAMS_DIR, "acc.lince")
