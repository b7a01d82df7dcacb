"""
Shared fixtures for the test suites
"""

import pytest

from rts_backtrack.config import ENV_PREFIX, RunConfig
from rts_backtrack.harness.fixtures import (
    five_state_trap,
    four_state_chain,
    overshoot_chain,
    raised_star,
    segment_overshoot,
    two_goal_world,
)
from rts_backtrack.harness.generators import random_problem
from rts_backtrack.models.agent import AlgoParams


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    """Keep RTS_* variables and stray .env files out of every test."""
    for name in RunConfig.field_names():
        # setenv first so teardown also removes values a .env file loaded
        monkeypatch.setenv(ENV_PREFIX + name.upper(), "")
        monkeypatch.delenv(ENV_PREFIX + name.upper())
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def four_state():
    return four_state_chain()


@pytest.fixture
def trap():
    return five_state_trap()


@pytest.fixture
def overshoot():
    return overshoot_chain()


@pytest.fixture
def star():
    return raised_star()


@pytest.fixture
def segments():
    return segment_overshoot()


@pytest.fixture
def world():
    return two_goal_world()


@pytest.fixture
def params():
    return AlgoParams()


@pytest.fixture
def small_corpus():
    """Small valid problems with positive heuristics, directed and undirected."""
    return [random_problem(7, seed, positive=True) for seed in range(6)] + [
        random_problem(6, seed, weight_range=(1, 3), undirected=True, positive=True)
        for seed in range(6)
    ]
