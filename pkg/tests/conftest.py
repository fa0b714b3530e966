from __future__ import annotations

from pathlib import Path

import pytest

from eventnet import load_kb, load_observations

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
KB_FILES = ("flu.ekb", "shopping.ekb", "engine.ekb", "alarm.ekb", "preempt.ekb")


@pytest.fixture(scope="session")
def corpus() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def kb():
    cache = {}

    def get(name: str, variant: str = "primed"):
        key = (name, variant)
        if key not in cache:
            cache[key] = load_kb(CORPUS / f"{name}.ekb", variant)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def obs():
    def get(name: str):
        return load_observations(CORPUS / f"{name}.obs")

    return get
