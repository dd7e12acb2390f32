from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from combsynth import data_path, parse_gui_repository, parse_repository


def load_text(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def tracking_repo():
    return parse_repository(load_text("tracking.clr"))


@pytest.fixture(scope="session")
def tracking_extended_repo():
    return parse_repository(load_text("tracking_extended.clr"))


@pytest.fixture(scope="session")
def windowing_repo():
    return parse_repository(load_text("windowing.clr"))


@pytest.fixture(scope="session")
def meal_gui():
    return parse_gui_repository(load_text("meal.gar"))
