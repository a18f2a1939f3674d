"""Shared fixtures: shipped configs copied into tmp dirs so audit files
land there instead of in the repo."""

import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def chain4_path(tmp_path) -> Path:
    return Path(shutil.copy(CONFIG_DIR / "chain4.json", tmp_path))


@pytest.fixture
def branch8_path(tmp_path) -> Path:
    return Path(shutil.copy(CONFIG_DIR / "branch8.json", tmp_path))


@pytest.fixture
def dual_goals_path(tmp_path) -> Path:
    return Path(shutil.copy(CONFIG_DIR / "dual_goals.json", tmp_path))
