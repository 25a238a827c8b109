from __future__ import annotations

import pytest

from phishpond.engine import GameConfig, Level
from phishpond.pack import generate_pack


@pytest.fixture(scope="session")
def starter_pack():
    return generate_pack(seed=3)


@pytest.fixture(scope="session")
def big_pack():
    return generate_pack(seed=99, per_tier=10)


@pytest.fixture
def quick_config():
    """Two worms per level so sessions end fast in tests."""
    return GameConfig(
        worms_per_level=2,
        level_time={Level.BEGINNER: 60, Level.INTERMEDIATE: 40, Level.ADVANCED: 20},
    )
