from __future__ import annotations

import pytest

from goldens import DATA


@pytest.fixture
def data_dir():
    return DATA
