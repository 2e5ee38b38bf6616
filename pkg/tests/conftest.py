import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from tvbiclust.types import Hyperparams


@pytest.fixture
def hp():
    return Hyperparams()
