import sys
from pathlib import Path

import numpy as np
import pytest

root_dir = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(root_dir))

from bmforge.config import get_settings  # noqa: E402
from bmforge.domain.models import SampledFunction  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test sees settings built from its own environment."""
    monkeypatch.delenv("BMFORGE_THREADS", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def gaussian_profile():
    """e^{-pi r^2}, its own Fourier transform in every dimension (cyclic units)."""
    r = np.linspace(0.0, 6.0, 1201)
    return SampledFunction(grid=r, values=np.exp(-np.pi * r ** 2))
