from __future__ import annotations

from pathlib import Path

import pytest

from bsv import kernel
from bsv.formula import _counterexample

DATA = Path(__file__).resolve().parents[1] / "src" / "bsv" / "data"


@pytest.fixture(params=kernel.available_backends())
def backend(request):
    """Run the test once per enumeration backend."""
    previous = kernel.use_backend(request.param)
    _counterexample.cache_clear()
    yield request.param
    kernel.use_backend(previous)
    _counterexample.cache_clear()


@pytest.fixture
def data_dir() -> Path:
    return DATA
