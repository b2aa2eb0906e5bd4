import os

import pytest

from positkit.core import P8, P16, P32, PositConfig

SMALL_FORMATS = [PositConfig(ps, es) for ps in range(3, 9) for es in range(0, ps - 2)]


@pytest.fixture(params=[P8, P16, P32], ids=lambda c: f"p{c.ps}")
def standard_cfg(request):
    return request.param


@pytest.fixture
def no_data_dir(monkeypatch):
    monkeypatch.delenv("POSITKIT_DATA_DIR", raising=False)
    return os.environ
