import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from faircert import MetricConfig


@pytest.fixture
def tv_metric():
    return MetricConfig()


@pytest.fixture
def write_csv(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
