import os
from pathlib import Path
from unittest.mock import patch

import pytest

from src.utils.files import atomic_write_text


def test_atomic_write_creates_parents(tmp_path: Path) -> None:
    target = tmp_path / "a" / "b" / "run.csv"
    written = atomic_write_text(target, "step,r\n0,0\n")
    assert written == target
    assert target.read_bytes() == b"step,r\n0,0\n"


def test_atomic_write_replaces_existing(tmp_path: Path) -> None:
    target = tmp_path / "run.csv"
    target.write_text("old")
    atomic_write_text(target, "new")
    assert target.read_text() == "new"
    assert [p.name for p in tmp_path.iterdir()] == ["run.csv"]


def test_atomic_write_cleans_up_on_failure(tmp_path: Path) -> None:
    target = tmp_path / "run.csv"
    target.write_text("old")
    with patch("src.utils.files.os.replace", side_effect=OSError("disk full")):
        with pytest.raises(OSError):
            atomic_write_text(target, "new")
    assert target.read_text() == "old"
    assert sorted(os.listdir(tmp_path)) == ["run.csv"]
