"""
Pytest configuration and fixtures for testing.
"""

import io
from pathlib import Path
from typing import Dict, Generator

import numpy as np
import pytest

from src.cli.services.command_service import CommandService
from src.cli.services.registry_service import Registry, registry_service
from src.config import settings
from src.polycore.model import Poly, PolyMap
from src.static_values.registry import builtin_maps, builtin_reps
from src.uvrep.model import ABExpansion, UVRep
from src.uvrep.services.expansion_service import expansion_service


@pytest.fixture(scope="session")
def maps() -> Dict[str, PolyMap]:
    """Built-in polynomial maps by registry name."""
    return builtin_maps()


@pytest.fixture(scope="session")
def reps() -> Dict[str, UVRep]:
    """Built-in u-gamma representations by registry name."""
    return builtin_reps()


@pytest.fixture(scope="session")
def f0_expansion(maps: Dict[str, PolyMap], reps: Dict[str, UVRep]) -> ABExpansion:
    return expansion_service.expand_image(reps["f0"], maps["f0"])


@pytest.fixture(scope="session")
def f0_sqrt_expansion(maps: Dict[str, PolyMap], reps: Dict[str, UVRep]) -> ABExpansion:
    return expansion_service.expand_image(reps["f0-sqrt"], maps["f0-sqrt"])


@pytest.fixture(scope="session")
def f1_expansion(maps: Dict[str, PolyMap], reps: Dict[str, UVRep]) -> ABExpansion:
    return expansion_service.expand_image(reps["f1"], maps["f1"])


@pytest.fixture
def gamma() -> Poly:
    """The curve parameter as a one-variable polynomial."""
    return Poly.variable(1, 0)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so property checks are reproducible."""
    return np.random.default_rng(20240917)


@pytest.fixture
def registry() -> Registry:
    return registry_service.builtin()


@pytest.fixture
def output_dir(tmp_path: Path) -> Generator[Path, None, None]:
    """Point the default simulate output directory at a temporary folder."""
    original = settings.output_dir
    settings.output_dir = str(tmp_path / "results")
    yield tmp_path / "results"
    settings.output_dir = original


@pytest.fixture
def commands() -> CommandService:
    """Command handlers writing to an in-memory buffer."""
    return CommandService(out=io.StringIO())


def output_of(commands: CommandService) -> str:
    out = commands.out
    assert isinstance(out, io.StringIO)
    return out.getvalue()
