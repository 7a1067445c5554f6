from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import TypeAdapter

from src.cli.schema import ExperimentConfig, RegistryFileSchema, VerifyFixture
from src.flow.model import FlowSpec
from src.polycore.model import PolyMap
from src.polycore.schema import PolyMapSchema
from src.static_values.registry import (
    BUILTIN_EXPERIMENTS,
    BUILTIN_FIXTURES,
    builtin_maps,
    builtin_reps,
)
from src.uvrep.model import UVRep
from src.uvrep.schema import UVRepSchema
from src.utils.exceptions import UnknownName
from src.utils.logger import logger

log = logger(__name__)

_experiments_adapter: TypeAdapter[Union[ExperimentConfig, List[ExperimentConfig]]] = (
    TypeAdapter(Union[ExperimentConfig, List[ExperimentConfig]])
)


@dataclass
class Registry:
    maps: Dict[str, PolyMap] = field(default_factory=dict)
    reps: Dict[str, UVRep] = field(default_factory=dict)
    experiments: Dict[str, ExperimentConfig] = field(default_factory=dict)
    fixtures: Dict[str, VerifyFixture] = field(default_factory=dict)

    def update(self, other: "Registry") -> None:
        self.maps.update(other.maps)
        self.reps.update(other.reps)
        self.experiments.update(other.experiments)
        self.fixtures.update(other.fixtures)


def _read(path: Path) -> str:
    log.debug(f"Reading {path}")
    return path.read_text(encoding="utf-8")


def _as_path(source: str, kind: str) -> Path:
    path = Path(source)
    if not path.is_file():
        raise UnknownName(f"unknown {kind} {source!r}: not in the registry and not a file")
    return path


class RegistryService:
    """Named examples and the loaders that resolve names or JSON files."""

    def builtin(self) -> Registry:
        return Registry(
            maps=builtin_maps(),
            reps=builtin_reps(),
            experiments={
                name: ExperimentConfig.model_validate(raw)
                for name, raw in BUILTIN_EXPERIMENTS.items()
            },
            fixtures={
                name: VerifyFixture.model_validate(raw)
                for name, raw in BUILTIN_FIXTURES.items()
            },
        )

    def load_file(self, path: Union[str, Path]) -> Registry:
        """Parse a registry JSON file; raises pydantic.ValidationError when malformed."""
        schema = RegistryFileSchema.model_validate_json(_read(Path(path)))
        return Registry(
            maps={name: m.to_model() for name, m in schema.maps.items()},
            reps={name: r.to_model() for name, r in schema.reps.items()},
            experiments=dict(schema.experiments),
            fixtures=dict(schema.fixtures),
        )

    def build(
        self, registry_path: Optional[str] = None, include_builtin: bool = True
    ) -> Registry:
        registry = self.builtin() if include_builtin else Registry()
        if registry_path is not None:
            registry.update(self.load_file(registry_path))
            log.info(f"Loaded user registry {registry_path}")
        return registry

    def resolve_map(self, source: Union[str, PolyMapSchema], registry: Registry) -> PolyMap:
        if isinstance(source, PolyMapSchema):
            return source.to_model()
        if source in registry.maps:
            return registry.maps[source]
        path = _as_path(source, "map")
        return PolyMapSchema.model_validate_json(_read(path)).to_model()

    def resolve_rep(self, source: Union[str, UVRepSchema], registry: Registry) -> UVRep:
        if isinstance(source, UVRepSchema):
            return source.to_model()
        if source in registry.reps:
            return registry.reps[source]
        path = _as_path(source, "rep")
        return UVRepSchema.model_validate_json(_read(path)).to_model()

    def resolve_experiments(self, source: str, registry: Registry) -> List[ExperimentConfig]:
        """A registry experiment name, or a JSON file with one config or a list."""
        if source in registry.experiments:
            return [registry.experiments[source]]
        path = _as_path(source, "experiment")
        parsed = _experiments_adapter.validate_json(_read(path))
        return parsed if isinstance(parsed, list) else [parsed]

    def resolve_fixture(self, source: str, registry: Registry) -> VerifyFixture:
        """A named fixture, a name present as both map and rep, or a fixture file."""
        if source in registry.fixtures:
            return registry.fixtures[source]
        if source in registry.maps and source in registry.reps:
            return VerifyFixture(map=source, rep=source)
        path = _as_path(source, "example")
        return VerifyFixture.model_validate_json(_read(path))

    def flow_job(
        self, config: ExperimentConfig, registry: Registry
    ) -> Tuple[FlowSpec, List[complex]]:
        """FlowSpec and initial state of a config; the 1-based driven index becomes 0-based."""
        f = self.resolve_map(config.map, registry)
        rep = None if config.rep is None else self.resolve_rep(config.rep, registry)
        spec = FlowSpec(
            map=f,
            driven_index=config.driven_index - 1,
            integrator=config.integrator,
            step=config.step,
            max_steps=config.max_steps,
            record_stride=config.record_stride,
            rep=rep,
            initial_branch=config.branch_seed(),
        )
        return spec, config.initial_state()


# Singleton instance
registry_service = RegistryService()
