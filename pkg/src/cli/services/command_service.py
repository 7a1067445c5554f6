import sys
from pathlib import Path
from typing import Dict, List, Optional, TextIO, Tuple

from src.cli.schema import ExperimentConfig, VerifyFixture
from src.cli.services.registry_service import Registry, registry_service
from src.config import settings
from src.flow.model import IntegratorEnum, RunSummary
from src.flow.services.csv_service import write_csv
from src.flow.services.flow_service import flow_service
from src.galois.services.galois_service import galois_service
from src.jacrep.model import VerificationRecord, VerificationStatus
from src.jacrep.schema import VerificationRecordSchema
from src.jacrep.services.identity_service import identity_service
from src.polycore.model import Poly, PolyMap
from src.polycore.services.jacobian_service import jacobian_service
from src.pseries.services.blowup_service import PARAM, blowup_service
from src.uvrep.model import ABExpansion, UVRep
from src.uvrep.services.expansion_service import expansion_service, w_power
from src.utils.exceptions import UnknownName
from src.utils.logger import logger

log = logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

IDENTITIES = ("hh", "theorem-k", "lemma100", "galois")


def _apply_perturbation(exp: ABExpansion, fixture: VerifyFixture) -> ABExpansion:
    a, b = exp.a, exp.b
    gamma = Poly.variable(1, 0)
    for term in fixture.perturbation:
        coeff = gamma**term.gamma_power * Poly.constant(1, term.coeff)
        series = w_power(-term.u_power, coeff)
        if term.component == "a":
            a = a + series
        else:
            b = b + series
    return ABExpansion(a=a, b=b, max_order=exp.max_order)


def _format_complex(value: Optional[complex], spec: str = ".3f") -> str:
    if value is None:
        return "nan"
    if value.imag == 0:
        return format(value.real, spec)
    return f"{format(value.real, spec)}{value.imag:+{spec}}i"


def summary_line(summary: RunSummary) -> str:
    final = summary.final
    pieces = [
        f"{summary.name}:",
        f"status={summary.status.value}",
        f"records={summary.records}",
        f"step={final.step}",
        f"r={final.r:.6g}",
    ]
    pieces += [f"x{i + 1}={_format_complex(c, '.6g')}" for i, c in enumerate(final.x)]
    pieces += [f"y{i + 1}={_format_complex(c)}" for i, c in enumerate(final.y)]
    pieces += [f"max_drift_{j + 1}={d:.3e}" for j, d in sorted(summary.max_drift.items())]
    if final.u is not None:
        pieces.append(f"u={_format_complex(final.u, '.6g')}")
    if final.gamma is not None:
        pieces.append(f"gamma={_format_complex(final.gamma)}")
    if summary.csv_path is not None:
        pieces.append(f"csv={summary.csv_path}")
    return " ".join(pieces)


class CommandService:
    """Subcommand bodies. Each returns the process exit code."""

    def __init__(self, out: Optional[TextIO] = None):
        self._out = out

    @property
    def out(self) -> TextIO:
        return self._out if self._out is not None else sys.stdout

    def emit(self, text: str = "") -> None:
        print(text, file=self.out)

    # ------------------------------------------------------------------ #
    # check
    # ------------------------------------------------------------------ #

    def cmd_check(self, source: str, registry: Registry) -> int:
        f = registry_service.resolve_map(source, registry)
        jac = jacobian_service.jacobian(f)
        jdet = jacobian_service.jacobian_determinant(f)
        keller = jdet == 1
        self.emit(f"map: {f.format()}")
        self.emit("jacobian:")
        for row in jac:
            self.emit("  [" + ", ".join(entry.format(f.names) for entry in row) + "]")
        self.emit(f"Keller: {'true' if keller else 'false'}, |J| = {jdet.format(f.names)}")
        return EXIT_OK

    # ------------------------------------------------------------------ #
    # simulate
    # ------------------------------------------------------------------ #

    def _override(
        self,
        config: ExperimentConfig,
        step: Optional[float],
        max_steps: Optional[int],
        stride: Optional[int],
        integrator: Optional[str],
    ) -> ExperimentConfig:
        updates: Dict[str, object] = {}
        if step is not None:
            updates["step"] = step
        if max_steps is not None:
            updates["max_steps"] = max_steps
        if stride is not None:
            updates["record_stride"] = stride
        if integrator is not None:
            updates["integrator"] = IntegratorEnum(integrator)
        if not updates:
            return config
        # re-validate so overrides obey the same bounds as config files
        return ExperimentConfig.model_validate({**config.model_dump(), **updates})

    def _csv_path(self, config: ExperimentConfig, out: Optional[str], batch: bool) -> Path:
        if out is not None:
            return Path(out) / f"{config.name}.csv" if batch else Path(out)
        if config.output is not None:
            return Path(config.output)
        return Path(settings.output_dir) / f"{config.name}.csv"

    def cmd_simulate(
        self,
        source: str,
        registry: Registry,
        out: Optional[str] = None,
        step: Optional[float] = None,
        max_steps: Optional[int] = None,
        stride: Optional[int] = None,
        integrator: Optional[str] = None,
        workers: Optional[int] = None,
    ) -> int:
        configs = [
            self._override(c, step, max_steps, stride, integrator)
            for c in registry_service.resolve_experiments(source, registry)
        ]
        jobs = [registry_service.flow_job(c, registry) for c in configs]
        batch = len(configs) > 1
        max_workers = settings.batch_workers if workers is None else workers
        for config in configs:
            log.info(f"Experiment {config.name} started")
        trajectories = flow_service.run_batch(jobs, max_workers)

        for config, (spec, _), records in zip(configs, jobs, trajectories):
            path = write_csv(records, self._csv_path(config, out, batch), spec.driven_index)
            summary = flow_service.summarize(config.name, records, str(path))
            self.emit(summary_line(summary))
            log.info(f"Experiment {config.name} finished: {summary.status.value}")
        return EXIT_OK

    # ------------------------------------------------------------------ #
    # verify
    # ------------------------------------------------------------------ #

    def _fixture_parts(
        self, fixture: VerifyFixture, registry: Registry
    ) -> Tuple[PolyMap, UVRep, ABExpansion, Poly]:
        f = registry_service.resolve_map(fixture.map, registry)
        rep = registry_service.resolve_rep(fixture.rep, registry)
        exp = _apply_perturbation(expansion_service.expand_image(rep, f), fixture)
        jdet = jacobian_service.jacobian_determinant(f)
        return f, rep, exp, jdet

    def run_identity(
        self, identity: str, fixture: VerifyFixture, registry: Registry
    ) -> List[VerificationRecord]:
        _, rep, exp, jdet = self._fixture_parts(fixture, registry)
        if identity == "hh":
            return [identity_service.verify_identity_hh(exp, rep, jdet)]
        if identity == "theorem-k":
            keller_det = None if fixture.assume_keller else jdet
            return [identity_service.verify_theorem_k(exp, rep, keller_det)]
        if identity == "lemma100":
            return [identity_service.verify_lemma100(exp, rep, jdet)]
        if identity == "galois":
            action = galois_service.derive_sigma(rep, 1)
            return [
                galois_service.check_equivariance(exp, rep, action),
                galois_service.verify_curve_invariance(action),
            ]
        raise UnknownName(f"unknown identity {identity!r}; expected one of {IDENTITIES}")

    def cmd_verify(self, identity: str, example: str, registry: Registry) -> int:
        if identity not in IDENTITIES:
            raise UnknownName(f"unknown identity {identity!r}; expected one of {IDENTITIES}")
        fixture = registry_service.resolve_fixture(example, registry)
        records = self.run_identity(identity, fixture, registry)
        for record in records:
            self.emit(VerificationRecordSchema.from_model(record).model_dump_json(indent=2))
        failed = any(r.status == VerificationStatus.FAIL for r in records)
        return EXIT_FAILED if failed else EXIT_OK

    # ------------------------------------------------------------------ #
    # series demo-blowup
    # ------------------------------------------------------------------ #

    def cmd_series_demo(
        self,
        order: Optional[int] = None,
        truncate: bool = True,
        truncate_at: Optional[int] = None,
    ) -> int:
        report = blowup_service.blowup_demo(order, truncate, truncate_at)
        self.emit("chart chain:")
        for chart in report.chain:
            self.emit(f"  {chart.describe()}")
        self.emit(f"t(s)  = {report.t_of_s}")
        self.emit(f"x2(s) = {report.x2_of_s}")
        self.emit(f"s(z)  = {report.s_of_z}")
        self.emit(f"x2(z) = {report.x2_of_z}")
        self.emit(f"first e-dependent index N = {report.parameter_index}")
        if report.kept_order is not None:
            self.emit(f"trajectory kept up to z^{report.kept_order}: {report.trajectory[0]}")
        for note in report.notes:
            self.emit(f"note: {note}")
        names = [chart.name for chart in report.chain]
        limits = ", ".join(lim.format(PARAM) for lim in report.limits)
        expected = ", ".join(lim.format(PARAM) for lim in report.expected)
        self.emit(f"limits ({', '.join(names)}) = ({limits}); expected ({expected})")
        if report.matches:
            self.emit("limits match")
            return EXIT_OK
        self.emit("limits differ from the expected values")
        return EXIT_FAILED

    # ------------------------------------------------------------------ #
    # list-examples
    # ------------------------------------------------------------------ #

    def cmd_list(self, registry: Registry) -> int:
        for name, f in registry.maps.items():
            self.emit(f"map {name}: {f.format()}")
        for name, rep in registry.reps.items():
            h = ", ".join(str(c) for c in rep.h)
            self.emit(
                f"rep {name}: m={rep.m} N={rep.N} h=({h}) role={rep.role} sign={rep.sign}"
            )
        for name, config in registry.experiments.items():
            source = config.map if isinstance(config.map, str) else "<inline>"
            self.emit(
                f"experiment {name}: map={source} driven={config.driven_index} "
                f"step={config.step:g} max_steps={config.max_steps}"
            )
        for name in registry.fixtures:
            self.emit(f"fixture {name}")
        return EXIT_OK


# Singleton instance
command_service = CommandService()
