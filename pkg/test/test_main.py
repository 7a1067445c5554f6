import json
from pathlib import Path

import pytest

from src.cli.services.command_service import EXIT_FAILED, EXIT_INPUT, EXIT_OK, CommandService
from src.main import main
from test.conftest import output_of


def _write_json(path: Path, payload: object) -> str:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


# ============================================================================
# check
# ============================================================================


def test_check_keller_map(commands: CommandService) -> None:
    assert main(["check", "g0"], commands) == EXIT_OK
    out = output_of(commands)
    assert out.startswith("map: ")
    assert "Keller: true, |J| = 1" in out


def test_check_non_keller_map(commands: CommandService) -> None:
    assert main(["check", "f0"], commands) == EXIT_OK
    out = output_of(commands)
    assert "  [x2, x1]" in out
    assert "Keller: false, |J| = 2*x2^2" in out


def test_check_map_file(tmp_path: Path, commands: CommandService) -> None:
    source = _write_json(
        tmp_path / "shear.json",
        {
            "arity": 2,
            "vars": ["a", "b"],
            "components": [
                [{"coeff": "1", "exps": [1, 0]}],
                [{"coeff": "1", "exps": [0, 1]}, {"coeff": "3", "exps": [2, 0]}],
            ],
        },
    )
    assert main(["check", source], commands) == EXIT_OK
    assert "Keller: true" in output_of(commands)


def test_check_rejects_bad_input(
    tmp_path: Path, commands: CommandService, capsys: pytest.CaptureFixture[str]
) -> None:
    empty = _write_json(tmp_path / "empty.json", {"arity": 2, "components": []})
    assert main(["check", empty], commands) == EXIT_INPUT
    assert "invalid input" in capsys.readouterr().err

    assert main(["check", "no-such-map"], commands) == EXIT_INPUT
    assert "unknown map" in capsys.readouterr().err


def test_parser_errors_exit_with_input_code(commands: CommandService) -> None:
    assert main(["verify", "bogus", "f0"], commands) == EXIT_INPUT
    assert main([], commands) == EXIT_INPUT


# ============================================================================
# simulate
# ============================================================================


def test_simulate_zero_steps(output_dir: Path, commands: CommandService) -> None:
    assert main(["simulate", "f0-sqrt-plus", "--max-steps", "0"], commands) == EXIT_OK
    out = output_of(commands)
    assert "f0-sqrt-plus: status=ok records=1 step=0" in out
    assert (output_dir / "f0-sqrt-plus.csv").is_file()


def test_simulate_short_run(tmp_path: Path, commands: CommandService) -> None:
    out_file = tmp_path / "plus.csv"
    code = main(["simulate", "f0-sqrt-plus", "--out", str(out_file)], commands)
    assert code == EXIT_OK
    lines = out_file.read_text().splitlines()
    assert lines[0].startswith("step,r,x1_re")
    assert len(lines) == 12
    assert "u=3" in output_of(commands)


def test_simulate_is_deterministic(tmp_path: Path, commands: CommandService) -> None:
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "f0-sqrt-minus", "--out", str(first)], commands) == EXIT_OK
    assert main(["simulate", "f0-sqrt-minus", "--out", str(second)], commands) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_simulate_batch_config(tmp_path: Path, commands: CommandService) -> None:
    config = _write_json(
        tmp_path / "batch.json",
        [
            {"name": "keller", "map": "g0", "x0": [1, 1], "max_steps": 10, "record_stride": 5},
            {
                "name": "inline",
                "map": {
                    "arity": 2,
                    "components": [
                        [{"coeff": "1", "exps": [1, 0]}],
                        [{"coeff": "1", "exps": [0, 1]}],
                    ],
                },
                "driven_index": 2,
                "integrator": "rk4",
                "x0": [[0, 1], 2],
                "max_steps": 4,
                "record_stride": 2,
            },
        ],
    )
    results = tmp_path / "results"
    code = main(["simulate", "--config", config, "--out", str(results)], commands)
    assert code == EXIT_OK
    assert (results / "keller.csv").is_file()
    assert (results / "inline.csv").is_file()
    out = output_of(commands).splitlines()
    assert out[0].startswith("keller: status=ok records=3")
    assert out[1].startswith("inline: status=ok records=3")


def test_simulate_input_errors(tmp_path: Path, commands: CommandService) -> None:
    assert main(["simulate"], commands) == EXIT_INPUT
    assert main(["simulate", "f0-sqrt-plus", "--step", "-1"], commands) == EXIT_INPUT
    bad = _write_json(tmp_path / "bad.json", {"name": "x", "map": "g0", "x0": [1, 1], "oops": 1})
    assert main(["simulate", "--config", bad], commands) == EXIT_INPUT


# ============================================================================
# verify
# ============================================================================


@pytest.mark.parametrize(
    "identity, example, expected",
    [
        ("hh", "f0", EXIT_OK),
        ("hh", "f1", EXIT_OK),
        ("lemma100", "f0-sqrt", EXIT_OK),
        ("galois", "f1", EXIT_OK),
        ("galois", "synthetic-galois-k1", EXIT_OK),
        ("theorem-k", "synthetic-theorem-k", EXIT_OK),
        ("theorem-k", "f0", EXIT_OK),
        ("hh", "f1-perturbed", EXIT_FAILED),
        ("galois", "f1-perturbed", EXIT_FAILED),
        ("hh", "no-such-example", EXIT_INPUT),
    ],
)
def test_verify_exit_codes(
    identity: str, example: str, expected: int, commands: CommandService
) -> None:
    assert main(["verify", identity, example], commands) == expected


def test_verify_prints_records(commands: CommandService) -> None:
    assert main(["verify", "galois", "f1"], commands) == EXIT_OK
    out = output_of(commands)
    assert '"identity": "galois"' in out
    assert '"identity": "curve-invariance"' in out
    assert '"status": "fail"' not in out


def test_verify_fixture_file(tmp_path: Path, commands: CommandService) -> None:
    fixture = _write_json(
        tmp_path / "fixture.json",
        {
            "map": "f0",
            "rep": {"m": 1, "N": 2, "h": ["0", "0"]},
            "perturbation": [{"component": "a", "coeff": "1/2", "gamma_power": 2, "u_power": -1}],
        },
    )
    assert main(["verify", "hh", fixture], commands) == EXIT_FAILED
    assert '"status": "fail"' in output_of(commands)


# ============================================================================
# series and list-examples
# ============================================================================


def test_series_demo(commands: CommandService) -> None:
    assert main(["series", "demo-blowup"], commands) == EXIT_OK
    out = output_of(commands)
    assert "s(z)  = z - e*z^2" in out
    assert "first e-dependent index N = 3" in out
    assert "limits match" in out


def test_series_demo_without_truncation(commands: CommandService) -> None:
    assert main(["series", "demo-blowup", "--no-truncation"], commands) == EXIT_OK


def test_series_demo_over_truncated(commands: CommandService) -> None:
    assert main(["series", "demo-blowup", "--truncate-at", "2"], commands) == EXIT_FAILED
    assert "limits differ" in output_of(commands)


def test_list_examples(commands: CommandService) -> None:
    assert main(["list-examples"], commands) == EXIT_OK
    out = output_of(commands)
    for line in ("map f0:", "rep f1: m=2 N=4", "experiment f1-long:", "fixture synthetic-galois-k1"):
        assert line in out


def test_list_user_registry(tmp_path: Path, commands: CommandService) -> None:
    registry = _write_json(
        tmp_path / "registry.json",
        {"reps": {"line": {"m": 1, "N": 1, "h": ["0"]}}},
    )
    assert main(["list-examples", "--registry", registry, "--no-builtin"], commands) == EXIT_OK
    assert output_of(commands).strip() == "rep line: m=1 N=1 h=(0) role=(0, 1) sign=1"


def test_list_empty_and_malformed_registry(tmp_path: Path, commands: CommandService) -> None:
    assert main(["list-examples", "--no-builtin"], commands) == EXIT_OK
    assert output_of(commands) == ""
    malformed = tmp_path / "broken.json"
    malformed.write_text("{not json", encoding="utf-8")
    assert main(["list-examples", "--registry", str(malformed)], commands) == EXIT_INPUT
