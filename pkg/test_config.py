# test_config.py
from pathlib import Path

import pytest

import main
from config.config_manager import HARD_MAX_ENUMERATION_N, HARD_MAX_MOMENT_ORDER, ConfigManager
from core.errors import ConfigError
from core.hierarchy import INFINITY, parse_depth
from modules.commands import Command, RunConfig


def write_ini(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "monohier.ini"
    path.write_text(text)
    return path


def test_shipped_configuration_loads():
    config = ConfigManager(load_env=False)
    limits = config.limits()
    assert limits.max_enumeration_n == 12
    assert limits.max_moment_order == 10
    assert config.get_int("DENSITY", "points") == 401
    assert config.get_boolean("VERIFY", "record_timings") is True


def test_file_values_override_defaults(tmp_path):
    path = write_ini(tmp_path, "[LIMITS]\nmax_enumeration_n = 8\n\n[OUTPUT]\noutput_dir = out\n")
    config = ConfigManager(path, load_env=False)
    assert config.limits().max_enumeration_n == 8
    assert config.limits().poisson_max_order == 10
    assert config.output_dir() == Path("out")
    assert config.output_dir("elsewhere") == Path("elsewhere")


def test_missing_file_falls_back_to_defaults(tmp_path):
    config = ConfigManager(tmp_path / "absent.ini", load_env=False)
    assert config.get("OUTPUT", "output_dir") == "results"
    assert config.get("NOWHERE", "key", "fallback") == "fallback"
    assert config.get_section("NOWHERE") == {}


def test_environment_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("MONOHIER_DENSITY_POINTS", "11")
    monkeypatch.setenv("MONOHIER_MAX_BASIS", "77")
    config = ConfigManager(tmp_path / "absent.ini", load_env=False)
    assert config.get_int("DENSITY", "points") == 11
    assert config.limits().max_basis == 77


def test_reload_picks_up_changes(tmp_path, monkeypatch):
    config = ConfigManager(tmp_path / "absent.ini", load_env=False)
    assert config.get_int("VERIFY", "seed") == 20240607
    monkeypatch.setenv("MONOHIER_VERIFY_SEED", "7")
    config.reload()
    assert config.get_int("VERIFY", "seed") == 7


@pytest.mark.parametrize("section, key, value", [
    ("LIMITS", "max_enumeration_n", "13"),
    ("LIMITS", "max_moment_order", "11"),
    ("LIMITS", "poisson_max_order", "0"),
    ("LIMITS", "max_basis", "0"),
])
def test_limits_outside_hard_caps(tmp_path, section, key, value):
    path = write_ini(tmp_path, f"[{section}]\n{key} = {value}\n")
    with pytest.raises(ConfigError):
        ConfigManager(path, load_env=False).limits()


def test_malformed_values(tmp_path):
    path = write_ini(tmp_path, "[DENSITY]\npoints = many\nmargin = wide\n\n[VERIFY]\nrecord_timings = perhaps\n")
    config = ConfigManager(path, load_env=False)
    with pytest.raises(ConfigError):
        config.get_int("DENSITY", "points")
    with pytest.raises(ConfigError):
        config.get_float("DENSITY", "margin")
    with pytest.raises(ConfigError):
        config.get_boolean("VERIFY", "record_timings")


def test_unparseable_file(tmp_path):
    path = write_ini(tmp_path, "max_basis = 10\n")
    with pytest.raises(ConfigError):
        ConfigManager(path, load_env=False)


def test_parse_depth():
    assert parse_depth("3") == 3
    assert parse_depth(" inf ") is INFINITY
    assert parse_depth(INFINITY) is INFINITY
    for bad in ("0", "-2", "two", True, 1.5):
        with pytest.raises(ConfigError):
            parse_depth(bad)


def test_run_config_checks_the_configured_hard_caps():
    RunConfig(Command.MOMENTS, max_enumeration_n=HARD_MAX_ENUMERATION_N).validate()
    with pytest.raises(ConfigError):
        RunConfig(Command.MOMENTS, max_enumeration_n=HARD_MAX_ENUMERATION_N + 1).validate()
    with pytest.raises(ConfigError):
        RunConfig(Command.MOMENTS, poisson_max_order=HARD_MAX_MOMENT_ORDER + 1).validate()


def test_limits_flow_into_the_run_config(tmp_path, monkeypatch):
    monkeypatch.setenv("MONOHIER_MAX_BASIS", "77")
    monkeypatch.setenv("MONOHIER_LIMITS_DENSE_MATRIX_LIMIT", "9")
    monkeypatch.setenv("MONOHIER_LIMITS_CLT_MAX_ORDER", "6")
    settings = ConfigManager(str(tmp_path / "absent.ini"), load_env=False)
    config = main.build_run_config(main.build_parser().parse_args(["verify"]), settings)
    assert (config.max_basis, config.dense_matrix_limit, config.clt_max_order) == (77, 9, 6)
