from pathlib import Path

import pytest

from qexp.config import DEFAULT_BOX_BOUND, QexpConfig, RunConfig, parse_backend

KEYS = (
    "QEXP_OUTPUT_ROOT",
    "QEXP_BOX_BOUND",
    "QEXP_LENGTH_BOUND",
    "QEXP_MAX_BRANCHES",
    "QEXP_LOG_LEVEL",
    "QEXP_TIMESTAMPS",
)


@pytest.fixture
def clean_env(monkeypatch):
    for key in KEYS:
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    config = QexpConfig()
    assert config.output_root == Path("qexp_runs")
    assert (config.box_bound, config.length_bound, config.max_branches) == (3, 2, 2000)
    assert config.log_level == "WARNING"
    assert config.timestamps
    assert config.provenance_log_path == Path("qexp_runs") / "provenance.log"


def test_environment_overrides(clean_env, tmp_path):
    clean_env.setenv("QEXP_OUTPUT_ROOT", str(tmp_path / "runs"))
    clean_env.setenv("QEXP_BOX_BOUND", "7")
    clean_env.setenv("QEXP_MAX_BRANCHES", "50")
    clean_env.setenv("QEXP_LOG_LEVEL", "debug")
    clean_env.setenv("QEXP_TIMESTAMPS", "false")
    config = QexpConfig()
    assert config.output_root == tmp_path / "runs"
    assert config.box_bound == 7
    assert config.max_branches == 50
    assert config.log_level == "DEBUG"
    assert not config.timestamps
    assert config.ensure_output_root().is_dir()


def test_bad_values_fall_back(clean_env):
    clean_env.setenv("QEXP_BOX_BOUND", "many")
    clean_env.setenv("QEXP_LENGTH_BOUND", "-2")
    clean_env.setenv("QEXP_LOG_LEVEL", "chatty")
    config = QexpConfig()
    assert config.box_bound == DEFAULT_BOX_BOUND
    assert config.length_bound == 2
    assert config.log_level == "WARNING"


def test_explicit_output_root(clean_env, tmp_path):
    assert QexpConfig(tmp_path).output_root == tmp_path


def test_run_config_validation():
    RunConfig("decide", backend="cyclic").validate()
    RunConfig("decide", backend="bounded", box_bound=1, length_bound=1).validate()
    with pytest.raises(ValueError):
        RunConfig("decide", backend="magic").validate()
    with pytest.raises(ValueError):
        RunConfig("decide", backend="bounded", box_bound=0).validate()
    with pytest.raises(ValueError):
        RunConfig("decide", backend="bounded", length_bound=-1).validate()
    with pytest.raises(ValueError):
        RunConfig("picture-check", length_bound=0).validate()


def test_parse_backend():
    assert parse_backend("cyclic") == ("cyclic", None, None)
    assert parse_backend("bounded") == ("bounded", None, None)
    assert parse_backend("bounded:3,2") == ("bounded", 3, 2)
    assert parse_backend(" bounded:6,1 ") == ("bounded", 6, 1)
    for text in ("exact", "bounded:3", "bounded:3,2,1", "bounded:a,b", "cyclic:3,2"):
        with pytest.raises(ValueError):
            parse_backend(text)
