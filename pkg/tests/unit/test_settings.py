"""Typed settings: defaults, validation and CLI overrides."""

from pathlib import Path

import pytest

from rotinv.settings import (
    Settings,
    Tolerances,
    VerifyOptions,
    load_settings,
    settings_from_mapping,
    with_overrides,
)


def test_missing_default_file_gives_defaults(tmp_path):
    s = load_settings(cwd=tmp_path, env={})
    assert isinstance(s, Settings)
    assert s.tolerances == Tolerances()
    assert s.verify == VerifyOptions()
    assert s.log_level == "WARNING"
    assert s.source is None
    assert s.cache_path == (tmp_path / "data" / "cache" / "coefficients.yaml").resolve()


def test_missing_explicit_file_is_an_error(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_settings("nope.yaml", cwd=tmp_path, env={})


def test_values_read_from_yaml(tmp_path):
    cfg = tmp_path / "data" / "config" / "rotinv.yaml"
    cfg.parent.mkdir(parents=True)
    cfg.write_text(
        "log_level: info\n"
        "tolerances:\n  appendix_rtol: 1.0e-8\n"
        "verify:\n  max_l: 3\n  workers: 2\n",
        encoding="utf-8",
    )
    s = load_settings(cwd=tmp_path, env={})
    assert s.log_level == "INFO"
    assert s.tolerances.appendix_rtol == pytest.approx(1e-8)
    assert s.tolerances.rotation_rtol == pytest.approx(1e-10)
    assert s.verify.max_l == 3
    assert s.verify.workers == 2
    assert s.source == cfg.resolve()


def test_shipped_config_is_valid():
    shipped = Path(__file__).resolve().parents[2] / "data" / "config" / "rotinv.yaml"
    s = load_settings(str(shipped), env={})
    assert s.verify.seed == VerifyOptions().seed


@pytest.mark.parametrize(
    "config",
    [
        {"colour": "blue"},
        {"log_level": "LOUD"},
        {"tolerances": {"appendix_rtol": "small"}},
        {"tolerances": {"appendix_rtol": -1.0}},
        {"tolerances": {"unknown": 1.0}},
        {"verify": {"workers": 0}},
        {"verify": {"samples": True}},
        {"verify": {"max_l": 2.5}},
        {"verify": [1, 2]},
    ],
)
def test_bad_config_rejected(tmp_path, config):
    with pytest.raises(ValueError):
        settings_from_mapping(config, cwd=tmp_path, env={})


def test_overrides_skip_none(tmp_path):
    base = settings_from_mapping({}, cwd=tmp_path, env={})
    s = with_overrides(base, max_l=2, workers=None, appendix_rtol=1e-6, cache_path=str(tmp_path / "c.yaml"))
    assert s.verify.max_l == 2
    assert s.verify.workers == base.verify.workers
    assert s.tolerances.appendix_rtol == pytest.approx(1e-6)
    assert s.cache_path == (tmp_path / "c.yaml").resolve()
    assert base.verify.max_l == VerifyOptions().max_l
