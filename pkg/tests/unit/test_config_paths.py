"""Tests for config path resolution (data_root anchor, env overrides)."""

from pathlib import Path

from rotinv.config_paths import (
    CACHE_ENV,
    CONFIG_ENV,
    cache_path_from_config,
    config_file_path,
    resolve_path_for_config,
)


def test_default_data_root_puts_cache_under_data(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    p = resolve_path_for_config({}, "cache")
    assert p == (tmp_path / "data" / "cache").resolve()


def test_explicit_null_data_root_uses_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    p = resolve_path_for_config({"data_root": None}, "cache/tables.yaml")
    assert p == (tmp_path / "cache" / "tables.yaml").resolve()


def test_strip_duplicate_data_prefix(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "data").mkdir()
    p = resolve_path_for_config({"data_root": "data"}, "data/cache/coefficients.yaml")
    assert p == (tmp_path / "data" / "cache" / "coefficients.yaml").resolve()


def test_absolute_path_ignores_data_root(tmp_path):
    target = tmp_path / "elsewhere" / "c.yaml"
    p = resolve_path_for_config({"data_root": "data"}, str(target), cwd=tmp_path)
    assert p == target.resolve()


def test_cache_default_omitted_key_uses_data_folder(tmp_path):
    p = cache_path_from_config({}, cwd=tmp_path, env={})
    assert p == (tmp_path / "data" / "cache" / "coefficients.yaml").resolve()


def test_cache_path_from_config_value(tmp_path):
    p = cache_path_from_config({"data_root": ".", "cache_path": "tables.yaml"}, cwd=tmp_path, env={})
    assert p == (tmp_path / "tables.yaml").resolve()


def test_cache_env_override_is_relative_to_cwd(tmp_path):
    env = {CACHE_ENV: "scratch/c.yaml"}
    p = cache_path_from_config({"cache_path": "ignored.yaml"}, cwd=tmp_path, env=env)
    assert p == (tmp_path / "scratch" / "c.yaml").resolve()


def test_config_file_precedence(tmp_path):
    assert config_file_path(cwd=tmp_path, env={}) == (tmp_path / "data" / "config" / "rotinv.yaml").resolve()
    env = {CONFIG_ENV: "alt.yaml"}
    assert config_file_path(cwd=tmp_path, env=env) == (tmp_path / "alt.yaml").resolve()
    assert Path(config_file_path("cli.yaml", cwd=tmp_path, env=env)) == (tmp_path / "cli.yaml").resolve()
