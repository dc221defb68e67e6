"""
Typed configuration loaded from ``rotinv.yaml`` (all keys optional).

Missing file means built-in defaults. Unknown keys and wrong types are rejected.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from .config_paths import cache_path_from_config, config_file_path

_logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Tolerances:
    appendix_rtol: float = 1e-9
    rotation_rtol: float = 1e-10
    collinear_tol: float = 1e-9
    jacobi_rtol: float = 1e-12


@dataclass(frozen=True)
class VerifyOptions:
    max_l: int = 6
    workers: int = 4
    samples: int = 100
    rotations: int = 20
    seed: int = 20120101


@dataclass(frozen=True)
class Settings:
    cache_path: Path
    tolerances: Tolerances = field(default_factory=Tolerances)
    verify: VerifyOptions = field(default_factory=VerifyOptions)
    log_level: str = "WARNING"
    source: Optional[Path] = None


_TOP_KEYS = {"data_root", "cache_path", "tolerances", "verify", "log_level"}


def _section(cls: type, raw: Any, name: str) -> Any:
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ValueError(f"{name} must be a mapping, got {raw!r}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ValueError(f"unknown {name} key(s): {unknown}")
    values: dict[str, Any] = {}
    for key, value in raw.items():
        default = getattr(cls(), key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{name}.{key} must be a number, got {value!r}")
        if isinstance(default, int):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"{name}.{key} must be an integer, got {value!r}")
            value = int(value)
        else:
            value = float(value)
        if value < 0:
            raise ValueError(f"{name}.{key} must be non-negative, got {value!r}")
        values[key] = value
    return cls(**values)


def settings_from_mapping(
    config: Mapping[str, Any],
    *,
    cwd: Optional[Path] = None,
    env: Optional[Mapping[str, str]] = None,
    source: Optional[Path] = None,
) -> Settings:
    unknown = sorted(set(config) - _TOP_KEYS)
    if unknown:
        raise ValueError(f"unknown config key(s): {unknown}")
    level = str(config.get("log_level") or "WARNING").upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"log_level must be one of {LOG_LEVELS}, got {config.get('log_level')!r}")
    verify = _section(VerifyOptions, config.get("verify"), "verify")
    if verify.workers < 1:
        raise ValueError(f"verify.workers must be at least 1, got {verify.workers!r}")
    return Settings(
        cache_path=cache_path_from_config(config, cwd=cwd, env=env),
        tolerances=_section(Tolerances, config.get("tolerances"), "tolerances"),
        verify=verify,
        log_level=level,
        source=source,
    )


def load_settings(
    path: Optional[str] = None,
    *,
    cwd: Optional[Path] = None,
    env: Optional[Mapping[str, str]] = None,
) -> Settings:
    """Read the config file (flag, ``ROTINV_CONFIG`` or the default location)."""
    cfg_path = config_file_path(path, cwd=cwd, env=env)
    if not cfg_path.is_file():
        if path:
            raise FileNotFoundError(f"config file not found: {cfg_path}")
        _logger.debug("no config at %s; using defaults", cfg_path)
        return settings_from_mapping({}, cwd=cwd, env=env)
    with open(cfg_path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"{cfg_path}: top level must be a mapping")
    _logger.debug("loaded config from %s", cfg_path)
    return settings_from_mapping(raw, cwd=cwd, env=env, source=cfg_path)


def with_overrides(settings: Settings, **changes: Any) -> Settings:
    """Apply CLI overrides; ``None`` values leave the setting unchanged."""
    tol = {k: v for k, v in changes.items() if k in {f.name for f in fields(Tolerances)} and v is not None}
    ver = {k: v for k, v in changes.items() if k in {f.name for f in fields(VerifyOptions)} and v is not None}
    top = {k: v for k, v in changes.items() if k in {"cache_path", "log_level"} and v is not None}
    if "cache_path" in top:
        top["cache_path"] = Path(top["cache_path"]).expanduser().resolve()
    return replace(
        settings,
        tolerances=replace(settings.tolerances, **tol),
        verify=replace(settings.verify, **ver),
        **top,
    )
