"""
Resolve filesystem paths from the rotinv config using a ``data_root`` anchor.

If the config **omits** ``data_root``, it defaults to ``"data"`` so the coefficient
cache resolves under ``./data/`` (not the repo root).

Set ``data_root: null`` in YAML to resolve paths relative to cwd only.
Use ``data_root: "."`` to anchor at cwd without a ``data`` subfolder.

If a relative path starts with the same name as ``data_root`` (e.g. ``data/cache``
with ``data_root: data``), the duplicate segment is stripped so no
``data/data/...`` appears.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Mapping, Optional

DEFAULT_CONFIG_RELATIVE = Path("data") / "config" / "rotinv.yaml"
DEFAULT_CACHE_RELATIVE = "cache/coefficients.yaml"

CONFIG_ENV = "ROTINV_CONFIG"
CACHE_ENV = "ROTINV_CACHE_PATH"


def resolve_data_root(
    config: Mapping[str, Any], cwd: Optional[Path] = None
) -> Optional[Path]:
    """
    Return absolute ``data_root``, or None for cwd-only resolution.

    - Key **absent**: default ``"data"``.
    - ``data_root: null`` or ``""``: no anchor; paths relative to cwd.
    """
    base = cwd if cwd is not None else Path.cwd()
    if "data_root" not in config:
        raw: Any = "data"
    else:
        raw = config["data_root"]
        if raw is None:
            return None
        if isinstance(raw, str) and not raw.strip():
            return None
    p = Path(str(raw).strip())
    if p.is_absolute():
        return p.resolve()
    return (base / p).resolve()


def _strip_redundant_prefix(data_root: Path, relative: Path) -> Path:
    """If ``relative`` starts with the basename of ``data_root``, drop that first segment."""
    parts = relative.parts
    if not parts:
        return relative
    if parts[0] == data_root.name:
        return Path(*parts[1:]) if len(parts) > 1 else Path(".")
    return relative


def resolve_path_for_config(
    config: Mapping[str, Any],
    path_str: str,
    *,
    cwd: Optional[Path] = None,
) -> Path:
    """
    Resolve a path string from the config.

    - Absolute paths: returned resolved.
    - If ``data_root`` resolves (including the default ``data/``): relative paths join
      under it (with duplicate-prefix strip).
    - If ``data_root`` is explicitly disabled (``null``): relative to ``cwd``.
    """
    base = cwd if cwd is not None else Path.cwd()
    p = Path(str(path_str).strip()).expanduser()
    if not p.parts:
        return base.resolve()
    if p.is_absolute():
        return p.resolve()
    dr = resolve_data_root(config, cwd=base)
    if dr is None:
        return (base / p).resolve()
    return (dr / _strip_redundant_prefix(dr, p)).resolve()


def cache_path_from_config(
    config: Mapping[str, Any],
    *,
    cwd: Optional[Path] = None,
    env: Optional[Mapping[str, str]] = None,
) -> Path:
    """``ROTINV_CACHE_PATH`` (relative to cwd) wins over ``cache_path`` from the config."""
    environ = os.environ if env is None else env
    base = cwd if cwd is not None else Path.cwd()
    override = (environ.get(CACHE_ENV) or "").strip()
    if override:
        p = Path(override).expanduser()
        return p.resolve() if p.is_absolute() else (base / p).resolve()
    raw = config.get("cache_path") or DEFAULT_CACHE_RELATIVE
    return resolve_path_for_config(config, str(raw), cwd=base)


def config_file_path(
    explicit: Optional[str] = None,
    *,
    cwd: Optional[Path] = None,
    env: Optional[Mapping[str, str]] = None,
) -> Path:
    """Config file location: explicit flag, then ``ROTINV_CONFIG``, then ``data/config/rotinv.yaml``."""
    environ = os.environ if env is None else env
    base = cwd if cwd is not None else Path.cwd()
    raw = explicit or (environ.get(CONFIG_ENV) or "").strip()
    if raw:
        p = Path(raw).expanduser()
        return p.resolve() if p.is_absolute() else (base / p).resolve()
    return (base / DEFAULT_CONFIG_RELATIVE).resolve()
