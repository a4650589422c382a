"""INI-style parameter files with a single ``[parameters]`` section."""

from __future__ import annotations

import configparser
import os
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from .params import FIELDS, OPTIONAL_FIELDS, ParameterSet, validate_parameters

SECTION = "parameters"
BUNDLED = ("paper_s4.cfg",)


class ConfigError(ValueError):
    pass


def bundled_config(name: str = "paper_s4.cfg") -> Path:
    if name not in BUNDLED:
        raise ConfigError(f"no bundled config named {name!r}; available: {', '.join(BUNDLED)}")
    return Path(str(resources.files("pdsteady") / "data" / name))


def resolve_config_path(path: Union[str, os.PathLike, None]) -> Path:
    """An existing path is used as given; a bare bundled name falls back to the packaged copy."""
    if path is None:
        return bundled_config()
    path = Path(path)
    if path.exists():
        return path
    if path.name in BUNDLED and path.parent == Path("."):
        return bundled_config(path.name)
    raise ConfigError(f"config file not found: {path}")


def _parse_value(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {text!r} as a number") from None


def parse_config(text: str, source: str = "<string>") -> ParameterSet:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str  # keys are case sensitive (K, C_GB, ...)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    extra_sections = [s for s in parser.sections() if s != SECTION]
    if extra_sections:
        raise ConfigError(f"{source}: unknown section(s) {extra_sections}; expected only [{SECTION}]")
    if not parser.has_section(SECTION):
        raise ConfigError(f"{source}: missing [{SECTION}] section")

    values = {}
    for key, raw in parser.items(SECTION):
        if key not in FIELDS:
            raise ConfigError(f"{source}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    missing = [k for k in FIELDS if k not in values and k not in OPTIONAL_FIELDS]
    if missing:
        raise ConfigError(f"{source}: missing key(s) {', '.join(missing)}")
    return ParameterSet(**values)


def load_config(path=None, overrides: Optional[Iterable[str]] = None) -> ParameterSet:
    """Read, apply ``key=value`` overrides, and validate a parameter file.

    ``path=None`` loads the bundled reference set.
    """
    path = resolve_config_path(path)
    params = parse_config(path.read_text(), source=str(path))
    if overrides:
        params = apply_overrides(params, overrides)
    return validate_parameters(params)


def apply_overrides(params: ParameterSet, overrides: Iterable[str]) -> ParameterSet:
    changes = {}
    for item in overrides:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        if key not in FIELDS:
            raise ConfigError(f"override names unknown key {key!r}")
        changes[key] = _parse_value(key, value.strip())
    return params.replace(**changes)


def paper_parameters() -> ParameterSet:
    """The bundled reference parameter set."""
    return load_config(None)
