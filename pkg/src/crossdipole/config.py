"""JSON design and optimizer configs.

Keys ending in ``_mm`` or ``_ghz`` are converted to their SI ``_m`` /
``_hz`` counterparts on ingest; everything downstream is SI.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import jsonschema

from .geometry import DEFAULT_SEGMENTS, ArrayDesign, wavelength


class ConfigError(ValueError):
    """Invalid or unreadable configuration file."""


_ELEMENT = {
    "type": "object",
    "properties": {k: {"type": "number", "exclusiveMinimum": 0}
                   for k in ("lx_m", "ly_m", "wx_m", "wy_m")},
    "required": ["lx_m", "ly_m", "wx_m", "wy_m"],
    "additionalProperties": False,
}

DESIGN_SCHEMA = {
    "type": "object",
    "properties": {
        "frequency_hz": {"type": "number", "exclusiveMinimum": 0},
        "spacing_m": {"type": "number", "exclusiveMinimum": 0},
        "spacing_lambda": {"type": "number", "exclusiveMinimum": 0},
        "driven": _ELEMENT,
        "parasitic": _ELEMENT,
        "load_reactance_ohm": {"type": "number"},
        "segments_per_dipole": {"type": "integer", "minimum": 8, "multipleOf": 2},
        "reference_impedance_ohm": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["frequency_hz", "driven", "parasitic", "load_reactance_ohm"],
    "oneOf": [{"required": ["spacing_m"]}, {"required": ["spacing_lambda"]}],
    "additionalProperties": False,
}

GA_SCHEMA = {
    "type": "object",
    "properties": {
        "population": {"type": "integer", "minimum": 4, "multipleOf": 2},
        "generations": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "f0_hz": {"type": "number", "exclusiveMinimum": 0},
        "search_spacing": {"type": "boolean"},
    },
    "additionalProperties": False,
}

_SUFFIX = {"_mm": ("_m", 1e-3), "_ghz": ("_hz", 1e9)}


def _to_si(obj, path=()):
    if isinstance(obj, dict):
        out = {}
        for key, value in obj.items():
            new_key, scale = key, None
            for suffix, (si, factor) in _SUFFIX.items():
                if key.endswith(suffix):
                    new_key, scale = key[: -len(suffix)] + si, factor
            if new_key in out or (new_key != key and new_key in obj):
                raise ConfigError(f"{'/'.join(path + (key,))}: given twice with different units")
            value = _to_si(value, path + (key,))
            if scale is not None and isinstance(value, (int, float)) and not isinstance(value, bool):
                value = value * scale
            out[new_key] = value
        return out
    return obj


def _locate(text, path):
    """1-based line of the innermost key in ``path`` found in ``text``."""
    pos, line = 0, 1
    for key in path:
        if not isinstance(key, str):
            continue
        spellings = [key] + [key[: -len(si)] + suffix for suffix, (si, _) in _SUFFIX.items()
                             if key.endswith(si)]
        m = re.compile(r'"(%s)"\s*:' % "|".join(map(re.escape, spellings))).search(text, pos)
        if m is None:
            break
        pos = m.start()
        line = text.count("\n", 0, pos) + 1
    return line


def _parse(text, source, schema):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict) or not raw:
        raise ConfigError(f"{source}:1: config must be a non-empty JSON object")
    data = _to_si(raw)
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data),
                    key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        where = "/".join(str(p) for p in path) or "<root>"
        msg = err.message
        if err.validator == "oneOf" and not path:
            msg = "exactly one of spacing_m / spacing_lambda is required"
        raise ConfigError(f"{source}:{_locate(text, path)}: {where}: {msg}")
    return data


def load_design_config(path) -> dict:
    """Read and validate a design config; returns the normalized SI dict."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return _parse(text, str(path), DESIGN_SCHEMA)


def parse_design_config(text, source="<config>") -> dict:
    return _parse(text, source, DESIGN_SCHEMA)


def load_ga_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return _parse(text, str(path), GA_SCHEMA)


def design_from_config(cfg: dict) -> ArrayDesign:
    f = cfg["frequency_hz"]
    spacing = cfg["spacing_m"] if "spacing_m" in cfg else cfg["spacing_lambda"] * wavelength(f)
    d, p = cfg["driven"], cfg["parasitic"]
    try:
        return ArrayDesign(
            lx1=d["lx_m"], lx2=p["lx_m"], ly1=d["ly_m"], ly2=p["ly_m"],
            wx1=d["wx_m"], wx2=p["wx_m"], wy1=d["wy_m"], wy2=p["wy_m"],
            spacing_d=spacing, load_reactance=cfg["load_reactance_ohm"], frequency=f,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def design_to_config(design: ArrayDesign, segments=DEFAULT_SEGMENTS, z0=50.0) -> dict:
    return {
        "frequency_hz": design.frequency,
        "spacing_m": design.spacing_d,
        "driven": {"lx_m": design.lx1, "ly_m": design.ly1, "wx_m": design.wx1, "wy_m": design.wy1},
        "parasitic": {"lx_m": design.lx2, "ly_m": design.ly2, "wx_m": design.wx2,
                      "wy_m": design.wy2},
        "load_reactance_ohm": design.load_reactance,
        "segments_per_dipole": segments,
        "reference_impedance_ohm": z0,
    }


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
