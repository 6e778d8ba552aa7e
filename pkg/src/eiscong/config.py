"""Configuration loading with strict key checking.

One JSON file drives the command line tool: a "settings" table of runtime
knobs, optional "fields"/"towers" tables merged over the shipped preset
catalogue, and optional named phi "batteries".  Any unknown key anywhere
is an error; presets are ground truth and typos must fail loudly.
"""
import json
from dataclasses import dataclass, field, fields

from . import presets


class ConfigError(ValueError):
    pass


_FIELD_KEYS = {"min_poly", "units", "disc"}
_TOWER_KEYS = {"base", "top", "p", "gamma_gen_image", "base_gen_image",
               "theta_uniformizer", "level", "theta_valuation",
               "ramified_rational", "cm_disc"}
_TOWER_OPTIONAL = {"base_gen_image"}
_BATTERY_KEYS = {"preset", "seeds", "symmetrize"}


@dataclass(frozen=True)
class ToolConfig:
    preset: str = "zeta9"
    phi: str = "battery"
    bound: int = 30
    cap: int = 10 ** 4
    trunc: int = 30
    emax: int = 5
    gauss_bound: int = 50
    katz_bound: int = 25
    report_dir: str | None = None
    batteries: dict = field(default_factory=dict)


_INT_SETTINGS = {"bound", "cap", "trunc", "emax", "gauss_bound",
                 "katz_bound"}
_STR_SETTINGS = {"preset", "phi", "report_dir"}


def _fail(msg):
    raise ConfigError(msg)


def _check_keys(table, allowed, required, where):
    if not isinstance(table, dict):
        _fail(f"{where} must be a JSON object")
    unknown = sorted(set(table) - allowed)
    if unknown:
        _fail(f"unknown keys in {where}: {unknown}")
    missing = sorted(required - set(table))
    if missing:
        _fail(f"missing keys in {where}: {missing}")


def _int_list(v):
    return isinstance(v, list) and all(isinstance(c, int) for c in v)


def _validate_settings(table):
    _check_keys(table, _INT_SETTINGS | _STR_SETTINGS, set(),
                "config settings")
    for key, v in table.items():
        if key in _INT_SETTINGS:
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                _fail(f"setting {key!r} must be a positive integer")
        elif not (isinstance(v, str) or (key == "report_dir" and v is None)):
            _fail(f"setting {key!r} must be a string")
    return dict(table)


def _validate_fields(table):
    if not isinstance(table, dict):
        _fail("config fields must be a JSON object")
    for name, ent in table.items():
        _check_keys(ent, _FIELD_KEYS, _FIELD_KEYS, f"field preset {name!r}")
        if not _int_list(ent["min_poly"]):
            _fail(f"field preset {name!r}: min_poly must be integers")
        if not isinstance(ent["disc"], int):
            _fail(f"field preset {name!r}: disc must be an integer")
        if not (isinstance(ent["units"], list)
                and all(_int_list(u) for u in ent["units"])):
            _fail(f"field preset {name!r}: units must be coordinate lists")
    return table


def _validate_towers(table):
    if not isinstance(table, dict):
        _fail("config towers must be a JSON object")
    for name, ent in table.items():
        _check_keys(ent, _TOWER_KEYS, _TOWER_KEYS - _TOWER_OPTIONAL,
                    f"tower preset {name!r}")
        for key in ("p", "level", "theta_valuation", "ramified_rational",
                    "cm_disc"):
            if not isinstance(ent[key], int):
                _fail(f"tower preset {name!r}: {key} must be an integer")
        for key in ("base", "top"):
            if not isinstance(ent[key], str):
                _fail(f"tower preset {name!r}: {key} must be a field name")
    return table


def _validate_batteries(table):
    if not isinstance(table, dict):
        _fail("config batteries must be a JSON object")
    for name, ent in table.items():
        _check_keys(ent, _BATTERY_KEYS, {"seeds"}, f"battery {name!r}")
        seeds = ent["seeds"]
        ok = isinstance(seeds, list) and seeds and all(
            isinstance(s, list) and len(s) == 2 and _int_list(s[0])
            and _int_list(s[1]) for s in seeds)
        if not ok:
            _fail(f"battery {name!r}: seeds must be pairs of "
                  "coordinate lists")
        if "symmetrize" in ent and not isinstance(ent["symmetrize"], bool):
            _fail(f"battery {name!r}: symmetrize must be a boolean")
    return table


def load_config(path: str | None) -> ToolConfig:
    """Parse and validate a config file; None means all defaults."""
    if path is None:
        return ToolConfig()
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        _fail(f"cannot read config {path!r}: {e}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        _fail(f"config {path!r} is not valid JSON: {e}")
    if not isinstance(data, dict):
        _fail("config must be a JSON object")
    _check_keys(data, {"settings", "fields", "towers", "batteries"}, set(),
                "config")
    settings = _validate_settings(data.get("settings", {}))
    extra_fields = _validate_fields(data.get("fields", {}))
    extra_towers = _validate_towers(data.get("towers", {}))
    batteries = _validate_batteries(data.get("batteries", {}))
    if extra_fields or extra_towers:
        presets.extend_catalogue(extra_fields, extra_towers)
    known = {f.name for f in fields(ToolConfig)}
    assert set(settings) <= known
    return ToolConfig(batteries=batteries, **settings)
