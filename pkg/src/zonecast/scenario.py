"""Scenario files: YAML documents mirroring ScenarioConfig field for field.

Unknown keys are rejected with the offending key path; missing keys fall back
to the defaults baked into the config dataclasses. A file written by
save_scenario() re-parses to an identical ScenarioConfig.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Any, Union

import yaml

from .channel import ChannelConfig
from .engine import ConfigError, CsmaConfig, Placement, ScenarioConfig
from .grid import GridConfig

_GRID_KEYS = ("zone_side", "block_side", "origin")
_CHANNEL_KEYS = ("comm_range", "capture_threshold", "path_loss_exponent", "reference_power")
_CSMA_KEYS = ("cw_min", "cw_max", "micro_slot_us")
_PLACEMENT_KEYS = ("count", "area", "min_separation", "connected")
_TOP_KEYS = (
    "grid",
    "channel",
    "sensing_range",
    "slot_duration_ms",
    "vehicles",
    "placement",
    "vehicle_radius",
    "objects",
    "initiators",
    "max_slots",
    "mac_mode",
    "seed",
    "csma",
)


def _mapping(obj: Any, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(obj).__name__}")
    unknown = [k for k in obj if not isinstance(k, str)]
    if unknown:
        raise ConfigError(f"{path}: non-string key {unknown[0]!r}")
    return obj


def _check_keys(d: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in d:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {path}")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _point(value: Any, path: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{path}: expected [x, y]")
    return (_number(value[0], path + "[0]"), _number(value[1], path + "[1]"))


def _parse_grid(raw: Any) -> GridConfig:
    d = _mapping(raw, "grid")
    _check_keys(d, _GRID_KEYS, "grid")
    kwargs: dict[str, Any] = {}
    if "zone_side" in d:
        kwargs["zone_side"] = _number(d["zone_side"], "grid.zone_side")
    if "block_side" in d:
        kwargs["block_side"] = _number(d["block_side"], "grid.block_side")
    if "origin" in d:
        kwargs["origin"] = _point(d["origin"], "grid.origin")
    try:
        return GridConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _parse_channel(raw: Any) -> ChannelConfig:
    d = _mapping(raw, "channel")
    _check_keys(d, _CHANNEL_KEYS, "channel")
    kwargs = {k: _number(d[k], f"channel.{k}") for k in _CHANNEL_KEYS if k in d}
    try:
        return ChannelConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"channel: {exc}") from exc


def _parse_csma(raw: Any) -> CsmaConfig:
    d = _mapping(raw, "csma")
    _check_keys(d, _CSMA_KEYS, "csma")
    kwargs: dict[str, Any] = {}
    if "cw_min" in d:
        kwargs["cw_min"] = _integer(d["cw_min"], "csma.cw_min")
    if "cw_max" in d:
        kwargs["cw_max"] = _integer(d["cw_max"], "csma.cw_max")
    if "micro_slot_us" in d:
        kwargs["micro_slot_us"] = _number(d["micro_slot_us"], "csma.micro_slot_us")
    return CsmaConfig(**kwargs)


def _parse_vehicles(raw: Any) -> tuple:
    if not isinstance(raw, list):
        raise ConfigError("vehicles: expected a list")
    out = []
    for i, item in enumerate(raw):
        d = _mapping(item, f"vehicles[{i}]")
        _check_keys(d, ("id", "pos"), f"vehicles[{i}]")
        if "id" not in d or "pos" not in d:
            raise ConfigError(f"vehicles[{i}]: needs 'id' and 'pos'")
        out.append((_integer(d["id"], f"vehicles[{i}].id"), _point(d["pos"], f"vehicles[{i}].pos")))
    return tuple(out)


def _parse_placement(raw: Any) -> Placement:
    d = _mapping(raw, "placement")
    _check_keys(d, _PLACEMENT_KEYS, "placement")
    if "count" not in d:
        raise ConfigError("placement: needs 'count'")
    kwargs: dict[str, Any] = {"count": _integer(d["count"], "placement.count")}
    if "area" in d and d["area"] is not None:
        area = d["area"]
        if not isinstance(area, (list, tuple)) or len(area) != 4:
            raise ConfigError("placement.area: expected [x0, y0, x1, y1]")
        kwargs["area"] = tuple(_number(v, f"placement.area[{i}]") for i, v in enumerate(area))
    if "min_separation" in d:
        kwargs["min_separation"] = _number(d["min_separation"], "placement.min_separation")
    if "connected" in d:
        if not isinstance(d["connected"], bool):
            raise ConfigError("placement.connected: expected true/false")
        kwargs["connected"] = d["connected"]
    return Placement(**kwargs)


def _parse_objects(raw: Any) -> tuple:
    if not isinstance(raw, list):
        raise ConfigError("objects: expected a list")
    out = []
    for i, item in enumerate(raw):
        d = _mapping(item, f"objects[{i}]")
        _check_keys(d, ("pos", "radius"), f"objects[{i}]")
        if "pos" not in d:
            raise ConfigError(f"objects[{i}]: needs 'pos'")
        radius = _number(d.get("radius", 1.0), f"objects[{i}].radius")
        out.append((_point(d["pos"], f"objects[{i}].pos"), radius))
    return tuple(out)


def parse_scenario(text: str, name: str = "<scenario>") -> ScenarioConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"{name}: parse error{where}: {exc}") from exc
    if raw is None:
        raw = {}
    d = _mapping(raw, name)
    _check_keys(d, _TOP_KEYS, name)

    kwargs: dict[str, Any] = {}
    if "grid" in d:
        kwargs["grid"] = _parse_grid(d["grid"])
    if "channel" in d:
        kwargs["channel"] = _parse_channel(d["channel"])
    if "csma" in d:
        kwargs["csma"] = _parse_csma(d["csma"])
    if "sensing_range" in d:
        kwargs["sensing_range"] = _number(d["sensing_range"], "sensing_range")
    if "slot_duration_ms" in d:
        kwargs["slot_duration_ms"] = _number(d["slot_duration_ms"], "slot_duration_ms")
    if "vehicle_radius" in d:
        kwargs["vehicle_radius"] = _number(d["vehicle_radius"], "vehicle_radius")
    if d.get("vehicles") is not None:
        kwargs["vehicles"] = _parse_vehicles(d["vehicles"])
    if d.get("placement") is not None:
        kwargs["placement"] = _parse_placement(d["placement"])
    if "objects" in d:
        kwargs["objects"] = _parse_objects(d["objects"])
    if d.get("initiators") is not None:
        if not isinstance(d["initiators"], list):
            raise ConfigError("initiators: expected a list of vehicle ids")
        kwargs["initiators"] = tuple(
            _integer(v, f"initiators[{i}]") for i, v in enumerate(d["initiators"])
        )
    if d.get("max_slots") is not None:
        kwargs["max_slots"] = _integer(d["max_slots"], "max_slots")
    if "mac_mode" in d:
        if d["mac_mode"] not in ("l3", "csma"):
            raise ConfigError(f"mac_mode: expected 'l3' or 'csma', got {d['mac_mode']!r}")
        kwargs["mac_mode"] = d["mac_mode"]
    if "seed" in d:
        kwargs["seed"] = _integer(d["seed"], "seed")
    try:
        return ScenarioConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(text, name=str(path))


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    d: dict[str, Any] = {
        "grid": {
            "zone_side": cfg.grid.zone_side,
            "block_side": cfg.grid.block_side,
            "origin": list(cfg.grid.origin),
        },
        "channel": {
            "comm_range": cfg.channel.comm_range,
            "capture_threshold": cfg.channel.capture_threshold,
            "path_loss_exponent": cfg.channel.path_loss_exponent,
            "reference_power": cfg.channel.reference_power,
        },
        "sensing_range": cfg.sensing_range,
        "slot_duration_ms": cfg.slot_duration_ms,
        "vehicle_radius": cfg.vehicle_radius,
        "objects": [{"pos": list(p), "radius": r} for p, r in cfg.objects],
        "mac_mode": cfg.mac_mode,
        "seed": cfg.seed,
        "csma": {
            "cw_min": cfg.csma.cw_min,
            "cw_max": cfg.csma.cw_max,
            "micro_slot_us": cfg.csma.micro_slot_us,
        },
    }
    if cfg.vehicles is not None:
        d["vehicles"] = [{"id": vid, "pos": list(p)} for vid, p in cfg.vehicles]
    if cfg.placement is not None:
        p: dict[str, Any] = {"count": cfg.placement.count}
        if cfg.placement.area is not None:
            p["area"] = list(cfg.placement.area)
        p["min_separation"] = cfg.placement.min_separation
        p["connected"] = cfg.placement.connected
        d["placement"] = p
    if cfg.initiators is not None:
        d["initiators"] = list(cfg.initiators)
    if cfg.max_slots is not None:
        d["max_slots"] = cfg.max_slots
    return d


def save_scenario(cfg: ScenarioConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(yaml.safe_dump(scenario_to_dict(cfg), sort_keys=False))


def bundled_scenario(name: str) -> Path:
    """Path of a scenario file shipped with the package (e.g. 'fig5_line3')."""
    if not name.endswith(".scenario"):
        name += ".scenario"
    path = Path(str(resources.files(__package__) / "scenarios" / name))
    if not path.exists():
        raise ConfigError(f"no bundled scenario named {name!r}")
    return path
