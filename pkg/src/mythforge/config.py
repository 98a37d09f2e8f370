"""Pipeline configuration: one JSON file wiring paths, IRI policy and
endpoint settings. Paths are resolved relative to the config file."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError
from .graph import DEFAULT_BASE

DEFAULT_NAME_ORDER = {
    "interpreter": "surname-first",
    "artwork_author": "given-first",
    "reference_author": "given-first",
}


@dataclass(frozen=True)
class Endpoints:
    recon_url: Optional[str] = None
    viaf_url: Optional[str] = None
    timeout: float = 10.0


@dataclass(frozen=True)
class PipelineConfig:
    base_iri: str = DEFAULT_BASE
    column_mapping: Optional[str] = None
    work_registry: Optional[str] = None
    aliases: Optional[str] = None
    authority: Optional[str] = None
    reference_overrides: Optional[str] = None
    name_order: dict = field(default_factory=lambda: dict(DEFAULT_NAME_ORDER))
    publisher_iri: str = ""
    publisher_label: str = ""
    build_time: str = ""
    mode: str = "offline"
    endpoints: Endpoints = field(default_factory=Endpoints)
    heatmap_bucket_width: int = 50
    skip_empty_literals: bool = False
    interpretation_act_namespace: str = "prov"
    accept_score: float = 0.9

    def validate(self) -> None:
        if not self.base_iri.endswith("/"):
            raise ConfigError(f"base_iri must end with '/': {self.base_iri!r}")
        if self.mode not in ("offline", "online"):
            raise ConfigError(f"mode must be offline or online: {self.mode!r}")
        if self.mode == "online" and not (self.endpoints.recon_url or self.endpoints.viaf_url):
            raise ConfigError("online mode needs at least one endpoint URL")
        for order in self.name_order.values():
            if order not in ("surname-first", "given-first"):
                raise ConfigError(f"unknown name order: {order!r}")
        if self.interpretation_act_namespace not in ("prov", "hico"):
            raise ConfigError(
                f"interpretation_act_namespace must be prov or hico: "
                f"{self.interpretation_act_namespace!r}"
            )
        if self.heatmap_bucket_width < 1:
            raise ConfigError("heatmap_bucket_width must be positive")
        if self.column_mapping is None:
            raise ConfigError("column_mapping path is required")
        for name in ("column_mapping", "work_registry", "aliases", "authority",
                     "reference_overrides"):
            path = getattr(self, name)
            if path is not None and not os.path.exists(path):
                raise ConfigError(f"{name} file does not exist: {path}")


_PATH_KEYS = ("column_mapping", "work_registry", "aliases", "authority", "reference_overrides")
_KNOWN_KEYS = set(_PATH_KEYS) | {
    "base_iri", "name_order", "publisher_iri", "publisher_label", "build_time",
    "mode", "endpoints", "heatmap_bucket_width", "skip_empty_literals",
    "interpretation_act_namespace", "accept_score",
}


def load_config(path: str, mode_override: Optional[str] = None) -> PipelineConfig:
    """Read, resolve and validate a config file; raises ConfigError."""
    if not os.path.exists(path):
        raise ConfigError(f"config file does not exist: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {path}: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object: {path}")
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    base_dir = os.path.dirname(os.path.abspath(path))
    resolved = {}
    for key in _PATH_KEYS:
        value = data.get(key)
        if value is not None:
            resolved[key] = value if os.path.isabs(value) else os.path.join(base_dir, value)

    endpoints = data.get("endpoints") or {}
    if not isinstance(endpoints, dict):
        raise ConfigError("endpoints must be an object")
    name_order = dict(DEFAULT_NAME_ORDER)
    name_order.update(data.get("name_order") or {})

    config = PipelineConfig(
        base_iri=data.get("base_iri", DEFAULT_BASE),
        name_order=name_order,
        publisher_iri=data.get("publisher_iri", ""),
        publisher_label=data.get("publisher_label", ""),
        build_time=data.get("build_time", ""),
        mode=mode_override or data.get("mode", "offline"),
        endpoints=Endpoints(
            recon_url=endpoints.get("recon_url"),
            viaf_url=endpoints.get("viaf_url"),
            timeout=float(endpoints.get("timeout", 10.0)),
        ),
        heatmap_bucket_width=int(data.get("heatmap_bucket_width", 50)),
        skip_empty_literals=bool(data.get("skip_empty_literals", False)),
        interpretation_act_namespace=data.get("interpretation_act_namespace", "prov"),
        accept_score=float(data.get("accept_score", 0.9)),
        **resolved,
    )
    config.validate()
    return config
