"""Logic configurations: which frame properties / rules are active."""
from __future__ import annotations

from dataclasses import dataclass, replace


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class LogicConfig:
    partial_determinism: bool = False
    cancellativity: bool = False
    indivisible_unit: bool = False
    disjointness: bool = False
    splittability: bool = False
    cross_split: bool = False
    heap_extension: bool = False

    def name(self) -> str:
        parts = ["bbi"]
        flags = [
            ("p", self.partial_determinism), ("c", self.cancellativity),
            ("iu", self.indivisible_unit), ("d", self.disjointness),
            ("s", self.splittability), ("cs", self.cross_split),
            ("heap", self.heap_extension),
        ]
        parts.extend(k for k, on in flags if on)
        return "+".join(parts)


BBI = LogicConfig()
PASL = LogicConfig(partial_determinism=True, cancellativity=True)
SEPARATA = replace(PASL, disjointness=True, heap_extension=True)

_PRESETS = {
    "bbi": BBI,
    "pasl": PASL,
    "separata+": SEPARATA,
}

_FLAGS = {
    "p": "partial_determinism",
    "c": "cancellativity",
    "iu": "indivisible_unit",
    "d": "disjointness",
    "s": "splittability",
    "cs": "cross_split",
    "heap": "heap_extension",
}


def preset(name: str) -> LogicConfig:
    """Parse a logic name like "bbi", "pasl+d" or "separata+"."""
    key = name.strip().lower()
    if key in _PRESETS:
        return _validate(_PRESETS[key], name)
    parts = key.split("+")
    if parts[0] not in ("bbi", "pasl"):
        raise ConfigError("unknown logic %r" % name)
    cfg = _PRESETS[parts[0]]
    for part in parts[1:]:
        if part not in _FLAGS:
            raise ConfigError("unknown logic flag %r in %r" % (part, name))
        cfg = replace(cfg, **{_FLAGS[part]: True})
    return _validate(cfg, name)


def _validate(cfg: LogicConfig, name: str) -> LogicConfig:
    if cfg.heap_extension:
        if not cfg.disjointness:
            cfg = replace(cfg, disjointness=True)
        if not (cfg.partial_determinism and cfg.cancellativity):
            raise ConfigError("heap model requires pasl semantics: %r" % name)
    if cfg.heap_extension and (cfg.splittability or cfg.cross_split):
        raise ConfigError("splittability/cross-split not supported with heap: %r" % name)
    return cfg
