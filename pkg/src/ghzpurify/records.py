"""Run configuration and machine-readable run records.

Configs are flat JSON documents with one nesting level for the noise lists:

    {
      "m": 3,
      "mode": "bitflip",
      "pol_noise": [{"kind": "bit-flip", "target_index": 1, "weight": 0.2}],
      "spatial_noise": [{"kind": "bit-flip", "target_index": 1, "weight": 0.3}],
      "target": "0+",
      "seed": 0
    }

`seed` is echoed but unused: every run here is exact. Records round-trip
through JSON unchanged; CSV output carries the flat scalar fields at 12
significant digits for plotting.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Any

from .noise import BIT_FLIP, PHASE_FLIP, POLARIZATION, NoiseSpec
from .states import SPATIAL

SCHEMA_VERSION = 1
MODES = ("bitflip", "phaseflip", "general", "deterministic-demo")

_TARGET_RE = re.compile(r"^(\d+)([+-])$")


class ConfigError(ValueError):
    """Malformed or schema-invalid configuration input."""


def format_sig(value: float, digits: int = 12) -> str:
    return format(value, f".{digits}g")


def parse_target(label: str) -> tuple[int, int]:
    """Parse a GHZ target label like "0+" into (index, sign)."""
    match = _TARGET_RE.match(label)
    if not match:
        raise ConfigError(f"target must look like '0+' or '2-', got {label!r}")
    return int(match.group(1)), 1 if match.group(2) == "+" else -1


@dataclass(frozen=True)
class ProtocolConfig:
    m: int
    mode: str
    pol_noise: tuple[NoiseSpec, ...] = ()
    spatial_noise: tuple[NoiseSpec, ...] = ()
    target: str = "0+"
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.m < 2:
            raise ConfigError(f"m must be >= 2, got {self.m!r}")
        index, _ = parse_target(self.target)
        limit = 2 ** (self.m - 1)
        if index >= limit:
            raise ConfigError(f"target index {index} out of range [0, {limit}) for m={self.m}")
        for spec in self.pol_noise + self.spatial_noise:
            if spec.kind == BIT_FLIP and not 1 <= spec.target_index < limit:
                raise ConfigError(
                    f"bit-flip target_index {spec.target_index} out of range [1, {limit}) for m={self.m}"
                )
        self._check_mode_compatibility()

    def _check_mode_compatibility(self):
        specs = self.pol_noise + self.spatial_noise
        if self.mode == "phaseflip":
            wrong = [s for s in specs if s.kind != PHASE_FLIP]
            per_dof_limit = 1
        else:
            wrong = [s for s in specs if s.kind != BIT_FLIP]
            per_dof_limit = 1 if self.mode in ("bitflip", "deterministic-demo") else None
        if wrong:
            raise ConfigError(f"mode {self.mode!r} admits only {'phase' if self.mode == 'phaseflip' else 'bit'}-flip noise")
        if per_dof_limit is not None:
            if len(self.pol_noise) > per_dof_limit or len(self.spatial_noise) > per_dof_limit:
                raise ConfigError(f"mode {self.mode!r} admits at most one error component per degree of freedom")
        if self.mode == "bitflip" and self.pol_noise and self.spatial_noise:
            if self.pol_noise[0].target_index != self.spatial_noise[0].target_index:
                raise ConfigError(
                    "bitflip mode pairs equal error indices on both degrees of freedom; "
                    "use mode 'general' or 'deterministic-demo' for mismatched indices"
                )
        if self.mode == "deterministic-demo":
            if not (self.pol_noise and self.spatial_noise):
                raise ConfigError("deterministic-demo needs one error component per degree of freedom")
            if self.pol_noise[0].target_index == self.spatial_noise[0].target_index:
                raise ConfigError("deterministic-demo needs distinct error indices on the two degrees of freedom")

    def to_dict(self) -> dict[str, Any]:
        def spec_dict(s: NoiseSpec) -> dict[str, Any]:
            return {"kind": s.kind, "target_index": s.target_index, "weight": s.weight}

        return {
            "m": self.m,
            "mode": self.mode,
            "pol_noise": [spec_dict(s) for s in self.pol_noise],
            "spatial_noise": [spec_dict(s) for s in self.spatial_noise],
            "target": self.target,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "ProtocolConfig":
        if not isinstance(raw, dict):
            raise ConfigError(f"config root must be an object, got {type(raw).__name__}")
        known = {"m", "mode", "pol_noise", "spatial_noise", "target", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        for req in ("m", "mode"):
            if req not in raw:
                raise ConfigError(f"missing required config field {req!r}")
        if not isinstance(raw["m"], int) or isinstance(raw["m"], bool):
            raise ConfigError(f"field 'm' must be an integer, got {raw['m']!r}")
        seed = raw.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise ConfigError(f"field 'seed' must be an integer or null, got {seed!r}")

        def specs(key: str, dof: str) -> tuple[NoiseSpec, ...]:
            entries = raw.get(key, [])
            if not isinstance(entries, list):
                raise ConfigError(f"field {key!r} must be a list of noise entries")
            out = []
            for pos, entry in enumerate(entries):
                if not isinstance(entry, dict):
                    raise ConfigError(f"{key}[{pos}] must be an object")
                extra = set(entry) - {"kind", "target_index", "weight"}
                if extra:
                    raise ConfigError(f"{key}[{pos}] has unknown fields: {sorted(extra)}")
                if "kind" not in entry or "weight" not in entry:
                    raise ConfigError(f"{key}[{pos}] needs 'kind' and 'weight'")
                try:
                    out.append(
                        NoiseSpec(
                            dof=dof,
                            kind=entry["kind"],
                            weight=float(entry["weight"]),
                            target_index=int(entry.get("target_index", 0)),
                        )
                    )
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"{key}[{pos}]: {exc}") from exc
            return tuple(out)

        return cls(
            m=raw["m"],
            mode=raw["mode"],
            pol_noise=specs("pol_noise", POLARIZATION),
            spatial_noise=specs("spatial_noise", SPATIAL),
            target=raw.get("target", "0+"),
            seed=seed,
        )


def load_config(path: str) -> ProtocolConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return ProtocolConfig.from_dict(raw)


@dataclass(frozen=True)
class RunRecord:
    """One simulate invocation: config echo, results, closed-form comparison."""

    config: dict[str, Any]
    result: dict[str, Any]
    closed_form: dict[str, Any]
    deviation: dict[str, float]
    tool_version: str
    timestamp: str | None = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema_version": self.schema_version,
            "tool": "ghzpurify",
            "tool_version": self.tool_version,
        }
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        out["config"] = self.config
        out["result"] = self.result
        out["closed_form"] = self.closed_form
        out["deviation"] = self.deviation
        return out

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "RunRecord":
        if raw.get("tool") != "ghzpurify":
            raise ConfigError(f"not a ghzpurify record: tool={raw.get('tool')!r}")
        if raw.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(f"unsupported record schema_version {raw.get('schema_version')!r}")
        return cls(
            config=raw["config"],
            result=raw["result"],
            closed_form=raw["closed_form"],
            deviation=raw["deviation"],
            tool_version=raw["tool_version"],
            timestamp=raw.get("timestamp"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))

    def scalar_fields(self) -> dict[str, Any]:
        """Flat subset shared by the CSV encoding."""
        fields: dict[str, Any] = {
            "mode": self.config["mode"],
            "m": self.config["m"],
            "target": self.config["target"],
            "success_probability": self.result["success_probability"],
            "output_fidelity": self.result["output_fidelity"],
        }
        for key, value in self.closed_form.items():
            if isinstance(value, (int, float)):
                fields[f"closed_form_{key}"] = value
        for key, value in self.deviation.items():
            fields[f"deviation_{key}"] = value
        return fields

    def to_csv(self) -> str:
        fields = self.scalar_fields()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(fields.keys())
        writer.writerow(
            format_sig(v) if isinstance(v, float) else v for v in fields.values()
        )
        return buf.getvalue()


def rows_to_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(format_sig(v) if isinstance(v, float) else v for v in row)
    return buf.getvalue()


def rows_to_json(header: list[str], rows: list[list[Any]]) -> str:
    records = [dict(zip(header, row)) for row in rows]
    return json.dumps(records, indent=2) + "\n"
