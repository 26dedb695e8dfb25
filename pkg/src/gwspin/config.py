"""Scenario configuration: strict JSON parsing, validation and serialization.

Unknown keys are rejected and every error message names the offending field
path (``waveform.amplitude``, ``packet.order``...).
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError, GwspinError
from .kinematics import FrameParams, Method
from .quantum import MAX_QUBITS
from .wavepacket import DEFAULT_ORDER, DEFAULT_SEED, MAX_ORDER, WavePacket
from .waveform import Kind, Waveform

TRACKS = ("matrix", "deficit", "both")
MAX_PARTICLES = 7


@dataclass(frozen=True)
class WaveformSpec:
    kind: str = "gaussian"
    amplitude: float = 0.0
    width: float | None = None
    frequency: float | None = None
    table: str | None = None


@dataclass(frozen=True)
class PacketSpec:
    width: float = 0.5
    order: int = DEFAULT_ORDER


@dataclass(frozen=True)
class TimeGrid:
    tau_f: float = 10.0
    steps: int = 101

    def taus(self) -> list[float]:
        if self.steps == 1:
            return [0.0]
        return [self.tau_f * i / (self.steps - 1) for i in range(self.steps)]


@dataclass(frozen=True)
class ScenarioConfig:
    waveform: WaveformSpec = field(default_factory=WaveformSpec)
    frame: FrameParams = field(default_factory=FrameParams)
    packet: PacketSpec = field(default_factory=PacketSpec)
    time: TimeGrid = field(default_factory=TimeGrid)
    particles: int = 2
    track: str = "both"
    swap_depth: int = 3
    method: str = Method.EXACT_LOG.value
    seed: int = DEFAULT_SEED
    name: str = ""
    base_dir: str = field(default=".", compare=False, repr=False)

    # derived objects

    def build_waveform(self) -> Waveform:
        spec = self.waveform
        try:
            kind = Kind(spec.kind)
            if kind is Kind.ZERO:
                return Waveform.zero()
            if kind is Kind.GAUSSIAN:
                return Waveform.gaussian(spec.amplitude, _need(spec.width, "waveform.width"))
            if kind is Kind.SINE:
                return Waveform.sine(spec.amplitude, _need(spec.frequency, "waveform.frequency"))
            path = Path(_need(spec.table, "waveform.table"))
            if not path.is_absolute():
                path = Path(self.base_dir) / path
            return Waveform.from_csv(path)
        except ConfigError:
            raise
        except (GwspinError, OSError) as exc:
            raise ConfigError(f"waveform: {exc}") from None

    def build_packet(self) -> WavePacket:
        return WavePacket.for_frame(self.frame, self.packet.width)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("base_dir")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def with_value(self, path: str, value: Any) -> ScenarioConfig:
        """Copy with one dotted-path field replaced (re-validated)."""
        d = self.to_dict()
        node = d
        keys = path.split(".")
        for key in keys[:-1]:
            if not isinstance(node.get(key), dict):
                raise ConfigError(f"{path}: no such parameter")
            node = node[key]
        if keys[-1] not in node:
            raise ConfigError(f"{path}: no such parameter")
        node[keys[-1]] = value
        return parse_config(d, base_dir=self.base_dir)


def _need(value, name):
    if value is None:
        raise ConfigError(f"{name}: required for this waveform kind")
    return value


def _number(value, name, *, integer=False, positive=False, nonneg=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{name}: expected an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(f"{name}: must be finite")
    if positive and not value > 0:
        raise ConfigError(f"{name}: must be > 0, got {value!r}")
    if nonneg and value < 0:
        raise ConfigError(f"{name}: must be >= 0, got {value!r}")
    return value


def _section(doc, name, allowed):
    if not isinstance(doc, dict):
        raise ConfigError(f"{name}: expected an object")
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        prefix = f"{name}." if name else ""
        raise ConfigError(f"{prefix}{unknown[0]}: unknown field")
    return doc


def parse_config(doc: dict, base_dir: str | Path = ".") -> ScenarioConfig:
    top = _section(
        doc,
        "",
        ("waveform", "frame", "packet", "time", "particles", "track", "swap_depth", "method", "seed", "name"),
    )
    defaults = ScenarioConfig()

    wdoc = _section(top.get("waveform", {}), "waveform", ("kind", "amplitude", "width", "frequency", "table"))
    kind = wdoc.get("kind", "gaussian")
    if kind not in {k.value for k in Kind}:
        raise ConfigError(f"waveform.kind: expected one of {[k.value for k in Kind]}, got {kind!r}")
    wspec = WaveformSpec(
        kind=kind,
        amplitude=_number(wdoc.get("amplitude", 0.0), "waveform.amplitude"),
        width=None if wdoc.get("width") is None else _number(wdoc["width"], "waveform.width", positive=True),
        frequency=None
        if wdoc.get("frequency") is None
        else _number(wdoc["frequency"], "waveform.frequency", positive=True),
        table=wdoc.get("table"),
    )
    if wspec.table is not None and not isinstance(wspec.table, str):
        raise ConfigError("waveform.table: expected a path string")

    fkeys = ("mass", "rapidity", "angle", "t_i", "z_i", "x_i", "y_i", "allow_boundary")
    fdoc = _section(top.get("frame", {}), "frame", fkeys)
    fvals = {}
    for key in fkeys[:-1]:
        if key in fdoc:
            fvals[key] = _number(fdoc[key], f"frame.{key}")
    if "allow_boundary" in fdoc:
        if not isinstance(fdoc["allow_boundary"], bool):
            raise ConfigError("frame.allow_boundary: expected true/false")
        fvals["allow_boundary"] = fdoc["allow_boundary"]
    try:
        frame = FrameParams(**fvals)
    except GwspinError as exc:
        msg = str(exc)
        fieldname = msg.split()[0] if msg.split()[0] in fkeys else "angle"
        raise ConfigError(f"frame.{fieldname}: {msg}") from None

    pdoc = _section(top.get("packet", {}), "packet", ("width", "order"))
    packet = PacketSpec(
        width=_number(pdoc.get("width", defaults.packet.width), "packet.width", positive=True),
        order=_number(pdoc.get("order", defaults.packet.order), "packet.order", integer=True),
    )
    if not 8 <= packet.order <= MAX_ORDER:
        raise ConfigError(f"packet.order: must lie in [8, {MAX_ORDER}], got {packet.order}")

    tdoc = _section(top.get("time", {}), "time", ("tau_f", "steps"))
    time = TimeGrid(
        tau_f=_number(tdoc.get("tau_f", defaults.time.tau_f), "time.tau_f", nonneg=True),
        steps=_number(tdoc.get("steps", defaults.time.steps), "time.steps", integer=True, positive=True),
    )

    particles = _number(top.get("particles", defaults.particles), "particles", integer=True)
    if not 1 <= particles <= min(MAX_PARTICLES, MAX_QUBITS):
        raise ConfigError(f"particles: must lie in [1, {MAX_PARTICLES}], got {particles}")
    track = top.get("track", defaults.track)
    if track not in TRACKS:
        raise ConfigError(f"track: expected one of {list(TRACKS)}, got {track!r}")
    swap_depth = _number(top.get("swap_depth", defaults.swap_depth), "swap_depth", integer=True, nonneg=True)
    method = top.get("method", defaults.method)
    if method not in {m.value for m in Method}:
        raise ConfigError(f"method: expected one of {[m.value for m in Method]}, got {method!r}")
    seed = _number(top.get("seed", defaults.seed), "seed", integer=True, nonneg=True)
    name = top.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("name: expected a string")

    cfg = ScenarioConfig(
        waveform=wspec,
        frame=frame,
        packet=packet,
        time=time,
        particles=particles,
        track=track,
        swap_depth=swap_depth,
        method=method,
        seed=seed,
        name=name,
        base_dir=str(base_dir),
    )
    # surface waveform / packet precondition failures at load time
    cfg.build_waveform()
    try:
        cfg.build_packet()
    except GwspinError as exc:
        raise ConfigError(f"packet.width: {exc}") from None
    return cfg


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(doc, base_dir=path.parent)


def shipped_configs() -> dict[str, ScenarioConfig]:
    """Illustrative scenarios bundled with the package, keyed by file stem."""
    from importlib import resources

    out = {}
    for entry in sorted(resources.files("gwspin").joinpath("configs").iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = parse_config(json.loads(entry.read_text()))
    return out

