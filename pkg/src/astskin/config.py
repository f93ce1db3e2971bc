"""Workbench configuration: one flat ``key = value`` file covering every module."""

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .calib.dataset import SweepProtocol
from .errors import ConfigError
from .grip import ControllerConfig
from .skin import AttenuationModel, ContactModel, SkinGeometry, SkinSim
from .spectrum import SignalConfig
from .trials import TrialConfig

# section attribute -> dataclass; every field name is a config key
SECTIONS = {
    "signal": SignalConfig,
    "geometry": SkinGeometry,
    "contact": ContactModel,
    "attenuation": AttenuationModel,
    "protocol": SweepProtocol,
    "controller": ControllerConfig,
    "trial": TrialConfig,
}
_HIDDEN = {("attenuation", "rng_seed")}  # driven by the top-level seed


@dataclass(frozen=True)
class WorkbenchConfig:
    signal: SignalConfig = field(default_factory=SignalConfig)
    geometry: SkinGeometry = field(default_factory=SkinGeometry)
    contact: ContactModel = field(default_factory=ContactModel)
    attenuation: AttenuationModel = field(default_factory=AttenuationModel)
    protocol: SweepProtocol = field(default_factory=SweepProtocol)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    trial: TrialConfig = field(default_factory=TrialConfig)
    seed: int = 0
    out: str = "out"

    @property
    def sim(self):
        return SkinSim(self.signal, self.geometry, self.contact,
                       replace(self.attenuation, rng_seed=self.seed))


def _key_map():
    keys = {}
    for section, cls in SECTIONS.items():
        for f in fields(cls):
            if (section, f.name) in _HIDDEN:
                continue
            if f.name in keys:
                raise RuntimeError(f"config key {f.name!r} is ambiguous")
            keys[f.name] = (section, f)
    return keys


KEYS = _key_map()


def _convert(section, f, raw):
    raw = raw.strip()
    try:
        if f.name == "tone_freqs":
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if f.name == "tone_amp":
            parts = [float(v) for v in raw.split(",") if v.strip()]
            return parts[0] if len(parts) == 1 else tuple(parts)
        default = getattr(SECTIONS[section](), f.name)
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {f.name}: {raw!r}") from None


def parse_config(text, source="<config>"):
    """Parse ``key = value`` lines into a ``{key: raw string}`` dict."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in KEYS and key not in ("seed", "out"):
            raise ConfigError(f"{source}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def build_config(values=None, base=None):
    """Apply ``{key: value}`` overrides (strings or typed) to ``base`` and validate."""
    cfg = base or WorkbenchConfig()
    values = dict(values or {})
    updates = {s: {} for s in SECTIONS}
    top = {}
    for key, value in values.items():
        if key == "seed":
            try:
                top["seed"] = int(value)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for seed: {value!r}") from None
        elif key == "out":
            top["out"] = str(value)
        elif key in KEYS:
            section, f = KEYS[key]
            updates[section][key] = _convert(section, f, value) if isinstance(value, str) else value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    sections = {}
    for section, upd in updates.items():
        if upd:
            try:
                sections[section] = replace(getattr(cfg, section), **upd)
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"invalid {section} settings: {exc}") from None
    return replace(cfg, **sections, **top)


def load_config(path=None, overrides=None):
    values = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {p}: {exc}") from None
        values.update(parse_config(text, str(p)))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_config(values)


def dump_config(cfg: WorkbenchConfig):
    """Render ``cfg`` in the flat file format (round-trips through :func:`load_config`)."""
    lines = [f"seed = {cfg.seed}", f"out = {cfg.out}"]
    for section in SECTIONS:
        lines.append(f"# {section}")
        obj = getattr(cfg, section)
        for f in fields(obj):
            if (section, f.name) in _HIDDEN:
                continue
            v = getattr(obj, f.name)
            if isinstance(v, tuple):
                v = ", ".join(repr(x) for x in v)
            lines.append(f"{f.name} = {v!r}" if isinstance(v, float) else f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
